#ifndef MIXLAB_LINALG_HPP
#define MIXLAB_LINALG_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace mixlab {

using Vec = std::vector<double>;

/// Dense row-major matrix; just enough linear algebra for this project.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    Vec data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data.data() + i * cols, cols};
    }
    std::span<double> row(std::size_t i) {
        return {data.data() + i * cols, cols};
    }
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// y += a*x
void axpy(double a, std::span<const double> x, std::span<double> y);

Vec matvec(const Mat& m, std::span<const double> x);   // m * x
Vec mat_tvec(const Mat& m, std::span<const double> x); // m^T * x

/// v^T A v for symmetric A.
double quadform(const Mat& a, std::span<const double> v);

Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(double a, const Vec& x);

struct EighResult {
    Vec values;   // ascending
    Mat vectors;  // columns are eigenvectors
};

/// Cyclic Jacobi eigendecomposition for symmetric matrices.
EighResult jacobi_eigh(Mat a);

}  // namespace mixlab

#endif
