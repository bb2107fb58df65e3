#include "mixlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mixlab/errors.hpp"

namespace mixlab {

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    if (x.size() != y.size()) throw DimensionMismatch("axpy: size mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

Vec matvec(const Mat& m, std::span<const double> x) {
    if (x.size() != m.cols) throw DimensionMismatch("matvec: size mismatch");
    Vec out(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) out[i] = dot(m.row(i), x);
    return out;
}

Vec mat_tvec(const Mat& m, std::span<const double> x) {
    if (x.size() != m.rows) throw DimensionMismatch("mat_tvec: size mismatch");
    Vec out(m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) axpy(x[i], m.row(i), out);
    return out;
}

double quadform(const Mat& a, std::span<const double> v) {
    if (a.rows != a.cols || v.size() != a.rows)
        throw DimensionMismatch("quadform: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i) s += v[i] * dot(a.row(i), v);
    return s;
}

Vec add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("add: size mismatch");
    Vec out(a);
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

Vec sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("sub: size mismatch");
    Vec out(a);
    for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    return out;
}

Vec scale(double a, const Vec& x) {
    Vec out(x);
    for (double& v : out) v *= a;
    return out;
}

EighResult jacobi_eigh(Mat a) {
    if (a.rows != a.cols) throw DimensionMismatch("jacobi_eigh: not square");
    const std::size_t n = a.rows;
    Mat v(n, n);
    for (std::size_t i = 0; i < n; ++i) v.at(i, i) = 1.0;

    auto offdiag = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += a.at(i, j) * a.at(i, j);
        return s;
    };

    double scale0 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            scale0 = std::max(scale0, std::abs(a.at(i, j)));
    const double tol = 1e-30 * std::max(1.0, scale0 * scale0) * double(n * n);

    for (int sweep = 0; sweep < 200 && offdiag() > tol; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a.at(p, q);
                if (apq == 0.0) continue;
                const double app = a.at(p, p);
                const double aqq = a.at(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0)
                                     ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                     : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a.at(k, p);
                    const double akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * akq;
                    a.at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a.at(p, k);
                    const double aqk = a.at(q, k);
                    a.at(p, k) = c * apk - s * aqk;
                    a.at(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v.at(k, p);
                    const double vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - s * vkq;
                    v.at(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a.at(i, i) < a.at(j, j); });

    EighResult out;
    out.values.resize(n);
    out.vectors = Mat(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a.at(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) out.vectors.at(i, j) = v.at(i, order[j]);
    }
    return out;
}

}  // namespace mixlab
