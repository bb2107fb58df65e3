#ifndef MIXLAB_MODELS_HPP
#define MIXLAB_MODELS_HPP

#include <cstdint>
#include <string>
#include <variant>

#include "mixlab/linalg.hpp"

namespace mixlab {

/// Losses of the form h(f(x)) - y*f(x). The squared family uses
/// h(z) = z^2/2, whose loss differs from (y-z)^2/2 only by the
/// theta-independent constant y^2/2. h''' is carried because gradients of
/// the regularized objectives differentiate through h''.
struct LossFamily {
    enum class Kind { logistic, squared };
    Kind kind = Kind::logistic;

    double h(double z) const;
    double h_prime(double z) const;          // logistic: g(z) = e^z/(1+e^z)
    double h_double_prime(double z) const;   // logistic: g(1-g)
    double h_triple_prime(double z) const;   // logistic: g(1-g)(1-2g)

    const char* name() const {
        return kind == Kind::logistic ? "logistic" : "squared";
    }
    static LossFamily logistic() { return {Kind::logistic}; }
    static LossFamily squared() { return {Kind::squared}; }
};

/// f(x) = theta^T x
struct LinearModel {
    Vec theta;
};

/// f(x) = theta1^T relu(W x) + theta0. Theorem checks require
/// bias_enabled = false so that f(x) = grad_f(x)^T x holds exactly.
struct TwoLayerNet {
    Mat W;            // hidden x p
    Vec theta1;       // hidden
    double theta0 = 0.0;
    bool bias_enabled = true;

    std::size_t hidden() const { return theta1.size(); }
    std::size_t input_dim() const { return W.cols; }
};

using Model = std::variant<LinearModel, TwoLayerNet>;

double predict(const Model& m, std::span<const double> x);

/// Gradient with respect to the input; ReLU uses the subgradient
/// convention 1{z > 0} (value 0 exactly at the boundary). When
/// at_boundary is non-null it is set if some hidden pre-activation is
/// exactly zero.
Vec grad_input(const Model& m, std::span<const double> x,
               bool* at_boundary = nullptr);

/// v^T grad^2 f(x) v. Identically zero for both model families (linear and
/// piecewise-linear scorers) away from activation boundaries.
double hessian_input_quadform(const Model& m, std::span<const double> x,
                              std::span<const double> v);

/// Analytic gradient of the mean pointwise loss over the batch, flattened
/// to the parameter layout of params_flat.
Vec grad_params(const Model& m, const LossFamily& fam, const Mat& batch_x,
                const Vec& batch_y);

/// Flat parameter layout: linear = theta; net = [W row-major, theta1, theta0].
Vec params_flat(const Model& m);
void set_params_flat(Model& m, const Vec& flat);
std::size_t param_count(const Model& m);

/// Gaussian init, sd 1/sqrt(fan-in), seeded.
LinearModel init_linear(std::size_t p, std::uint64_t seed);
TwoLayerNet init_net(std::size_t hidden, std::size_t p, bool bias_enabled,
                     std::uint64_t seed);

void save_checkpoint(const Model& m, const std::string& path,
                     std::uint64_t seed = 0,
                     const std::string& note = std::string());
Model load_checkpoint(const std::string& path);

}  // namespace mixlab

#endif
