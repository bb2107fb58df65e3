#include "mixlab/distributions.hpp"

#include <cmath>

#include "mixlab/errors.hpp"

namespace mixlab {

void validate(const BetaParams& p) {
    if (!(p.alpha > 0.0) || !(p.beta > 0.0))
        throw InvalidParameter("BetaParams: alpha and beta must be positive");
}

LambdaMixture derive_mixture(const BetaParams& params) {
    validate(params);
    LambdaMixture mix;
    mix.base = params;
    mix.component_a = {params.alpha + 1.0, params.beta};
    mix.component_b = {params.beta + 1.0, params.alpha};
    mix.weight_a = params.alpha / (params.alpha + params.beta);
    return mix;
}

double sample_beta(const BetaParams& params, RngStream& rng) {
    validate(params);
    const double x = rng.gamma(params.alpha);
    const double y = rng.gamma(params.beta);
    const double s = x + y;
    if (s <= 0.0) return 0.5;  // only reachable through double underflow
    return x / s;
}

double sample_mixture(const LambdaMixture& mix, RngStream& rng) {
    const BetaParams& c =
        rng.bernoulli(mix.weight_a) ? mix.component_a : mix.component_b;
    return sample_beta(c, rng);
}

double beta_one_minus_power_moment(double a, double b, int k) {
    // E[(1-l)^k] = B(a, b+k) / B(a, b)
    return std::exp(std::lgamma(b + k) - std::lgamma(b) + std::lgamma(a + b) -
                    std::lgamma(a + b + k));
}

double moment_one_minus_lambda(const LambdaMixture& mix) {
    const double a = mix.base.alpha;
    const double b = mix.base.beta;
    return 2.0 * a * b / ((a + b) * (a + b + 1.0));
}

double moment_one_minus_lambda_sq(const LambdaMixture& mix) {
    const double ma = beta_one_minus_power_moment(mix.component_a.alpha,
                                                  mix.component_a.beta, 2);
    const double mb = beta_one_minus_power_moment(mix.component_b.alpha,
                                                  mix.component_b.beta, 2);
    return mix.weight_a * ma + (1.0 - mix.weight_a) * mb;
}

namespace {

// E[(1-l)^2 / l^2] for l ~ Beta(a, b); requires a > 2.
double beta_ratio_sq_moment(double a, double b) {
    return std::exp(std::lgamma(a - 2.0) - std::lgamma(a) + std::lgamma(b + 2.0) -
                    std::lgamma(b));
}

}  // namespace

double moment_ratio_sq(const LambdaMixture& mix) {
    const double amin = std::min(mix.base.alpha, mix.base.beta);
    if (!(amin > 1.0))
        throw NonFiniteMoment(
            "E[(1-lambda)^2/lambda^2] diverges unless min(alpha, beta) > 1");
    const double ma =
        beta_ratio_sq_moment(mix.component_a.alpha, mix.component_a.beta);
    const double mb =
        beta_ratio_sq_moment(mix.component_b.alpha, mix.component_b.beta);
    return mix.weight_a * ma + (1.0 - mix.weight_a) * mb;
}

}  // namespace mixlab
