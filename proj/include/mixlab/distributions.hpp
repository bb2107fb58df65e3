#ifndef MIXLAB_DISTRIBUTIONS_HPP
#define MIXLAB_DISTRIBUTIONS_HPP

#include "mixlab/rng.hpp"

namespace mixlab {

struct BetaParams {
    double alpha = 1.0;
    double beta = 1.0;
};

void validate(const BetaParams& p);

/// The lambda mixture induced by mixup with Beta(alpha, beta):
///   weight_a * Beta(alpha+1, beta) + (1 - weight_a) * Beta(beta+1, alpha)
/// with weight_a = alpha / (alpha + beta). Components and weight are
/// deterministic functions of the base parameters.
struct LambdaMixture {
    BetaParams base;
    BetaParams component_a;
    BetaParams component_b;
    double weight_a = 0.5;
};

LambdaMixture derive_mixture(const BetaParams& params);

/// One draw from Beta(alpha, beta) via the two-Gamma ratio construction.
double sample_beta(const BetaParams& params, RngStream& rng);

double sample_mixture(const LambdaMixture& mix, RngStream& rng);

/// E[(1-lambda)^k] for lambda ~ Beta(a, b); evaluated in log-Gamma space.
double beta_one_minus_power_moment(double a, double b, int k);

/// E[1-lambda] under the mixture; closed form 2ab/((a+b)(a+b+1)).
double moment_one_minus_lambda(const LambdaMixture& mix);

/// E[(1-lambda)^2] under the mixture.
double moment_one_minus_lambda_sq(const LambdaMixture& mix);

/// E[(1-lambda)^2 / lambda^2] under the mixture. Finite only when
/// min(alpha, beta) > 1; throws NonFiniteMoment otherwise, because a
/// Monte Carlo stand-in for the divergent integral would silently corrupt
/// every downstream regularizer.
double moment_ratio_sq(const LambdaMixture& mix);

}  // namespace mixlab

#endif
