#ifndef MIXLAB_GENERALIZATION_HPP
#define MIXLAB_GENERALIZATION_HPP

#include "mixlab/data.hpp"
#include "mixlab/losses.hpp"
#include "mixlab/models.hpp"

namespace mixlab {

struct RademacherEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    int n_draws = 0;
};

/// Monte Carlo over sign vectors of
///   sup_{||v|| <= B} (1/n) sum_i xi_i v^T x_i = B ||(1/n) sum_i xi_i x_i||.
RademacherEstimate estimate_rademacher_ball(const Dataset& ds, double radius_b,
                                            int n_draws, std::uint64_t seed);

/// max{(gamma/rho)^(1/4), (gamma/rho)^(1/2)} * sqrt(rank / n).
double rademacher_bound_glm(double gamma, double rho, std::size_t rank_sigma,
                            std::size_t n);

/// Sampled-direction estimate of the retentiveness constant
///   inf_v [E_x h''(x^T v)]^2 / min{1, E_x (v^T x)^2},
/// over unit and log-uniformly scaled directions, clamped into (0, 1/2].
/// A sampled infimum only upper-estimates the true rho and is labeled as
/// such wherever it is reported.
double estimate_rho(const Dataset& ds, const LossFamily& fam, int v_draws,
                    std::uint64_t seed);

/// std_train_loss + 2 L L_A bound_glm(...) + B sqrt(log(1/delta) / 2n).
/// delta = 1 is accepted and zeroes the tail term.
double generalization_bound_glm(double std_train_loss, double gamma, double rho,
                                std::size_t rank_sigma, std::size_t n,
                                double lipschitz_l, double lipschitz_la,
                                double bound_b, double delta);

struct HiddenFeatureStats {
    Mat sigma_cov;            // covariance of relu(W x_i)
    Vec sigma_mean;
    std::size_t rank = 0;     // numerical rank at 1e-10 * max eigenvalue
    double mu_pullback_sq = 0.0;  // mu^T Sigma^dagger mu over the numerical range
    bool mu_outside_range = false;
};

HiddenFeatureStats hidden_feature_stats(const TwoLayerNet& net, const Dataset& ds);

/// 2 sqrt(gamma (rank + mu_pullback_sq) / n).
double rademacher_bound_net(double gamma, const HiddenFeatureStats& stats,
                            std::size_t n);

double generalization_gap(const Model& m, const LossFamily& fam,
                          const Dataset& train, const Dataset& test);

/// Numerical rank of a symmetric PSD matrix at 1e-10 * top eigenvalue.
std::size_t numerical_rank(const Mat& sym);

/// Rows whitened by Sigma_hat^{-1/2} restricted to the numerical range;
/// used to realize the constraint ||Sigma^{1/2} theta||^2 <= radius as a
/// plain euclidean ball.
Dataset whiten_inputs(const Dataset& ds);

}  // namespace mixlab

#endif
