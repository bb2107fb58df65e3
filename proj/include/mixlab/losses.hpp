#ifndef MIXLAB_LOSSES_HPP
#define MIXLAB_LOSSES_HPP

#include <cstdint>

#include "mixlab/data.hpp"
#include "mixlab/distributions.hpp"
#include "mixlab/models.hpp"

namespace mixlab {

enum class PairStrategy { all_pairs, sampled_pairs };

struct MixupConfig {
    BetaParams beta_params{1.0, 1.0};
    int lambda_draws = 100;      // lambda replicates per pair sweep
    PairStrategy pair_strategy = PairStrategy::all_pairs;
    int sampled_pair_count = 0;  // pairs per replicate when sampling
    std::uint64_t seed = 0;
    bool force_lambda_one = false;  // degenerate test hook; mixing disabled
};

/// Eq-style decomposition of the quadratic mixup approximation. total is
/// computed as the literal sum of the four parts.
struct LossBreakdown {
    double standard = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
    double total = 0.0;
};

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

double pointwise_loss(const LossFamily& fam, double score, double y);

double empirical_loss(const Model& m, const LossFamily& fam, const Dataset& ds);

/// Fraction of points with sign-correct prediction (y_hat = 1{f >= 0}).
double accuracy(const Model& m, const Dataset& ds);

/// Monte Carlo estimate of the pairwise mixup loss
/// (1/n^2) sum_{i,j} E_{lambda~Beta} l(theta, lambda z_i + (1-lambda) z_j).
/// Each replicate sweeps all pairs (or a sampled subset) with fresh lambdas;
/// the standard error comes from the replicate means.
MonteCarloEstimate mixup_loss_mc(const Model& m, const LossFamily& fam,
                                 const Dataset& ds, const MixupConfig& cfg);

/// Monte Carlo estimate of the resampled form
/// (1/n) sum_i E_{lambda~mix} E_{r~inputs} l(theta, (lambda x_i + (1-lambda) r, y_i)),
/// which equals the pairwise loss by the Beta-Bernoulli conjugacy rewrite.
MonteCarloEstimate mixup_loss_resampled(const Model& m, const LossFamily& fam,
                                        const Dataset& ds, const LambdaMixture& mix,
                                        int draws, std::uint64_t seed,
                                        bool force_lambda_one = false);

/// Closed-form quadratic approximation of the mixup loss with the empirical
/// input distribution: standard + R1 + R2 + R3 (the o((1-lambda)^2)
/// remainder is dropped).
LossBreakdown approx_mixup_loss(const Model& m, const LossFamily& fam,
                                const Dataset& ds, const LambdaMixture& mix);

/// GLM specialization on centered data:
/// (1/2n)[sum_i h''(theta^T x_i)] * E[(1-l)^2/l^2] * theta^T Sigma_hat theta
/// with Sigma_hat = (1/n) sum x_i x_i^T.
double glm_regularizer(const LinearModel& m, const LossFamily& fam,
                       const Dataset& ds, const LambdaMixture& mix);

/// Manifold-mixup regularizer, exactly as printed:
/// E[(1-l)^2/l^2] * theta1^T SigmaHat_sigma theta1 where SigmaHat_sigma is
/// the (1/n, mean-subtracted) covariance of the hidden features relu(W x_i).
/// No 1/2 and no h'' factor; the squared-loss convention (y-f)^2 of the
/// printed form differs from the h(z)=z^2/2 representation by a factor 2
/// which is documented, not folded in.
double manifold_mixup_regularizer(const TwoLayerNet& net, const Dataset& ds,
                                  const LambdaMixture& mix);

/// (1/n) sum_i x_i x_i^T
Mat input_second_moment(const Dataset& ds);
Vec input_mean_vector(const Dataset& ds);

/// Mean-subtracted covariance (1/n) of the rows of features.
Mat row_covariance(const Mat& features);

void require_centered(const Dataset& ds, double tol = 1e-10);

/// One CSV row per logged breakdown:
/// epoch,standard,r1,r2,r3,total,mix_mc_estimate,mix_mc_stderr
/// (the MC columns stay empty when no estimate accompanies the row).
std::string breakdown_csv_header();
std::string breakdown_csv_row(int epoch, const LossBreakdown& b,
                              const MonteCarloEstimate* mc = nullptr);

}  // namespace mixlab

#endif
