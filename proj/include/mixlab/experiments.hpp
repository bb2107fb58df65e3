#ifndef MIXLAB_EXPERIMENTS_HPP
#define MIXLAB_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "mixlab/adversarial.hpp"
#include "mixlab/data.hpp"
#include "mixlab/theorems.hpp"
#include "mixlab/training.hpp"

namespace mixlab {

/// Gaussian inputs centered exactly, then labeled by the sign of the
/// generating direction on the centered inputs, so the data is separable
/// through the origin and satisfies the centering precondition of the
/// theorem checks at the same time.
Dataset make_centered_halfspace(std::size_t n, std::size_t d, std::uint64_t seed);

// -------------------------------------- mixup loss vs approximation

struct ValidateApproxConfig {
    std::size_t n_train = 200;
    std::size_t n_test = 200;
    double noise_sd = 0.1;
    double alpha = 1.0;
    double beta = 1.0;
    int epochs = 400;
    int batch_size = 64;
    int log_every = 20;
    double learning_rate = 0.1;
    double momentum = 0.9;
    std::uint64_t seed = 1;
    int mc_total_draws = 100000;  // pair evaluations per logged estimate
    std::size_t hidden = 16;
    bool run_linear = true;
    bool run_net = true;
};

struct ValidateApproxRow {
    std::string model;      // linear | net
    std::string objective;  // mixup_mc | mixup_approx
    int epoch = 0;
    double train_own = 0.0;
    double test_own = 0.0;
    double train_std = 0.0;
    double test_std = 0.0;
    double mc_estimate = 0.0;
    double mc_std_error = 0.0;
    double approx_total = 0.0;
    double r1 = 0.0, r2 = 0.0, r3 = 0.0;
    double gap = 0.0;  // |mc_estimate - approx_total| on the training set
};

struct ValidateApproxResult {
    std::vector<ValidateApproxRow> rows;
};

ValidateApproxResult run_validate_approx(const ValidateApproxConfig& cfg);

// ------------------------------- adversarial loss vs approximation

struct ValidateAdvApproxConfig {
    std::size_t n_train = 200;
    std::size_t n_test = 200;
    double noise_sd = 0.1;
    double alpha = 1.0;
    double beta = 1.0;
    int epochs = 400;
    int batch_size = 64;
    int log_every = 20;
    double learning_rate = 0.1;
    double momentum = 0.9;
    std::uint64_t seed = 1;
    double eta = 0.5;  // l2 attack size eps*sqrt(d)
};

struct ValidateAdvApproxRow {
    int epoch = 0;
    double eta = 0.0;
    double mean_exact = 0.0;  // closed-form l2 adversarial loss
    double mean_quad = 0.0;   // quadratic surrogate
    double mean_clean = 0.0;
    double rel_gap = 0.0;     // |exact - quad| / exact
};

struct ValidateAdvApproxResult {
    std::vector<ValidateAdvApproxRow> rows;
};

ValidateAdvApproxResult run_validate_adv_approx(const ValidateAdvApproxConfig& cfg);

// ------------------------------------------- robust accuracy sweep

struct RobustnessConfig {
    DataSource source = DataSource::gaussian_halfspace;
    std::size_t n = 100;
    std::size_t d = 10;            // gaussian_halfspace only
    double noise_sd = 0.1;         // two-moons only
    std::size_t hidden = 50;       // 0 trains a linear model instead
    Vec eps_grid{0.05, 0.1, 0.15, 0.2};
    int n_seeds = 5;
    std::uint64_t seed = 1;
    double alpha = 5.0;
    double beta = 0.5;
    int epochs = 400;
    int batch_size = 64;
    double learning_rate = 0.1;
    double momentum = 0.9;
};

struct RobustnessRow {
    std::uint64_t seed = 0;
    std::string objective;  // erm | mixup_mc
    double clean_train_accuracy = 0.0;
    double epsilon = 0.0;
    double accuracy = 0.0;
};

struct RobustnessResult {
    std::vector<RobustnessRow> rows;
    // per epsilon: mean accuracy over seeds for each objective
    Vec eps_grid;
    Vec mean_erm;
    Vec mean_mixup;
    bool all_clean_ok = false;  // both objectives >= 99% clean train accuracy
};

RobustnessResult run_robustness(const RobustnessConfig& cfg);

// ---------------------------------------- margin cosine tracking

struct TrackRConfig {
    std::size_t n = 100;
    std::size_t d = 10;
    int n_seeds = 5;
    std::uint64_t seed = 1;
    int epochs = 400;
    int batch_size = 64;
    double learning_rate = 0.1;
    double momentum = 0.9;
    std::size_t hidden = 50;
    bool run_linear = true;
    bool run_net = true;
    Objective objective = Objective::erm;  // weight decay stays 0 either way
    double alpha = 1.0;                    // mixup objectives only
    double beta = 1.0;
};

struct TrackRCurveRow {
    std::uint64_t seed = 0;
    std::string model;
    int epoch = 0;
    double r_min = 0.0;
    double train_accuracy = 0.0;
};

struct TrackRSummary {
    std::uint64_t seed = 0;
    std::string model;
    bool reached_full_accuracy = false;
    int first_full_accuracy_epoch = -1;
    double r_at_first_full = 0.0;
    double r_final = 0.0;
    double growth_ratio = 0.0;
    double frac_final_above_half = 0.0;  // fraction of final R_i > 0.5
};

struct TrackRRun {
    std::uint64_t seed = 0;
    std::string model_name;
    MetricLog log;
    Model final_model;
};

struct TrackRResult {
    std::vector<TrackRCurveRow> curves;
    std::vector<TrackRSummary> summaries;
    std::vector<TrackRRun> runs;
};

TrackRResult run_track_r(const TrackRConfig& cfg);

// ------------------------------------------------------- theorem trials

struct TheoremTrialConfig {
    int trials = 100;
    std::size_t n = 100;
    std::size_t d = 10;
    bool net = false;
    std::size_t hidden = 32;
    int max_epochs = 5000;  // small-margin draws can take a few thousand
    int batch_size = 64;
    double learning_rate = 0.1;
    double momentum = 0.9;
    double tolerance = 1e-9;
    std::uint64_t seed = 1;
};

struct TheoremTrialRow {
    std::uint64_t seed = 0;
    double alpha = 1.0;
    double beta = 1.0;
    int epochs_to_theta = -1;  // -1 when the budget ran out
    TheoremReport report;
};

struct TheoremTrialResult {
    std::vector<TheoremTrialRow> rows;
    bool all_hold = false;
};

TheoremTrialResult run_theorem_trials(const TheoremTrialConfig& cfg);

// ------------------------------------------- generalization gap

struct GenGapConfig {
    std::size_t n_train = 50;
    std::size_t n_test = 500;
    double noise_sd = 0.1;
    std::size_t hidden = 50;
    int n_seeds = 10;
    std::uint64_t seed = 1;
    double alpha = 1.0;
    double beta = 1.0;
    int epochs = 400;
    int batch_size = 64;
    double learning_rate = 0.1;
    double momentum = 0.9;
};

struct GenGapRow {
    std::uint64_t seed = 0;
    std::string objective;
    double train_loss = 0.0;
    double test_loss = 0.0;
    double gap = 0.0;
};

struct GenGapResult {
    std::vector<GenGapRow> rows;
    double mean_gap_erm = 0.0;
    double mean_gap_mixup = 0.0;
};

GenGapResult run_gen_gap(const GenGapConfig& cfg);

// --------------------------------------------------- rademacher bounds

struct RademacherTableConfig {
    int n_configs = 20;
    int mc_draws = 2000;
    int rho_draws = 64;
    std::uint64_t seed = 1;
    std::size_t net_hidden = 16;
    std::size_t net_n = 100;
    std::size_t net_d = 6;
};

struct RademacherRow {
    double gamma = 0.0;
    double rho_hat = 0.0;
    std::size_t rank = 0;
    std::size_t n = 0;
    double bound_glm = 0.0;
    double rad_mc_mean = 0.0;
    double rad_mc_se = 0.0;
    double bound_net = 0.0;  // NaN on linear rows
    bool sound = false;      // mc mean <= bound + 3 se
};

struct RademacherTableResult {
    std::vector<RademacherRow> rows;
    bool all_sound = false;
};

RademacherTableResult run_rademacher_table(const RademacherTableConfig& cfg);

}  // namespace mixlab

#endif
