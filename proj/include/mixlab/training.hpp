#ifndef MIXLAB_TRAINING_HPP
#define MIXLAB_TRAINING_HPP

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "mixlab/data.hpp"
#include "mixlab/losses.hpp"
#include "mixlab/models.hpp"

namespace mixlab {

enum class Objective { erm, mixup_mc, mixup_approx, manifold_mixup_approx };

const char* to_string(Objective o);
Objective objective_from_string(const std::string& s);

struct TrainConfig {
    double learning_rate = 0.1;
    double momentum = 0.9;
    int epochs = 400;
    int batch_size = 64;
    double weight_decay = 0.0;
    std::uint64_t seed = 0;
    Objective objective = Objective::erm;
    MixupConfig mixup{};
    int log_every = 1;
    int eval_mc_draws = 200;  // replicates behind logged mixup_mc loss values
};

struct EpochRecord {
    int epoch = 0;
    double train_loss = 0.0;  // under the model's own objective
    double test_loss = 0.0;
    double train_accuracy = 0.0;
    double r_min = 0.0;
    std::array<double, 11> r_deciles{};  // percentiles 0,10,...,100 of R_i
    std::optional<LossBreakdown> breakdown;
    std::optional<MonteCarloEstimate> mix_mc;
};

struct MetricLog {
    std::vector<EpochRecord> rows;
    std::optional<int> first_full_accuracy_epoch;
};

/// velocity' = momentum*velocity + gradient + weight_decay*params;
/// params' = params - lr*velocity'. The gradient enters the velocity before
/// the learning-rate scaling; this variant is fixed so trajectories stay
/// comparable across runs.
void sgd_step(Model& m, const Vec& gradient, Vec& velocity, double learning_rate,
              double momentum, double weight_decay);

struct TrainResult {
    Model model;
    MetricLog log;
};

using LogCallback = std::function<void(int epoch, const Model& m)>;

/// Minibatch SGD on the selected objective. Shuffling, mixup pairing and
/// lambda draws run on separate substreams of cfg.seed, so the lambda==1
/// test hook reproduces the ERM trajectory bit-exactly. The closed-form
/// objectives (mixup_approx, manifold) use full-training-set input moments
/// with per-batch point sums.
TrainResult train(const Model& model_init, const LossFamily& fam,
                  const Dataset& train_set, const Dataset* test_set,
                  const TrainConfig& cfg, const LogCallback& on_log = nullptr);

/// A differentiable training objective: closed-form value and analytic
/// gradient over a fixed batch (plus fixed full-set statistics).
struct ObjectiveEval {
    std::function<double(const Model&)> value;
    std::function<Vec(const Model&)> grad;
    std::string name;
};

ObjectiveEval make_erm_objective(const LossFamily& fam, Mat batch_x, Vec batch_y);

/// Quadratic mixup approximation (standard + R1 + R2 + R3) with input
/// moments xbar/s2 held fixed; gradients differentiate through h', h''.
ObjectiveEval make_mixup_approx_objective(const LossFamily& fam, Mat batch_x,
                                          Vec batch_y, Vec xbar, Mat s2,
                                          const LambdaMixture& mix);

/// Centered GLM objective: standard loss plus
/// (1/2n)[sum h''] E[(1-l)^2/l^2] theta^T Sigma theta over the full dataset.
ObjectiveEval make_glm_regularized_objective(const LossFamily& fam,
                                             const Dataset& centered_ds,
                                             const LambdaMixture& mix);

/// Batch standard loss plus the manifold-mixup regularizer computed on the
/// full set of hidden features.
ObjectiveEval make_manifold_objective(const LossFamily& fam, Mat batch_x,
                                      Vec batch_y, const Dataset& full_set,
                                      const LambdaMixture& mix);

/// Streams a metric log to CSV, one row per logged epoch. Columns:
/// epoch,train_loss,test_loss,train_accuracy,r_min,r_q0..r_q100 (the 11
/// decile points of the per-point cosines), then the breakdown columns of
/// breakdown_csv_row; cells that do not apply to the objective stay empty.
void write_metric_log_csv(const MetricLog& log, const std::string& path);

struct FiniteDiffResult {
    double max_rel_err = 0.0;
    int checked = 0;
    int excluded_unstable = 0;
};

/// Central-difference check of the evaluator's analytic gradient. For nets,
/// coordinates whose +/-step probes flip any activation pattern on
/// pattern_probe rows are excluded and counted instead of checked.
FiniteDiffResult finite_diff_check(const Model& m, const ObjectiveEval& eval,
                                   double step,
                                   const Mat* pattern_probe = nullptr);

}  // namespace mixlab

#endif
