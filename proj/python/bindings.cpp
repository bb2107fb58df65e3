// Python bindings for the core operations: datasets, models, losses,
// attacks, theorem checks, complexity bounds and training.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <variant>

#include "mixlab/adversarial.hpp"
#include "mixlab/data.hpp"
#include "mixlab/distributions.hpp"
#include "mixlab/errors.hpp"
#include "mixlab/experiments.hpp"
#include "mixlab/generalization.hpp"
#include "mixlab/losses.hpp"
#include "mixlab/models.hpp"
#include "mixlab/theorems.hpp"
#include "mixlab/training.hpp"

namespace py = pybind11;
using namespace mixlab;

namespace {

Mat mat_from_rows(const std::vector<Vec>& rows) {
    Mat m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols)
            throw DimensionMismatch("ragged input rows");
        std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return m;
}

std::vector<Vec> rows_from_mat(const Mat& m) {
    std::vector<Vec> rows(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        rows[i].assign(m.row(i).begin(), m.row(i).end());
    return rows;
}

LossFamily family_from_name(const std::string& name) {
    if (name == "logistic") return LossFamily::logistic();
    if (name == "squared") return LossFamily::squared();
    throw InvalidParameter("unknown loss family '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_mixlab, m) {
    m.doc() = "mixup regularization, robustness and generalization lab";

    py::register_exception<Error>(m, "MixlabError");

    // ---------------------------------------------------------- distributions
    py::class_<BetaParams>(m, "BetaParams")
        .def(py::init<double, double>(), py::arg("alpha"), py::arg("beta"))
        .def_readwrite("alpha", &BetaParams::alpha)
        .def_readwrite("beta", &BetaParams::beta);

    py::class_<LambdaMixture>(m, "LambdaMixture")
        .def_readonly("base", &LambdaMixture::base)
        .def_readonly("component_a", &LambdaMixture::component_a)
        .def_readonly("component_b", &LambdaMixture::component_b)
        .def_readonly("weight_a", &LambdaMixture::weight_a);

    m.def("derive_mixture", &derive_mixture, py::arg("params"));
    m.def(
        "sample_beta",
        [](const BetaParams& p, std::uint64_t seed, int n) {
            RngStream rng(seed);
            Vec out(static_cast<std::size_t>(n));
            for (double& v : out) v = sample_beta(p, rng);
            return out;
        },
        py::arg("params"), py::arg("seed"), py::arg("n") = 1);
    m.def(
        "sample_mixture",
        [](const LambdaMixture& mix, std::uint64_t seed, int n) {
            RngStream rng(seed);
            Vec out(static_cast<std::size_t>(n));
            for (double& v : out) v = sample_mixture(mix, rng);
            return out;
        },
        py::arg("mix"), py::arg("seed"), py::arg("n") = 1);
    m.def("moment_one_minus_lambda", &moment_one_minus_lambda, py::arg("mix"));
    m.def("moment_one_minus_lambda_sq", &moment_one_minus_lambda_sq,
          py::arg("mix"));
    m.def("moment_ratio_sq", &moment_ratio_sq, py::arg("mix"));

    // ------------------------------------------------------------------ data
    py::class_<Dataset>(m, "Dataset")
        .def_property_readonly("inputs",
                               [](const Dataset& ds) { return rows_from_mat(ds.inputs); })
        .def_readonly("targets", &Dataset::targets)
        .def_readonly("centered", &Dataset::centered)
        .def_readonly("input_mean", &Dataset::input_mean)
        .def_readonly("seed", &Dataset::seed)
        .def_property_readonly("theta_star",
                               [](const Dataset& ds) { return ds.theta_star; })
        .def_property_readonly("n", &Dataset::size)
        .def_property_readonly("dim", &Dataset::dim);

    m.def("gen_two_moons", &gen_two_moons, py::arg("n"), py::arg("noise_sd"),
          py::arg("seed"));
    m.def("gen_gaussian_halfspace", &gen_gaussian_halfspace, py::arg("n"),
          py::arg("d"), py::arg("seed"));
    m.def("make_centered_halfspace", &make_centered_halfspace, py::arg("n"),
          py::arg("d"), py::arg("seed"));
    m.def("center", &center, py::arg("dataset"));
    m.def("split", &split, py::arg("dataset"), py::arg("train_fraction"),
          py::arg("seed"));
    m.def("save_csv", &save_csv, py::arg("dataset"), py::arg("path"));
    m.def("load_csv", &load_csv, py::arg("path"));
    m.def(
        "dataset_from",
        [](const std::vector<Vec>& inputs, const Vec& targets) {
            Dataset ds;
            ds.inputs = mat_from_rows(inputs);
            ds.targets = targets;
            if (ds.targets.size() != ds.inputs.rows)
                throw DimensionMismatch("targets length mismatch");
            return ds;
        },
        py::arg("inputs"), py::arg("targets"));

    // ---------------------------------------------------------------- models
    py::class_<LinearModel>(m, "LinearModel")
        .def(py::init([](Vec theta) { return LinearModel{std::move(theta)}; }),
             py::arg("theta"))
        .def_readwrite("theta", &LinearModel::theta);

    py::class_<TwoLayerNet>(m, "TwoLayerNet")
        .def_property_readonly(
            "W", [](const TwoLayerNet& net) { return rows_from_mat(net.W); })
        .def_readwrite("theta1", &TwoLayerNet::theta1)
        .def_readwrite("theta0", &TwoLayerNet::theta0)
        .def_readwrite("bias_enabled", &TwoLayerNet::bias_enabled);

    m.def("init_linear", &init_linear, py::arg("p"), py::arg("seed"));
    m.def("init_net", &init_net, py::arg("hidden"), py::arg("p"),
          py::arg("bias_enabled"), py::arg("seed"));
    m.def("predict", [](const Model& model, const Vec& x) {
        return predict(model, x);
    });
    m.def("grad_input", [](const Model& model, const Vec& x) {
        return grad_input(model, x);
    });
    m.def("hessian_input_quadform",
          [](const Model& model, const Vec& x, const Vec& v) {
              return hessian_input_quadform(model, x, v);
          });
    m.def("grad_params",
          [](const Model& model, const std::string& family,
             const std::vector<Vec>& xs, const Vec& ys) {
              return grad_params(model, family_from_name(family),
                                 mat_from_rows(xs), ys);
          });
    m.def("params_flat", [](const Model& model) { return params_flat(model); });
    m.def("save_checkpoint",
          [](const Model& model, const std::string& path, std::uint64_t seed,
             const std::string& note) { save_checkpoint(model, path, seed, note); },
          py::arg("model"), py::arg("path"), py::arg("seed") = 0,
          py::arg("note") = "");
    m.def("load_checkpoint", &load_checkpoint, py::arg("path"));

    // ---------------------------------------------------------------- losses
    py::class_<MixupConfig>(m, "MixupConfig")
        .def(py::init<>())
        .def_readwrite("beta_params", &MixupConfig::beta_params)
        .def_readwrite("lambda_draws", &MixupConfig::lambda_draws)
        .def_readwrite("sampled_pair_count", &MixupConfig::sampled_pair_count)
        .def_readwrite("seed", &MixupConfig::seed)
        .def_readwrite("force_lambda_one", &MixupConfig::force_lambda_one)
        .def_property(
            "pair_strategy",
            [](const MixupConfig& c) {
                return c.pair_strategy == PairStrategy::all_pairs ? "all_pairs"
                                                                  : "sampled_pairs";
            },
            [](MixupConfig& c, const std::string& s) {
                c.pair_strategy = s == "all_pairs" ? PairStrategy::all_pairs
                                                   : PairStrategy::sampled_pairs;
            });

    py::class_<LossBreakdown>(m, "LossBreakdown")
        .def_readonly("standard", &LossBreakdown::standard)
        .def_readonly("r1", &LossBreakdown::r1)
        .def_readonly("r2", &LossBreakdown::r2)
        .def_readonly("r3", &LossBreakdown::r3)
        .def_readonly("total", &LossBreakdown::total);

    py::class_<MonteCarloEstimate>(m, "MonteCarloEstimate")
        .def_readonly("estimate", &MonteCarloEstimate::estimate)
        .def_readonly("std_error", &MonteCarloEstimate::std_error);

    m.def("pointwise_loss",
          [](const std::string& family, double score, double y) {
              return pointwise_loss(family_from_name(family), score, y);
          });
    m.def("empirical_loss",
          [](const Model& model, const std::string& family, const Dataset& ds) {
              return empirical_loss(model, family_from_name(family), ds);
          });
    m.def("accuracy", [](const Model& model, const Dataset& ds) {
        return accuracy(model, ds);
    });
    m.def("mixup_loss_mc",
          [](const Model& model, const std::string& family, const Dataset& ds,
             const MixupConfig& cfg) {
              return mixup_loss_mc(model, family_from_name(family), ds, cfg);
          });
    m.def("mixup_loss_resampled",
          [](const Model& model, const std::string& family, const Dataset& ds,
             const LambdaMixture& mix, int draws, std::uint64_t seed,
             bool force_lambda_one) {
              return mixup_loss_resampled(model, family_from_name(family), ds, mix,
                                          draws, seed, force_lambda_one);
          },
          py::arg("model"), py::arg("family"), py::arg("dataset"), py::arg("mix"),
          py::arg("draws"), py::arg("seed"), py::arg("force_lambda_one") = false);
    m.def("approx_mixup_loss",
          [](const Model& model, const std::string& family, const Dataset& ds,
             const LambdaMixture& mix) {
              return approx_mixup_loss(model, family_from_name(family), ds, mix);
          });
    m.def("glm_regularizer",
          [](const LinearModel& model, const std::string& family,
             const Dataset& ds, const LambdaMixture& mix) {
              return glm_regularizer(model, family_from_name(family), ds, mix);
          });
    m.def("manifold_mixup_regularizer", &manifold_mixup_regularizer,
          py::arg("net"), py::arg("dataset"), py::arg("mix"));

    // ------------------------------------------------------------ adversarial
    m.def("fgsm_attack",
          [](const Model& model, const std::string& family, const Vec& x, double y,
             double epsilon) {
              return fgsm_attack(model, family_from_name(family), x, y, epsilon);
          });
    m.def("exact_l2_adv_loss_linear",
          [](const LinearModel& model, const Vec& x, double y, double eta) {
              return exact_l2_adv_loss_linear(model, LossFamily::logistic(), x, y,
                                              eta);
          });
    m.def("quad_adv_loss_glm",
          [](const LinearModel& model, const Vec& x, double y, double eta) {
              return quad_adv_loss_glm(model, x, y, eta);
          });
    m.def("quad_adv_loss_net",
          [](const TwoLayerNet& net, const Vec& x, double y, double eta) {
              return quad_adv_loss_net(net, x, y, eta);
          });
    m.def("pga_l2_adv_loss",
          [](const Model& model, const std::string& family, const Vec& x, double y,
             double eta) {
              return pga_l2_adv_loss(model, family_from_name(family), x, y, eta);
          });
    m.def("robust_accuracy",
          [](const Model& model, const std::string& family, const Dataset& ds,
             const Vec& epsilons, const std::string& method) {
              AttackConfig attack;
              if (method == "fgsm") {
                  attack.method = AttackMethod::fgsm;
                  attack.norm = AttackNorm::linf;
              } else if (method == "exact_l2_linear") {
                  attack.method = AttackMethod::exact_l2_linear;
                  attack.norm = AttackNorm::l2;
              } else if (method == "quad_approx") {
                  attack.method = AttackMethod::quad_approx;
                  attack.norm = AttackNorm::l2;
              } else {
                  throw InvalidParameter("unknown attack method '" + method + "'");
              }
              std::vector<std::pair<double, double>> out;
              for (const auto& p :
                   robust_accuracy(model, family_from_name(family), ds, epsilons,
                                   attack))
                  out.emplace_back(p.epsilon, p.accuracy);
              return out;
          },
          py::arg("model"), py::arg("family"), py::arg("dataset"),
          py::arg("epsilons"), py::arg("method") = "fgsm");

    // --------------------------------------------------------------- theorems
    py::class_<TheoremReport>(m, "TheoremReport")
        .def_readonly("in_theta", &TheoremReport::in_theta)
        .def_readonly("c_x", &TheoremReport::c_x)
        .def_readonly("radii", &TheoremReport::radii)
        .def_readonly("r_min", &TheoremReport::r_min)
        .def_readonly("eps_i", &TheoremReport::eps_i)
        .def_readonly("eps_mix", &TheoremReport::eps_mix)
        .def_readonly("lhs", &TheoremReport::lhs)
        .def_readonly("mid", &TheoremReport::mid)
        .def_readonly("rhs", &TheoremReport::rhs)
        .def_readonly("holds_chain", &TheoremReport::holds_chain)
        .def_readonly("tolerance", &TheoremReport::tolerance)
        .def("to_json", [](const TheoremReport& r) {
            return report_to_json(r).dump(2);
        });

    m.def("in_theta_region", [](const Model& model, const Dataset& ds) {
        return in_theta_region(model, ds);
    });
    m.def("cosine_radii", [](const Model& model, const Dataset& ds) {
        const CosineRadii r = cosine_radii(model, ds);
        return std::make_pair(r.radii, r.r_min);
    });
    m.def("check_theorem_linear",
          [](const LinearModel& model, const Dataset& ds, const LambdaMixture& mix,
             double tolerance) {
              return check_theorem_linear(model, LossFamily::logistic(), ds, mix,
                                          tolerance);
          },
          py::arg("model"), py::arg("dataset"), py::arg("mix"),
          py::arg("tolerance") = 1e-9);
    m.def("check_theorem_net",
          [](const TwoLayerNet& net, const Dataset& ds, const LambdaMixture& mix,
             double tolerance) {
              return check_theorem_net(net, LossFamily::logistic(), ds, mix,
                                       tolerance);
          },
          py::arg("net"), py::arg("dataset"), py::arg("mix"),
          py::arg("tolerance") = 1e-9);

    // ----------------------------------------------------------- generalization
    py::class_<RademacherEstimate>(m, "RademacherEstimate")
        .def_readonly("mean", &RademacherEstimate::mean)
        .def_readonly("std_error", &RademacherEstimate::std_error)
        .def_readonly("n_draws", &RademacherEstimate::n_draws);

    py::class_<HiddenFeatureStats>(m, "HiddenFeatureStats")
        .def_property_readonly(
            "sigma_cov",
            [](const HiddenFeatureStats& s) { return rows_from_mat(s.sigma_cov); })
        .def_readonly("sigma_mean", &HiddenFeatureStats::sigma_mean)
        .def_readonly("rank", &HiddenFeatureStats::rank)
        .def_readonly("mu_pullback_sq", &HiddenFeatureStats::mu_pullback_sq)
        .def_readonly("mu_outside_range", &HiddenFeatureStats::mu_outside_range);

    m.def("estimate_rademacher_ball", &estimate_rademacher_ball,
          py::arg("dataset"), py::arg("radius_b"), py::arg("n_draws"),
          py::arg("seed"));
    m.def("rademacher_bound_glm", &rademacher_bound_glm, py::arg("gamma"),
          py::arg("rho"), py::arg("rank_sigma"), py::arg("n"));
    m.def("estimate_rho",
          [](const Dataset& ds, const std::string& family, int v_draws,
             std::uint64_t seed) {
              return estimate_rho(ds, family_from_name(family), v_draws, seed);
          },
          py::arg("dataset"), py::arg("family"), py::arg("v_draws"),
          py::arg("seed"));
    m.def("generalization_bound_glm", &generalization_bound_glm,
          py::arg("std_train_loss"), py::arg("gamma"), py::arg("rho"),
          py::arg("rank_sigma"), py::arg("n"), py::arg("lipschitz_l") = 1.0,
          py::arg("lipschitz_la") = 1.0, py::arg("bound_b") = 1.0,
          py::arg("delta") = 0.05);
    m.def("hidden_feature_stats", &hidden_feature_stats, py::arg("net"),
          py::arg("dataset"));
    m.def("rademacher_bound_net", &rademacher_bound_net, py::arg("gamma"),
          py::arg("stats"), py::arg("n"));
    m.def("generalization_gap",
          [](const Model& model, const std::string& family, const Dataset& train,
             const Dataset& test) {
              return generalization_gap(model, family_from_name(family), train,
                                        test);
          });

    // --------------------------------------------------------------- training
    py::class_<EpochRecord>(m, "EpochRecord")
        .def_readonly("epoch", &EpochRecord::epoch)
        .def_readonly("train_loss", &EpochRecord::train_loss)
        .def_readonly("test_loss", &EpochRecord::test_loss)
        .def_readonly("train_accuracy", &EpochRecord::train_accuracy)
        .def_readonly("r_min", &EpochRecord::r_min)
        .def_property_readonly("r_deciles",
                               [](const EpochRecord& r) {
                                   return std::vector<double>(r.r_deciles.begin(),
                                                              r.r_deciles.end());
                               })
        .def_property_readonly("breakdown",
                               [](const EpochRecord& r) { return r.breakdown; })
        .def_property_readonly("mix_mc",
                               [](const EpochRecord& r) { return r.mix_mc; });

    py::class_<MetricLog>(m, "MetricLog")
        .def_readonly("rows", &MetricLog::rows)
        .def_property_readonly("first_full_accuracy_epoch", [](const MetricLog& l) {
            return l.first_full_accuracy_epoch;
        });

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("momentum", &TrainConfig::momentum)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("batch_size", &TrainConfig::batch_size)
        .def_readwrite("weight_decay", &TrainConfig::weight_decay)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("mixup", &TrainConfig::mixup)
        .def_readwrite("log_every", &TrainConfig::log_every)
        .def_readwrite("eval_mc_draws", &TrainConfig::eval_mc_draws)
        .def_property(
            "objective",
            [](const TrainConfig& c) { return std::string(to_string(c.objective)); },
            [](TrainConfig& c, const std::string& s) {
                c.objective = objective_from_string(s);
            });

    m.def(
        "train",
        [](const Model& init, const std::string& family, const Dataset& train_set,
           const std::optional<Dataset>& test_set, const TrainConfig& cfg) {
            const TrainResult res =
                train(init, family_from_name(family), train_set,
                      test_set ? &*test_set : nullptr, cfg);
            return std::make_pair(res.model, res.log);
        },
        py::arg("model"), py::arg("family"), py::arg("train_set"),
        py::arg("test_set") = std::nullopt, py::arg("config") = TrainConfig{});

    m.def("sgd_step",
          [](const Model& model, const Vec& gradient, const Vec& velocity,
             double learning_rate, double momentum, double weight_decay) {
              Model out = model;
              Vec vel = velocity;
              sgd_step(out, gradient, vel, learning_rate, momentum, weight_decay);
              return std::make_pair(out, vel);
          },
          py::arg("model"), py::arg("gradient"), py::arg("velocity"),
          py::arg("learning_rate") = 0.1, py::arg("momentum") = 0.9,
          py::arg("weight_decay") = 0.0);
}
