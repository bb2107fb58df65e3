#include "mixlab/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <numeric>

#include "mixlab/errors.hpp"
#include "mixlab/rng.hpp"
#include "mixlab/theorems.hpp"

namespace mixlab {

const char* to_string(Objective o) {
    switch (o) {
        case Objective::erm: return "erm";
        case Objective::mixup_mc: return "mixup_mc";
        case Objective::mixup_approx: return "mixup_approx";
        case Objective::manifold_mixup_approx: return "manifold_mixup_approx";
    }
    return "erm";
}

Objective objective_from_string(const std::string& s) {
    if (s == "erm") return Objective::erm;
    if (s == "mixup_mc") return Objective::mixup_mc;
    if (s == "mixup_approx") return Objective::mixup_approx;
    if (s == "manifold_mixup_approx") return Objective::manifold_mixup_approx;
    throw ConfigError("unknown objective '" + s + "'");
}

void sgd_step(Model& m, const Vec& gradient, Vec& velocity, double learning_rate,
              double momentum, double weight_decay) {
    Vec params = params_flat(m);
    if (gradient.size() != params.size() || velocity.size() != params.size())
        throw ShapeMismatch("sgd_step: gradient/velocity shape mismatch");
    for (std::size_t i = 0; i < params.size(); ++i) {
        velocity[i] = momentum * velocity[i] + gradient[i] + weight_decay * params[i];
        params[i] -= learning_rate * velocity[i];
    }
    set_params_flat(m, params);
}

namespace {

Mat gather_rows(const Mat& src, const std::vector<std::size_t>& idx) {
    Mat out(idx.size(), src.cols);
    for (std::size_t i = 0; i < idx.size(); ++i)
        std::copy(src.row(idx[i]).begin(), src.row(idx[i]).end(),
                  out.row(i).begin());
    return out;
}

Vec gather(const Vec& src, const std::vector<std::size_t>& idx) {
    Vec out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = src[idx[i]];
    return out;
}

std::array<double, 11> deciles(Vec values) {
    std::array<double, 11> out{};
    if (values.empty()) return out;
    std::sort(values.begin(), values.end());
    const double last = double(values.size() - 1);
    for (int q = 0; q <= 10; ++q) {
        const double pos = last * double(q) / 10.0;
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - double(lo);
        out[q] = values[lo] * (1.0 - frac) + values[hi] * frac;
    }
    return out;
}

// dQ/du for Q = u^T S2 u - 2 (u^T xbar)(u^T xi) + (u^T xi)^2
Vec quad_term_grad_u(const Mat& s2, const Vec& xbar, std::span<const double> xi,
                     const Vec& u) {
    Vec q = matvec(s2, u);
    for (double& v : q) v *= 2.0;
    const double u_xi = dot(u, xi);
    const double u_xbar = dot(u, xbar);
    for (std::size_t k = 0; k < q.size(); ++k)
        q[k] += -2.0 * u_xi * xbar[k] - 2.0 * u_xbar * xi[k] + 2.0 * u_xi * xi[k];
    return q;
}

}  // namespace

ObjectiveEval make_erm_objective(const LossFamily& fam, Mat batch_x, Vec batch_y) {
    auto x = std::make_shared<Mat>(std::move(batch_x));
    auto y = std::make_shared<Vec>(std::move(batch_y));
    ObjectiveEval eval;
    eval.name = "erm";
    eval.value = [fam, x, y](const Model& m) {
        double s = 0.0;
        for (std::size_t i = 0; i < x->rows; ++i)
            s += pointwise_loss(fam, predict(m, x->row(i)), (*y)[i]);
        return s / double(x->rows);
    };
    eval.grad = [fam, x, y](const Model& m) { return grad_params(m, fam, *x, *y); };
    return eval;
}

ObjectiveEval make_mixup_approx_objective(const LossFamily& fam, Mat batch_x,
                                          Vec batch_y, Vec xbar_in, Mat s2_in,
                                          const LambdaMixture& mix) {
    auto x = std::make_shared<Mat>(std::move(batch_x));
    auto y = std::make_shared<Vec>(std::move(batch_y));
    auto xbar = std::make_shared<Vec>(std::move(xbar_in));
    auto s2 = std::make_shared<Mat>(std::move(s2_in));
    const double c1 = moment_one_minus_lambda(mix);
    const double c2 = moment_one_minus_lambda_sq(mix);

    ObjectiveEval eval;
    eval.name = "mixup_approx";
    eval.value = [fam, x, y, xbar, s2, c1, c2](const Model& m) {
        const std::size_t mrows = x->rows;
        const std::size_t p = x->cols;
        double total = 0.0;
        Vec diff(p);
        for (std::size_t i = 0; i < mrows; ++i) {
            const auto xi = x->row(i);
            const double f = predict(m, xi);
            const double a = fam.h_prime(f) - (*y)[i];
            const Vec g = grad_input(m, xi);
            for (std::size_t k = 0; k < p; ++k) diff[k] = (*xbar)[k] - xi[k];
            const double g_xi = dot(g, xi);
            const double g_xbar = dot(g, *xbar);
            const double q =
                quadform(*s2, g) - 2.0 * g_xbar * g_xi + g_xi * g_xi;
            total += pointwise_loss(fam, f, (*y)[i]) + c1 * a * dot(g, diff) +
                     0.5 * c2 * fam.h_double_prime(f) * q;
        }
        return total / double(mrows);
    };
    eval.grad = [fam, x, y, xbar, s2, c1, c2](const Model& m) -> Vec {
        const std::size_t mrows = x->rows;
        const std::size_t p = x->cols;
        const double inv_m = 1.0 / double(mrows);
        Vec diff(p);

        if (const auto* lin = std::get_if<LinearModel>(&m)) {
            Vec g(p, 0.0);
            for (std::size_t i = 0; i < mrows; ++i) {
                const auto xi = x->row(i);
                const double f = dot(lin->theta, xi);
                const double a = fam.h_prime(f) - (*y)[i];
                const double hdd = fam.h_double_prime(f);
                const double hddd = fam.h_triple_prime(f);
                for (std::size_t k = 0; k < p; ++k) diff[k] = (*xbar)[k] - xi[k];
                const double b = dot(lin->theta, diff);
                const double t_xi = dot(lin->theta, xi);
                const double t_xbar = dot(lin->theta, *xbar);
                const double q =
                    quadform(*s2, lin->theta) - 2.0 * t_xbar * t_xi + t_xi * t_xi;
                const Vec qgrad =
                    quad_term_grad_u(*s2, *xbar, xi, lin->theta);
                // standard + R1 + R2 pieces, all through f = theta^T x
                const double phi = a + c1 * hdd * b + 0.5 * c2 * hddd * q;
                axpy(inv_m * phi, xi, g);
                axpy(inv_m * c1 * a, diff, g);
                axpy(inv_m * 0.5 * c2 * hdd, qgrad, g);
            }
            return g;
        }

        const auto& net = std::get<TwoLayerNet>(m);
        const std::size_t hid = net.hidden();
        Vec flat(hid * p + hid + 1, 0.0);
        std::span<double> gw(flat.data(), hid * p);
        std::span<double> gt1(flat.data() + hid * p, hid);
        double& gt0 = flat[hid * p + hid];

        Vec z(hid), feat(hid), u(p);
        for (std::size_t i = 0; i < mrows; ++i) {
            const auto xi = x->row(i);
            double f = net.theta0;
            for (std::size_t j = 0; j < hid; ++j) {
                z[j] = dot(net.W.row(j), xi);
                feat[j] = z[j] > 0.0 ? z[j] : 0.0;
                if (z[j] > 0.0) f += net.theta1[j] * z[j];
            }
            std::fill(u.begin(), u.end(), 0.0);
            for (std::size_t j = 0; j < hid; ++j)
                if (z[j] > 0.0) axpy(net.theta1[j], net.W.row(j), u);

            const double a = fam.h_prime(f) - (*y)[i];
            const double hdd = fam.h_double_prime(f);
            const double hddd = fam.h_triple_prime(f);
            for (std::size_t k = 0; k < p; ++k) diff[k] = (*xbar)[k] - xi[k];
            const double b = dot(u, diff);
            const double u_xi = dot(u, xi);
            const double u_xbar = dot(u, *xbar);
            const double q = quadform(*s2, u) - 2.0 * u_xbar * u_xi + u_xi * u_xi;
            const Vec qgrad = quad_term_grad_u(*s2, *xbar, xi, u);
            const Vec w_diff = matvec(net.W, diff);
            const Vec w_qgrad = matvec(net.W, qgrad);

            const double phi = a + c1 * hdd * b + 0.5 * c2 * hddd * q;
            for (std::size_t j = 0; j < hid; ++j) {
                if (z[j] <= 0.0) continue;
                gt1[j] += inv_m * (phi * feat[j] + c1 * a * w_diff[j] +
                                   0.5 * c2 * hdd * w_qgrad[j]);
                const double tj = net.theta1[j];
                for (std::size_t k = 0; k < p; ++k)
                    gw[j * p + k] +=
                        inv_m * tj *
                        (phi * xi[k] + c1 * a * diff[k] + 0.5 * c2 * hdd * qgrad[k]);
            }
            if (net.bias_enabled) gt0 += inv_m * phi;
        }
        return flat;
    };
    return eval;
}

ObjectiveEval make_glm_regularized_objective(const LossFamily& fam,
                                             const Dataset& centered_ds,
                                             const LambdaMixture& mix) {
    require_centered(centered_ds);
    const double ratio = moment_ratio_sq(mix);
    auto x = std::make_shared<Mat>(centered_ds.inputs);
    auto y = std::make_shared<Vec>(centered_ds.targets);
    auto sigma = std::make_shared<Mat>(input_second_moment(centered_ds));

    ObjectiveEval eval;
    eval.name = "glm_regularized";
    eval.value = [fam, x, y, sigma, ratio](const Model& m) {
        const auto* lin = std::get_if<LinearModel>(&m);
        if (!lin) throw InvalidParameter("glm objective needs a linear model");
        const std::size_t n = x->rows;
        double std_loss = 0.0;
        double hdd_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double f = dot(lin->theta, x->row(i));
            std_loss += pointwise_loss(fam, f, (*y)[i]);
            hdd_sum += fam.h_double_prime(f);
        }
        return std_loss / double(n) +
               hdd_sum / (2.0 * double(n)) * ratio * quadform(*sigma, lin->theta);
    };
    eval.grad = [fam, x, y, sigma, ratio](const Model& m) -> Vec {
        const auto* lin = std::get_if<LinearModel>(&m);
        if (!lin) throw InvalidParameter("glm objective needs a linear model");
        const std::size_t n = x->rows;
        const std::size_t p = x->cols;
        const double inv_n = 1.0 / double(n);
        const double quad = quadform(*sigma, lin->theta);
        Vec sigma_theta = matvec(*sigma, lin->theta);
        Vec g(p, 0.0);
        double hdd_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto xi = x->row(i);
            const double f = dot(lin->theta, xi);
            const double a = fam.h_prime(f) - (*y)[i];
            hdd_sum += fam.h_double_prime(f);
            // standard part plus the h''' pass-through of the h'' sum
            axpy(inv_n * (a + 0.5 * ratio * quad * fam.h_triple_prime(f)), xi, g);
        }
        axpy(hdd_sum * inv_n * ratio, sigma_theta, g);
        return g;
    };
    return eval;
}

ObjectiveEval make_manifold_objective(const LossFamily& fam, Mat batch_x,
                                      Vec batch_y, const Dataset& full_set,
                                      const LambdaMixture& mix) {
    const double ratio = moment_ratio_sq(mix);
    auto x = std::make_shared<Mat>(std::move(batch_x));
    auto y = std::make_shared<Vec>(std::move(batch_y));
    auto full_x = std::make_shared<Mat>(full_set.inputs);

    ObjectiveEval eval;
    eval.name = "manifold_mixup_approx";
    eval.value = [fam, x, y, full_x, ratio](const Model& m) {
        const auto* net = std::get_if<TwoLayerNet>(&m);
        if (!net) throw InvalidParameter("manifold objective needs a net");
        double std_loss = 0.0;
        for (std::size_t i = 0; i < x->rows; ++i)
            std_loss += pointwise_loss(fam, predict(m, x->row(i)), (*y)[i]);
        std_loss /= double(x->rows);

        const std::size_t n = full_x->rows;
        const std::size_t hid = net->hidden();
        Mat features(n, hid);
        for (std::size_t i = 0; i < n; ++i) {
            const auto xi = full_x->row(i);
            for (std::size_t j = 0; j < hid; ++j) {
                const double z = dot(net->W.row(j), xi);
                features.at(i, j) = z > 0.0 ? z : 0.0;
            }
        }
        return std_loss + ratio * quadform(row_covariance(features), net->theta1);
    };
    eval.grad = [fam, x, y, full_x, ratio](const Model& m) -> Vec {
        const auto* net = std::get_if<TwoLayerNet>(&m);
        if (!net) throw InvalidParameter("manifold objective needs a net");
        Vec flat = grad_params(m, fam, *x, *y);

        const std::size_t n = full_x->rows;
        const std::size_t hid = net->hidden();
        const std::size_t p = net->input_dim();
        std::span<double> gw(flat.data(), hid * p);
        std::span<double> gt1(flat.data() + hid * p, hid);

        Mat features(n, hid);
        Vec mean(hid, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto xi = full_x->row(i);
            for (std::size_t j = 0; j < hid; ++j) {
                const double z = dot(net->W.row(j), xi);
                features.at(i, j) = z > 0.0 ? z : 0.0;
            }
            axpy(1.0 / double(n), features.row(i), mean);
        }
        // u_i = theta1^T (h_i - mean); reg = ratio * (1/n) sum u_i^2
        for (std::size_t i = 0; i < n; ++i) {
            const auto fi = features.row(i);
            double u = 0.0;
            for (std::size_t j = 0; j < hid; ++j)
                u += net->theta1[j] * (fi[j] - mean[j]);
            const double c = 2.0 * ratio * u / double(n);
            const auto xi = full_x->row(i);
            for (std::size_t j = 0; j < hid; ++j) {
                gt1[j] += c * (fi[j] - mean[j]);
                if (fi[j] > 0.0) {
                    // d h_ij / d W_jk = x_ik when the unit is active; the
                    // mean term cancels because sum_i u_i = 0
                    const double cj = c * net->theta1[j];
                    for (std::size_t k = 0; k < p; ++k)
                        gw[j * p + k] += cj * xi[k];
                }
            }
        }
        return flat;
    };
    return eval;
}

namespace {

double logged_loss(const Model& m, const LossFamily& fam, const Dataset& ds,
                   const TrainConfig& cfg, std::uint64_t eval_seed,
                   std::optional<LossBreakdown>* breakdown,
                   std::optional<MonteCarloEstimate>* mc) {
    switch (cfg.objective) {
        case Objective::erm:
            return empirical_loss(m, fam, ds);
        case Objective::mixup_mc: {
            MixupConfig eval_cfg = cfg.mixup;
            eval_cfg.lambda_draws = cfg.eval_mc_draws;
            eval_cfg.pair_strategy = PairStrategy::sampled_pairs;
            eval_cfg.sampled_pair_count = static_cast<int>(ds.size());
            eval_cfg.seed = eval_seed;
            const MonteCarloEstimate est = mixup_loss_mc(m, fam, ds, eval_cfg);
            if (mc) *mc = est;
            return est.estimate;
        }
        case Objective::mixup_approx: {
            const LossBreakdown b =
                approx_mixup_loss(m, fam, ds, derive_mixture(cfg.mixup.beta_params));
            if (breakdown) *breakdown = b;
            return b.total;
        }
        case Objective::manifold_mixup_approx: {
            const auto* net = std::get_if<TwoLayerNet>(&m);
            if (!net) throw InvalidParameter("manifold objective needs a net");
            return empirical_loss(m, fam, ds) +
                   manifold_mixup_regularizer(
                       *net, ds, derive_mixture(cfg.mixup.beta_params));
        }
    }
    return 0.0;
}

}  // namespace

TrainResult train(const Model& model_init, const LossFamily& fam,
                  const Dataset& train_set, const Dataset* test_set,
                  const TrainConfig& cfg, const LogCallback& on_log) {
    if (train_set.size() == 0) throw EmptyDataset("train: empty training set");
    if (cfg.batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
    if (cfg.epochs < 0) throw ConfigError("train: epochs must be >= 0");
    if (!(cfg.learning_rate > 0.0)) throw ConfigError("train: learning_rate must be > 0");
    if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0))
        throw ConfigError("train: momentum must lie in [0,1)");
    if (cfg.weight_decay < 0.0) throw ConfigError("train: weight_decay must be >= 0");

    if (cfg.objective == Objective::manifold_mixup_approx &&
        !std::holds_alternative<TwoLayerNet>(model_init))
        throw InvalidParameter("train: manifold objective requires a TwoLayerNet");
    if (cfg.objective == Objective::mixup_approx &&
        std::holds_alternative<LinearModel>(model_init))
        require_centered(train_set);

    const std::size_t n = train_set.size();
    const LambdaMixture mix = derive_mixture(cfg.mixup.beta_params);

    // fixed full-set moments for the closed-form objectives
    Vec xbar;
    Mat s2;
    if (cfg.objective == Objective::mixup_approx) {
        xbar = input_mean_vector(train_set);
        s2 = input_second_moment(train_set);
    }

    Model model = model_init;
    Vec velocity(param_count(model), 0.0);
    RngStream shuffle_rng(cfg.seed, 0xD1);
    RngStream mixup_rng(cfg.seed, 0xD2);

    TrainResult result;
    result.model = model;

    auto log_epoch = [&](int epoch) {
        EpochRecord rec;
        rec.epoch = epoch;
        std::optional<LossBreakdown> breakdown;
        std::optional<MonteCarloEstimate> mc;
        const std::uint64_t eval_seed = RngStream::mix(cfg.seed, 0xE0 + epoch);
        rec.train_loss =
            logged_loss(model, fam, train_set, cfg, eval_seed, &breakdown, &mc);
        rec.test_loss =
            test_set ? logged_loss(model, fam, *test_set, cfg, eval_seed + 1,
                                   nullptr, nullptr)
                     : std::numeric_limits<double>::quiet_NaN();
        rec.train_accuracy = accuracy(model, train_set);
        rec.breakdown = breakdown;
        rec.mix_mc = mc;
        const CosineRadii rad = cosine_radii(model, train_set);
        rec.r_min = rad.r_min;
        rec.r_deciles = deciles(rad.radii);
        result.log.rows.push_back(std::move(rec));
        if (on_log) on_log(epoch, model);
    };

    log_epoch(0);
    if (accuracy(model, train_set) == 1.0 && !result.log.first_full_accuracy_epoch)
        result.log.first_full_accuracy_epoch = 0;

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        for (std::size_t i = n; i > 1; --i)
            std::swap(perm[i - 1], perm[shuffle_rng.index(i)]);

        for (std::size_t start = 0; start < n;
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop =
                std::min(n, start + static_cast<std::size_t>(cfg.batch_size));
            std::vector<std::size_t> idx(perm.begin() + start, perm.begin() + stop);
            Mat bx = gather_rows(train_set.inputs, idx);
            Vec by = gather(train_set.targets, idx);

            Vec grad;
            switch (cfg.objective) {
                case Objective::erm:
                    grad = grad_params(model, fam, bx, by);
                    break;
                case Objective::mixup_mc: {
                    // each example mixes with a fresh partner from the full set
                    for (std::size_t r = 0; r < bx.rows; ++r) {
                        const std::size_t j = mixup_rng.index(n);
                        const double lambda =
                            cfg.mixup.force_lambda_one
                                ? 1.0
                                : sample_beta(cfg.mixup.beta_params, mixup_rng);
                        const auto xj = train_set.x(j);
                        auto row = bx.row(r);
                        for (std::size_t k = 0; k < bx.cols; ++k)
                            row[k] = lambda * row[k] + (1.0 - lambda) * xj[k];
                        by[r] = lambda * by[r] + (1.0 - lambda) * train_set.targets[j];
                    }
                    grad = grad_params(model, fam, bx, by);
                    break;
                }
                case Objective::mixup_approx: {
                    const ObjectiveEval eval = make_mixup_approx_objective(
                        fam, std::move(bx), std::move(by), xbar, s2, mix);
                    grad = eval.grad(model);
                    break;
                }
                case Objective::manifold_mixup_approx: {
                    const ObjectiveEval eval = make_manifold_objective(
                        fam, std::move(bx), std::move(by), train_set, mix);
                    grad = eval.grad(model);
                    break;
                }
            }
            sgd_step(model, grad, velocity, cfg.learning_rate, cfg.momentum,
                     cfg.weight_decay);
        }

        if (!result.log.first_full_accuracy_epoch &&
            accuracy(model, train_set) == 1.0)
            result.log.first_full_accuracy_epoch = epoch;

        if (epoch % cfg.log_every == 0 || epoch == cfg.epochs) log_epoch(epoch);
    }

    result.model = model;
    return result;
}

void write_metric_log_csv(const MetricLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("write_metric_log_csv: cannot open " + path);
    auto g17 = [](double v) {
        char cell[40];
        std::snprintf(cell, sizeof(cell), "%.17g", v);
        return std::string(cell);
    };
    out << "epoch,train_loss,test_loss,train_accuracy,r_min";
    for (int q = 0; q <= 10; ++q) out << ",r_q" << q * 10;
    out << ",standard,r1,r2,r3,total,mix_mc_estimate,mix_mc_stderr\n";
    for (const EpochRecord& rec : log.rows) {
        out << rec.epoch << "," << g17(rec.train_loss) << ","
            << (std::isnan(rec.test_loss) ? std::string() : g17(rec.test_loss))
            << "," << g17(rec.train_accuracy) << "," << g17(rec.r_min);
        for (double q : rec.r_deciles) out << "," << g17(q);
        if (rec.breakdown) {
            const LossBreakdown& b = *rec.breakdown;
            out << "," << g17(b.standard) << "," << g17(b.r1) << "," << g17(b.r2)
                << "," << g17(b.r3) << "," << g17(b.total);
        } else {
            out << ",,,,,";
        }
        if (rec.mix_mc)
            out << "," << g17(rec.mix_mc->estimate) << ","
                << g17(rec.mix_mc->std_error);
        else
            out << ",,";
        out << "\n";
    }
    if (!out) throw IoError("write_metric_log_csv: write failed for " + path);
}

FiniteDiffResult finite_diff_check(const Model& m, const ObjectiveEval& eval,
                                   double step, const Mat* pattern_probe) {
    if (!(step > 0.0)) throw InvalidParameter("finite_diff_check: step must be > 0");
    const Vec analytic = eval.grad(m);
    const Vec base = params_flat(m);

    auto patterns = [&](const Model& probe_model) {
        std::vector<char> pat;
        const auto* net = std::get_if<TwoLayerNet>(&probe_model);
        if (!net || !pattern_probe) return pat;
        pat.reserve(pattern_probe->rows * net->hidden());
        for (std::size_t i = 0; i < pattern_probe->rows; ++i) {
            const auto xi = pattern_probe->row(i);
            for (std::size_t j = 0; j < net->hidden(); ++j)
                pat.push_back(dot(net->W.row(j), xi) > 0.0 ? 1 : 0);
        }
        return pat;
    };
    const std::vector<char> base_pattern = patterns(m);

    FiniteDiffResult out;
    Model probe = m;
    for (std::size_t c = 0; c < base.size(); ++c) {
        Vec plus = base;
        Vec minus = base;
        plus[c] += step;
        minus[c] -= step;

        if (!base_pattern.empty()) {
            bool stable = true;
            for (const Vec* v : {&plus, &minus}) {
                set_params_flat(probe, *v);
                if (patterns(probe) != base_pattern) {
                    stable = false;
                    break;
                }
            }
            if (!stable) {
                ++out.excluded_unstable;
                continue;
            }
        }

        set_params_flat(probe, plus);
        const double vp = eval.value(probe);
        set_params_flat(probe, minus);
        const double vm = eval.value(probe);
        const double numeric = (vp - vm) / (2.0 * step);
        const double denom =
            std::max({1.0, std::abs(analytic[c]), std::abs(numeric)});
        out.max_rel_err =
            std::max(out.max_rel_err, std::abs(analytic[c] - numeric) / denom);
        ++out.checked;
    }
    return out;
}

}  // namespace mixlab
