#include "mixlab/losses.hpp"

#include <cmath>

#include "mixlab/errors.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

double pointwise_loss(const LossFamily& fam, double score, double y) {
    return fam.h(score) - y * score;
}

double empirical_loss(const Model& m, const LossFamily& fam, const Dataset& ds) {
    if (ds.size() == 0) throw EmptyDataset("empirical_loss: empty dataset");
    double s = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i)
        s += pointwise_loss(fam, predict(m, ds.x(i)), ds.targets[i]);
    return s / double(ds.size());
}

double accuracy(const Model& m, const Dataset& ds) {
    if (ds.size() == 0) throw EmptyDataset("accuracy: empty dataset");
    std::size_t ok = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double yhat = predict(m, ds.x(i)) >= 0.0 ? 1.0 : 0.0;
        if (yhat == ds.targets[i]) ++ok;
    }
    return double(ok) / double(ds.size());
}

namespace {

MonteCarloEstimate from_replicates(const Vec& means) {
    MonteCarloEstimate est;
    const std::size_t k = means.size();
    for (double v : means) est.estimate += v;
    est.estimate /= double(k);
    if (k > 1) {
        double ss = 0.0;
        for (double v : means) ss += (v - est.estimate) * (v - est.estimate);
        est.std_error = std::sqrt(ss / double(k - 1) / double(k));
    }
    return est;
}

}  // namespace

MonteCarloEstimate mixup_loss_mc(const Model& m, const LossFamily& fam,
                                 const Dataset& ds, const MixupConfig& cfg) {
    if (ds.size() == 0) throw EmptyDataset("mixup_loss_mc: empty dataset");
    if (cfg.lambda_draws < 1)
        throw InvalidParameter("mixup_loss_mc: lambda_draws must be >= 1");
    const std::size_t n = ds.size();
    const std::size_t p = ds.dim();

    RngStream pair_rng(cfg.seed, 0xA1);
    RngStream lambda_rng(cfg.seed, 0xA2);

    Vec mixed(p);
    auto eval_pair = [&](std::size_t i, std::size_t j, double lambda) {
        const auto xi = ds.x(i);
        const auto xj = ds.x(j);
        for (std::size_t k = 0; k < p; ++k)
            mixed[k] = lambda * xi[k] + (1.0 - lambda) * xj[k];
        const double ymix = lambda * ds.targets[i] + (1.0 - lambda) * ds.targets[j];
        return pointwise_loss(fam, predict(m, mixed), ymix);
    };
    auto draw_lambda = [&]() {
        return cfg.force_lambda_one ? 1.0 : sample_beta(cfg.beta_params, lambda_rng);
    };

    Vec replicate_means(static_cast<std::size_t>(cfg.lambda_draws), 0.0);
    for (double& rep : replicate_means) {
        double acc = 0.0;
        if (cfg.pair_strategy == PairStrategy::all_pairs) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    acc += eval_pair(i, j, draw_lambda());
            rep = acc / double(n * n);
        } else {
            if (cfg.sampled_pair_count < 1)
                throw InvalidParameter("mixup_loss_mc: sampled_pair_count must be >= 1");
            const std::size_t cnt = static_cast<std::size_t>(cfg.sampled_pair_count);
            for (std::size_t k = 0; k < cnt; ++k)
                acc += eval_pair(pair_rng.index(n), pair_rng.index(n), draw_lambda());
            rep = acc / double(cnt);
        }
    }
    return from_replicates(replicate_means);
}

MonteCarloEstimate mixup_loss_resampled(const Model& m, const LossFamily& fam,
                                        const Dataset& ds, const LambdaMixture& mix,
                                        int draws, std::uint64_t seed,
                                        bool force_lambda_one) {
    if (ds.size() == 0) throw EmptyDataset("mixup_loss_resampled: empty dataset");
    if (draws < 1) throw InvalidParameter("mixup_loss_resampled: draws must be >= 1");
    const std::size_t n = ds.size();
    const std::size_t p = ds.dim();

    RngStream partner_rng(seed, 0xB1);
    RngStream lambda_rng(seed, 0xB2);

    Vec mixed(p);
    Vec replicate_means(static_cast<std::size_t>(draws), 0.0);
    for (double& rep : replicate_means) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double lambda =
                force_lambda_one ? 1.0 : sample_mixture(mix, lambda_rng);
            const auto xi = ds.x(i);
            const auto rx = ds.x(partner_rng.index(n));
            for (std::size_t k = 0; k < p; ++k)
                mixed[k] = lambda * xi[k] + (1.0 - lambda) * rx[k];
            acc += pointwise_loss(fam, predict(m, mixed), ds.targets[i]);
        }
        rep = acc / double(n);
    }
    return from_replicates(replicate_means);
}

Vec input_mean_vector(const Dataset& ds) {
    Vec mean(ds.dim(), 0.0);
    for (std::size_t i = 0; i < ds.size(); ++i)
        axpy(1.0 / double(ds.size()), ds.x(i), mean);
    return mean;
}

Mat input_second_moment(const Dataset& ds) {
    const std::size_t p = ds.dim();
    Mat s2(p, p);
    const double inv_n = 1.0 / double(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto xi = ds.x(i);
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = 0; b < p; ++b)
                s2.at(a, b) += inv_n * xi[a] * xi[b];
    }
    return s2;
}

Mat row_covariance(const Mat& features) {
    const std::size_t n = features.rows;
    const std::size_t d = features.cols;
    Vec mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) axpy(1.0 / double(n), features.row(i), mean);
    Mat cov(d, d);
    const double inv_n = 1.0 / double(n);
    Vec c(d);
    for (std::size_t i = 0; i < n; ++i) {
        const auto fi = features.row(i);
        for (std::size_t a = 0; a < d; ++a) c[a] = fi[a] - mean[a];
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) cov.at(a, b) += inv_n * c[a] * c[b];
    }
    return cov;
}

void require_centered(const Dataset& ds, double tol) {
    const Vec mean = input_mean_vector(ds);
    for (double v : mean)
        if (std::abs(v) > tol)
            throw NotCentered("dataset is not centered (per-coordinate mean above " +
                              std::to_string(tol) + ")");
}

LossBreakdown approx_mixup_loss(const Model& m, const LossFamily& fam,
                                const Dataset& ds, const LambdaMixture& mix) {
    if (ds.size() == 0) throw EmptyDataset("approx_mixup_loss: empty dataset");
    const std::size_t n = ds.size();
    const std::size_t p = ds.dim();

    const double c1 = moment_one_minus_lambda(mix);
    const double c2 = moment_one_minus_lambda_sq(mix);
    const Vec xbar = input_mean_vector(ds);
    const Mat s2 = input_second_moment(ds);

    LossBreakdown out;
    Vec diff(p);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = ds.x(i);
        const double f = predict(m, xi);
        const double yi = ds.targets[i];
        out.standard += pointwise_loss(fam, f, yi);

        const Vec g = grad_input(m, xi);
        const double resid = fam.h_prime(f) - yi;

        for (std::size_t k = 0; k < p; ++k) diff[k] = xbar[k] - xi[k];
        out.r1 += resid * dot(g, diff);

        // g^T M_i g with M_i = S2 - xbar x_i^T - x_i xbar^T + x_i x_i^T
        const double g_s2_g = quadform(s2, g);
        const double g_xbar = dot(g, xbar);
        const double g_xi = dot(g, xi);
        out.r2 += fam.h_double_prime(f) * (g_s2_g - 2.0 * g_xbar * g_xi + g_xi * g_xi);

        // E_r[(r-x_i)^T grad^2 f (r-x_i)]; identically zero for these models
        double hess_term = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const auto xj = ds.x(j);
            for (std::size_t k = 0; k < p; ++k) diff[k] = xj[k] - xi[k];
            hess_term += hessian_input_quadform(m, xi, diff);
        }
        out.r3 += resid * hess_term / double(n);
    }
    out.standard /= double(n);
    out.r1 *= c1 / double(n);
    out.r2 *= c2 / (2.0 * double(n));
    out.r3 *= c2 / (2.0 * double(n));
    out.total = out.standard + out.r1 + out.r2 + out.r3;
    return out;
}

double glm_regularizer(const LinearModel& m, const LossFamily& fam,
                       const Dataset& ds, const LambdaMixture& mix) {
    if (ds.size() == 0) throw EmptyDataset("glm_regularizer: empty dataset");
    require_centered(ds);
    const double ratio = moment_ratio_sq(mix);  // throws NonFiniteMoment
    const std::size_t n = ds.size();

    double hdd_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        hdd_sum += fam.h_double_prime(dot(m.theta, ds.x(i)));

    const Mat sigma = input_second_moment(ds);
    return hdd_sum / (2.0 * double(n)) * ratio * quadform(sigma, m.theta);
}

std::string breakdown_csv_header() {
    return "epoch,standard,r1,r2,r3,total,mix_mc_estimate,mix_mc_stderr";
}

std::string breakdown_csv_row(int epoch, const LossBreakdown& b,
                              const MonteCarloEstimate* mc) {
    auto g17 = [](double v) {
        char cell[40];
        std::snprintf(cell, sizeof(cell), "%.17g", v);
        return std::string(cell);
    };
    std::string row = std::to_string(epoch) + "," + g17(b.standard) + "," +
                      g17(b.r1) + "," + g17(b.r2) + "," + g17(b.r3) + "," +
                      g17(b.total) + ",";
    if (mc) {
        row += g17(mc->estimate) + "," + g17(mc->std_error);
    } else {
        row += ",";
    }
    return row;
}

double manifold_mixup_regularizer(const TwoLayerNet& net, const Dataset& ds,
                                  const LambdaMixture& mix) {
    if (ds.size() == 0) throw EmptyDataset("manifold_mixup_regularizer: empty dataset");
    const double ratio = moment_ratio_sq(mix);  // throws NonFiniteMoment
    const std::size_t n = ds.size();
    const std::size_t hid = net.hidden();

    Mat features(n, hid);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = ds.x(i);
        for (std::size_t j = 0; j < hid; ++j) {
            const double z = dot(net.W.row(j), xi);
            features.at(i, j) = z > 0.0 ? z : 0.0;
        }
    }
    const Mat cov = row_covariance(features);
    return ratio * quadform(cov, net.theta1);
}

}  // namespace mixlab
