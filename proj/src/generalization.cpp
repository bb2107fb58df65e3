#include "mixlab/generalization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixlab/errors.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

RademacherEstimate estimate_rademacher_ball(const Dataset& ds, double radius_b,
                                            int n_draws, std::uint64_t seed) {
    if (radius_b < 0.0)
        throw InvalidParameter("estimate_rademacher_ball: radius must be >= 0");
    if (n_draws < 1)
        throw InvalidParameter("estimate_rademacher_ball: n_draws must be >= 1");
    const std::size_t n = ds.size();
    const std::size_t p = ds.dim();
    RngStream rng(seed, 0xC1);

    double sum = 0.0;
    double sum_sq = 0.0;
    Vec acc(p);
    for (int k = 0; k < n_draws; ++k) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double xi_sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
            axpy(xi_sign / double(n), ds.x(i), acc);
        }
        const double v = radius_b * norm2(acc);
        sum += v;
        sum_sq += v * v;
    }
    RademacherEstimate est;
    est.n_draws = n_draws;
    est.mean = sum / double(n_draws);
    if (n_draws > 1) {
        const double var =
            (sum_sq - sum * sum / double(n_draws)) / double(n_draws - 1);
        est.std_error = std::sqrt(std::max(0.0, var) / double(n_draws));
    }
    return est;
}

double rademacher_bound_glm(double gamma, double rho, std::size_t rank_sigma,
                            std::size_t n) {
    if (!(rho > 0.0 && rho <= 0.5))
        throw InvalidRho("rademacher_bound_glm: rho must lie in (0, 1/2]");
    if (gamma < 0.0)
        throw InvalidParameter("rademacher_bound_glm: gamma must be >= 0");
    if (n < 1) throw InvalidParameter("rademacher_bound_glm: n must be >= 1");
    const double ratio = gamma / rho;
    const double scale = std::max(std::pow(ratio, 0.25), std::sqrt(ratio));
    return scale * std::sqrt(double(rank_sigma) / double(n));
}

double estimate_rho(const Dataset& ds, const LossFamily& fam, int v_draws,
                    std::uint64_t seed) {
    if (ds.size() == 0) throw EmptyDataset("estimate_rho: empty dataset");
    if (v_draws < 1) throw InvalidParameter("estimate_rho: v_draws must be >= 1");
    const std::size_t n = ds.size();
    const std::size_t p = ds.dim();

    bool all_zero = true;
    for (std::size_t i = 0; i < n && all_zero; ++i)
        if (norm2(ds.x(i)) > 0.0) all_zero = false;
    if (all_zero) throw DegenerateData("estimate_rho: all inputs are zero");

    RngStream rng(seed, 0xC2);
    double inf_ratio = std::numeric_limits<double>::infinity();
    Vec v(p);
    for (int k = 0; k < v_draws; ++k) {
        for (double& c : v) c = rng.normal();
        const double vn = norm2(v);
        if (vn == 0.0) continue;
        // half unit directions, half log-uniform scales in [1/4, 4]
        double scale = 1.0 / vn;
        if (k % 2 == 1) scale *= std::exp((rng.uniform01() * 2.0 - 1.0) * std::log(4.0));
        for (double& c : v) c *= scale;

        double mean_hdd = 0.0;
        double mean_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = dot(v, ds.x(i));
            mean_hdd += fam.h_double_prime(s);
            mean_sq += s * s;
        }
        mean_hdd /= double(n);
        mean_sq /= double(n);
        const double denom = std::min(1.0, mean_sq);
        if (denom <= 0.0) continue;  // v orthogonal to the data; no constraint
        inf_ratio = std::min(inf_ratio, mean_hdd * mean_hdd / denom);
    }
    if (!std::isfinite(inf_ratio))
        throw DegenerateData("estimate_rho: no informative direction sampled");
    return std::min(inf_ratio, 0.5);
}

double generalization_bound_glm(double std_train_loss, double gamma, double rho,
                                std::size_t rank_sigma, std::size_t n,
                                double lipschitz_l, double lipschitz_la,
                                double bound_b, double delta) {
    if (!(delta > 0.0 && delta <= 1.0))
        throw InvalidDelta("generalization_bound_glm: delta must lie in (0, 1]");
    if (lipschitz_l <= 0.0 || lipschitz_la <= 0.0 || bound_b <= 0.0)
        throw InvalidParameter("generalization_bound_glm: constants must be positive");
    const double complexity = rademacher_bound_glm(gamma, rho, rank_sigma, n);
    return std_train_loss + 2.0 * lipschitz_l * lipschitz_la * complexity +
           bound_b * std::sqrt(std::log(1.0 / delta) / (2.0 * double(n)));
}

HiddenFeatureStats hidden_feature_stats(const TwoLayerNet& net, const Dataset& ds) {
    if (ds.size() == 0) throw EmptyDataset("hidden_feature_stats: empty dataset");
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

    HiddenFeatureStats stats;
    stats.sigma_mean.assign(hid, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        axpy(1.0 / double(n), features.row(i), stats.sigma_mean);
    stats.sigma_cov = row_covariance(features);

    const EighResult eig = jacobi_eigh(stats.sigma_cov);
    double top = 0.0;
    for (double v : eig.values) top = std::max(top, v);
    const double thresh = 1e-10 * top;

    double captured_sq = 0.0;
    for (std::size_t j = 0; j < hid; ++j) {
        if (eig.values[j] > thresh && eig.values[j] > 0.0) {
            ++stats.rank;
            double proj = 0.0;
            for (std::size_t i = 0; i < hid; ++i)
                proj += eig.vectors.at(i, j) * stats.sigma_mean[i];
            stats.mu_pullback_sq += proj * proj / eig.values[j];
            captured_sq += proj * proj;
        }
    }
    const double mu_sq = dot(stats.sigma_mean, stats.sigma_mean);
    stats.mu_outside_range = mu_sq - captured_sq > 1e-10 * std::max(1.0, mu_sq);
    return stats;
}

double rademacher_bound_net(double gamma, const HiddenFeatureStats& stats,
                            std::size_t n) {
    if (gamma < 0.0)
        throw InvalidParameter("rademacher_bound_net: gamma must be >= 0");
    if (n < 1) throw InvalidParameter("rademacher_bound_net: n must be >= 1");
    return 2.0 * std::sqrt(gamma * (double(stats.rank) + stats.mu_pullback_sq) /
                           double(n));
}

double generalization_gap(const Model& m, const LossFamily& fam,
                          const Dataset& train, const Dataset& test) {
    return empirical_loss(m, fam, test) - empirical_loss(m, fam, train);
}

std::size_t numerical_rank(const Mat& sym) {
    const EighResult eig = jacobi_eigh(sym);
    double top = 0.0;
    for (double v : eig.values) top = std::max(top, v);
    const double thresh = 1e-10 * top;
    std::size_t rank = 0;
    for (double v : eig.values)
        if (v > thresh && v > 0.0) ++rank;
    return rank;
}

Dataset whiten_inputs(const Dataset& ds) {
    if (ds.size() == 0) throw EmptyDataset("whiten_inputs: empty dataset");
    const std::size_t n = ds.size();
    const std::size_t p = ds.dim();
    const Mat sigma = input_second_moment(ds);
    const EighResult eig = jacobi_eigh(sigma);
    double top = 0.0;
    for (double v : eig.values) top = std::max(top, v);
    const double thresh = 1e-10 * top;

    Dataset out = ds;
    out.inputs = Mat(n, p);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = ds.x(i);
        for (std::size_t j = 0; j < p; ++j) {
            if (!(eig.values[j] > thresh)) continue;
            double proj = 0.0;
            for (std::size_t k = 0; k < p; ++k)
                proj += eig.vectors.at(k, j) * xi[k];
            out.inputs.at(i, j) = proj / std::sqrt(eig.values[j]);
        }
    }
    return out;
}

}  // namespace mixlab
