#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mixlab/errors.hpp"
#include "mixlab/generalization.hpp"
#include "mixlab/rng.hpp"
#include "oracles.hpp"

using namespace mixlab;

namespace {

Dataset orthonormal_inputs(std::size_t n) {
    Dataset ds;
    ds.inputs = Mat(n, n);
    ds.targets.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) ds.inputs.at(i, i) = 1.0;
    return ds;
}

}  // namespace

TEST_CASE("rademacher ball estimate basics") {
    const Dataset ds = orthonormal_inputs(8);
    CHECK(estimate_rademacher_ball(ds, 0.0, 100, 1).mean == doctest::Approx(0.0));

    // n = 1: sup independent of the sign, B * ||x|| exactly
    Dataset one;
    one.inputs = Mat(1, 3);
    one.inputs.at(0, 0) = 3.0;
    one.inputs.at(0, 1) = 4.0;
    one.targets = {1.0};
    const auto est = estimate_rademacher_ball(one, 2.0, 500, 2);
    CHECK(est.mean == doctest::Approx(10.0));
    CHECK(est.std_error == doctest::Approx(0.0));
}

TEST_CASE("rademacher estimate matches exhaustive enumeration") {
    // orthonormal case and two random cases, n <= 12
    {
        const Dataset ds = orthonormal_inputs(8);
        const double exact = oracles::exhaustive_rademacher_ball(ds.inputs, 1.0);
        const auto est = estimate_rademacher_ball(ds, 1.0, 4000, 3);
        CHECK(std::abs(est.mean - exact) <= 3.0 * est.std_error);
        CHECK(exact == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(0.25));
    }
    RngStream rng(4);
    for (int t = 0; t < 2; ++t) {
        Dataset ds;
        ds.inputs = Mat(10, 3);
        ds.targets.assign(10, 0.0);
        for (double& v : ds.inputs.data) v = rng.normal();
        const double exact = oracles::exhaustive_rademacher_ball(ds.inputs, 1.5);
        const auto est = estimate_rademacher_ball(ds, 1.5, 4000, 40 + t);
        CHECK(std::abs(est.mean - exact) <= 3.0 * est.std_error);
    }
}

TEST_CASE("glm complexity bound arithmetic") {
    CHECK(rademacher_bound_glm(0.25, 0.25, 4, 16) ==
          doctest::Approx(std::sqrt(4.0 / 16.0)));
    CHECK(rademacher_bound_glm(8.0, 0.5, 4, 100) == doctest::Approx(0.8));
    CHECK(rademacher_bound_glm(0.0, 0.5, 7, 10) == doctest::Approx(0.0));
    CHECK_THROWS_AS(rademacher_bound_glm(1.0, 0.0, 1, 1), InvalidRho);
    CHECK_THROWS_AS(rademacher_bound_glm(1.0, 0.9, 1, 1), InvalidRho);

    // monotone in gamma, nonincreasing in n
    double prev = 0.0;
    for (double g : {0.1, 0.5, 1.0, 2.0, 8.0}) {
        const double b = rademacher_bound_glm(g, 0.3, 5, 50);
        CHECK(b >= prev);
        prev = b;
    }
    prev = 1e300;
    for (std::size_t n : {10u, 40u, 160u}) {
        const double b = rademacher_bound_glm(2.0, 0.3, 5, n);
        CHECK(b <= prev);
        prev = b;
    }
}

TEST_CASE("rho estimate") {
    RngStream rng(5);
    Dataset ds;
    ds.inputs = Mat(60, 4);
    ds.targets.assign(60, 0.0);
    for (double& v : ds.inputs.data) v = rng.normal();

    // squared loss: numerator 1, well-spread data clamps at 1/2
    CHECK(estimate_rho(ds, LossFamily::squared(), 32, 6) == doctest::Approx(0.5));

    const double rho = estimate_rho(ds, LossFamily::logistic(), 64, 7);
    CHECK(rho > 0.0);
    CHECK(rho <= 0.5);

    Dataset zeros;
    zeros.inputs = Mat(5, 3);
    zeros.targets.assign(5, 0.0);
    CHECK_THROWS_AS(estimate_rho(zeros, LossFamily::logistic(), 8, 8),
                    DegenerateData);
}

TEST_CASE("generalization bound glm") {
    // gamma = 0 leaves the loss plus the tail term
    const double v =
        generalization_bound_glm(0.4, 0.0, 0.5, 3, 100, 1.0, 1.0, 2.0, 0.05);
    CHECK(v == doctest::Approx(0.4 + 2.0 * std::sqrt(std::log(20.0) / 200.0)));

    // delta = 1 removes the tail term entirely
    const double v1 =
        generalization_bound_glm(0.4, 1.0, 0.5, 3, 100, 1.0, 1.0, 2.0, 1.0);
    CHECK(v1 == doctest::Approx(0.4 + 2.0 * rademacher_bound_glm(1.0, 0.5, 3, 100)));

    // quadrupling n halves both sqrt(1/n) factors
    const double c_n =
        generalization_bound_glm(0.0, 1.0, 0.5, 3, 100, 1.0, 1.0, 2.0, 0.1);
    const double c_4n =
        generalization_bound_glm(0.0, 1.0, 0.5, 3, 400, 1.0, 1.0, 2.0, 0.1);
    CHECK(c_4n == doctest::Approx(0.5 * c_n));

    CHECK_THROWS_AS(
        generalization_bound_glm(0.4, 1.0, 0.5, 3, 100, 1.0, 1.0, 2.0, 0.0),
        InvalidDelta);
    CHECK_THROWS_AS(
        generalization_bound_glm(0.4, 1.0, 0.5, 3, 100, 1.0, 1.0, 2.0, 1.5),
        InvalidDelta);
}

TEST_CASE("hidden feature stats") {
    // constant hidden features: rank 0, pullback 0, flagged
    {
        TwoLayerNet net;
        net.W = Mat(3, 2);  // W x = 0 for every x below
        net.theta1 = {1.0, 1.0, 1.0};
        Dataset ds;
        ds.inputs = Mat(5, 2);
        ds.targets.assign(5, 0.0);
        // all inputs identical -> constant features regardless of W
        for (std::size_t i = 0; i < 5; ++i) {
            ds.inputs.at(i, 0) = 1.0;
            ds.inputs.at(i, 1) = 2.0;
        }
        net.W.at(0, 0) = 1.0;
        net.W.at(1, 1) = 1.0;
        net.W.at(2, 0) = 0.5;
        const HiddenFeatureStats stats = hidden_feature_stats(net, ds);
        CHECK(stats.rank == 0);
        CHECK(stats.mu_pullback_sq == doctest::Approx(0.0));
        CHECK(stats.mu_outside_range);
    }

    // identity W on positive data reproduces the input covariance
    {
        RngStream rng(9);
        const std::size_t n = 40;
        Dataset ds;
        ds.inputs = Mat(n, 3);
        ds.targets.assign(n, 0.0);
        for (double& v : ds.inputs.data) v = 0.5 + rng.uniform01();
        TwoLayerNet net;
        net.W = Mat(3, 3);
        for (std::size_t i = 0; i < 3; ++i) net.W.at(i, i) = 1.0;
        net.theta1 = {1.0, 1.0, 1.0};
        const HiddenFeatureStats stats = hidden_feature_stats(net, ds);
        const Mat oracle = oracles::two_pass_covariance(ds.inputs);
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b)
                CHECK(stats.sigma_cov.at(a, b) ==
                      doctest::Approx(oracle.at(a, b)).epsilon(1e-10));
        CHECK(stats.rank <= std::min<std::size_t>(3, n - 1));
        CHECK(stats.rank == 3);
    }
}

TEST_CASE("net complexity bound arithmetic") {
    HiddenFeatureStats stats;
    stats.rank = 3;
    stats.mu_pullback_sq = 1.0;
    CHECK(rademacher_bound_net(0.0, stats, 100) == doctest::Approx(0.0));
    CHECK(rademacher_bound_net(1.0, stats, 100) == doctest::Approx(0.4));
    CHECK(rademacher_bound_net(2.0, stats, 100) ==
          doctest::Approx(0.4 * std::sqrt(2.0)));
}

TEST_CASE("generalization gap") {
    const Dataset ds = gen_two_moons(40, 0.1, 10);
    const Model zero{LinearModel{{0.0, 0.0}}};
    CHECK(generalization_gap(zero, LossFamily::logistic(), ds, ds) ==
          doctest::Approx(0.0));

    const Model m{LinearModel{{0.4, -0.7}}};
    CHECK(generalization_gap(m, LossFamily::logistic(), ds, ds) ==
          doctest::Approx(0.0));
}

TEST_CASE("mc estimate never exceeds the glm bound on whitened balls") {
    RngStream rng(11);
    for (int t = 0; t < 5; ++t) {
        const std::size_t n = 30 + rng.index(60);
        const std::size_t p = 2 + rng.index(4);
        Dataset ds = gen_gaussian_halfspace(n, p, 500 + t);
        const LossFamily fam =
            t % 2 == 0 ? LossFamily::logistic() : LossFamily::squared();
        const double rho = estimate_rho(ds, fam, 48, 600 + t);
        const double gamma = 0.1 + 3.0 * rng.uniform01();
        const std::size_t rank = numerical_rank(input_second_moment(ds));
        const double ratio = gamma / rho;
        const double radius = std::max(std::pow(ratio, 0.25), std::sqrt(ratio));
        const auto est =
            estimate_rademacher_ball(whiten_inputs(ds), radius, 1500, 700 + t);
        const double bound = rademacher_bound_glm(gamma, rho, rank, n);
        CHECK(est.mean <= bound + 3.0 * est.std_error);
    }
}
