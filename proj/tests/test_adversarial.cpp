#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mixlab/adversarial.hpp"
#include "mixlab/errors.hpp"
#include "mixlab/rng.hpp"

using namespace mixlab;

namespace {

Dataset dataset_from(std::vector<Vec> xs, Vec ys) {
    Dataset ds;
    ds.inputs = Mat(xs.size(), xs.empty() ? 0 : xs[0].size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        std::copy(xs[i].begin(), xs[i].end(), ds.inputs.row(i).begin());
    ds.targets = std::move(ys);
    return ds;
}

}  // namespace

TEST_CASE("fgsm attack") {
    const LossFamily fam = LossFamily::logistic();
    const Model lin{LinearModel{{1.0, -2.0}}};

    const Vec x{0.0, 0.0};
    CHECK(fgsm_attack(lin, fam, x, 0.0, 0.0) == x);

    // grad_x loss = (g - y) theta = 0.5 (1,-2) -> signs (1,-1)
    const Vec adv = fgsm_attack(lin, fam, x, 0.0, 0.25);
    CHECK(adv[0] == doctest::Approx(0.25));
    CHECK(adv[1] == doctest::Approx(-0.25));

    // perturbation sits on the linf ball boundary at smooth points
    RngStream rng(1);
    for (int t = 0; t < 100; ++t) {
        Vec xr(2);
        for (double& v : xr) v = rng.normal();
        const Vec a = fgsm_attack(lin, fam, xr, 1.0, 0.1);
        double max_abs = 0.0;
        for (std::size_t k = 0; k < 2; ++k)
            max_abs = std::max(max_abs, std::abs(a[k] - xr[k]));
        CHECK(max_abs == doctest::Approx(0.1));
    }
}

TEST_CASE("exact l2 adversarial loss for linear scorer") {
    const LossFamily fam = LossFamily::logistic();
    const LinearModel m{{0.6, -0.8}};  // unit norm

    const Vec x{4.0, 3.0};  // theta^T x = 0
    CHECK(exact_l2_adv_loss_linear(m, fam, x, 1.0, 0.0) ==
          doctest::Approx(pointwise_loss(fam, 0.0, 1.0)));
    // shift of the score by eta ||theta|| = 1 toward the wrong side
    CHECK(exact_l2_adv_loss_linear(m, fam, x, 1.0, 1.0) ==
          doctest::Approx(std::log(1.0 + std::exp(-1.0)) + 1.0));

    // never below the clean loss
    RngStream rng(2);
    for (int t = 0; t < 200; ++t) {
        Vec xr(2);
        for (double& v : xr) v = rng.normal();
        const double y = rng.bernoulli(0.5) ? 1.0 : 0.0;
        const double eta = rng.uniform01();
        const double clean = pointwise_loss(fam, dot(m.theta, xr), y);
        CHECK(exact_l2_adv_loss_linear(m, fam, xr, y, eta) >= clean - 1e-15);
    }

    // theta = 0: the loss is constant, the formula returns the clean loss
    const LinearModel zero{{0.0, 0.0}};
    CHECK(exact_l2_adv_loss_linear(zero, fam, x, 1.0, 3.0) ==
          doctest::Approx(std::log(2.0)));
}

TEST_CASE("quadratic surrogate glm") {
    const LinearModel m{{0.6, -0.8}};
    const Vec x{4.0, 3.0};
    CHECK(quad_adv_loss_glm(m, x, 1.0, 0.0) ==
          doctest::Approx(std::log(2.0)));
    CHECK(quad_adv_loss_glm(m, x, 1.0, 1.0) ==
          doctest::Approx(std::log(2.0) + 0.5 + 0.125));
}

TEST_CASE("surrogate gap shrinks at third order") {
    // |exact - quad| = O(eta^3): halving eta divides the gap by >= 6 on
    // instances whose cubic coefficient is bounded away from zero
    const LossFamily fam = LossFamily::logistic();
    RngStream rng(3);
    int informative = 0;
    for (int t = 0; t < 60; ++t) {
        LinearModel m{{rng.normal(), rng.normal()}};
        const double tn = norm2(m.theta);
        for (double& v : m.theta) v /= tn;  // unit norm: score shift == eta
        Vec x{rng.normal(), rng.normal()};
        const double y = rng.bernoulli(0.5) ? 1.0 : 0.0;
        const double g = fam.h_prime(dot(m.theta, x));
        if (std::abs(1.0 - 2.0 * g) < 0.2) continue;  // l''' near a sign change
        const double g1 = std::abs(exact_l2_adv_loss_linear(m, fam, x, y, 0.1) -
                                   quad_adv_loss_glm(m, x, y, 0.1));
        const double g2 = std::abs(exact_l2_adv_loss_linear(m, fam, x, y, 0.05) -
                                   quad_adv_loss_glm(m, x, y, 0.05));
        if (g2 < 1e-12) continue;
        ++informative;
        CHECK(g1 / g2 >= 6.0);
    }
    CHECK(informative >= 30);
}

TEST_CASE("quadratic surrogate net") {
    // W = I, theta1 = theta on positive inputs reduces to the glm form
    const Vec theta{0.5, 1.5};
    TwoLayerNet net;
    net.W = Mat(2, 2);
    net.W.at(0, 0) = 1.0;
    net.W.at(1, 1) = 1.0;
    net.theta1 = theta;
    net.bias_enabled = false;
    const LinearModel lin{theta};

    RngStream rng(4);
    for (int t = 0; t < 50; ++t) {
        const Vec x{0.1 + rng.uniform01(), 0.1 + rng.uniform01()};
        const double y = rng.bernoulli(0.5) ? 1.0 : 0.0;
        const double eta = rng.uniform01();
        CHECK(quad_adv_loss_net(net, x, y, eta) ==
              doctest::Approx(quad_adv_loss_glm(lin, x, y, eta)).epsilon(1e-12));
        CHECK(quad_adv_loss_net(net, x, y, 0.0) ==
              doctest::Approx(pointwise_loss(LossFamily::logistic(),
                                             predict(Model{net}, x), y)));
        CHECK(quad_adv_loss_net(net, x, y, eta) >=
              pointwise_loss(LossFamily::logistic(), predict(Model{net}, x), y) -
                  1e-15);
    }
}

TEST_CASE("pga fallback is a lower bound on the exact linear maximum") {
    const LossFamily fam = LossFamily::logistic();
    const LinearModel lin{{1.0, 0.5}};
    const Model m{lin};
    RngStream rng(5);
    for (int t = 0; t < 50; ++t) {
        Vec x{rng.normal(), rng.normal()};
        const double y = rng.bernoulli(0.5) ? 1.0 : 0.0;
        const double eta = 0.2 + rng.uniform01();
        const double clean = pointwise_loss(fam, dot(lin.theta, x), y);
        const double pga = pga_l2_adv_loss(m, fam, x, y, eta);
        const double exact = exact_l2_adv_loss_linear(lin, fam, x, y, eta);
        CHECK(pga >= clean - 1e-15);
        CHECK(pga <= exact + 1e-12);
        CHECK(pga >= exact - 0.05 * (1.0 + exact));  // close for linear scorers
    }
}

TEST_CASE("linf attacks never beat l2 attacks of radius eps sqrt(d)") {
    const LossFamily fam = LossFamily::logistic();
    RngStream rng(6);
    const double sqrt_d = std::sqrt(2.0);
    for (int t = 0; t < 1000; ++t) {
        LinearModel m{{rng.normal(), rng.normal()}};
        Vec x{rng.normal(), rng.normal()};
        const double y = rng.bernoulli(0.5) ? 1.0 : 0.0;
        const double eps = 0.05 + 0.3 * rng.uniform01();
        const Vec fgsm = fgsm_attack(Model{m}, fam, x, y, eps);
        const double fgsm_loss = pointwise_loss(fam, dot(m.theta, fgsm), y);
        CHECK(exact_l2_adv_loss_linear(m, fam, x, y, eps * sqrt_d) >=
              fgsm_loss - 1e-12);
    }
}

TEST_CASE("robust accuracy") {
    const LossFamily fam = LossFamily::logistic();
    const LinearModel lin{{1.0, 0.0}};
    const Model m{lin};
    // margins |theta^T x| / ||theta|| = 1 and 2
    const Dataset ds =
        dataset_from({{1.0, 0.0}, {-2.0, 0.0}, {2.0, 3.0}}, {1.0, 0.0, 1.0});

    AttackConfig exact;
    exact.norm = AttackNorm::l2;
    exact.method = AttackMethod::exact_l2_linear;

    const auto clean = robust_accuracy(m, fam, ds, {0.0}, exact);
    CHECK(clean[0].accuracy == doctest::Approx(1.0));

    // exact l2: first point flips just past margin 1, all flip past 2
    const auto swept =
        robust_accuracy(m, fam, ds, {0.5, 1.01, 1.99, 2.01}, exact);
    CHECK(swept[0].accuracy == doctest::Approx(1.0));
    CHECK(swept[1].accuracy == doctest::Approx(2.0 / 3.0));
    CHECK(swept[2].accuracy == doctest::Approx(2.0 / 3.0));
    CHECK(swept[3].accuracy == doctest::Approx(0.0));

    // nonincreasing in epsilon
    for (std::size_t k = 1; k < swept.size(); ++k)
        CHECK(swept[k].accuracy <= swept[k - 1].accuracy + 1e-15);

    CHECK_THROWS_AS(
        robust_accuracy(m, fam, dataset_from({{1.0, 0.0}}, {0.5}), {0.1}, exact),
        InvalidParameter);
}
