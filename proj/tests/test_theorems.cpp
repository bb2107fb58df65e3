#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mixlab/adversarial.hpp"
#include "mixlab/errors.hpp"
#include "mixlab/experiments.hpp"
#include "mixlab/rng.hpp"
#include "mixlab/theorems.hpp"
#include "mixlab/training.hpp"

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

// small ERM training loop to reach the Theta region
Model train_to_theta(Model model, const Dataset& ds, int max_epochs = 500) {
    const LossFamily fam = LossFamily::logistic();
    Vec velocity(param_count(model), 0.0);
    for (int epoch = 0; epoch < max_epochs; ++epoch) {
        const Vec grad = grad_params(model, fam, ds.inputs, ds.targets);
        sgd_step(model, grad, velocity, 0.1, 0.9, 0.0);
        if (in_theta_region(model, ds)) break;
    }
    return model;
}

}  // namespace

TEST_CASE("in_theta_region") {
    const Dataset ds = dataset_from({{1.0, 0.0}, {-1.0, 0.0}}, {1.0, 0.0});
    CHECK(in_theta_region(Model{LinearModel{{1.0, 0.0}}}, ds));
    CHECK(in_theta_region(Model{LinearModel{{0.0, 0.0}}}, ds));  // boundary
    CHECK_FALSE(in_theta_region(Model{LinearModel{{-1.0, 0.0}}}, ds));
}

TEST_CASE("cosine radii") {
    {
        const Dataset ds = dataset_from({{2.0, 0.0}}, {1.0});
        const auto r = cosine_radii(Model{LinearModel{{3.0, 0.0}}}, ds);
        CHECK(r.radii[0] == doctest::Approx(1.0));
    }
    {
        const Dataset ds = dataset_from({{1.0, 1.0}}, {1.0});
        const auto r = cosine_radii(Model{LinearModel{{1.0, 0.0}}}, ds);
        CHECK(r.radii[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
        CHECK(r.r_min == doctest::Approx(1.0 / std::sqrt(2.0)));
    }
    {
        const Dataset ds = dataset_from({{0.0, 0.0}}, {1.0});
        CHECK_THROWS_AS(cosine_radii(Model{LinearModel{{1.0, 0.0}}}, ds), ZeroInput);
    }
    // zero gradient -> radius 0 by convention
    {
        const Dataset ds = dataset_from({{1.0, 1.0}}, {1.0});
        const auto r = cosine_radii(Model{LinearModel{{0.0, 0.0}}}, ds);
        CHECK(r.radii[0] == 0.0);
    }
}

TEST_CASE("cosine radii are scale invariant for linear models") {
    const Dataset ds = make_centered_halfspace(30, 4, 3);
    const LinearModel base{{0.3, -1.2, 0.5, 2.0}};
    const auto r1 = cosine_radii(Model{base}, ds);
    for (double c : {2.0, -5.0, 1e-3}) {
        LinearModel scaled = base;
        for (double& v : scaled.theta) v *= c;
        const auto r2 = cosine_radii(Model{scaled}, ds);
        for (std::size_t i = 0; i < r1.radii.size(); ++i)
            CHECK(std::abs(r1.radii[i] - r2.radii[i]) <=
                  1e-12 * std::max(1.0, r1.radii[i]));
    }
}

TEST_CASE("euler cross-check of net radii") {
    const Dataset ds = make_centered_halfspace(40, 6, 4);
    const Model net{init_net(12, 6, false, 5)};
    const auto rad = cosine_radii(net, ds);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double f = predict(net, ds.x(i));
        const double lhs = rad.radii[i] * norm2(grad_input(net, ds.x(i))) *
                           norm2(ds.x(i));
        CHECK(std::abs(lhs - std::abs(f)) <= 1e-9 * (1.0 + std::abs(f)));
    }
}

TEST_CASE("theorem chain holds for a trained linear separator") {
    const Dataset ds = make_centered_halfspace(60, 8, 7);
    const Model trained = train_to_theta(Model{init_linear(8, 7)}, ds);
    REQUIRE(in_theta_region(trained, ds));

    const LambdaMixture mix = derive_mixture({1.0, 1.0});
    const TheoremReport rep = check_theorem_linear(
        std::get<LinearModel>(trained), LossFamily::logistic(), ds, mix);
    CHECK(rep.holds_chain);
    CHECK(rep.lhs >= rep.mid - 1e-9 * (1.0 + std::abs(rep.lhs)));
    CHECK(rep.mid >= rep.rhs - 1e-9 * (1.0 + std::abs(rep.lhs)));
    CHECK(rep.r_min == doctest::Approx(*std::min_element(rep.radii.begin(),
                                                         rep.radii.end())));
    for (double e : rep.eps_i) CHECK(rep.eps_mix <= e + 1e-15);
}

TEST_CASE("theorem chain at theta = 0 degenerates to log 2") {
    const Dataset ds = make_centered_halfspace(20, 4, 9);
    const LinearModel zero{Vec(4, 0.0)};
    const TheoremReport rep =
        check_theorem_linear(zero, LossFamily::logistic(), ds,
                             derive_mixture({1.0, 1.0}));
    CHECK(rep.holds_chain);
    CHECK(rep.lhs == doctest::Approx(std::log(2.0)));
    CHECK(rep.mid == doctest::Approx(std::log(2.0)));
    CHECK(rep.rhs == doctest::Approx(std::log(2.0)));
    CHECK(rep.eps_mix == doctest::Approx(0.0));
}

TEST_CASE("surrogate mean is monotone in the radius") {
    const Dataset ds = make_centered_halfspace(30, 5, 11);
    const Model trained = train_to_theta(Model{init_linear(5, 12)}, ds);
    const auto& lin = std::get<LinearModel>(trained);
    double prev = -1.0;
    for (double eta : {0.0, 0.1, 0.2, 0.5, 1.0}) {
        double mean = 0.0;
        for (std::size_t i = 0; i < ds.size(); ++i)
            mean += quad_adv_loss_glm(lin, ds.x(i), ds.targets[i], eta) /
                    double(ds.size());
        CHECK(mean >= prev);
        prev = mean;
    }
}

TEST_CASE("theorem preconditions are enforced") {
    const LossFamily fam = LossFamily::logistic();
    const LambdaMixture mix = derive_mixture({1.0, 1.0});

    // not centered
    const Dataset raw = gen_gaussian_halfspace(20, 4, 13);
    CHECK_THROWS_AS(check_theorem_linear(LinearModel{Vec(4, 0.0)}, fam, raw, mix),
                    NotCentered);

    // not in Theta
    Dataset ds = make_centered_halfspace(20, 4, 14);
    Vec bad = *ds.theta_star;
    for (double& v : bad) v = -v;
    CHECK_THROWS_AS(check_theorem_linear(LinearModel{bad}, fam, ds, mix),
                    NotInTheta);

    // bias-enabled nets are rejected
    CHECK_THROWS_AS(
        check_theorem_net(init_net(4, 4, true, 15), fam, ds, mix),
        InvalidParameter);
}

TEST_CASE("theorem chain holds for a trained bias-free net") {
    const Dataset ds = make_centered_halfspace(50, 6, 17);
    Model net{init_net(24, 6, false, 18)};
    net = train_to_theta(net, ds, 800);
    REQUIRE(in_theta_region(net, ds));

    const TheoremReport rep =
        check_theorem_net(std::get<TwoLayerNet>(net), LossFamily::logistic(), ds,
                          derive_mixture({2.0, 2.0}));
    CHECK(rep.holds_chain);
}

TEST_CASE("net report reduces to the linear report for W = I on positive data") {
    // strictly positive inputs keep every ReLU active
    RngStream rng(19);
    const std::size_t n = 16;
    Dataset ds;
    ds.inputs = Mat(n, 2);
    ds.targets.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        ds.inputs.at(i, 0) = 0.5 + rng.uniform01();
        ds.inputs.at(i, 1) = 0.5 + rng.uniform01();
    }
    // center in a relu-safe way: shift so the mean vanishes but all
    // coordinates stay positive is impossible; instead verify the reduction
    // on the shared pieces that do not need centering.
    const Vec theta{0.8, 0.6};
    TwoLayerNet net;
    net.W = Mat(2, 2);
    net.W.at(0, 0) = 1.0;
    net.W.at(1, 1) = 1.0;
    net.theta1 = theta;
    net.bias_enabled = false;
    const LinearModel lin{theta};

    const auto rl = cosine_radii(Model{lin}, ds);
    const auto rn = cosine_radii(Model{net}, ds);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(rl.radii[i] == doctest::Approx(rn.radii[i]).epsilon(1e-12));
    for (std::size_t i = 0; i < n; ++i)
        CHECK(quad_adv_loss_net(net, ds.x(i), ds.targets[i], 0.3) ==
              doctest::Approx(quad_adv_loss_glm(lin, ds.x(i), ds.targets[i], 0.3))
                  .epsilon(1e-12));
}

TEST_CASE("zero top layer yields the log-2 equality chain") {
    const Dataset ds = make_centered_halfspace(20, 4, 21);
    TwoLayerNet net = init_net(6, 4, false, 22);
    for (double& v : net.theta1) v = 0.0;
    const TheoremReport rep = check_theorem_net(
        net, LossFamily::logistic(), ds, derive_mixture({1.0, 1.0}));
    CHECK(rep.holds_chain);
    CHECK(rep.lhs == doctest::Approx(std::log(2.0)));
    CHECK(rep.rhs == doctest::Approx(std::log(2.0)));
}

TEST_CASE("report serialization") {
    const Dataset ds = make_centered_halfspace(20, 4, 23);
    const TheoremReport rep =
        check_theorem_linear(LinearModel{Vec(4, 0.0)}, LossFamily::logistic(), ds,
                             derive_mixture({1.0, 1.0}));
    const auto doc = report_to_json(rep);
    CHECK(doc["holds_chain"].get<bool>() == rep.holds_chain);
    CHECK(doc["n"].get<std::size_t>() == 20);
    const std::string row = report_csv_row(rep);
    CHECK(row.find(",20,4") != std::string::npos);
    CHECK(report_csv_header() == "lhs,mid,rhs,r_min,eps_mix,holds_chain,n,d");
}
