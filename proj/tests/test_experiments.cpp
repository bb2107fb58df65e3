#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "mixlab/experiments.hpp"
#include "mixlab/generalization.hpp"

using namespace mixlab;

TEST_CASE("fig2 runner emits both curves and shares the epoch-0 loss") {
    ValidateApproxConfig cfg;
    cfg.n_train = 60;
    cfg.n_test = 60;
    cfg.epochs = 20;
    cfg.log_every = 10;
    cfg.mc_total_draws = 6000;
    cfg.hidden = 6;
    cfg.seed = 5;
    const auto res = run_validate_approx(cfg);

    // 2 models x 2 objectives x 3 logged epochs
    CHECK(res.rows.size() == 12);

    std::map<std::pair<std::string, std::string>, const ValidateApproxRow*> at0;
    for (const auto& r : res.rows)
        if (r.epoch == 0) at0[{r.model, r.objective}] = &r;
    REQUIRE(at0.size() == 4);
    for (const std::string& model : {"linear", "net"}) {
        const auto* mc = at0[{model, "mixup_mc"}];
        const auto* ap = at0[{model, "mixup_approx"}];
        REQUIRE(mc != nullptr);
        REQUIRE(ap != nullptr);
        // identical initialization: every logged quantity coincides at epoch 0
        CHECK(mc->mc_estimate == ap->mc_estimate);
        CHECK(mc->approx_total == ap->approx_total);
        CHECK(mc->train_std == ap->train_std);
        CHECK(mc->test_std == ap->test_std);
    }
}

TEST_CASE("fig6 runner: constant eta column, surrogate above clean loss") {
    ValidateAdvApproxConfig cfg;
    cfg.n_train = 60;
    cfg.epochs = 20;
    cfg.log_every = 10;
    cfg.seed = 6;
    const auto res = run_validate_adv_approx(cfg);
    CHECK(res.rows.size() == 3);
    for (const auto& r : res.rows) {
        CHECK(r.eta == 0.5);
        CHECK(r.mean_quad >= r.mean_clean - 1e-12);
        CHECK(r.mean_exact >= r.mean_clean - 1e-12);
    }
}

TEST_CASE("metric logs from the track-r runner are well formed") {
    TrackRConfig cfg;
    cfg.n_seeds = 1;
    cfg.epochs = 15;
    cfg.hidden = 8;
    cfg.seed = 7;
    const auto res = run_track_r(cfg);
    REQUIRE(res.runs.size() == 2);
    for (const auto& run : res.runs) {
        int prev = -1;
        for (const auto& rec : run.log.rows) {
            CHECK(rec.epoch > prev);  // epochs strictly increase
            prev = rec.epoch;
            CHECK(rec.r_min >= 0.0);
            CHECK(rec.r_min <= 1.0);
            for (double q : rec.r_deciles) {
                CHECK(q >= 0.0);
                CHECK(q <= 1.0);
            }
        }
        CHECK(run.log.rows.front().epoch == 0);
        CHECK(run.log.rows.back().epoch == 15);
    }
}

TEST_CASE("complexity bounds are monotone on grids") {
    HiddenFeatureStats stats;
    stats.rank = 4;
    stats.mu_pullback_sq = 0.5;
    double prev = 0.0;
    for (double g : {0.0, 0.2, 1.0, 3.0}) {
        const double b = rademacher_bound_net(g, stats, 64);
        CHECK(b >= prev);
        prev = b;
    }
    prev = 1e300;
    for (std::size_t n : {16u, 64u, 256u}) {
        const double b = rademacher_bound_net(1.5, stats, n);
        CHECK(b <= prev);
        prev = b;
    }
}

TEST_CASE("gen gap runner reports both objectives per seed") {
    GenGapConfig cfg;
    cfg.n_seeds = 2;
    cfg.n_train = 50;
    cfg.n_test = 100;
    cfg.epochs = 30;
    cfg.hidden = 10;
    cfg.seed = 8;
    const auto res = run_gen_gap(cfg);
    CHECK(res.rows.size() == 4);
    for (const auto& r : res.rows)
        CHECK(std::abs(r.gap - (r.test_loss - r.train_loss)) < 1e-15);
}
