#include "mixlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mixlab/errors.hpp"
#include "mixlab/generalization.hpp"
#include "mixlab/rng.hpp"

namespace mixlab {

Dataset make_centered_halfspace(std::size_t n, std::size_t d, std::uint64_t seed) {
    Dataset ds = center(gen_gaussian_halfspace(n, d, seed));
    const Vec& theta_star = *ds.theta_star;
    for (std::size_t i = 0; i < ds.size(); ++i)
        ds.targets[i] = dot(ds.x(i), theta_star) > 0.0 ? 1.0 : 0.0;
    return ds;
}

namespace {

MixupConfig make_mc_eval_config(double alpha, double beta, std::size_t n,
                                int total_draws, std::uint64_t seed) {
    MixupConfig cfg;
    cfg.beta_params = {alpha, beta};
    cfg.pair_strategy = PairStrategy::sampled_pairs;
    cfg.sampled_pair_count = static_cast<int>(n);
    cfg.lambda_draws = std::max(2, total_draws / static_cast<int>(n));
    cfg.seed = seed;
    return cfg;
}

}  // namespace

ValidateApproxResult run_validate_approx(const ValidateApproxConfig& cfg) {
    // Centered once so the linear mixup_approx path meets its precondition;
    // both model families train on the same inputs.
    const Dataset train_set =
        center(gen_two_moons(cfg.n_train, cfg.noise_sd, cfg.seed));
    Dataset test_set = gen_two_moons(cfg.n_test, cfg.noise_sd, cfg.seed + 1);
    // shift the test set by the training mean so both live in the same frame
    for (std::size_t i = 0; i < test_set.size(); ++i)
        for (std::size_t j = 0; j < test_set.dim(); ++j)
            test_set.inputs.at(i, j) -= train_set.input_mean[j];

    const LossFamily fam = LossFamily::logistic();
    const LambdaMixture mix = derive_mixture({cfg.alpha, cfg.beta});

    ValidateApproxResult result;

    auto run_one = [&](const Model& init, const std::string& model_name,
                       Objective objective) {
        TrainConfig tc;
        tc.learning_rate = cfg.learning_rate;
        tc.momentum = cfg.momentum;
        tc.epochs = cfg.epochs;
        tc.batch_size = cfg.batch_size;
        tc.seed = cfg.seed;
        tc.objective = objective;
        tc.mixup.beta_params = {cfg.alpha, cfg.beta};
        tc.log_every = cfg.log_every;

        std::vector<ValidateApproxRow> rows;
        auto on_log = [&](int epoch, const Model& m) {
            ValidateApproxRow row;
            row.model = model_name;
            row.objective = to_string(objective);
            row.epoch = epoch;
            const MonteCarloEstimate mc = mixup_loss_mc(
                m, fam, train_set,
                make_mc_eval_config(cfg.alpha, cfg.beta, train_set.size(),
                                    cfg.mc_total_draws,
                                    RngStream::mix(cfg.seed, 0xF1 + epoch)));
            const LossBreakdown b = approx_mixup_loss(m, fam, train_set, mix);
            row.mc_estimate = mc.estimate;
            row.mc_std_error = mc.std_error;
            row.approx_total = b.total;
            row.r1 = b.r1;
            row.r2 = b.r2;
            row.r3 = b.r3;
            row.gap = std::abs(mc.estimate - b.total);
            row.train_std = empirical_loss(m, fam, train_set);
            row.test_std = empirical_loss(m, fam, test_set);
            row.train_own =
                objective == Objective::mixup_approx ? b.total : mc.estimate;
            const MonteCarloEstimate mc_test = mixup_loss_mc(
                m, fam, test_set,
                make_mc_eval_config(cfg.alpha, cfg.beta, test_set.size(),
                                    cfg.mc_total_draws / 4,
                                    RngStream::mix(cfg.seed, 0xF2 + epoch)));
            row.test_own = objective == Objective::mixup_approx
                               ? approx_mixup_loss(m, fam, test_set, mix).total
                               : mc_test.estimate;
            rows.push_back(std::move(row));
        };
        train(init, fam, train_set, &test_set, tc, on_log);
        result.rows.insert(result.rows.end(), rows.begin(), rows.end());
    };

    if (cfg.run_linear) {
        const Model init{init_linear(train_set.dim(), cfg.seed)};
        run_one(init, "linear", Objective::mixup_mc);
        run_one(init, "linear", Objective::mixup_approx);
    }
    if (cfg.run_net) {
        const Model init{init_net(cfg.hidden, train_set.dim(), true, cfg.seed)};
        run_one(init, "net", Objective::mixup_mc);
        run_one(init, "net", Objective::mixup_approx);
    }
    return result;
}

ValidateAdvApproxResult run_validate_adv_approx(const ValidateAdvApproxConfig& cfg) {
    const Dataset train_set =
        center(gen_two_moons(cfg.n_train, cfg.noise_sd, cfg.seed));
    const LossFamily fam = LossFamily::logistic();

    TrainConfig tc;
    tc.learning_rate = cfg.learning_rate;
    tc.momentum = cfg.momentum;
    tc.epochs = cfg.epochs;
    tc.batch_size = cfg.batch_size;
    tc.seed = cfg.seed;
    tc.objective = Objective::mixup_mc;
    tc.mixup.beta_params = {cfg.alpha, cfg.beta};
    tc.log_every = cfg.log_every;

    ValidateAdvApproxResult result;
    auto on_log = [&](int epoch, const Model& m) {
        const auto& lin = std::get<LinearModel>(m);
        ValidateAdvApproxRow row;
        row.epoch = epoch;
        row.eta = cfg.eta;
        double exact = 0.0, quad = 0.0, clean = 0.0;
        for (std::size_t i = 0; i < train_set.size(); ++i) {
            const auto xi = train_set.x(i);
            const double yi = train_set.targets[i];
            exact += exact_l2_adv_loss_linear(lin, fam, xi, yi, cfg.eta);
            quad += quad_adv_loss_glm(lin, xi, yi, cfg.eta);
            clean += pointwise_loss(fam, dot(lin.theta, xi), yi);
        }
        const double n = double(train_set.size());
        row.mean_exact = exact / n;
        row.mean_quad = quad / n;
        row.mean_clean = clean / n;
        row.rel_gap = std::abs(row.mean_exact - row.mean_quad) /
                      std::max(row.mean_exact, 1e-300);
        result.rows.push_back(row);
    };

    const Model init{init_linear(train_set.dim(), cfg.seed)};
    train(init, fam, train_set, nullptr, tc, on_log);
    return result;
}

RobustnessResult run_robustness(const RobustnessConfig& cfg) {
    const LossFamily fam = LossFamily::logistic();
    RobustnessResult result;
    result.eps_grid = cfg.eps_grid;
    result.mean_erm.assign(cfg.eps_grid.size(), 0.0);
    result.mean_mixup.assign(cfg.eps_grid.size(), 0.0);
    result.all_clean_ok = true;

    for (int s = 0; s < cfg.n_seeds; ++s) {
        const std::uint64_t seed = cfg.seed + std::uint64_t(s);
        const Dataset ds =
            cfg.source == DataSource::gaussian_halfspace
                ? make_centered_halfspace(cfg.n, cfg.d, seed)
                : center(gen_two_moons(cfg.n, cfg.noise_sd, seed));

        for (const bool mixup : {false, true}) {
            TrainConfig tc;
            tc.learning_rate = cfg.learning_rate;
            tc.momentum = cfg.momentum;
            tc.epochs = cfg.epochs;
            tc.batch_size = cfg.batch_size;
            tc.seed = seed;
            tc.log_every = std::max(1, cfg.epochs);
            tc.objective = mixup ? Objective::mixup_mc : Objective::erm;
            tc.mixup.beta_params = {cfg.alpha, cfg.beta};

            const Model init =
                cfg.hidden > 0
                    ? Model{init_net(cfg.hidden, ds.dim(), true, seed)}
                    : Model{init_linear(ds.dim(), seed)};
            const TrainResult tr = train(init, fam, ds, nullptr, tc);
            const double clean = accuracy(tr.model, ds);
            if (clean < 0.99) result.all_clean_ok = false;

            AttackConfig attack;
            attack.norm = AttackNorm::linf;
            attack.method = AttackMethod::fgsm;
            const auto curve = robust_accuracy(tr.model, fam, ds, cfg.eps_grid, attack);
            for (std::size_t k = 0; k < curve.size(); ++k) {
                RobustnessRow row;
                row.seed = seed;
                row.objective = to_string(tc.objective);
                row.clean_train_accuracy = clean;
                row.epsilon = curve[k].epsilon;
                row.accuracy = curve[k].accuracy;
                result.rows.push_back(row);
                (mixup ? result.mean_mixup : result.mean_erm)[k] +=
                    curve[k].accuracy / double(cfg.n_seeds);
            }
        }
    }
    return result;
}

TrackRResult run_track_r(const TrackRConfig& cfg) {
    const LossFamily fam = LossFamily::logistic();
    TrackRResult result;

    auto run_one = [&](const Model& init, const std::string& model_name,
                       std::uint64_t seed, const Dataset& ds) {
        TrainConfig tc;
        tc.learning_rate = cfg.learning_rate;
        tc.momentum = cfg.momentum;
        tc.epochs = cfg.epochs;
        tc.batch_size = cfg.batch_size;
        tc.weight_decay = 0.0;  // R must not be maximized via a norm bound
        tc.seed = seed;
        tc.objective = cfg.objective;
        tc.mixup.beta_params = {cfg.alpha, cfg.beta};
        tc.log_every = 1;

        const TrainResult tr = train(init, fam, ds, nullptr, tc);
        for (const EpochRecord& rec : tr.log.rows) {
            result.curves.push_back(
                {seed, model_name, rec.epoch, rec.r_min, rec.train_accuracy});
        }

        TrackRSummary summary;
        summary.seed = seed;
        summary.model = model_name;
        summary.reached_full_accuracy =
            tr.log.first_full_accuracy_epoch.has_value();
        if (summary.reached_full_accuracy) {
            const int first = *tr.log.first_full_accuracy_epoch;
            summary.first_full_accuracy_epoch = first;
            // log_every == 1, so rows[k] is epoch k
            summary.r_at_first_full = tr.log.rows[std::size_t(first)].r_min;
            summary.r_final = tr.log.rows.back().r_min;
            summary.growth_ratio =
                summary.r_at_first_full > 0.0
                    ? summary.r_final / summary.r_at_first_full
                    : std::numeric_limits<double>::infinity();
        }
        const CosineRadii final_radii = cosine_radii(tr.model, ds);
        std::size_t above = 0;
        for (double r : final_radii.radii)
            if (r > 0.5) ++above;
        summary.frac_final_above_half =
            double(above) / double(final_radii.radii.size());
        result.summaries.push_back(summary);
        result.runs.push_back({seed, model_name, tr.log, tr.model});
    };

    for (int s = 0; s < cfg.n_seeds; ++s) {
        const std::uint64_t seed = cfg.seed + std::uint64_t(s);
        const Dataset ds = make_centered_halfspace(cfg.n, cfg.d, seed);
        if (cfg.run_linear)
            run_one(Model{init_linear(cfg.d, seed)}, "linear", seed, ds);
        if (cfg.run_net)
            run_one(Model{init_net(cfg.hidden, cfg.d, /*bias=*/false, seed)}, "net",
                    seed, ds);
    }
    return result;
}

TheoremTrialResult run_theorem_trials(const TheoremTrialConfig& cfg) {
    const LossFamily fam = LossFamily::logistic();
    // cycle a few finite-moment mixtures across trials
    const std::vector<std::pair<double, double>> settings = {
        {1.0, 1.0}, {2.0, 2.0}, {5.0, 0.5}};

    TheoremTrialResult result;
    result.all_hold = true;

    for (int t = 0; t < cfg.trials; ++t) {
        const std::uint64_t seed = cfg.seed + std::uint64_t(t);
        const auto [alpha, beta] = settings[std::size_t(t) % settings.size()];
        const Dataset ds = make_centered_halfspace(cfg.n, cfg.d, seed);

        Model model = cfg.net
                          ? Model{init_net(cfg.hidden, cfg.d, /*bias=*/false, seed)}
                          : Model{init_linear(cfg.d, seed)};
        Vec velocity(param_count(model), 0.0);
        RngStream shuffle_rng(seed, 0xD1);
        std::vector<std::size_t> perm(ds.size());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;

        int epochs_used = -1;
        for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
            for (std::size_t i = perm.size(); i > 1; --i)
                std::swap(perm[i - 1], perm[shuffle_rng.index(i)]);
            for (std::size_t start = 0; start < perm.size();
                 start += std::size_t(cfg.batch_size)) {
                const std::size_t stop =
                    std::min(perm.size(), start + std::size_t(cfg.batch_size));
                Mat bx(stop - start, ds.dim());
                Vec by(stop - start);
                for (std::size_t i = start; i < stop; ++i) {
                    std::copy(ds.x(perm[i]).begin(), ds.x(perm[i]).end(),
                              bx.row(i - start).begin());
                    by[i - start] = ds.targets[perm[i]];
                }
                const Vec grad = grad_params(model, fam, bx, by);
                sgd_step(model, grad, velocity, cfg.learning_rate, cfg.momentum, 0.0);
            }
            if (in_theta_region(model, ds)) {
                epochs_used = epoch;
                break;
            }
        }

        TheoremTrialRow row;
        row.seed = seed;
        row.alpha = alpha;
        row.beta = beta;
        row.epochs_to_theta = epochs_used;
        if (epochs_used < 0) {
            result.all_hold = false;
            result.rows.push_back(std::move(row));
            continue;
        }

        const LambdaMixture mix = derive_mixture({alpha, beta});
        row.report =
            cfg.net ? check_theorem_net(std::get<TwoLayerNet>(model), fam, ds, mix,
                                        cfg.tolerance)
                    : check_theorem_linear(std::get<LinearModel>(model), fam, ds,
                                           mix, cfg.tolerance);
        if (!row.report.holds_chain) result.all_hold = false;
        result.rows.push_back(std::move(row));
    }
    return result;
}

GenGapResult run_gen_gap(const GenGapConfig& cfg) {
    const LossFamily fam = LossFamily::logistic();
    GenGapResult result;

    for (int s = 0; s < cfg.n_seeds; ++s) {
        const std::uint64_t seed = cfg.seed + std::uint64_t(s);
        const Dataset train_set = gen_two_moons(cfg.n_train, cfg.noise_sd, seed);
        const Dataset test_set =
            gen_two_moons(cfg.n_test, cfg.noise_sd, seed + 7919);

        for (const bool mixup : {false, true}) {
            TrainConfig tc;
            tc.learning_rate = cfg.learning_rate;
            tc.momentum = cfg.momentum;
            tc.epochs = cfg.epochs;
            tc.batch_size = cfg.batch_size;
            tc.seed = seed;
            tc.log_every = std::max(1, cfg.epochs);
            tc.objective = mixup ? Objective::mixup_mc : Objective::erm;
            tc.mixup.beta_params = {cfg.alpha, cfg.beta};

            const Model init{init_net(cfg.hidden, train_set.dim(), true, seed)};
            const TrainResult tr = train(init, fam, train_set, nullptr, tc);

            GenGapRow row;
            row.seed = seed;
            row.objective = to_string(tc.objective);
            row.train_loss = empirical_loss(tr.model, fam, train_set);
            row.test_loss = empirical_loss(tr.model, fam, test_set);
            row.gap = row.test_loss - row.train_loss;
            (mixup ? result.mean_gap_mixup : result.mean_gap_erm) +=
                row.gap / double(cfg.n_seeds);
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

RademacherTableResult run_rademacher_table(const RademacherTableConfig& cfg) {
    RademacherTableResult result;
    result.all_sound = true;
    RngStream rng(cfg.seed, 0xAB);

    for (int c = 0; c < cfg.n_configs; ++c) {
        const std::uint64_t seed = RngStream::mix(cfg.seed, 0x100 + c);
        const std::size_t n = 30 + rng.index(120);
        const std::size_t p = 2 + rng.index(7);
        const double input_scale = 0.5 + 1.5 * rng.uniform01();

        Dataset ds = gen_gaussian_halfspace(n, p, seed);
        for (double& v : ds.inputs.data) v *= input_scale;
        const LossFamily fam =
            (c % 2 == 0) ? LossFamily::logistic() : LossFamily::squared();

        const double rho_hat = estimate_rho(ds, fam, cfg.rho_draws, seed);
        const std::size_t rank = numerical_rank(input_second_moment(ds));
        const double gamma = 0.05 + 5.0 * rng.uniform01();

        const Dataset white = whiten_inputs(ds);
        const double ratio = gamma / rho_hat;
        const double radius = std::max(std::pow(ratio, 0.25), std::sqrt(ratio));
        const RademacherEstimate est =
            estimate_rademacher_ball(white, radius, cfg.mc_draws, seed);
        const double bound = rademacher_bound_glm(gamma, rho_hat, rank, n);

        RademacherRow row;
        row.gamma = gamma;
        row.rho_hat = rho_hat;
        row.rank = rank;
        row.n = n;
        row.bound_glm = bound;
        row.rad_mc_mean = est.mean;
        row.rad_mc_se = est.std_error;
        row.bound_net = std::numeric_limits<double>::quiet_NaN();
        row.sound = est.mean <= bound + 3.0 * est.std_error;
        if (!row.sound) result.all_sound = false;
        result.rows.push_back(row);
    }

    // one network row: the attained gamma of a seeded net plugged into the
    // hidden-feature bound (empirical covariance stands in for the
    // population one; reported, not certified)
    {
        const Dataset ds =
            gen_gaussian_halfspace(cfg.net_n, cfg.net_d, cfg.seed + 1234);
        const TwoLayerNet net =
            init_net(cfg.net_hidden, cfg.net_d, true, cfg.seed + 1234);
        const HiddenFeatureStats stats = hidden_feature_stats(net, ds);
        const double gamma_hat = quadform(stats.sigma_cov, net.theta1);
        RademacherRow row;
        row.gamma = gamma_hat;
        row.rho_hat = std::numeric_limits<double>::quiet_NaN();
        row.rank = stats.rank;
        row.n = ds.size();
        row.bound_glm = std::numeric_limits<double>::quiet_NaN();
        row.rad_mc_mean = std::numeric_limits<double>::quiet_NaN();
        row.rad_mc_se = std::numeric_limits<double>::quiet_NaN();
        row.bound_net = rademacher_bound_net(gamma_hat, stats, ds.size());
        row.sound = true;
        result.rows.push_back(row);
    }
    return result;
}

}  // namespace mixlab
