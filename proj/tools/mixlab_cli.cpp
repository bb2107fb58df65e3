// Experiment driver: reproduces the desk-scale studies and writes
// plot-ready CSV plus JSON reports. Exit codes: 0 ok, 2 config error,
// 3 data error, 4 invariant failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mixlab/errors.hpp"
#include "mixlab/experiments.hpp"
#include "mixlab/generalization.hpp"
#include "mixlab/theorems.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mixlab;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string());
    out << content;
}

void write_json(const fs::path& path, const json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw ConfigError("config file must hold a flat JSON object");
    return doc;
}

// command-line flag wins; otherwise the config file; otherwise the default
// already sitting in `value`
template <typename T>
void merge(const CLI::App& cmd, const std::string& flag, const json& cfg,
           T& value) {
    if (cmd.count("--" + flag) > 0) return;
    if (cfg.contains(flag)) value = cfg.at(flag).get<T>();
}

struct CsvWriter {
    std::ofstream out;
    explicit CsvWriter(const fs::path& path, const std::string& header)
        : out(path) {
        if (!out) throw IoError("cannot open " + path.string());
        out << header << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out << cells[i] << (i + 1 < cells.size() ? "," : "");
        out << "\n";
    }
};

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args, const std::string& default_out) {
    cmd->add_option("--config", args.config_path, "flat JSON config file");
    cmd->add_option("--out", args.out_dir, "output directory")
        ->default_val(default_out);
    cmd->add_option("--seed", args.seed, "master seed")->default_val("1");
}

fs::path prepare_out(const CommonArgs& args) {
    fs::path dir(args.out_dir);
    fs::create_directories(dir);
    return dir;
}

// ----------------------------------------------------------------- gen-data

int cmd_gen_data(const CLI::App& cmd, const CommonArgs& common, std::string source,
                 std::size_t n, std::size_t d, double noise, bool do_center) {
    const json cfg = load_config_file(common.config_path);
    merge(cmd, "source", cfg, source);
    merge(cmd, "n", cfg, n);
    merge(cmd, "d", cfg, d);
    merge(cmd, "noise", cfg, noise);

    const fs::path dir = prepare_out(common);
    Dataset ds;
    if (source == "two_moons")
        ds = gen_two_moons(n, noise, common.seed);
    else if (source == "gaussian_halfspace")
        ds = gen_gaussian_halfspace(n, d, common.seed);
    else
        throw ConfigError("unknown source '" + source + "'");
    if (do_center) ds = center(ds);

    save_csv(ds, (dir / "dataset.csv").string());
    write_json(dir / "resolved_config.json",
               {{"command", "gen-data"},
                {"source", source},
                {"n", n},
                {"d", d},
                {"noise", noise},
                {"center", do_center},
                {"seed", common.seed}});
    write_json(dir / "summary.json",
               {{"n", ds.size()}, {"p", ds.dim()}, {"ok", true}});
    std::printf("wrote %s\n", (dir / "dataset.csv").c_str());
    return 0;
}

// ----------------------------------------------------------- validate-approx

int cmd_validate_approx(const CLI::App& cmd, const CommonArgs& common,
                        ValidateApproxConfig vc) {
    const json cfg = load_config_file(common.config_path);
    merge(cmd, "alpha", cfg, vc.alpha);
    merge(cmd, "beta", cfg, vc.beta);
    merge(cmd, "epochs", cfg, vc.epochs);
    merge(cmd, "lr", cfg, vc.learning_rate);
    merge(cmd, "momentum", cfg, vc.momentum);
    merge(cmd, "n", cfg, vc.n_train);
    merge(cmd, "noise", cfg, vc.noise_sd);
    merge(cmd, "log-every", cfg, vc.log_every);
    merge(cmd, "hidden", cfg, vc.hidden);
    merge(cmd, "mc-draws", cfg, vc.mc_total_draws);
    vc.n_test = vc.n_train;
    vc.seed = common.seed;

    const fs::path dir = prepare_out(common);
    const ValidateApproxResult res = run_validate_approx(vc);

    CsvWriter csv(dir / "fig2_data.csv",
                  "model,objective,epoch,train_own,test_own,train_std,test_std,"
                  "mc_estimate,mc_std_error,approx_total,r1,r2,r3,gap");
    double worst_rel_gap = 0.0;
    for (const auto& r : res.rows) {
        csv.row({r.model, r.objective, std::to_string(r.epoch), fmt17(r.train_own),
                 fmt17(r.test_own), fmt17(r.train_std), fmt17(r.test_std),
                 fmt17(r.mc_estimate), fmt17(r.mc_std_error), fmt17(r.approx_total),
                 fmt17(r.r1), fmt17(r.r2), fmt17(r.r3), fmt17(r.gap)});
        if (std::abs(r.approx_total) > 1e-12)
            worst_rel_gap =
                std::max(worst_rel_gap, r.gap / std::abs(r.approx_total));
    }

    write_json(dir / "resolved_config.json",
               {{"command", "validate-approx"},
                {"alpha", vc.alpha},
                {"beta", vc.beta},
                {"epochs", vc.epochs},
                {"lr", vc.learning_rate},
                {"momentum", vc.momentum},
                {"batch_size", vc.batch_size},
                {"n", vc.n_train},
                {"noise", vc.noise_sd},
                {"log_every", vc.log_every},
                {"hidden", vc.hidden},
                {"mc_draws", vc.mc_total_draws},
                {"seed", common.seed}});
    write_json(dir / "summary.json", {{"rows", res.rows.size()},
                                      {"worst_rel_gap", worst_rel_gap},
                                      {"ok", true}});
    std::printf("wrote %s (worst relative gap %.4f)\n",
                (dir / "fig2_data.csv").c_str(), worst_rel_gap);
    return 0;
}

// ------------------------------------------------------- validate-adv-approx

int cmd_validate_adv_approx(const CLI::App& cmd, const CommonArgs& common,
                            ValidateAdvApproxConfig vc, double gap_tol) {
    const json cfg = load_config_file(common.config_path);
    merge(cmd, "alpha", cfg, vc.alpha);
    merge(cmd, "beta", cfg, vc.beta);
    merge(cmd, "epochs", cfg, vc.epochs);
    merge(cmd, "lr", cfg, vc.learning_rate);
    merge(cmd, "momentum", cfg, vc.momentum);
    merge(cmd, "n", cfg, vc.n_train);
    merge(cmd, "noise", cfg, vc.noise_sd);
    merge(cmd, "eta", cfg, vc.eta);
    merge(cmd, "log-every", cfg, vc.log_every);
    merge(cmd, "gap-tol", cfg, gap_tol);
    vc.seed = common.seed;

    const fs::path dir = prepare_out(common);
    const ValidateAdvApproxResult res = run_validate_adv_approx(vc);

    CsvWriter csv(dir / "fig6_data.csv",
                  "epoch,eta,mean_exact,mean_quad,mean_clean,rel_gap");
    double worst = 0.0;
    bool ok = true;
    for (const auto& r : res.rows) {
        csv.row({std::to_string(r.epoch), fmt17(r.eta), fmt17(r.mean_exact),
                 fmt17(r.mean_quad), fmt17(r.mean_clean), fmt17(r.rel_gap)});
        if (r.epoch > 1) {
            worst = std::max(worst, r.rel_gap);
            if (r.rel_gap > gap_tol) ok = false;
        }
    }

    write_json(dir / "resolved_config.json",
               {{"command", "validate-adv-approx"},
                {"alpha", vc.alpha},
                {"beta", vc.beta},
                {"epochs", vc.epochs},
                {"lr", vc.learning_rate},
                {"momentum", vc.momentum},
                {"n", vc.n_train},
                {"noise", vc.noise_sd},
                {"eta", vc.eta},
                {"log_every", vc.log_every},
                {"gap_tol", gap_tol},
                {"seed", common.seed}});
    write_json(dir / "summary.json",
               {{"worst_rel_gap_after_epoch1", worst},
                {"gap_tolerance", gap_tol},
                {"ok", ok}});
    std::printf("wrote %s (worst relative gap %.4f)\n",
                (dir / "fig6_data.csv").c_str(), worst);
    return ok ? 0 : 4;
}

// --------------------------------------------------------------- robustness

int cmd_robustness(const CLI::App& cmd, const CommonArgs& common,
                   RobustnessConfig rc, std::string source,
                   std::string eps_grid_str) {
    const json cfg = load_config_file(common.config_path);
    merge(cmd, "alpha", cfg, rc.alpha);
    merge(cmd, "beta", cfg, rc.beta);
    merge(cmd, "epochs", cfg, rc.epochs);
    merge(cmd, "lr", cfg, rc.learning_rate);
    merge(cmd, "momentum", cfg, rc.momentum);
    merge(cmd, "n", cfg, rc.n);
    merge(cmd, "d", cfg, rc.d);
    merge(cmd, "noise", cfg, rc.noise_sd);
    merge(cmd, "seeds", cfg, rc.n_seeds);
    merge(cmd, "hidden", cfg, rc.hidden);
    merge(cmd, "source", cfg, source);
    merge(cmd, "eps-grid", cfg, eps_grid_str);
    rc.seed = common.seed;
    rc.source = source == "two_moons" ? DataSource::two_moons
                                      : DataSource::gaussian_halfspace;
    if (!eps_grid_str.empty()) {
        rc.eps_grid.clear();
        std::stringstream ss(eps_grid_str);
        std::string cell;
        while (std::getline(ss, cell, ','))
            rc.eps_grid.push_back(std::stod(cell));
        if (rc.eps_grid.empty()) throw ConfigError("empty --eps-grid");
    }

    const fs::path dir = prepare_out(common);
    const RobustnessResult res = run_robustness(rc);

    CsvWriter csv(dir / "robustness.csv",
                  "epsilon,accuracy,attack_method,norm,n_points,seed,objective,"
                  "clean_train_accuracy");
    for (const auto& r : res.rows)
        csv.row({fmt17(r.epsilon), fmt17(r.accuracy), "fgsm", "linf",
                 std::to_string(rc.n), std::to_string(r.seed), r.objective,
                 fmt17(r.clean_train_accuracy)});

    CsvWriter mean_csv(dir / "robustness_mean.csv",
                       "epsilon,mean_accuracy_erm,mean_accuracy_mixup");
    bool dominated = true;
    for (std::size_t k = 0; k < res.eps_grid.size(); ++k) {
        mean_csv.row({fmt17(res.eps_grid[k]), fmt17(res.mean_erm[k]),
                      fmt17(res.mean_mixup[k])});
        if (res.mean_mixup[k] < res.mean_erm[k]) dominated = false;
    }

    write_json(dir / "resolved_config.json",
               {{"command", "robustness"},
                {"source", source},
                {"alpha", rc.alpha},
                {"beta", rc.beta},
                {"epochs", rc.epochs},
                {"lr", rc.learning_rate},
                {"momentum", rc.momentum},
                {"n", rc.n},
                {"d", rc.d},
                {"noise", rc.noise_sd},
                {"hidden", rc.hidden},
                {"eps_grid", rc.eps_grid},
                {"seeds", rc.n_seeds},
                {"seed", common.seed}});
    write_json(dir / "summary.json",
               {{"all_clean_ok", res.all_clean_ok},
                {"mixup_dominates_mean", dominated},
                {"ok", res.all_clean_ok}});
    std::printf("wrote %s\n", (dir / "robustness.csv").c_str());
    return res.all_clean_ok ? 0 : 4;
}

// ------------------------------------------------------------------ track-r

int cmd_track_r(const CLI::App& cmd, const CommonArgs& common, TrackRConfig tc,
                std::string objective) {
    const json cfg = load_config_file(common.config_path);
    merge(cmd, "objective", cfg, objective);
    merge(cmd, "alpha", cfg, tc.alpha);
    merge(cmd, "beta", cfg, tc.beta);
    tc.objective = objective_from_string(objective);
    merge(cmd, "epochs", cfg, tc.epochs);
    merge(cmd, "lr", cfg, tc.learning_rate);
    merge(cmd, "momentum", cfg, tc.momentum);
    merge(cmd, "n", cfg, tc.n);
    merge(cmd, "d", cfg, tc.d);
    merge(cmd, "seeds", cfg, tc.n_seeds);
    merge(cmd, "hidden", cfg, tc.hidden);
    tc.seed = common.seed;

    const fs::path dir = prepare_out(common);
    const TrackRResult res = run_track_r(tc);

    CsvWriter curves(dir / "r_track.csv", "seed,model,epoch,r_min,train_accuracy");
    for (const auto& r : res.curves)
        curves.row({std::to_string(r.seed), r.model, std::to_string(r.epoch),
                    fmt17(r.r_min), fmt17(r.train_accuracy)});

    for (const auto& run : res.runs) {
        const std::string tag = run.model_name + "_" + std::to_string(run.seed);
        write_metric_log_csv(run.log, (dir / ("metrics_" + tag + ".csv")).string());
        save_checkpoint(run.final_model, (dir / ("model_" + tag + ".json")).string(),
                        run.seed);
    }

    CsvWriter summary(dir / "r_summary.csv",
                      "seed,model,first_full_accuracy_epoch,r_at_first_full,"
                      "r_final,growth_ratio,frac_final_above_half");
    for (const auto& s : res.summaries)
        summary.row({std::to_string(s.seed), s.model,
                     std::to_string(s.first_full_accuracy_epoch),
                     fmt17(s.r_at_first_full), fmt17(s.r_final),
                     fmt17(s.growth_ratio), fmt17(s.frac_final_above_half)});

    write_json(dir / "resolved_config.json",
               {{"command", "track-r"},
                {"objective", to_string(tc.objective)},
                {"alpha", tc.alpha},
                {"beta", tc.beta},
                {"n", tc.n},
                {"d", tc.d},
                {"epochs", tc.epochs},
                {"lr", tc.learning_rate},
                {"momentum", tc.momentum},
                {"weight_decay", 0.0},
                {"hidden", tc.hidden},
                {"seeds", tc.n_seeds},
                {"seed", common.seed}});
    write_json(dir / "summary.json",
               {{"runs", res.summaries.size()}, {"ok", true}});
    std::printf("wrote %s\n", (dir / "r_track.csv").c_str());
    return 0;
}

// ------------------------------------------------------------ theorem-check

int cmd_theorem_check(const CLI::App& cmd, const CommonArgs& common,
                      TheoremTrialConfig tc, bool use_net) {
    const json cfg = load_config_file(common.config_path);
    merge(cmd, "trials", cfg, tc.trials);
    merge(cmd, "n", cfg, tc.n);
    merge(cmd, "d", cfg, tc.d);
    merge(cmd, "hidden", cfg, tc.hidden);
    merge(cmd, "tolerance", cfg, tc.tolerance);
    merge(cmd, "epochs", cfg, tc.max_epochs);
    merge(cmd, "lr", cfg, tc.learning_rate);
    merge(cmd, "momentum", cfg, tc.momentum);
    tc.seed = common.seed;
    tc.net = use_net;

    const fs::path dir = prepare_out(common);
    const TheoremTrialResult res = run_theorem_trials(tc);

    CsvWriter csv(dir / "theorem_reports.csv",
                  std::string("seed,alpha,beta,epochs_to_theta,") +
                      report_csv_header());
    json reports = json::array();
    for (const auto& r : res.rows) {
        csv.row({std::to_string(r.seed), fmt17(r.alpha), fmt17(r.beta),
                 std::to_string(r.epochs_to_theta), report_csv_row(r.report)});
        json item = report_to_json(r.report);
        item["seed"] = r.seed;
        item["alpha"] = r.alpha;
        item["beta"] = r.beta;
        item["epochs_to_theta"] = r.epochs_to_theta;
        reports.push_back(std::move(item));
    }
    write_json(dir / "theorem_reports.json", reports);

    write_json(dir / "resolved_config.json",
               {{"command", "theorem-check"},
                {"net", use_net},
                {"trials", tc.trials},
                {"n", tc.n},
                {"d", tc.d},
                {"hidden", tc.hidden},
                {"tolerance", tc.tolerance},
                {"epochs", tc.max_epochs},
                {"lr", tc.learning_rate},
                {"momentum", tc.momentum},
                {"seed", common.seed}});
    write_json(dir / "summary.json",
               {{"all_hold", res.all_hold}, {"trials", res.rows.size()},
                {"ok", res.all_hold}});
    std::printf("%s: %zu trials, all_hold=%s\n",
                use_net ? "relu-net chain" : "linear chain", res.rows.size(),
                res.all_hold ? "true" : "false");
    return res.all_hold ? 0 : 4;
}

// ---------------------------------------------------------------- gen-gap

int cmd_gen_gap(const CLI::App& cmd, const CommonArgs& common, GenGapConfig gc) {
    const json cfg = load_config_file(common.config_path);
    merge(cmd, "alpha", cfg, gc.alpha);
    merge(cmd, "beta", cfg, gc.beta);
    merge(cmd, "epochs", cfg, gc.epochs);
    merge(cmd, "lr", cfg, gc.learning_rate);
    merge(cmd, "momentum", cfg, gc.momentum);
    merge(cmd, "n", cfg, gc.n_train);
    merge(cmd, "noise", cfg, gc.noise_sd);
    merge(cmd, "seeds", cfg, gc.n_seeds);
    merge(cmd, "hidden", cfg, gc.hidden);
    gc.seed = common.seed;

    const fs::path dir = prepare_out(common);
    const GenGapResult res = run_gen_gap(gc);

    CsvWriter csv(dir / "gap.csv", "seed,objective,train_loss,test_loss,gap");
    for (const auto& r : res.rows)
        csv.row({std::to_string(r.seed), r.objective, fmt17(r.train_loss),
                 fmt17(r.test_loss), fmt17(r.gap)});

    write_json(dir / "resolved_config.json",
               {{"command", "gen-gap"},
                {"alpha", gc.alpha},
                {"beta", gc.beta},
                {"epochs", gc.epochs},
                {"lr", gc.learning_rate},
                {"momentum", gc.momentum},
                {"n_train", gc.n_train},
                {"n_test", gc.n_test},
                {"noise", gc.noise_sd},
                {"hidden", gc.hidden},
                {"seeds", gc.n_seeds},
                {"seed", common.seed}});
    write_json(dir / "summary.json",
               {{"mean_gap_erm", res.mean_gap_erm},
                {"mean_gap_mixup", res.mean_gap_mixup},
                {"mixup_gap_smaller", res.mean_gap_mixup <= res.mean_gap_erm},
                {"ok", true}});
    std::printf("mean gap: erm %.4f, mixup %.4f\n", res.mean_gap_erm,
                res.mean_gap_mixup);
    return 0;
}

// -------------------------------------------------------------- rademacher

int cmd_rademacher(const CLI::App& cmd, const CommonArgs& common,
                   RademacherTableConfig rc) {
    const json cfg = load_config_file(common.config_path);
    merge(cmd, "configs", cfg, rc.n_configs);
    merge(cmd, "mc-draws", cfg, rc.mc_draws);
    rc.seed = common.seed;

    const fs::path dir = prepare_out(common);
    const RademacherTableResult res = run_rademacher_table(rc);

    CsvWriter csv(dir / "rademacher.csv",
                  "gamma,rho_hat,rank,n,bound_glm,rad_mc_mean,rad_mc_se,bound_net");
    for (const auto& r : res.rows)
        csv.row({fmt17(r.gamma), fmt17(r.rho_hat), std::to_string(r.rank),
                 std::to_string(r.n), fmt17(r.bound_glm), fmt17(r.rad_mc_mean),
                 fmt17(r.rad_mc_se), fmt17(r.bound_net)});

    write_json(dir / "resolved_config.json",
               {{"command", "rademacher"},
                {"configs", rc.n_configs},
                {"mc_draws", rc.mc_draws},
                {"rho_draws", rc.rho_draws},
                {"seed", common.seed}});
    write_json(dir / "summary.json",
               {{"all_sound", res.all_sound}, {"rows", res.rows.size()},
                {"ok", res.all_sound}});
    std::printf("wrote %s (all_sound=%s)\n", (dir / "rademacher.csv").c_str(),
                res.all_sound ? "true" : "false");
    return res.all_sound ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixlab: mixup regularization, robustness and generalization lab"};
    app.require_subcommand(1);

    // gen-data
    CommonArgs gd_common;
    std::string gd_source = "two_moons";
    std::size_t gd_n = 200, gd_d = 10;
    double gd_noise = 0.1;
    bool gd_center = false;
    auto* gd = app.add_subcommand("gen-data", "generate a synthetic dataset");
    add_common(gd, gd_common, "out/gen-data");
    gd->add_option("--source", gd_source, "two_moons | gaussian_halfspace");
    gd->add_option("--n", gd_n, "number of points");
    gd->add_option("--d", gd_d, "dimension (gaussian_halfspace)");
    gd->add_option("--noise", gd_noise, "noise sd (two_moons)");
    gd->add_flag("--center", gd_center, "center the inputs");

    // validate-approx
    CommonArgs va_common;
    ValidateApproxConfig va_cfg;
    auto* va = app.add_subcommand("validate-approx",
                                  "mixup loss vs quadratic approximation");
    add_common(va, va_common, "out/validate-approx");
    va->add_option("--alpha", va_cfg.alpha);
    va->add_option("--beta", va_cfg.beta);
    va->add_option("--epochs", va_cfg.epochs);
    va->add_option("--lr", va_cfg.learning_rate);
    va->add_option("--momentum", va_cfg.momentum);
    va->add_option("--n", va_cfg.n_train);
    va->add_option("--noise", va_cfg.noise_sd);
    va->add_option("--log-every", va_cfg.log_every);
    va->add_option("--hidden", va_cfg.hidden);
    va->add_option("--mc-draws", va_cfg.mc_total_draws);

    // validate-adv-approx
    CommonArgs vaa_common;
    ValidateAdvApproxConfig vaa_cfg;
    double vaa_gap_tol = 0.10;
    auto* vaa = app.add_subcommand("validate-adv-approx",
                                   "exact vs quadratic adversarial loss");
    add_common(vaa, vaa_common, "out/validate-adv-approx");
    vaa->add_option("--alpha", vaa_cfg.alpha);
    vaa->add_option("--beta", vaa_cfg.beta);
    vaa->add_option("--epochs", vaa_cfg.epochs);
    vaa->add_option("--lr", vaa_cfg.learning_rate);
    vaa->add_option("--momentum", vaa_cfg.momentum);
    vaa->add_option("--n", vaa_cfg.n_train);
    vaa->add_option("--noise", vaa_cfg.noise_sd);
    vaa->add_option("--eta", vaa_cfg.eta, "l2 attack size eps*sqrt(d)");
    vaa->add_option("--log-every", vaa_cfg.log_every);
    vaa->add_option("--gap-tol", vaa_gap_tol, "relative gap tolerance");

    // robustness
    CommonArgs rb_common;
    RobustnessConfig rb_cfg;
    std::string rb_source = "gaussian_halfspace";
    std::string rb_eps;
    auto* rb = app.add_subcommand("robustness",
                                  "fgsm robust accuracy, erm vs mixup");
    add_common(rb, rb_common, "out/robustness");
    rb->add_option("--alpha", rb_cfg.alpha);
    rb->add_option("--beta", rb_cfg.beta);
    rb->add_option("--epochs", rb_cfg.epochs);
    rb->add_option("--lr", rb_cfg.learning_rate);
    rb->add_option("--momentum", rb_cfg.momentum);
    rb->add_option("--n", rb_cfg.n);
    rb->add_option("--d", rb_cfg.d);
    rb->add_option("--noise", rb_cfg.noise_sd);
    rb->add_option("--seeds", rb_cfg.n_seeds);
    rb->add_option("--source", rb_source);
    rb->add_option("--hidden", rb_cfg.hidden, "0 trains a linear model");
    rb->add_option("--eps-grid", rb_eps, "comma separated epsilons");

    // track-r
    CommonArgs tr_common;
    TrackRConfig tr_cfg;
    std::string tr_objective = "erm";
    auto* tr = app.add_subcommand("track-r", "margin cosine R during training");
    add_common(tr, tr_common, "out/track-r");
    tr->add_option("--objective", tr_objective,
                   "erm | mixup_mc | mixup_approx | manifold_mixup_approx");
    tr->add_option("--alpha", tr_cfg.alpha);
    tr->add_option("--beta", tr_cfg.beta);
    tr->add_option("--epochs", tr_cfg.epochs);
    tr->add_option("--lr", tr_cfg.learning_rate);
    tr->add_option("--momentum", tr_cfg.momentum);
    tr->add_option("--n", tr_cfg.n);
    tr->add_option("--d", tr_cfg.d);
    tr->add_option("--seeds", tr_cfg.n_seeds);
    tr->add_option("--hidden", tr_cfg.hidden);

    // theorem-check
    CommonArgs th_common;
    TheoremTrialConfig th_cfg;
    th_cfg.trials = 1;
    bool th_net = false;
    auto* th = app.add_subcommand("theorem-check",
                                  "train to separation and verify the chain");
    add_common(th, th_common, "out/theorem-check");
    th->add_option("--trials", th_cfg.trials);
    th->add_option("--n", th_cfg.n);
    th->add_option("--d", th_cfg.d);
    th->add_option("--hidden", th_cfg.hidden);
    th->add_option("--tolerance", th_cfg.tolerance);
    th->add_option("--epochs", th_cfg.max_epochs, "training budget");
    th->add_option("--lr", th_cfg.learning_rate);
    th->add_option("--momentum", th_cfg.momentum);
    th->add_flag("--net", th_net, "check the relu-net chain instead of linear");

    // gen-gap
    CommonArgs gg_common;
    GenGapConfig gg_cfg;
    auto* gg = app.add_subcommand("gen-gap", "generalization gap, erm vs mixup");
    add_common(gg, gg_common, "out/gen-gap");
    gg->add_option("--alpha", gg_cfg.alpha);
    gg->add_option("--beta", gg_cfg.beta);
    gg->add_option("--epochs", gg_cfg.epochs);
    gg->add_option("--lr", gg_cfg.learning_rate);
    gg->add_option("--momentum", gg_cfg.momentum);
    gg->add_option("--n", gg_cfg.n_train);
    gg->add_option("--noise", gg_cfg.noise_sd);
    gg->add_option("--seeds", gg_cfg.n_seeds);
    gg->add_option("--hidden", gg_cfg.hidden);

    // rademacher
    CommonArgs rd_common;
    RademacherTableConfig rd_cfg;
    auto* rd = app.add_subcommand("rademacher",
                                  "complexity bounds vs monte carlo estimates");
    add_common(rd, rd_common, "out/rademacher");
    rd->add_option("--configs", rd_cfg.n_configs);
    rd->add_option("--mc-draws", rd_cfg.mc_draws);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (gd->parsed())
            return cmd_gen_data(*gd, gd_common, gd_source, gd_n, gd_d, gd_noise,
                                gd_center);
        if (va->parsed()) return cmd_validate_approx(*va, va_common, va_cfg);
        if (vaa->parsed())
            return cmd_validate_adv_approx(*vaa, vaa_common, vaa_cfg, vaa_gap_tol);
        if (rb->parsed())
            return cmd_robustness(*rb, rb_common, rb_cfg, rb_source, rb_eps);
        if (tr->parsed()) return cmd_track_r(*tr, tr_common, tr_cfg, tr_objective);
        if (th->parsed()) return cmd_theorem_check(*th, th_common, th_cfg, th_net);
        if (gg->parsed()) return cmd_gen_gap(*gg, gg_common, gg_cfg);
        if (rd->parsed()) return cmd_rademacher(*rd, rd_common, rd_cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const IoError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const MalformedRow& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const InvalidCount& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const EmptyDataset& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const Error& e) {
        std::fprintf(stderr, "invariant failure: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
