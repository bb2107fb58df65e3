#include "mixlab/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "mixlab/adversarial.hpp"
#include "mixlab/errors.hpp"

namespace mixlab {

bool in_theta_region(const Model& m, const Dataset& ds) {
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double f = predict(m, ds.x(i));
        const double y = ds.targets[i];
        // y f + (y-1) f >= 0, i.e. f >= 0 when y = 1 and f <= 0 when y = 0
        if (y * f + (y - 1.0) * f < 0.0) return false;
    }
    return true;
}

CosineRadii cosine_radii(const Model& m, const Dataset& ds) {
    CosineRadii out;
    out.radii.reserve(ds.size());
    out.r_min = 1.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto xi = ds.x(i);
        const double xn = norm2(xi);
        if (xn == 0.0) throw ZeroInput("cosine_radii: zero input vector");
        const Vec g = grad_input(m, xi);
        const double gn = norm2(g);
        const double r = gn == 0.0 ? 0.0 : std::abs(dot(g, xi)) / (gn * xn);
        out.radii.push_back(r);
        out.r_min = std::min(out.r_min, r);
    }
    if (ds.size() == 0) out.r_min = 0.0;
    return out;
}

namespace {

// Shared chain evaluation; surrogate(x, y, eta) is the per-point quadratic
// adversarial surrogate of the matching model family.
template <typename Surrogate>
TheoremReport check_chain(const Model& m, const LossFamily& fam, const Dataset& ds,
                          const LambdaMixture& mix, double tolerance,
                          Surrogate&& surrogate) {
    require_centered(ds);
    if (!in_theta_region(m, ds))
        throw NotInTheta("theorem check: model is outside the Theta region");

    TheoremReport rep;
    rep.tolerance = tolerance;
    rep.n = ds.size();
    rep.d = ds.dim();
    rep.in_theta = true;

    const double sqrt_d = std::sqrt(double(rep.d));
    double min_norm = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double xn = norm2(ds.x(i));
        if (xn == 0.0) throw ZeroInput("theorem check: zero input vector");
        min_norm = std::min(min_norm, xn);
    }
    rep.c_x = min_norm / sqrt_d;

    const CosineRadii rad = cosine_radii(m, ds);
    rep.radii = rad.radii;
    rep.r_min = rad.r_min;

    const double e_one_minus = moment_one_minus_lambda(mix);
    rep.eps_i.resize(rep.n);
    for (std::size_t i = 0; i < rep.n; ++i)
        rep.eps_i[i] = rep.radii[i] * rep.c_x * e_one_minus;
    rep.eps_mix = rep.r_min * rep.c_x * e_one_minus;

    rep.lhs = approx_mixup_loss(m, fam, ds, mix).total;
    double mid = 0.0;
    double rhs = 0.0;
    for (std::size_t i = 0; i < rep.n; ++i) {
        mid += surrogate(ds.x(i), ds.targets[i], rep.eps_i[i] * sqrt_d);
        rhs += surrogate(ds.x(i), ds.targets[i], rep.eps_mix * sqrt_d);
    }
    rep.mid = mid / double(rep.n);
    rep.rhs = rhs / double(rep.n);

    const double tol = tolerance * (1.0 + std::abs(rep.lhs));
    rep.holds_chain = (rep.lhs >= rep.mid - tol) && (rep.mid >= rep.rhs - tol);
    return rep;
}

}  // namespace

TheoremReport check_theorem_linear(const LinearModel& m, const LossFamily& fam,
                                   const Dataset& ds, const LambdaMixture& mix,
                                   double tolerance) {
    if (fam.kind != LossFamily::Kind::logistic)
        throw InvalidParameter("check_theorem_linear: logistic family only");
    return check_chain(Model{m}, fam, ds, mix, tolerance,
                       [&](std::span<const double> x, double y, double eta) {
                           return quad_adv_loss_glm(m, x, y, eta);
                       });
}

TheoremReport check_theorem_net(const TwoLayerNet& net, const LossFamily& fam,
                                const Dataset& ds, const LambdaMixture& mix,
                                double tolerance) {
    if (fam.kind != LossFamily::Kind::logistic)
        throw InvalidParameter("check_theorem_net: logistic family only");
    if (net.bias_enabled)
        throw InvalidParameter("check_theorem_net: bias-free net required");
    // Euler identity f(x) = grad f(x)^T x must hold at every training point.
    const Model m{net};
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto xi = ds.x(i);
        const double f = predict(m, xi);
        const double fg = dot(grad_input(m, xi), xi);
        if (std::abs(f - fg) > 1e-9 * (1.0 + std::abs(f)))
            throw EulerIdentityViolated(
                "check_theorem_net: f != grad f . x at a training point");
    }
    return check_chain(m, fam, ds, mix, tolerance,
                       [&](std::span<const double> x, double y, double eta) {
                           return quad_adv_loss_net(net, x, y, eta);
                       });
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

nlohmann::json report_to_json(const TheoremReport& r) {
    nlohmann::json doc;
    doc["in_theta"] = r.in_theta;
    doc["c_x"] = r.c_x;
    doc["radii"] = r.radii;
    doc["r_min"] = r.r_min;
    doc["eps_i"] = r.eps_i;
    doc["eps_mix"] = r.eps_mix;
    doc["lhs"] = r.lhs;
    doc["mid"] = r.mid;
    doc["rhs"] = r.rhs;
    doc["holds_chain"] = r.holds_chain;
    doc["tolerance"] = r.tolerance;
    doc["n"] = r.n;
    doc["d"] = r.d;
    return doc;
}

std::string report_csv_header() {
    return "lhs,mid,rhs,r_min,eps_mix,holds_chain,n,d";
}

std::string report_csv_row(const TheoremReport& r) {
    std::ostringstream out;
    out << fmt17(r.lhs) << "," << fmt17(r.mid) << "," << fmt17(r.rhs) << ","
        << fmt17(r.r_min) << "," << fmt17(r.eps_mix) << ","
        << (r.holds_chain ? 1 : 0) << "," << r.n << "," << r.d;
    return out.str();
}

}  // namespace mixlab
