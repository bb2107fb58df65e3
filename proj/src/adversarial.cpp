#include "mixlab/adversarial.hpp"

#include <cmath>

#include "mixlab/errors.hpp"

namespace mixlab {

const char* to_string(AttackNorm n) {
    return n == AttackNorm::linf ? "linf" : "l2";
}

const char* to_string(AttackMethod m) {
    switch (m) {
        case AttackMethod::fgsm: return "fgsm";
        case AttackMethod::exact_l2_linear: return "exact_l2_linear";
        case AttackMethod::quad_approx: return "quad_approx";
    }
    return "fgsm";
}

namespace {

double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// grad_x l(theta,(x,y)) = (h'(f) - y) * grad_x f
Vec loss_grad_input(const Model& m, const LossFamily& fam,
                    std::span<const double> x, double y) {
    const double resid = fam.h_prime(predict(m, x)) - y;
    Vec g = grad_input(m, x);
    for (double& v : g) v *= resid;
    return g;
}

}  // namespace

Vec fgsm_attack(const Model& m, const LossFamily& fam, std::span<const double> x,
                double y, double epsilon) {
    if (epsilon < 0.0) throw InvalidParameter("fgsm_attack: epsilon must be >= 0");
    const Vec g = loss_grad_input(m, fam, x, y);
    Vec out(x.begin(), x.end());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += epsilon * sign0(g[k]);
    return out;
}

double exact_l2_adv_loss_linear(const LinearModel& m, const LossFamily& fam,
                                std::span<const double> x, double y, double eta) {
    if (fam.kind != LossFamily::Kind::logistic)
        throw InvalidParameter("exact_l2_adv_loss_linear: logistic family only");
    if (eta < 0.0) throw InvalidParameter("exact_l2_adv_loss_linear: eta must be >= 0");
    const double s = dot(m.theta, x);
    const double shift = eta * norm2(m.theta);
    // y=1: loss decreases in the score, so the attacker lowers it; y=0 raises it.
    const double s_adv = (y >= 0.5) ? s - shift : s + shift;
    return pointwise_loss(fam, s_adv, y);
}

double quad_adv_loss_glm(const LinearModel& m, std::span<const double> x, double y,
                         double eta) {
    if (eta < 0.0) throw InvalidParameter("quad_adv_loss_glm: eta must be >= 0");
    const LossFamily fam = LossFamily::logistic();
    const double s = dot(m.theta, x);
    const double g = fam.h_prime(s);
    const double tnorm = norm2(m.theta);
    return pointwise_loss(fam, s, y) + eta * std::abs(g - y) * tnorm +
           0.5 * eta * eta * g * (1.0 - g) * tnorm * tnorm;
}

double quad_adv_loss_net(const TwoLayerNet& net, std::span<const double> x, double y,
                         double eta) {
    if (eta < 0.0) throw InvalidParameter("quad_adv_loss_net: eta must be >= 0");
    const LossFamily fam = LossFamily::logistic();
    const Model m{net};
    const double f = predict(m, x);
    const double g = fam.h_prime(f);
    const double gnorm = norm2(grad_input(m, x));
    return pointwise_loss(fam, f, y) + eta * std::abs(g - y) * gnorm +
           0.5 * eta * eta * std::abs(fam.h_double_prime(f)) * gnorm * gnorm;
}

double pga_l2_adv_loss(const Model& m, const LossFamily& fam,
                       std::span<const double> x, double y, double eta) {
    if (eta < 0.0) throw InvalidParameter("pga_l2_adv_loss: eta must be >= 0");
    const std::size_t p = x.size();
    Vec cur(x.begin(), x.end());
    double best = pointwise_loss(fam, predict(m, cur), y);
    const double step = eta / 10.0;
    for (int it = 0; it < 20; ++it) {
        const Vec g = loss_grad_input(m, fam, cur, y);
        const double gn = norm2(g);
        if (gn == 0.0) break;
        for (std::size_t k = 0; k < p; ++k) cur[k] += step * g[k] / gn;
        // project back onto the eta-ball around x
        Vec delta(p);
        for (std::size_t k = 0; k < p; ++k) delta[k] = cur[k] - x[k];
        const double dn = norm2(delta);
        if (dn > eta) {
            for (std::size_t k = 0; k < p; ++k) cur[k] = x[k] + delta[k] * eta / dn;
        }
        best = std::max(best, pointwise_loss(fam, predict(m, cur), y));
    }
    return best;
}

std::vector<RobustAccuracyPoint> robust_accuracy(const Model& m,
                                                 const LossFamily& fam,
                                                 const Dataset& ds,
                                                 const Vec& epsilons,
                                                 const AttackConfig& attack) {
    if (ds.size() == 0) throw EmptyDataset("robust_accuracy: empty dataset");
    for (double y : ds.targets)
        if (y != 0.0 && y != 1.0)
            throw InvalidParameter("robust_accuracy: targets must lie in {0,1}");

    std::vector<RobustAccuracyPoint> out;
    out.reserve(epsilons.size());
    const std::size_t n = ds.size();
    const std::size_t p = ds.dim();

    for (double eps : epsilons) {
        std::size_t ok = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto xi = ds.x(i);
            const double yi = ds.targets[i];
            Vec adv;
            switch (attack.method) {
                case AttackMethod::fgsm:
                    adv = fgsm_attack(m, fam, xi, yi, eps);
                    break;
                case AttackMethod::exact_l2_linear:
                case AttackMethod::quad_approx: {
                    // single-step l2 attack along the loss-increasing direction
                    Vec g = loss_grad_input(m, fam, xi, yi);
                    const double gn = norm2(g);
                    adv.assign(xi.begin(), xi.end());
                    if (gn > 0.0)
                        for (std::size_t k = 0; k < p; ++k)
                            adv[k] += eps * g[k] / gn;
                    break;
                }
            }
            const double yhat = predict(m, adv) >= 0.0 ? 1.0 : 0.0;
            if (yhat == yi) ++ok;
        }
        out.push_back({eps, double(ok) / double(n)});
    }
    return out;
}

}  // namespace mixlab
