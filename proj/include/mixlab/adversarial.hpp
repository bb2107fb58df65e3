#ifndef MIXLAB_ADVERSARIAL_HPP
#define MIXLAB_ADVERSARIAL_HPP

#include "mixlab/data.hpp"
#include "mixlab/losses.hpp"
#include "mixlab/models.hpp"

namespace mixlab {

enum class AttackNorm { linf, l2 };
enum class AttackMethod { fgsm, exact_l2_linear, quad_approx };

const char* to_string(AttackNorm n);
const char* to_string(AttackMethod m);

/// epsilon is per-coordinate for linf and the total radius for l2.
struct AttackConfig {
    double epsilon = 0.0;
    AttackNorm norm = AttackNorm::linf;
    AttackMethod method = AttackMethod::fgsm;
};

/// x + epsilon * sign(grad_x loss); sign(0) = 0.
Vec fgsm_attack(const Model& m, const LossFamily& fam, std::span<const double> x,
                double y, double epsilon);

/// Exact max of the logistic loss over the l2 ball of radius eta around x
/// for a linear scorer: the loss is monotone in the score, so the maximizer
/// shifts the score by +/- eta*||theta||. Degenerates to the clean loss at
/// theta = 0 (the loss is constant there).
double exact_l2_adv_loss_linear(const LinearModel& m, const LossFamily& fam,
                                std::span<const double> x, double y, double eta);

/// Quadratic surrogate for the GLM adversarial loss:
/// l + eta|g(s)-y| ||theta|| + (eta^2/2) g(s)(1-g(s)) ||theta||^2.
double quad_adv_loss_glm(const LinearModel& m, std::span<const double> x, double y,
                         double eta);

/// Network form of the quadratic surrogate with the input gradient in place
/// of theta. Uses eta^2/2 so that eta = eps*sqrt(d) reproduces the
/// eps^2 d / 2 coefficient of the summed form.
double quad_adv_loss_net(const TwoLayerNet& net, std::span<const double> x, double y,
                         double eta);

/// Projected gradient ascent over the l2 ball (20 steps, step eta/10);
/// a heuristic lower bound on the exact adversarial loss for nets.
double pga_l2_adv_loss(const Model& m, const LossFamily& fam,
                       std::span<const double> x, double y, double eta);

struct RobustAccuracyPoint {
    double epsilon = 0.0;
    double accuracy = 0.0;
};

/// For each epsilon, perturbs every point with the configured attack and
/// reports the surviving sign-accuracy. quad_approx attacks with the
/// single-step l2 gradient direction (the maximizer of the quadratic
/// surrogate), which coincides with the exact attack for linear scorers.
std::vector<RobustAccuracyPoint> robust_accuracy(const Model& m,
                                                 const LossFamily& fam,
                                                 const Dataset& ds,
                                                 const Vec& epsilons,
                                                 const AttackConfig& attack);

}  // namespace mixlab

#endif
