#ifndef MIXLAB_THEOREMS_HPP
#define MIXLAB_THEOREMS_HPP

#include <string>

#include <json.hpp>

#include "mixlab/data.hpp"
#include "mixlab/distributions.hpp"
#include "mixlab/losses.hpp"
#include "mixlab/models.hpp"

namespace mixlab {

/// One machine-checked inequality chain
///   approx mixup loss >= mean surrogate(eps_i sqrt(d)) >= mean surrogate(eps_mix sqrt(d)).
struct TheoremReport {
    bool in_theta = false;
    double c_x = 0.0;          // min_i ||x_i|| / sqrt(d)
    Vec radii;                 // R_i = |cos(grad f(x_i), x_i)|
    double r_min = 0.0;
    Vec eps_i;
    double eps_mix = 0.0;
    double lhs = 0.0;          // approx mixup loss (total)
    double mid = 0.0;          // mean surrogate at eps_i sqrt(d)
    double rhs = 0.0;          // mean surrogate at eps_mix sqrt(d)
    bool holds_chain = false;
    double tolerance = 1e-9;   // relative
    std::size_t n = 0;
    std::size_t d = 0;
};

/// True iff every training score has the sign of its label:
/// f(x_i) >= 0 when y_i = 1 and f(x_i) <= 0 when y_i = 0.
bool in_theta_region(const Model& m, const Dataset& ds);

struct CosineRadii {
    Vec radii;
    double r_min = 0.0;
};

/// R_i = |<grad f(x_i), x_i>| / (||grad f(x_i)|| ||x_i||); a zero gradient
/// yields R_i = 0 by convention, a zero input is an error.
CosineRadii cosine_radii(const Model& m, const Dataset& ds);

TheoremReport check_theorem_linear(const LinearModel& m, const LossFamily& fam,
                                   const Dataset& ds, const LambdaMixture& mix,
                                   double tolerance = 1e-9);

TheoremReport check_theorem_net(const TwoLayerNet& net, const LossFamily& fam,
                                const Dataset& ds, const LambdaMixture& mix,
                                double tolerance = 1e-9);

nlohmann::json report_to_json(const TheoremReport& r);
std::string report_csv_header();
std::string report_csv_row(const TheoremReport& r);

}  // namespace mixlab

#endif
