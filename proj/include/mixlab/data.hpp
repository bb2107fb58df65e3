#ifndef MIXLAB_DATA_HPP
#define MIXLAB_DATA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "mixlab/linalg.hpp"

namespace mixlab {

enum class DataSource { two_moons, gaussian_halfspace, csv };

const char* to_string(DataSource s);

struct Dataset {
    Mat inputs;                      // n x p
    Vec targets;                     // n, classification targets in {0,1}
    bool centered = false;
    Vec input_mean;                  // cumulative mean subtracted so far
    std::uint64_t seed = 0;
    DataSource source = DataSource::csv;
    std::optional<Vec> theta_star;   // generating direction, when applicable

    std::size_t size() const { return inputs.rows; }
    std::size_t dim() const { return inputs.cols; }
    std::span<const double> x(std::size_t i) const { return inputs.row(i); }
};

/// Interleaving half-circles of unit radius, n/2 points per class, plus
/// isotropic Gaussian noise. Class 1 is the flipped arc whose apex sits at
/// (1, -0.5).
Dataset gen_two_moons(std::size_t n, double noise_sd, std::uint64_t seed);

/// x_i ~ N(0, I_d), theta* ~ N(0, I_d) drawn first from the same stream,
/// y_i = 1{x_i^T theta* > 0}. theta* is kept in the dataset metadata.
Dataset gen_gaussian_halfspace(std::size_t n, std::size_t d, std::uint64_t seed);

/// Subtracts the empirical input mean and records it; idempotent.
Dataset center(const Dataset& ds);

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction,
                                  std::uint64_t seed);

/// CSV with header x_0,...,x_{p-1},y; values at 17 significant digits so
/// that save/load round-trips bit-exactly. A metadata sidecar
/// (<path>.meta.json) carries seed, source, centering state and theta*.
void save_csv(const Dataset& ds, const std::string& path);
Dataset load_csv(const std::string& path);

}  // namespace mixlab

#endif
