#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "rydspec/common.hpp"

namespace rydspec {

using Vec3 = std::array<double, 3>;

struct CloudConfig {
    std::size_t n_atoms = 1;
    double blockade_radius = 0.0;
    std::uint64_t seed = 0;
    std::size_t max_attempts = 1000;  // per-atom rejection budget
    double packing_cap = 0.3;
};

struct AtomCloud {
    std::vector<Vec3> positions;
    double cloud_radius = 0.0;
    double blockade_radius = 0.0;

    std::size_t size() const { return positions.size(); }
};

class FeasibilityError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class SamplingExhausted : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kSamplingScheme = "random-sequential-addition";

// Radius of the ball holding N atoms at unit density.
double cloud_radius(std::size_t n_atoms);

// N (r_b/2)^3 / R^3, the volume fraction of the exclusion spheres.
double packing_fraction(std::size_t n_atoms, double blockade_radius);

// Throws std::invalid_argument or FeasibilityError.
void validate(const CloudConfig& config);

// Uniform point in the ball of the given radius.
Vec3 sample_in_ball(double radius, Rng& rng);

// Atoms are added one at a time; a candidate closer than r_b to an accepted
// atom is rejected. An atom that exhausts max_attempts restarts the cloud;
// after N * max_attempts rejections in total SamplingExhausted is thrown.
AtomCloud sample_cloud(const CloudConfig& config, Rng& rng);

// Uses a stream seeded from config.seed.
AtomCloud sample_cloud(const CloudConfig& config);

// All N(N-1)/2 distances, ordered (0,1),(0,2),(1,2),(0,3),...
std::vector<double> pair_distances(const AtomCloud& cloud);

double min_pair_distance(const AtomCloud& cloud);

}  // namespace rydspec
