#include "rydspec/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace rydspec {

namespace {

// Uniform grid over the bounding cube, used to find neighbours of a
// candidate in O(1) expected time. Cells are at least r_b wide so only the
// 27 surrounding cells need checking.
class CellGrid {
  public:
    CellGrid(double radius, double min_cell, std::size_t capacity) : origin_(-radius) {
        const double span = 2.0 * radius;
        cells_per_dim_ = static_cast<int>(std::clamp(std::floor(span / min_cell), 1.0, 96.0));
        cell_ = span / cells_per_dim_;
        head_.assign(static_cast<std::size_t>(cells_per_dim_) * cells_per_dim_ * cells_per_dim_, -1);
        next_.reserve(capacity);
        points_.reserve(capacity);
    }

    void clear() {
        std::fill(head_.begin(), head_.end(), -1);
        next_.clear();
        points_.clear();
    }

    bool conflicts(const Vec3& p, double r2) const {
        int c[3];
        for (int k = 0; k < 3; ++k) c[k] = coord(p[k]);
        for (int i = std::max(c[0] - 1, 0); i <= std::min(c[0] + 1, cells_per_dim_ - 1); ++i)
            for (int j = std::max(c[1] - 1, 0); j <= std::min(c[1] + 1, cells_per_dim_ - 1); ++j)
                for (int k = std::max(c[2] - 1, 0); k <= std::min(c[2] + 1, cells_per_dim_ - 1); ++k)
                    for (int q = head_[index(i, j, k)]; q >= 0; q = next_[q]) {
                        const Vec3& o = points_[q];
                        const double dx = o[0] - p[0], dy = o[1] - p[1], dz = o[2] - p[2];
                        if (dx * dx + dy * dy + dz * dz <= r2) return true;
                    }
        return false;
    }

    void insert(const Vec3& p) {
        const std::size_t cell = index(coord(p[0]), coord(p[1]), coord(p[2]));
        points_.push_back(p);
        next_.push_back(head_[cell]);
        head_[cell] = static_cast<int>(points_.size() - 1);
    }

  private:
    int coord(double x) const {
        return std::clamp(static_cast<int>((x - origin_) / cell_), 0, cells_per_dim_ - 1);
    }
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * cells_per_dim_ + j) * cells_per_dim_ + k;
    }

    double origin_;
    double cell_ = 1.0;
    int cells_per_dim_ = 1;
    std::vector<int> head_;
    std::vector<int> next_;
    std::vector<Vec3> points_;
};

}  // namespace

double cloud_radius(std::size_t n_atoms) {
    return std::cbrt(3.0 * static_cast<double>(n_atoms) / (4.0 * std::numbers::pi));
}

double packing_fraction(std::size_t n_atoms, double blockade_radius) {
    const double r = cloud_radius(n_atoms);
    const double h = 0.5 * blockade_radius;
    return static_cast<double>(n_atoms) * h * h * h / (r * r * r);
}

void validate(const CloudConfig& config) {
    if (config.n_atoms < 1) throw std::invalid_argument("cloud: n_atoms must be >= 1");
    if (!(config.blockade_radius >= 0.0) || !std::isfinite(config.blockade_radius))
        throw std::invalid_argument("cloud: blockade_radius must be finite and >= 0");
    if (config.max_attempts < 1) throw std::invalid_argument("cloud: max_attempts must be >= 1");
    const double phi = packing_fraction(config.n_atoms, config.blockade_radius);
    if (phi >= config.packing_cap)
        throw FeasibilityError("cloud: packing fraction " + std::to_string(phi) + " exceeds cap " +
                               std::to_string(config.packing_cap));
}

Vec3 sample_in_ball(double radius, Rng& rng) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    double x, y, z, n2;
    do {
        x = normal(rng);
        y = normal(rng);
        z = normal(rng);
        n2 = x * x + y * y + z * z;
    } while (n2 == 0.0);
    const double scale = radius * std::cbrt(uniform(rng)) / std::sqrt(n2);
    return {x * scale, y * scale, z * scale};
}

AtomCloud sample_cloud(const CloudConfig& config, Rng& rng) {
    validate(config);
    AtomCloud cloud;
    cloud.cloud_radius = cloud_radius(config.n_atoms);
    cloud.blockade_radius = config.blockade_radius;
    cloud.positions.reserve(config.n_atoms);

    const double rb = config.blockade_radius;
    if (rb == 0.0) {
        for (std::size_t i = 0; i < config.n_atoms; ++i) cloud.positions.push_back(sample_in_ball(cloud.cloud_radius, rng));
        return cloud;
    }

    const double r2 = rb * rb;
    CellGrid grid(cloud.cloud_radius, rb, config.n_atoms);
    const std::size_t total_budget = config.n_atoms * config.max_attempts;
    std::size_t total_rejections = 0;
    while (true) {
        bool restart = false;
        for (std::size_t i = 0; i < config.n_atoms && !restart; ++i) {
            std::size_t attempts = 0;
            while (true) {
                const Vec3 p = sample_in_ball(cloud.cloud_radius, rng);
                if (!grid.conflicts(p, r2)) {
                    grid.insert(p);
                    cloud.positions.push_back(p);
                    break;
                }
                if (++total_rejections >= total_budget)
                    throw SamplingExhausted("cloud: rejection budget exhausted at atom " + std::to_string(i) +
                                            " (seed " + std::to_string(config.seed) + ")");
                if (++attempts >= config.max_attempts) {
                    restart = true;
                    break;
                }
            }
        }
        if (!restart) return cloud;
        cloud.positions.clear();
        grid.clear();
    }
}

AtomCloud sample_cloud(const CloudConfig& config) {
    Rng rng(config.seed);
    return sample_cloud(config, rng);
}

std::vector<double> pair_distances(const AtomCloud& cloud) {
    const auto& p = cloud.positions;
    std::vector<double> out;
    out.reserve(p.size() * (p.size() > 0 ? p.size() - 1 : 0) / 2);
    for (std::size_t j = 1; j < p.size(); ++j)
        for (std::size_t i = 0; i < j; ++i)
            out.push_back(std::hypot(p[j][0] - p[i][0], p[j][1] - p[i][1], p[j][2] - p[i][2]));
    return out;
}

double min_pair_distance(const AtomCloud& cloud) {
    double best = std::numeric_limits<double>::infinity();
    const auto& p = cloud.positions;
    for (std::size_t j = 1; j < p.size(); ++j)
        for (std::size_t i = 0; i < j; ++i)
            best = std::min(best, std::hypot(p[j][0] - p[i][0], p[j][1] - p[i][1], p[j][2] - p[i][2]));
    return best;
}

}  // namespace rydspec
