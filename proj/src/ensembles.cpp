#include "rydspec/ensembles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rydspec {

std::string_view to_string(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::rydberg: return "rydberg";
        case EnsembleKind::decorrelated: return "decorrelated";
        case EnsembleKind::goe: return "goe";
        case EnsembleKind::levy1: return "levy1";
    }
    return "unknown";
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
    if (name == "rydberg") return EnsembleKind::rydberg;
    if (name == "decorrelated") return EnsembleKind::decorrelated;
    if (name == "goe") return EnsembleKind::goe;
    if (name == "levy1") return EnsembleKind::levy1;
    throw std::invalid_argument("unknown ensemble '" + std::string(name) + "'");
}

void EnsembleSpec::validate() const {
    if (n_atoms < 2) throw std::invalid_argument("ensemble.n_atoms must be >= 2");
    if (!(blockade_radius >= 0.0)) throw std::invalid_argument("ensemble.blockade_radius must be >= 0");
    if (kind == EnsembleKind::rydberg) {
        CloudConfig c;
        c.n_atoms = n_atoms;
        c.blockade_radius = blockade_radius;
        c.max_attempts = max_attempts;
        rydspec::validate(c);
    }
    if (kind == EnsembleKind::goe) {
        if (goe_sigma && !(*goe_sigma > 0.0)) throw std::invalid_argument("ensemble.goe_sigma must be > 0");
        if (!goe_sigma && blockade_radius == 0.0)
            throw std::invalid_argument("ensemble.goe_sigma is required when blockade_radius = 0");
    }
}

double EnsembleSpec::resolved_goe_sigma() const {
    if (goe_sigma) return *goe_sigma;
    return rydspec::goe_sigma(GeometryParams::make(n_atoms, blockade_radius));
}

SymmetricMatrix build_rydberg(const AtomCloud& cloud) {
    const auto& p = cloud.positions;
    return SymmetricMatrix::build(p.size(), [&](std::size_t i, std::size_t j) {
        const double dx = p[j][0] - p[i][0], dy = p[j][1] - p[i][1], dz = p[j][2] - p[i][2];
        const double r2 = dx * dx + dy * dy + dz * dz;
        const double cos2 = dz * dz / r2;
        return kAnisotropyScale * (3.0 * cos2 - 1.0) / (r2 * std::sqrt(r2));
    });
}

double sample_decorrelated_coupling(const GeometryParams& g, Rng& rng) {
    std::uniform_real_distribution<double> uniform;
    const double r = pair_distance_quantile(uniform(rng), g);
    const double u = 2.0 * uniform(rng) - 1.0;
    return kAnisotropyScale * (3.0 * u * u - 1.0) / (r * r * r);
}

SymmetricMatrix sample_decorrelated(std::size_t n, double blockade_radius, Rng& rng) {
    const GeometryParams g = GeometryParams::make(n, blockade_radius);
    return SymmetricMatrix::build(n, [&](std::size_t, std::size_t) { return sample_decorrelated_coupling(g, rng); });
}

SymmetricMatrix sample_goe(std::size_t n, double sigma, Rng& rng) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sample_goe: sigma must be > 0");
    std::normal_distribution<double> normal(0.0, sigma / std::numbers::sqrt2);
    return SymmetricMatrix::build(n, [&](std::size_t, std::size_t) { return normal(rng); });
}

SymmetricMatrix sample_levy1(std::size_t n, Rng& rng) {
    std::cauchy_distribution<double> cauchy(0.0, std::numbers::pi / static_cast<double>(n));
    return SymmetricMatrix::build(n, [&](std::size_t, std::size_t) { return cauchy(rng); });
}

SymmetricMatrix sample_realization(const EnsembleSpec& spec, std::uint64_t stream) {
    Rng rng(stream);
    switch (spec.kind) {
        case EnsembleKind::rydberg: {
            CloudConfig c;
            c.n_atoms = spec.n_atoms;
            c.blockade_radius = spec.blockade_radius;
            c.seed = stream;
            c.max_attempts = spec.max_attempts;
            return build_rydberg(sample_cloud(c, rng));
        }
        case EnsembleKind::decorrelated: return sample_decorrelated(spec.n_atoms, spec.blockade_radius, rng);
        case EnsembleKind::goe: return sample_goe(spec.n_atoms, spec.resolved_goe_sigma(), rng);
        case EnsembleKind::levy1: return sample_levy1(spec.n_atoms, rng);
    }
    throw std::logic_error("sample_realization: unhandled ensemble");
}

}  // namespace rydspec
