#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "rydspec/analytic.hpp"
#include "rydspec/cloud.hpp"
#include "rydspec/common.hpp"
#include "rydspec/symmetric_matrix.hpp"

namespace rydspec {

enum class EnsembleKind { rydberg, decorrelated, goe, levy1 };

std::string_view to_string(EnsembleKind kind);
EnsembleKind parse_ensemble_kind(std::string_view name);

struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::rydberg;
    std::size_t n_atoms = 0;
    double blockade_radius = 0.0;
    std::optional<double> goe_sigma;  // goe only; defaults to the variance match
    std::size_t max_attempts = 1000;  // rydberg cloud sampler

    // Throws std::invalid_argument on missing or inconsistent parameters.
    void validate() const;
    // sigma actually used for goe draws.
    double resolved_goe_sigma() const;

    bool operator==(const EnsembleSpec&) const = default;
};

// H_ij = A(cos theta_ij) / R_ij^3 with zero diagonal.
SymmetricMatrix build_rydberg(const AtomCloud& cloud);

// One coupling A(u) r^-3 with u uniform and r from the pair-distance law.
double sample_decorrelated_coupling(const GeometryParams& g, Rng& rng);

SymmetricMatrix sample_decorrelated(std::size_t n, double blockade_radius, Rng& rng);
// Off-diagonals normal with variance sigma^2 / 2; zero diagonal.
SymmetricMatrix sample_goe(std::size_t n, double sigma, Rng& rng);
// Off-diagonals Cauchy(0, pi/n); zero diagonal.
SymmetricMatrix sample_levy1(std::size_t n, Rng& rng);

// One realization drawn from a stream seeded with `stream`.
SymmetricMatrix sample_realization(const EnsembleSpec& spec, std::uint64_t stream);

}  // namespace rydspec
