#pragma once

#include <cstdint>
#include <numbers>
#include <random>

namespace rydspec {

using Rng = std::mt19937_64;

// Selects between the serial reference path and the OpenMP kernel.
enum class Execution { serial, parallel };

// Anisotropy prefactor 9*sqrt(3)/(8*pi) of the dipolar coupling.
inline constexpr double kAnisotropyScale = 9.0 * std::numbers::sqrt3 / (8.0 * std::numbers::pi);

// 27*sqrt(3)/(8*pi); the anisotropy is kCouplingConstant * (u^2 - 1/3).
inline constexpr double kCouplingConstant = 3.0 * kAnisotropyScale;

std::uint64_t splitmix64(std::uint64_t x);

// Seed for realization `index` of a campaign with global seed `seed`.
// Depends only on the pair, so shards can be run in any order.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

inline Rng make_stream(std::uint64_t seed, std::uint64_t index) { return Rng(stream_seed(seed, index)); }

// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads();
void set_threads(int n);

}  // namespace rydspec
