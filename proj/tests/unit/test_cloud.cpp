#include <doctest.h>

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>

#include "rydspec/analytic.hpp"
#include "rydspec/cloud.hpp"

using namespace rydspec;

namespace {
double norm(const Vec3& v) { return std::hypot(v[0], v[1], v[2]); }
}  // namespace

TEST_CASE("cloud radius holds N atoms at unit density") {
    CHECK(cloud_radius(1000) == doctest::Approx(6.2035049089940002).epsilon(1e-14));
    CHECK(cloud_radius(1) == doctest::Approx(std::cbrt(3.0 / (4.0 * std::numbers::pi))));
}

TEST_CASE("single atom lies inside its ball") {
    CloudConfig c;
    c.n_atoms = 1;
    c.seed = 4;
    const auto cloud = sample_cloud(c);
    REQUIRE(cloud.size() == 1);
    CHECK(norm(cloud.positions[0]) <= 0.6204);
    CHECK(pair_distances(cloud).empty());
}

TEST_CASE("two blockaded atoms keep their distance") {
    CloudConfig c;
    c.n_atoms = 2;
    c.blockade_radius = 0.5;
    for (std::uint64_t s = 0; s < 200; ++s) {
        c.seed = s;
        const auto cloud = sample_cloud(c);
        const double r = cloud_radius(2);
        CHECK(norm(cloud.positions[0]) <= r);
        CHECK(norm(cloud.positions[1]) <= r);
        CHECK(pair_distances(cloud)[0] > 0.5);
    }
}

TEST_CASE("hard core holds on every draw") {
    CloudConfig c;
    c.n_atoms = 800;
    c.blockade_radius = 0.75;
    for (std::uint64_t s = 0; s < 10; ++s) {
        c.seed = 100 + s;
        const auto cloud = sample_cloud(c);
        CHECK(min_pair_distance(cloud) > 0.75);
        for (const auto& p : cloud.positions) CHECK(norm(p) <= cloud.cloud_radius);
    }
}

TEST_CASE("same seed gives the same cloud bit for bit") {
    CloudConfig c;
    c.n_atoms = 300;
    c.blockade_radius = 0.5;
    c.seed = 77;
    const auto a = sample_cloud(c), b = sample_cloud(c);
    CHECK(a.positions == b.positions);
    c.seed = 78;
    CHECK(sample_cloud(c).positions != a.positions);
}

TEST_CASE("infeasible packing is rejected up front") {
    CloudConfig c;
    c.n_atoms = 1000;
    c.blockade_radius = 1.8;
    CHECK(packing_fraction(1000, 1.8) > 0.3);
    CHECK_THROWS_AS(validate(c), FeasibilityError);
    CHECK_THROWS_AS(sample_cloud(c), FeasibilityError);
    c.blockade_radius = -1.0;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c.blockade_radius = 0.0;
    c.n_atoms = 0;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
}

TEST_CASE("tiny attempt budget exhausts the sampler") {
    CloudConfig c;
    c.n_atoms = 1000;
    c.blockade_radius = 0.8;
    c.max_attempts = 1;
    c.seed = 3;
    CHECK_THROWS_AS(sample_cloud(c), SamplingExhausted);
}

TEST_CASE("pair distances of fixed configurations") {
    AtomCloud cloud;
    cloud.positions = {{0, 0, 0}, {0, 0, 1}};
    const auto d = pair_distances(cloud);
    REQUIRE(d.size() == 1);
    CHECK(d[0] == 1.0);

    cloud.positions = {{0, 0, 0}, {1, 0.5, 0}, {-0.3, 2, 1}};
    const auto t = pair_distances(cloud);
    REQUIRE(t.size() == 3);
    // order (0,1), (0,2), (1,2)
    CHECK(t[0] <= t[1] + t[2]);
    CHECK(t[1] <= t[0] + t[2]);
    CHECK(t[2] <= t[0] + t[1]);
    CHECK(t[2] == doctest::Approx(std::hypot(1.3, 1.5, 1.0)));
}

TEST_CASE("coordinate marginal of an unblockaded cloud is ball-uniform") {
    // Marginal CDF of one coordinate of a uniform point in a ball of radius R:
    // 1/2 + (3x/R - x^3/R^3)/4.
    CloudConfig c;
    c.n_atoms = 1000;
    const double r = cloud_radius(1000);
    constexpr int kBins = 20;
    std::vector<double> counts(kBins, 0.0);
    std::size_t n = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        c.seed = 5000 + s;
        for (const auto& p : sample_cloud(c).positions) {
            const double x = p[0] / r;
            const double u = 0.5 + 0.25 * (3.0 * x - x * x * x);
            counts[std::min(kBins - 1, static_cast<int>(u * kBins))] += 1.0;
            ++n;
        }
    }
    const double expected = static_cast<double>(n) / kBins;
    double chi2 = 0.0;
    for (double k : counts) chi2 += (k - expected) * (k - expected) / expected;
    const boost::math::chi_squared dist(kBins - 1);
    CHECK(boost::math::cdf(complement(dist, chi2)) > 0.01);
}

TEST_CASE("pair distances follow the ball pair law") {
    CloudConfig c;
    c.n_atoms = 1000;
    const auto g = GeometryParams::make(1000, 0.0);
    std::vector<double> all;
    for (std::uint64_t s = 0; s < 12; ++s) {
        c.seed = 900 + s;
        const auto d = pair_distances(sample_cloud(c));
        all.insert(all.end(), d.begin(), d.end());
    }
    std::sort(all.begin(), all.end());
    double ks = 0.0;
    for (int k = 1; k < 200; ++k) {
        const double r = g.diameter * k / 200.0;
        const double emp = static_cast<double>(std::lower_bound(all.begin(), all.end(), r) - all.begin()) / all.size();
        ks = std::max(ks, std::fabs(emp - pair_distance_cdf(r, g)));
    }
    CHECK(ks < 0.01);
}
