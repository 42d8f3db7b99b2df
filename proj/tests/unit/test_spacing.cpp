#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rydspec/analytic.hpp"
#include "rydspec/ensembles.hpp"
#include "rydspec/spacing.hpp"
#include "rydspec/spectra.hpp"

using namespace rydspec;

namespace {

std::vector<std::vector<double>> poisson_levels(std::size_t count, std::size_t n, std::uint64_t seed) {
    std::vector<std::vector<double>> out;
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<double> v(n);
        for (auto& x : v) x = u(rng);
        std::sort(v.begin(), v.end());
        out.push_back(std::move(v));
    }
    return out;
}

Window plain(double lo, double hi) { return {"w", {{lo, hi}}, 0.5 * (lo + hi)}; }

}  // namespace

TEST_CASE("unfolded Poisson levels have exponential spacings") {
    const auto levels = poisson_levels(200, 1000, 1);
    const auto s = unfold(levels, {plain(-40.0, 40.0)})[0];
    double mean = 0.0;
    for (double x : s) mean += x;
    mean /= s.size();
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-12));
    auto sorted = s;
    std::sort(sorted.begin(), sorted.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < sorted.size(); i += 7)
        ks = std::max(ks, std::fabs(static_cast<double>(i) / sorted.size() - (1.0 - std::exp(-sorted[i]))));
    CHECK(ks < 0.02);
    CHECK(delta_poisson(make_histogram(s)) < delta_wigner(make_histogram(s)));
}

TEST_CASE("picket fence unfolds to unit spacings") {
    // Realizations are the same fence shifted by a fraction of its step, so
    // the pooled counting function is close to linear.
    std::vector<std::vector<double>> levels;
    for (int r = 0; r < 100; ++r) {
        std::vector<double> v;
        for (int i = -200; i <= 200; ++i) v.push_back(0.1 * i + 0.001 * r);
        levels.push_back(v);
    }
    const auto s = unfold(levels, {plain(-15.0, 15.0)})[0];
    for (double x : s) CHECK(x == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("unfolded spacings have unit mean in every populated window") {
    const auto levels = poisson_levels(50, 2000, 5);
    const auto win = log_windows(0.05, 50.0, 6);
    const auto s = unfold(levels, win);
    for (const auto& w : s) {
        double m = 0.0;
        for (double x : w) m += x;
        CHECK(m / w.size() == doctest::Approx(1.0).epsilon(0.02));
    }
    CHECK_THROWS_AS(unfold(levels, {plain(60.0, 70.0)}), EmptyWindow);
}

TEST_CASE("log windows are disjoint and ordered") {
    const auto w = log_windows();
    REQUIRE(w.size() == 28);
    for (std::size_t i = 1; i < w.size(); ++i) {
        CHECK(w[i - 1].center < w[i].center);
        for (const auto& p : w[i].parts)
            for (const auto& q : w[i - 1].parts) CHECK((p.lo >= q.hi || q.lo >= p.hi));
    }
    const auto lit = literal_windows();
    CHECK(lit[0].contains(0.2));
    CHECK(!lit[0].contains(0.21));
    CHECK(lit[1].contains(100.0));
    CHECK(lit[1].contains(-100.0));
    CHECK(!lit[1].contains(99.0));
}

TEST_CASE("goe centre window follows Wigner-Dyson") {
    const double sigma = 1.0;
    const double lw = std::sqrt(2.0 * 1000) * sigma;
    std::vector<std::vector<double>> spectra;
    for (std::uint64_t k = 0; k < 20; ++k) spectra.push_back(eigenvalues(sample_realization({EnsembleKind::goe, 1000, 0.0, sigma}, k)));
    const auto s = unfold(spectra, {plain(-0.5 * lw, 0.5 * lw)})[0];
    const auto h = make_histogram(s);
    CHECK(delta_wigner(h) < 0.1);
    CHECK(delta_wigner(h) < delta_poisson(h));
}

TEST_CASE("rms deviation is zero to itself and one between the references") {
    SpacingHistogram p;
    p.density.resize(100);
    SpacingHistogram w = p;
    for (std::size_t i = 0; i < 100; ++i) {
        const double a = 0.05 * i, b = a + 0.05;
        p.density[i] = (std::exp(-a) - std::exp(-b)) / 0.05;
        const double k = std::numbers::pi / 4.0;
        w.density[i] = (std::exp(-k * a * a) - std::exp(-k * b * b)) / 0.05;
    }
    CHECK(delta_poisson(p) < 1e-3);
    CHECK(delta_wigner(w) < 1e-3);
    CHECK(delta_wigner(p) == doctest::Approx(1.0).epsilon(0.01));
    CHECK(delta_poisson(w) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("accumulator merge keeps raw spacings") {
    const auto levels = poisson_levels(20, 1000, 9);
    const Unfolder map(levels);
    const auto win = log_windows(0.05, 50.0, 4);
    SpacingAccumulator a(win), b(win), all(win);
    for (std::size_t k = 0; k < levels.size(); ++k) {
        (k % 2 ? a : b).accumulate(levels[k], map);
        all.accumulate(levels[k], map);
    }
    a.merge(b);
    for (std::size_t w = 0; w < win.size(); ++w) {
        CHECK(a.count(w) == all.count(w));
        auto x = a.spacings(w), y = all.spacings(w);
        std::sort(x.begin(), x.end());
        std::sort(y.begin(), y.end());
        for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == doctest::Approx(y[i]).epsilon(1e-12));
    }
    SpacingAccumulator other(log_windows(0.05, 50.0, 5));
    CHECK_THROWS(a.merge(other));
}

TEST_CASE("transition energies from synthetic deviation curves") {
    // Delta_P rises and Delta_WD falls with log10|lambda|; they cross at 0.5 on
    // the positive side and at 0.8 on the negative side.
    std::vector<WindowStats> stats;
    for (int k = 0; k < 10; ++k) {
        const double x = -1.0 + 0.3 * k;
        stats.push_back({std::pow(10.0, x), 500, 0.5 + 0.3 * (0.5 - x), 0.5 - 0.3 * (0.5 - x)});
        stats.push_back({-std::pow(10.0, x), 500, 0.5 + 0.2 * (0.8 - x), 0.5 - 0.2 * (0.8 - x)});
    }
    const auto r = transition_energies(stats);
    REQUIRE(r.plus.status == TransitionStatus::found);
    REQUIRE(r.minus.status == TransitionStatus::found);
    CHECK(*r.plus.energy == doctest::Approx(std::pow(10.0, 0.5)).epsilon(1e-6));
    CHECK(*r.minus.energy == doctest::Approx(-std::pow(10.0, 0.8)).epsilon(1e-6));
    CHECK(*r.minus.energy < 0.0);
    CHECK(*r.plus.energy > 0.0);
}

TEST_CASE("missing crossings and sparse sides") {
    std::vector<WindowStats> stats;
    for (int k = 0; k < 8; ++k) {
        const double x = -1.0 + 0.3 * k;
        stats.push_back({std::pow(10.0, x), 500, 0.9, 0.1 + 0.01 * k});  // Wigner-Dyson everywhere
        if (k < 3) stats.push_back({-std::pow(10.0, x), 500, 0.9, 0.1});
    }
    const auto r = transition_energies(stats);
    CHECK(r.plus.status == TransitionStatus::none_found);
    CHECK(r.plus.dominant == "wigner-dyson");
    CHECK(!r.plus.energy);
    CHECK(r.minus.status == TransitionStatus::insufficient_windows);

    std::vector<WindowStats> few(stats.begin(), stats.begin() + 4);
    CHECK_THROWS_AS(transition_energies(few), InsufficientWindows);
    // windows below the spacing threshold do not count
    for (auto& s : stats) s.count = 10;
    CHECK_THROWS_AS(transition_energies(stats), InsufficientWindows);
}
