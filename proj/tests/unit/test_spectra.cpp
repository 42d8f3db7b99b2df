#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rydspec/campaign.hpp"
#include "rydspec/ensembles.hpp"
#include "rydspec/spectra.hpp"

using namespace rydspec;

namespace {

std::vector<std::vector<double>> cauchy_spectra(std::size_t count, std::size_t n, std::uint64_t seed) {
    std::vector<std::vector<double>> out;
    Rng rng(seed);
    std::cauchy_distribution<double> c(0.0, 1.0);
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<double> v(n);
        for (auto& x : v) x = c(rng);
        std::sort(v.begin(), v.end());
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace

TEST_CASE("two by two spectrum") {
    const auto m = SymmetricMatrix::from_dense(2, {0.0, 0.3, 0.3, 0.0});
    const auto ev = eigenvalues(m);
    CHECK(ev[0] == doctest::Approx(-0.3));
    CHECK(ev[1] == doctest::Approx(0.3));
}

TEST_CASE("eigenvalues agree with an independent solver") {
    for (std::size_t n : {50ul, 400ul}) {
        const auto m = sample_realization({EnsembleKind::rydberg, n, 0.25}, 23);
        const auto ev = eigenvalues(m);
        const Eigen::Map<const Eigen::MatrixXd> a(m.data().data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
        for (std::size_t k = 0; k < n; ++k)
            CHECK(std::fabs(ev[k] - es.eigenvalues()[static_cast<Eigen::Index>(k)]) <= 1e-12 * m.max_abs() * n);
    }
}

TEST_CASE("trace, Frobenius norm and residuals") {
    const auto m = sample_realization({EnsembleKind::rydberg, 300, 0.25}, 17);
    const auto ev = eigenvalues(m);
    CHECK(std::is_sorted(ev.begin(), ev.end()));
    const double sum = std::accumulate(ev.begin(), ev.end(), 0.0);
    CHECK(std::fabs(sum) <= 1e-8 * 300 * m.max_abs());
    double sq = 0.0;
    for (double v : ev) sq += v * v;
    CHECK(sq == doctest::Approx(m.frobenius_squared()).epsilon(1e-10));

    const auto pairs = eigenpairs(m);
    const std::size_t n = m.order();
    const double norm = std::sqrt(m.frobenius_squared());
    for (std::size_t k : {0ul, 150ul, 299ul}) {
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double hv = 0.0;
            for (std::size_t j = 0; j < n; ++j) hv += m(i, j) * pairs.vectors[k * n + j];
            const double r = hv - pairs.values[k] * pairs.vectors[k * n + i];
            res += r * r;
        }
        CHECK(std::sqrt(res) <= 1e-10 * norm);
    }
}

TEST_CASE("spectrum is invariant under relabelling the atoms") {
    CloudConfig c;
    c.n_atoms = 200;
    c.blockade_radius = 0.3;
    c.seed = 21;
    auto cloud = sample_cloud(c);
    const auto a = eigenvalues(build_rydberg(cloud));
    Rng rng(5);
    std::shuffle(cloud.positions.begin(), cloud.positions.end(), rng);
    const auto b = eigenvalues(build_rydberg(cloud));
    const double scale = build_rydberg(cloud).max_abs();
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::fabs(a[i] - b[i]) <= 1e-10 * scale * 200);
}

TEST_CASE("accumulator merge is commutative, associative and has an identity") {
    const auto spectra = cauchy_spectra(30, 200, 1);
    SpectrumAccumulator a, b, c, all;
    for (std::size_t k = 0; k < 30; ++k) {
        (k < 10 ? a : k < 20 ? b : c).accumulate(spectra[k]);
        all.accumulate(spectra[k]);
    }
    const auto ab = SpectrumAccumulator::merged(a, b);
    const auto ba = SpectrumAccumulator::merged(b, a);
    CHECK(ab.same_counts(ba));
    const auto left = SpectrumAccumulator::merged(ab, c);
    const auto right = SpectrumAccumulator::merged(a, SpectrumAccumulator::merged(b, c));
    CHECK(left.same_counts(right));
    CHECK(left.same_counts(all));
    CHECK(SpectrumAccumulator::merged(a, SpectrumAccumulator{}).same_counts(a));
    CHECK(left.realizations() == 30);
    CHECK(left.core_moments().mean == doctest::Approx(all.core_moments().mean).epsilon(1e-12));
    CHECK(left.core_moments().skewness() == doctest::Approx(all.core_moments().skewness()).epsilon(1e-9));

    DosBinning other;
    other.lin_bins = 999;
    SpectrumAccumulator d(other);
    CHECK_THROWS_AS(a.merge(d), BinningMismatch);
}

TEST_CASE("four shards equal one sequential run") {
    const EnsembleSpec spec{EnsembleKind::decorrelated, 100, 0.0};
    const auto whole = run_ensemble(spec, 100, 9);
    SpectrumAccumulator merged;
    for (std::size_t s = 0; s < 4; ++s) merged.merge(accumulate_dos(run_ensemble(spec, 25, 9, 25 * s).spectra));
    CHECK(merged.same_counts(accumulate_dos(whole.spectra)));
}

TEST_CASE("density plus tail mass is one") {
    const auto acc = accumulate_dos(cauchy_spectra(20, 500, 2));
    const auto d = dos_density(acc);
    double mass = d.tail_mass;
    for (std::size_t i = 0; i < d.density.size(); ++i) mass += d.density[i] * (d.right[i] - d.left[i]);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.tail_mass > 0.0);
    for (int sign : {-1, 1}) {
        const auto l = dos_log_density(acc, sign);
        for (double v : l.density) CHECK(v >= 0.0);
    }
}

TEST_CASE("tail slope of Cauchy samples is minus two") {
    const auto acc = accumulate_dos(cauchy_spectra(200, 1000, 3));
    const auto t = tail_exponent(acc, std::pow(10.0, 1.5), 1e3);
    CHECK(t.negative.slope == doctest::Approx(-2.0).epsilon(0.075));
    CHECK(t.positive.slope == doctest::Approx(-2.0).epsilon(0.075));
    CHECK(t.negative.bins_used >= 10);
}

TEST_CASE("bounded spectra have no heavy tail") {
    // semicircle radius sqrt(2 * 200) * 0.1 = 2: nothing to fit beyond it
    std::vector<std::vector<double>> spectra;
    for (std::uint64_t k = 0; k < 20; ++k) spectra.push_back(eigenvalues(sample_realization({EnsembleKind::goe, 200, 0.0, 0.1}, k)));
    const auto acc = accumulate_dos(spectra);
    CHECK_THROWS_AS(tail_exponent(acc, 3.0, 30.0), InsufficientTailData);
    CHECK_THROWS_AS(tail_exponent(acc, 1e2, 1e3), InsufficientTailData);
}

TEST_CASE("quantiles and support width of a uniform sample") {
    std::vector<double> v;
    for (int i = 0; i < 100000; ++i) v.push_back(-10.0 + 20.0 * (i + 0.5) / 100000.0);
    const auto acc = accumulate_dos(std::vector<std::vector<double>>{v});
    CHECK(dos_quantile(acc, 0.5) == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(dos_quantile(acc, 0.25) == doctest::Approx(-5.0).epsilon(1e-3));
    CHECK(support_width(acc) == doctest::Approx(19.8).epsilon(1e-3));

    // a point mass far outside the linear window lands in the log bins
    std::vector<double> w(1000, 0.0);
    for (int i = 0; i < 10; ++i) w[i] = -500.0;
    const auto acc2 = accumulate_dos(std::vector<std::vector<double>>{w});
    CHECK(dos_quantile(acc2, 0.005) == doctest::Approx(-500.0).epsilon(0.06));
}

TEST_CASE("core moments") {
    RunningMoments m;
    for (double x : {1.0, 2.0, 3.0, 10.0}) m.add(x);
    CHECK(m.mean == doctest::Approx(4.0));
    CHECK(m.variance() == doctest::Approx(12.5));
    CHECK(m.skewness() > 0.0);
}
