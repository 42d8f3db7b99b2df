#include "rydspec/cmaes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace rydspec {

CmaesResult cmaes_minimize(const std::function<double(const Eigen::VectorXd&)>& objective, const Eigen::VectorXd& x0,
                           const CmaesSettings& s) {
    const auto n = static_cast<int>(x0.size());
    const double nd = n;
    const int lambda = s.population > 0 ? static_cast<int>(s.population) : 4 + static_cast<int>(3.0 * std::log(nd));
    const int mu = lambda / 2;

    Eigen::VectorXd weights(mu);
    for (int i = 0; i < mu; ++i) weights(i) = std::log(mu + 0.5) - std::log(i + 1.0);
    weights /= weights.sum();
    const double mueff = 1.0 / weights.squaredNorm();

    const double cc = (4.0 + mueff / nd) / (nd + 4.0 + 2.0 * mueff / nd);
    const double cs = (mueff + 2.0) / (nd + mueff + 5.0);
    const double c1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + mueff);
    const double cmu = std::min(1.0 - c1, 2.0 * (mueff - 2.0 + 1.0 / mueff) / ((nd + 2.0) * (nd + 2.0) + mueff));
    const double damps = 1.0 + 2.0 * std::max(0.0, std::sqrt((mueff - 1.0) / (nd + 1.0)) - 1.0) + cs;
    const double chin = std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));

    std::mt19937_64 rng(s.seed);
    std::normal_distribution<double> normal;

    Eigen::VectorXd mean = x0;
    double sigma = s.initial_step;
    Eigen::VectorXd pc = Eigen::VectorXd::Zero(n), ps = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n, n), B = C;
    Eigen::VectorXd D = Eigen::VectorXd::Ones(n);

    CmaesResult best;
    best.x = x0;
    best.value = objective(x0);
    best.evaluations = 1;

    std::vector<Eigen::VectorXd> xs(lambda), zs(lambda);
    std::vector<double> fs(lambda);
    std::vector<int> order(lambda);

    for (std::size_t it = 0; it < s.max_iterations && best.value > s.target; ++it) {
        for (int k = 0; k < lambda; ++k) {
            Eigen::VectorXd z(n);
            for (int i = 0; i < n; ++i) z(i) = normal(rng);
            zs[k] = z;
            xs[k] = mean + sigma * (B * D.asDiagonal() * z);
            fs[k] = objective(xs[k]);
            ++best.evaluations;
            if (fs[k] < best.value) {
                best.value = fs[k];
                best.x = xs[k];
            }
        }
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });

        const Eigen::VectorXd old = mean;
        mean.setZero();
        Eigen::VectorXd zmean = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < mu; ++i) {
            mean += weights(i) * xs[order[i]];
            zmean += weights(i) * zs[order[i]];
        }

        ps = (1.0 - cs) * ps + std::sqrt(cs * (2.0 - cs) * mueff) * (B * zmean);
        const double psn = ps.norm() / std::sqrt(1.0 - std::pow(1.0 - cs, 2.0 * (it + 1)));
        const bool hsig = psn / chin < 1.4 + 2.0 / (nd + 1.0);
        const Eigen::VectorXd step = (mean - old) / sigma;
        pc = (1.0 - cc) * pc + (hsig ? std::sqrt(cc * (2.0 - cc) * mueff) : 0.0) * step;

        Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < mu; ++i) {
            const Eigen::VectorXd y = (xs[order[i]] - old) / sigma;
            rank_mu += weights(i) * y * y.transpose();
        }
        C = (1.0 - c1 - cmu) * C + c1 * (pc * pc.transpose() + (hsig ? 0.0 : cc * (2.0 - cc)) * C) + cmu * rank_mu;
        sigma *= std::exp((cs / damps) * (ps.norm() / chin - 1.0));

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (C + C.transpose()));
        B = eig.eigenvectors();
        D = eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt();
        best.iterations = it + 1;
        if (sigma * D.maxCoeff() < s.x_tolerance * std::max(1.0, mean.norm())) break;
    }
    return best;
}

}  // namespace rydspec
