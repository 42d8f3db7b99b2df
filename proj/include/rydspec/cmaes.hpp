#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace rydspec {

struct CmaesSettings {
    std::size_t population = 0;  // 0: default 4 + floor(3 ln n)
    std::size_t max_iterations = 300;
    double initial_step = 0.3;
    double target = 1e-24;  // stop once the objective falls below
    double x_tolerance = 1e-15;
    std::uint64_t seed = 20150101;
};

struct CmaesResult {
    Eigen::VectorXd x;
    double value = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
};

// (mu/mu_w, lambda) covariance matrix adaptation evolution strategy.
CmaesResult cmaes_minimize(const std::function<double(const Eigen::VectorXd&)>& objective, const Eigen::VectorXd& x0,
                           const CmaesSettings& settings = {});

}  // namespace rydspec
