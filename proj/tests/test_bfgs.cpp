// Copyright 2026 The decpos Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>
#include <Eigen/Dense>
#include <cmath>

#include "decpos/bfgs.hpp"

using namespace decpos;
using Catch::Matchers::WithinAbs;

TEST_CASE("quadratic bowl converges to the analytic minimum", "[bfgs]") {
    // f(x) = 0.5 x'Ax - b'x with A = diag(1, 10), minimum at A^{-1} b.
    auto f = [](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        const Eigen::Vector2d b(1.0, 2.0);
        Eigen::Vector2d ax(x[0], 10.0 * x[1]);
        grad = ax - b;
        return 0.5 * x.dot(ax) - b.dot(x);
    };
    const BfgsResult result = minimize_bfgs(f, Eigen::Vector2d(5.0, -3.0));
    REQUIRE(result.converged);
    REQUIRE_THAT(result.x[0], WithinAbs(1.0, 1e-5));
    REQUIRE_THAT(result.x[1], WithinAbs(0.2, 1e-5));
    REQUIRE(result.iterations < 50);
}

TEST_CASE("rosenbrock converges from the standard start", "[bfgs]") {
    auto f = [](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        const double a = 1.0, b = 100.0;
        const double t1 = a - x[0];
        const double t2 = x[1] - x[0] * x[0];
        grad.resize(2);
        grad[0] = -2.0 * t1 - 4.0 * b * x[0] * t2;
        grad[1] = 2.0 * b * t2;
        return t1 * t1 + b * t2 * t2;
    };
    Eigen::VectorXd x0(2);
    x0 << -1.2, 1.0;
    const BfgsResult result = minimize_bfgs(f, x0);
    REQUIRE(result.converged);
    REQUIRE_THAT(result.x[0], WithinAbs(1.0, 1e-4));
    REQUIRE_THAT(result.x[1], WithinAbs(1.0, 1e-4));
}

TEST_CASE("already-optimal start returns immediately", "[bfgs]") {
    auto f = [](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        grad = 2.0 * x;
        return x.squaredNorm();
    };
    const BfgsResult result = minimize_bfgs(f, Eigen::VectorXd::Zero(3));
    REQUIRE(result.converged);
    REQUIRE(result.iterations == 0);
    REQUIRE(result.value == 0.0);
}

TEST_CASE("identical inputs give identical iterates", "[bfgs]") {
    auto f = [](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        grad.resize(x.size());
        double v = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            v += std::cos(x[i]) + 0.1 * x[i] * x[i];
            grad[i] = -std::sin(x[i]) + 0.2 * x[i];
        }
        return v;
    };
    Eigen::VectorXd x0 = Eigen::VectorXd::Constant(4, 0.7);
    const BfgsResult a = minimize_bfgs(f, x0);
    const BfgsResult b = minimize_bfgs(f, x0);
    REQUIRE(a.x == b.x);
    REQUIRE(a.value == b.value);
    REQUIRE(a.iterations == b.iterations);
}

TEST_CASE("iteration budget is honored", "[bfgs]") {
    auto f = [](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        const double t2 = x[1] - x[0] * x[0];
        grad.resize(2);
        grad[0] = -2.0 * (1.0 - x[0]) - 400.0 * x[0] * t2;
        grad[1] = 200.0 * t2;
        return (1.0 - x[0]) * (1.0 - x[0]) + 100.0 * t2 * t2;
    };
    Eigen::VectorXd x0(2);
    x0 << -1.2, 1.0;
    BfgsOptions opts;
    opts.max_iterations = 3;
    const BfgsResult result = minimize_bfgs(f, x0, opts);
    REQUIRE(result.iterations <= 3);
    REQUIRE_FALSE(result.converged);
}

TEST_CASE("limited-memory variant matches on the standard problems",
          "[bfgs]") {
    auto rosenbrock = [](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        const double t1 = 1.0 - x[0];
        const double t2 = x[1] - x[0] * x[0];
        grad.resize(2);
        grad[0] = -2.0 * t1 - 400.0 * x[0] * t2;
        grad[1] = 200.0 * t2;
        return t1 * t1 + 100.0 * t2 * t2;
    };
    Eigen::VectorXd x0(2);
    x0 << -1.2, 1.0;
    const BfgsResult result = minimize_lbfgs(rosenbrock, x0);
    REQUIRE(result.converged);
    REQUIRE_THAT(result.x[0], WithinAbs(1.0, 1e-4));
    REQUIRE_THAT(result.x[1], WithinAbs(1.0, 1e-4));

    auto bowl = [](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        const Eigen::Vector2d b(1.0, 2.0);
        Eigen::Vector2d ax(x[0], 10.0 * x[1]);
        grad = ax - b;
        return 0.5 * x.dot(ax) - b.dot(x);
    };
    const BfgsResult bowl_fit = minimize_lbfgs(bowl, Eigen::Vector2d(5., -3.));
    REQUIRE(bowl_fit.converged);
    REQUIRE_THAT(bowl_fit.x[0], WithinAbs(1.0, 1e-5));
    REQUIRE_THAT(bowl_fit.x[1], WithinAbs(0.2, 1e-5));
}

TEST_CASE("limited-memory variant scales to high dimension", "[bfgs]") {
    // Ill-conditioned separable quadratic in 500 dimensions: the dense
    // method would carry a 500x500 inverse Hessian; the limited-memory
    // form must still converge to the analytic minimum x_i = 1/c_i.
    const int n = 500;
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c[i] = 1.0 + (i % 17) + 0.01 * i;
    auto f = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        grad = c.cwiseProduct(x) - Eigen::VectorXd::Ones(n);
        return 0.5 * x.dot(c.cwiseProduct(x)) - x.sum();
    };
    const BfgsResult result = minimize_lbfgs(f, Eigen::VectorXd::Zero(n));
    REQUIRE(result.converged);
    for (int i = 0; i < n; i += 37)
        REQUIRE_THAT(result.x[i], WithinAbs(1.0 / c[i], 1e-4));

    const BfgsResult again = minimize_lbfgs(f, Eigen::VectorXd::Zero(n));
    REQUIRE(again.x == result.x);  // determinism
}
