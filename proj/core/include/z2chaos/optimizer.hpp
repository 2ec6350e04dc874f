// Copyright 2026 The z2chaos Authors
//
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

#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace z2chaos {

using Objective = std::function<double(const Eigen::VectorXd &)>;
using Gradient =
    std::function<void(const Eigen::VectorXd &, double f, Eigen::VectorXd &)>;

struct LbfgsbOptions {
    int max_iter = 2000;
    double g_tol = 1e-8;    // infinity norm of the projected gradient
    double f_tol = 1e-12;   // absolute cost change over one iteration
    double fd_step = 1e-6;  // central-difference step
    int memory = 10;
    int max_line_search = 40;
    bool keep_trace = true;
};

enum class OptimizerStatus {
    GradientConverged,
    CostConverged,
    MaxIterations,
    LineSearchFailed,
    NotFinite,
};

std::string optimizer_status_name(OptimizerStatus s);

struct OptimizerResult {
    Eigen::VectorXd x;
    double f = 0.0;
    int iterations = 0;
    int evaluations = 0;
    double projected_gradient = 0.0;
    OptimizerStatus status = OptimizerStatus::MaxIterations;
    std::vector<double> trace; // accepted costs, starting at x0

    [[nodiscard]] bool converged() const {
        return status == OptimizerStatus::GradientConverged ||
               status == OptimizerStatus::CostConverged;
    }
};

/// Central finite differences, clipped so each probe stays inside the box.
void central_difference_gradient(const Objective &f, const Eigen::VectorXd &x,
                                 const Eigen::VectorXd &lower,
                                 const Eigen::VectorXd &upper, double step,
                                 Eigen::VectorXd &grad, int *evaluations);

/// Projected L-BFGS on a box: the quasi-Newton step acts on free variables,
/// variables pinned at a bound with an outward gradient are held, and a
/// backtracking Armijo search runs along the projected path.
///
/// When no gradient is supplied it is estimated by central differences.
/// Accepted iterates never increase the cost. A non-finite cost stops the
/// run with NotFinite and the best point seen so far.
OptimizerResult minimize_box(const Objective &f, Eigen::VectorXd x0,
                             const Eigen::VectorXd &lower,
                             const Eigen::VectorXd &upper,
                             const LbfgsbOptions &opts = {},
                             const Gradient &grad = nullptr);

} // namespace z2chaos
