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

#include "z2chaos/optimizer.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace z2chaos {

std::string optimizer_status_name(OptimizerStatus s) {
    switch (s) {
    case OptimizerStatus::GradientConverged:
        return "gradient-converged";
    case OptimizerStatus::CostConverged:
        return "cost-converged";
    case OptimizerStatus::MaxIterations:
        return "max-iterations";
    case OptimizerStatus::LineSearchFailed:
        return "line-search-failed";
    case OptimizerStatus::NotFinite:
        return "not-finite";
    }
    return "unknown";
}

void central_difference_gradient(const Objective &f, const Eigen::VectorXd &x,
                                 const Eigen::VectorXd &lower,
                                 const Eigen::VectorXd &upper, double step,
                                 Eigen::VectorXd &grad, int *evaluations) {
    const Eigen::Index n = x.size();
    grad.resize(n);
    Eigen::VectorXd probe = x;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double xp = std::min(x[i] + step, upper[i]);
        const double xm = std::max(x[i] - step, lower[i]);
        probe[i] = xp;
        const double fp = f(probe);
        probe[i] = xm;
        const double fm = f(probe);
        probe[i] = x[i];
        grad[i] = (fp - fm) / (xp - xm);
        if (evaluations != nullptr) {
            *evaluations += 2;
        }
    }
}

namespace {

Eigen::VectorXd project(const Eigen::VectorXd &x, const Eigen::VectorXd &lo,
                        const Eigen::VectorXd &hi) {
    return x.cwiseMax(lo).cwiseMin(hi);
}

} // namespace

OptimizerResult minimize_box(const Objective &f, Eigen::VectorXd x0,
                             const Eigen::VectorXd &lower,
                             const Eigen::VectorXd &upper,
                             const LbfgsbOptions &opts, const Gradient &grad) {
    const Eigen::Index n = x0.size();
    if (lower.size() != n || upper.size() != n) {
        throw std::invalid_argument("bound vectors do not match x0");
    }
    if ((lower.array() > upper.array()).any()) {
        throw std::invalid_argument("lower bound exceeds upper bound");
    }
    OptimizerResult res;
    Eigen::VectorXd x = project(x0, lower, upper);
    double fx = f(x);
    res.evaluations = 1;
    res.x = x;
    res.f = fx;
    if (!std::isfinite(fx)) {
        res.status = OptimizerStatus::NotFinite;
        return res;
    }
    auto gradient = [&](const Eigen::VectorXd &at, double f_at,
                        Eigen::VectorXd &out) {
        if (grad) {
            grad(at, f_at, out);
        } else {
            central_difference_gradient(f, at, lower, upper, opts.fd_step, out,
                                        &res.evaluations);
        }
    };
    Eigen::VectorXd g;
    gradient(x, fx, g);
    if (opts.keep_trace) {
        res.trace.push_back(fx);
    }

    std::deque<Eigen::VectorXd> s_hist;
    std::deque<Eigen::VectorXd> y_hist;
    std::deque<double> rho_hist;
    constexpr double kArmijo = 1e-4;

    for (int it = 0;; ++it) {
        const Eigen::VectorXd pg = project(x - g, lower, upper) - x;
        res.projected_gradient = pg.lpNorm<Eigen::Infinity>();
        if (!g.allFinite()) {
            res.status = OptimizerStatus::NotFinite;
            break;
        }
        if (res.projected_gradient < opts.g_tol) {
            res.status = OptimizerStatus::GradientConverged;
            break;
        }
        if (it >= opts.max_iter) {
            res.status = OptimizerStatus::MaxIterations;
            break;
        }

        Eigen::VectorXd free = Eigen::VectorXd::Ones(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            if ((x[i] <= lower[i] && g[i] > 0) ||
                (x[i] >= upper[i] && g[i] < 0)) {
                free[i] = 0.0;
            }
        }

        bool accepted = false;
        Eigen::VectorXd x_new;
        double f_new = fx;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            // Two-loop recursion restricted to the free variables.
            Eigen::VectorXd q = g.cwiseProduct(free);
            const std::size_t m = s_hist.size();
            std::vector<double> alpha(m);
            for (std::size_t k = m; k-- > 0;) {
                alpha[k] = rho_hist[k] * s_hist[k].dot(q);
                q -= alpha[k] * y_hist[k];
            }
            if (m > 0) {
                q *= s_hist.back().dot(y_hist.back()) /
                     y_hist.back().squaredNorm();
            }
            for (std::size_t k = 0; k < m; ++k) {
                const double beta = rho_hist[k] * y_hist[k].dot(q);
                q += (alpha[k] - beta) * s_hist[k];
            }
            Eigen::VectorXd d = -q.cwiseProduct(free);
            const double slope = g.dot(d);
            if (!(slope < -1e-16 * g.norm() * d.norm())) {
                d = -g.cwiseProduct(free);
                s_hist.clear();
                y_hist.clear();
                rho_hist.clear();
            }
            double step = 1.0;
            if (s_hist.empty()) {
                const double dn = d.lpNorm<Eigen::Infinity>();
                step = dn > 1.0 ? 1.0 / dn : 1.0;
            }
            for (int ls = 0; ls < opts.max_line_search; ++ls) {
                x_new = project(x + step * d, lower, upper);
                const Eigen::VectorXd sx = x_new - x;
                if (sx.lpNorm<Eigen::Infinity>() == 0.0) {
                    break;
                }
                f_new = f(x_new);
                ++res.evaluations;
                if (!std::isfinite(f_new)) {
                    res.status = OptimizerStatus::NotFinite;
                    res.x = x;
                    res.f = fx;
                    res.iterations = it;
                    return res;
                }
                if (f_new <= fx + kArmijo * g.dot(sx)) {
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                if (s_hist.empty()) {
                    break;
                }
                s_hist.clear();
                y_hist.clear();
                rho_hist.clear();
            }
        }
        if (!accepted) {
            res.status = OptimizerStatus::LineSearchFailed;
            res.iterations = it;
            break;
        }

        Eigen::VectorXd g_new;
        gradient(x_new, f_new, g_new);
        const Eigen::VectorXd s = x_new - x;
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
            s_hist.push_back(s);
            y_hist.push_back(y);
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opts.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        const double df = fx - f_new;
        x = x_new;
        fx = f_new;
        g = g_new;
        res.iterations = it + 1;
        if (opts.keep_trace) {
            res.trace.push_back(fx);
        }
        if (df < opts.f_tol) {
            res.projected_gradient =
                (project(x - g, lower, upper) - x).lpNorm<Eigen::Infinity>();
            res.status = res.projected_gradient < opts.g_tol
                             ? OptimizerStatus::GradientConverged
                             : OptimizerStatus::CostConverged;
            break;
        }
    }
    res.x = x;
    res.f = fx;
    return res;
}

} // namespace z2chaos
