#pragma once

#include <vector>

#include "hamlock/functional.hpp"

namespace hamlock {

/// Record of a steepest-descent run: iterate i was produced by a step of
/// size step_sizes[i] (0 for the initial point). All lists share length.
struct FlowTrajectory {
    std::vector<Sequence> iterates;
    std::vector<double> actions;
    std::vector<double> grad_norms;  // ||grad_star||_* at each iterate
    std::vector<double> step_sizes;
    bool reached_tolerance = false;
    bool stagnated = false;  // backtracking underflowed below h_min
};

struct DescentControl {
    double h0 = 1.0;
    double tol = 1e-8;        // stop when ||grad_star||_* <= tol
    double armijo = 1e-4;
    double h_min = 1e-14;
    double max_move = 0;      // per-step displacement cap in ||.||_*; 0 = none
    bool record_iterates = true;  // keep full iterates, not just the last
};

/// Explicit Euler steps u <- u - h grad_star(u) with backtracking halving
/// of h until the action decreases by the Armijo fraction of h ||g||_*^2.
/// The recorded action list is non-increasing by construction.
FlowTrajectory descend(const Sequence& u0, const SystemModel& m, const OperatorA& A,
                       int steps, const DescentControl& ctrl = {});

struct NewtonOptions {
    double tol_res = 1e-10;  // sup-norm of the residual
    int max_iter = 60;
    int max_halvings = 30;
};

struct SolveReport {
    Sequence solution;
    double residual_sup = 0;
    double action_value = 0;
    double star_grad_norm = 0;
    std::vector<double> residual_history;  // sup-norm per iteration, incl. start
    int iterations = 0;
    bool converged = false;
    bool singular_jacobian = false;
    /// ||solution||_* <= 1e-6: the iteration collapsed onto the zero orbit.
    bool zero_solution = false;
    long window_used = 0;  // halfwidth of the bounding window

    SolveReport() : solution(1) {}
};

/// Damped Newton on the equation residual. The Jacobian d^2 - L + Vxx is
/// block-tridiagonal and is re-factored each iteration; steps are halved
/// (up to max_halvings) until the residual norm decreases.
SolveReport newton_refine(const Sequence& u0, const SystemModel& m, const Window& w,
                          const NewtonOptions& opts = {});

}  // namespace hamlock
