#include "hamlock/solvers.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

namespace hamlock {

FlowTrajectory descend(const Sequence& u0, const SystemModel& m, const OperatorA& A,
                       int steps, const DescentControl& ctrl) {
    if (steps < 1) throw ConfigError("descent needs at least one step");
    FlowTrajectory traj;
    Sequence u = u0;
    double f = action(u, m);
    double h = ctrl.h0;
    const double h_cap = std::max(ctrl.h0, 1.0);

    auto record = [&](const Sequence& v, double fv, double gn, double step) {
        if (ctrl.record_iterates)
            traj.iterates.push_back(v);
        else if (traj.iterates.empty())
            traj.iterates.push_back(v);
        else
            traj.iterates.back() = v;
        traj.actions.push_back(fv);
        traj.grad_norms.push_back(gn);
        traj.step_sizes.push_back(step);
    };

    Sequence gl2 = restrict_to(grad_l2(u, m), A.window());
    Sequence g = gl2.is_zero() ? gl2 : A.solve(gl2);
    double gn2 = std::max(0.0, inner_l2(gl2, g));
    record(u, f, std::sqrt(gn2), 0.0);

    for (int k = 0; k < steps; ++k) {
        double gn = std::sqrt(gn2);
        if (gn <= ctrl.tol) {
            traj.reached_tolerance = true;
            break;
        }
        if (ctrl.max_move > 0) h = std::min(h, ctrl.max_move / gn);
        // Backtrack until the Armijo fraction of the expected decrease holds.
        bool accepted = false;
        Sequence u_next = u;
        double f_next = f;
        while (h >= ctrl.h_min) {
            Sequence cand = u;
            cand.axpy(-h, g);
            double fc = action(cand, m);
            if (fc <= f - ctrl.armijo * h * gn2) {
                u_next = std::move(cand);
                f_next = fc;
                accepted = true;
                break;
            }
            h *= 0.5;
        }
        if (!accepted) {
            traj.stagnated = true;
            break;
        }
        u = std::move(u_next);
        f = f_next;
        gl2 = restrict_to(grad_l2(u, m), A.window());
        g = gl2.is_zero() ? gl2 : A.solve(gl2);
        gn2 = std::max(0.0, inner_l2(gl2, g));
        record(u, f, std::sqrt(gn2), h);
        h = std::min(2.0 * h, h_cap);
    }
    return traj;
}

namespace {

Eigen::SparseMatrix<double> newton_jacobian(const Sequence& u, const SystemModel& m,
                                            const Window& w) {
    const int n = m.dim();
    const long sites = w.size();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(sites * (n * n + 2 * n));
    for (long s = 0; s < sites; ++s) {
        long t = w.lo + s;
        Eigen::MatrixXd D = -2.0 * Eigen::MatrixXd::Identity(n, n) - m.L(t) +
                            m.hessian(t, u.value(t));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (D(a, b) != 0.0) trip.emplace_back(s * n + a, s * n + b, D(a, b));
        if (s + 1 < sites) {
            for (int a = 0; a < n; ++a) {
                trip.emplace_back(s * n + a, (s + 1) * n + a, 1.0);
                trip.emplace_back((s + 1) * n + a, s * n + a, 1.0);
            }
        }
    }
    Eigen::SparseMatrix<double> J(sites * n, sites * n);
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
}

Eigen::VectorXd pack_window(const Sequence& u, const Window& w, int n) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(w.size() * n);
    if (u.is_zero()) return x;
    if (u.first() < w.lo || u.last() > w.hi)
        throw NumericsError("seed support exceeds the solver window");
    for (long t = u.first(); t <= u.last(); ++t) x.segment((t - w.lo) * n, n) = u.site(t);
    return x;
}

Eigen::VectorXd residual_window(const Eigen::VectorXd& x, const SystemModel& m,
                                const Window& w, int n) {
    const long sites = w.size();
    Eigen::VectorXd r(sites * n);
    for (long s = 0; s < sites; ++s) {
        long t = w.lo + s;
        Eigen::VectorXd xc = x.segment(s * n, n);
        Eigen::VectorXd xl = Eigen::VectorXd::Zero(n);
        if (s > 0) xl = x.segment((s - 1) * n, n);
        Eigen::VectorXd xr = Eigen::VectorXd::Zero(n);
        if (s + 1 < sites) xr = x.segment((s + 1) * n, n);
        r.segment(s * n, n) = (xr - 2.0 * xc + xl) - m.L(t) * xc + m.Vx(t, xc);
    }
    return r;
}

double sup_norm_vec(const Eigen::VectorXd& x, int n) {
    double s = 0;
    for (long i = 0; i < x.size(); i += n) s = std::max(s, x.segment(i, n).norm());
    return s;
}

}  // namespace

SolveReport newton_refine(const Sequence& u0, const SystemModel& m, const Window& w,
                          const NewtonOptions& opts) {
    if (opts.tol_res <= 0) throw ConfigError("newton residual tolerance must be positive");
    const int n = m.dim();
    SolveReport rep;
    rep.window_used = std::max(std::labs(w.lo), std::labs(w.hi));

    Eigen::VectorXd x = pack_window(u0, w, n);
    Eigen::VectorXd F = residual_window(x, m, w, n);
    double fnorm = F.norm();
    rep.residual_sup = sup_norm_vec(F, n);
    rep.residual_history.push_back(rep.residual_sup);

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    int it = 0;
    while (rep.residual_sup > opts.tol_res && it < opts.max_iter) {
        Sequence u_cur(n, w.lo, std::vector<double>(x.data(), x.data() + x.size()));
        lu.compute(newton_jacobian(u_cur, m, w));
        if (lu.info() != Eigen::Success) {
            rep.singular_jacobian = true;
            break;
        }
        Eigen::VectorXd step = lu.solve(-F);
        double lambda = 1.0;
        bool accepted = false;
        for (int h = 0; h <= opts.max_halvings; ++h) {
            Eigen::VectorXd x_try = x + lambda * step;
            Eigen::VectorXd F_try = residual_window(x_try, m, w, n);
            if (F_try.norm() < fnorm) {
                x = std::move(x_try);
                F = std::move(F_try);
                fnorm = F.norm();
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        ++it;
        if (!accepted) break;
        rep.residual_sup = sup_norm_vec(F, n);
        rep.residual_history.push_back(rep.residual_sup);
    }

    rep.solution = Sequence(n, w.lo, std::vector<double>(x.data(), x.data() + x.size()));
    rep.iterations = it;
    rep.converged = rep.residual_sup <= opts.tol_res;
    rep.action_value = action(rep.solution, m);
    double vnorm = norm_star(rep.solution, m);
    rep.zero_solution = vnorm <= 1e-6;
    if (rep.converged) {
        OperatorA A(m, w);
        Sequence gl2 = restrict_to(grad_l2(rep.solution, m), w);
        Sequence g = gl2.is_zero() ? gl2 : A.solve(gl2);
        rep.star_grad_norm = std::sqrt(std::max(0.0, inner_l2(gl2, g)));
    }
    return rep;
}

}  // namespace hamlock
