#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>

#include "hamlock/index_set.hpp"
#include "hamlock/model.hpp"
#include "hamlock/sequence.hpp"

namespace hamlock {

/// <u,v>_* = sum <du(t-1), dv(t-1)> + sum <u(t), L(t) v(t)>.
double inner_star(const Sequence& u, const Sequence& v, const SystemModel& m);
double norm_star(const Sequence& u, const SystemModel& m);

/// ||u||_F^2 = sum_{t in F} (|du(t-1)|^2 + <u(t), L(t) u(t)>). Nonnegative;
/// with F covering the whole support it equals <u,u>_*.
double window_energy(const Sequence& u, const IndexSet& F, const SystemModel& m);

/// (A u)(t) = -d^2 u(t-1) + L(t) u(t), evaluated exactly on the support
/// dilated by one. Satisfies <u,v>_* = <A u, v>_2 for finitely supported
/// sequences (summation by parts, no boundary terms).
Sequence apply_operator_A(const Sequence& u, const SystemModel& m);

/// The operator above assembled as a block-tridiagonal SPD matrix on a
/// bounding window with zero exterior, Cholesky-factored once so that
/// star-metric gradients are one triangular solve each.
class OperatorA {
  public:
    OperatorA(const SystemModel& m, const Window& w);

    const Window& window() const { return win_; }
    int dim() const { return dim_; }

    Sequence apply(const Sequence& u) const;
    /// Solves A g = rhs; rhs support must lie within the window.
    Sequence solve(const Sequence& rhs) const;

  private:
    Window win_;
    int dim_;
    Eigen::SparseMatrix<double> A_;
    std::shared_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> llt_;

    Eigen::VectorXd pack(const Sequence& u) const;
    Sequence unpack(const Eigen::VectorXd& x) const;
};

/// Action f(u) = 1/2 ||u||_*^2 - sum_t V(t, u(t)); f(0) = 0.
double action(const Sequence& u, const SystemModel& m);

/// Action restricted to an index window: 1/2 ||u||_I^2 - sum_{t in I} V.
double window_action(const Sequence& u, const IndexSet& I, const SystemModel& m);

/// Residual of the difference equation: r(t) = d^2 u(t-1) - L(t) u(t)
/// + Vx(t, u(t)), on the support dilated by one. r == 0 iff u solves the
/// equation.
Sequence residual(const Sequence& u, const SystemModel& m);

/// l2-metric gradient: g with <g, v>_2 = Df(u) v; equals A u - Vx(., u),
/// i.e. -residual(u).
Sequence grad_l2(const Sequence& u, const SystemModel& m);

/// Star-metric gradient: solves A g = grad_l2(u), so that
/// <g, v>_* = Df(u) v; equivalently g = u - A^{-1} Vx(., u).
Sequence grad_star(const Sequence& u, const SystemModel& m, const OperatorA& A);

/// A-posteriori audit of the small-window bounds on a solved orbit: over
/// sliding windows F with ||u||_F <= r0, both
///   sum_F V(t, u(t))        <= ||u||_F^2 / 8   and
///   sum_F <Vx(t,u(t)), u(t)> <= ||u||_F^2 / 8
/// must hold. Margins are the worst observed slack (negative = violated).
struct SmallWindowAudit {
    double r0 = 0.1;
    long windows_checked = 0;
    double worst_potential_margin = 0;
    double worst_gradient_margin = 0;
    bool pass = true;
};

SmallWindowAudit audit_small_window_bounds(const Sequence& u, const SystemModel& m,
                                           double r0 = 0.1);

}  // namespace hamlock
