#include "hamlock/functional.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace hamlock {

namespace {

// Copies u(t) into a reusable buffer (zero outside the support).
inline void load_site(const Sequence& u, long t, Eigen::VectorXd& out) {
    if (u.is_zero() || t < u.first() || t > u.last())
        out.setZero();
    else
        out = u.site(t);
}

}  // namespace

double inner_star(const Sequence& u, const Sequence& v, const SystemModel& m) {
    if (u.dim() != v.dim() || u.dim() != m.dim())
        throw ConfigError("dimension mismatch in star inner product");
    if (u.is_zero() || v.is_zero()) return 0.0;
    const int n = m.dim();
    // The difference term at t reaches u(t-1): one extra index past the
    // supports on the right.
    long lo = std::min(u.first(), v.first());
    long hi = std::max(u.last(), v.last()) + 1;
    Eigen::VectorXd xu(n), xv(n), pu(n), pv(n), tmp(n);
    load_site(u, lo - 1, pu);
    load_site(v, lo - 1, pv);
    double diff_part = 0, quad_part = 0;
    for (long t = lo; t <= hi; ++t) {
        load_site(u, t, xu);
        load_site(v, t, xv);
        diff_part += (xu - pu).dot(xv - pv);
        tmp.noalias() = m.L(t) * xv;
        quad_part += xu.dot(tmp);
        pu.swap(xu);
        pv.swap(xv);
    }
    return diff_part + quad_part;
}

double norm_star(const Sequence& u, const SystemModel& m) {
    return std::sqrt(inner_star(u, u, m));
}

double window_energy(const Sequence& u, const IndexSet& F, const SystemModel& m) {
    if (u.is_zero() || F.empty()) return 0.0;
    // Terms vanish outside [first, last+1].
    IndexSet active = F.intersect(IndexSet::range(u.first(), u.last() + 1));
    const int n = u.dim();
    Eigen::VectorXd x(n), p(n), tmp(n);
    double e = 0;
    for (const Interval& iv : active.intervals()) {
        for (long t = iv.lo; t <= iv.hi; ++t) {
            load_site(u, t, x);
            load_site(u, t - 1, p);
            e += (x - p).squaredNorm();
            tmp.noalias() = m.L(t) * x;
            e += x.dot(tmp);
        }
    }
    return e;
}

Sequence apply_operator_A(const Sequence& u, const SystemModel& m) {
    if (u.dim() != m.dim()) throw ConfigError("dimension mismatch in operator application");
    if (u.is_zero()) return u;
    const int n = u.dim();
    long lo = u.first() - 1, hi = u.last() + 1;
    std::vector<double> vals;
    vals.reserve((hi - lo + 1) * n);
    Eigen::VectorXd xl(n), xc(n), xr(n), y(n);
    for (long t = lo; t <= hi; ++t) {
        load_site(u, t - 1, xl);
        load_site(u, t, xc);
        load_site(u, t + 1, xr);
        y.noalias() = m.L(t) * xc;
        y -= xr - 2.0 * xc + xl;
        for (int j = 0; j < n; ++j) vals.push_back(y[j]);
    }
    return Sequence(n, lo, std::move(vals));
}

OperatorA::OperatorA(const SystemModel& m, const Window& w) : win_(w), dim_(m.dim()) {
    if (w.lo > w.hi) throw ConfigError("operator window is empty");
    const long sites = w.size();
    const long n = sites * dim_;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(n * (dim_ + 2));
    for (long s = 0; s < sites; ++s) {
        long t = w.lo + s;
        Eigen::MatrixXd D = m.L(t) + 2.0 * Eigen::MatrixXd::Identity(dim_, dim_);
        for (int a = 0; a < dim_; ++a)
            for (int b = 0; b < dim_; ++b)
                if (D(a, b) != 0.0) trip.emplace_back(s * dim_ + a, s * dim_ + b, D(a, b));
        if (s + 1 < sites) {
            for (int a = 0; a < dim_; ++a) {
                trip.emplace_back(s * dim_ + a, (s + 1) * dim_ + a, -1.0);
                trip.emplace_back((s + 1) * dim_ + a, s * dim_ + a, -1.0);
            }
        }
    }
    A_.resize(n, n);
    A_.setFromTriplets(trip.begin(), trip.end());
    llt_ = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>();
    llt_->compute(A_);
    if (llt_->info() != Eigen::Success)
        throw NumericsError("operator lost positive definiteness during factorization");
}

Eigen::VectorXd OperatorA::pack(const Sequence& u) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(win_.size() * dim_);
    if (u.is_zero()) return x;
    if (u.first() < win_.lo || u.last() > win_.hi)
        throw NumericsError("sequence support exceeds the operator window");
    for (long t = u.first(); t <= u.last(); ++t)
        x.segment((t - win_.lo) * dim_, dim_) = u.site(t);
    return x;
}

Sequence OperatorA::unpack(const Eigen::VectorXd& x) const {
    return Sequence(dim_, win_.lo, std::vector<double>(x.data(), x.data() + x.size()));
}

Sequence OperatorA::apply(const Sequence& u) const { return unpack(A_ * pack(u)); }

Sequence OperatorA::solve(const Sequence& rhs) const {
    Eigen::VectorXd x = llt_->solve(pack(rhs));
    if (llt_->info() != Eigen::Success)
        throw NumericsError("linear solve with the window operator failed");
    return unpack(x);
}

double action(const Sequence& u, const SystemModel& m) {
    if (u.dim() != m.dim()) throw ConfigError("dimension mismatch in action");
    if (u.is_zero()) return 0.0;
    const int n = u.dim();
    Eigen::VectorXd x(n), p(n), tmp(n);
    p.setZero();
    double diff_part = 0, quad_part = 0, pot = 0;
    for (long t = u.first(); t <= u.last() + 1; ++t) {
        load_site(u, t, x);
        diff_part += (x - p).squaredNorm();
        if (t <= u.last()) {
            tmp.noalias() = m.L(t) * x;
            quad_part += x.dot(tmp);
            pot += m.V(t, x);
        }
        p.swap(x);
    }
    return 0.5 * (diff_part + quad_part) - pot;
}

double window_action(const Sequence& u, const IndexSet& I, const SystemModel& m) {
    double quad = 0.5 * window_energy(u, I, m);
    double pot = 0;
    if (!u.is_zero()) {
        IndexSet active = I.intersect(IndexSet::range(u.first(), u.last()));
        for (const Interval& iv : active.intervals())
            for (long t = iv.lo; t <= iv.hi; ++t) pot += m.V(t, u.site(t));
    }
    return quad - pot;
}

Sequence residual(const Sequence& u, const SystemModel& m) {
    if (u.dim() != m.dim()) throw ConfigError("dimension mismatch in residual");
    if (u.is_zero()) return u;
    const int n = u.dim();
    long lo = u.first() - 1, hi = u.last() + 1;
    std::vector<double> vals;
    vals.reserve((hi - lo + 1) * n);
    Eigen::VectorXd xl(n), xc(n), xr(n), r(n);
    for (long t = lo; t <= hi; ++t) {
        load_site(u, t - 1, xl);
        load_site(u, t, xc);
        load_site(u, t + 1, xr);
        r = xr - 2.0 * xc + xl;
        r.noalias() -= m.L(t) * xc;
        r += m.Vx(t, xc);
        for (int j = 0; j < n; ++j) vals.push_back(r[j]);
    }
    return Sequence(n, lo, std::move(vals));
}

Sequence grad_l2(const Sequence& u, const SystemModel& m) {
    return residual(u, m).scaled(-1.0);
}

Sequence grad_star(const Sequence& u, const SystemModel& m, const OperatorA& A) {
    if (u.is_zero()) return u;
    // On the truncated space the admissible directions vanish outside the
    // window, so the in-window gradient is the clipped l2 gradient.
    return A.solve(restrict_to(grad_l2(u, m), A.window()));
}

SmallWindowAudit audit_small_window_bounds(const Sequence& u, const SystemModel& m,
                                           double r0) {
    if (!(r0 > 0)) throw ConfigError("audit radius must be positive");
    SmallWindowAudit audit;
    audit.r0 = r0;
    audit.worst_potential_margin = std::numeric_limits<double>::infinity();
    audit.worst_gradient_margin = std::numeric_limits<double>::infinity();
    if (u.is_zero()) return audit;
    for (long len : {4L, 8L, 16L}) {
        for (long a = u.first() - 1; a + len - 1 <= u.last() + 1; ++a) {
            IndexSet F = IndexSet::range(a, a + len - 1);
            double e = window_energy(u, F, m);
            if (e > r0 * r0) continue;
            ++audit.windows_checked;
            double pot = 0, grad = 0;
            for (long t = a; t < a + len; ++t) {
                Eigen::VectorXd x = u.value(t);
                pot += m.V(t, x);
                grad += m.Vx(t, x).dot(x);
            }
            audit.worst_potential_margin = std::min(audit.worst_potential_margin, e / 8 - pot);
            audit.worst_gradient_margin = std::min(audit.worst_gradient_margin, e / 8 - grad);
        }
    }
    audit.pass = audit.windows_checked == 0 ||
                 (audit.worst_potential_margin >= -1e-12 &&
                  audit.worst_gradient_margin >= -1e-12);
    return audit;
}

}  // namespace hamlock
