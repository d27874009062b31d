#include "hamlock/multibump.hpp"

#include <algorithm>
#include <cmath>

#include "hamlock/diagnostics.hpp"

namespace hamlock {

SeparationVector SeparationVector::make(std::vector<long> points, int N, int T) {
    if (points.empty()) throw ConfigError("separation vector needs at least one center");
    if (N < 1) throw ConfigError("separation parameter N must be positive");
    if (T < 1) throw ConfigError("period must be positive");
    if (!std::is_sorted(points.begin(), points.end()))
        throw ConfigError("bump centers must be increasing");
    for (long p : points)
        if (p % T != 0)
            throw ConfigError("bump center " + std::to_string(p) +
                              " is not a multiple of the period " + std::to_string(T));
    for (size_t i = 0; i + 1 < points.size(); ++i)
        if (points[i + 1] - points[i] < min_gap(N))
            throw ConfigError("bump gap " + std::to_string(points[i + 1] - points[i]) +
                              " is below the separation bound " + std::to_string(min_gap(N)));
    return SeparationVector{std::move(points), N, T};
}

SeparationVector make_separation(int k, int N, int T, long spacing, const Window& bound) {
    if (k < 1) throw ConfigError("need at least one bump");
    if (spacing < SeparationVector::min_gap(N))
        throw ConfigError("spacing " + std::to_string(spacing) +
                          " is below the separation bound " +
                          std::to_string(SeparationVector::min_gap(N)));
    if (spacing % T != 0)
        throw ConfigError("spacing must be a multiple of the period");
    // Center the train: shift by the multiple of T nearest half the span.
    long span = static_cast<long>(k - 1) * spacing;
    long offset = (span / 2) / T * T;
    std::vector<long> pts(k);
    for (int i = 0; i < k; ++i) pts[i] = static_cast<long>(i) * spacing - offset;
    if (pts.front() < bound.lo || pts.back() > bound.hi)
        throw ConfigError("bump train does not fit in the bounding window; enlarge it");
    return SeparationVector::make(std::move(pts), N, T);
}

namespace {
long floor_div(long a, long b) {
    long q = a / b;
    return (a % b != 0 && (a < 0) != (b < 0)) ? q - 1 : q;
}
}  // namespace

WindowSystem windows(const SeparationVector& P, const Window& bound) {
    const int k = P.k();
    WindowSystem ws;
    ws.I.reserve(k);
    ws.M.reserve(k + 1);
    const auto& p = P.points;  // p[i-1] is the 1-based center p_i
    for (int i = 0; i < k; ++i) {
        // I_i = ((p_{i-1}+p_i)/2, (p_i+p_{i+1})/2], half-infinite ends clipped
        long lo = i == 0 ? bound.lo : floor_div(p[i - 1] + p[i], 2) + 1;
        long hi = i == k - 1 ? bound.hi : floor_div(p[i] + p[i + 1], 2);
        ws.I.push_back(IndexSet::range(lo, hi).clipped(bound));
    }
    const long pad = static_cast<long>(P.N) * (P.N + 1);
    for (int i = 0; i <= k; ++i) {
        // M_i = (p_i + N(N+1), p_{i+1} - N(N+1)]
        long lo = i == 0 ? bound.lo : p[i - 1] + pad + 1;
        long hi = i == k ? bound.hi : p[i] - pad;
        ws.M.push_back(IndexSet::range(lo, hi).clipped(bound));
    }
    return ws;
}

Sequence glue(const Sequence& v, const SeparationVector& P, const Window& bound) {
    Sequence out(v.dim());
    for (long p : P.points) {
        if (!v.is_zero() && (v.first() + p < bound.lo || v.last() + p > bound.hi))
            throw NumericsError("translated bump support overflows the bounding window");
        out.axpy(1.0, v.shifted(p));
    }
    return out;
}

namespace {

Sequence sample_path(const Path& gamma, double theta) {
    if (gamma.nodes.empty()) throw ConfigError("cannot sample an empty path");
    theta = std::clamp(theta, 0.0, 1.0);
    double pos = theta * (gamma.nodes.size() - 1);
    size_t j = std::min(static_cast<size_t>(pos), gamma.nodes.size() - 2);
    double frac = pos - j;
    if (frac == 0.0) return gamma.nodes[j];
    Sequence out = gamma.nodes[j].scaled(1.0 - frac);
    out.axpy(frac, gamma.nodes[j + 1]);
    return out;
}

}  // namespace

Sequence glue_path(const Path& gamma, const SeparationVector& P,
                   const std::vector<double>& theta, const Window& bound) {
    if (static_cast<int>(theta.size()) != P.k())
        throw ConfigError("theta must supply one coordinate per bump");
    Sequence out(gamma.nodes.empty() ? 1 : gamma.nodes.front().dim());
    long prev_hi = bound.lo - 1;
    for (int i = 0; i < P.k(); ++i) {
        Sequence piece = sample_path(gamma, theta[i]).shifted(P.points[i]);
        if (!piece.is_zero()) {
            if (piece.first() < bound.lo || piece.last() > bound.hi)
                throw NumericsError("translated path sample overflows the bounding window");
            if (piece.first() <= prev_hi)
                throw NumericsError("translated path samples overlap; increase the spacing");
            prev_hi = piece.last();
        }
        out.axpy(1.0, piece);
    }
    return out;
}

MultibumpReport find_multibump(const Sequence& v, const SeparationVector& P,
                               const SystemModel& m, double r, const MultibumpConfig& cfg) {
    if (!(r > 0)) throw ConfigError("per-window radius r must be positive");
    MultibumpReport rep;
    Window win = Window::symmetric(cfg.window);
    WindowSystem ws = windows(P, win);

    // Separation sanity against the measured decay of the bump: the train
    // plus two decay lengths must fit.
    try {
        DecayEstimate d = decay_rate(v);
        if (d.decaying) {
            long decay_len = static_cast<long>(std::ceil(1.0 / -std::log(d.lambda)));
            if (P.points.front() - 2 * decay_len < win.lo ||
                P.points.back() + 2 * decay_len > win.hi)
                throw ConfigError("bump train leaves no decay margin in the window");
        }
    } catch (const NumericsError&) {
        // too-short tails: leave the margin check to the glue overflow test
    }

    Sequence seed = glue(v, P, win);
    rep.one_bump_action = action(v, m);
    SolveReport solve = newton_refine(seed, m, win, cfg.newton);
    rep.solution = solve.solution;
    rep.residual_sup = solve.residual_sup;
    rep.newton_converged = solve.converged;
    rep.action_value = solve.action_value;
    rep.window_used = solve.window_used;

    const double eps =
        cfg.eps_tail > 0 ? cfg.eps_tail : 1e-10 * inner_star(v, v, m);

    const Sequence& u = rep.solution;
    for (int i = 0; i < P.k(); ++i) {
        Sequence diff = u;
        diff.axpy(-1.0, v.shifted(P.points[i]));
        rep.per_window_distance.push_back(std::sqrt(window_energy(diff, ws.I[i], m)));
        rep.per_window_action.push_back(window_action(u, ws.I[i], m));
    }
    for (int i = 0; i <= P.k(); ++i)
        rep.tail_energies.push_back(window_energy(u, ws.M[i], m));

    if (!rep.newton_converged) rep.failed_clauses.push_back("newton");
    if (rep.residual_sup > cfg.newton.tol_res) rep.failed_clauses.push_back("residual");
    for (int i = 0; i < P.k(); ++i)
        if (!(rep.per_window_distance[i] < r)) {
            rep.failed_clauses.push_back("window_distance");
            break;
        }
    for (int i = 0; i <= P.k(); ++i)
        if (rep.tail_energies[i] > eps) {
            rep.failed_clauses.push_back("gap_tail");
            break;
        }
    for (int i = 0; i < P.k(); ++i)
        if (std::abs(rep.per_window_action[i] - rep.one_bump_action) > cfg.tol_level) {
            rep.failed_clauses.push_back("window_action");
            break;
        }
    rep.pass = rep.failed_clauses.empty();
    return rep;
}

}  // namespace hamlock
