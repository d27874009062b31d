#pragma once

#include "hamlock/mountainpass.hpp"

namespace hamlock {

/// Bump centers p_1 < ... < p_k, each a multiple of the period T, with
/// gaps of at least 2N^2 + 4N.
struct SeparationVector {
    std::vector<long> points;
    int N = 1;
    int T = 1;

    int k() const { return static_cast<int>(points.size()); }
    static long min_gap(int N) { return 2L * N * N + 4L * N; }
    /// Validates the invariants above; throws ConfigError on violation.
    static SeparationVector make(std::vector<long> points, int N, int T);
};

/// p_i = (i-1) * spacing, recentered (by a multiple of T) so the bump
/// train sits symmetrically in the bounding window. Throws ConfigError if
/// the spacing is below 2N^2+4N, not a multiple of T, or the train does
/// not fit in the window.
SeparationVector make_separation(int k, int N, int T, long spacing, const Window& bound);

/// The window system of a separation vector:
///   I_i = ((p_{i-1}+p_i)/2, (p_i+p_{i+1})/2]   (k sets, partition the window)
///   M_i = (p_i + N(N+1), p_{i+1} - N(N+1)]     (k+1 gap sets)
/// with p_0 = -inf and p_{k+1} = +inf clipped to the bounding window.
struct WindowSystem {
    std::vector<IndexSet> I;
    std::vector<IndexSet> M;
};

WindowSystem windows(const SeparationVector& P, const Window& bound);

/// Sum of translates: u0 = sum_i v(. - p_i). Throws NumericsError when a
/// translated support leaves the bounding window.
Sequence glue(const Sequence& v, const SeparationVector& P, const Window& bound);

/// G(theta) = sum_i gamma(theta_i)(. - p_i), with gamma sampled from the
/// path by piecewise-linear interpolation in node index. The translated
/// samples must have pairwise disjoint supports (throws NumericsError on
/// overlap), so that G restricted to I_i equals gamma(theta_i)(. - p_i).
Sequence glue_path(const Path& gamma, const SeparationVector& P,
                   const std::vector<double>& theta, const Window& bound);

struct MultibumpConfig {
    long window = 400;  // halfwidth
    NewtonOptions newton;
    double tol_level = 1e-6;  // per-window action match |f_i(u) - f(v)|
    /// Gap-tail energy bound; <= 0 means the default 1e-10 * ||v||_*^2.
    double eps_tail = -1;
};

/// Verification record for a refined k-bump candidate. Pass requires all
/// clauses at once: residual at tolerance, per-window distance below r,
/// gap tails below eps, per-window action within tol_level of f(v).
struct MultibumpReport {
    Sequence solution;
    std::vector<double> per_window_distance;  // ||u - v(.-p_i)||_{I_i}
    std::vector<double> per_window_action;    // f_i(u)
    std::vector<double> tail_energies;        // ||u||^2_{M_i}
    double residual_sup = 0;
    double action_value = 0;
    double one_bump_action = 0;
    bool newton_converged = false;
    bool pass = false;
    std::vector<std::string> failed_clauses;
    long window_used = 0;

    MultibumpReport() : solution(1) {}
};

/// Newton from the glued seed, then the verification clauses above.
/// v must be a converged one-bump; r > 0 is the per-window radius.
MultibumpReport find_multibump(const Sequence& v, const SeparationVector& P,
                               const SystemModel& m, double r,
                               const MultibumpConfig& cfg = {});

}  // namespace hamlock
