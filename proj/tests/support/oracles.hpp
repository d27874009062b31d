#pragma once

#include <random>

#include "hamlock/functional.hpp"

namespace hamlock::testing {

/// Central-difference directional derivative of the action:
/// (f(u + h v) - f(u - h v)) / 2h. Test-side oracle for the gradients.
double fd_directional(const Sequence& u, const Sequence& dir, const SystemModel& m,
                      double h = 1e-5);

/// Site-centered homoclinic of the map x(t+1) = 3 x(t) - x(t)^3 - x(t-1)
/// computed independently of the library solvers: tail-seeded backward
/// iteration in long double, with the tail amplitude bisected on the
/// peak asymmetry until the orbit is even about its peak. Peak at t = 0.
Sequence shooting_bump_oracle();

/// Decaying root of z^2 - 3z + 1 = 0: the linearized tail ratio of the
/// map above.
inline double cubic_decay_root() { return (3.0 - std::sqrt(5.0)) / 2.0; }

/// Random finitely supported sequence on [lo, hi] with N(0, amp) entries.
Sequence random_sequence(std::mt19937_64& rng, int dim, long lo, long hi, double amp);

}  // namespace hamlock::testing
