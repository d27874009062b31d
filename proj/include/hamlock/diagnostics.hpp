#pragma once

#include <string>
#include <vector>

#include "hamlock/functional.hpp"

namespace hamlock {

/// A normalized mass profile: nonnegative values on [base, base+len),
/// summing to 1.
struct MassProfile {
    long base = 0;
    std::vector<double> values;

    double sum() const;
    static MassProfile from_sequence(const Sequence& u);  // |u(t)|^2 / ||u||_2^2
};

enum class CCKind { vanishing, concentration, dichotomy, undetermined };

std::string to_string(CCKind k);

/// Verdict of the concentration-compactness trichotomy test on a finite
/// family of profiles. centers holds the recentering index per iterate;
/// eta is the captured mass fraction when the verdict is dichotomy.
struct CCVerdict {
    CCKind kind = CCKind::undetermined;
    std::vector<long> centers;
    double eta = 0;
    std::string detail;
};

/// Trend-based classifier over the profile family (iterate index plays
/// the role of k -> infinity):
///  - concentration: some window halfwidth from N_grid captures >= 1-eps
///    around the recentering index, uniformly over iterates, for every
///    eps in the grid;
///  - vanishing: the best windowed mass at the largest N decays
///    monotonically over the last half of the iterates and ends below
///    half its mid value (and below 0.5);
///  - dichotomy: the recentered mass is stable in both N and iterate and
///    sits strictly between 0.05 and 0.95.
CCVerdict cc_classify(const std::vector<MassProfile>& rhos,
                      const std::vector<double>& eps_grid,
                      const std::vector<int>& N_grid);

/// One extracted bump: the piece recentered to 0 plus its original center.
struct Bump {
    long center = 0;
    Sequence piece;
    Bump() : piece(1) {}
};

struct BumpDecomposition {
    std::vector<Bump> bumps;              // sorted by center
    double remainder_norm = 0;            // ||u - sum piece(.-center)||_*
};

/// Greedy peel-off: take the global peak, carve the contiguous region
/// where |u| > thresh/10 around it extended by the measured decay length,
/// zero it and repeat. Throws NumericsError past 64 bumps (threshold too
/// low). Pieces keep pairwise support distance >= sep.
BumpDecomposition bump_decompose(const Sequence& u, const SystemModel& m,
                                 long sep, double thresh);

struct DecayEstimate {
    double lambda = 0;       // averaged per-step ratio, in (0,1) when decaying
    double lambda_left = 0;
    double lambda_right = 0;
    bool decaying = false;
};

/// Least-squares fit of log|u(t)| over the outer quarter of the effective
/// support on each side (entries below 1e-9 of the peak are ignored as
/// numerically unresolved). Throws NumericsError with fewer than 5 usable
/// tail points per side.
DecayEstimate decay_rate(const Sequence& u);

}  // namespace hamlock
