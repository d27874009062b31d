#pragma once

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace hamlock {

/// Bounding window [lo, hi] for truncated sequence-space computations.
/// Sequences are exactly zero outside their stored support; the window is
/// where operators are assembled and flows live.
struct Window {
    long lo = 0;
    long hi = 0;

    long size() const { return hi - lo + 1; }
    bool contains(long t) const { return t >= lo && t <= hi; }

    /// Symmetric window [-halfwidth, halfwidth].
    static Window symmetric(long halfwidth) { return Window{-halfwidth, halfwidth}; }
};

inline bool operator==(const Window& a, const Window& b) {
    return a.lo == b.lo && a.hi == b.hi;
}

/// Configuration / input errors (bad parameters, malformed files).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Violations of numerical contracts detected at run time
/// (lost positive definiteness, singular Jacobian, overflowing supports).
class NumericsError : public std::runtime_error {
  public:
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

/// Thread cap for node-parallel work: HAMLOCK_THREADS when set (>= 1),
/// else the hardware concurrency capped at 8.
inline int thread_cap() {
    if (const char* env = std::getenv("HAMLOCK_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

}  // namespace hamlock
