#pragma once

#include <vector>

#include "hamlock/common.hpp"

namespace hamlock {

/// Closed integer interval [lo, hi]; empty when lo > hi.
struct Interval {
    long lo = 0;
    long hi = -1;
    bool empty() const { return lo > hi; }
    long count() const { return empty() ? 0 : hi - lo + 1; }
};

inline bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi;
}

/// A finite union of disjoint integer intervals, kept sorted and merged.
/// Half-infinite sets are represented clipped to a declared bounding
/// window by the factories that build them.
class IndexSet {
  public:
    IndexSet() = default;
    explicit IndexSet(std::vector<Interval> intervals);

    static IndexSet empty_set() { return IndexSet(); }
    static IndexSet range(long lo, long hi);
    static IndexSet window(const Window& w) { return range(w.lo, w.hi); }

    bool empty() const { return intervals_.empty(); }
    long count() const;
    bool contains(long t) const;  // O(log #intervals)
    const std::vector<Interval>& intervals() const { return intervals_; }
    long min() const { return intervals_.front().lo; }
    long max() const { return intervals_.back().hi; }

    IndexSet unite(const IndexSet& other) const;
    IndexSet intersect(const IndexSet& other) const;
    /// Window minus this set.
    IndexSet complement(const Window& w) const;
    /// Every interval widened by r on both sides (then re-merged).
    IndexSet dilate(long r) const;
    IndexSet clipped(const Window& w) const;

    friend bool operator==(const IndexSet& a, const IndexSet& b);

  private:
    std::vector<Interval> intervals_;
};

}  // namespace hamlock
