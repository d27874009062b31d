#include "hamlock/index_set.hpp"

#include <algorithm>

namespace hamlock {

namespace {
std::vector<Interval> merged(std::vector<Interval> iv) {
    iv.erase(std::remove_if(iv.begin(), iv.end(), [](const Interval& i) { return i.empty(); }),
             iv.end());
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const Interval& i : iv) {
        if (!out.empty() && i.lo <= out.back().hi + 1)
            out.back().hi = std::max(out.back().hi, i.hi);
        else
            out.push_back(i);
    }
    return out;
}
}  // namespace

IndexSet::IndexSet(std::vector<Interval> intervals) : intervals_(merged(std::move(intervals))) {}

IndexSet IndexSet::range(long lo, long hi) {
    if (lo > hi) return IndexSet();
    return IndexSet({Interval{lo, hi}});
}

long IndexSet::count() const {
    long n = 0;
    for (const Interval& i : intervals_) n += i.count();
    return n;
}

bool IndexSet::contains(long t) const {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                               [](long v, const Interval& i) { return v < i.lo; });
    if (it == intervals_.begin()) return false;
    --it;
    return t <= it->hi;
}

IndexSet IndexSet::unite(const IndexSet& other) const {
    std::vector<Interval> all = intervals_;
    all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
    return IndexSet(std::move(all));
}

IndexSet IndexSet::intersect(const IndexSet& other) const {
    std::vector<Interval> out;
    auto a = intervals_.begin();
    auto b = other.intervals_.begin();
    while (a != intervals_.end() && b != other.intervals_.end()) {
        long lo = std::max(a->lo, b->lo);
        long hi = std::min(a->hi, b->hi);
        if (lo <= hi) out.push_back({lo, hi});
        if (a->hi < b->hi)
            ++a;
        else
            ++b;
    }
    return IndexSet(std::move(out));
}

IndexSet IndexSet::complement(const Window& w) const {
    std::vector<Interval> out;
    long cursor = w.lo;
    for (const Interval& i : intervals_) {
        if (i.hi < w.lo || i.lo > w.hi) continue;
        long lo = std::max(i.lo, w.lo), hi = std::min(i.hi, w.hi);
        if (cursor < lo) out.push_back({cursor, lo - 1});
        cursor = hi + 1;
    }
    if (cursor <= w.hi) out.push_back({cursor, w.hi});
    return IndexSet(std::move(out));
}

IndexSet IndexSet::dilate(long r) const {
    std::vector<Interval> out;
    out.reserve(intervals_.size());
    for (const Interval& i : intervals_) out.push_back({i.lo - r, i.hi + r});
    return IndexSet(std::move(out));
}

IndexSet IndexSet::clipped(const Window& w) const {
    std::vector<Interval> out;
    for (const Interval& i : intervals_) {
        long lo = std::max(i.lo, w.lo), hi = std::min(i.hi, w.hi);
        if (lo <= hi) out.push_back({lo, hi});
    }
    return IndexSet(std::move(out));
}

bool operator==(const IndexSet& a, const IndexSet& b) { return a.intervals_ == b.intervals_; }

}  // namespace hamlock
