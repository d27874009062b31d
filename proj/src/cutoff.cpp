#include "hamlock/cutoff.hpp"

#include <algorithm>

namespace hamlock {

Cutoff::Cutoff(IndexSet plateau, int ramp_width)
    : plateau_(std::move(plateau)), ramp_(ramp_width) {
    if (plateau_.empty()) throw ConfigError("cutoff plateau must be nonempty");
    if (ramp_ < 1) throw ConfigError("cutoff ramp width must be at least 1");
}

double Cutoff::weight(long t) const {
    // Per interval [a,b]: 1 on [a-1, b+1], then (ramp - i)/ramp at
    // distance i beyond. The weight is the max over intervals, which
    // keeps the per-step variation at 1/ramp even when ramps overlap.
    double w = 0;
    for (const Interval& iv : plateau_.intervals()) {
        long d = 0;
        if (t < iv.lo - 1)
            d = (iv.lo - 1) - t;
        else if (t > iv.hi + 1)
            d = t - (iv.hi + 1);
        if (d >= ramp_) continue;
        w = std::max(w, static_cast<double>(ramp_ - d) / ramp_);
        if (w == 1.0) break;
    }
    return w;
}

Cutoff ramp_cutoff(const IndexSet& plateau, int ramp_width) {
    return Cutoff(plateau, ramp_width);
}

Sequence apply_cutoff(const Cutoff& c, const Sequence& u) {
    if (u.is_zero()) return u;
    std::vector<double> vals;
    vals.reserve((u.last() - u.first() + 1) * u.dim());
    for (long t = u.first(); t <= u.last(); ++t) {
        double w = c.weight(t);
        auto x = u.site(t);
        for (int j = 0; j < u.dim(); ++j) vals.push_back(w * x[j]);
    }
    return Sequence(u.dim(), u.first(), std::move(vals));
}

}  // namespace hamlock
