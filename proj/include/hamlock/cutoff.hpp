#pragma once

#include "hamlock/index_set.hpp"
#include "hamlock/sequence.hpp"

namespace hamlock {

/// A [0,1]-valued weight on Z: 1 on the plateau and its immediate
/// neighbors, descending linearly to 0 over ramp_width further steps,
/// so that |weight(t) - weight(t-1)| <= 1/ramp_width everywhere.
/// ramp_width == 1 degenerates to the sharp characteristic function of
/// the plateau dilated by one.
class Cutoff {
  public:
    Cutoff(IndexSet plateau, int ramp_width);

    double weight(long t) const;
    const IndexSet& plateau() const { return plateau_; }
    int ramp_width() const { return ramp_; }

    /// Indices with nonzero weight: plateau dilated by ramp_width.
    IndexSet support() const { return plateau_.dilate(ramp_); }
    /// Indices whose energy the cutoff can touch: support dilated by one
    /// (the difference term at t reaches the neighbor).
    IndexSet influence() const { return plateau_.dilate(ramp_ + 1); }

  private:
    IndexSet plateau_;
    int ramp_;
};

Cutoff ramp_cutoff(const IndexSet& plateau, int ramp_width);

/// Pointwise product (c.weight * u); support never grows.
Sequence apply_cutoff(const Cutoff& c, const Sequence& u);

}  // namespace hamlock
