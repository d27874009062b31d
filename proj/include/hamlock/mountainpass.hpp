#pragma once

#include <optional>

#include "hamlock/solvers.hpp"

namespace hamlock {

/// A discretized path in sequence space joining 0 to a negative-action
/// endpoint; node 0 is exactly zero, the last node is the endpoint.
struct Path {
    std::vector<Sequence> nodes;
    std::vector<double> levels;  // cached f at nodes

    int argmax_node() const;  // lowest index on ties
    double level() const;     // max of levels
};

/// Minimax level estimate across deformation rounds; level is the max
/// over nodes after the last round and history holds one entry per round.
struct MinimaxEstimate {
    double level = 0;
    int argmax_node = 0;
    std::vector<double> history;
    bool plateau_reached = false;
};

struct DeformControl {
    Window window = Window::symmetric(80);
    int steps_per_node = 3;
    double delta_path = 0.05;     // re-densify when adjacent nodes differ by more
    long max_nodes = 4096;
    int polish_budget = 800;      // extra argmax descent steps per round
    double plateau_tol = 1e-8;    // stop when the level drops less than this...
    int plateau_rounds = 5;       // ...over this many rounds
    DescentControl descent;
};

/// w = lambda * (delta at the witness site) with lambda the smallest
/// power of two making f(w) < -1. Throws NumericsError after 60 doublings
/// (broken witness).
Sequence negative_endpoint(const SystemModel& m);

/// Linear interpolation from 0 to negative_endpoint(m) with `nodes` nodes.
Path initial_path(const SystemModel& m, int nodes);

/// Per-node steepest descent with endpoints fixed. Each round descends
/// every interior node a bounded number of steps, records the level, and
/// re-densifies segments the flow is still moving. The level history is
/// non-increasing; deformation stops early once it plateaus.
std::pair<Path, MinimaxEstimate> deform_path(const Path& p, const SystemModel& m,
                                             int rounds, const DeformControl& ctrl);

struct OneBumpConfig {
    long window = 80;  // halfwidth
    int path_nodes = 64;
    int max_rounds = 400;
    DeformControl deform;
    NewtonOptions newton;
    /// When set, the path phase is skipped and Newton starts from here.
    std::optional<Sequence> seed;
};

struct OneBumpResult {
    SolveReport report;
    MinimaxEstimate minimax;
    Path path;  // deformed path (empty when seeded)
    long recenter_shift = 0;
};

/// Full pipeline: initial path -> deform until the level plateaus -> take
/// the argmax node -> recenter its peak to [0, T) by a period shift ->
/// Newton. A converged report has f(v) > 0 and ||v||_* > 1e-3; collapse
/// onto the zero orbit is flagged, not silently accepted. The window is
/// enlarged by 50% and Newton re-run if the tail energy audit fails.
OneBumpResult find_one_bump(const SystemModel& m, const OneBumpConfig& cfg = {});

}  // namespace hamlock
