#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "hamlock/diagnostics.hpp"
#include "hamlock/solvers.hpp"

namespace hamlock {

/// CSV with header t,x_1,..,x_n; only supported indices are emitted and
/// doubles are printed with 17 significant digits so that reading back
/// reproduces the sequence bit-exactly.
void write_sequence_csv(std::ostream& os, const Sequence& u);
void write_sequence_csv(const std::filesystem::path& path, const Sequence& u);
Sequence read_sequence_csv(std::istream& is);
Sequence read_sequence_csv(const std::filesystem::path& path);

/// CSV with header iter,f,grad_norm,step.
void write_trajectory_csv(std::ostream& os, const FlowTrajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const FlowTrajectory& traj);

/// CSV with header round,level.
void write_levels_csv(std::ostream& os, const std::vector<double>& levels);
void write_levels_csv(const std::filesystem::path& path, const std::vector<double>& levels);

/// CSV with header iterate,t,rho; one row per stored profile entry.
void write_profiles_csv(std::ostream& os, const std::vector<MassProfile>& rhos);
std::vector<MassProfile> read_profiles_csv(std::istream& is);
std::vector<MassProfile> read_profiles_csv(const std::filesystem::path& path);

}  // namespace hamlock
