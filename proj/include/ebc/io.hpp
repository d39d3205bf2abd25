#pragma once

#include <string>
#include <vector>

#include "ebc/elliptic.hpp"
#include "ebc/homotopy.hpp"

namespace ebc {

/// 17 significant digits, locale-independent.
std::string format_g17(double v);

void write_text_file(const std::string& path, const std::string& content);

/// CSV: s,constraint_value,mu,g_l2_norm,step_size,branch
std::string trajectory_csv(const Trajectory& traj);

/// Boundary-loop parameter vs trace value(s), one line per boundary node.
std::string trace_table(const Mesh& mesh, const std::vector<BoundaryTrace>& traces);

/// Node table: index x y value.
std::string field_table(const Mesh& mesh, const Field& u);

const char* branch_name(ControlBranch branch);

}  // namespace ebc
