#include "ebc/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ebc {

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file '" + path + "'");
  out << content;
}

const char* branch_name(ControlBranch branch) {
  return branch == ControlBranch::active ? "active" : "inactive";
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "s,constraint_value,mu,g_l2_norm,step_size,branch\n";
  for (const auto& st : traj.states) {
    os << format_g17(st.s) << "," << format_g17(st.constraint_value) << ","
       << format_g17(st.mu) << "," << format_g17(st.g_norm) << ","
       << format_g17(st.step_size) << "," << branch_name(st.branch) << "\n";
  }
  return os.str();
}

std::string trace_table(const Mesh& mesh, const std::vector<BoundaryTrace>& traces) {
  const auto t = boundary_loop_parameter(mesh);
  std::ostringstream os;
  os << "# loop_parameter";
  for (std::size_t i = 0; i < traces.size(); ++i) os << " trace_" << i;
  os << "\n";
  for (int k = 0; k < mesh.boundary_count(); ++k) {
    os << format_g17(t[k]);
    for (const auto& tr : traces) os << " " << format_g17(tr.values[k]);
    os << "\n";
  }
  return os.str();
}

std::string field_table(const Mesh& mesh, const Field& u) {
  std::ostringstream os;
  os << "# node x y value\n";
  for (int v = 0; v < mesh.node_count(); ++v) {
    os << v << " " << format_g17(mesh.vertices[v][0]) << " "
       << format_g17(mesh.vertices[v][1]) << " "
       << format_g17(u.nodal_values[v]) << "\n";
  }
  return os.str();
}

}  // namespace ebc
