#pragma once

#include <string>
#include <vector>

#include "pachner/skeleton.hpp"

namespace pachner {

enum class Mode { closed_one_vertex, ideal };

struct ValidationReport {
  Mode mode = Mode::closed_one_vertex;
  bool closed = true;          // every face paired
  bool orientable = false;
  bool edges_valid = true;     // no edge identified with itself in reverse
  bool all_links_spheres = false;
  bool one_vertex = false;
  bool no_link_is_sphere = false;
  int vertex_count = 0;
  std::vector<int> link_euler;
  std::vector<int> degree_one_edges;
  /// Structural validity in the chosen mode (degree-one edges aside).
  bool valid = false;
  std::vector<std::string> problems;
};

/// Checks orientability, vertex links and the vertex hypotheses of `mode`.
/// Never throws: failures are carried in the report.
ValidationReport validate(const Triangulation& tri, Mode mode);

/// Two-colours tetrahedra with the parity rule. Empty if not orientable;
/// otherwise +1/-1 per tetrahedron with tetrahedron 0 of each component +1.
std::vector<int> orientation_colouring(const Triangulation& tri);

/// Relabels so that every gluing permutation is odd. Requires orientable.
Triangulation orient(const Triangulation& tri);

const char* mode_name(Mode m);
bool parse_mode(const std::string& s, Mode& out);

}  // namespace pachner
