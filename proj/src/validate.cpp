#include "pachner/validate.hpp"

#include <numeric>

namespace pachner {

std::vector<int> orientation_colouring(const Triangulation& tri) {
  const int n = tri.size();
  std::vector<int> colour(n, 0);
  for (int root = 0; root < n; ++root) {
    if (colour[root]) continue;
    colour[root] = 1;
    std::vector<int> stack{root};
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (int f = 0; f < 4; ++f) {
        const Gluing& g = tri.gluing(t, f);
        if (!g.glued()) continue;
        // Odd gluings join equally coloured tetrahedra.
        int want = g.perm.is_odd() ? colour[t] : -colour[t];
        if (colour[g.tet] == 0) {
          colour[g.tet] = want;
          stack.push_back(g.tet);
        } else if (colour[g.tet] != want) {
          return {};
        }
      }
    }
  }
  return colour;
}

Triangulation orient(const Triangulation& tri) {
  auto colour = orientation_colouring(tri);
  if (colour.empty()) throw PreconditionError("triangulation is not orientable");
  std::vector<int> ids(tri.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<Perm> maps(tri.size());
  for (int t = 0; t < tri.size(); ++t)
    if (colour[t] < 0) maps[t] = Perm::transposition(2, 3);
  return tri.relabel(ids, maps);
}

ValidationReport validate(const Triangulation& tri, Mode mode) {
  ValidationReport r;
  r.mode = mode;
  r.closed = tri.is_closed();
  if (!r.closed) r.problems.push_back("triangulation has unpaired faces");

  Skeleton sk(tri);
  r.orientable = !orientation_colouring(tri).empty();
  if (!r.orientable) r.problems.push_back("not orientable under the odd-parity gluing rule");

  for (int e = 0; e < sk.edge_count(); ++e)
    if (sk.edge(e).reversed) {
      r.edges_valid = false;
      r.problems.push_back("edge " + std::to_string(e) + " is identified with itself in reverse");
    }

  r.vertex_count = sk.vertex_count();
  r.all_links_spheres = true;
  r.no_link_is_sphere = true;
  for (int v = 0; v < sk.vertex_count(); ++v) {
    const auto& vc = sk.vertex(v);
    r.link_euler.push_back(vc.euler());
    if (vc.link_is_sphere())
      r.no_link_is_sphere = false;
    else
      r.all_links_spheres = false;
  }
  r.one_vertex = sk.vertex_count() == 1;
  r.degree_one_edges = sk.degree_one_edges();

  bool ok = r.closed && r.orientable && r.edges_valid;
  if (mode == Mode::closed_one_vertex) {
    if (!r.one_vertex)
      r.problems.push_back("expected one vertex, found " + std::to_string(r.vertex_count));
    if (!r.all_links_spheres) r.problems.push_back("some vertex link is not a sphere");
    ok = ok && r.one_vertex && r.all_links_spheres;
  } else {
    for (int v = 0; v < sk.vertex_count(); ++v) {
      const auto& vc = sk.vertex(v);
      if (vc.link_is_sphere())
        r.problems.push_back("vertex " + std::to_string(v) + " has a spherical link");
      else if (!vc.link_orientable || !vc.link_closed)
        r.problems.push_back("vertex " + std::to_string(v) + " link is not a closed orientable surface");
    }
    bool links_ok = r.no_link_is_sphere;
    for (int v = 0; v < sk.vertex_count(); ++v)
      links_ok = links_ok && sk.vertex(v).link_orientable && sk.vertex(v).link_closed;
    ok = ok && links_ok;
  }
  r.valid = ok;
  return r;
}

const char* mode_name(Mode m) { return m == Mode::closed_one_vertex ? "closed" : "ideal"; }

bool parse_mode(const std::string& s, Mode& out) {
  if (s == "closed" || s == "closed_one_vertex") {
    out = Mode::closed_one_vertex;
    return true;
  }
  if (s == "ideal") {
    out = Mode::ideal;
    return true;
  }
  return false;
}

}  // namespace pachner
