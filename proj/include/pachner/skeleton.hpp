#pragma once

#include <array>
#include <vector>

#include "pachner/triangulation.hpp"

namespace pachner {

/// One tetrahedron in the book around an edge. `emb` sends 0,1 to the edge
/// endpoints; the book continues through the face opposite emb[2] and was
/// entered through the face opposite emb[3].
struct BookEntry {
  int tet = 0;
  Perm emb;

  EdgeRef edge() const { return {tet, edge_number(emb[0], emb[1])}; }
  /// Whether the entry runs along the edge in its tetrahedron's label order.
  bool forward() const { return emb[0] < emb[1]; }
  FaceRef exit_face() const { return {tet, emb[2]}; }
  FaceRef entry_face() const { return {tet, emb[3]}; }
};

struct EdgeClass {
  /// Cyclic (or, on the boundary of a fragment, linear) sequence of tetrahedra
  /// around the edge. Starts at the smallest EdgeRef in canonical orientation
  /// for interior edges.
  std::vector<BookEntry> book;
  /// Number of distinct model edges identified into this edge.
  int degree = 0;
  bool boundary = false;
  /// The edge is identified with itself in reverse.
  bool reversed = false;
  /// Vertex classes at the ends emb[0], emb[1] of the first book entry.
  std::array<int, 2> ends{};
};

struct VertexClass {
  std::vector<std::array<int, 2>> corners;  // (tet, vertex)
  int link_vertices = 0;
  int link_edges = 0;
  int link_triangles = 0;
  bool link_closed = true;
  bool link_orientable = true;
  int euler() const { return link_vertices - link_edges + link_triangles; }
  bool link_is_sphere() const { return link_closed && link_orientable && euler() == 2; }
};

/// The identification skeleton: orbits of model edges and vertices.
/// Numbering is deterministic: classes are numbered in order of their
/// smallest model representative.
class Skeleton {
 public:
  explicit Skeleton(const Triangulation& tri);

  int edge_count() const { return static_cast<int>(edges_.size()); }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  const EdgeClass& edge(int e) const { return edges_.at(e); }
  const VertexClass& vertex(int v) const { return vertices_.at(v); }
  const std::vector<EdgeClass>& edges() const { return edges_; }
  const std::vector<VertexClass>& vertices() const { return vertices_; }

  int edge_of(int tet, int edge) const { return edge_of_[tet][edge]; }
  int edge_of(EdgeRef r) const { return edge_of_[r.tet][r.edge]; }
  int vertex_of(int tet, int vertex) const { return vertex_of_[tet][vertex]; }
  int degree(int e) const { return edge(e).degree; }

  /// Edge classes of degree one.
  std::vector<int> degree_one_edges() const;
  int min_degree() const;

 private:
  std::vector<EdgeClass> edges_;
  std::vector<VertexClass> vertices_;
  std::vector<std::array<int, 6>> edge_of_;
  std::vector<std::array<int, 4>> vertex_of_;
};

inline Skeleton build_skeleton(const Triangulation& tri) { return Skeleton(tri); }

/// Degree of edge class `e`; throws std::out_of_range for unknown ids.
int edge_degree(const Triangulation& tri, int e);

}  // namespace pachner
