#include "pachner/skeleton.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace pachner {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

const Perm kSwap23 = Perm::transposition(2, 3);

// One step around an edge through the face opposite emb[2]. Returns false at
// an unglued face.
bool step(const Triangulation& tri, BookEntry& cur) {
  const Gluing& g = tri.gluing(cur.tet, cur.emb[2]);
  if (!g.glued()) return false;
  cur = BookEntry{g.tet, g.perm * cur.emb * kSwap23};
  return true;
}

bool same_entry(const BookEntry& a, const BookEntry& b) {
  return a.tet == b.tet && a.emb == b.emb;
}

}  // namespace

Skeleton::Skeleton(const Triangulation& tri) {
  const int n = tri.size();
  edge_of_.assign(n, {-1, -1, -1, -1, -1, -1});
  vertex_of_.assign(n, {-1, -1, -1, -1});

  // Vertices: union of corners across face pairings.
  DisjointSets corners(4 * n);
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = tri.gluing(t, f);
      if (!g.glued()) continue;
      for (int v = 0; v < 4; ++v)
        if (v != f) corners.unite(4 * t + v, 4 * g.tet + g.perm[v]);
    }
  std::vector<int> root_to_class(4 * n, -1);
  for (int c = 0; c < 4 * n; ++c) {
    int r = corners.find(c);
    if (root_to_class[r] < 0) {
      root_to_class[r] = static_cast<int>(vertices_.size());
      vertices_.emplace_back();
    }
    const int id = root_to_class[r];
    vertex_of_[c / 4][c % 4] = id;
    vertices_[id].corners.push_back({c / 4, c % 4});
  }

  // Link of each vertex: triangles = corners, vertices = orbits of
  // (tet, v, w) edge-ends, edges = glued corner sides.
  DisjointSets ends(16 * n);
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = tri.gluing(t, f);
      if (!g.glued()) continue;
      for (int v = 0; v < 4; ++v)
        for (int w = 0; w < 4; ++w)
          if (v != f && w != f && v != w)
            ends.unite(16 * t + 4 * v + w, 16 * g.tet + 4 * g.perm[v] + g.perm[w]);
    }
  std::vector<char> counted(16 * n, 0);
  for (int t = 0; t < n; ++t)
    for (int v = 0; v < 4; ++v) {
      VertexClass& vc = vertices_[vertex_of_[t][v]];
      ++vc.link_triangles;
      for (int f = 0; f < 4; ++f) {
        if (f == v) continue;
        if (tri.gluing(t, f).glued())
          vc.link_edges += 1;  // counted twice overall, halved below
        else {
          vc.link_edges += 2;
          vc.link_closed = false;
        }
      }
      for (int w = 0; w < 4; ++w) {
        if (w == v) continue;
        int r = ends.find(16 * t + 4 * v + w);
        if (!counted[r]) {
          counted[r] = 1;
          ++vc.link_vertices;
        }
      }
    }
  for (auto& vc : vertices_) vc.link_edges /= 2;

  // Orientability of each link: two-colour the corners with the parity rule.
  std::vector<int> colour(4 * n, 0);
  for (auto& vc : vertices_) {
    auto [t0, v0] = vc.corners.front();
    std::vector<std::array<int, 2>> stack{{t0, v0}};
    colour[4 * t0 + v0] = 1;
    while (!stack.empty()) {
      auto [t, v] = stack.back();
      stack.pop_back();
      for (int f = 0; f < 4; ++f) {
        if (f == v) continue;
        const Gluing& g = tri.gluing(t, f);
        if (!g.glued()) continue;
        int want = g.perm.is_odd() ? colour[4 * t + v] : -colour[4 * t + v];
        int& other = colour[4 * g.tet + g.perm[v]];
        if (other == 0) {
          other = want;
          stack.push_back({g.tet, g.perm[v]});
        } else if (other != want) {
          vc.link_orientable = false;
        }
      }
    }
  }

  // Edges: walk the book from the smallest unvisited model edge.
  for (int t = 0; t < n; ++t)
    for (int k = 0; k < 6; ++k) {
      if (edge_of_[t][k] >= 0) continue;
      const int id = static_cast<int>(edges_.size());
      EdgeClass ec;
      const BookEntry start{t, edge_ordering(k)};

      BookEntry cur = start;
      bool cycle = true;
      while (true) {
        BookEntry next = cur;
        if (!step(tri, next)) {
          cycle = false;
          break;
        }
        if (same_entry(next, start)) break;
        cur = next;
      }
      if (!cycle) {
        // Boundary edge: rewind to the start of the chain, walking backwards
        // through the face opposite emb[3].
        ec.boundary = true;
        BookEntry back = start;
        while (true) {
          const Gluing& g = tri.gluing(back.tet, back.emb[3]);
          if (!g.glued()) break;
          back = BookEntry{g.tet, g.perm * back.emb * kSwap23};
        }
        cur = back;
        ec.book.push_back(cur);
        while (step(tri, cur)) ec.book.push_back(cur);
      } else {
        cur = start;
        do {
          ec.book.push_back(cur);
          step(tri, cur);
        } while (!same_entry(cur, start));
      }
      for (const auto& entry : ec.book) {
        EdgeRef r = entry.edge();
        if (edge_of_[r.tet][r.edge] == id) {
          ec.reversed = true;
          continue;
        }
        edge_of_[r.tet][r.edge] = id;
        ++ec.degree;
      }
      const BookEntry& first = ec.book.front();
      ec.ends = {vertex_of_[first.tet][first.emb[0]], vertex_of_[first.tet][first.emb[1]]};
      edges_.push_back(std::move(ec));
    }
}

std::vector<int> Skeleton::degree_one_edges() const {
  std::vector<int> out;
  for (int e = 0; e < edge_count(); ++e)
    if (edges_[e].degree == 1) out.push_back(e);
  return out;
}

int Skeleton::min_degree() const {
  int m = 0;
  for (const auto& ec : edges_)
    if (m == 0 || ec.degree < m) m = ec.degree;
  return m;
}

int edge_degree(const Triangulation& tri, int e) {
  Skeleton sk(tri);
  if (e < 0 || e >= sk.edge_count())
    throw std::out_of_range("unknown edge class " + std::to_string(e));
  return sk.degree(e);
}

}  // namespace pachner
