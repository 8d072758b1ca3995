#include "pachner/composite.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <map>
#include <set>
#include <sstream>

#include "pachner/validate.hpp"

namespace pachner {

namespace {

std::string face_str(FaceRef f) { return std::to_string(f.tet) + ":" + std::to_string(f.face); }

int third_vertex(int face, int a, int b) {
  for (int v = 0; v < 4; ++v)
    if (v != face && v != a && v != b) return v;
  return -1;
}

// Symbolic vertex names carried through a run of 2-3/3-2 moves. Each tracked
// tetrahedron knows the name of some of its vertices (-1 for unnamed).
class LocalNames {
 public:
  void name(int tet, int vertex, int label) { names_[tet][vertex] = label; }
  void name_all(int tet, const std::array<int, 4>& labels) { names_[tet] = labels; }

  void follow(const MoveOutcome& out) {
    std::map<int, std::array<int, 4>> next;
    for (const auto& [t, labels] : names_)
      if (t < static_cast<int>(out.tet_map.size()) && out.tet_map[t] >= 0) next[out.tet_map[t]] = labels;
    for (const auto& [old, image] : out.face_map) {
      auto it = names_.find(old.tet);
      if (it == names_.end()) continue;
      auto& row = next.try_emplace(image.face.tet, blank()).first->second;
      for (int v = 0; v < 4; ++v)
        if (v != old.face && it->second[v] >= 0) row[image.perm[v]] = it->second[v];
    }
    // The vertex opposite an imported face is named when another face of
    // the same tetrahedron was imported too; nothing else can be inferred.
    names_ = std::move(next);
  }

  // The tracked tetrahedron whose named vertices are exactly `labels`.
  int find(std::array<int, 4> labels) const {
    std::sort(labels.begin(), labels.end());
    for (const auto& [t, row] : names_) {
      auto sorted = row;
      std::sort(sorted.begin(), sorted.end());
      if (sorted == labels) return t;
    }
    throw PreconditionError("lost track of a tetrahedron during a composite move");
  }
  int vertex(int tet, int label) const {
    const auto& row = names_.at(tet);
    for (int v = 0; v < 4; ++v)
      if (row[v] == label) return v;
    throw PreconditionError("lost track of a vertex during a composite move");
  }
  const std::map<int, std::array<int, 4>>& all() const { return names_; }

 private:
  static std::array<int, 4> blank() { return {-1, -1, -1, -1}; }
  std::map<int, std::array<int, 4>> names_;
};

std::vector<int> identity_map(int n) {
  std::vector<int> m(n);
  for (int i = 0; i < n; ++i) m[i] = i;
  return m;
}

// map := then o map, keeping removed entries at -1.
void compose(std::vector<int>& map, const std::vector<int>& then) {
  for (int& t : map)
    if (t >= 0) t = then[t];
}

// Applies a 2-3/3-2 move, refusing to produce a degree-one edge.
MoveOutcome careful(const Triangulation& tri, const ElementaryMove& m, const char* what) {
  MoveOutcome out = apply_move(tri, m);
  if (!Skeleton(out.result).degree_one_edges().empty())
    throw PreconditionError(std::string(what) + ": move " + m.str() + " would create a degree-one edge");
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Pillow

Triangulation build_pillow() {
  return parse_gluing_table(
      "fragment 4\n"
      "1:0132 1:0132 - 3:0213\n"
      "0:0132 0:0132 3:0321 2:0213\n"
      "3:0132 3:0132 - 1:0213\n"
      "2:0132 2:0132 1:0321 0:0213\n");
}

Triangulation glue_pillow(const Triangulation& tri, FaceRef side, int from, int to) {
  if (!tri.gluing(side).glued()) throw PreconditionError("face " + face_str(side) + " is not glued");
  if (from == to || from == side.face || to == side.face || from < 0 || to < 0 || from > 3 || to > 3)
    throw PreconditionError("vertices " + std::to_string(from) + "," + std::to_string(to) +
                            " do not span an edge of face " + face_str(side));
  int img[4];
  img[side.face] = 2;
  img[third_vertex(side.face, from, to)] = 0;
  img[from] = 1;
  img[to] = 3;
  const Perm alpha(img[0], img[1], img[2], img[3]);
  const Gluing across = tri.gluing(side);
  const FaceRef other = tri.partner(side);
  const Perm beta = kPillowAcross * alpha * across.perm.inverse();

  const int n = tri.size();
  auto rows = tri.rows();
  const Triangulation pillow = build_pillow();
  for (const auto& prow : pillow.rows()) {
    GluingRow row = prow;
    for (auto& g : row)
      if (g.glued()) g.tet += n;
    rows.push_back(row);
  }
  rows[side.tet][side.face] = Gluing{n + kPillowFaceA.tet, alpha};
  rows[n + kPillowFaceA.tet][kPillowFaceA.face] = Gluing{side.tet, alpha.inverse()};
  rows[other.tet][other.face] = Gluing{n + kPillowFaceB.tet, beta};
  rows[n + kPillowFaceB.tet][kPillowFaceB.face] = Gluing{other.tet, beta.inverse()};
  return tri.is_closed() ? Triangulation::from_gluings(std::move(rows))
                         : Triangulation::fragment(std::move(rows));
}

PillowHandle pillow_handle(const Triangulation& tri, const std::array<int, 4>& tets,
                           const std::array<Perm, 4>& perms) {
  static const Triangulation pillow = build_pillow();
  for (int i = 0; i < 4; ++i)
    if (tets[i] < 0 || tets[i] >= tri.size()) throw PreconditionError("pillow tetrahedron out of range");
  for (int i = 0; i < 4; ++i)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = pillow.gluing(i, f);
      if (!g.glued()) continue;
      const Gluing& h = tri.gluing(tets[i], perms[i][f]);
      if (h.tet != tets[g.tet] || h.perm != perms[g.tet] * g.perm * perms[i].inverse())
        throw PreconditionError("pillow is no longer intact at face " + face_str({tets[i], perms[i][f]}));
    }
  PillowHandle h;
  h.tets = tets;
  h.perms = perms;
  h.outside_a = tri.partner({tets[kPillowFaceA.tet], perms[kPillowFaceA.tet][kPillowFaceA.face]});
  h.outside_b = tri.partner({tets[kPillowFaceB.tet], perms[kPillowFaceB.tet][kPillowFaceB.face]});
  for (int t : tets)
    if (h.outside_a.tet == t || h.outside_b.tet == t) throw PreconditionError("pillow is glued to itself");
  return h;
}

PillowHandle follow_handle(const Triangulation& tri, const PillowHandle& h, const std::vector<int>& tet_map) {
  std::array<int, 4> tets{};
  for (int i = 0; i < 4; ++i) {
    tets[i] = tet_map.at(h.tets[i]);
    if (tets[i] < 0) throw PreconditionError("a move removed a pillow tetrahedron");
  }
  return pillow_handle(tri, tets, h.perms);
}

Triangulation cut_pillow(const Triangulation& tri, const PillowHandle& h, std::vector<int>* tet_map) {
  // Outside labels -> pillow labels on each side, then across the pillow.
  const Perm alpha = h.perms[kPillowFaceA.tet].inverse() * tri.gluing(h.outside_a).perm;
  const Perm beta = h.perms[kPillowFaceB.tet].inverse() * tri.gluing(h.outside_b).perm;
  const Perm sigma = beta.inverse() * kPillowAcross * alpha;

  std::vector<int> map(tri.size(), 0);
  for (int t : h.tets) map[t] = -1;
  int next = 0;
  for (int t = 0; t < tri.size(); ++t)
    if (map[t] == 0) map[t] = next++;
  std::vector<GluingRow> rows(next);
  for (int t = 0; t < tri.size(); ++t) {
    if (map[t] < 0) continue;
    GluingRow row = tri.rows()[t];
    for (auto& g : row)
      if (g.glued()) g.tet = map[g.tet];
    rows[map[t]] = row;
  }
  rows[map[h.outside_a.tet]][h.outside_a.face] = Gluing{map[h.outside_b.tet], sigma};
  rows[map[h.outside_b.tet]][h.outside_b.face] = Gluing{map[h.outside_a.tet], sigma.inverse()};
  if (tet_map) *tet_map = map;
  return tri.is_closed() ? Triangulation::from_gluings(std::move(rows))
                         : Triangulation::fragment(std::move(rows));
}

// ---------------------------------------------------------------------------
// V-move

std::optional<std::string> v_move_obstruction(const Triangulation& tri, const Skeleton& sk, int tet,
                                              int apex) {
  const FaceRef face{tet, apex};
  const Gluing& g = tri.gluing(face);
  if (!g.glued()) return "face " + face_str(face) + " is unglued";
  if (g.tet == tet) return "face " + face_str(face) + " is glued to its own tetrahedron";
  for (int k = 0; k < 6; ++k) {
    const auto [a, b] = kEdgeVertices[k];
    if (a == apex || b == apex) continue;
    const int e = sk.edge_of(tet, k);
    if (sk.degree(e) < 3)
      return "edge class " + std::to_string(e) + " of face " + face_str(face) + " has degree " +
             std::to_string(sk.degree(e));
  }
  return std::nullopt;
}

VMoveResult v_move(const Triangulation& tri, int tet, int pair, int apex) {
  if (tet < 0 || tet >= tri.size()) throw PreconditionError("no tetrahedron " + std::to_string(tet));
  if (pair < 0 || pair > 2) throw PreconditionError("edge pair must be 0, 1 or 2");
  if (apex < 0 || apex > 3) throw PreconditionError("apex must be a vertex 0..3");
  const Skeleton sk(tri);
  if (!sk.degree_one_edges().empty()) throw PreconditionError("V-move: input has a degree-one edge");
  if (auto why = v_move_obstruction(tri, sk, tet, apex)) throw PreconditionError("V-move: " + *why);

  // Names: a = apex, b = its partner in the pair, c and d the other pair,
  // E the far vertex across the triangle opposite a.
  enum { A, B, C, D, E };
  const auto e1 = kEdgeVertices[pair];
  const auto e2 = kEdgeVertices[opposite_edge(pair)];
  int b, c, d;
  if (e1[0] == apex || e1[1] == apex) {
    b = e1[0] == apex ? e1[1] : e1[0];
    c = e2[0];
    d = e2[1];
  } else {
    b = e2[0] == apex ? e2[1] : e2[0];
    c = e1[0];
    d = e1[1];
  }
  LocalNames names;
  {
    std::array<int, 4> row{};
    row[apex] = A;
    row[b] = B;
    row[c] = C;
    row[d] = D;
    names.name_all(tet, row);
    const Gluing& g = tri.gluing(tet, apex);
    std::array<int, 4> far{};
    far[g.perm[apex]] = E;
    far[g.perm[b]] = B;
    far[g.perm[c]] = C;
    far[g.perm[d]] = D;
    names.name_all(g.tet, far);
  }

  VMoveResult r{tri, {}, -1, {}, -1, identity_map(tri.size())};
  int nb = -1;  // N_b, the tetrahedron {a,c,d,E} of the first 2-3, followed by index
  auto step = [&](const ElementaryMove& m) {
    MoveOutcome out = careful(r.result, m, "V-move");
    names.follow(out);
    if (nb >= 0) nb = out.tet_map[nb];
    compose(r.tet_map, out.tet_map);
    r.moves.push_back(m);
    r.result = std::move(out.result);
  };

  step(ElementaryMove::two_three({tet, apex}));
  nb = names.find({A, C, D, E});
  {
    const int t = names.find({A, B, C, E});
    step(ElementaryMove::two_three({t, names.vertex(t, C)}));
  }
  {
    const int t = names.find({B, C, D, E});
    step(ElementaryMove::two_three({t, names.vertex(t, B)}));
  }
  if (nb < 0) throw PreconditionError("V-move: lost the tetrahedron carrying edge aE");
  {
    const Skeleton s(r.result);
    const int edge = s.edge_of(nb, edge_number(names.vertex(nb, A), names.vertex(nb, E)));
    if (s.degree(edge) != 3) throw PreconditionError("V-move: edge aE did not reach degree three");
    step(ElementaryMove::three_two(edge));
  }

  // The new beak: the degree-two edge whose book is made of tetrahedra the
  // V-move created.
  const Skeleton s(r.result);
  std::set<int> created;
  for (const auto& [t, row] : names.all()) created.insert(t);
  for (int e = 0; e < s.edge_count(); ++e) {
    const auto& ec = s.edge(e);
    if (ec.degree != 2 || ec.book.size() != 2) continue;
    if (created.count(ec.book[0].tet) && created.count(ec.book[1].tet) && ec.book[0].tet != ec.book[1].tet) {
      r.hinge = e;
      r.beak = {ec.book[0].tet, ec.book[1].tet};
      break;
    }
  }
  if (r.hinge < 0) throw PreconditionError("V-move: no beak in the result");
  for (const auto& [t, row] : names.all()) {
    auto sorted = row;
    std::sort(sorted.begin(), sorted.end());
    if (sorted == std::array<int, 4>{A, B, C, D} && t != r.beak[0] && t != r.beak[1]) r.wrapped = t;
  }
  return r;
}

VMoveResult v_move(const Triangulation& tri, int tet, int pair) {
  const Skeleton sk(tri);
  for (int apex = 0; apex < 4; ++apex)
    if (!v_move_obstruction(tri, sk, tet, apex)) return v_move(tri, tet, pair, apex);
  throw PreconditionError("V-move: no triangle of tetrahedron " + std::to_string(tet) +
                          " has distinct sides and edges of degree at least three");
}

// ---------------------------------------------------------------------------
// Bird beaks

BirdBeak bird_beak(const Triangulation& tri, const Skeleton& sk, int hinge) {
  (void)tri;
  if (hinge < 0 || hinge >= sk.edge_count()) throw PreconditionError("no edge class " + std::to_string(hinge));
  const auto& ec = sk.edge(hinge);
  if (ec.degree != 2 || ec.book.size() != 2)
    throw PreconditionError("edge class " + std::to_string(hinge) + " does not have degree two");
  if (ec.book[0].tet == ec.book[1].tet)
    throw PreconditionError("edge class " + std::to_string(hinge) + " lies twice in one tetrahedron");
  BirdBeak b;
  b.hinge = hinge;
  for (int s = 0; s < 2; ++s) {
    b.tets[s] = ec.book[s].tet;
    b.ends[s] = {ec.book[s].emb[0], ec.book[s].emb[1]};
  }
  return b;
}

RotationResult rotate_mandible(const Triangulation& tri, const BirdBeak& beak, int mandible, int side) {
  if (mandible < 0 || mandible > 1 || side < 0 || side > 1)
    throw PreconditionError("mandible and side must be 0 or 1");
  const FaceRef face = beak.mandible_face(mandible, side);
  const int passed = tri.gluing(face).tet;
  if (passed == beak.tets[0] || passed == beak.tets[1])
    throw PreconditionError("rotation: the tetrahedron past the mandible belongs to the beak");

  // Name the hinge by its ends so it can be found after the 2-3.
  LocalNames names;
  for (int s = 0; s < 2; ++s) {
    std::array<int, 4> row{-1, -1, -1, -1};
    row[beak.ends[s][0]] = 0;
    row[beak.ends[s][1]] = 1;
    names.name_all(beak.tets[s], row);
  }
  RotationResult r{tri, {}, {}, passed, -1, identity_map(tri.size())};
  auto step = [&](const ElementaryMove& m) {
    MoveOutcome out = careful(r.result, m, "rotation");
    names.follow(out);
    compose(r.tet_map, out.tet_map);
    r.moves.push_back(m);
    r.result = std::move(out.result);
    return out;
  };
  const MoveOutcome first = step(ElementaryMove::two_three(face));

  // The other beak tetrahedron survived the 2-3 and still carries the hinge.
  const Skeleton mid(r.result);
  int hinge = -1;
  for (const auto& [t, row] : names.all()) {
    int v0 = -1, v1 = -1;
    for (int v = 0; v < 4; ++v) {
      if (row[v] == 0) v0 = v;
      if (row[v] == 1) v1 = v;
    }
    if (v0 >= 0 && v1 >= 0) {
      hinge = mid.edge_of(t, edge_number(v0, v1));
      break;
    }
  }
  if (hinge < 0 || mid.degree(hinge) != 3)
    throw PreconditionError("rotation: the hinge did not reach degree three");
  MoveOutcome last = step(ElementaryMove::three_two(hinge));

  // The new beak pairs a tetrahedron of the 3-2 with the one tetrahedron of
  // the 2-3 that the 3-2 left alone.
  const Skeleton after(r.result);
  std::set<int> fresh(last.new_tets.begin(), last.new_tets.end());
  for (int t : first.new_tets)
    if (last.tet_map[t] >= 0) fresh.insert(last.tet_map[t]);
  for (int e = 0; e < after.edge_count(); ++e) {
    const auto& ec = after.edge(e);
    if (ec.degree == 2 && ec.book.size() == 2 && fresh.count(ec.book[0].tet) && fresh.count(ec.book[1].tet) &&
        ec.book[0].tet != ec.book[1].tet) {
      r.beak = bird_beak(r.result, after, e);
      for (int t : last.new_tets)
        if (t != r.beak.tets[0] && t != r.beak.tets[1]) r.moved = t;
      return r;
    }
  }
  throw PreconditionError("rotation: no beak after the 3-2 move");
}

// ---------------------------------------------------------------------------
// Pillow sites and the stack walk

PillowSite pillow_site_at(const Triangulation& tri, const Skeleton& sk, FaceRef triangle, int x, int y) {
  const int P = triangle.tet;
  const int wbar = triangle.face;
  if (P < 0 || P >= tri.size() || wbar < 0 || wbar > 3) throw PreconditionError("no face " + face_str(triangle));
  if (x == y || x == wbar || y == wbar || x < 0 || y < 0 || x > 3 || y > 3)
    throw PreconditionError("vertices " + std::to_string(x) + "," + std::to_string(y) +
                            " do not span an edge of face " + face_str(triangle));
  PillowSite s;
  s.triangle = triangle;
  s.front = P;
  s.x = x;
  s.y = y;
  s.w = third_vertex(wbar, x, y);
  s.wbar = wbar;
  s.e = sk.edge_of(P, edge_number(x, y));
  s.e1 = sk.edge_of(P, edge_number(y, s.w));
  s.e2 = sk.edge_of(P, edge_number(x, s.w));
  s.ebar1 = sk.edge_of(P, edge_number(y, wbar));
  s.ebar2 = sk.edge_of(P, edge_number(x, wbar));
  s.f = sk.edge_of(P, edge_number(s.w, wbar));
  const auto& ec = sk.edge(s.e);
  if (ec.degree != 2) throw PreconditionError("edge class " + std::to_string(s.e) + " does not have degree two");
  s.back = tri.gluing(triangle).tet;
  if (s.back == P || ec.book[0].tet == ec.book[1].tet)
    throw PreconditionError("the two tetrahedra at edge class " + std::to_string(s.e) + " coincide");
  if (tri.gluing(P, s.w).tet != s.back)
    throw PreconditionError("face " + face_str({P, s.w}) + " is not glued to the back tetrahedron");
  return s;
}

PillowSite pillow_site(const Triangulation& tri, const Skeleton& sk, FaceRef triangle, int e) {
  for (int k = 0; k < 6; ++k) {
    const auto [a, b] = kEdgeVertices[k];
    if (a != triangle.face && b != triangle.face && sk.edge_of(triangle.tet, k) == e)
      return pillow_site_at(tri, sk, triangle, a, b);
  }
  throw PreconditionError("edge class " + std::to_string(e) + " is not an edge of face " + face_str(triangle));
}

namespace {

// The same site seen from the back tetrahedron.
PillowSite flip_site(const Triangulation& tri, const Skeleton& sk, const PillowSite& s) {
  const Perm g = tri.gluing(s.triangle).perm;
  return pillow_site_at(tri, sk, {s.back, g[s.wbar]}, g[s.x], g[s.y]);
}

bool all_at_least_three(const Skeleton& sk, int tet, int face) {
  for (int k = 0; k < 6; ++k) {
    const auto [a, b] = kEdgeVertices[k];
    if (a != face && b != face && sk.degree(sk.edge_of(tet, k)) < 3) return false;
  }
  return true;
}

}  // namespace

VSite find_v_site(const Triangulation& tri, const Skeleton& sk, const PillowSite& site) {
  for (int c : {site.e1, site.e2, site.ebar1, site.ebar2})
    if (sk.degree(c) < 3) {
      // Both tetrahedra at e would be the only ones around a vertex.
      std::ostringstream msg;
      msg << "edge class " << c << " next to the degree-two edge has degree " << sk.degree(c)
          << ", so a vertex of the triangulation has a spherical link made of two tetrahedra"
          << " (the triangulation has " << sk.vertex_count() << " vertices)";
      throw HypothesisError(msg.str());
    }

  const PillowSite back = flip_site(tri, sk, site);
  const bool front_ok = !v_move_obstruction(tri, sk, site.front, site.x) && all_at_least_three(sk, site.front, site.x);
  const bool back_ok = !v_move_obstruction(tri, sk, back.front, back.x) && all_at_least_three(sk, back.front, back.x);
  auto at = [](const PillowSite& s) {
    VSite v;
    v.site = s;
    v.tet = s.front;
    v.apex = s.x;
    const int k = edge_number(s.y, s.w);
    v.pair = std::min(k, opposite_edge(k));
    v.third_edge = s.f;
    return v;
  };
  if (front_ok && back_ok) return back.f < site.f ? at(back) : at(site);
  if (front_ok) return at(site);
  if (back_ok) return at(back);

  // Climb the stack: each step crosses a degree-two edge into the next
  // tetrahedron, carrying the model edge e1 along. In each tetrahedron the
  // candidate is the face holding e1 that we did not arrive through; its
  // third edge is the one opposite the degree-two edge we crossed.
  VSite v;
  v.site = site;
  int cur = site.front;
  int ea = site.y, eb = site.w;  // e1 in cur
  int came = site.wbar;          // we arrived through the face opposite this vertex
  std::array<int, 2> crossed{-1, -1};
  std::set<int> seen{site.front};
  for (int steps = 0; steps <= tri.size(); ++steps) {
    const int out = 6 - ea - eb - came;  // the candidate is the face opposite this vertex
    if (steps > 0 && !v_move_obstruction(tri, sk, cur, out) && all_at_least_three(sk, cur, out)) {
      v.tet = cur;
      v.apex = out;
      const int k = edge_number(ea, eb);
      v.pair = std::min(k, opposite_edge(k));
      v.third_edge = sk.edge_of(cur, 5 - edge_number(crossed[0], crossed[1]));
      return v;
    }
    int low = -1;  // the degree-two edge of the candidate face, other than e1
    for (int k = 0; k < 6; ++k) {
      const auto [a, b] = kEdgeVertices[k];
      if (a == out || b == out || k == edge_number(ea, eb)) continue;
      if (sk.degree(sk.edge_of(cur, k)) == 2) low = k;
    }
    if (low < 0) {
      auto why = v_move_obstruction(tri, sk, cur, out);
      throw UnsupportedDegeneracy("stack walk in tetrahedron " + std::to_string(cur) + ": " +
                                  (why ? *why : std::string("no degree-two edge to climb past")));
    }
    const Gluing& g = tri.gluing(cur, out);
    const int next = g.tet;
    if (next == site.back) {
      std::ostringstream msg;
      msg << "the stack of " << v.stack.size() + 2 << " tetrahedra at edge class " << site.e
          << " closes up on itself";
      if (sk.vertex_count() == 1)
        throw L41Exception(msg.str() + " with a quarter turn: this is the one-vertex L(4,1) stack");
      throw HypothesisError(msg.str() + " without a quarter turn, leaving " + std::to_string(sk.vertex_count()) +
                            " vertices with spherical links");
    }
    if (!seen.insert(next).second)
      throw HypothesisError("stack walk: tetrahedron " + std::to_string(next) + " appears twice in the stack");
    v.stack.push_back(next);
    crossed = {g.perm[kEdgeVertices[low][0]], g.perm[kEdgeVertices[low][1]]};
    ea = g.perm[ea];
    eb = g.perm[eb];
    came = g.perm[out];
    cur = next;
  }
  throw HypothesisError("stack walk did not terminate");
}

// ---------------------------------------------------------------------------
// Pillow insertion

namespace {

// The tetrahedra to keep an eye on while composite moves renumber things.
struct Tracked {
  std::vector<int*> refs;
  void follow(const std::vector<int>& tet_map) {
    for (int* r : refs)
      if (*r >= 0) *r = tet_map[*r];
  }
};

PillowHandle handle_from(const Triangulation& tri, const Isomorphism& iso, int n_before) {
  std::array<int, 4> tets{};
  std::array<Perm, 4> perms{};
  for (int i = 0; i < 4; ++i) {
    tets[i] = iso.tet_map[n_before + i];
    perms[i] = iso.perms[n_before + i];
  }
  return pillow_handle(tri, tets, perms);
}

bool coincident_classes(const PillowSite& s) {
  std::set<int> c{s.e, s.e1, s.e2, s.ebar1, s.ebar2, s.f};
  return c.size() < 6;
}

}  // namespace

PillowInsertion insert_pillow(const Triangulation& tri, const PillowSite& requested) {
  const Skeleton sk(tri);
  if (!sk.degree_one_edges().empty()) throw PreconditionError("insert_pillow: input has a degree-one edge");
  const PillowSite checked = pillow_site_at(tri, sk, requested.triangle, requested.x, requested.y);
  const VSite walk = find_v_site(tri, sk, checked);
  const PillowSite& s = walk.site;
  const bool degenerate = coincident_classes(s);

  PillowInsertion out{tri, {}, {}, walk, 0, 0};
  Triangulation cur = tri;
  int Q = s.back;
  std::vector<int> stack{s.front};  // P, T1, ..., T(k-1): the tetrahedra below the V-move
  for (std::size_t i = 0; i + 1 < walk.stack.size(); ++i) stack.push_back(walk.stack[i]);
  Tracked tracked;
  tracked.refs.push_back(&Q);
  for (int& t : stack) tracked.refs.push_back(&t);

  auto fail = [&](const std::string& what) -> PillowInsertion {
    if (degenerate)
      throw UnsupportedDegeneracy("insert_pillow: edges around the triangle coincide as classes and " + what);
    throw PreconditionError("insert_pillow: " + what);
  };

  try {
    // First beak, splitting the book of e1, wherever the walk found room.
    VMoveResult v1 = v_move(cur, walk.tet, walk.pair, walk.apex);
    out.moves.insert(out.moves.end(), v1.moves.begin(), v1.moves.end());
    tracked.follow(v1.tet_map);
    cur = v1.result;
    BirdBeak beak = bird_beak(cur, Skeleton(cur), v1.hinge);
    int top = v1.wrapped;
    tracked.refs.push_back(&top);

    auto rotate_past = [&](int target) -> int {
      for (int j = 0; j < 2; ++j)
        for (int side = 0; side < 2; ++side)
          if (cur.gluing(beak.mandible_face(j, side)).tet == target) {
            RotationResult r = rotate_mandible(cur, beak, j, side);
            out.moves.insert(out.moves.end(), r.moves.begin(), r.moves.end());
            tracked.follow(r.tet_map);
            cur = r.result;
            beak = r.beak;
            return r.moved;
          }
      throw PreconditionError("no mandible faces tetrahedron " + std::to_string(target));
    };

    // Bring the beak down the stack: the lower mandible first, past
    // T(k-1), ..., T1, P; then the upper one past the copies of Tk, ..., T1.
    std::vector<int> copies(stack.size(), -1);
    for (int& c : copies) tracked.refs.push_back(&c);
    for (int i = static_cast<int>(stack.size()) - 1; i >= 0 && !walk.stack.empty(); --i)
      copies[i] = rotate_past(stack[i]);
    if (!walk.stack.empty()) {
      int target = top;
      for (int i = static_cast<int>(stack.size()) - 1; i >= 1; --i) {
        rotate_past(target);
        target = copies[i];
      }
      rotate_past(target);
    }

    // The front tetrahedron now sits between the beak and Q, across the
    // triangle opposite w from the back.
    if (Q < 0) return fail("the first beak swallowed the back tetrahedron");
    const Gluing to_back = tri.gluing(s.front, s.w);
    const int qface = to_back.perm[s.w];
    const Gluing& back = cur.gluing(Q, qface);
    const int front = back.tet;
    const Perm names = back.perm * to_back.perm;  // original front labels -> current front labels

    // Second beak, splitting the book of e2 across the triangle (e2, ebar2, f).
    out.second_v_move_at = static_cast<int>(out.moves.size());
    const int k2 = edge_number(names[s.x], names[s.w]);
    const int pair2 = std::min(k2, opposite_edge(k2));
    const int apex2 = v_move_obstruction(cur, Skeleton(cur), front, names[s.y]) ? names[s.w] : names[s.y];
    VMoveResult v2 = v_move(cur, front, pair2, apex2);
    out.moves.insert(out.moves.end(), v2.moves.begin(), v2.moves.end());
    cur = v2.result;

    // Close the beaks on each other. Which mandibles have to move depends on
    // where the two V-moves left them in their books, so try every pair of
    // rotations and keep the first that gives the pillow.
    const Triangulation expected = glue_pillow(tri, s.triangle, s.x, s.y);
    const IsoSignature target = iso_signature(expected);
    std::function<bool(const Triangulation&, std::vector<ElementaryMove>&, int)> close =
        [&](const Triangulation& at, std::vector<ElementaryMove>& path, int depth) {
          if (at.size() == expected.size() && iso_signature(at) == target) {
            // Anchor on a tetrahedron no move touched. An arbitrary
            // isomorphism may swap the new pillow with one already there.
            std::vector<ElementaryMove> all = out.moves;
            all.insert(all.end(), path.begin(), path.end());
            std::vector<int> kept = [&] {
              std::vector<int> m(tri.size());
              for (int t = 0; t < tri.size(); ++t) m[t] = t;
              Triangulation walk = tri;
              for (const ElementaryMove& mv : all) {
                MoveOutcome o = apply_move(walk, mv);
                for (int& t : m)
                  if (t >= 0) t = o.tet_map[t];
                walk = std::move(o.result);
              }
              return m;
            }();
            std::optional<Isomorphism> iso;
            for (int t = 0; t < tri.size() && !iso; ++t)
              if (kept[t] >= 0) iso = isomorphism_from(expected, at, t, kept[t], Perm());
            if (!iso) iso = find_isomorphism(expected, at);
            out.moves.insert(out.moves.end(), path.begin(), path.end());
            out.result = at;
            out.handle = handle_from(at, *iso, tri.size());
            return true;
          }
          if (depth == 0) return false;
          const Skeleton sk_at(at);
          for (int h = 0; h < sk_at.edge_count(); ++h) {
            const auto& ec = sk_at.edge(h);
            if (ec.degree != 2 || ec.book[0].tet == ec.book[1].tet) continue;
            const BirdBeak bb = bird_beak(at, sk_at, h);
            for (int j = 0; j < 2; ++j)
              for (int side = 0; side < 2; ++side) {
                std::optional<RotationResult> r;
                try {
                  r = rotate_mandible(at, bb, j, side);
                } catch (const PreconditionError&) {
                  continue;
                }
                path.insert(path.end(), r->moves.begin(), r->moves.end());
                if (close(r->result, path, depth - 1)) return true;
                path.resize(path.size() - r->moves.size());
              }
          }
          return false;
        };
    std::vector<ElementaryMove> path;
    if (close(cur, path, 2)) return out;
    return fail("the two beaks did not close into a pillow");
  } catch (const UnsupportedDegeneracy&) {
    throw;
  } catch (const PreconditionError& e) {
    if (degenerate) throw UnsupportedDegeneracy(std::string("insert_pillow: ") + e.what());
    throw;
  }
}

PillowRemoval remove_pillow(const Triangulation& tri, const PillowHandle& handle) {
  const PillowHandle h = pillow_handle(tri, handle.tets, handle.perms);
  std::vector<int> cut_map;
  const Triangulation cut = cut_pillow(tri, h, &cut_map);
  const Skeleton sk(cut);

  // Insert again on the cut triangulation, from either side of the reglued
  // triangle and with either chirality, until the result matches tri. The
  // side matters only when the insertion meets a degenerate site.
  std::optional<PillowInsertion> ins;
  std::optional<Isomorphism> iso;
  std::string why;
  for (const int pillow_tet : {0, 2}) {
    const FaceRef outside = pillow_tet == 0 ? h.outside_a : h.outside_b;
    const Perm to_outside = tri.gluing(outside).perm.inverse() * h.perms[pillow_tet];
    const FaceRef side{cut_map[outside.tet], outside.face};
    for (const bool swap : {false, true}) {
      const int x = to_outside[swap ? 3 : 1], y = to_outside[swap ? 1 : 3];
      std::optional<PillowInsertion> attempt;
      try {
        attempt = insert_pillow(cut, pillow_site_at(cut, sk, side, x, y));
      } catch (const UnsupportedDegeneracy& e) {
        why = e.what();
        continue;
      }
      if (!is_isomorphic(attempt->result, tri)) continue;
      const int a0 = attempt->handle.tets[0];
      iso = isomorphism_from(attempt->result, tri, a0, h.tets[0], h.perms[0] * attempt->handle.perms[0].inverse());
      if (!iso) iso = find_isomorphism(attempt->result, tri);
      ins = std::move(attempt);
      break;
    }
    if (ins) break;
  }
  if (!ins && !why.empty()) throw UnsupportedDegeneracy("remove_pillow: " + why);
  if (!ins) throw PreconditionError("remove_pillow: re-insertion on the cut triangulation does not give back the input");

  PillowRemoval out{tri, {}};
  Triangulation a = ins->result;
  for (const ElementaryMove& m : reverse_moves(cut, ins->moves)) {
    const ElementaryMove mb = transport_move(a, out.result, *iso, m);
    MoveOutcome oa = apply_move(a, m);
    MoveOutcome ob = careful(out.result, mb, "remove_pillow");
    auto next = follow_isomorphism(*iso, oa, ob);
    if (!next) throw PreconditionError("remove_pillow: lost track of the isomorphism at move " + mb.str());
    iso = std::move(next);
    a = std::move(oa.result);
    out.result = std::move(ob.result);
    out.moves.push_back(mb);
  }
  return out;
}

// ---------------------------------------------------------------------------
// L(4,1)

Triangulation build_l41_stack(int k) {
  if (k < 3 || k % 2 == 0) throw PreconditionError("build_l41_stack: k must be odd and at least 3");
  // Faces 0 and 1 of each tetrahedron go to faces 3 and 2 of the next one.
  const Perm phi(3, 2, 0, 1);
  std::vector<GluingRow> rows(k);
  for (int t = 0; t < k; ++t) {
    const int n = (t + 1) % k;
    rows[t][0] = Gluing{n, phi};
    rows[t][1] = Gluing{n, phi};
    rows[n][phi[0]] = Gluing{t, phi.inverse()};
    rows[n][phi[1]] = Gluing{t, phi.inverse()};
  }
  return Triangulation::from_gluings(rows);
}

bool detect_l41_exceptional(const Triangulation& tri) {
  const int n = tri.size();
  if (n < 3 || n % 2 == 0) return false;
  return is_isomorphic(tri, build_l41_stack(n));
}

// ---------------------------------------------------------------------------
// Paths

namespace {

// The move undoing `m`, addressed in the state `o` produced.
ElementaryMove undo(const ElementaryMove& m, const MoveOutcome& o) {
  if (m.kind == MoveKind::move23) return ElementaryMove::three_two(o.created_edges.at(0).first);
  if (m.kind == MoveKind::move32) {
    // The triangle between the two new tetrahedra is the only face of
    // theirs that is not the image of an old boundary face.
    std::set<FaceRef> images;
    for (const auto& [from, img] : o.face_map) images.insert(img.face);
    const int t = o.new_tets.at(0);
    for (int f = 0; f < 4; ++f)
      if (!images.count(FaceRef{t, f})) return ElementaryMove::two_three({t, f});
  }
  throw PreconditionError("reverse_moves: only 2-3 and 3-2 moves can be reversed, got " + m.str());
}

}  // namespace

std::vector<ElementaryMove> reverse_moves(const Triangulation& start, const std::vector<ElementaryMove>& moves) {
  std::vector<MoveOutcome> forward;
  forward.reserve(moves.size());
  for (const ElementaryMove& m : moves) forward.push_back(apply_move(forward.empty() ? start : forward.back().result, m));
  if (forward.empty()) return {};

  // Undoing a move lands on a relabelled copy of the earlier state, so each
  // undo is carried over to the state actually reached by an isomorphism.
  std::vector<ElementaryMove> back;
  Triangulation cur = forward.back().result;
  Isomorphism iso{identity_map(cur.size()), std::vector<Perm>(cur.size())};
  for (int i = static_cast<int>(moves.size()) - 1; i >= 0; --i) {
    const MoveOutcome& o = forward[i];
    const Triangulation& before = i == 0 ? start : forward[i - 1].result;
    const ElementaryMove m = transport_move(o.result, cur, iso, undo(moves[i], o));
    MoveOutcome u = apply_move(cur, m);
    std::optional<Isomorphism> next;
    for (int t = 0; t < before.size() && !next; ++t) {
      const int mid = o.tet_map[t];
      if (mid < 0 || u.tet_map[iso.tet_map[mid]] < 0) continue;
      next = isomorphism_from(before, u.result, t, u.tet_map[iso.tet_map[mid]], iso.perms[mid]);
    }
    if (!next) next = find_isomorphism(before, u.result);
    if (!next) throw PreconditionError("reverse_moves: undoing " + moves[i].str() + " did not restore the state");
    iso = std::move(*next);
    back.push_back(m);
    cur = std::move(u.result);
  }
  return back;
}

ElementaryMove transport_move(const Triangulation& a, const Triangulation& b, const Isomorphism& iso,
                              const ElementaryMove& m) {
  if (m.kind == MoveKind::move23)
    return ElementaryMove::two_three({iso.tet_map[m.face.tet], iso.perms[m.face.tet][m.face.face]});
  if (m.kind == MoveKind::move02) throw PreconditionError("transport_move: 0-2 book positions do not transport");
  const Skeleton sa(a), sb(b);
  const BookEntry& rep = sa.edge(m.edge).book.at(0);
  const Perm& p = iso.perms[rep.tet];
  ElementaryMove out = m;
  out.edge = sb.edge_of(iso.tet_map[rep.tet], edge_number(p[rep.emb[0]], p[rep.emb[1]]));
  return out;
}

std::optional<Isomorphism> follow_isomorphism(const Isomorphism& iso, const MoveOutcome& on_a,
                                              const MoveOutcome& on_b) {
  for (std::size_t t = 0; t < on_a.tet_map.size(); ++t) {
    const int ta = on_a.tet_map[t];
    const int tb = on_b.tet_map[iso.tet_map[t]];
    if (ta < 0 || tb < 0) continue;
    return isomorphism_from(on_a.result, on_b.result, ta, tb, iso.perms[t]);
  }
  return find_isomorphism(on_a.result, on_b.result);
}

int first_degree_one_state(const Triangulation& start, const std::vector<ElementaryMove>& moves) {
  Triangulation cur = start;
  if (!Skeleton(cur).degree_one_edges().empty()) return 0;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    cur = apply_move(cur, moves[i]).result;
    if (!Skeleton(cur).degree_one_edges().empty()) return static_cast<int>(i) + 1;
  }
  return -1;
}

}  // namespace pachner
