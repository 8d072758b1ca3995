#include "pachner/moves.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "pachner/validate.hpp"

namespace pachner {

namespace {

const Perm kSwap23 = Perm::transposition(2, 3);

// A triangulation under construction. Survivors keep their old index as a
// staged id; new tetrahedron k has staged id n_old + k.
struct Staged {
  int n_old = 0;
  std::vector<char> removed;
  std::vector<GluingRow> rows;  // staged id -> row, partner ids staged
  std::vector<std::pair<EdgeRef, EdgeRef>> edge_pairs;  // old ref, staged ref
  std::vector<std::pair<FaceRef, FaceImage>> face_pairs;  // old face, staged face

  explicit Staged(const Triangulation& tri) : n_old(tri.size()), removed(tri.size(), 0) {
    rows = tri.rows();
  }
  int add_tet() {
    rows.emplace_back();
    return static_cast<int>(rows.size()) - 1;
  }
};

MoveOutcome finish(const Triangulation& tri, const Skeleton& old_sk, Staged st) {
  const int n = st.n_old;
  const int fresh = static_cast<int>(st.rows.size()) - n;
  std::vector<int> holes;
  for (int t = 0; t < n; ++t)
    if (st.removed[t]) holes.push_back(t);
  const int final_size = n - static_cast<int>(holes.size()) + fresh;

  std::vector<int> staged_to_final(st.rows.size(), -1);
  for (int t = 0; t < n; ++t)
    if (!st.removed[t]) staged_to_final[t] = t;
  int next_append = n;
  for (int k = 0; k < fresh; ++k)
    staged_to_final[n + k] = k < static_cast<int>(holes.size()) ? holes[k] : next_append++;
  if (fresh < static_cast<int>(holes.size())) {
    // Fill the remaining low holes with the highest-indexed survivors.
    std::vector<int> movers;
    for (int t = n - 1; t >= final_size; --t)
      if (!st.removed[t]) movers.push_back(t);
    std::size_t next = 0;
    for (auto h = holes.begin() + fresh; h != holes.end(); ++h)
      if (*h < final_size) staged_to_final[movers[next++]] = *h;
  }

  std::vector<GluingRow> rows(final_size);
  for (std::size_t s = 0; s < st.rows.size(); ++s) {
    if (s < static_cast<std::size_t>(n) && st.removed[s]) continue;
    GluingRow row = st.rows[s];
    for (auto& g : row)
      if (g.glued()) g.tet = staged_to_final[g.tet];
    rows[staged_to_final[s]] = row;
  }
  Triangulation result = tri.is_closed() ? Triangulation::from_gluings(std::move(rows))
                                         : Triangulation::fragment(std::move(rows));

  MoveOutcome out{result, {}, {}, {}, {}, {}, {}, {}};
  out.tet_map.assign(n, -1);
  for (int t = 0; t < n; ++t) out.tet_map[t] = staged_to_final[t];
  for (int k = 0; k < fresh; ++k) out.new_tets.push_back(staged_to_final[n + k]);

  if (tri.is_oriented() && !result.is_oriented()) {
    auto colour = orientation_colouring(result);
    if (!colour.empty()) {
      int ref = 0;
      for (int t = 0; t < n && !ref; ++t)
        if (!st.removed[t]) ref = colour[out.tet_map[t]];
      if (!ref) ref = colour[out.new_tets.front()];
      std::vector<int> ids(result.size());
      std::vector<Perm> maps(result.size());
      for (int t = 0; t < result.size(); ++t) {
        ids[t] = t;
        if (colour[t] != ref) maps[t] = kSwap23;
      }
      out.result = result.relabel(ids, maps);
      // Edge and face pairs refer to labels of new tetrahedra, which may
      // have flipped.
      for (auto& [old_ref, new_ref] : st.edge_pairs) {
        const int fin = staged_to_final[new_ref.tet];
        if (colour[fin] != ref) {
          auto ends = kEdgeVertices[new_ref.edge];
          new_ref.edge = edge_number(kSwap23[ends[0]], kSwap23[ends[1]]);
        }
      }
      for (auto& [old_face, image] : st.face_pairs)
        if (colour[staged_to_final[image.face.tet]] != ref) {
          image.face.face = kSwap23[image.face.face];
          image.perm = kSwap23 * image.perm;
        }
    }
  }

  Skeleton new_sk(out.result);
  std::set<std::pair<int, int>> links;
  for (int t = 0; t < n; ++t) {
    if (st.removed[t]) continue;
    for (int k = 0; k < 6; ++k)
      links.insert({old_sk.edge_of(t, k), new_sk.edge_of(out.tet_map[t], k)});
  }
  for (const auto& [old_ref, new_ref] : st.edge_pairs)
    links.insert({old_sk.edge_of(old_ref), new_sk.edge_of(staged_to_final[new_ref.tet], new_ref.edge)});
  out.edge_links.assign(links.begin(), links.end());
  for (auto [old_face, image] : st.face_pairs) {
    image.face.tet = staged_to_final[image.face.tet];
    out.face_map[old_face] = image;
  }

  std::vector<std::vector<int>> images(old_sk.edge_count()), preimages(new_sk.edge_count());
  for (auto [a, b] : links) {
    images[a].push_back(b);
    preimages[b].push_back(a);
  }
  for (int c = 0; c < old_sk.edge_count(); ++c)
    if (images[c].size() == 1 && preimages[images[c][0]].size() == 1)
      out.degree_deltas[c] = new_sk.degree(images[c][0]) - old_sk.degree(c);
  for (int c = 0; c < new_sk.edge_count(); ++c) {
    if (preimages[c].empty()) out.created_edges.push_back({c, new_sk.degree(c)});
    if (new_sk.degree(c) != 1) continue;
    bool inherited = preimages[c].size() == 1 && old_sk.degree(preimages[c][0]) == 1 &&
                     images[preimages[c][0]].size() == 1;
    if (!inherited) out.created_degree_one.push_back(c);
  }
  return out;
}

struct RegionTet {
  int tet;
  std::array<int, 4> names;
};

unsigned face_mask(const std::array<int, 4>& names, int face) {
  unsigned m = 0;
  for (int v = 0; v < 4; ++v)
    if (v != face) m |= 1u << names[v];
  return m;
}

// Slot map a -> b matching vertex names.
Perm match_names(const std::array<int, 4>& a, const std::array<int, 4>& b, int face_a, int face_b) {
  int img[4];
  for (int i = 0; i < 4; ++i) {
    if (i == face_a) {
      img[i] = face_b;
      continue;
    }
    img[i] = -1;
    for (int j = 0; j < 4; ++j)
      if (b[j] == a[i]) img[i] = j;
  }
  return Perm(img[0], img[1], img[2], img[3]);
}

// Replaces the tetrahedra of `region` by tetrahedra spanned by the given
// vertex names. Faces whose names occur twice among the old tetrahedra are
// interior to the region; every other face of a new tetrahedron must either
// pair with another new face or match exactly one old boundary face.
Staged replace_region(const Triangulation& tri, const std::vector<RegionTet>& region,
                      const std::vector<std::array<int, 4>>& fresh) {
  Staged st(tri);
  std::vector<int> slot(tri.size(), -1);
  for (std::size_t i = 0; i < region.size(); ++i) {
    st.removed[region[i].tet] = 1;
    slot[region[i].tet] = static_cast<int>(i);
  }

  std::map<unsigned, std::vector<FaceRef>> old_faces;
  for (const auto& rt : region)
    for (int f = 0; f < 4; ++f) old_faces[face_mask(rt.names, f)].push_back({rt.tet, f});

  struct NewFace {
    int k;
    int face;
    Perm lambda;  // new slots -> old slots
  };
  std::map<FaceRef, NewFace> boundary_to_new;

  std::vector<int> ids;
  for (std::size_t k = 0; k < fresh.size(); ++k) ids.push_back(st.add_tet());

  std::map<unsigned, std::vector<std::pair<int, int>>> new_faces;
  for (std::size_t k = 0; k < fresh.size(); ++k)
    for (int f = 0; f < 4; ++f) new_faces[face_mask(fresh[k], f)].push_back({static_cast<int>(k), f});

  for (const auto& [mask, list] : new_faces) {
    if (list.size() == 2) {
      auto [k1, f1] = list[0];
      auto [k2, f2] = list[1];
      Perm p = match_names(fresh[k1], fresh[k2], f1, f2);
      st.rows[ids[k1]][f1] = Gluing{ids[k2], p};
      st.rows[ids[k2]][f2] = Gluing{ids[k1], p.inverse()};
      continue;
    }
    auto it = old_faces.find(mask);
    if (list.size() != 1 || it == old_faces.end() || it->second.size() != 1)
      throw std::logic_error("replace_region: inconsistent vertex names");
    auto [k, f] = list[0];
    FaceRef old = it->second.front();
    const auto& old_names = region[slot[old.tet]].names;
    boundary_to_new[old] = NewFace{k, f, match_names(fresh[k], old_names, f, old.face)};
  }

  for (const auto& [old, nf] : boundary_to_new) {
    const Gluing& g = tri.gluing(old);
    Gluing& dst = st.rows[ids[nf.k]][nf.face];
    st.face_pairs.push_back({old, FaceImage{{ids[nf.k], nf.face}, nf.lambda.inverse()}});
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (i != nf.face && j != nf.face)
          st.edge_pairs.push_back({{old.tet, edge_number(nf.lambda[i], nf.lambda[j])},
                                   {ids[nf.k], edge_number(i, j)}});
    if (!g.glued()) {
      dst = Gluing{};
      continue;
    }
    if (!st.removed[g.tet]) {
      dst = Gluing{g.tet, g.perm * nf.lambda};
      st.rows[g.tet][g.perm[old.face]] = Gluing{ids[nf.k], (g.perm * nf.lambda).inverse()};
      continue;
    }
    FaceRef other{g.tet, g.perm[old.face]};
    auto jt = boundary_to_new.find(other);
    if (jt == boundary_to_new.end())
      throw std::logic_error("replace_region: boundary face glued into the region interior");
    dst = Gluing{ids[jt->second.k], jt->second.lambda.inverse() * g.perm * nf.lambda};
  }
  return st;
}

void require_distinct_book(const EdgeClass& ec, const char* what) {
  std::set<int> tets;
  for (const auto& b : ec.book) tets.insert(b.tet);
  if (tets.size() != ec.book.size())
    throw PreconditionError(std::string(what) + ": the tetrahedra around the edge are not distinct");
}

}  // namespace

MoveOutcome pachner_2_3(const Triangulation& tri, FaceRef f) {
  if (f.tet < 0 || f.tet >= tri.size() || f.face < 0 || f.face > 3)
    throw PreconditionError("2-3: no such face");
  const Gluing& g = tri.gluing(f);
  if (!g.glued()) throw PreconditionError("2-3: face is on the boundary");
  if (g.tet == f.tet)
    throw PreconditionError("2-3: the face joins a tetrahedron to itself; the two tetrahedra must be distinct");
  Skeleton sk(tri);

  // Names: vertex v of the first tetrahedron is v, the far apex is 4.
  std::array<int, 4> top{0, 1, 2, 3};
  std::array<int, 4> bottom{};
  for (int v = 0; v < 4; ++v) bottom[g.perm[v]] = v == f.face ? 4 : v;
  std::vector<std::array<int, 4>> fresh;
  for (int x = 0; x < 4; ++x) {
    if (x == f.face) continue;
    auto names = top;
    names[x] = 4;
    fresh.push_back(names);
  }
  Staged st = replace_region(tri, {{f.tet, top}, {g.tet, bottom}}, fresh);
  return finish(tri, sk, std::move(st));
}

MoveOutcome pachner_3_2(const Triangulation& tri, int edge) {
  return pachner_3_2(tri, Skeleton(tri), edge);
}

MoveOutcome pachner_3_2(const Triangulation& tri, const Skeleton& sk, int edge) {
  if (edge < 0 || edge >= sk.edge_count()) throw PreconditionError("3-2: unknown edge");
  const EdgeClass& ec = sk.edge(edge);
  if (ec.boundary) throw PreconditionError("3-2: edge is on the boundary");
  if (ec.degree != 3 || ec.reversed)
    throw PreconditionError("3-2: edge has degree " + std::to_string(ec.degree) +
                            "; a 3-2 move needs a degree three edge");
  require_distinct_book(ec, "3-2");

  // Names: endpoints 0 and 1, equator 2,3,4.
  std::vector<RegionTet> region;
  for (int i = 0; i < 3; ++i) {
    const BookEntry& b = ec.book[i];
    std::array<int, 4> names{};
    names[b.emb[0]] = 0;
    names[b.emb[1]] = 1;
    names[b.emb[2]] = 2 + i;
    names[b.emb[3]] = 2 + (i + 1) % 3;
    region.push_back({b.tet, names});
  }
  const Perm& e0 = ec.book[0].emb;
  std::array<int, 4> top = region[0].names, bottom = region[0].names;
  top[e0[1]] = 4;
  bottom[e0[0]] = 4;
  Staged st = replace_region(tri, region, {top, bottom});
  return finish(tri, sk, std::move(st));
}

MoveOutcome move_0_2(const Triangulation& tri, int edge, int p, int q) {
  Skeleton sk(tri);
  if (edge < 0 || edge >= sk.edge_count()) throw PreconditionError("0-2: unknown edge");
  const EdgeClass& ec = sk.edge(edge);
  if (ec.boundary || ec.reversed) throw PreconditionError("0-2: edge must be an interior edge");
  const int d = static_cast<int>(ec.book.size());
  if (p < 0 || q < 0 || p >= d || q >= d) throw PreconditionError("0-2: book position out of range");
  if (p == q) throw PreconditionError("0-2: the same triangle was chosen twice");
  const BookEntry& bp = ec.book[p];
  const BookEntry& bp1 = ec.book[(p + 1) % d];
  const BookEntry& bq = ec.book[q];
  const BookEntry& bq1 = ec.book[(q + 1) % d];
  const FaceRef f1 = bp.exit_face(), f2 = bp1.entry_face();
  const FaceRef g1 = bq.exit_face(), g2 = bq1.entry_face();
  if (f1 == g1 || f1 == g2)
    throw PreconditionError("0-2: the two chosen triangles are the same triangle");

  Staged st(tri);
  const int x = st.add_tet();
  const int y = st.add_tet();
  auto attach = [&](int tet, int face, FaceRef target, Perm perm) {
    st.rows[tet][face] = Gluing{target.tet, perm};
    st.rows[target.tet][target.face] = Gluing{tet, perm.inverse()};
  };
  attach(x, 3, f2, bp1.emb);
  attach(x, 2, g1, bq.emb);
  attach(y, 3, f1, bp.emb * kSwap23);
  attach(y, 2, g2, bq1.emb * kSwap23);
  st.rows[x][0] = Gluing{y, Perm()};
  st.rows[y][0] = Gluing{x, Perm()};
  st.rows[x][1] = Gluing{y, Perm()};
  st.rows[y][1] = Gluing{x, Perm()};
  return finish(tri, sk, std::move(st));
}

MoveOutcome move_2_0(const Triangulation& tri, int edge) { return move_2_0(tri, Skeleton(tri), edge); }

MoveOutcome move_2_0(const Triangulation& tri, const Skeleton& sk, int edge) {
  if (edge < 0 || edge >= sk.edge_count()) throw PreconditionError("2-0: unknown edge");
  const EdgeClass& ec = sk.edge(edge);
  if (ec.boundary || ec.reversed || ec.degree != 2)
    throw PreconditionError("2-0: edge has degree " + std::to_string(ec.degree) +
                            "; a 2-0 move needs a degree two edge");
  const BookEntry bx = ec.book[0], by = ec.book[1];
  if (bx.tet == by.tet) throw PreconditionError("2-0: the two tetrahedra at the edge are not distinct");
  const int x = bx.tet, y = by.tet;
  if (sk.edge_of(x, edge_number(bx.emb[2], bx.emb[3])) == sk.edge_of(y, edge_number(by.emb[2], by.emb[3])))
    throw PreconditionError("2-0: the two edges opposite the degree two edge are identified");

  const Perm mu = tri.gluing(x, bx.emb[2]).perm;  // x labels -> y labels
  // Outer faces of the beak and the twin each one merges with.
  auto is_outer = [&](FaceRef f) {
    return (f.tet == x && (f.face == bx.emb[0] || f.face == bx.emb[1])) ||
           (f.tet == y && (f.face == by.emb[0] || f.face == by.emb[1]));
  };
  auto twin = [&](FaceRef f, Perm& map) -> FaceRef {
    if (f.tet == x) {
      map = mu;
      return {y, mu[f.face]};
    }
    map = mu.inverse();
    return {x, map[f.face]};
  };

  Staged st(tri);
  st.removed[x] = st.removed[y] = 1;
  for (int t = 0; t < tri.size(); ++t) {
    if (t == x || t == y) continue;
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = tri.gluing(t, f);
      if (!g.glued() || (g.tet != x && g.tet != y)) continue;
      FaceRef cur{g.tet, g.perm[f]};
      Perm acc = g.perm;  // t labels -> cur.tet labels
      for (int hops = 0;; ++hops) {
        if (hops > 4 || !is_outer(cur))
          throw PreconditionError("2-0: the bird beak does not bound a collapsible region");
        Perm step;
        FaceRef tw = twin(cur, step);
        acc = step * acc;
        const Gluing& h = tri.gluing(tw);
        if (!h.glued()) {
          st.rows[t][f] = Gluing{};
          break;
        }
        acc = h.perm * acc;
        cur = FaceRef{h.tet, h.perm[tw.face]};
        if (h.tet != x && h.tet != y) {
          st.rows[t][f] = Gluing{h.tet, acc};
          break;
        }
      }
    }
  }
  return finish(tri, sk, std::move(st));
}

MoveOutcome apply_move(const Triangulation& tri, const ElementaryMove& m) {
  switch (m.kind) {
    case MoveKind::move23:
      return pachner_2_3(tri, m.face);
    case MoveKind::move32:
      return pachner_3_2(tri, m.edge);
    case MoveKind::move02:
      return move_0_2(tri, m.edge, m.p, m.q);
    case MoveKind::move20:
      return move_2_0(tri, m.edge);
  }
  throw std::logic_error("unknown move kind");
}

std::optional<std::string> move_obstruction(const Triangulation& tri, const Skeleton& sk,
                                            const ElementaryMove& m) {
  switch (m.kind) {
    case MoveKind::move23: {
      if (m.face.tet < 0 || m.face.tet >= tri.size() || m.face.face < 0 || m.face.face > 3)
        return "no such face";
      const Gluing& g = tri.gluing(m.face);
      if (!g.glued()) return "face is on the boundary";
      if (g.tet == m.face.tet) return "the two tetrahedra sharing the face are not distinct";
      return std::nullopt;
    }
    case MoveKind::move32: {
      if (m.edge < 0 || m.edge >= sk.edge_count()) return "unknown edge";
      const EdgeClass& ec = sk.edge(m.edge);
      if (ec.boundary || ec.reversed || ec.degree != 3) return "edge does not have degree three";
      std::set<int> tets;
      for (const auto& b : ec.book) tets.insert(b.tet);
      if (tets.size() != 3) return "the three tetrahedra incident to the edge are not distinct";
      return std::nullopt;
    }
    case MoveKind::move02: {
      if (m.edge < 0 || m.edge >= sk.edge_count()) return "unknown edge";
      const EdgeClass& ec = sk.edge(m.edge);
      const int d = static_cast<int>(ec.book.size());
      if (ec.boundary || ec.reversed) return "edge is not an interior edge";
      if (m.p < 0 || m.q < 0 || m.p >= d || m.q >= d) return "book position out of range";
      if (m.p == m.q) return "the same triangle was chosen twice";
      FaceRef f1 = ec.book[m.p].exit_face();
      FaceRef g1 = ec.book[m.q].exit_face(), g2 = ec.book[(m.q + 1) % d].entry_face();
      if (f1 == g1 || f1 == g2) return "the two chosen triangles are the same triangle";
      return std::nullopt;
    }
    case MoveKind::move20: {
      if (m.edge < 0 || m.edge >= sk.edge_count()) return "unknown edge";
      const EdgeClass& ec = sk.edge(m.edge);
      if (ec.boundary || ec.reversed || ec.degree != 2) return "edge does not have degree two";
      const auto &bx = ec.book[0], &by = ec.book[1];
      if (bx.tet == by.tet) return "the two tetrahedra at the edge are not distinct";
      if (sk.edge_of(bx.tet, edge_number(bx.emb[2], bx.emb[3])) ==
          sk.edge_of(by.tet, edge_number(by.emb[2], by.emb[3])))
        return "the two edges opposite the degree two edge are identified";
      return std::nullopt;
    }
  }
  return "unknown move";
}

std::vector<ElementaryMove> pachner_moves(const Triangulation& tri, const Skeleton& sk) {
  std::vector<ElementaryMove> out;
  for (int t = 0; t < tri.size(); ++t)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = tri.gluing(t, f);
      if (!g.glued() || g.tet == t) continue;
      FaceRef self{t, f}, other{g.tet, g.perm[f]};
      if (other < self) continue;
      out.push_back(ElementaryMove::two_three(self));
    }
  for (int e = 0; e < sk.edge_count(); ++e) {
    auto m = ElementaryMove::three_two(e);
    if (sk.degree(e) == 3 && !move_obstruction(tri, sk, m)) out.push_back(m);
  }
  return out;
}

std::map<int, int> predicted_deltas(const Triangulation& tri, const Skeleton& sk,
                                    const ElementaryMove& m) {
  std::map<int, int> delta;
  if (m.kind == MoveKind::move23) {
    const Gluing& g = tri.gluing(m.face);
    const int a = m.face.face;
    for (int i = 0; i < 4; ++i) {
      if (i == a) continue;
      delta[sk.edge_of(m.face.tet, edge_number(a, i))] += 1;
      delta[sk.edge_of(g.tet, edge_number(g.perm[a], g.perm[i]))] += 1;
      for (int j = i + 1; j < 4; ++j)
        if (j != a) delta[sk.edge_of(m.face.tet, edge_number(i, j))] -= 1;
    }
  } else if (m.kind == MoveKind::move32) {
    // Each side edge appears in two of the three tetrahedra and in one
    // afterwards; each equatorial edge goes from one tetrahedron to two.
    for (const auto& b : sk.edge(m.edge).book) {
      for (int end = 0; end < 2; ++end)
        delta[sk.edge_of(b.tet, edge_number(b.emb[end], b.emb[2]))] -= 1;
      delta[sk.edge_of(b.tet, edge_number(b.emb[2], b.emb[3]))] += 1;
    }
  } else {
    throw PreconditionError("degree deltas are only predicted for 2-3 and 3-2 moves");
  }
  return delta;
}

CreationReport classify_degree_one_creation(const Triangulation& tri, const ElementaryMove& m) {
  return classify_degree_one_creation(tri, Skeleton(tri), m);
}

CreationReport classify_degree_one_creation(const Triangulation& tri, const Skeleton& sk,
                                            const ElementaryMove& m) {
  if (auto why = move_obstruction(tri, sk, m)) throw PreconditionError("inapplicable move: " + *why);
  CreationReport r;
  switch (m.kind) {
    case MoveKind::move02:
      // Every edge of a 0-2 result keeps or gains degree; split copies keep
      // at least one old tetrahedron plus a new one.
      return r;
    case MoveKind::move20: {
      // Opposite-edge copies merge into d1 + d2 - 2; the four side edges
      // each lose two.
      const auto &bx = sk.edge(m.edge).book[0], &by = sk.edge(m.edge).book[1];
      std::map<int, int> delta;
      int ex = sk.edge_of(bx.tet, edge_number(bx.emb[2], bx.emb[3]));
      int ey = sk.edge_of(by.tet, edge_number(by.emb[2], by.emb[3]));
      for (int end = 0; end < 2; ++end)
        for (int side = 2; side < 4; ++side)
          delta[sk.edge_of(bx.tet, edge_number(bx.emb[end], bx.emb[side]))] -= 2;
      if (sk.degree(ex) + sk.degree(ey) - 2 + delta[ex] + delta[ey] == 1)
        r.witnesses.push_back(std::min(ex, ey));
      for (auto [c, d] : delta)
        if (c != ex && c != ey && sk.degree(c) + d == 1) r.witnesses.push_back(c);
      std::sort(r.witnesses.begin(), r.witnesses.end());
      if (!r.witnesses.empty()) r.kind = CreationKind::via_2_0;
      return r;
    }
    default:
      break;
  }
  for (auto [c, d] : predicted_deltas(tri, sk, m))
    if (m.kind == MoveKind::move32 && c == m.edge)
      continue;
    else if (d < 0 && sk.degree(c) + d == 1)
      r.witnesses.push_back(c);
  if (!r.witnesses.empty())
    r.kind = m.kind == MoveKind::move23 ? CreationKind::via_2_3 : CreationKind::via_3_2;
  return r;
}

const char* creation_kind_name(CreationKind k) {
  switch (k) {
    case CreationKind::none:
      return "none";
    case CreationKind::via_2_3:
      return "via_2_3";
    case CreationKind::via_3_2:
      return "via_3_2";
    case CreationKind::via_2_0:
      return "via_2_0";
  }
  return "?";
}

std::string ElementaryMove::str() const {
  std::ostringstream s;
  switch (kind) {
    case MoveKind::move23:
      s << "23 " << face.tet << ' ' << face.face;
      break;
    case MoveKind::move32:
      s << "32 " << edge;
      break;
    case MoveKind::move02:
      s << "02 " << edge << ' ' << p << ' ' << q;
      break;
    case MoveKind::move20:
      s << "20 " << edge;
      break;
  }
  return s.str();
}

ElementaryMove ElementaryMove::parse(const std::string& line) {
  std::istringstream s(line);
  std::string kind;
  s >> kind;
  ElementaryMove m;
  if (kind == "23") {
    m.kind = MoveKind::move23;
    s >> m.face.tet >> m.face.face;
  } else if (kind == "32") {
    m.kind = MoveKind::move32;
    s >> m.edge;
  } else if (kind == "02") {
    m.kind = MoveKind::move02;
    s >> m.edge >> m.p >> m.q;
  } else if (kind == "20") {
    m.kind = MoveKind::move20;
    s >> m.edge;
  } else {
    throw Error("unknown move `" + kind + "`");
  }
  std::string extra;
  if (s.fail() || (s >> extra)) throw Error("malformed move `" + line + "`");
  return m;
}

std::vector<Triangulation> apply_path(const MovePath& path) {
  std::vector<Triangulation> states{path.initial};
  states.reserve(path.moves.size() + 1);
  for (std::size_t i = 0; i < path.moves.size(); ++i) {
    const Triangulation& cur = states.back();
    Skeleton sk(cur);
    if (auto why = move_obstruction(cur, sk, path.moves[i]))
      throw PathError("move " + std::to_string(i) + " (" + path.moves[i].str() +
                          ") is inapplicable: " + *why, static_cast<int>(i));
    states.push_back(apply_move(cur, path.moves[i]).result);
  }
  return states;
}

MovePath read_path(std::istream& in, const std::string& base_dir) {
  std::string line;
  int line_no = 0;
  std::optional<Triangulation> initial;
  std::vector<ElementaryMove> moves;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (!initial) {
      std::istringstream s(line);
      std::string kw, file;
      s >> kw >> file;
      if (kw != "triangulation" || file.empty())
        throw ParseError("expected `triangulation <file>`", line_no);
      std::filesystem::path p(file);
      if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
      try {
        initial = load_gluing_table(p.string());
      } catch (const ParseError& e) {
        throw ParseError(p.string() + ": " + e.what(), line_no);
      } catch (const Error& e) {
        throw ParseError(e.what(), line_no);
      }
      continue;
    }
    try {
      moves.push_back(ElementaryMove::parse(line));
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!initial) throw ParseError("missing `triangulation <file>` line", line_no);
  return MovePath{*initial, std::move(moves)};
}

MovePath load_path(const std::string& path_file) {
  std::ifstream in(path_file);
  if (!in) throw Error("cannot open " + path_file);
  return read_path(in, std::filesystem::path(path_file).parent_path().string());
}

void write_path(std::ostream& out, const std::vector<ElementaryMove>& moves,
                const std::string& triangulation_file) {
  out << "triangulation " << triangulation_file << '\n';
  for (const auto& m : moves) out << m.str() << '\n';
}

}  // namespace pachner
