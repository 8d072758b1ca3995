// Runs the nine acceptance checks and prints one PASS/FAIL line for each.
// Exit status is the number of failures.
#include <chrono>
#include <cstdio>
#include <deque>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "pachner/composite.hpp"
#include "pachner/explore.hpp"
#include "test_support.hpp"

using namespace pachner;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

const std::vector<Triangulation>& seeds() {
  static const auto s = gen::one_vertex_classes(2);
  return s;
}

std::vector<PillowSite> pillow_sites(const Triangulation& tri) {
  std::vector<PillowSite> out;
  const Skeleton sk(tri);
  for (int e = 0; e < sk.edge_count(); ++e) {
    const auto& b = sk.edge(e).book;
    if (sk.degree(e) != 2 || b[0].tet == b[1].tet) continue;
    out.push_back(pillow_site_at(tri, sk, b[0].exit_face(), b[0].emb[0], b[0].emb[1]));
  }
  return out;
}

bool clean_replay(const Triangulation& start, const std::vector<ElementaryMove>& moves) {
  Triangulation cur = start;
  for (const auto& m : moves) {
    cur = apply_move(cur, m).result;
    if (!Skeleton(cur).degree_one_edges().empty()) return false;
  }
  return true;
}

// Criterion 1 --------------------------------------------------------------

Verdict pillow_arithmetic() {
  const Triangulation p = build_pillow();
  const Skeleton sk(p);
  std::multiset<int> inner, outer;
  for (const auto& ec : sk.edges()) (ec.boundary ? outer : inner).insert(ec.degree);
  // Contributions seen from outside: glue it into a triangle with three
  // distinct edge classes and measure what each one gains.
  std::multiset<int> gained;
  for (const auto& t : seeds()) {
    const Skeleton ts(t);
    const int a = ts.edge_of(0, edge_number(1, 2)), b = ts.edge_of(0, edge_number(2, 3)),
              c = ts.edge_of(0, edge_number(1, 3));
    if (std::set<int>{a, b, c}.size() < 3) continue;
    const Skeleton gs(glue_pillow(t, {0, 0}, 1, 2));
    gained = {gs.degree(gs.edge_of(0, edge_number(1, 2))) - ts.degree(a),
              gs.degree(gs.edge_of(0, edge_number(2, 3))) - ts.degree(b),
              gs.degree(gs.edge_of(0, edge_number(1, 3))) - ts.degree(c)};
    break;
  }
  const bool pass = p.size() == 4 && p.boundary_face_count() == 2 && inner == std::multiset<int>{2, 2, 3, 3} &&
                    outer == std::multiset<int>{3, 3, 8} && gained == std::multiset<int>{3, 3, 8};
  std::ostringstream d;
  d << p.size() << " tets, internal {";
  for (auto it = inner.begin(); it != inner.end(); ++it) d << (it == inner.begin() ? "" : ",") << *it;
  d << "}, contributions (";
  for (auto it = gained.begin(); it != gained.end(); ++it) d << (it == gained.begin() ? "" : ",") << *it;
  d << ")";
  return {pass, d.str()};
}

// Criterion 2 --------------------------------------------------------------

// Per-class change measured by following a model edge on a tetrahedron the
// move leaves alone.
std::map<int, int> measured_deltas(const Skeleton& sk, const MoveOutcome& out,
                                   int* unmeasured) {
  const Skeleton after(out.result);
  std::map<int, int> d;
  for (int c = 0; c < sk.edge_count(); ++c) {
    bool found = false;
    for (const auto& b : sk.edge(c).book) {
      if (out.tet_map[b.tet] < 0) continue;
      d[c] = after.degree(after.edge_of(out.tet_map[b.tet], b.edge().edge)) - sk.degree(c);
      found = true;
      break;
    }
    if (!found) ++*unmeasured;
  }
  return d;
}

Verdict degree_delta_law() {
  std::mt19937 rng(2);
  long checked23 = 0, checked32 = 0;
  int min23 = 0, min32 = 0, unmeasured = 0;
  std::set<IsoSignature> used;
  for (int w = 0; checked23 < 10000 || checked32 < 1000; ++w) {
    for (const auto& t : gen::random_walk(seeds()[w % seeds().size()], 10, 6, rng)) {
      if (!used.insert(iso_signature(t)).second) continue;
      const Skeleton sk(t);
      for (const auto& m : pachner_moves(t, sk)) {
        const auto predicted = predicted_deltas(t, sk, m);
        const MoveOutcome out = apply_move(t, m);
        for (auto [c, delta] : measured_deltas(sk, out, &unmeasured)) {
          if (m.kind == MoveKind::move32 && c == m.edge) continue;
          const int want = predicted.count(c) ? predicted.at(c) : 0;
          if (delta != want)
            return {false, m.str() + " on " + iso_signature(t).text + ": class " + std::to_string(c) + " moved by " +
                               std::to_string(delta) + ", predicted " + std::to_string(want)};
          (m.kind == MoveKind::move23 ? min23 : min32) =
              std::min(m.kind == MoveKind::move23 ? min23 : min32, delta);
        }
        (m.kind == MoveKind::move23 ? checked23 : checked32)++;
      }
    }
  }
  std::ostringstream d;
  d << checked23 << " 2-3 and " << checked32 << " 3-2 moves exact; extreme deltas " << min23 << " / " << min32;
  return {checked23 >= 10000 && min23 == -3 && min32 == -6, d.str()};
}

// Criterion 3 --------------------------------------------------------------

int new_degree_one(const Triangulation& before, const MoveOutcome& out) {
  const Skeleton old_sk(before), new_sk(out.result);
  std::vector<int> survivor(out.result.size(), -1);
  for (int t = 0; t < before.size(); ++t)
    if (out.tet_map[t] >= 0) survivor[out.tet_map[t]] = t;
  int n = 0;
  for (int c : new_sk.degree_one_edges()) {
    const EdgeRef r = new_sk.edge(c).book.front().edge();
    n += !(survivor[r.tet] >= 0 && old_sk.degree(old_sk.edge_of(survivor[r.tet], r.edge)) == 1);
  }
  return n;
}

Verdict classifier_vs_oracle() {
  PachnerGraphSlice slice = bfs_explore(seeds(), {5, false, 0});
  long moves = 0, creating = 0, double_hits = 0;
  for (const auto& [sig, node] : slice.nodes) {
    const Triangulation& t = node.representative;
    const Skeleton sk(t);
    auto all = pachner_moves(t, sk);
    // A 2-0 move on two tetrahedra would leave nothing.
    for (int e = 0; e < sk.edge_count() && t.size() > 2; ++e)
      if (sk.degree(e) == 2 && !move_obstruction(t, sk, ElementaryMove::two_zero(e)))
        all.push_back(ElementaryMove::two_zero(e));
    for (const auto& m : all) {
      const CreationReport r = classify_degree_one_creation(t, sk, m);
      const int oracle = new_degree_one(t, apply_move(t, m));
      if (static_cast<int>(r.witnesses.size()) != oracle || (r.kind == CreationKind::none) != (oracle == 0))
        return {false, m.str() + " on " + sig.text + ": classifier " + std::to_string(r.witnesses.size()) +
                           ", oracle " + std::to_string(oracle)};
      // The degree-two rule is about 2-3 and 3-2; a 2-0 move merges
      // classes and can flatten a higher-degree edge.
      for (int w : r.witnesses)
        if (m.kind != MoveKind::move20 && sk.degree(w) != 2)
          return {false, m.str() + " on " + sig.text + ": witness of degree " + std::to_string(sk.degree(w))};
      ++moves;
      creating += oracle > 0;
      double_hits += oracle > 1;
    }
  }
  return {moves > 0 && creating > 0, std::to_string(slice.nodes.size()) + " triangulations, " + std::to_string(moves) +
                                         " moves, " + std::to_string(creating) + " create degree-one edges, " + std::to_string(double_hits) + " create two at once"};
}

// Criterion 4 --------------------------------------------------------------

Verdict v_move_guarantee() {
  std::mt19937 rng(41);
  int sites = 0, generic = 0;
  // Small one-vertex triangulations have few edge classes, so generic
  // sites need room: walk up to fourteen tetrahedra.
  for (int run = 0; generic < 100 && run < 2000; ++run) {
    const auto t = gen::random_walk(seeds()[run % seeds().size()], 30, 14, rng).back();
    const Skeleton sk(t);
    if (!sk.degree_one_edges().empty()) continue;
    for (int tet = 0; tet < t.size(); ++tet)
      for (int apex = 0; apex < 4; ++apex) {
        if (v_move_obstruction(t, sk, tet, apex)) continue;
        const VMoveResult v = v_move(t, tet, (tet + apex) % 3, apex);
        std::map<int, int> multiplicity;  // triangle classes, with repeats
        for (int k = 0; k < 6; ++k)
          if (kEdgeVertices[k][0] != apex && kEdgeVertices[k][1] != apex) ++multiplicity[sk.edge_of(tet, k)];
        // Generic: the first 2-3 takes exactly one from each of three
        // distinct triangle classes. Otherwise a triangle class repeats or
        // is also a side edge, and only the weaker bounds are checked.
        const std::map<int, int> first = predicted_deltas(t, sk, v.moves.front());
        bool exact = multiplicity.size() == 3;
        for (auto [c, n] : multiplicity) exact = exact && first.count(c) && first.at(c) == -1;
        generic += exact;
        ++sites;
        if (v.moves.size() != 4 || v.result.size() != t.size() + 2) return {false, "wrong shape"};

        // Follow every original class through the replay by its links.
        std::map<int, int> where;
        for (int c = 0; c < sk.edge_count(); ++c) where[c] = c;
        Triangulation cur = t;
        for (std::size_t step = 0; step < v.moves.size(); ++step) {
          const MoveOutcome out = apply_move(cur, v.moves[step]);
          const Skeleton after(out.result);
          if (!after.degree_one_edges().empty()) return {false, "degree-one edge in a V-move replay"};
          std::map<int, int> next;
          for (auto [old_c, new_c] : out.edge_links)
            for (auto [orig, c] : where)
              if (c == old_c) next[orig] = new_c;
          where = std::move(next);
          for (auto [orig, c] : where) {
            const int drop = sk.degree(orig) - after.degree(c);
            const auto it = multiplicity.find(orig);
            if (exact && step == 0 && it != multiplicity.end() && drop != 1)
              return {false, "the first 2-3 took a triangle class down by " + std::to_string(drop)};
            if (drop <= 0) continue;
            if (it == multiplicity.end()) return {false, "an edge off the triangle dropped"};
            if (drop > (exact ? 1 : it->second)) return {false, "a triangle edge dropped too far"};
          }
          cur = out.result;
        }
      }
  }
  return {sites >= 100 && generic >= 100,
          std::to_string(sites) + " sites, " + std::to_string(generic) + " generic with the exact one-down law; " +
              std::to_string(sites - generic) + " with coincident classes, drop bounded by multiplicity"};
}

// Criterion 5 --------------------------------------------------------------

Verdict rotation_guarantee() {
  std::mt19937 rng(47);
  int rotations = 0, plain = 0, round_trips = 0;
  for (int run = 0; run < 60; ++run) {
    const auto t = gen::random_walk(seeds()[run % seeds().size()], 8, 6, rng).back();
    const Skeleton sk(t);
    if (!sk.degree_one_edges().empty()) continue;
    for (int tet = 0; tet < t.size(); ++tet)
      for (int apex = 0; apex < 4; ++apex) {
        if (v_move_obstruction(t, sk, tet, apex)) continue;
        const VMoveResult v = v_move(t, tet, 1, apex);
        const Skeleton vs(v.result);
        const BirdBeak beak = bird_beak(v.result, vs, v.hinge);
        auto half = [](const Skeleton& s, const BirdBeak& b, int side) {
          return s.edge_of(b.tets[side], opposite_edge(edge_number(b.ends[side][0], b.ends[side][1])));
        };
        for (int j = 0; j < 2; ++j)
          for (int side = 0; side < 2; ++side) {
            std::optional<RotationResult> r;
            try {
              r = rotate_mandible(v.result, beak, j, side);
            } catch (const PreconditionError&) {
              continue;
            }
            ++rotations;
            const Skeleton rs(r->result);
            if (rs.degree(r->beak.hinge) != 2) return {false, "hinge lost degree two"};
            if (!clean_replay(v.result, r->moves)) return {false, "degree-one edge during a rotation"};
            int touching = 0;
            for (int k = 0; k < 6; ++k) {
              const int c = vs.edge_of(r->passed, k);
              touching += (c == half(vs, beak, 0)) + (c == half(vs, beak, 1));
            }
            if (touching == 1) {
              ++plain;
              const int a = vs.degree(half(vs, beak, 0)), b = vs.degree(half(vs, beak, 1));
              const std::multiset<int> got{rs.degree(half(rs, r->beak, 0)), rs.degree(half(rs, r->beak, 1))};
              if (got != std::multiset<int>{a + 1, b - 1} && got != std::multiset<int>{a - 1, b + 1})
                return {false, "half-books moved by other than (+1,-1)"};
            }
            const IsoSignature before = iso_signature(v.result);
            bool back = false;
            for (int j2 = 0; j2 < 2 && !back; ++j2)
              for (int s2 = 0; s2 < 2 && !back; ++s2) {
                if (r->result.gluing(r->beak.mandible_face(j2, s2)).tet != r->moved) continue;
                try {
                  back = iso_signature(rotate_mandible(r->result, r->beak, j2, s2).result) == before;
                } catch (const PreconditionError&) {
                }
              }
            round_trips += back;
          }
      }
  }
  std::ostringstream d;
  d << rotations << " rotations, " << round_trips << " round trips; half-book law exact on " << plain
    << " where only one edge of the passed tetrahedron lies in the halves";
  return {rotations > 100 && round_trips == rotations && plain > 0, d.str()};
}

// Criterion 6 --------------------------------------------------------------

Verdict pillow_insertion() {
  std::mt19937 rng(53);
  int ok = 0, degenerate = 0;
  std::set<IsoSignature> seen;
  for (int run = 0; run < 2000 && ok < 100; ++run) {
    const auto t = gen::random_walk(seeds()[run % seeds().size()], 10, 7, rng).back();
    if (!seen.insert(iso_signature(t)).second || !Skeleton(t).degree_one_edges().empty()) continue;
    for (const PillowSite& site : pillow_sites(t)) {
      std::optional<PillowInsertion> ins;
      try {
        ins = insert_pillow(t, site);
      } catch (const UnsupportedDegeneracy&) {
        ++degenerate;
        continue;
      }
      const PillowSite& at = ins->walk.site;
      if (!clean_replay(t, ins->moves)) return {false, "degree-one state in an insertion"};
      if (!is_isomorphic(ins->result, glue_pillow(t, at.triangle, at.x, at.y)))
        return {false, "insertion differs from cut-and-paste"};
      const PillowRemoval rem = remove_pillow(ins->result, ins->handle);
      if (iso_signature(rem.result) != iso_signature(t)) return {false, "removal did not restore"};
      if (!clean_replay(ins->result, rem.moves)) return {false, "degree-one state in a removal"};
      ++ok;
    }
  }
  return {ok >= 50, std::to_string(ok) + " sites inserted and removed; " + std::to_string(degenerate) +
                        " refused as unsupported degeneracies"};
}

// Criterion 7 --------------------------------------------------------------

Verdict l41_family() {
  for (int k : {3, 5, 7}) {
    const Triangulation t = build_l41_stack(k);
    const Skeleton sk(t);
    for (const auto& ec : sk.edges())
      if (ec.degree == 1 || ec.degree == 3) return {false, "stack " + std::to_string(k) + " has a degree 1 or 3 edge"};
    int moves = 0;
    for (const auto& m : pachner_moves(t, sk)) {
      ++moves;
      if (classify_degree_one_creation(t, sk, m).witnesses.empty() ||
          Skeleton(apply_move(t, m).result).degree_one_edges().empty())
        return {false, "a move out of stack " + std::to_string(k) + " is clean"};
    }
    if (moves == 0 || !detect_l41_exceptional(t)) return {false, "detection failed"};
    const auto slice = bfs_explore(t, {k + 1, true, 0});
    const IsoSignature sig = iso_signature(t);
    bool isolated = false;
    for (const auto& c : connectivity_report(slice, true))
      if (c.members == std::vector<IsoSignature>{sig}) isolated = !c.touches_bound;
    if (!isolated) return {false, "stack " + std::to_string(k) + " is not isolated"};
  }
  return {true, "k = 3, 5, 7: no degree 1 or 3, every 2-3 creates degree one, detected, isolated"};
}

// Criterion 8 --------------------------------------------------------------

Verdict detour() {
  std::mt19937 rng(71);
  int attempts = 0, certified = 0;
  std::map<std::string, int> refusals;
  for (int run = 0; attempts < 40 && run < 1000; ++run) {
    const auto path = gen::degree_one_path(seeds()[run % seeds().size()], rng);
    if (!path) continue;
    ++attempts;
    try {
      const DetourCertificate c = detour_rewrite(*path);
      const auto states = apply_path(c.rewritten);
      for (const auto& s : states)
        if (!Skeleton(s).degree_one_edges().empty()) return {false, "certificate replay has a degree-one edge"};
      if (iso_signature(states.front()) != iso_signature(path->initial) ||
          iso_signature(states.back()) != iso_signature(apply_path(*path).back()))
        return {false, "endpoints differ"};
      ++certified;
    } catch (const UnsupportedDegeneracy&) {
      ++refusals["unsupported degeneracy"];
    } catch (const PathError&) {
      ++refusals["path error"];
    }
  }
  std::ostringstream d;
  d << certified << "/" << attempts << " synthesized paths certified";
  for (auto [why, n] : refusals) d << "; " << n << " " << why;
  return {certified >= 20, d.str()};
}

// Criterion 9 --------------------------------------------------------------

std::size_t slow_slice_size(const Triangulation& seed, int max_tets) {
  std::vector<Triangulation> known{seed};
  for (std::size_t i = 0; i < known.size(); ++i) {
    const Triangulation t = known[i];
    std::vector<Triangulation> next;
    if (t.size() < max_tets)
      for (int tet = 0; tet < t.size(); ++tet)
        for (int f = 0; f < 4; ++f) try {
            next.push_back(pachner_2_3(t, {tet, f}).result);
          } catch (const PreconditionError&) {
          }
    const Skeleton sk(t);
    for (int e = 0; e < sk.edge_count(); ++e)
      if (sk.degree(e) == 3) try {
          next.push_back(pachner_3_2(t, e).result);
        } catch (const PreconditionError&) {
        }
    for (auto& n : next) {
      bool old = false;
      for (const auto& k : known) old = old || (k.size() == n.size() && is_isomorphic(k, n));
      if (!old) known.push_back(std::move(n));
    }
  }
  return known.size();
}

Verdict explorer_sanity() {
  for (const auto& s : seeds())
    if (connectivity_report(bfs_explore(s, {5, false, 0}), false).size() != 1)
      return {false, "unfiltered slice split"};
  // The frozen pair: this seed at bound 6, counts fixed after agreeing
  // with the slow path.
  const Triangulation frozen = from_signature({"BCKTZprRBi"});
  auto text = [&](int threads) {
    std::ostringstream o;
    export_slice(o, bfs_explore(frozen, {6, false, threads}));
    return o.str();
  };
  const std::string one = text(1);
  for (int w : {1, 2, 4, 8})
    if (text(w) != one) return {false, "export differs with " + std::to_string(w) + " workers"};
  const std::size_t fast = bfs_explore(frozen, {6, false, 0}).nodes.size();
  const std::size_t slow = slow_slice_size(frozen, 6);
  std::ostringstream d;
  d << "single components; exports identical for 1,2,4,8 workers; " << fast << " nodes, oracle " << slow
    << ", frozen 353";
  return {fast == slow && fast == 353, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"pillow arithmetic", pillow_arithmetic},   {"degree-delta law", degree_delta_law},
      {"creation classifier", classifier_vs_oracle}, {"V-move guarantee", v_move_guarantee},
      {"rotation guarantee", rotation_guarantee}, {"pillow insertion", pillow_insertion},
      {"L(4,1) family", l41_family},              {"detour rewriting", detour},
      {"explorer sanity", explorer_sanity},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !v.pass;
    std::printf("%s %zu %-20s %6.1fs  %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, secs,
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
