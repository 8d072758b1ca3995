#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "test_support.hpp"

using namespace pachner;

namespace {

const std::vector<Triangulation>& seeds() {
  static const auto classes = gen::one_vertex_classes(2);
  return classes;
}

// States reachable from the 2-tetrahedron seeds by random walks.
std::vector<Triangulation> walk_states(unsigned seed, int walks, int steps, int max_tets) {
  std::mt19937 rng(seed);
  std::vector<Triangulation> out;
  for (int w = 0; w < walks; ++w)
    for (auto& t : gen::random_walk(seeds()[w % seeds().size()], steps, max_tets, rng)) out.push_back(t);
  return out;
}

// Apply-and-inspect: degree-one classes of the result that are not the
// same model edge of a surviving tetrahedron that already had degree one.
int new_degree_one_count(const Triangulation& before, const MoveOutcome& out) {
  Skeleton old_sk(before), new_sk(out.result);
  std::vector<int> survivor_of(out.result.size(), -1);
  for (int t = 0; t < before.size(); ++t)
    if (out.tet_map[t] >= 0) survivor_of[out.tet_map[t]] = t;
  int count = 0;
  for (int c : new_sk.degree_one_edges()) {
    EdgeRef r = new_sk.edge(c).book.front().edge();
    int old = survivor_of[r.tet];
    bool inherited = old >= 0 && old_sk.degree(old_sk.edge_of(old, r.edge)) == 1;
    if (!inherited) ++count;
  }
  return count;
}

}  // namespace

TEST(TwoThree, CountsAndNewEdge) {
  for (const auto& t : walk_states(1, 20, 8, 7)) {
    Skeleton sk(t);
    for (const auto& m : pachner_moves(t, sk)) {
      if (m.kind != MoveKind::move23) continue;
      auto out = pachner_2_3(t, m.face);
      ASSERT_EQ(out.result.size(), t.size() + 1);
      ASSERT_EQ(out.created_edges.size(), 1u);
      ASSERT_EQ(out.created_edges[0].second, 3);
      ASSERT_EQ(out.new_tets.size(), 3u);
      ASSERT_EQ(out.result.is_oriented(), t.is_oriented());
    }
  }
}

TEST(TwoThree, RejectsSelfAdjacentFace) {
  // Class 0 glues faces 0 and 1 of tetrahedron 0 to each other.
  const auto& t = seeds()[0];
  ASSERT_EQ(t.gluing(0, 0).tet, 0);
  EXPECT_THROW(pachner_2_3(t, {0, 0}), PreconditionError);
  EXPECT_TRUE(move_obstruction(t, Skeleton(t), ElementaryMove::two_three({0, 0})).has_value());
}

TEST(ThreeTwo, InverseOfTwoThree) {
  int checked = 0;
  for (const auto& t : walk_states(2, 20, 8, 7)) {
    Skeleton sk(t);
    for (const auto& m : pachner_moves(t, sk)) {
      if (m.kind != MoveKind::move23) continue;
      auto up = pachner_2_3(t, m.face);
      const int created = up.created_edges.at(0).first;
      auto down = pachner_3_2(up.result, created);
      ASSERT_EQ(down.result.size(), t.size());
      ASSERT_EQ(iso_signature(down.result), iso_signature(t));
      ASSERT_TRUE(is_isomorphic(down.result, t));
      ++checked;
    }
  }
  EXPECT_GT(checked, 500);
}

TEST(ThreeTwo, Preconditions) {
  for (const auto& t : walk_states(3, 10, 6, 6)) {
    Skeleton sk(t);
    for (int e = 0; e < sk.edge_count(); ++e) {
      auto why = move_obstruction(t, sk, ElementaryMove::three_two(e));
      if (why)
        EXPECT_THROW(pachner_3_2(t, e), PreconditionError);
      else
        EXPECT_EQ(pachner_3_2(t, e).result.size(), t.size() - 1);
    }
  }
}

// The nine touched model edges change by -1 (equator) and +1 (the rest);
// per class the changes add up, which the skeleton recomputation confirms.
TEST(DegreeDeltas, MatchRecomputedSkeleton) {
  int min23 = 0, min32 = 0;
  for (const auto& t : walk_states(4, 60, 10, 7)) {
    Skeleton sk(t);
    for (const auto& m : pachner_moves(t, sk)) {
      auto predicted = predicted_deltas(t, sk, m);
      auto out = apply_move(t, m);
      for (int c = 0; c < sk.edge_count(); ++c) {
        if (m.kind == MoveKind::move32 && c == m.edge) {
          EXPECT_FALSE(out.degree_deltas.count(c));
          continue;
        }
        ASSERT_TRUE(out.degree_deltas.count(c)) << "class " << c << " did not survive one-to-one";
        ASSERT_EQ(out.degree_deltas.at(c), predicted.count(c) ? predicted.at(c) : 0);
      }
      for (auto [c, d] : predicted) {
        if (m.kind == MoveKind::move23) min23 = std::min(min23, d);
        if (m.kind == MoveKind::move32 && c != m.edge) min32 = std::min(min32, d);
      }
    }
  }
  EXPECT_EQ(min23, -3);
  EXPECT_EQ(min32, -6);
}

// With nine distinct classes (one-vertex triangulations only have n + 1
// edges, so this needs larger states) the law is the plain multiset.
TEST(DegreeDeltas, NineDistinctEdges) {
  int generic = 0;
  std::mt19937 rng(12);
  for (int w = 0; w < 40 && generic < 50; ++w) {
    auto walk = gen::random_walk(seeds()[w % seeds().size()], 40, 14, rng);
    const auto& t = walk.back();
    Skeleton sk(t);
    for (const auto& m : pachner_moves(t, sk)) {
      if (m.kind != MoveKind::move23) continue;
      auto predicted = predicted_deltas(t, sk, m);
      if (predicted.size() != 9) continue;
      std::multiset<int> ds;
      for (auto [c, d] : predicted) ds.insert(d);
      ASSERT_EQ(ds, (std::multiset<int>{-1, -1, -1, 1, 1, 1, 1, 1, 1}));
      auto out = apply_move(t, m);
      for (auto [c, d] : predicted) ASSERT_EQ(out.degree_deltas.at(c), d);
      ++generic;
    }
  }
  EXPECT_GT(generic, 0);
}

TEST(ZeroTwo, BeakAndSplitBook) {
  int generic = 0;
  for (const auto& t : walk_states(5, 10, 8, 6)) {
    Skeleton sk(t);
    for (int e = 0; e < sk.edge_count(); ++e) {
      const auto& ec = sk.edge(e);
      const int d = ec.degree;
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
          auto m = ElementaryMove::zero_two(e, p, q);
          if (move_obstruction(t, sk, m)) {
            EXPECT_THROW(apply_move(t, m), PreconditionError);
            continue;
          }
          auto out = apply_move(t, m);
          ASSERT_EQ(out.result.size(), t.size() + 2);
          Skeleton rs(out.result);
          // Exactly one new class: the degree-two hinge between the new pair.
          ASSERT_EQ(out.created_edges.size(), 1u);
          const int hinge = out.created_edges[0].first;
          ASSERT_EQ(rs.degree(hinge), 2);
          std::set<int> hinge_tets;
          for (const auto& b : rs.edge(hinge).book) hinge_tets.insert(b.tet);
          ASSERT_EQ(hinge_tets, (std::set<int>(out.new_tets.begin(), out.new_tets.end())));
          ASSERT_TRUE(out.created_degree_one.empty());

          // Half-book sizes s1 + s2 = d; in generic position the copies of e
          // have degrees s1 + 1 and s2 + 1.
          const int s1 = ((q - p) % d + d) % d, s2 = d - s1;
          bool clean = true;
          for (int pos : {p, q})
            for (int side = 0; side < 2; ++side) {
              const auto& b = ec.book[pos];
              if (sk.edge_of(b.tet, edge_number(b.emb[side], b.emb[3])) == e ||
                  sk.edge_of(b.tet, edge_number(b.emb[side], b.emb[2])) == e)
                clean = false;
            }
          if (clean) {
            std::multiset<int> copies;
            for (auto [old_c, new_c] : out.edge_links)
              if (old_c == e) copies.insert(rs.degree(new_c));
            ASSERT_EQ(copies, (std::multiset<int>{s1 + 1, s2 + 1}));
            ++generic;
          }

          // 2-0 on the hinge undoes it.
          auto back = move_2_0(out.result, hinge);
          ASSERT_EQ(iso_signature(back.result), iso_signature(t));
        }
    }
  }
  EXPECT_GT(generic, 20);
}

TEST(TwoZero, Preconditions) {
  int folded = 0, wrong_degree = 0;
  for (const auto& t : walk_states(6, 30, 10, 6)) {
    Skeleton sk(t);
    for (int e = 0; e < sk.edge_count(); ++e) {
      auto why = move_obstruction(t, sk, ElementaryMove::two_zero(e));
      if (sk.degree(e) != 2) {
        ASSERT_TRUE(why.has_value());
        EXPECT_THROW(move_2_0(t, e), PreconditionError);
        ++wrong_degree;
        continue;
      }
      if (why && why->find("identified") != std::string::npos) {
        EXPECT_THROW(move_2_0(t, e), PreconditionError);
        ++folded;
      }
    }
  }
  EXPECT_GT(wrong_degree, 0);
  EXPECT_GT(folded, 0);
}

// Every move on every triangulation of the 5-tetrahedron slice around the
// 2-tetrahedron seeds.
TEST(Classifier, AgreesWithApplyAndInspect) {
  std::map<IsoSignature, Triangulation> seen;
  std::vector<Triangulation> frontier;
  for (const auto& t : seeds())
    if (seen.emplace(iso_signature(t), t).second) frontier.push_back(t);
  int moves = 0, created = 0;
  std::set<CreationKind> kinds;
  while (!frontier.empty()) {
    std::vector<Triangulation> next;
    for (const auto& t : frontier) {
      Skeleton sk(t);
      for (const auto& m : pachner_moves(t, sk)) {
        if (m.kind == MoveKind::move23 && t.size() >= 5) continue;
        auto report = classify_degree_one_creation(t, sk, m);
        auto out = apply_move(t, m);
        const int oracle = new_degree_one_count(t, out);
        ASSERT_EQ(static_cast<int>(report.witnesses.size()), oracle) << m.str() << "\n" << format_gluing_table(t);
        ASSERT_EQ(report.kind == CreationKind::none, oracle == 0);
        for (int w : report.witnesses) ASSERT_EQ(sk.degree(w), 2);
        ASSERT_EQ(static_cast<int>(out.created_degree_one.size()), oracle);
        if (oracle) kinds.insert(report.kind);
        created += oracle > 0;
        ++moves;
        if (seen.emplace(iso_signature(out.result), out.result).second) next.push_back(out.result);
      }
    }
    frontier = std::move(next);
  }
  EXPECT_GT(moves, 3000);
  EXPECT_GT(created, 0);
  EXPECT_TRUE(kinds.count(CreationKind::via_2_3));
  EXPECT_TRUE(kinds.count(CreationKind::via_3_2));
}

TEST(Classifier, NoneWhenNegativeEdgesAreHighDegree) {
  for (const auto& t : walk_states(7, 30, 10, 7)) {
    Skeleton sk(t);
    for (const auto& m : pachner_moves(t, sk)) {
      bool safe = true;
      for (auto [c, d] : predicted_deltas(t, sk, m))
        if (d < 0 && !(m.kind == MoveKind::move32 && c == m.edge) && sk.degree(c) < 3) safe = false;
      if (safe) ASSERT_EQ(classify_degree_one_creation(t, sk, m).kind, CreationKind::none);
    }
  }
}

TEST(Classifier, TwoDegreeOneEdgesFromOneMove) {
  auto t = load_gluing_table(PACHNER_FIXTURE_DIR "/double_degree_one.tri");
  auto m = ElementaryMove::three_two(1);
  auto report = classify_degree_one_creation(t, m);
  EXPECT_EQ(report.kind, CreationKind::via_3_2);
  EXPECT_EQ(report.witnesses.size(), 2u);
  auto out = apply_move(t, m);
  EXPECT_EQ(new_degree_one_count(t, out), 2);
  EXPECT_EQ(Skeleton(out.result).degree_one_edges().size(), 2u);
}

TEST(Classifier, RejectsInapplicableMove) {
  const auto& t = seeds()[0];
  EXPECT_THROW(classify_degree_one_creation(t, ElementaryMove::two_three({0, 0})), PreconditionError);
}

TEST(Paths, EmptyPath) {
  auto states = apply_path(MovePath{seeds()[1], {}});
  ASSERT_EQ(states.size(), 1u);
  EXPECT_EQ(states[0], seeds()[1]);
}

TEST(Paths, InversePair) {
  for (const auto& t : seeds()) {
    Skeleton sk(t);
    for (const auto& m : pachner_moves(t, sk)) {
      if (m.kind != MoveKind::move23) continue;
      auto up = pachner_2_3(t, m.face);
      auto states = apply_path(MovePath{t, {m, ElementaryMove::three_two(up.created_edges[0].first)}});
      ASSERT_EQ(states.size(), 3u);
      EXPECT_TRUE(is_isomorphic(states.front(), states.back()));
    }
  }
}

TEST(Paths, RandomReplay) {
  std::mt19937 rng(99);
  for (int run = 0; run < 30; ++run) {
    Triangulation cur = seeds()[run % seeds().size()];
    MovePath path{cur, {}};
    std::vector<Triangulation> expected{cur};
    while (path.moves.size() < 10) {
      Skeleton sk(cur);
      auto moves = pachner_moves(cur, sk);
      if (moves.empty()) break;
      auto m = moves[rng() % moves.size()];
      path.moves.push_back(m);
      cur = apply_move(cur, m).result;
      expected.push_back(cur);
    }
    auto states = apply_path(path);
    ASSERT_EQ(states, expected);
    for (std::size_t i = 1; i < states.size(); ++i)
      ASSERT_EQ(std::abs(states[i].size() - states[i - 1].size()), 1);
  }
}

TEST(Paths, ReportsFirstInapplicableMove) {
  const auto& t = seeds()[0];
  Skeleton sk(t);
  auto good = pachner_moves(t, sk).front();
  MovePath path{t, {good, ElementaryMove::three_two(999)}};
  try {
    apply_path(path);
    FAIL();
  } catch (const PathError& e) {
    EXPECT_EQ(e.index(), 1);
  }
}

TEST(Paths, FileRoundTrip) {
  auto dir = std::filesystem::temp_directory_path() / "pachner_moves_test";
  std::filesystem::create_directories(dir);
  const auto& t = seeds()[2];
  {
    std::ofstream out(dir / "start.tri");
    write_gluing_table(out, t);
  }
  std::vector<ElementaryMove> moves = {ElementaryMove::two_three({0, 1}), ElementaryMove::three_two(4),
                                       ElementaryMove::zero_two(1, 0, 2), ElementaryMove::two_zero(3)};
  {
    std::ofstream out(dir / "p.path");
    out << "# header comment\n";
    write_path(out, moves, "start.tri");
  }
  auto path = load_path((dir / "p.path").string());
  EXPECT_EQ(path.initial, t);
  EXPECT_EQ(path.moves, moves);
  std::istringstream bad("triangulation start.tri\n23 0\n");
  EXPECT_THROW(read_path(bad, dir.string()), ParseError);
  std::filesystem::remove_all(dir);
}
