#include <gtest/gtest.h>

#include <cstdlib>
#include <deque>
#include <numeric>
#include <sstream>

#include "pachner/composite.hpp"
#include "pachner/explore.hpp"
#include "test_support.hpp"

using namespace pachner;

namespace {

const std::vector<Triangulation>& seeds() {
  static const auto s = gen::one_vertex_classes(2);
  return s;
}

std::string exported(const PachnerGraphSlice& s) {
  std::ostringstream out;
  export_slice(out, s);
  return out.str();
}

// Slow path: plain BFS with pairwise isomorphism tests for dedup and the
// moves tried face by face and edge by edge, catching refusals.
std::vector<Triangulation> slow_slice(const Triangulation& seed, int max_tets) {
  std::vector<Triangulation> known{seed};
  std::deque<int> queue{0};
  auto admit = [&](Triangulation t) {
    for (const auto& k : known)
      if (k.size() == t.size() && is_isomorphic(k, t)) return;
    known.push_back(std::move(t));
    queue.push_back(static_cast<int>(known.size()) - 1);
  };
  while (!queue.empty()) {
    const Triangulation t = known[queue.front()];
    queue.pop_front();
    if (t.size() < max_tets)
      for (int tet = 0; tet < t.size(); ++tet)
        for (int f = 0; f < 4; ++f) {
          try {
            admit(pachner_2_3(t, {tet, f}).result);
          } catch (const PreconditionError&) {
          }
        }
    const Skeleton sk(t);
    for (int e = 0; e < sk.edge_count(); ++e) {
      if (sk.degree(e) != 3) continue;
      try {
        admit(pachner_3_2(t, e).result);
      } catch (const PreconditionError&) {
      }
    }
  }
  return known;
}

// First homology of a one-vertex triangulation: edges generate, triangles
// relate. Returns the invariant factors other than one.
std::vector<long> homology_torsion(const Triangulation& t, int* rank = nullptr) {
  const Skeleton sk(t);
  std::map<std::pair<int, int>, int> sign;
  for (int e = 0; e < sk.edge_count(); ++e)
    for (const auto& b : sk.edge(e).book) sign[{b.tet, b.edge().edge}] = b.forward() ? 1 : -1;
  std::vector<std::vector<long>> m;
  for (int tet = 0; tet < t.size(); ++tet)
    for (int f = 0; f < 4; ++f) {
      std::vector<long> row(sk.edge_count(), 0);
      std::vector<int> v;
      for (int i = 0; i < 4; ++i)
        if (i != f) v.push_back(i);
      auto add = [&](int a, int b, int s) {
        const int k = edge_number(a, b);
        row[sk.edge_of(tet, k)] += s * sign.at({tet, k});
      };
      add(v[0], v[1], 1);
      add(v[1], v[2], 1);
      add(v[0], v[2], -1);
      m.push_back(row);
    }
  // Smith normal form by repeated elimination on the smallest pivot.
  const int rows = static_cast<int>(m.size()), cols = sk.edge_count();
  std::vector<long> diag;
  for (int d = 0; d < std::min(rows, cols); ++d) {
    for (;;) {
      int pr = -1, pc = -1;
      for (int r = d; r < rows; ++r)
        for (int c = d; c < cols; ++c)
          if (m[r][c] != 0 && (pr < 0 || std::labs(m[r][c]) < std::labs(m[pr][pc]))) pr = r, pc = c;
      if (pr < 0) goto done;
      std::swap(m[d], m[pr]);
      for (auto& row : m) std::swap(row[d], row[pc]);
      bool clean = true;
      for (int r = d + 1; r < rows; ++r) {
        const long q = m[r][d] / m[d][d];
        for (int c = d; c < cols; ++c) m[r][c] -= q * m[d][c];
        clean = clean && m[r][d] == 0;
      }
      for (int c = d + 1; c < cols; ++c) {
        const long q = m[d][c] / m[d][d];
        for (int r = d; r < rows; ++r) m[r][c] -= q * m[r][d];
        clean = clean && m[d][c] == 0;
      }
      if (!clean) continue;
      bool divides = true;
      for (int r = d + 1; r < rows && divides; ++r)
        for (int c = d + 1; c < cols && divides; ++c)
          if (m[r][c] % m[d][d] != 0) {
            for (int cc = d; cc < cols; ++cc) m[d][cc] += m[r][cc];
            divides = false;
          }
      if (divides) break;
    }
    diag.push_back(std::labs(m[d][d]));
  }
done:
  if (rank) *rank = cols - static_cast<int>(diag.size());
  std::vector<long> out;
  for (long x : diag)
    if (x != 1) out.push_back(x);
  return out;
}

}  // namespace

TEST(Explore, UnfilteredSliceIsOneComponent) {
  for (const auto& s : seeds()) {
    const auto slice = bfs_explore(s, {5, false, 2});
    const auto comps = connectivity_report(slice, false);
    ASSERT_EQ(comps.size(), 1u);
    EXPECT_EQ(comps[0].members.size(), slice.nodes.size());
    for (const auto& e : slice.edges)
      EXPECT_EQ(slice.nodes.at(e.upper).tets, slice.nodes.at(e.lower).tets + 1);
  }
}

TEST(Explore, ExportIndependentOfWorkers) {
  const auto& seed = seeds()[1];
  const std::string one = exported(bfs_explore(seed, {5, false, 1}));
  EXPECT_EQ(exported(bfs_explore(seed, {5, false, 1})), one);
  EXPECT_EQ(exported(bfs_explore(seed, {5, false, 3})), one);
  EXPECT_EQ(exported(bfs_explore(seed, {5, false, 8})), one);
  EXPECT_EQ(exported(bfs_explore(gen::random_relabel(seed, *std::make_unique<std::mt19937>(5)), {5, false, 4})),
            one);
  EXPECT_EQ(one.substr(0, 4), "EDGE");
}

TEST(Explore, ThreadsFromEnvironment) {
  ::setenv("PACHNER_THREADS", "3", 1);
  EXPECT_EQ(explorer_threads(), 3);
  ::setenv("PACHNER_THREADS", "zero", 1);
  EXPECT_GE(explorer_threads(), 1);
  ::unsetenv("PACHNER_THREADS");
  EXPECT_GE(explorer_threads(), 1);
}

TEST(Explore, RaisingTheBoundKeepsEverything) {
  const auto small = bfs_explore(seeds()[5], {4, false, 0});
  const auto big = bfs_explore(seeds()[5], {5, false, 0});
  for (const auto& [sig, node] : small.nodes) EXPECT_TRUE(big.nodes.count(sig));
  for (const auto& e : small.edges) EXPECT_TRUE(big.edges.count(e));
  EXPECT_GT(big.nodes.size(), small.nodes.size());
}

TEST(Explore, EdgesReplay) {
  const auto slice = bfs_explore(seeds()[7], {5, false, 0});
  for (const auto& e : slice.edges) {
    const Triangulation& lo = slice.nodes.at(e.lower).representative;
    bool found = false;
    for (const auto& m : pachner_moves(lo, Skeleton(lo)))
      if (m.kind == MoveKind::move23 && iso_signature(apply_move(lo, m).result) == e.upper) {
        found = true;
        break;
      }
    ASSERT_TRUE(found) << e.lower.text << " -> " << e.upper.text;
  }
}

TEST(Explore, AtTheSeedSizeOnlyThreeTwoMoves) {
  for (const auto& s : seeds()) {
    const auto slice = bfs_explore(s, {s.size(), false, 0});
    for (const auto& [sig, node] : slice.nodes) EXPECT_LE(node.tets, s.size());
  }
  EXPECT_THROW(bfs_explore(build_l41_stack(5), {4, false, 0}), PreconditionError);
}

TEST(Explore, MatchesSlowPath) {
  for (int i : {0, 5, 8}) {
    const auto fast = bfs_explore(seeds()[i], {5, false, 0});
    const auto slow = slow_slice(seeds()[i], 5);
    EXPECT_EQ(fast.nodes.size(), slow.size());
    std::set<IsoSignature> slow_sigs;
    for (const auto& t : slow) slow_sigs.insert(iso_signature(t));
    for (const auto& [sig, node] : fast.nodes) EXPECT_TRUE(slow_sigs.count(sig));
  }
}

TEST(Explore, WallsAreRecordedNotExpanded) {
  for (const auto& s : seeds()) {
    const auto slice = bfs_explore(s, {5, true, 0});
    for (const auto& [sig, node] : slice.nodes) EXPECT_EQ(node.expanded, !node.degree_one);
    EXPECT_THROW(connectivity_report(slice, false), PreconditionError) << iso_signature(s).text;
    break;
  }
}

TEST(Explore, StackedL41IsIsolated) {
  for (int k : {3, 5}) {
    int rank = -1;
    EXPECT_EQ(homology_torsion(build_l41_stack(k), &rank), std::vector<long>{4});
    EXPECT_EQ(rank, 0);
  }
  // Another degree-one-free L(4,1), reached through walls from the stack.
  const IsoSignature stacked = iso_signature(build_l41_stack(3));
  std::optional<Triangulation> other;
  // Prefer one with a degree-one-free neighbour, so its component is not a
  // single node.
  const auto wide = bfs_explore(build_l41_stack(3), {5, false, 0});
  for (const auto& e : wide.edges) {
    const SliceNode &a = wide.nodes.at(e.lower), &b = wide.nodes.at(e.upper);
    if (!other && !a.degree_one && !b.degree_one && e.lower != stacked) other = a.representative;
  }
  ASSERT_TRUE(other.has_value());
  EXPECT_EQ(homology_torsion(*other), std::vector<long>{4});

  const auto slice = bfs_explore({build_l41_stack(3), *other}, {5, true, 0});
  const auto comps = connectivity_report(slice, true);
  int isolated = 0;
  for (const auto& c : comps) {
    if (std::find(c.members.begin(), c.members.end(), stacked) == c.members.end()) {
      EXPECT_GT(c.members.size(), 1u);
      continue;
    }
    EXPECT_EQ(c.members.size(), 1u);
    EXPECT_FALSE(c.touches_bound);
    ++isolated;
  }
  EXPECT_EQ(isolated, 1);
  EXPECT_GE(comps.size(), 2u);
  // Its neighbours exist; all of them are walls.
  int neighbours = 0;
  for (const auto& e : slice.edges)
    if (e.lower == stacked) {
      EXPECT_TRUE(slice.nodes.at(e.upper).degree_one);
      ++neighbours;
    }
  EXPECT_GT(neighbours, 0);
}

TEST(Explore, SingleTetrahedronSeedExpandsToNothing) {
  for (const auto& s : gen::one_vertex_classes(1)) {
    const auto slice = bfs_explore(s, {4, false, 0});
    EXPECT_EQ(slice.nodes.size(), 1u);
    EXPECT_TRUE(slice.edges.empty());
  }
}
