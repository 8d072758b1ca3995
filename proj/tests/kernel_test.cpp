#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

#include "test_support.hpp"

using namespace pachner;

namespace {

// One tetrahedron: the two faces around edge 01 are folded together
// ("closing the book") and the remaining faces are paired with each other.
Triangulation folded_tetrahedron() {
  GluingRow row;
  row[2] = Gluing{0, Perm(0, 1, 3, 2)};
  row[3] = Gluing{0, Perm(0, 1, 3, 2)};
  row[0] = Gluing{0, Perm(1, 0, 2, 3)};
  row[1] = Gluing{0, Perm(1, 0, 2, 3)};
  return Triangulation::from_gluings({row});
}

const Triangulation& seed(int i) {
  static const auto classes = gen::one_vertex_classes(2);
  return classes.at(i);
}

}  // namespace

TEST(Perm, GroupLaws) {
  for (int i = 0; i < 24; ++i) {
    Perm p = Perm::from_index(i);
    EXPECT_EQ(p.index(), i);
    EXPECT_EQ(p * p.inverse(), Perm());
    for (int j = 0; j < 24; ++j) {
      Perm q = Perm::from_index(j);
      EXPECT_EQ((p * q).sign(), p.sign() * q.sign());
      for (int v = 0; v < 4; ++v) EXPECT_EQ((p * q)[v], p[q[v]]);
    }
  }
  Perm p;
  ASSERT_TRUE(Perm::parse("0321", p));
  EXPECT_EQ(p.str(), "0321");
  EXPECT_FALSE(Perm::parse("0021", p));
  EXPECT_FALSE(Perm::parse("012", p));
}

TEST(Perm, EdgeNumbering) {
  const char* names[6] = {"01", "02", "03", "12", "13", "23"};
  for (int k = 0; k < 6; ++k) {
    auto [a, b] = kEdgeVertices[k];
    std::string name{char('0' + a), char('0' + b)};
    EXPECT_EQ(name, names[k]);
    EXPECT_EQ(edge_number(a, b), k);
    EXPECT_EQ(edge_number(b, a), k);
  }
}

TEST(GluingTable, RoundTrip) {
  for (const auto& t : gen::one_vertex_classes(2)) {
    auto text = format_gluing_table(t);
    EXPECT_EQ(parse_gluing_table(text), t);
  }
}

TEST(GluingTable, CommentsAndWhitespace) {
  auto t = parse_gluing_table(
      "# a folded tetrahedron\n"
      "tets 1\n"
      "\n"
      "  0:1023   0:1023 0:0132  0:0132   # faces 0..3\n");
  EXPECT_EQ(t, folded_tetrahedron());
}

TEST(GluingTable, RejectsNonInvolutiveWithLineNumber) {
  try {
    parse_gluing_table("tets 2\n1:0132 1:0132 1:0132 1:0132\n0:0132 0:0132 0:0132 0:1023\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos) << e.what();
  }
}

TEST(GluingTable, RejectsSelfGluedFace) {
  try {
    parse_gluing_table("tets 1\n0:0123 0:1023 0:1023 0:0132\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("itself"), std::string::npos) << e.what();
  }
}

TEST(GluingTable, RejectsUnpairedFace) {
  EXPECT_THROW(parse_gluing_table("tets 2\n1:0123 - - -\n0:0123 - - -\n"), ParseError);
  EXPECT_THROW(parse_gluing_table("tets 2\n1:0123 1:0123 1:0123\n"), ParseError);
  EXPECT_THROW(parse_gluing_table("tet 1\n"), ParseError);
}

TEST(GluingTable, FragmentsAllowBoundary) {
  GluingRow a, b;
  a[0] = Gluing{1, Perm(0, 1, 3, 2)};
  b[0] = Gluing{0, Perm(0, 1, 3, 2)};
  auto frag = Triangulation::fragment({a, b});
  EXPECT_EQ(frag.boundary_face_count(), 6);
  EXPECT_EQ(parse_gluing_table(format_gluing_table(frag)), frag);
  EXPECT_FALSE(frag.is_closed());
  EXPECT_THROW(Triangulation::from_gluings({a, b}), ValidationError);
}

TEST(Skeleton, FoldedTetrahedronHasDegreeOneEdge) {
  Skeleton sk(folded_tetrahedron());
  EXPECT_EQ(sk.degree(sk.edge_of(0, edge_number(0, 1))), 1);
  EXPECT_FALSE(sk.degree_one_edges().empty());
  auto report = validate(folded_tetrahedron(), Mode::closed_one_vertex);
  EXPECT_FALSE(report.degree_one_edges.empty());
}

TEST(Skeleton, DegreeSumIsSixN) {
  std::mt19937 rng(7);
  const auto seeds = gen::one_vertex_classes(2);
  for (int run = 0; run < 40; ++run) {
    for (const auto& t : gen::random_walk(seeds[run % seeds.size()], 12, 7, rng)) {
      Skeleton sk(t);
      int sum = 0;
      for (int e = 0; e < sk.edge_count(); ++e) sum += sk.degree(e);
      ASSERT_EQ(sum, 6 * t.size());
      // Every model edge belongs to exactly one class, and books agree.
      std::set<EdgeRef> seen;
      for (int e = 0; e < sk.edge_count(); ++e)
        for (const auto& b : sk.edge(e).book) {
          ASSERT_EQ(sk.edge_of(b.edge()), e);
          seen.insert(b.edge());
        }
      ASSERT_EQ(static_cast<int>(seen.size()), 6 * t.size());
    }
  }
}

TEST(Skeleton, BooksFollowFacePairings) {
  std::mt19937 rng(11);
  for (const auto& t : gen::random_walk(seed(0), 20, 8, rng)) {
    Skeleton sk(t);
    for (const auto& ec : sk.edges()) {
      const int d = static_cast<int>(ec.book.size());
      for (int i = 0; i < d; ++i) {
        const auto& cur = ec.book[i];
        const auto& next = ec.book[(i + 1) % d];
        const Gluing& g = t.gluing(cur.exit_face());
        ASSERT_EQ(g.tet, next.tet);
        ASSERT_EQ(g.perm[cur.emb[0]], next.emb[0]);
        ASSERT_EQ(g.perm[cur.emb[1]], next.emb[1]);
        ASSERT_EQ(g.perm[cur.emb[2]], next.emb[3]);
      }
    }
  }
}

TEST(Skeleton, Deterministic) {
  std::mt19937 rng(3);
  for (const auto& t : gen::random_walk(seed(3), 10, 7, rng)) {
    Skeleton a(t), b(parse_gluing_table(format_gluing_table(t)));
    ASSERT_EQ(a.edge_count(), b.edge_count());
    for (int e = 0; e < a.edge_count(); ++e) ASSERT_EQ(a.edge(e).book.front().edge(), b.edge(e).book.front().edge());
  }
}

TEST(Skeleton, EdgeDegreeRejectsUnknownId) {
  EXPECT_THROW(edge_degree(seed(0), 99), std::out_of_range);
  EXPECT_THROW(edge_degree(seed(0), -1), std::out_of_range);
}

TEST(Validate, OneVertexSeeds) {
  for (const auto& t : gen::one_vertex_classes(2)) {
    auto r = validate(t, Mode::closed_one_vertex);
    EXPECT_TRUE(r.valid);
    EXPECT_TRUE(r.orientable);
    EXPECT_EQ(r.vertex_count, 1);
    ASSERT_EQ(r.link_euler.size(), 1u);
    EXPECT_EQ(r.link_euler[0], 2);
    EXPECT_FALSE(validate(t, Mode::ideal).valid);
  }
}

TEST(Validate, EvenSelfGluingIsNonOrientable) {
  GluingRow row;
  row[2] = Gluing{0, Perm(1, 0, 3, 2)};
  row[3] = Gluing{0, Perm(1, 0, 3, 2)};
  row[0] = Gluing{0, Perm(1, 0, 2, 3)};
  row[1] = Gluing{0, Perm(1, 0, 2, 3)};
  auto t = Triangulation::from_gluings({row});
  auto r = validate(t, Mode::closed_one_vertex);
  EXPECT_FALSE(r.orientable);
  EXPECT_FALSE(r.valid);
  EXPECT_TRUE(orientation_colouring(t).empty());
}

TEST(Validate, OrientMakesEveryGluingOdd) {
  std::mt19937 rng(5);
  for (int i = 0; i < 50; ++i) {
    auto t = gen::random_relabel(gen::random_walk(seed(i % 11), 6, 6, rng).back(), rng);
    auto o = orient(t);
    EXPECT_TRUE(o.is_oriented());
    EXPECT_EQ(iso_signature(o), iso_signature(t));
  }
}

TEST(IsoSig, RelabellingInvariance) {
  std::mt19937 rng(17);
  const auto seeds = gen::one_vertex_classes(2);
  for (int run = 0; run < 30; ++run) {
    auto t = gen::random_walk(seeds[run % seeds.size()], 15, 7, rng).back();
    auto sig = iso_signature(t);
    for (int k = 0; k < 5; ++k) {
      auto r = gen::random_relabel(t, rng);
      ASSERT_EQ(iso_signature(r), sig);
      ASSERT_TRUE(is_isomorphic(t, r));
      auto iso = find_isomorphism(t, r);
      ASSERT_TRUE(iso.has_value());
      ASSERT_EQ(t.relabel(iso->tet_map, iso->perms), r);
    }
    EXPECT_EQ(from_signature(sig), canonical_form(t));
    EXPECT_EQ(iso_signature(from_signature(sig)), sig);
  }
}

TEST(IsoSig, DiffersAfterTwoThree) {
  for (const auto& t : gen::one_vertex_classes(2))
    for (const auto& m : pachner_moves(t, Skeleton(t)))
      EXPECT_NE(iso_signature(t), iso_signature(apply_move(t, m).result));
}

// Exhaustive check on every oriented 2-tetrahedron table: signatures induce
// exactly the classes of the brute-force minimum over all relabellings.
TEST(IsoSig, AgreesWithBruteForceOnTwoTetrahedra) {
  auto tables = gen::all_oriented_tables(2);
  ASSERT_FALSE(tables.empty());
  std::map<IsoSignature, std::vector<int>> by_sig;
  std::map<std::vector<int>, IsoSignature> brute_to_sig;
  for (const auto& t : tables) {
    auto sig = iso_signature(t);
    auto code = gen::brute_canonical_code(t);
    auto [it, fresh] = brute_to_sig.emplace(code, sig);
    ASSERT_EQ(it->second, sig);
    auto [jt, fresh2] = by_sig.emplace(sig, code);
    ASSERT_EQ(jt->second, code);
  }
  EXPECT_EQ(by_sig.size(), brute_to_sig.size());
}

TEST(IsoSig, IsIsomorphicAgreesWithSignatures) {
  std::mt19937 rng(23);
  std::vector<Triangulation> pool;
  const auto seeds = gen::one_vertex_classes(2);
  for (int run = 0; run < 20; ++run)
    for (const auto& t : gen::random_walk(seeds[run % seeds.size()], 6, 5, rng)) pool.push_back(t);
  int equal = 0;
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i; j < pool.size(); j += 3) {
      bool same = iso_signature(pool[i]) == iso_signature(pool[j]);
      ASSERT_EQ(is_isomorphic(pool[i], pool[j]), same);
      equal += same;
    }
  EXPECT_GT(equal, static_cast<int>(pool.size() / 3));
}

TEST(IsoSig, AllIsomorphismsOfTheSame) {
  for (const auto& t : gen::one_vertex_classes(2)) {
    auto autos = all_isomorphisms(t, t);
    ASSERT_FALSE(autos.empty());
    for (const auto& a : autos) EXPECT_EQ(t.relabel(a.tet_map, a.perms), t);
  }
}
