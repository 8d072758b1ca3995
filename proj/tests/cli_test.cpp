#include <gtest/gtest.h>
#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pachner/composite.hpp"
#include "test_support.hpp"

using namespace pachner;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("pachner_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli(const std::string& args) {
  const fs::path out = scratch() / "stdout", err = scratch() / "stderr";
  const std::string cmd = std::string(PACHNER_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read(out), read(err)};
}

std::string fixture(const std::string& name) { return std::string(PACHNER_FIXTURE_DIR) + "/" + name; }

fs::path write(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

fs::path write_path_file(const std::string& name, const Triangulation& start,
                         const std::vector<ElementaryMove>& moves) {
  write(name + ".tri", format_gluing_table(start));
  std::ostringstream text;
  write_path(text, moves, name + ".tri");
  return write(name + ".path", text.str());
}

}  // namespace

TEST(Cli, ValidateExitCodes) {
  const fs::path l41 = write("l41.tri", format_gluing_table(build_l41_stack(3)));
  const Outcome ok = cli("validate " + l41.string() + " --mode closed");
  EXPECT_EQ(ok.code, 0) << ok.out << ok.err;
  EXPECT_NE(ok.out.find("valid=true"), std::string::npos);
  EXPECT_NE(ok.out.find("degree_one_edges=0"), std::string::npos);

  EXPECT_EQ(cli("validate " + fixture("degree_one.tri")).code, 2);

  const fs::path self = write("self.tri", "tets 1\n0:0123 0:1023 0:1023 0:3210\n");
  const Outcome bad = cli("validate " + self.string());
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("a face cannot be glued to itself"), std::string::npos) << bad.err;

  const fs::path garbled = write("garbled.tri", "tets 2\n1:1023 1:1023 1:0132 1:3120\nnonsense\n");
  const Outcome parse = cli("validate " + garbled.string());
  EXPECT_EQ(parse.code, 1);
  EXPECT_NE(parse.err.find("line 3"), std::string::npos) << parse.err;
}

TEST(Cli, MoveAndReplay) {
  const Triangulation two = gen::one_vertex_classes(2).back();
  const fs::path in = write("two.tri", format_gluing_table(two));
  const Outcome r = cli("move " + in.string() + " --apply \"23 0 2\"");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse_gluing_table(r.out).size(), 3);

  const Outcome refused = cli("move " + in.string() + " --apply \"32 0\"");
  EXPECT_EQ(refused.code, 1);
  EXPECT_NE(refused.err.find("degree"), std::string::npos) << refused.err;

  const std::vector<ElementaryMove> there{ElementaryMove::two_three({0, 2})};
  std::vector<ElementaryMove> pair = there;
  pair.push_back(reverse_moves(two, there).front());
  const Outcome back = cli("replay " + write_path_file("inverse", two, pair).string());
  ASSERT_EQ(back.code, 0) << back.err;
  EXPECT_TRUE(is_isomorphic(parse_gluing_table(back.out), two));
}

TEST(Cli, ReplayChecksDegreeOne) {
  const Outcome bad = cli("replay --check-degree-one " + fixture("through_degree_one.path"));
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("first_degree_one_state=1"), std::string::npos) << bad.out;

  // A pillow insertion path is clean all the way.
  std::mt19937 rng(3);
  for (int run = 0;; ++run) {
    const auto t = gen::random_walk(gen::one_vertex_classes(2)[run % 11], 6, 6, rng).back();
    const Skeleton sk(t);
    if (!sk.degree_one_edges().empty()) continue;
    std::optional<PillowInsertion> ins;
    for (int e = 0; e < sk.edge_count() && !ins; ++e) {
      const auto& b = sk.edge(e).book;
      if (sk.degree(e) != 2 || b[0].tet == b[1].tet) continue;
      try {
        ins = insert_pillow(t, pillow_site_at(t, sk, b[0].exit_face(), b[0].emb[0], b[0].emb[1]));
      } catch (const PreconditionError&) {
      }
    }
    if (!ins) continue;
    const Outcome ok = cli("replay --check-degree-one " + write_path_file("pillow", t, ins->moves).string());
    EXPECT_EQ(ok.code, 0) << ok.err;
    EXPECT_TRUE(is_isomorphic(parse_gluing_table(ok.out), ins->result));
    break;
  }
}

TEST(Cli, RewriteCleanPathIsByteIdentical) {
  const Triangulation t = gen::one_vertex_classes(2).back();
  const std::vector<ElementaryMove> there{ElementaryMove::two_three({0, 2})};
  std::vector<ElementaryMove> pair = there;
  pair.push_back(reverse_moves(t, there).front());
  ASSERT_LT(first_degree_one_state(t, pair), 0);
  const fs::path in = write_path_file("clean", t, pair);
  const Outcome r = cli("rewrite " + in.string());
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, read(in));
}

TEST(Cli, RewriteCertificateReplaysClean) {
  const fs::path out = scratch() / "rewritten.path";
  const Outcome r = cli("rewrite " + fixture("through_degree_one.path") + " -o " + out.string());
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string cert = read(out.string() + ".cert");
  EXPECT_NE(cert.find("insert step"), std::string::npos);
  EXPECT_NE(cert.find("remove step"), std::string::npos);
  const Outcome check = cli("replay --check-degree-one " + out.string());
  EXPECT_EQ(check.code, 0) << check.err;
  const Outcome orig = cli("replay " + fixture("through_degree_one.path"));
  EXPECT_EQ(iso_signature(parse_gluing_table(check.out)), iso_signature(parse_gluing_table(orig.out)));
  // The sidecar's end signature is the endpoint's.
  EXPECT_NE(cert.find("end " + iso_signature(parse_gluing_table(orig.out)).text), std::string::npos);
}

TEST(Cli, RewriteRefusesL41State) {
  // Walk off the stack until the state is clean, then go back and forth.
  const Triangulation stack = build_l41_stack(3);
  std::mt19937 rng(11);
  std::vector<ElementaryMove> away;
  Triangulation cur = stack;
  for (int i = 0; i < 200; ++i) {
    const Skeleton sk(cur);
    if (i > 0 && sk.degree_one_edges().empty() && !detect_l41_exceptional(cur)) break;
    auto ms = pachner_moves(cur, sk);
    std::erase_if(ms, [&](const ElementaryMove& m) { return m.kind == MoveKind::move23 && cur.size() >= 5; });
    away.push_back(ms[rng() % ms.size()]);
    cur = apply_move(cur, away.back()).result;
  }
  ASSERT_TRUE(Skeleton(cur).degree_one_edges().empty());
  std::vector<ElementaryMove> moves = reverse_moves(stack, away);
  const auto forth = reverse_moves(cur, moves);
  moves.insert(moves.end(), forth.begin(), forth.end());

  const Outcome r = cli("rewrite " + write_path_file("through_l41", cur, moves).string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("state " + std::to_string(away.size())), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("L(4,1)"), std::string::npos) << r.err;
}

TEST(Cli, ExploreIsDeterministic) {
  const fs::path seed = write("seed.tri", format_gluing_table(gen::one_vertex_classes(2)[6]));
  const Outcome a = cli("explore " + seed.string() + " --max-tets 5 --threads 1");
  const Outcome b = cli("explore " + seed.string() + " --max-tets 5 --threads 4");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  ::setenv("PACHNER_THREADS", "2", 1);
  EXPECT_EQ(cli("explore " + seed.string() + " --max-tets 5").out, a.out);
  ::unsetenv("PACHNER_THREADS");
  const Outcome c = cli("explore " + seed.string() + " --max-tets 5 --report");
  EXPECT_EQ(c.out, a.out);
  EXPECT_NE(c.err.find("1 components"), std::string::npos) << c.err;
}

TEST(Cli, L41StackAndDetect) {
  const fs::path out = scratch() / "stack.tri";
  ASSERT_EQ(cli("l41 --stack 3 -o " + out.string()).code, 0);
  const Outcome d = cli("l41 --detect " + out.string());
  EXPECT_EQ(d.code, 0);
  EXPECT_EQ(d.out, "l41=true\n");
  EXPECT_NE(cli("l41 --stack 4").code, 0);
  EXPECT_EQ(cli("l41 --detect " + fixture("degree_one.tri")).out, "l41=false\n");
}
