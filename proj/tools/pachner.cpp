// Command-line front end: validate, move, replay, rewrite, explore, l41.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pachner/composite.hpp"
#include "pachner/explore.hpp"
#include "pachner/moves.hpp"
#include "pachner/validate.hpp"

namespace fs = std::filesystem;
using namespace pachner;

namespace {

// Exit codes shared by every subcommand.
constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kDegreeOne = 2;

// Writes next to the target and renames, so readers never see half a file.
void write_atomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp);
    out << text;
    if (!out.flush()) throw Error("cannot write " + tmp);
  }
  fs::rename(tmp, path);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_atomically(path, text);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// The `triangulation <file>` reference of a path file, as written.
std::string triangulation_reference(const std::string& path_file) {
  std::istringstream in(slurp(path_file));
  for (std::string line; std::getline(in, line);) {
    std::istringstream words(line.substr(0, line.find('#')));
    std::string kw, file;
    if (words >> kw >> file && kw == "triangulation") return file;
  }
  throw ParseError("expected `triangulation <file>`", 1);
}

int cmd_validate(const std::string& file, const std::string& mode_text) {
  Mode mode;
  if (!parse_mode(mode_text, mode)) throw Error("unknown mode " + mode_text);
  Triangulation tri = [&] {
    try {
      return load_gluing_table(file);
    } catch (const ValidationError& e) {
      std::cout << "valid=false\nproblem=" << e.what() << '\n';
      throw;
    }
  }();
  const ValidationReport r = validate(tri, mode);
  std::cout << file << ": " << tri.size() << " tetrahedra, " << r.vertex_count << " vertices, mode "
            << mode_name(mode) << '\n';
  for (const auto& p : r.problems) std::cout << "  problem: " << p << '\n';
  if (!r.degree_one_edges.empty()) {
    std::cout << "  degree-one edges:";
    for (int e : r.degree_one_edges) std::cout << ' ' << e;
    std::cout << '\n';
  }
  std::cout << "tets=" << tri.size() << "\nmode=" << mode_name(mode) << "\nvalid=" << (r.valid ? "true" : "false")
            << "\norientable=" << (r.orientable ? "true" : "false") << "\nvertices=" << r.vertex_count
            << "\nall_links_spheres=" << (r.all_links_spheres ? "true" : "false")
            << "\none_vertex=" << (r.one_vertex ? "true" : "false") << "\ndegree_one_edges=" << r.degree_one_edges.size()
            << '\n';
  if (!r.valid) return kFailed;
  return r.degree_one_edges.empty() ? kOk : kDegreeOne;
}

int cmd_move(const std::string& file, const std::vector<std::string>& moves, const std::string& out) {
  Triangulation tri = load_gluing_table(file);
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const ElementaryMove m = ElementaryMove::parse(moves[i]);
    try {
      tri = apply_move(tri, m).result;
    } catch (const PreconditionError& e) {
      throw PathError("move " + std::to_string(i) + " (" + m.str() + "): " + e.what(), static_cast<int>(i));
    }
  }
  emit(out, format_gluing_table(tri));
  return kOk;
}

int cmd_replay(const std::string& path_file, bool check, bool all_states, const std::string& out) {
  const MovePath path = load_path(path_file);
  const std::vector<Triangulation> states = apply_path(path);
  if (check) {
    for (std::size_t i = 0; i < states.size(); ++i) {
      const auto bad = Skeleton(states[i]).degree_one_edges();
      if (bad.empty()) continue;
      std::cerr << "state " << i << " has a degree-one edge (edge " << bad.front() << ")\n";
      std::cout << "first_degree_one_state=" << i << '\n';
      return kDegreeOne;
    }
  }
  std::ostringstream text;
  if (all_states) {
    for (std::size_t i = 0; i < states.size(); ++i) text << "# state " << i << '\n' << format_gluing_table(states[i]);
  } else {
    text << format_gluing_table(states.back());
  }
  emit(out, text.str());
  if (check) std::cerr << states.size() << " states, none with a degree-one edge\n";
  return kOk;
}

int cmd_rewrite(const std::string& path_file, const std::string& out, const std::string& sidecar_file,
                bool progress) {
  const MovePath path = load_path(path_file);
  if (first_degree_one_state(path.initial, path.moves) < 0) {
    // Nothing to detour around: hand the input back untouched.
    emit(out, slurp(path_file));
    return kOk;
  }
  DetourOptions options;
  if (progress) options.progress = [](int done, int total) { std::cerr << "\rstep " << done << "/" << total << std::flush; };
  const DetourCertificate cert = [&] {
    try {
      return detour_rewrite(path, options);
    } catch (const PathError& e) {
      throw Error(std::string(e.what()) + " (original step " + std::to_string(e.index()) + ")");
    }
  }();
  if (progress) std::cerr << '\n';

  // Point at the same triangulation from wherever the output lands.
  const fs::path source = fs::absolute(fs::path(path_file).parent_path() / triangulation_reference(path_file));
  std::string reference = source.string();
  if (!out.empty() && out != "-") {
    const fs::path rel = fs::relative(source, fs::absolute(fs::path(out)).parent_path());
    if (!rel.empty()) reference = rel.string();
  }
  std::ostringstream text;
  write_path(text, cert.rewritten.moves, reference);
  emit(out, text.str());

  std::ostringstream side;
  write_sidecar(side, cert);
  const std::string side_path = !sidecar_file.empty() ? sidecar_file : (out.empty() || out == "-" ? "" : out + ".cert");
  if (side_path.empty())
    std::cerr << side.str();
  else
    write_atomically(side_path, side.str());
  std::cerr << "rewrote " << path.moves.size() << " moves into " << cert.rewritten.moves.size() << ", "
            << cert.events.size() / 2 << " pillows\n";
  return kOk;
}

int cmd_explore(const std::vector<std::string>& files, int max_tets, bool forbid, int threads, const std::string& out,
                bool report) {
  std::vector<Triangulation> seeds;
  for (const auto& f : files) seeds.push_back(load_gluing_table(f));
  const PachnerGraphSlice slice = bfs_explore(seeds, {max_tets, forbid, threads});
  std::ostringstream text;
  export_slice(text, slice);
  emit(out, text.str());
  if (report) {
    const auto comps = connectivity_report(slice, forbid);
    std::cerr << slice.nodes.size() << " nodes, " << slice.edges.size() << " edges, " << comps.size()
              << " components" << (forbid ? " without degree-one edges" : "") << '\n';
    for (const auto& c : comps)
      std::cerr << "  " << c.members.front().text << " size " << c.members.size()
                << (c.touches_bound ? " (reaches the bound)" : "") << '\n';
    for (const auto& [sig, node] : slice.nodes)
      if (node.tets == 1) {
        std::cerr << "  note: single-tetrahedron triangulations admit no 2-3 or 3-2 move\n";
        break;
      }
  }
  return kOk;
}

int cmd_l41(int stack, const std::string& detect, const std::string& out) {
  if (!detect.empty()) {
    const bool hit = detect_l41_exceptional(load_gluing_table(detect));
    std::cout << "l41=" << (hit ? "true" : "false") << '\n';
    return kOk;
  }
  emit(out, format_gluing_table(build_l41_stack(stack)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triangulations, Pachner moves and degree-one-free paths"};
  app.require_subcommand(1);

  std::string file, mode = "closed", out, sidecar, detect;
  std::vector<std::string> moves, files;
  bool check = false, all_states = false, forbid = false, report = false, progress = false;
  int max_tets = 0, threads = 0, stack = 0;

  auto* validate_cmd = app.add_subcommand("validate", "Check a gluing table");
  validate_cmd->add_option("file", file, "Gluing table")->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("--mode", mode, "closed or ideal")->check(CLI::IsMember({"closed", "ideal"}));

  auto* move_cmd = app.add_subcommand("move", "Apply moves to a gluing table");
  move_cmd->add_option("file", file, "Gluing table")->required()->check(CLI::ExistingFile);
  move_cmd->add_option("--apply", moves, "Move such as \"23 0 2\"; repeatable")->required();
  move_cmd->add_option("-o,--output", out, "Output table (default stdout)");

  auto* replay_cmd = app.add_subcommand("replay", "Replay a path file");
  replay_cmd->add_option("path", file, "Path file")->required()->check(CLI::ExistingFile);
  replay_cmd->add_flag("--check-degree-one", check, "Fail at the first state with a degree-one edge");
  replay_cmd->add_flag("--all", all_states, "Write every state, not only the last");
  replay_cmd->add_option("-o,--output", out, "Output (default stdout)");

  auto* rewrite_cmd = app.add_subcommand("rewrite", "Detour a path around degree-one edges");
  rewrite_cmd->add_option("path", file, "Path file")->required()->check(CLI::ExistingFile);
  rewrite_cmd->add_option("-o,--output", out, "Rewritten path file (default stdout)");
  rewrite_cmd->add_option("--sidecar", sidecar, "Certificate report (default <output>.cert)");
  rewrite_cmd->add_flag("--progress", progress, "Report progress on stderr");

  auto* explore_cmd = app.add_subcommand("explore", "Breadth-first slice of the Pachner graph");
  explore_cmd->add_option("files", files, "Seed gluing tables")->required()->check(CLI::ExistingFile);
  explore_cmd->add_option("--max-tets", max_tets, "Size bound")->required()->check(CLI::PositiveNumber);
  explore_cmd->add_flag("--forbid-degree-one", forbid, "Do not expand states with degree-one edges");
  explore_cmd->add_option("--threads", threads, "Workers (default PACHNER_THREADS or all cores)");
  explore_cmd->add_flag("--report", report, "Connectivity summary on stderr");
  explore_cmd->add_option("-o,--output", out, "Slice export (default stdout)");

  auto* l41_cmd = app.add_subcommand("l41", "Build or detect the odd L(4,1) stacks");
  auto* stack_opt = l41_cmd->add_option("--stack", stack, "Number of tetrahedra, odd and at least 3")
                        ->check([](const std::string& s) -> std::string {
                          const int k = std::atoi(s.c_str());
                          return k >= 3 && k % 2 == 1 ? "" : "k must be odd and at least 3";
                        });
  auto* detect_opt = l41_cmd->add_option("--detect", detect, "Gluing table to test")->check(CLI::ExistingFile);
  stack_opt->excludes(detect_opt);
  l41_cmd->add_option("-o,--output", out, "Output table (default stdout)");

  CLI11_PARSE(app, argc, argv);
  if (*l41_cmd && !*stack_opt && !*detect_opt) {
    std::cerr << "l41: give --stack k or --detect file\n";
    return kFailed;
  }

  try {
    if (*validate_cmd) return cmd_validate(file, mode);
    if (*move_cmd) return cmd_move(file, moves, out);
    if (*replay_cmd) return cmd_replay(file, check, all_states, out);
    if (*rewrite_cmd) return cmd_rewrite(file, out, sidecar, progress);
    if (*explore_cmd) return cmd_explore(files, max_tets, forbid, threads, out, report);
    if (*l41_cmd) return cmd_l41(stack, detect, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kFailed;
}
