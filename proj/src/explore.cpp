#include "pachner/explore.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <string>
#include <thread>

#include "pachner/errors.hpp"
#include "pachner/moves.hpp"
#include "pachner/skeleton.hpp"

namespace pachner {

int explorer_threads() {
  if (const char* env = std::getenv("PACHNER_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct Neighbour {
  IsoSignature sig;
  Triangulation tri;
};

// What one worker learns about one node. Filled independently, merged in
// signature order by the collector.
struct Expansion {
  std::vector<Neighbour> up;
  std::vector<Neighbour> down;
};

SliceNode describe(const Triangulation& tri) {
  const Skeleton sk(tri);
  SliceNode n{tri.size(), sk.min_degree(), !sk.degree_one_edges().empty(), false, false, tri};
  return n;
}

Expansion expand(const Triangulation& tri, int max_tets) {
  Expansion out;
  const Skeleton sk(tri);
  std::set<IsoSignature> seen;
  for (const auto& m : pachner_moves(tri, sk)) {
    if (m.kind == MoveKind::move23 && tri.size() >= max_tets) continue;
    Triangulation next = apply_move(tri, m).result;
    IsoSignature sig = iso_signature(next);
    if (!seen.insert(sig).second) continue;
    auto& side = m.kind == MoveKind::move23 ? out.up : out.down;
    side.push_back({std::move(sig), std::move(next)});
  }
  return out;
}

}  // namespace

PachnerGraphSlice bfs_explore(const std::vector<Triangulation>& seeds, const ExploreOptions& options) {
  PachnerGraphSlice slice;
  slice.max_tets = options.max_tets;
  slice.forbid_degree_one = options.forbid_degree_one;
  const int threads = options.threads > 0 ? options.threads : explorer_threads();

  // size -> signatures waiting to be expanded
  std::map<int, std::set<IsoSignature>> pending;
  auto admit = [&](const IsoSignature& sig, const Triangulation& tri) {
    if (slice.nodes.count(sig)) return;
    SliceNode node = describe(tri);
    const bool wall = options.forbid_degree_one && node.degree_one;
    slice.nodes.emplace(sig, std::move(node));
    if (!wall) pending[tri.size()].insert(sig);
  };
  for (const auto& s : seeds) {
    if (s.size() > options.max_tets)
      throw PreconditionError("seed has " + std::to_string(s.size()) + " tetrahedra, above the bound " +
                              std::to_string(options.max_tets));
    slice.seeds.push_back(iso_signature(s));
    admit(slice.seeds.back(), s);
  }

  while (!pending.empty()) {
    const std::vector<IsoSignature> layer(pending.begin()->second.begin(), pending.begin()->second.end());
    pending.erase(pending.begin());

    std::vector<Expansion> results(layer.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i; (i = next++) < layer.size();)
        results[i] = expand(slice.nodes.at(layer[i]).representative, options.max_tets);
    };
    const int n_workers = std::min<int>(threads, static_cast<int>(layer.size()));
    if (n_workers <= 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    }

    // The collector: the only place the slice changes.
    for (std::size_t i = 0; i < layer.size(); ++i) {
      SliceNode& node = slice.nodes.at(layer[i]);
      node.expanded = true;
      node.at_bound = node.tets >= options.max_tets;
      for (auto& nb : results[i].up) {
        slice.edges.insert({layer[i], nb.sig});
        admit(nb.sig, nb.tri);
      }
      for (auto& nb : results[i].down) {
        slice.edges.insert({nb.sig, layer[i]});
        admit(nb.sig, nb.tri);
      }
    }
  }
  return slice;
}

PachnerGraphSlice bfs_explore(const Triangulation& seed, const ExploreOptions& options) {
  return bfs_explore(std::vector<Triangulation>{seed}, options);
}

std::vector<Component> connectivity_report(const PachnerGraphSlice& slice, bool forbid_degree_one) {
  if (!forbid_degree_one && slice.forbid_degree_one) {
    for (const auto& [sig, node] : slice.nodes)
      if (node.degree_one)
        throw PreconditionError("slice was explored with degree-one walls; the full graph is not known");
  }
  auto keep = [&](const IsoSignature& s) { return !forbid_degree_one || !slice.nodes.at(s).degree_one; };

  std::map<IsoSignature, IsoSignature> parent;
  std::function<const IsoSignature&(const IsoSignature&)> root = [&](const IsoSignature& s) -> const IsoSignature& {
    const IsoSignature& p = parent.at(s);
    if (p == s) return p;
    return parent[s] = root(p);
  };
  for (const auto& [sig, node] : slice.nodes)
    if (keep(sig)) parent.emplace(sig, sig);
  for (const auto& e : slice.edges) {
    if (!keep(e.lower) || !keep(e.upper)) continue;
    const IsoSignature a = root(e.lower), b = root(e.upper);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  std::map<IsoSignature, Component> by_root;
  for (const auto& [sig, node] : slice.nodes) {
    if (!keep(sig)) continue;
    Component& c = by_root[root(sig)];
    c.members.push_back(sig);
    c.touches_bound = c.touches_bound || node.at_bound;
    c.expandable += node.expanded;
  }
  std::vector<Component> out;
  for (auto& [r, c] : by_root) out.push_back(std::move(c));
  return out;
}

void export_slice(std::ostream& out, const PachnerGraphSlice& slice) {
  std::vector<std::string> lines;
  for (const auto& [sig, node] : slice.nodes)
    lines.push_back("SIG " + sig.text + " " + std::to_string(node.tets) + " " + std::to_string(node.min_degree));
  for (const auto& e : slice.edges) {
    const bool lower_first = e.lower.text < e.upper.text;
    const auto& a = lower_first ? e.lower : e.upper;
    const auto& b = lower_first ? e.upper : e.lower;
    lines.push_back("EDGE " + a.text + " " + b.text + (lower_first ? " 23" : " 32"));
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) out << l << '\n';
}

}  // namespace pachner
