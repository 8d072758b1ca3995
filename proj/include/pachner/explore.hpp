#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <vector>

#include "pachner/isosig.hpp"
#include "pachner/triangulation.hpp"

namespace pachner {

struct SliceNode {
  int tets = 0;
  int min_degree = 0;
  bool degree_one = false;
  /// Every 2-3 and 3-2 move was followed. False for walls (degree-one nodes
  /// under the filter) and for 2-3 moves cut off at the size bound.
  bool expanded = false;
  bool at_bound = false;
  Triangulation representative;
};

/// Edges join a smaller triangulation to one with a single extra
/// tetrahedron, so the lower endpoint determines the direction.
struct SliceEdge {
  IsoSignature lower;
  IsoSignature upper;
  friend auto operator<=>(const SliceEdge&, const SliceEdge&) = default;
};

struct PachnerGraphSlice {
  std::map<IsoSignature, SliceNode> nodes;
  std::set<SliceEdge> edges;
  std::vector<IsoSignature> seeds;
  int max_tets = 0;
  bool forbid_degree_one = false;
};

struct ExploreOptions {
  int max_tets = 0;
  bool forbid_degree_one = false;
  /// Worker count; zero means explorer_threads().
  int threads = 0;
};

/// PACHNER_THREADS if set and positive, else the hardware concurrency.
int explorer_threads();

/// Breadth-first closure under 2-3 and 3-2 moves up to max_tets tetrahedra,
/// smallest unexpanded size first. The result does not depend on the
/// number of workers.
PachnerGraphSlice bfs_explore(const std::vector<Triangulation>& seeds, const ExploreOptions& options);
PachnerGraphSlice bfs_explore(const Triangulation& seed, const ExploreOptions& options);

struct Component {
  std::vector<IsoSignature> members;  // sorted; the first is the representative
  /// Some member sits at the size bound, so the split may be an artifact of it.
  bool touches_bound = false;
  int expandable = 0;  // members that are not walls
};

/// Components of the slice, restricted to degree-one-free nodes when
/// forbid_degree_one is set. Sorted by representative. Asking for the
/// unfiltered report on a filtered slice throws PreconditionError.
std::vector<Component> connectivity_report(const PachnerGraphSlice& slice, bool forbid_degree_one);

/// `SIG <sig> <tets> <min degree>` and `EDGE <a> <b> <kind>` lines, sorted.
/// a < b as strings; kind is 23 when a is the smaller triangulation.
void export_slice(std::ostream& out, const PachnerGraphSlice& slice);

}  // namespace pachner
