#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pachner/errors.hpp"
#include "pachner/isosig.hpp"
#include "pachner/moves.hpp"
#include "pachner/skeleton.hpp"
#include "pachner/triangulation.hpp"

namespace pachner {

/// A run of 2-3/3-2 moves together with the state it ends in.
struct MoveSequence {
  Triangulation result;
  std::vector<ElementaryMove> moves;
};

// ---------------------------------------------------------------------------
// Triangular pillow

/// The pillow fragment: four tetrahedra forming two interleaved bird beaks
/// (0,1) and (2,3), with free faces kPillowFaceA and kPillowFaceB. Found by
/// exhaustive search over interleavings; it is the unique one (up to
/// isomorphism) with internal degrees {2,2,3,3} and boundary edges taking
/// 3, 3 and 8 model edges.
Triangulation build_pillow();

inline constexpr FaceRef kPillowFaceA{0, 2};
inline constexpr FaceRef kPillowFaceB{2, 2};
/// Vertex v of face A sits at vertex kPillowAcross[v] of face B.
inline const Perm kPillowAcross{0, 3, 2, 1};
/// The boundary edge carrying eight model edges, as an edge of tetrahedron 0.
inline constexpr int kPillowEightEdge = 4;  // vertices 1 and 3

/// Cut-and-paste insertion: unglue the triangle at `side` and glue the pillow
/// into the hole, face A against `side`. Vertices `from` and `to` of side.tet
/// span the edge that receives the pillow's 8-edge; they go to vertices 1
/// and 3 of pillow tetrahedron 0. Swapping them glues in the mirror image,
/// which is not isomorphic in general. The pillow occupies the last four
/// indices of the result.
Triangulation glue_pillow(const Triangulation& tri, FaceRef side, int from, int to);

/// Where an inserted pillow sits: pillow tetrahedron i is tets[i], with its
/// vertex v at vertex perms[i][v]; outside_a and outside_b are the faces glued
/// to faces A and B.
struct PillowHandle {
  std::array<int, 4> tets{};
  std::array<Perm, 4> perms{};
  FaceRef outside_a;
  FaceRef outside_b;
};

/// Checks that an intact pillow sits at `tets` with vertex maps `perms` and
/// fills in the outside faces. Throws PreconditionError otherwise.
PillowHandle pillow_handle(const Triangulation& tri, const std::array<int, 4>& tets,
                           const std::array<Perm, 4>& perms = {});
/// The same handle after relabelling tetrahedra by `tet_map` (from a move
/// that left the pillow alone), rechecked.
PillowHandle follow_handle(const Triangulation& tri, const PillowHandle& h, const std::vector<int>& tet_map);

/// Cuts the pillow out and glues its two outside faces back together. The
/// surviving tetrahedra keep their relative order.
Triangulation cut_pillow(const Triangulation& tri, const PillowHandle& h,
                         std::vector<int>* tet_map = nullptr);

// ---------------------------------------------------------------------------
// V-move

/// Pair k in {0,1,2} of opposite edges of a tetrahedron: {k, 5-k}, i.e.
/// 01|23, 02|13, 03|12.
inline int opposite_edge(int k) { return 5 - k; }

struct VMoveResult {
  Triangulation result;
  std::vector<ElementaryMove> moves;  // 2-3, 2-3, 2-3, 3-2
  int hinge = -1;                     // degree-two edge of the new beak
  std::array<int, 2> beak{};
  int wrapped = -1;                   // the tetrahedron the beak wraps around
  std::vector<int> tet_map;           // input index -> result index, or -1
};

/// Wraps a bird beak around the two faces of `tet` containing edge `pair`
/// (equivalently the two faces containing the opposite edge), using the
/// triangle of `tet` opposite vertex `apex` as the first 2-3 move. That
/// triangle must join `tet` to a different tetrahedron and have edges of
/// degree at least three, and the triangulation must be free of degree-one
/// edges.
VMoveResult v_move(const Triangulation& tri, int tet, int pair, int apex);
/// Same, with the first admissible apex.
VMoveResult v_move(const Triangulation& tri, int tet, int pair);

/// Why the V-move with this triangle is not available, if it is not.
std::optional<std::string> v_move_obstruction(const Triangulation& tri, const Skeleton& sk, int tet,
                                              int apex);

// ---------------------------------------------------------------------------
// Bird beaks and mandible rotation

/// Two distinct tetrahedra around a degree-two edge. Mandible j consists of
/// the faces of tets[0] and tets[1] opposite the hinge endpoint ends[j]
/// (ends given in each tetrahedron's labels).
struct BirdBeak {
  int hinge = -1;
  std::array<int, 2> tets{};
  std::array<std::array<int, 2>, 2> ends{};  // ends[s] = hinge endpoints in tets[s]

  FaceRef mandible_face(int mandible, int side) const { return {tets[side], ends[side][mandible]}; }
};

/// Reads the beak around a degree-two edge; throws if it is not one.
BirdBeak bird_beak(const Triangulation& tri, const Skeleton& sk, int hinge);

struct RotationResult {
  Triangulation result;
  std::vector<ElementaryMove> moves;  // 2-3 then 3-2
  BirdBeak beak;                      // the beak after the rotation
  int passed = -1;                    // tetrahedron the mandible moved past
  int moved = -1;                     // what replaced it, now across the mandible
  std::vector<int> tet_map;           // input index -> result index, or -1
};

/// Rotates `mandible` of the beak past the tetrahedron glued to its face on
/// `side`: a 2-3 on that face, then a 3-2 on the old hinge. Refuses when that
/// tetrahedron belongs to the beak, or when a move would create a degree-one
/// edge (the beak folding onto itself).
RotationResult rotate_mandible(const Triangulation& tri, const BirdBeak& beak, int mandible, int side);

// ---------------------------------------------------------------------------
// Pillow insertion

/// The neighbourhood of a triangle with a degree-two edge: `e` has degree
/// two with book (front, back); the triangle lies between them. Vertex names
/// follow the front tetrahedron: e = xy, the triangle is xyw and the other
/// triangle at e is xyw'; e1 = yw, e2 = xw, ebar1 = yw', ebar2 = xw', f = ww'.
struct PillowSite {
  FaceRef triangle;  // the triangle, as a face of the front tetrahedron
  int e = -1, e1 = -1, e2 = -1, ebar1 = -1, ebar2 = -1, f = -1;
  int front = -1, back = -1;
  int x = -1, y = -1, w = -1, wbar = -1;  // vertices of the front tetrahedron
};

/// Builds the site for degree-two edge `e` and the triangle `triangle`
/// incident to it. Throws PreconditionError otherwise.
PillowSite pillow_site(const Triangulation& tri, const Skeleton& sk, FaceRef triangle, int e);
/// Same, naming the ends of e explicitly: x and y are vertices of
/// triangle.tet. The pillow's chirality follows the order of x and y.
PillowSite pillow_site_at(const Triangulation& tri, const Skeleton& sk, FaceRef triangle, int x, int y);

/// The stack of degree-two-linked tetrahedra closed up: the L(4,1) family.
class L41Exception : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// The triangulation breaks the one-vertex (or no spherical boundary)
/// hypothesis in a way the stack walk detects.
class HypothesisError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// Geometry the insertion does not handle (classes of the triangle coincide).
class UnsupportedDegeneracy : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

struct VSite {
  PillowSite site;  // the site seen from the tetrahedron the walk starts in
  int tet = -1;     // tetrahedron whose triangle starts the V-move
  int apex = -1;    // that triangle is opposite this vertex
  int pair = -1;    // edge pair of the V-move (contains the e1 edge)
  std::vector<int> stack;  // tetrahedra walked past, nearest first
  int third_edge = -1;     // class of the triangle's edge that is neither e1 nor its partner
};

/// Walks up the stack from the front tetrahedron until a triangle at e1 has
/// all edges of degree at least three. If the triangles (e1, ebar1, f) of
/// both tetrahedra at e qualify, the one whose f has the smaller class id is
/// used; its tetrahedron becomes the front of the returned site.
VSite find_v_site(const Triangulation& tri, const Skeleton& sk, const PillowSite& site);

struct PillowInsertion {
  Triangulation result;
  std::vector<ElementaryMove> moves;
  PillowHandle handle;
  VSite walk;
  int v_move_at = 0;       // index in moves of the first move of each V-move
  int second_v_move_at = 0;
};

/// Inserts the pillow at the site by 2-3/3-2 moves only, none of which
/// passes through a triangulation with a degree-one edge.
PillowInsertion insert_pillow(const Triangulation& tri, const PillowSite& site);

struct PillowRemoval {
  Triangulation result;
  std::vector<ElementaryMove> moves;
};

/// Reverses insert_pillow: cuts the pillow out by surgery, inserts it again at
/// the same place, and replays that insertion backwards on tri. The edge of
/// the cut triangulation under the pillow's 8-edge must have degree two.
PillowRemoval remove_pillow(const Triangulation& tri, const PillowHandle& handle);

// ---------------------------------------------------------------------------
// L(4,1)

/// The odd stack of k tetrahedra linked by degree-two edges, top glued to
/// bottom with a quarter turn.
Triangulation build_l41_stack(int k);

/// Whether tri is isomorphic to build_l41_stack(k) for some odd k >= 3.
bool detect_l41_exceptional(const Triangulation& tri);

// ---------------------------------------------------------------------------
// Paths

/// The path's moves reversed, addressed in the reversed order of states.
std::vector<ElementaryMove> reverse_moves(const Triangulation& start,
                                          const std::vector<ElementaryMove>& moves);

/// Re-addresses a 2-3 or 3-2 move of `a` for `b` through an isomorphism
/// a -> b.
ElementaryMove transport_move(const Triangulation& a, const Triangulation& b, const Isomorphism& iso,
                              const ElementaryMove& m);

/// The isomorphism between the results of the same move applied to a and
/// (transported) to b, given iso: a -> b before the move. Seeds from a
/// tetrahedron the move left alone, or searches if there is none.
std::optional<Isomorphism> follow_isomorphism(const Isomorphism& iso, const MoveOutcome& on_a,
                                              const MoveOutcome& on_b);

/// Replays `moves` from `start`, returning the first state index with a
/// degree-one edge, or -1.
int first_degree_one_state(const Triangulation& start, const std::vector<ElementaryMove>& moves);

// ---------------------------------------------------------------------------
// Detours

/// One pillow going in or coming out during a rewrite.
struct DetourEvent {
  enum class Kind { insert, remove };
  Kind kind = Kind::insert;
  int original_step = 0;  // the original move it precedes (insert) or follows (remove)
  int rewritten_at = 0;   // index in the rewritten path of its first move
  int edge = -1;          // the protected edge, as a class of the original state
};

struct DetourCertificate {
  MovePath rewritten;
  std::vector<int> min_degrees;  // one per state of the rewritten path, initial first
  std::pair<IsoSignature, IsoSignature> endpoint_sigs;
  std::vector<DetourEvent> events;
};

struct DetourOptions {
  /// Polled between steps; returning true abandons the rewrite.
  std::function<bool()> cancelled;
  /// Called after each original move with (moves done, moves total).
  std::function<void(int, int)> progress;
};

class Cancelled : public Error {
 public:
  using Error::Error;
};

/// Rewrites a 2-3/3-2 path whose states may have degree-one edges into one
/// whose states have none. Before a move that creates a degree-one edge, a
/// pillow goes onto the edge's other triangle; it comes out again (most
/// recently inserted first) once the edge has degree two or more. Moves of
/// the original path that no longer apply are reported as PathError with the
/// original step.
DetourCertificate detour_rewrite(const MovePath& path, const DetourOptions& options = {});

/// The text report that goes with a certificate: endpoint signatures, the
/// pillow events and the minimum edge degree of every state.
void write_sidecar(std::ostream& out, const DetourCertificate& cert);

}  // namespace pachner
