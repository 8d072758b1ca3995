#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pachner/skeleton.hpp"
#include "pachner/triangulation.hpp"

namespace pachner {

enum class MoveKind { move23, move32, move02, move20 };

/// One elementary move, addressed combinatorially. Edge ids refer to the
/// deterministic Skeleton numbering of the triangulation the move acts on.
struct ElementaryMove {
  MoveKind kind = MoveKind::move23;
  FaceRef face{};  // move23
  int edge = -1;   // move32, move20, move02
  int p = 0;       // move02: positions in the book of `edge`
  int q = 0;

  static ElementaryMove two_three(FaceRef f) { return {MoveKind::move23, f, -1, 0, 0}; }
  static ElementaryMove three_two(int e) { return {MoveKind::move32, {}, e, 0, 0}; }
  static ElementaryMove zero_two(int e, int p, int q) { return {MoveKind::move02, {}, e, p, q}; }
  static ElementaryMove two_zero(int e) { return {MoveKind::move20, {}, e, 0, 0}; }

  /// Path-file form: `23 t f`, `32 e`, `02 e p q`, `20 e`.
  std::string str() const;
  static ElementaryMove parse(const std::string& line);

  friend bool operator==(const ElementaryMove&, const ElementaryMove&) = default;
};

struct FaceImage {
  FaceRef face;
  Perm perm;
};

struct MoveOutcome {
  Triangulation result;
  /// Old tetrahedron index -> index in result, or -1 if removed.
  std::vector<int> tet_map;
  /// Indices in result of the tetrahedra the move created, in creation order.
  std::vector<int> new_tets;
  /// (old class, new class) pairs sharing a model edge.
  std::vector<std::pair<int, int>> edge_links;
  /// Degree change of old classes that survive one-to-one.
  std::map<int, int> degree_deltas;
  /// New classes with no old counterpart, with their degree.
  std::vector<std::pair<int, int>> created_edges;
  /// Degree-one classes of result that are not inherited degree-one edges.
  std::vector<int> created_degree_one;
  /// For 2-3 and 3-2 moves: where each boundary face of a removed
  /// tetrahedron went, with the map from its old labels to the new ones.
  std::map<FaceRef, FaceImage> face_map;
};

/// 2-3 move on the triangle containing model face f. The two tetrahedra
/// meeting there must be distinct. New tetrahedra fill the two vacated slots
/// and then append, ordered by the face vertex they replace.
MoveOutcome pachner_2_3(const Triangulation& tri, FaceRef f);
/// 3-2 move on a degree-three edge meeting three distinct tetrahedra.
MoveOutcome pachner_3_2(const Triangulation& tri, int edge);
MoveOutcome pachner_3_2(const Triangulation& tri, const Skeleton& sk, int edge);
/// 0-2 move on edge `edge`, splitting its book at the triangles following
/// book positions p and q (the triangle between entries p and p+1).
MoveOutcome move_0_2(const Triangulation& tri, int edge, int p, int q);
/// 2-0 move collapsing the bird beak around a degree-two edge.
MoveOutcome move_2_0(const Triangulation& tri, int edge);
MoveOutcome move_2_0(const Triangulation& tri, const Skeleton& sk, int edge);

MoveOutcome apply_move(const Triangulation& tri, const ElementaryMove& m);

/// Why `m` cannot be applied, or nullopt if it can.
std::optional<std::string> move_obstruction(const Triangulation& tri, const Skeleton& sk,
                                            const ElementaryMove& m);

/// Every applicable 2-3 move (one per triangle, addressed by its smaller
/// model face) and 3-2 move.
std::vector<ElementaryMove> pachner_moves(const Triangulation& tri, const Skeleton& sk);

enum class CreationKind { none, via_2_3, via_3_2, via_2_0 };

struct CreationReport {
  CreationKind kind = CreationKind::none;
  /// Edge classes of the input whose degree drops to one.
  std::vector<int> witnesses;
};

/// Predicts, without applying it, which edges `m` turns into degree-one
/// edges. For 2-3 and 3-2 every witness has degree two beforehand.
CreationReport classify_degree_one_creation(const Triangulation& tri, const ElementaryMove& m);
CreationReport classify_degree_one_creation(const Triangulation& tri, const Skeleton& sk,
                                            const ElementaryMove& m);

/// Predicted per-class degree change of a 2-3 or 3-2 move, summed over the
/// nine (resp. nine) model edges it touches; the centre edge of a 3-2 move
/// is excluded.
std::map<int, int> predicted_deltas(const Triangulation& tri, const Skeleton& sk,
                                    const ElementaryMove& m);

const char* creation_kind_name(CreationKind k);

struct MovePath {
  Triangulation initial;
  std::vector<ElementaryMove> moves;
};

/// Applies a move, naming the offending step on failure.
class PathError : public PreconditionError {
 public:
  PathError(const std::string& what, int index) : PreconditionError(what), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

/// Every state of the path, initial state first.
std::vector<Triangulation> apply_path(const MovePath& path);

/// Path file: `triangulation <file>` then one move per line. Relative
/// triangulation paths resolve against the path file's directory.
MovePath load_path(const std::string& path_file);
MovePath read_path(std::istream& in, const std::string& base_dir);
void write_path(std::ostream& out, const std::vector<ElementaryMove>& moves,
                const std::string& triangulation_file);

}  // namespace pachner
