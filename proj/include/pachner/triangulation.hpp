#pragma once

#include <array>
#include <compare>
#include <iosfwd>
#include <string>
#include <vector>

#include "pachner/errors.hpp"
#include "pachner/perm.hpp"

namespace pachner {

/// A model face: the face of tetrahedron `tet` opposite its vertex `face`.
struct FaceRef {
  int tet = 0;
  int face = 0;
  friend constexpr auto operator<=>(const FaceRef&, const FaceRef&) = default;
};

/// A model edge: edge number `edge` (see kEdgeVertices) of tetrahedron `tet`.
struct EdgeRef {
  int tet = 0;
  int edge = 0;
  friend constexpr auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

/// Where a face is glued. `perm` maps the vertices of this tetrahedron to
/// those of the partner; the partner face is perm[face]. tet < 0 marks an
/// unglued (boundary) face, which only fragments may have.
struct Gluing {
  int tet = -1;
  Perm perm;
  bool glued() const { return tet >= 0; }
  friend bool operator==(const Gluing&, const Gluing&) = default;
};

using GluingRow = std::array<Gluing, 4>;

/// N model tetrahedra with face pairings. Values are immutable once built;
/// every factory checks the pairing invariants and throws ValidationError.
class Triangulation {
 public:
  /// A closed triangulation: every face must be paired.
  static Triangulation from_gluings(std::vector<GluingRow> rows);
  /// A fragment: unglued faces allowed, pairings otherwise checked.
  static Triangulation fragment(std::vector<GluingRow> rows);

  int size() const { return static_cast<int>(rows_.size()); }
  const Gluing& gluing(int tet, int face) const { return rows_[tet][face]; }
  const Gluing& gluing(FaceRef f) const { return rows_[f.tet][f.face]; }
  const std::vector<GluingRow>& rows() const { return rows_; }

  /// The face on the other side of `f` (requires f glued).
  FaceRef partner(FaceRef f) const {
    const auto& g = gluing(f);
    return {g.tet, g.perm[f.face]};
  }

  bool is_closed() const;
  int boundary_face_count() const;
  /// True iff every gluing permutation is odd (consistently oriented labels).
  bool is_oriented() const;

  /// Relabels tetrahedron i as tet_map[i] and its vertex v as vertex_maps[i][v].
  Triangulation relabel(const std::vector<int>& tet_map,
                        const std::vector<Perm>& vertex_maps) const;

  friend bool operator==(const Triangulation&, const Triangulation&) = default;

 private:
  explicit Triangulation(std::vector<GluingRow> rows) : rows_(std::move(rows)) {}
  static void check(const std::vector<GluingRow>& rows, bool allow_boundary);

  std::vector<GluingRow> rows_;
};

/// Reads the `tets N` gluing-table format (or `fragment N`, which may use
/// `-` for unglued faces). Throws ParseError (line numbered)
/// on syntax errors and on unpaired or non-involutive tables.
Triangulation read_gluing_table(std::istream& in);
Triangulation parse_gluing_table(const std::string& text);
Triangulation load_gluing_table(const std::string& path);

/// Writes the gluing-table format; fragments get the `fragment N` header.
void write_gluing_table(std::ostream& out, const Triangulation& tri);
std::string format_gluing_table(const Triangulation& tri);

}  // namespace pachner
