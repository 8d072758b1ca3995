#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "pachner/triangulation.hpp"

namespace pachner {

/// Canonical text identifying a triangulation up to relabelling of
/// tetrahedra and of the vertices within each tetrahedron.
struct IsoSignature {
  std::string text;
  friend auto operator<=>(const IsoSignature&, const IsoSignature&) = default;
};

/// Lexicographically least breadth-first relabelling over every starting
/// tetrahedron and starting vertex labelling. Components are sorted.
IsoSignature iso_signature(const Triangulation& tri);

/// The relabelled gluing table that realises iso_signature(tri).
Triangulation canonical_form(const Triangulation& tri);

/// Rebuilds the canonical gluing table from a signature.
Triangulation from_signature(const IsoSignature& sig);

/// An isomorphism a -> b: tetrahedron t of a goes to tet_map[t], with its
/// vertex v sent to vertex perms[t][v].
struct Isomorphism {
  std::vector<int> tet_map;
  std::vector<Perm> perms;
};

/// The unique isomorphism of connected triangulations extending the seed
/// a_tet -> b_tet with vertex map `seed`, if there is one.
std::optional<Isomorphism> isomorphism_from(const Triangulation& a, const Triangulation& b,
                                            int a_tet, int b_tet, Perm seed);
/// Some isomorphism between connected triangulations, and all of them.
std::optional<Isomorphism> find_isomorphism(const Triangulation& a, const Triangulation& b);
std::vector<Isomorphism> all_isomorphisms(const Triangulation& a, const Triangulation& b);

/// Direct isomorphism test by propagation from one seed correspondence.
bool is_isomorphic(const Triangulation& a, const Triangulation& b);

/// Connected components as lists of tetrahedron indices.
std::vector<std::vector<int>> components(const Triangulation& tri);

}  // namespace pachner
