#include "pachner/isosig.hpp"

#include <algorithm>
#include <numeric>

namespace pachner {

namespace {

constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+-";

int digit_value(char c) {
  for (int i = 0; i < 64; ++i)
    if (kAlphabet[i] == c) return i;
  return -1;
}

// Code of one breadth-first relabelling: for each new tetrahedron in order and
// each new face 0..3, partner * 24 + perm index, or -1 when unglued.
struct Labelling {
  std::vector<int> code;
  std::vector<int> order;      // new index -> old tet
  std::vector<Perm> to_new;    // old tet -> (old vertex -> new vertex)
};

// Runs the relabelling from (start, rho) and compares against `best` as it
// goes; returns false as soon as the partial code is larger than best.
bool relabel_bfs(const Triangulation& tri, const std::vector<int>& comp_index, int comp_size,
                 int start, Perm rho, const std::vector<int>* best, Labelling& out) {
  const int n = tri.size();
  out.code.clear();
  out.order.assign(1, start);
  out.to_new.assign(n, Perm());
  std::vector<int> new_index(n, -1);
  new_index[start] = 0;
  out.to_new[start] = rho;
  bool tied = best != nullptr;
  for (int i = 0; i < comp_size; ++i) {
    const int t = out.order[i];
    const Perm back = out.to_new[t].inverse();
    for (int nf = 0; nf < 4; ++nf) {
      const Gluing& g = tri.gluing(t, back[nf]);
      int value;
      if (!g.glued()) {
        value = -1;
      } else {
        if (new_index[g.tet] < 0) {
          new_index[g.tet] = static_cast<int>(out.order.size());
          out.order.push_back(g.tet);
          // Make the gluing read as the identity in the new labels.
          out.to_new[g.tet] = out.to_new[t] * g.perm.inverse();
        }
        const Perm p = out.to_new[g.tet] * g.perm * back;
        value = new_index[g.tet] * 24 + p.index();
      }
      if (tied) {
        const int b = (*best)[out.code.size()];
        if (value > b) return false;
        if (value < b) tied = false;
      }
      out.code.push_back(value);
    }
  }
  (void)comp_index;
  return true;
}

struct Canonical {
  std::vector<int> code;
  Labelling labelling;
};

Canonical canonical_component(const Triangulation& tri, const std::vector<int>& comp) {
  std::vector<int> comp_index(tri.size(), -1);
  for (std::size_t i = 0; i < comp.size(); ++i) comp_index[comp[i]] = static_cast<int>(i);
  Canonical best;
  bool have = false;
  Labelling trial;
  for (int start : comp)
    for (int r = 0; r < 24; ++r) {
      if (relabel_bfs(tri, comp_index, static_cast<int>(comp.size()), start, Perm::from_index(r),
                      have ? &best.code : nullptr, trial)) {
        if (!have || trial.code < best.code) {
          best.code = trial.code;
          best.labelling = trial;
          have = true;
        }
      }
    }
  return best;
}

std::string encode(const std::vector<int>& code, int n) {
  // Fixed-width base-64 digits per entry, value + 1 so that -1 encodes as 0.
  const int max_value = n * 24 + 1;
  int width = 1;
  for (int cap = 64; cap <= max_value; cap *= 64) ++width;
  std::string out;
  // Header: tetrahedron count in base-64 digits, prefixed by its own width.
  std::string count;
  for (int v = n; v > 0; v /= 64) count.insert(count.begin(), kAlphabet[v % 64]);
  out += kAlphabet[count.size()];
  out += count;
  for (int v : code) {
    int x = v + 1;
    std::string digits(width, kAlphabet[0]);
    for (int d = width - 1; d >= 0; --d) {
      digits[d] = kAlphabet[x % 64];
      x /= 64;
    }
    out += digits;
  }
  return out;
}

}  // namespace

std::vector<std::vector<int>> components(const Triangulation& tri) {
  const int n = tri.size();
  std::vector<int> seen(n, 0);
  std::vector<std::vector<int>> out;
  for (int root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<int> comp{root};
    seen[root] = 1;
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (int f = 0; f < 4; ++f) {
        const Gluing& g = tri.gluing(comp[i], f);
        if (g.glued() && !seen[g.tet]) {
          seen[g.tet] = 1;
          comp.push_back(g.tet);
        }
      }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

IsoSignature iso_signature(const Triangulation& tri) {
  auto comps = components(tri);
  std::vector<std::string> parts;
  for (const auto& comp : comps) {
    Canonical c = canonical_component(tri, comp);
    parts.push_back(encode(c.code, static_cast<int>(comp.size())));
  }
  std::sort(parts.begin(), parts.end());
  IsoSignature sig;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) sig.text += '.';
    sig.text += parts[i];
  }
  return sig;
}

Triangulation canonical_form(const Triangulation& tri) {
  auto comps = components(tri);
  struct Piece {
    std::string key;
    Canonical canon;
  };
  std::vector<Piece> pieces;
  for (const auto& comp : comps) {
    Canonical c = canonical_component(tri, comp);
    pieces.push_back({encode(c.code, static_cast<int>(comp.size())), std::move(c)});
  }
  std::stable_sort(pieces.begin(), pieces.end(),
                   [](const Piece& a, const Piece& b) { return a.key < b.key; });
  std::vector<int> tet_map(tri.size());
  std::vector<Perm> maps(tri.size());
  int offset = 0;
  for (const auto& p : pieces) {
    const auto& lab = p.canon.labelling;
    for (std::size_t i = 0; i < lab.order.size(); ++i) {
      tet_map[lab.order[i]] = offset + static_cast<int>(i);
      maps[lab.order[i]] = lab.to_new[lab.order[i]];
    }
    offset += static_cast<int>(lab.order.size());
  }
  return tri.relabel(tet_map, maps);
}

Triangulation from_signature(const IsoSignature& sig) {
  std::vector<GluingRow> rows;
  std::size_t pos = 0;
  const std::string& s = sig.text;
  bool boundary = false;
  while (pos < s.size()) {
    if (s[pos] == '.') {
      ++pos;
      continue;
    }
    const int count_width = digit_value(s[pos++]);
    if (count_width <= 0 || pos + count_width > s.size()) throw Error("malformed signature");
    int n = 0;
    for (int i = 0; i < count_width; ++i) n = n * 64 + digit_value(s[pos++]);
    const int max_value = n * 24 + 1;
    int width = 1;
    for (int cap = 64; cap <= max_value; cap *= 64) ++width;
    const int offset = static_cast<int>(rows.size());
    for (int t = 0; t < n; ++t) {
      GluingRow row;
      for (int f = 0; f < 4; ++f) {
        if (pos + width > s.size()) throw Error("truncated signature");
        int x = 0;
        for (int d = 0; d < width; ++d) {
          int v = digit_value(s[pos++]);
          if (v < 0) throw Error("malformed signature");
          x = x * 64 + v;
        }
        if (x == 0) {
          boundary = true;
          continue;
        }
        --x;
        row[f] = Gluing{offset + x / 24, Perm::from_index(x % 24)};
      }
      rows.push_back(row);
    }
  }
  return boundary ? Triangulation::fragment(std::move(rows))
                  : Triangulation::from_gluings(std::move(rows));
}

std::optional<Isomorphism> isomorphism_from(const Triangulation& a, const Triangulation& b,
                                            int a_tet, int b_tet, Perm seed) {
  const int n = a.size();
  if (n != b.size()) return std::nullopt;
  Isomorphism iso{std::vector<int>(n, -1), std::vector<Perm>(n)};
  std::vector<char> used(n, 0);
  iso.tet_map[a_tet] = b_tet;
  iso.perms[a_tet] = seed;
  used[b_tet] = 1;
  std::vector<int> stack{a_tet};
  int reached = 1;
  while (!stack.empty()) {
    const int t = stack.back();
    stack.pop_back();
    for (int f = 0; f < 4; ++f) {
      const Gluing& ga = a.gluing(t, f);
      const Gluing& gb = b.gluing(iso.tet_map[t], iso.perms[t][f]);
      if (ga.glued() != gb.glued()) return std::nullopt;
      if (!ga.glued()) continue;
      // Vertex map forced on the partner by the two gluings.
      const Perm forced = gb.perm * iso.perms[t] * ga.perm.inverse();
      if (iso.tet_map[ga.tet] < 0) {
        if (used[gb.tet]) return std::nullopt;
        iso.tet_map[ga.tet] = gb.tet;
        iso.perms[ga.tet] = forced;
        used[gb.tet] = 1;
        ++reached;
        stack.push_back(ga.tet);
      } else if (iso.tet_map[ga.tet] != gb.tet || iso.perms[ga.tet] != forced) {
        return std::nullopt;
      }
    }
  }
  if (reached != n) return std::nullopt;
  return iso;
}

std::vector<Isomorphism> all_isomorphisms(const Triangulation& a, const Triangulation& b) {
  std::vector<Isomorphism> out;
  if (a.size() != b.size() || a.size() == 0) return out;
  for (int target = 0; target < b.size(); ++target)
    for (int r = 0; r < 24; ++r)
      if (auto iso = isomorphism_from(a, b, 0, target, Perm::from_index(r))) out.push_back(*iso);
  return out;
}

std::optional<Isomorphism> find_isomorphism(const Triangulation& a, const Triangulation& b) {
  if (a.size() != b.size() || a.size() == 0) return std::nullopt;
  for (int target = 0; target < b.size(); ++target)
    for (int r = 0; r < 24; ++r)
      if (auto iso = isomorphism_from(a, b, 0, target, Perm::from_index(r))) return iso;
  return std::nullopt;
}

bool is_isomorphic(const Triangulation& a, const Triangulation& b) {
  if (a.size() != b.size()) return false;
  if (components(a).size() != 1 || components(b).size() != 1)
    return iso_signature(a) == iso_signature(b);
  return find_isomorphism(a, b).has_value();
}

}  // namespace pachner
