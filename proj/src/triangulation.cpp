#include "pachner/triangulation.hpp"

#include <fstream>
#include <sstream>

namespace pachner {

namespace {

std::string face_name(int tet, int face) {
  return "face " + std::to_string(face) + " of tetrahedron " + std::to_string(tet);
}

}  // namespace

void Triangulation::check(const std::vector<GluingRow>& rows, bool allow_boundary) {
  const int n = static_cast<int>(rows.size());
  if (n < 1) throw ValidationError("a triangulation needs at least one tetrahedron");
  for (int t = 0; t < n; ++t) {
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = rows[t][f];
      if (!g.glued()) {
        if (!allow_boundary)
          throw ValidationError(face_name(t, f) + " is unpaired; each face must be paired", t, f);
        continue;
      }
      if (g.tet >= n)
        throw ValidationError(face_name(t, f) + " is glued to missing tetrahedron " +
                                  std::to_string(g.tet), t, f);
      if (!g.perm.is_valid())
        throw ValidationError(face_name(t, f) + " has an invalid permutation", t, f);
      const int pf = g.perm[f];
      if (g.tet == t && pf == f)
        throw ValidationError(face_name(t, f) + " is glued to itself; a face cannot be glued to itself",
                              t, f);
      const Gluing& back = rows[g.tet][pf];
      if (back.tet != t || back.perm != g.perm.inverse())
        throw ValidationError(face_name(t, f) + " and " + face_name(g.tet, pf) +
                                  " do not agree on their pairing", t, f);
    }
  }
}

Triangulation Triangulation::from_gluings(std::vector<GluingRow> rows) {
  check(rows, false);
  return Triangulation(std::move(rows));
}

Triangulation Triangulation::fragment(std::vector<GluingRow> rows) {
  check(rows, true);
  return Triangulation(std::move(rows));
}

bool Triangulation::is_closed() const { return boundary_face_count() == 0; }

int Triangulation::boundary_face_count() const {
  int count = 0;
  for (const auto& row : rows_)
    for (const auto& g : row)
      if (!g.glued()) ++count;
  return count;
}

bool Triangulation::is_oriented() const {
  for (const auto& row : rows_)
    for (const auto& g : row)
      if (g.glued() && !g.perm.is_odd()) return false;
  return true;
}

Triangulation Triangulation::relabel(const std::vector<int>& tet_map,
                                     const std::vector<Perm>& vertex_maps) const {
  const int n = size();
  std::vector<GluingRow> out(n);
  for (int t = 0; t < n; ++t) {
    const Perm& rho = vertex_maps[t];
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = rows_[t][f];
      Gluing& dst = out[tet_map[t]][rho[f]];
      if (!g.glued()) {
        dst = Gluing{};
        continue;
      }
      dst.tet = tet_map[g.tet];
      dst.perm = vertex_maps[g.tet] * g.perm * rho.inverse();
    }
  }
  return Triangulation(std::move(out));
}

Triangulation read_gluing_table(std::istream& in) {
  std::string line;
  int line_no = 0;
  int n = -1;
  std::vector<GluingRow> rows;
  std::vector<int> row_lines;
  bool boundary = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    if (n < 0) {
      std::string kw;
      ls >> kw >> n;
      std::string extra;
      if ((kw != "tets" && kw != "fragment") || ls.fail() || n < 1 || (ls >> extra))
        throw ParseError("expected `tets N` with N >= 1", line_no);
      boundary = kw == "fragment";
      continue;
    }
    if (static_cast<int>(rows.size()) == n)
      throw ParseError("more tetrahedron lines than declared", line_no);
    GluingRow row;
    std::string tok;
    int f = 0;
    while (ls >> tok) {
      if (f == 4) throw ParseError("more than four face entries", line_no);
      if (tok == "-") {
        if (!boundary) throw ParseError("unpaired face; only a `fragment` table may leave faces unglued", line_no);
        row[f++] = Gluing{};
        continue;
      }
      auto colon = tok.find(':');
      if (colon == std::string::npos || colon == 0)
        throw ParseError("bad entry `" + tok + "`, expected t:abcd", line_no);
      int partner = 0;
      try {
        std::size_t used = 0;
        partner = std::stoi(tok.substr(0, colon), &used);
        if (used != colon) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError("bad tetrahedron index in `" + tok + "`", line_no);
      }
      Perm p;
      if (partner < 0 || !Perm::parse(tok.substr(colon + 1), p))
        throw ParseError("bad entry `" + tok + "`, expected t:abcd", line_no);
      row[f++] = Gluing{partner, p};
    }
    if (f != 4) throw ParseError("expected exactly four face entries", line_no);
    rows.push_back(row);
    row_lines.push_back(line_no);
  }
  if (n < 0) throw ParseError("missing `tets N` header", line_no);
  if (static_cast<int>(rows.size()) != n)
    throw ParseError("expected " + std::to_string(n) + " tetrahedron lines, found " +
                         std::to_string(rows.size()), line_no);
  try {
    return boundary ? Triangulation::fragment(std::move(rows))
                    : Triangulation::from_gluings(std::move(rows));
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), e.tet() >= 0 ? row_lines[e.tet()] : line_no);
  }
}

Triangulation parse_gluing_table(const std::string& text) {
  std::istringstream in(text);
  return read_gluing_table(in);
}

Triangulation load_gluing_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_gluing_table(in);
}

void write_gluing_table(std::ostream& out, const Triangulation& tri) {
  out << (tri.is_closed() ? "tets " : "fragment ") << tri.size() << '\n';
  for (int t = 0; t < tri.size(); ++t) {
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = tri.gluing(t, f);
      if (f) out << ' ';
      if (g.glued())
        out << g.tet << ':' << g.perm.str();
      else
        out << '-';
    }
    out << '\n';
  }
}

std::string format_gluing_table(const Triangulation& tri) {
  std::ostringstream out;
  write_gluing_table(out, tri);
  return out.str();
}

}  // namespace pachner
