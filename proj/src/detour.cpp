#include <algorithm>
#include <ostream>
#include <set>

#include "pachner/composite.hpp"

namespace pachner {

namespace {

std::vector<int> identity_map(int n) {
  std::vector<int> m(n);
  for (int i = 0; i < n; ++i) m[i] = i;
  return m;
}

// A triangle named by the smaller of its two model faces.
FaceRef triangle_of(const Triangulation& tri, FaceRef f) { return std::min(f, tri.partner(f)); }

std::set<FaceRef> consumed_triangles(const Triangulation& tri, const Skeleton& sk, const ElementaryMove& m) {
  std::set<FaceRef> out;
  if (m.kind == MoveKind::move23) {
    out.insert(triangle_of(tri, m.face));
  } else if (m.kind == MoveKind::move32) {
    for (const BookEntry& b : sk.edge(m.edge).book) out.insert(triangle_of(tri, b.exit_face()));
  }
  return out;
}

// Moves replayed on the detour state, with every pillow followed along.
struct Batch {
  Triangulation d;
  std::vector<int> tet_map;  // before -> after
  std::vector<PillowHandle> pillows;
  std::vector<int> mins;
};

std::optional<Batch> replay(const Triangulation& d, const std::vector<PillowHandle>& pillows,
                            const std::vector<ElementaryMove>& moves, std::string& why) {
  Batch b{d, identity_map(d.size()), pillows, {}};
  for (const ElementaryMove& m : moves) {
    MoveOutcome o = apply_move(b.d, m);
    const Skeleton sk(o.result);
    if (!sk.degree_one_edges().empty()) {
      why = "move " + m.str() + " creates a degree-one edge";
      return std::nullopt;
    }
    for (PillowHandle& h : b.pillows) {
      for (int t : h.tets)
        if (o.tet_map[t] < 0) {
          why = "move " + m.str() + " breaks into a pillow";
          return std::nullopt;
        }
      h = follow_handle(o.result, h, o.tet_map);
    }
    for (int& t : b.tet_map)
      if (t >= 0) t = o.tet_map[t];
    b.mins.push_back(sk.min_degree());
    b.d = std::move(o.result);
  }
  return b;
}

class Rewriter {
 public:
  Rewriter(const Triangulation& start, const DetourOptions& options)
      : o_(start), d_(start), cert_{MovePath{start, {}}, {}, {}, {}}, options_(options) {
    emb_tet_ = identity_map(start.size());
    emb_perm_.assign(start.size(), Perm());
    cert_.min_degrees.push_back(Skeleton(start).min_degree());
  }

  void step(int i, const ElementaryMove& m) {
    if (options_.cancelled && options_.cancelled()) throw Cancelled("detour_rewrite cancelled at step " + std::to_string(i));
    const Skeleton sk(o_);
    const CreationReport report = classify_degree_one_creation(o_, sk, m);
    const std::set<int> keep(report.witnesses.begin(), report.witnesses.end());
    if (!report.witnesses.empty()) {
      // Room for a new pillow may have to be made by taking out old ones,
      // which can uncover a witness that an old pillow was covering.
      const std::set<FaceRef> consumed = consumed_triangles(o_, sk, m);
      std::string why = "the move uses every triangle of the edge";
      for (;;) {
        int stuck = -1;
        for (int w : report.witnesses)
          if (!covered(sk, w) && !protect(i, sk, w, consumed, why)) {
            stuck = w;
            break;
          }
        if (stuck < 0) break;
        if (!remove_any(i, keep))
          throw PathError("detour_rewrite: no pillow for edge " + std::to_string(stuck) + ": " + why, i);
      }
    }

    // A pillow whose edge has recovered may still be waiting to come out;
    // if the move needs its triangle it has to come out now.
    std::optional<ElementaryMove> mb;
    while (!(mb = carry(i, m)))
      if (!remove_any(i, keep)) throw PathError("detour_rewrite: move " + m.str() + " needs a triangle under a pillow", i);
    MoveOutcome oa = apply_move(o_, m);
    commit(i, {*mb}, oa.tet_map, std::move(oa.result));
    while (remove_any(i)) {
    }
  }

  // Takes out a pillow whose edge no longer has degree one, the most recent
  // such first. Pillows normally come out in the reverse order they went in;
  // an older one may go first when its removal leaves the newer ones alone.
  bool remove_any(int i, const std::set<int>& keep = {}) {
    for (int k = static_cast<int>(pillows_.size()) - 1; k >= 0; --k)
      if (remove(i, k, keep)) return true;
    return false;
  }

  bool remove(int i, int k, const std::set<int>& keep) {
    const int e = protected_edge(pillows_[k]);
    if (keep.count(e) || Skeleton(o_).degree(e) < 2) return false;
    std::optional<PillowRemoval> rem;
    try {
      rem = remove_pillow(d_, pillows_[k]);
    } catch (const PreconditionError&) {
      return false;
    }
    std::vector<PillowHandle> others = pillows_;
    others.erase(others.begin() + k);
    std::string why;
    if (!replay(d_, others, rem->moves, why)) return remove_through(i, k, e, rem->moves);
    pillows_ = std::move(others);
    cert_.events.push_back({DetourEvent::Kind::remove, i, static_cast<int>(cert_.rewritten.moves.size()), e});
    commit(i, rem->moves, identity_map(o_.size()), o_);
    return true;
  }

  // Two pillows side by side: undoing one passes through the other. The
  // moves still end on the state with pillow k cut out, so the others are
  // found again there by isomorphism.
  bool remove_through(int i, int k, int e, const std::vector<ElementaryMove>& moves) {
    std::string why;
    auto b = replay(d_, {}, moves, why);
    if (!b) return false;
    std::vector<int> cut;
    const Triangulation target = cut_pillow(d_, pillows_[k], &cut);
    std::optional<Isomorphism> iso;
    for (int t = 0; t < d_.size() && !iso; ++t)
      if (cut[t] >= 0 && b->tet_map[t] >= 0) iso = isomorphism_from(target, b->d, cut[t], b->tet_map[t], Perm());
    if (!iso) iso = find_isomorphism(target, b->d);
    if (!iso) return false;
    std::vector<PillowHandle> others;
    try {
      for (int j = 0; j < static_cast<int>(pillows_.size()); ++j) {
        if (j == k) continue;
        PillowHandle h = pillows_[j];
        for (int x = 0; x < 4; ++x) {
          const int t = cut[h.tets[x]];
          h.perms[x] = iso->perms[t] * h.perms[x];
          h.tets[x] = iso->tet_map[t];
        }
        others.push_back(pillow_handle(b->d, h.tets, h.perms));
      }
    } catch (const PreconditionError&) {
      return false;
    }
    std::vector<int> d_map(d_.size(), -1);
    for (int t = 0; t < d_.size(); ++t)
      if (cut[t] >= 0) d_map[t] = iso->tet_map[cut[t]];
    cert_.events.push_back({DetourEvent::Kind::remove, i, static_cast<int>(cert_.rewritten.moves.size()), e});
    b->pillows = std::move(others);
    b->tet_map = d_map;
    apply(std::move(*b), moves);
    reseed(i, identity_map(o_.size()), o_, d_map);
    return true;
  }

  DetourCertificate finish(int steps, const Triangulation& end) {
    if (!pillows_.empty())
      throw PathError("detour_rewrite: " + std::to_string(pillows_.size()) + " pillow(s) could not be removed by the end",
                      steps);
    if (iso_signature(d_) != iso_signature(end))
      throw PathError("detour_rewrite: rewritten path ends away from the original endpoint", steps);
    return std::move(cert_);
  }

 private:
  // An edge of a triangle that already carries a pillow has degree three
  // or more in the detour state, and the move takes only one from it.
  bool covered(const Skeleton& sk, int w) const {
    const BookEntry& rep = sk.edge(w).book.at(0);
    const Perm& q = emb_perm_[rep.tet];
    const Skeleton sk_d(d_);
    return sk_d.degree(sk_d.edge_of(emb_tet_[rep.tet], edge_number(q[rep.emb[0]], q[rep.emb[1]]))) >= 3;
  }

  // Inserts a pillow on a triangle of w that the next move leaves alone.
  // Another pillow may sit close enough for the insertion to run into it;
  // then the other triangle or the other chirality is tried.
  bool protect(int i, const Skeleton& sk, int w, const std::set<FaceRef>& consumed, std::string& why) {
    const Skeleton sk_d(d_);
    for (const BookEntry& at : sk.edge(w).book) {
      if (consumed.count(triangle_of(o_, at.exit_face()))) continue;
      const int u = emb_tet_[at.tet];
      const Perm& p = emb_perm_[at.tet];
      for (const bool swap : {false, true}) {
        std::optional<PillowInsertion> ins;
        try {
          const int x = p[at.emb[swap ? 1 : 0]], y = p[at.emb[swap ? 0 : 1]];
          ins = insert_pillow(d_, pillow_site_at(d_, sk_d, {u, p[at.emb[2]]}, x, y));
        } catch (const L41Exception&) {
          throw;
        } catch (const PreconditionError& e) {
          why = e.what();
          continue;
        }
        auto b = replay(d_, pillows_, ins->moves, why);
        if (!b) continue;
        cert_.events.push_back({DetourEvent::Kind::insert, i, static_cast<int>(cert_.rewritten.moves.size()), w});
        apply(std::move(*b), ins->moves);
        pillows_.push_back(pillow_handle(d_, ins->handle.tets, ins->handle.perms));
        reseed(i, identity_map(o_.size()), o_);
        return true;
      }
    }
    return false;
  }

  // The move transported to the detour state, or nothing if a pillow is in
  // the way.
  std::optional<ElementaryMove> carry(int i, const ElementaryMove& m) const {
    const Skeleton sk_d(d_);
    ElementaryMove mb = m;
    if (m.kind == MoveKind::move23) {
      mb.face = {emb_tet_[m.face.tet], emb_perm_[m.face.tet][m.face.face]};
      if (d_.gluing(mb.face).tet != emb_tet_[o_.gluing(m.face).tet]) return std::nullopt;
    } else if (m.kind == MoveKind::move32) {
      const Skeleton sk(o_);
      const BookEntry& rep = sk.edge(m.edge).book.at(0);
      const Perm& p = emb_perm_[rep.tet];
      mb.edge = sk_d.edge_of(emb_tet_[rep.tet], edge_number(p[rep.emb[0]], p[rep.emb[1]]));
    } else {
      throw PathError("detour_rewrite: only 2-3 and 3-2 moves are supported, got " + m.str(), i);
    }
    if (move_obstruction(d_, sk_d, mb)) return std::nullopt;
    return mb;
  }

  void commit(int i, const std::vector<ElementaryMove>& moves, const std::vector<int>& o_map, Triangulation o_next) {
    std::string why;
    auto b = replay(d_, pillows_, moves, why);
    if (!b) throw PathError("detour_rewrite: " + why, i);
    const std::vector<int> d_map = b->tet_map;
    apply(std::move(*b), moves);
    reseed(i, o_map, std::move(o_next), d_map);
  }

  void reseed(int i, const std::vector<int>& o_map, Triangulation o_next) {
    reseed(i, o_map, std::move(o_next), last_map_);
  }

  void apply(Batch&& b, const std::vector<ElementaryMove>& moves) {
    cert_.rewritten.moves.insert(cert_.rewritten.moves.end(), moves.begin(), moves.end());
    cert_.min_degrees.insert(cert_.min_degrees.end(), b.mins.begin(), b.mins.end());
    d_ = std::move(b.d);
    pillows_ = std::move(b.pillows);
    last_map_ = std::move(b.tet_map);
  }

  // Rebuilds the embedding of the original state after moves on either
  // side, starting from a tetrahedron that both sides kept.
  void reseed(int i, const std::vector<int>& o_map, Triangulation o_next, const std::vector<int>& d_map) {
    std::vector<int> to_bare = identity_map(d_.size());
    Triangulation bare = d_;
    for (auto it = pillows_.rbegin(); it != pillows_.rend(); ++it) {
      std::vector<int> cut;
      const PillowHandle h = follow_handle(bare, *it, to_bare);
      bare = cut_pillow(bare, h, &cut);
      for (int& t : to_bare)
        if (t >= 0) t = cut[t];
    }
    std::optional<Isomorphism> iso;
    for (std::size_t t = 0; t < o_map.size() && !iso; ++t) {
      const int t2 = o_map[t];
      const int u = d_map[emb_tet_[t]];
      if (t2 < 0 || u < 0 || to_bare[u] < 0) continue;
      iso = isomorphism_from(o_next, bare, t2, to_bare[u], emb_perm_[t]);
    }
    if (!iso) iso = find_isomorphism(o_next, bare);
    if (!iso) throw PathError("detour_rewrite: the detour state no longer matches the original path", i);
    std::vector<int> from_bare(bare.size(), -1);
    for (int t = 0; t < static_cast<int>(to_bare.size()); ++t)
      if (to_bare[t] >= 0) from_bare[to_bare[t]] = t;
    o_ = std::move(o_next);
    emb_tet_.assign(o_.size(), -1);
    emb_perm_.assign(o_.size(), Perm());
    for (int t = 0; t < o_.size(); ++t) {
      emb_tet_[t] = from_bare[iso->tet_map[t]];
      emb_perm_[t] = iso->perms[t];
    }
  }

  // The edge class of the original state under a pillow's 8-edge.
  int protected_edge(const PillowHandle& h) const {
    const Gluing& g = d_.gluing(h.tets[0], h.perms[0][kPillowFaceA.face]);
    const int a = g.perm[h.perms[0][1]], b = g.perm[h.perms[0][3]];
    const auto it = std::find(emb_tet_.begin(), emb_tet_.end(), g.tet);
    const int t = static_cast<int>(it - emb_tet_.begin());
    const Perm back = emb_perm_[t].inverse();
    return Skeleton(o_).edge_of(t, edge_number(back[a], back[b]));
  }

  Triangulation o_;
  Triangulation d_;
  std::vector<int> emb_tet_;  // original tetrahedron -> detour tetrahedron
  std::vector<Perm> emb_perm_;
  std::vector<PillowHandle> pillows_;
  std::vector<int> last_map_;
  DetourCertificate cert_;
  const DetourOptions& options_;
};

}  // namespace

DetourCertificate detour_rewrite(const MovePath& path, const DetourOptions& options) {
  const std::vector<Triangulation> states = apply_path(path);
  const Triangulation& start = states.front();
  const Triangulation& end = states.back();
  if (!Skeleton(start).degree_one_edges().empty())
    throw PreconditionError("detour_rewrite: the path starts at a triangulation with a degree-one edge");
  if (!Skeleton(end).degree_one_edges().empty())
    throw PreconditionError("detour_rewrite: the path ends at a triangulation with a degree-one edge");
  bool any = false;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (detect_l41_exceptional(states[i]))
      throw L41Exception("detour_rewrite: state " + std::to_string(i) + " is an L(4,1) stack");
    any = any || !Skeleton(states[i]).degree_one_edges().empty();
  }

  const int n = static_cast<int>(path.moves.size());
  if (!any) {
    DetourCertificate cert{path, {}, {iso_signature(start), iso_signature(end)}, {}};
    for (const Triangulation& s : states) cert.min_degrees.push_back(Skeleton(s).min_degree());
    if (options.progress) options.progress(n, n);
    return cert;
  }

  Rewriter rw(start, options);
  for (int i = 0; i < n; ++i) {
    try {
      rw.step(i, path.moves[i]);
    } catch (const PathError&) {
      throw;
    } catch (const L41Exception&) {
      throw;
    } catch (const UnsupportedDegeneracy&) {
      throw;
    } catch (const PreconditionError& e) {
      // Anything else is a bug in the rewriting, reported with its step.
      throw PathError(std::string("detour_rewrite: internal: ") + e.what(), i);
    }
    if (options.progress) options.progress(i + 1, n);
  }
  DetourCertificate cert = rw.finish(n, end);
  cert.endpoint_sigs = {iso_signature(start), iso_signature(end)};
  return cert;
}

void write_sidecar(std::ostream& out, const DetourCertificate& cert) {
  out << "start " << cert.endpoint_sigs.first.text << "\n";
  out << "end " << cert.endpoint_sigs.second.text << "\n";
  out << "moves " << cert.rewritten.moves.size() << "\n";
  for (const DetourEvent& ev : cert.events)
    out << (ev.kind == DetourEvent::Kind::insert ? "insert" : "remove") << " step " << ev.original_step << " at "
        << ev.rewritten_at << " edge " << ev.edge << "\n";
  out << "states " << cert.min_degrees.size() << "\n";
  for (std::size_t i = 0; i < cert.min_degrees.size(); ++i) out << i << " " << cert.min_degrees[i] << "\n";
}

}  // namespace pachner
