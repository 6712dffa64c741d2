#pragma once
//
// Abstract simplicial complexes: faces, attachments, orientation indices,
// skeleta, nerves of covers, and edge-path distances.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace sheaflab {

using VertexId = int;

// A face: a non-empty set of vertices, stored in strictly increasing order.
// Input lists are canonicalized (sorted, duplicates dropped).
class Face {
 public:
  Face(std::initializer_list<VertexId> ids) : Face(std::vector<VertexId>(ids)) {}

  explicit Face(std::vector<VertexId> ids) : vertices_(std::move(ids)) {
    if (vertices_.empty()) throw InvalidFaceError("face must have at least one vertex");
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
  }

  int dimension() const { return static_cast<int>(vertices_.size()) - 1; }
  std::size_t size() const { return vertices_.size(); }
  VertexId operator[](std::size_t i) const { return vertices_[i]; }
  const std::vector<VertexId>& vertices() const { return vertices_; }

  auto begin() const { return vertices_.begin(); }
  auto end() const { return vertices_.end(); }

  bool contains_vertex(VertexId v) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), v);
  }

  // True iff this face's vertex set contains other's (not necessarily properly).
  bool contains(const Face& other) const {
    return std::includes(vertices_.begin(), vertices_.end(), other.vertices_.begin(),
                         other.vertices_.end());
  }

  friend bool operator==(const Face& a, const Face& b) = default;
  friend auto operator<=>(const Face& a, const Face& b) = default;

  std::string to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (i) os << ',';
      os << vertices_[i];
    }
    os << '}';
    return os.str();
  }

 private:
  std::vector<VertexId> vertices_;
};

// Orientation index [b:a]: when a is b minus its j-th vertex (0-based), the
// sign is (-1)^j; in every other case 0.  Total function, complex-independent.
inline int orientation_index(const Face& b, const Face& a) {
  if (a.size() + 1 != b.size()) return 0;
  int omitted = -1;
  std::size_t ia = 0;
  for (std::size_t ib = 0; ib < b.size(); ++ib) {
    if (ia < a.size() && a[ia] == b[ib]) {
      ++ia;
    } else if (omitted < 0) {
      omitted = static_cast<int>(ib);
    } else {
      return 0;  // two vertices of b missing from a
    }
  }
  if (ia != a.size()) return 0;  // a has a vertex outside b
  return (omitted % 2 == 0) ? 1 : -1;
}

// Finite abstract simplicial complex.  Immutable; faces are grouped by
// dimension and sorted, so every derived matrix has one deterministic layout.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  // Smallest complex containing each input list as a face.  Input lists are
  // canonicalized; subset closure is generated.
  static SimplicialComplex from_maximal_faces(const std::vector<std::vector<VertexId>>& faces) {
    std::set<Face> all;
    for (const auto& ids : faces) {
      Face f(ids);  // throws InvalidFaceError on empty input
      const auto& v = f.vertices();
      const std::size_t n = v.size();
      for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
        std::vector<VertexId> sub;
        for (std::size_t i = 0; i < n; ++i)
          if (mask & (std::uint64_t(1) << i)) sub.push_back(v[i]);
        all.insert(Face(std::move(sub)));
      }
    }
    return SimplicialComplex(std::move(all));
  }

  static SimplicialComplex from_faces(std::set<Face> faces) {
    // Explicit face sets must already be closed.
    for (const auto& f : faces) {
      const auto& v = f.vertices();
      for (std::size_t omit = 0; omit < v.size() && v.size() > 1; ++omit) {
        std::vector<VertexId> sub;
        for (std::size_t i = 0; i < v.size(); ++i)
          if (i != omit) sub.push_back(v[i]);
        if (!faces.count(Face(std::move(sub))))
          throw NotClosedError("face set is not closed under subsets at " + f.to_string());
      }
    }
    return SimplicialComplex(std::move(faces));
  }

  // Max face dimension; -1 for the empty complex.
  int dimension() const { return static_cast<int>(levels_.size()) - 1; }

  std::size_t face_count() const {
    std::size_t n = 0;
    for (const auto& l : levels_) n += l.size();
    return n;
  }

  bool has_face(const Face& f) const { return index_.count(f) > 0; }

  // All k-faces, sorted lexicographically by vertex list.
  const std::vector<Face>& faces(int k) const {
    static const std::vector<Face> empty;
    if (k < 0 || k >= static_cast<int>(levels_.size())) return empty;
    return levels_[k];
  }

  std::vector<Face> all_faces() const {
    std::vector<Face> out;
    for (const auto& l : levels_) out.insert(out.end(), l.begin(), l.end());
    return out;
  }

  // Faces not properly contained in any other face; they regenerate the
  // complex through from_maximal_faces.
  std::vector<Face> maximal_faces() const {
    std::vector<Face> out;
    for (int k = 0; k < static_cast<int>(levels_.size()); ++k) {
      for (const Face& f : levels_[k]) {
        bool covered = false;
        for (const Face& g : faces(k + 1))
          if (g.contains(f)) {
            covered = true;
            break;
          }
        if (!covered) out.push_back(f);
      }
    }
    return out;
  }

  // Position of f among the faces of its dimension.
  int face_index(const Face& f) const {
    auto it = index_.find(f);
    if (it == index_.end()) throw UnknownFaceError("unknown face " + f.to_string());
    return it->second;
  }

  // a is attached to b iff a's vertex set is a proper subset of b's.
  bool attached(const Face& a, const Face& b) const {
    if (!has_face(a)) throw UnknownFaceError("unknown face " + a.to_string());
    if (!has_face(b)) throw UnknownFaceError("unknown face " + b.to_string());
    return a.size() < b.size() && b.contains(a);
  }

  // Codimension-1 attachment pairs (a, b), a in level k, b in level k+1.
  std::vector<std::pair<Face, Face>> attachments(int k) const {
    std::vector<std::pair<Face, Face>> out;
    for (const Face& b : faces(k + 1))
      for (const Face& a : proper_subfaces(b, k)) out.emplace_back(a, b);
    return out;
  }

  // The codimension-c faces of b obtained by deleting vertices (all in the
  // complex by closure).
  std::vector<Face> proper_subfaces(const Face& b, int target_dim) const {
    std::vector<Face> out;
    if (target_dim < 0 || target_dim >= b.dimension()) return out;
    const auto& v = b.vertices();
    const std::size_t keep = static_cast<std::size_t>(target_dim) + 1;
    std::vector<std::size_t> pick(keep);
    // enumerate keep-subsets of v in lexicographic order
    for (std::size_t i = 0; i < keep; ++i) pick[i] = i;
    while (true) {
      std::vector<VertexId> sub;
      for (std::size_t i : pick) sub.push_back(v[i]);
      out.emplace_back(std::move(sub));
      // next combination
      std::size_t i = keep;
      while (i > 0 && pick[i - 1] == v.size() - keep + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < keep; ++j) pick[j] = pick[j - 1] + 1;
    }
    return out;
  }

  std::vector<VertexId> vertex_ids() const {
    std::vector<VertexId> out;
    for (const Face& f : faces(0)) out.push_back(f[0]);
    return out;
  }

  bool has_vertex(VertexId v) const { return index_.count(Face{v}) > 0; }

  // Edges containing v, in sorted face order (the deterministic numbering
  // restriction formulas rely on).
  std::vector<Face> incident_edges(VertexId v) const {
    std::vector<Face> out;
    for (const Face& e : faces(1))
      if (e.contains_vertex(v)) out.push_back(e);
    return out;
  }

  int degree(VertexId v) const { return static_cast<int>(adjacency_of(v).size()); }

  // Subcomplex of all faces of dimension <= k.
  SimplicialComplex skeleton(int k) const {
    std::set<Face> kept;
    for (int d = 0; d <= k && d < static_cast<int>(levels_.size()); ++d)
      kept.insert(levels_[d].begin(), levels_[d].end());
    return SimplicialComplex(std::move(kept));
  }

  // True iff every subset of every member face is itself a member.
  bool is_closed_subset(const std::set<Face>& faces) const {
    for (const Face& f : faces) {
      if (!has_face(f)) return false;
      const auto& v = f.vertices();
      for (std::size_t omit = 0; omit < v.size() && v.size() > 1; ++omit) {
        std::vector<VertexId> sub;
        for (std::size_t i = 0; i < v.size(); ++i)
          if (i != omit) sub.push_back(v[i]);
        if (!faces.count(Face(std::move(sub)))) return false;
      }
    }
    return true;
  }

  // Fewest edges in a 1-skeleton path from v to w; nullopt when disconnected.
  std::optional<int> edge_distance(VertexId v, VertexId w) const {
    require_vertex(v);
    require_vertex(w);
    if (v == w) return 0;
    std::map<VertexId, int> dist;
    dist[v] = 0;
    std::queue<VertexId> q;
    q.push(v);
    while (!q.empty()) {
      VertexId u = q.front();
      q.pop();
      for (VertexId x : adjacency_of(u)) {
        if (dist.count(x)) continue;
        dist[x] = dist[u] + 1;
        if (x == w) return dist[x];
        q.push(x);
      }
    }
    return std::nullopt;
  }

  // med(Y): max over vertices of the min distance to Y.  Empty Y or any
  // unreachable vertex gives infinity (nullopt).
  std::optional<int> max_edge_distance(const std::set<VertexId>& y) const {
    if (y.empty()) return std::nullopt;
    std::map<VertexId, int> dist;
    std::queue<VertexId> q;
    for (VertexId s : y) {
      require_vertex(s);
      dist[s] = 0;
      q.push(s);
    }
    while (!q.empty()) {
      VertexId u = q.front();
      q.pop();
      for (VertexId x : adjacency_of(u)) {
        if (dist.count(x)) continue;
        dist[x] = dist[u] + 1;
        q.push(x);
      }
    }
    int worst = 0;
    for (const Face& f : faces(0)) {
      auto it = dist.find(f[0]);
      if (it == dist.end()) return std::nullopt;
      worst = std::max(worst, it->second);
    }
    return worst;
  }

  friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
    return a.levels_ == b.levels_;
  }

 private:
  explicit SimplicialComplex(std::set<Face> faces) {
    for (const Face& f : faces) {
      const int d = f.dimension();
      if (static_cast<int>(levels_.size()) <= d) levels_.resize(d + 1);
      levels_[d].push_back(f);
    }
    for (auto& l : levels_) {
      std::sort(l.begin(), l.end());
      for (std::size_t i = 0; i < l.size(); ++i) index_[l[i]] = static_cast<int>(i);
    }
    for (const Face& e : this->faces(1)) {
      adjacency_[e[0]].push_back(e[1]);
      adjacency_[e[1]].push_back(e[0]);
    }
    for (auto& [v, nb] : adjacency_) std::sort(nb.begin(), nb.end());
  }

  void require_vertex(VertexId v) const {
    if (!has_vertex(v)) throw UnknownFaceError("unknown vertex {" + std::to_string(v) + "}");
  }

  const std::vector<VertexId>& adjacency_of(VertexId v) const {
    static const std::vector<VertexId> none;
    auto it = adjacency_.find(v);
    return it == adjacency_.end() ? none : it->second;
  }

  std::vector<std::vector<Face>> levels_;
  std::map<Face, int> index_;
  std::map<VertexId, std::vector<VertexId>> adjacency_;
};

// A cover: labeled non-empty sets of opaque point ids.
class Cover {
 public:
  using PointSet = std::set<int>;

  void add(std::string label, PointSet points) {
    if (points.empty()) throw InvalidFaceError("cover set '" + label + "' is empty");
    for (const auto& [l, _] : sets_)
      if (l == label) throw InvalidFaceError("duplicate cover label '" + label + "'");
    sets_.emplace_back(std::move(label), std::move(points));
  }

  std::size_t size() const { return sets_.size(); }
  const std::string& label(std::size_t i) const { return sets_[i].first; }
  const PointSet& points(std::size_t i) const { return sets_[i].second; }

 private:
  std::vector<std::pair<std::string, PointSet>> sets_;
};

// Nerve of a cover: one vertex per cover set, one k-face per non-empty
// (k+1)-fold intersection.  Grown level by level; a face is only attempted
// when the sub-face without its largest index had a non-empty intersection.
inline SimplicialComplex nerve(const Cover& cover) {
  if (cover.size() == 0) throw InvalidFaceError("nerve of an empty cover");
  struct Partial {
    std::vector<VertexId> ids;
    Cover::PointSet common;
  };
  std::set<Face> all;
  std::vector<Partial> level;
  for (std::size_t i = 0; i < cover.size(); ++i) {
    level.push_back({{static_cast<VertexId>(i)}, cover.points(i)});
    all.insert(Face{static_cast<VertexId>(i)});
  }
  while (!level.empty()) {
    std::vector<Partial> next;
    for (const Partial& p : level) {
      for (std::size_t j = p.ids.back() + 1; j < cover.size(); ++j) {
        Cover::PointSet meet;
        std::set_intersection(p.common.begin(), p.common.end(), cover.points(j).begin(),
                              cover.points(j).end(), std::inserter(meet, meet.begin()));
        if (meet.empty()) continue;
        Partial q{p.ids, std::move(meet)};
        q.ids.push_back(static_cast<VertexId>(j));
        all.insert(Face(q.ids));
        next.push_back(std::move(q));
      }
    }
    level = std::move(next);
  }
  return SimplicialComplex::from_faces(std::move(all));
}

}  // namespace sheaflab
