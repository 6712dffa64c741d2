#pragma once
//
// Worked sheaf families: constant sheaves, sliding-window grouping sheaves,
// piecewise-linear function sheaves, transmission line sheaves on metric
// graphs, and smooth piecewise-polynomial (spline) sheaves on subdivided
// intervals, plus the closed-form redundancy count for PL sampling.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "morphism.hpp"

namespace sheaflab {

// Path on vertices 0..n-1 with edges {i,i+1}.
inline SimplicialComplex path_complex(int n_vertices) {
  if (n_vertices < 1) throw InvalidFaceError("a path needs at least one vertex");
  std::vector<std::vector<VertexId>> maximal;
  if (n_vertices == 1) maximal.push_back({0});
  for (int i = 0; i + 1 < n_vertices; ++i) maximal.push_back({i, i + 1});
  return SimplicialComplex::from_maximal_faces(maximal);
}

// Cycle on vertices 0..n-1.
inline SimplicialComplex cycle_complex(int n_vertices) {
  if (n_vertices < 3) throw InvalidFaceError("a cycle needs at least three vertices");
  std::vector<std::vector<VertexId>> maximal;
  for (int i = 0; i < n_vertices; ++i) maximal.push_back({i, (i + 1) % n_vertices});
  return SimplicialComplex::from_maximal_faces(maximal);
}

// Star with center 0 and leaves 1..leaves.
inline SimplicialComplex star_complex(int leaves) {
  if (leaves < 1) throw InvalidFaceError("a star needs at least one leaf");
  std::vector<std::vector<VertexId>> maximal;
  for (int i = 1; i <= leaves; ++i) maximal.push_back({0, i});
  return SimplicialComplex::from_maximal_faces(maximal);
}

template <class Scalar = double>
CellularSheaf<Scalar> constant_sheaf(const SimplicialComplex& x, int dim) {
  if (dim < 0) throw ShapeError("constant sheaf dimension must be nonnegative");
  std::map<Face, int> dims;
  for (const Face& f : x.all_faces()) dims[f] = dim;
  std::map<typename CellularSheaf<Scalar>::RestrictionKey, Matrix<Scalar>> maps;
  for (int k = 0; k < x.dimension(); ++k)
    for (const auto& [a, b] : x.attachments(k))
      maps[{a, b}] = Matrix<Scalar>::Identity(dim, dim);
  return CellularSheaf<Scalar>(x, std::move(dims), std::move(maps));
}

// Sliding-window sheaf on a path with `path_vertex_count` vertices: vertex
// stalks hold m consecutive samples from V = R^{v_dim}, edge stalks hold the
// m-1 samples two neighboring windows share.  The left endpoint forgets its
// first sample block, the right endpoint its last.
inline RealSheaf grouping_sheaf(int path_vertex_count, int m, int v_dim) {
  if (path_vertex_count < 2) throw ShapeError("grouping sheaf needs at least two vertices");
  if (m < 1) throw ShapeError("window length must be at least 1");
  if (v_dim < 1) throw ShapeError("sample space dimension must be at least 1");
  const SimplicialComplex x = path_complex(path_vertex_count);
  const int vd = m * v_dim, ed = (m - 1) * v_dim;
  std::map<Face, int> dims;
  for (const Face& f : x.all_faces()) dims[f] = (f.dimension() == 0) ? vd : ed;
  RealMatrix drop_first = RealMatrix::Zero(ed, vd);
  RealMatrix drop_last = RealMatrix::Zero(ed, vd);
  drop_first.rightCols(ed) = RealMatrix::Identity(ed, ed);
  drop_last.leftCols(ed) = RealMatrix::Identity(ed, ed);
  std::map<RealSheaf::RestrictionKey, RealMatrix> maps;
  for (int i = 0; i + 1 < path_vertex_count; ++i) {
    const Face e{i, i + 1};
    maps[{Face{i}, e}] = drop_first;
    maps[{Face{i + 1}, e}] = drop_last;
  }
  return RealSheaf(x, std::move(dims), std::move(maps));
}

// Piecewise-linear function sheaf on a graph.  A vertex stalk records the
// value there plus one slope per incident edge (sorted edge order); an edge
// stalk records (value at the smaller endpoint, slope toward the larger).
// Isolated vertices carry just the value.
inline RealSheaf pl_sheaf(const SimplicialComplex& graph) {
  if (graph.dimension() > 1) throw ShapeError("piecewise-linear sheaves need a graph");
  std::map<Face, int> dims;
  for (const Face& f : graph.all_faces())
    dims[f] = (f.dimension() == 0) ? 1 + graph.degree(f[0]) : 2;
  std::map<RealSheaf::RestrictionKey, RealMatrix> maps;
  for (const Face& e : graph.faces(1)) {
    const VertexId u = e[0], w = e[1];
    const auto slot = [&](VertexId v) {
      const auto edges = graph.incident_edges(v);
      return 1 + static_cast<int>(std::find(edges.begin(), edges.end(), e) - edges.begin());
    };
    RealMatrix from_u = RealMatrix::Zero(2, dims.at(Face{u}));
    from_u(0, 0) = 1.0;
    from_u(1, slot(u)) = 1.0;
    RealMatrix from_w = RealMatrix::Zero(2, dims.at(Face{w}));
    from_w(0, 0) = 1.0;
    from_w(0, slot(w)) = -1.0;  // value at the far end minus the run back
    from_w(1, slot(w)) = 1.0;
    maps[{Face{u}, e}] = std::move(from_u);
    maps[{Face{w}, e}] = std::move(from_w);
  }
  return RealSheaf(graph, std::move(dims), std::move(maps));
}

// A graph with positive edge lengths and a travel direction per edge.  The
// default direction runs from the smaller vertex id to the larger; edges in
// `reversed` run the other way.
class MetricGraph {
 public:
  MetricGraph(SimplicialComplex graph, std::map<Face, double> lengths,
              std::set<Face> reversed = {})
      : graph_(std::move(graph)), lengths_(std::move(lengths)), reversed_(std::move(reversed)) {
    if (graph_.dimension() > 1) throw ShapeError("a metric graph is one-dimensional");
    for (const auto& [e, len] : lengths_) {
      if (!graph_.has_face(e) || e.dimension() != 1)
        throw UnknownFaceError("length assigned to non-edge " + e.to_string());
      if (!(len > 0.0)) throw ShapeError("edge " + e.to_string() + " needs a positive length");
    }
    for (const Face& e : graph_.faces(1))
      if (!lengths_.count(e)) throw ShapeError("edge " + e.to_string() + " has no length");
    for (const Face& e : reversed_)
      if (!graph_.has_face(e) || e.dimension() != 1)
        throw UnknownFaceError("direction flag on non-edge " + e.to_string());
  }

  MetricGraph(SimplicialComplex graph, double uniform_length, std::set<Face> reversed = {})
      : MetricGraph(with_uniform(graph, uniform_length), std::move(reversed)) {}

  const SimplicialComplex& graph() const { return graph_; }
  double length(const Face& e) const { return lengths_.at(e); }
  bool is_reversed(const Face& e) const { return reversed_.count(e) > 0; }
  VertexId initial(const Face& e) const { return is_reversed(e) ? e[1] : e[0]; }
  VertexId terminal(const Face& e) const { return is_reversed(e) ? e[0] : e[1]; }

 private:
  MetricGraph(std::pair<SimplicialComplex, std::map<Face, double>> parts,
              std::set<Face> reversed)
      : MetricGraph(std::move(parts.first), std::move(parts.second), std::move(reversed)) {}

  static std::pair<SimplicialComplex, std::map<Face, double>> with_uniform(
      const SimplicialComplex& graph, double len) {
    std::map<Face, double> lengths;
    for (const Face& e : graph.faces(1)) lengths[e] = len;
    return {graph, std::move(lengths)};
  }

  SimplicialComplex graph_;
  std::map<Face, double> lengths_;
  std::set<Face> reversed_;
};

using Wavenumber = ComplexScalar;

// Waves u(x) = A e^{ikx} + B e^{-ikx} on a metric graph with matched-power
// junctions.  A vertex stalk holds one boundary amplitude per incident edge;
// an edge stalk holds the outgoing amplitudes at its two ends (initial end
// first).  Junction scattering sends amplitudes u to (2/deg) sum(u) - u_e,
// and propagation across a length-L edge multiplies by e^{-ikL}.
inline ComplexSheaf transmission_line_sheaf(const MetricGraph& mg, Wavenumber k) {
  const SimplicialComplex& x = mg.graph();
  for (VertexId v : x.vertex_ids())
    if (x.degree(v) == 0)
      throw IsolatedVertexError("vertex {" + std::to_string(v) +
                                "} has no incident edge to carry a wave");
  std::map<Face, int> dims;
  for (const Face& f : x.all_faces())
    dims[f] = (f.dimension() == 0) ? x.degree(f[0]) : 2;
  std::map<ComplexSheaf::RestrictionKey, ComplexMatrix> maps;
  for (const Face& e : x.faces(1)) {
    for (const VertexId v : {e[0], e[1]}) {
      const auto edges = x.incident_edges(v);
      const int deg = static_cast<int>(edges.size());
      const int slot = static_cast<int>(std::find(edges.begin(), edges.end(), e) -
                                        edges.begin());
      const bool at_initial = (v == mg.initial(e));
      // Forward travel accumulates e^{-ikL}; the reverse direction unwinds it.
      const ComplexScalar phase =
          std::exp(ComplexScalar(0, at_initial ? -1 : 1) * k * mg.length(e));
      ComplexMatrix r = ComplexMatrix::Zero(2, deg);
      const int own_row = at_initial ? 0 : 1;
      const int far_row = 1 - own_row;
      r(own_row, slot) = 1.0;
      // Scattered wave leaving v along e, carried to the far coordinate.
      for (int j = 0; j < deg; ++j)
        r(far_row, j) = phase * (ComplexScalar(2.0 / deg) - ComplexScalar(j == slot ? 1 : 0));
      maps[{Face{v}, e}] = std::move(r);
    }
  }
  return ComplexSheaf(x, std::move(dims), std::move(maps));
}

struct SplineParams {
  int degree = 1;      // polynomial degree n >= 1
  double spacing = 1;  // knot spacing L > 0
};

namespace detail {
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}
}  // namespace detail

// C^{n-1} piecewise polynomial sheaf on a uniformly subdivided interval with
// `path_vertex_count` knots.  A vertex stalk holds Taylor coefficients
// (a_0 .. a_{n-1}, a_n^-, a_n^+): derivatives through order n-1 are shared,
// the top coefficient may jump across the knot.  An edge stalk holds the
// n+1 coefficients of the polynomial on that segment, centered at the
// segment's left knot.
inline RealSheaf spline_sheaf(int path_vertex_count, const SplineParams& params = {}) {
  if (path_vertex_count < 2) throw ShapeError("a spline sheaf needs at least two knots");
  const int n = params.degree;
  const double len = params.spacing;
  if (n < 1) throw ShapeError("spline degree must be at least 1");
  if (!(len > 0.0)) throw ShapeError("knot spacing must be positive");
  const SimplicialComplex x = path_complex(path_vertex_count);
  std::map<Face, int> dims;
  for (const Face& f : x.all_faces()) dims[f] = (f.dimension() == 0) ? n + 2 : n + 1;

  // Left knot: the polynomial to its right is its own Taylor data with the
  // one-sided top coefficient a_n^+.
  RealMatrix from_left = RealMatrix::Zero(n + 1, n + 2);
  for (int r = 0; r < n; ++r) from_left(r, r) = 1.0;
  from_left(n, n + 1) = 1.0;
  // Right knot: recenter its left-side polynomial (top coefficient a_n^-)
  // from the right knot back to the left one, a shift by -L.
  RealMatrix from_right = RealMatrix::Zero(n + 1, n + 2);
  for (int r = 0; r < n; ++r) {
    for (int c = r; c < n; ++c)
      from_right(r, c) = detail::binomial(c, r) * std::pow(-len, c - r);
    from_right(r, n) = detail::binomial(n, r) * std::pow(-len, n - r);
  }
  from_right(n, n) = 1.0;

  std::map<RealSheaf::RestrictionKey, RealMatrix> maps;
  for (int i = 0; i + 1 < path_vertex_count; ++i) {
    maps[{Face{i}, Face{i, i + 1}}] = from_left;
    maps[{Face{i + 1}, Face{i, i + 1}}] = from_right;
  }
  return RealSheaf(x, std::move(dims), std::move(maps));
}

// Closed-form redundancy of piecewise-linear sampling on a vertex set Y
// whose unsampled region is thin (every vertex within edge distance 1 of Y):
// dim H^1 of the ambiguity part equals 2|edges| - sum over unsampled
// vertices of (deg + 1).  Cross-checked against the numerical value.
inline int pl_redundancy_dim(const SimplicialComplex& graph, const std::set<VertexId>& y,
                             const CohomologyOptions& opts = {}) {
  if (graph.dimension() > 1) throw ShapeError("redundancy count needs a graph");
  for (VertexId v : y)
    if (!graph.has_vertex(v))
      throw UnknownFaceError("sample set contains non-vertex {" + std::to_string(v) + "}");
  const std::optional<int> spread = graph.max_edge_distance(y);
  if (!spread.has_value() || *spread > 1)
    throw HypothesisViolatedError(
        "closed form needs every vertex within edge distance 1 of the samples");
  long closed_form = 2L * static_cast<long>(graph.faces(1).size());
  for (VertexId v : graph.vertex_ids())
    if (!y.count(v)) closed_form -= graph.degree(v) + 1;

  std::set<Face> support;
  for (VertexId v : y) support.insert(Face{v});
  const auto parts = restrict_to_subcomplex(pl_sheaf(graph), support);
  const auto h1 = cohomology(parts.quotient, 1, opts);
  if (h1.dim != closed_form)
    throw SheafError("redundancy closed form " + std::to_string(closed_form) +
                     " disagrees with computed dim H^1 = " + std::to_string(h1.dim));
  return static_cast<int>(closed_form);
}

}  // namespace sheaflab
