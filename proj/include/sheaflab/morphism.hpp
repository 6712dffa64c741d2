#pragma once
//
// Simplicial maps, sheaf morphisms, sampling machinery: sampling sheaves,
// ambiguity sheaves, subcomplex restriction (F^Y and its kernel part F_Y),
// the Nyquist-style perfect-sampling check, the obstruction test, induced
// maps on degree-0 cohomology, and exactness bookkeeping.
//
// Orientation note: a morphism m: F -> G along a simplicial map f: X -> Y
// carries F on Y and G on X (the component at a face a of X is a linear map
// F(f(a)) -> G(a); sheaf data flows against the direction of f).

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sheaf.hpp"

namespace sheaflab {

class SimplicialMap {
 public:
  SimplicialMap(SimplicialComplex source, SimplicialComplex target,
                std::map<VertexId, VertexId> vertex_map)
      : source_(std::move(source)), target_(std::move(target)), vmap_(std::move(vertex_map)) {
    for (VertexId v : source_.vertex_ids())
      if (!vmap_.count(v))
        throw UnknownFaceError("vertex {" + std::to_string(v) + "} has no image");
    for (const auto& [v, w] : vmap_) {
      if (!source_.has_vertex(v))
        throw UnknownFaceError("vertex map mentions unknown vertex {" + std::to_string(v) + "}");
      if (!target_.has_vertex(w))
        throw UnknownFaceError("vertex {" + std::to_string(v) + "} maps outside the target");
    }
    // Images of faces must be faces; dimension can only drop.
    for (const Face& a : source_.all_faces())
      if (!target_.has_face(image(a)))
        throw UnknownFaceError("image of " + a.to_string() + " is not a face of the target");
  }

  static SimplicialMap identity(const SimplicialComplex& x) {
    std::map<VertexId, VertexId> id;
    for (VertexId v : x.vertex_ids()) id[v] = v;
    return SimplicialMap(x, x, std::move(id));
  }

  const SimplicialComplex& source() const { return source_; }
  const SimplicialComplex& target() const { return target_; }

  VertexId map_vertex(VertexId v) const {
    auto it = vmap_.find(v);
    if (it == vmap_.end())
      throw UnknownFaceError("vertex {" + std::to_string(v) + "} has no image");
    return it->second;
  }

  Face image(const Face& a) const {
    std::vector<VertexId> ids;
    for (VertexId v : a) ids.push_back(map_vertex(v));
    return Face(std::move(ids));
  }

  bool is_identity() const {
    if (!(source_ == target_)) return false;
    for (const auto& [v, w] : vmap_)
      if (v != w) return false;
    return true;
  }

 private:
  SimplicialComplex source_, target_;
  std::map<VertexId, VertexId> vmap_;
};

// One failed commuting square: along the attachment a -> b, the composites
// through m_b and m_a disagree by `deviation`.
struct MorphismViolation {
  Face a;
  Face b;
  double deviation = 0.0;

  std::string describe() const {
    return "square at " + a.to_string() + " -> " + b.to_string() + " fails to commute by " +
           std::to_string(deviation);
  }
};

template <class Scalar>
class SheafMorphism {
 public:
  using Mat = Matrix<Scalar>;

  SheafMorphism(SimplicialMap along, CellularSheaf<Scalar> source_sheaf,
                CellularSheaf<Scalar> dest_sheaf, std::map<Face, Mat> components)
      : along_(std::move(along)),
        source_(std::move(source_sheaf)),
        dest_(std::move(dest_sheaf)),
        components_(std::move(components)) {
    if (!(source_.base() == along_.target()))
      throw ShapeError("source sheaf does not live on the map's target complex");
    if (!(dest_.base() == along_.source()))
      throw ShapeError("destination sheaf does not live on the map's source complex");
    for (const Face& a : along_.source().all_faces()) {
      auto it = components_.find(a);
      if (it == components_.end())
        throw ShapeError("missing morphism component at " + a.to_string());
      const Face fa = along_.image(a);
      if (it->second.rows() != dest_.stalk_dim(a) ||
          it->second.cols() != source_.stalk_dim(fa))
        throw ShapeError("component at " + a.to_string() + " has shape " +
                         std::to_string(it->second.rows()) + "x" +
                         std::to_string(it->second.cols()) + ", expected " +
                         std::to_string(dest_.stalk_dim(a)) + "x" +
                         std::to_string(source_.stalk_dim(fa)));
    }
    for (const auto& [a, unused] : components_)
      if (!along_.source().has_face(a))
        throw UnknownFaceError("component on unknown face " + a.to_string());
  }

  const SimplicialMap& along() const { return along_; }
  const CellularSheaf<Scalar>& source_sheaf() const { return source_; }
  const CellularSheaf<Scalar>& dest_sheaf() const { return dest_; }

  const Mat& component(const Face& a) const {
    auto it = components_.find(a);
    if (it == components_.end())
      throw UnknownFaceError("no morphism component at " + a.to_string());
    return it->second;
  }

 private:
  SimplicialMap along_;
  CellularSheaf<Scalar> source_;
  CellularSheaf<Scalar> dest_;
  std::map<Face, Mat> components_;
};

// Check every commuting square m_b . F(f(a) -> f(b)) = G(a -> b) . m_a over
// the codimension-1 attachments of the destination complex.  When the map
// collapses an attachment (f(a) = f(b)), the F leg is the identity.
template <class Scalar>
std::vector<MorphismViolation> validate_morphism(const SheafMorphism<Scalar>& m,
                                                 double tol = 1e-8) {
  std::vector<MorphismViolation> out;
  const SimplicialComplex& x = m.along().source();
  for (int k = 0; k < x.dimension(); ++k) {
    for (const auto& [a, b] : x.attachments(k)) {
      const Face fa = m.along().image(a), fb = m.along().image(b);
      const Matrix<Scalar> upper =
          (m.component(b) * m.source_sheaf().restriction_composed(fa, fb)).eval();
      const Matrix<Scalar> lower =
          (m.dest_sheaf().restriction(a, b) * m.component(a)).eval();
      const double dev = relative_deviation<Scalar>(upper, lower);
      if (dev > tol) out.push_back({a, b, dev});
    }
  }
  return out;
}

// Sampling sheaf: chosen stalk dims on the vertices of Y, zero stalks
// everywhere else, all restrictions zero maps.
template <class Scalar = double>
CellularSheaf<Scalar> sampling_sheaf(const SimplicialComplex& x, const std::set<VertexId>& y,
                                     const std::map<VertexId, int>& stalk_dim) {
  std::map<Face, int> dims;
  for (VertexId v : y) {
    if (!x.has_vertex(v))
      throw UnsupportedSupportError("sampling support contains non-vertex {" +
                                    std::to_string(v) + "}");
    auto it = stalk_dim.find(v);
    dims[Face{v}] = (it == stalk_dim.end()) ? 0 : it->second;
  }
  for (const Face& f : x.all_faces())
    if (!dims.count(f)) dims[f] = 0;
  std::map<typename CellularSheaf<Scalar>::RestrictionKey, Matrix<Scalar>> maps;
  for (int k = 0; k < x.dimension(); ++k)
    for (const auto& [a, b] : x.attachments(k))
      maps[{a, b}] = Matrix<Scalar>::Zero(dims.at(b), dims.at(a));
  return CellularSheaf<Scalar>(x, std::move(dims), std::move(maps));
}

template <class Scalar = double>
CellularSheaf<Scalar> sampling_sheaf(const SimplicialComplex& x, const std::set<VertexId>& y,
                                     int stalk_dim) {
  std::map<VertexId, int> dims;
  for (VertexId v : y) dims[v] = stalk_dim;
  return sampling_sheaf<Scalar>(x, y, dims);
}

// True iff m is a sampling morphism: valid, over the identity map, onto a
// sheaf supported on a closed subcomplex, surjective on every stalk.
// Structural failures yield false rather than an error.
template <class Scalar>
bool is_sampling_morphism(const SheafMorphism<Scalar>& m, double tol = 1e-8,
                          const RankOptions& rank_opts = {}) {
  if (!m.along().is_identity()) return false;
  if (!validate_morphism(m, tol).empty()) return false;
  std::set<Face> support;
  for (const Face& f : m.along().source().all_faces())
    if (m.dest_sheaf().stalk_dim(f) > 0) support.insert(f);
  if (!m.along().source().is_closed_subset(support)) return false;
  for (const Face& f : m.along().source().all_faces())
    if (!full_row_rank(m.component(f), rank_opts)) return false;
  return true;
}

// The ambiguity sheaf A of a surjective morphism over the identity map,
// together with the orthonormal embeddings A(a) -> F(a) its stalks were
// built from (the kernel bases of the components).
template <class Scalar>
struct AmbiguityDecomposition {
  CellularSheaf<Scalar> sheaf;
  std::map<Face, Matrix<Scalar>> embeddings;
};

template <class Scalar>
AmbiguityDecomposition<Scalar> ambiguity_decomposition(const SheafMorphism<Scalar>& m,
                                                       const RankOptions& rank_opts = {},
                                                       double kernel_tol = 1e-8) {
  if (!m.along().is_identity())
    throw SheafError("ambiguity sheaves are defined over identity simplicial maps only");
  const SimplicialComplex& x = m.along().source();
  std::map<Face, Matrix<Scalar>> kernels;
  std::map<Face, int> dims;
  for (const Face& a : x.all_faces()) {
    const SvdAnalysis<Scalar> svd = analyze(m.component(a), rank_opts);
    if (svd.rank < m.dest_sheaf().stalk_dim(a))
      throw NotSurjectiveError("component at " + a.to_string() +
                               " is not surjective (rank " + std::to_string(svd.rank) +
                               " of " + std::to_string(m.dest_sheaf().stalk_dim(a)) + ")");
    kernels[a] = svd.kernel;
    dims[a] = static_cast<int>(svd.kernel.cols());
  }
  std::map<typename CellularSheaf<Scalar>::RestrictionKey, Matrix<Scalar>> maps;
  for (int k = 0; k < x.dimension(); ++k) {
    for (const auto& [a, b] : x.attachments(k)) {
      const Matrix<Scalar>& r = m.source_sheaf().restriction(a, b);
      const Matrix<Scalar> ra = (r * kernels.at(a)).eval();
      const Matrix<Scalar> proj = (kernels.at(b).adjoint() * ra).eval();
      // r must carry ker m_a into ker m_b, else m was not a morphism.
      const double residual =
          max_abs<Scalar>((ra - kernels.at(b) * proj).eval()) / std::max(1.0, max_abs(ra));
      if (residual > kernel_tol)
        throw NonInvariantKernelError("restriction " + a.to_string() + " -> " + b.to_string() +
                                      " does not preserve the sampling kernel (residual " +
                                      std::to_string(residual) + ")");
      maps[{a, b}] = proj;
    }
  }
  return {CellularSheaf<Scalar>(x, std::move(dims), std::move(maps)), std::move(kernels)};
}

template <class Scalar>
CellularSheaf<Scalar> ambiguity_sheaf(const SheafMorphism<Scalar>& m,
                                      const RankOptions& rank_opts = {},
                                      double kernel_tol = 1e-8) {
  return ambiguity_decomposition(m, rank_opts, kernel_tol).sheaf;
}

// The canonical surjection F -> F^Y for a closed face set Y: identity
// components on Y, zero elsewhere.
template <class Scalar>
SheafMorphism<Scalar> full_stalk_sampling(const CellularSheaf<Scalar>& f,
                                          const std::set<Face>& y) {
  const SimplicialComplex& x = f.base();
  for (const Face& a : y)
    if (!x.has_face(a)) throw UnknownFaceError("support face " + a.to_string() + " unknown");
  if (!x.is_closed_subset(y))
    throw NotClosedError("support is not a closed subcomplex");
  std::map<Face, int> dims;
  std::map<typename CellularSheaf<Scalar>::RestrictionKey, Matrix<Scalar>> maps;
  for (const Face& a : x.all_faces()) dims[a] = y.count(a) ? f.stalk_dim(a) : 0;
  for (int k = 0; k < x.dimension(); ++k)
    for (const auto& [a, b] : x.attachments(k))
      maps[{a, b}] = (y.count(a) && y.count(b))
                         ? f.restriction(a, b)
                         : Matrix<Scalar>::Zero(dims.at(b), dims.at(a));
  CellularSheaf<Scalar> on_y(x, std::move(dims), std::move(maps));
  std::map<Face, Matrix<Scalar>> components;
  for (const Face& a : x.all_faces()) {
    const int d = f.stalk_dim(a);
    if (y.count(a))
      components[a] = Matrix<Scalar>::Identity(d, d);
    else
      components[a] = Matrix<Scalar>::Zero(0, d);
  }
  return SheafMorphism<Scalar>(SimplicialMap::identity(x), f, std::move(on_y),
                               std::move(components));
}

template <class Scalar>
struct SubcomplexRestriction {
  CellularSheaf<Scalar> on_subcomplex;  // F^Y: F's stalks on Y, zero outside
  CellularSheaf<Scalar> quotient;       // F_Y: kernel of the surjection F -> F^Y
};

// F^Y and F_Y for a closed face set Y.  F_Y is the ambiguity sheaf of the
// canonical surjection; because the components are identities and zero maps,
// its stalks come out exactly as F's stalks off Y and zero on Y.
template <class Scalar>
SubcomplexRestriction<Scalar> restrict_to_subcomplex(const CellularSheaf<Scalar>& f,
                                                     const std::set<Face>& y) {
  SheafMorphism<Scalar> surjection = full_stalk_sampling(f, y);
  CellularSheaf<Scalar> on_y = surjection.dest_sheaf();
  CellularSheaf<Scalar> quotient = ambiguity_decomposition(surjection).sheaf;
  return {std::move(on_y), std::move(quotient)};
}

struct ObstructionReport {
  bool obstructed = false;
  int dim = 0;  // dim H^0(F_Y)
  double tolerance_used = 0.0;
};

// Sampling obstruction: nonzero global sections of F_Y rule out injective
// sampling on Y, whatever the morphism.
template <class Scalar>
ObstructionReport obstruction_check(const CellularSheaf<Scalar>& f, const std::set<VertexId>& y,
                                    const CohomologyOptions& opts = {}) {
  std::set<Face> support;
  for (VertexId v : y) {
    if (!f.base().has_vertex(v))
      throw UnsupportedSupportError("obstruction support contains non-vertex {" +
                                    std::to_string(v) + "}");
    support.insert(Face{v});
  }
  const auto parts = restrict_to_subcomplex(f, support);
  const auto h0 = cohomology(parts.quotient, 0, opts);
  return {h0.dim > 0, h0.dim, h0.tolerance_used};
}

struct SamplingReport {
  int ambiguity_dim = 0;   // dim H^0 of the ambiguity sheaf
  int redundancy_dim = 0;  // dim H^1 of the ambiguity sheaf
  bool perfect = false;
  double tolerance_used = 0.0;
};

// Perfect sampling iff the ambiguity sheaf has vanishing H^0 and H^1.
template <class Scalar>
SamplingReport nyquist_check(const SheafMorphism<Scalar>& m, const CohomologyOptions& opts = {},
                             double kernel_tol = 1e-8) {
  const CellularSheaf<Scalar> a = ambiguity_sheaf(m, opts.rank, kernel_tol);
  const auto h0 = cohomology(a, 0, opts);
  const auto h1 = cohomology(a, 1, opts);
  SamplingReport report;
  report.ambiguity_dim = h0.dim;
  report.redundancy_dim = h1.dim;
  report.perfect = (h0.dim == 0 && h1.dim == 0);
  report.tolerance_used = std::max(h0.tolerance_used, h1.tolerance_used);
  return report;
}

template <class Scalar>
struct InducedH0Map {
  Matrix<Scalar> matrix;  // coordinates: columns index H^0(F) basis, rows H^0(G)
  CohomologyResult<Scalar> domain;
  CohomologyResult<Scalar> codomain;
  int rank = 0;
  bool injective = false;
  bool surjective = false;
  // How far the mapped basis leaves the codomain section space (should be
  // at roundoff for a valid morphism).
  double residual = 0.0;
};

// Induced map H^0(Y;F) -> H^0(X;G) of a morphism along f: X -> Y, computed
// by applying vertex components to section values at image vertices.
template <class Scalar>
InducedH0Map<Scalar> induced_h0_map(const SheafMorphism<Scalar>& m,
                                    const CohomologyOptions& opts = {}) {
  InducedH0Map<Scalar> out;
  out.domain = cohomology(m.source_sheaf(), 0, opts);
  out.codomain = cohomology(m.dest_sheaf(), 0, opts);
  const CochainLayout source_layout = cochain_space(m.source_sheaf(), 0);
  const CochainLayout dest_layout = cochain_space(m.dest_sheaf(), 0);
  Matrix<Scalar> cochain_map = Matrix<Scalar>::Zero(dest_layout.total_dim,
                                                    source_layout.total_dim);
  for (const CochainBlock& db : dest_layout.blocks) {
    if (db.dim == 0) continue;
    const Face image = m.along().image(db.face);
    const CochainBlock& sb = source_layout.block_of(image);
    if (sb.dim == 0) continue;
    cochain_map.block(db.offset, sb.offset, db.dim, sb.dim) = m.component(db.face);
  }
  const Matrix<Scalar> mapped = (cochain_map * out.domain.basis).eval();
  out.matrix = (out.codomain.basis.adjoint() * mapped).eval();
  out.residual = max_abs<Scalar>((mapped - out.codomain.basis * out.matrix).eval()) /
                 std::max(1.0, max_abs(mapped));
  out.rank = analyze(out.matrix, opts.rank).rank;
  out.injective = (out.rank == out.domain.dim);
  out.surjective = (out.rank == out.codomain.dim);
  return out;
}

struct EulerCheck {
  long cochain_deviation = 0;     // chi(F) - chi(A) - chi(S), exact integers
  long cohomology_deviation = 0;  // alternating sum of H^k dims, same split
};

// Exactness bookkeeping for a sampling morphism: stalkwise rank-nullity
// forces the cochain Euler characteristics to split exactly, and the long
// exact sequence forces the same alternating balance on cohomology.
template <class Scalar>
EulerCheck euler_check(const SheafMorphism<Scalar>& m, const CohomologyOptions& opts = {}) {
  const CellularSheaf<Scalar> a = ambiguity_sheaf(m, opts.rank);
  const CellularSheaf<Scalar>& f = m.source_sheaf();
  const CellularSheaf<Scalar>& s = m.dest_sheaf();
  EulerCheck out;
  const int top = f.base().dimension();
  for (int k = 0; k <= top; ++k) {
    const long sign = (k % 2 == 0) ? 1 : -1;
    out.cochain_deviation += sign * (cochain_space(f, k).total_dim -
                                     cochain_space(a, k).total_dim -
                                     cochain_space(s, k).total_dim);
    out.cohomology_deviation += sign * (cohomology(f, k, opts).dim -
                                        cohomology(a, k, opts).dim -
                                        cohomology(s, k, opts).dim);
  }
  return out;
}

}  // namespace sheaflab
