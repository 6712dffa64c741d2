#pragma once
//
// Cellular sheaves of finite-dimensional vector spaces on a simplicial
// complex, their cochain complexes, and numerical cohomology.
//
// A sheaf stores one stalk dimension per face and one matrix per
// codimension-1 attachment; higher-codimension restrictions are composites.
// Construction enforces structural completeness (every face has a stalk,
// every attachment a correctly shaped matrix); functoriality is checked
// separately by validate(), which reports violations instead of throwing.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "complex.hpp"
#include "linalg.hpp"

namespace sheaflab {

// One functoriality defect: the two composites a -> via.first -> c and
// a -> via.second -> c disagree by `deviation` (relative, see linalg).
struct SheafViolation {
  Face a;
  std::pair<Face, Face> via;
  Face c;
  double deviation = 0.0;

  std::string describe() const {
    return "composites " + a.to_string() + " -> " + via.first.to_string() + " -> " +
           c.to_string() + " and " + a.to_string() + " -> " + via.second.to_string() + " -> " +
           c.to_string() + " differ by " + std::to_string(deviation);
  }
};

template <class Scalar>
class CellularSheaf {
 public:
  using ScalarType = Scalar;
  using Mat = Matrix<Scalar>;
  using RestrictionKey = std::pair<Face, Face>;  // (from, to), codim 1

  CellularSheaf(SimplicialComplex base, std::map<Face, int> stalk_dims,
                std::map<RestrictionKey, Mat> restrictions)
      : base_(std::move(base)), dims_(std::move(stalk_dims)), maps_(std::move(restrictions)) {
    for (const auto& [f, d] : dims_) {
      if (!base_.has_face(f)) throw UnknownFaceError("stalk on unknown face " + f.to_string());
      if (d < 0) throw ShapeError("negative stalk dimension at " + f.to_string());
    }
    for (const Face& f : base_.all_faces())
      if (!dims_.count(f)) throw ShapeError("missing stalk dimension at " + f.to_string());
    for (const auto& [key, m] : maps_) {
      const auto& [a, b] = key;
      if (!base_.has_face(a) || !base_.has_face(b) || a.dimension() + 1 != b.dimension() ||
          !b.contains(a))
        throw ShapeError("restriction on non-attachment " + a.to_string() + " -> " +
                         b.to_string());
      if (m.rows() != dims_.at(b) || m.cols() != dims_.at(a))
        throw ShapeError("restriction " + a.to_string() + " -> " + b.to_string() +
                         " has shape " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected " + std::to_string(dims_.at(b)) +
                         "x" + std::to_string(dims_.at(a)));
    }
    for (int k = 0; k < base_.dimension(); ++k)
      for (const auto& [a, b] : base_.attachments(k))
        if (!maps_.count({a, b}))
          throw ShapeError("missing restriction " + a.to_string() + " -> " + b.to_string());
  }

  static constexpr ScalarField field() { return ScalarTraits<Scalar>::field; }

  const SimplicialComplex& base() const { return base_; }

  int stalk_dim(const Face& f) const {
    auto it = dims_.find(f);
    if (it == dims_.end()) throw UnknownFaceError("no stalk at " + f.to_string());
    return it->second;
  }

  const std::map<Face, int>& stalk_dims() const { return dims_; }
  const std::map<RestrictionKey, Mat>& restrictions() const { return maps_; }

  // Codimension-1 restriction matrix for a -> b.
  const Mat& restriction(const Face& a, const Face& b) const {
    auto it = maps_.find({a, b});
    if (it == maps_.end())
      throw UnknownFaceError("no restriction " + a.to_string() + " -> " + b.to_string());
    return it->second;
  }

  // Restriction along any attachment a ⊆ b, composed through one chain of
  // codimension-1 steps (functoriality makes the chain irrelevant).
  Mat restriction_composed(const Face& a, const Face& b) const {
    if (a == b) return Mat::Identity(stalk_dim(a), stalk_dim(a));
    if (!b.contains(a))
      throw UnknownFaceError(a.to_string() + " is not attached to " + b.to_string());
    // Walk up one added vertex at a time: a = f_0 ⊂ f_1 ⊂ ... ⊂ f_m = b.
    std::vector<VertexId> extra;
    for (VertexId v : b)
      if (!a.contains_vertex(v)) extra.push_back(v);
    Mat acc = Mat::Identity(stalk_dim(a), stalk_dim(a));
    std::vector<VertexId> cur = a.vertices();
    for (VertexId v : extra) {
      std::vector<VertexId> next = cur;
      next.push_back(v);
      Face from(cur), to(next);
      acc = (restriction(from, to) * acc).eval();
      cur = std::move(next);
    }
    return acc;
  }

 private:
  SimplicialComplex base_;
  std::map<Face, int> dims_;
  std::map<RestrictionKey, Mat> maps_;
};

using RealSheaf = CellularSheaf<double>;
using ComplexSheaf = CellularSheaf<ComplexScalar>;

// Functoriality check: for every codimension-2 attachment a ⊂ c, the two
// composites through the two intermediate faces must agree within tol.
template <class Scalar>
std::vector<SheafViolation> validate(const CellularSheaf<Scalar>& sheaf, double tol = 1e-8) {
  std::vector<SheafViolation> out;
  const SimplicialComplex& x = sheaf.base();
  for (int k = 0; k + 2 <= x.dimension(); ++k) {
    for (const Face& c : x.faces(k + 2)) {
      for (const Face& a : x.proper_subfaces(c, k)) {
        std::vector<Face> mids;
        for (const Face& m : x.proper_subfaces(c, k + 1))
          if (m.contains(a)) mids.push_back(m);
        // exactly two faces sit strictly between a and c
        if (mids.size() != 2) continue;
        const auto left = (sheaf.restriction(mids[0], c) * sheaf.restriction(a, mids[0])).eval();
        const auto right = (sheaf.restriction(mids[1], c) * sheaf.restriction(a, mids[1])).eval();
        const double dev = relative_deviation<Scalar>(left, right);
        if (dev > tol) out.push_back({a, {mids[0], mids[1]}, c, dev});
      }
    }
  }
  return out;
}

// Layout of the degree-k cochain space: one block per k-face, faces in
// sorted order, block offsets cumulative.
struct CochainBlock {
  Face face;
  int offset;
  int dim;
};

struct CochainLayout {
  int degree = 0;
  int total_dim = 0;
  std::vector<CochainBlock> blocks;

  const CochainBlock& block_of(const Face& f) const {
    for (const auto& b : blocks)
      if (b.face == f) return b;
    throw UnknownFaceError("face " + f.to_string() + " not in this cochain space");
  }
};

template <class Scalar>
CochainLayout cochain_space(const CellularSheaf<Scalar>& sheaf, int k) {
  CochainLayout layout;
  layout.degree = k;
  for (const Face& f : sheaf.base().faces(k)) {
    const int d = sheaf.stalk_dim(f);
    layout.blocks.push_back({f, layout.total_dim, d});
    layout.total_dim += d;
  }
  return layout;
}

// Coboundary d^k: C^k -> C^{k+1}, block (b, a) = [b:a] * restriction(a, b).
template <class Scalar>
Matrix<Scalar> coboundary(const CellularSheaf<Scalar>& sheaf, int k) {
  const CochainLayout lower = cochain_space(sheaf, k);
  const CochainLayout upper = cochain_space(sheaf, k + 1);
  Matrix<Scalar> d = Matrix<Scalar>::Zero(upper.total_dim, lower.total_dim);
  for (const CochainBlock& tb : upper.blocks) {
    if (tb.dim == 0) continue;
    for (const CochainBlock& sb : lower.blocks) {
      if (sb.dim == 0) continue;
      const int sign = orientation_index(tb.face, sb.face);
      if (sign == 0) continue;
      d.block(tb.offset, sb.offset, tb.dim, sb.dim) =
          Scalar(sign) * sheaf.restriction(sb.face, tb.face);
    }
  }
  return d;
}

struct CohomologyOptions {
  RankOptions rank;
  // When a rank decision is not trustworthy: throw IllConditionedError
  // (default), or carry on and mark the result.
  bool throw_on_ill_conditioned = true;
};

template <class Scalar>
struct CohomologyResult {
  int degree = 0;
  int dim = 0;
  Matrix<Scalar> basis;       // columns: representatives in C^degree
  double tolerance_used = 0;  // largest absolute singular-value cutoff applied
  bool ill_conditioned = false;
  double min_gap_ratio = kInfiniteGap;
  int rank_d = 0;        // rank of d^degree
  int rank_d_prev = 0;   // rank of d^(degree-1)
  int cochain_dim = 0;   // dim C^degree
};

// H^k = ker d^k / im d^{k-1}; dim via rank-nullity, basis as the part of
// ker d^k orthogonal to im d^{k-1}.  d^{-1} is the zero map from the zero
// space.
template <class Scalar>
CohomologyResult<Scalar> cohomology(const CellularSheaf<Scalar>& sheaf, int k,
                                    const CohomologyOptions& opts = {}) {
  if (k < 0) throw SheafError("cohomology degree must be non-negative");
  CohomologyResult<Scalar> out;
  out.degree = k;
  const Matrix<Scalar> dk = coboundary(sheaf, k);
  out.cochain_dim = static_cast<int>(dk.cols());
  const SvdAnalysis<Scalar> top = analyze(dk, opts.rank);
  out.rank_d = top.rank;
  out.tolerance_used = top.tol_used;
  out.min_gap_ratio = top.gap_ratio;
  out.ill_conditioned = !top.well_conditioned;

  Matrix<Scalar> image(out.cochain_dim, 0);
  if (k > 0) {
    const SvdAnalysis<Scalar> below = analyze(coboundary(sheaf, k - 1), opts.rank);
    out.rank_d_prev = below.rank;
    out.tolerance_used = std::max(out.tolerance_used, below.tol_used);
    out.min_gap_ratio = std::min(out.min_gap_ratio, below.gap_ratio);
    out.ill_conditioned = out.ill_conditioned || !below.well_conditioned;
    image = below.image;
  }
  if (out.ill_conditioned && opts.throw_on_ill_conditioned)
    throw IllConditionedError(
        "rank decision near the tolerance cutoff in degree " + std::to_string(k) +
            " (gap ratio " + std::to_string(out.min_gap_ratio) + ")",
        out.min_gap_ratio);

  out.dim = (out.cochain_dim - out.rank_d) - out.rank_d_prev;
  out.basis = complement_in_kernel(top.kernel, image, opts.rank);
  return out;
}

// A section as an explicit assignment face -> stalk vector.
template <class Scalar>
using Assignment = std::map<Face, Vector<Scalar>>;

template <class Scalar>
struct GlobalSections {
  CohomologyResult<Scalar> h0;
  // One assignment per basis column, extended from vertices to every face
  // through restrictions (well defined by functoriality).
  std::vector<Assignment<Scalar>> sections;
};

template <class Scalar>
GlobalSections<Scalar> global_sections(const CellularSheaf<Scalar>& sheaf,
                                       const CohomologyOptions& opts = {}) {
  GlobalSections<Scalar> out;
  out.h0 = cohomology(sheaf, 0, opts);
  const CochainLayout verts = cochain_space(sheaf, 0);
  for (int col = 0; col < out.h0.dim; ++col) {
    Assignment<Scalar> s;
    for (const CochainBlock& b : verts.blocks)
      s[b.face] = out.h0.basis.col(col).segment(b.offset, b.dim);
    for (int k = 1; k <= sheaf.base().dimension(); ++k) {
      for (const Face& f : sheaf.base().faces(k)) {
        const Face v{f[0]};
        s[f] = sheaf.restriction_composed(v, f) * s.at(v);
      }
    }
    out.sections.push_back(std::move(s));
  }
  return out;
}

// Max over k of the entrywise norm of d^{k+1} d^k, relative to the product
// of the factors' max-entry norms (floored at one).
template <class Scalar>
double d_squared_check(const CellularSheaf<Scalar>& sheaf) {
  double worst = 0.0;
  for (int k = 0; k + 1 <= sheaf.base().dimension(); ++k) {
    const Matrix<Scalar> dk = coboundary(sheaf, k);
    const Matrix<Scalar> dk1 = coboundary(sheaf, k + 1);
    if (dk.size() == 0 || dk1.size() == 0) continue;
    const double scale = std::max(1.0, max_abs(dk1) * max_abs(dk));
    worst = std::max(worst, max_abs<Scalar>((dk1 * dk).eval()) / scale);
  }
  return worst;
}

}  // namespace sheaflab
