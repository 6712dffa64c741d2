// JSON interchange format for complexes, sheaves, morphisms, and sampling
// supports.  One document holds one complex (as maximal faces) plus optional
// blocks; every face a block mentions must lie in the closure of the maximal
// faces, and matrix entries are always [re, im] pairs regardless of field.

#pragma once

#include <json.hpp>

#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sheaflab/complex.hpp"
#include "sheaflab/errors.hpp"
#include "sheaflab/morphism.hpp"
#include "sheaflab/sheaf.hpp"
#include "sheaflab/zoo.hpp"

namespace sheaflab {

inline constexpr const char* kFormatVersion = "1";

// Sheaf data as stored: matrices kept complex-valued, the field tag deciding
// how they may be converted.
struct DocumentSheaf {
  ScalarField field = ScalarField::real;
  std::map<Face, int> stalks;
  std::map<std::pair<Face, Face>, ComplexMatrix> restrictions;
};

struct DocumentMorphism {
  std::map<VertexId, VertexId> vertex_map;
  std::map<Face, ComplexMatrix> components;
};

struct InterchangeDocument {
  std::vector<std::vector<VertexId>> maximal_faces;
  std::map<Face, double> edge_lengths;  // empty: no metric block
  std::set<Face> reversed_edges;
  std::optional<DocumentSheaf> sheaf;
  std::optional<DocumentMorphism> morphism;
  std::optional<std::vector<VertexId>> sample_support;

  SimplicialComplex complex() const {
    return SimplicialComplex::from_maximal_faces(maximal_faces);
  }
};

namespace io_detail {

using json = nlohmann::ordered_json;

inline bool matrices_equal(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.size() == 0) return true;
  return (a.array() == b.array()).all();
}

inline std::pair<int, int> line_col_of(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  const std::size_t stop = byte > 0 ? byte - 1 : 0;
  for (std::size_t i = 0; i < stop && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + ": missing required member \"" + key + "\"");
  return *it;
}

inline int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path + ": expected an integer");
  return j.get<int>();
}

inline double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  return j.get<double>();
}

inline Face as_face(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ParseError(path + ": expected a non-empty vertex array");
  std::vector<VertexId> vs;
  for (std::size_t i = 0; i < j.size(); ++i)
    vs.push_back(as_int(j[i], path + "[" + std::to_string(i) + "]"));
  try {
    return Face(vs);
  } catch (const InvalidFaceError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline Face known_face(const json& j, const SimplicialComplex& x, const std::string& path) {
  Face f = as_face(j, path);
  if (!x.has_face(f))
    throw ParseError(path + ": face " + f.to_string() + " is not in the complex closure");
  return f;
}

inline json face_to_json(const Face& f) { return json(f.vertices()); }

// Row-major [re, im] entries with explicit dimensions.
inline json matrix_to_json(const ComplexMatrix& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      data.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
  return data;
}

inline ComplexMatrix matrix_from_json(const json& entry, bool real_field,
                                      const std::string& path) {
  const int rows = as_int(member(entry, "rows", path), path + ".rows");
  const int cols = as_int(member(entry, "cols", path), path + ".cols");
  if (rows < 0 || cols < 0) throw ParseError(path + ": negative matrix dimension");
  const json& data = member(entry, "data", path);
  if (!data.is_array()) throw ParseError(path + ".data: expected an array");
  if (static_cast<long long>(data.size()) != static_cast<long long>(rows) * cols)
    throw ParseError(path + ".data: expected " + std::to_string(rows) + "x" +
                     std::to_string(cols) + " = " + std::to_string(rows * cols) +
                     " entries, got " + std::to_string(data.size()));
  ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const json& cell = data[static_cast<std::size_t>(r) * cols + c];
      const std::string cell_path =
          path + ".data[" + std::to_string(r * cols + c) + "]";
      if (!cell.is_array() || cell.size() != 2)
        throw ParseError(cell_path + ": expected an [re, im] pair");
      const double re = as_number(cell[0], cell_path + "[0]");
      const double im = as_number(cell[1], cell_path + "[1]");
      if (real_field && im != 0.0)
        throw ParseError(cell_path + ": nonzero imaginary part in a real-field document");
      m(r, c) = ComplexScalar(re, im);
    }
  }
  return m;
}

template <class Scalar>
Matrix<Scalar> narrow_matrix(const ComplexMatrix& m);

template <>
inline Matrix<double> narrow_matrix<double>(const ComplexMatrix& m) {
  return m.real();
}

template <>
inline Matrix<ComplexScalar> narrow_matrix<ComplexScalar>(const ComplexMatrix& m) {
  return m;
}

template <class Scalar>
ComplexMatrix widen_matrix(const Matrix<Scalar>& m) {
  return m.template cast<ComplexScalar>();
}

}  // namespace io_detail

inline bool operator==(const DocumentSheaf& a, const DocumentSheaf& b) {
  if (a.field != b.field || a.stalks != b.stalks) return false;
  if (a.restrictions.size() != b.restrictions.size()) return false;
  for (const auto& [key, m] : a.restrictions) {
    auto it = b.restrictions.find(key);
    if (it == b.restrictions.end() || !io_detail::matrices_equal(m, it->second)) return false;
  }
  return true;
}

inline bool operator==(const DocumentMorphism& a, const DocumentMorphism& b) {
  if (a.vertex_map != b.vertex_map) return false;
  if (a.components.size() != b.components.size()) return false;
  for (const auto& [face, m] : a.components) {
    auto it = b.components.find(face);
    if (it == b.components.end() || !io_detail::matrices_equal(m, it->second)) return false;
  }
  return true;
}

inline bool operator==(const InterchangeDocument& a, const InterchangeDocument& b) {
  return a.maximal_faces == b.maximal_faces && a.edge_lengths == b.edge_lengths &&
         a.reversed_edges == b.reversed_edges && a.sheaf == b.sheaf &&
         a.morphism == b.morphism && a.sample_support == b.sample_support;
}

inline std::string to_json_text(const InterchangeDocument& doc, int indent = 2) {
  using io_detail::json;
  json out;
  out["version"] = kFormatVersion;
  json maximal = json::array();
  for (const auto& vs : doc.maximal_faces) maximal.push_back(json(vs));
  out["complex"] = json{{"maximal_faces", std::move(maximal)}};
  if (!doc.edge_lengths.empty()) {
    json lengths = json::array();
    for (const auto& [e, len] : doc.edge_lengths)
      lengths.push_back(json{{"edge", io_detail::face_to_json(e)}, {"length", len}});
    json metric{{"edge_lengths", std::move(lengths)}};
    if (!doc.reversed_edges.empty()) {
      json reversed = json::array();
      for (const Face& e : doc.reversed_edges) reversed.push_back(io_detail::face_to_json(e));
      metric["reversed_edges"] = std::move(reversed);
    }
    out["metric"] = std::move(metric);
  }
  if (doc.sheaf) {
    json stalks = json::array();
    for (const auto& [f, dim] : doc.sheaf->stalks)
      stalks.push_back(json{{"face", io_detail::face_to_json(f)}, {"dim", dim}});
    json restrictions = json::array();
    for (const auto& [key, m] : doc.sheaf->restrictions)
      restrictions.push_back(json{{"from", io_detail::face_to_json(key.first)},
                                  {"to", io_detail::face_to_json(key.second)},
                                  {"rows", static_cast<int>(m.rows())},
                                  {"cols", static_cast<int>(m.cols())},
                                  {"data", io_detail::matrix_to_json(m)}});
    out["sheaf"] = json{{"field", doc.sheaf->field == ScalarField::real ? "real" : "complex"},
                        {"stalks", std::move(stalks)},
                        {"restrictions", std::move(restrictions)}};
  }
  if (doc.morphism) {
    json vertex_map = json::array();
    for (const auto& [from, to] : doc.morphism->vertex_map)
      vertex_map.push_back(json::array({from, to}));
    json components = json::array();
    for (const auto& [f, m] : doc.morphism->components)
      components.push_back(json{{"face", io_detail::face_to_json(f)},
                                {"rows", static_cast<int>(m.rows())},
                                {"cols", static_cast<int>(m.cols())},
                                {"data", io_detail::matrix_to_json(m)}});
    out["morphism"] =
        json{{"vertex_map", std::move(vertex_map)}, {"components", std::move(components)}};
  }
  if (doc.sample_support) out["sample_support"] = json(*doc.sample_support);
  return out.dump(indent) + "\n";
}

inline InterchangeDocument document_from_json_text(const std::string& text) {
  using io_detail::json;
  using io_detail::member;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = io_detail::line_col_of(text, e.byte);
    std::string what = e.what();
    // nlohmann prefixes "[json.exception.parse_error.101] parse error at ...";
    // keep the human half.
    const auto pos = what.find("] ");
    if (pos != std::string::npos) what = what.substr(pos + 2);
    throw ParseError(what, line, col);
  }
  if (!root.is_object()) throw ParseError("document: expected a JSON object");
  const json& version = member(root, "version", "document");
  if (!version.is_string() || version.get<std::string>() != kFormatVersion)
    throw ParseError("document.version: unsupported version (expected \"" +
                     std::string(kFormatVersion) + "\")");

  InterchangeDocument doc;
  const json& maximal = member(member(root, "complex", "document"), "maximal_faces",
                               "document.complex");
  if (!maximal.is_array()) throw ParseError("document.complex.maximal_faces: expected an array");
  for (std::size_t i = 0; i < maximal.size(); ++i) {
    const std::string path = "document.complex.maximal_faces[" + std::to_string(i) + "]";
    doc.maximal_faces.push_back(io_detail::as_face(maximal[i], path).vertices());
  }
  SimplicialComplex x = doc.complex();

  if (root.contains("metric")) {
    const json& metric = root["metric"];
    const json& lengths = member(metric, "edge_lengths", "document.metric");
    if (!lengths.is_array())
      throw ParseError("document.metric.edge_lengths: expected an array");
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      const std::string path = "document.metric.edge_lengths[" + std::to_string(i) + "]";
      const Face e = io_detail::known_face(member(lengths[i], "edge", path), x, path + ".edge");
      if (e.dimension() != 1) throw ParseError(path + ".edge: " + e.to_string() + " is not an edge");
      if (doc.edge_lengths.count(e))
        throw ParseError(path + ": duplicate length for edge " + e.to_string());
      doc.edge_lengths[e] = io_detail::as_number(member(lengths[i], "length", path),
                                                 path + ".length");
    }
    if (metric.contains("reversed_edges")) {
      const json& reversed = metric["reversed_edges"];
      if (!reversed.is_array())
        throw ParseError("document.metric.reversed_edges: expected an array");
      for (std::size_t i = 0; i < reversed.size(); ++i) {
        const std::string path = "document.metric.reversed_edges[" + std::to_string(i) + "]";
        const Face e = io_detail::known_face(reversed[i], x, path);
        if (e.dimension() != 1) throw ParseError(path + ": " + e.to_string() + " is not an edge");
        doc.reversed_edges.insert(e);
      }
    }
  }

  if (root.contains("sheaf")) {
    const json& sheaf = root["sheaf"];
    DocumentSheaf ds;
    const json& field = member(sheaf, "field", "document.sheaf");
    if (field == "real")
      ds.field = ScalarField::real;
    else if (field == "complex")
      ds.field = ScalarField::complex_field;
    else
      throw ParseError("document.sheaf.field: expected \"real\" or \"complex\"");
    const bool real_field = (ds.field == ScalarField::real);

    const json& stalks = member(sheaf, "stalks", "document.sheaf");
    if (!stalks.is_array()) throw ParseError("document.sheaf.stalks: expected an array");
    for (std::size_t i = 0; i < stalks.size(); ++i) {
      const std::string path = "document.sheaf.stalks[" + std::to_string(i) + "]";
      const Face f = io_detail::known_face(member(stalks[i], "face", path), x, path + ".face");
      const int dim = io_detail::as_int(member(stalks[i], "dim", path), path + ".dim");
      if (dim < 0) throw ParseError(path + ".dim: negative stalk dimension");
      if (ds.stalks.count(f))
        throw ParseError(path + ": duplicate stalk for face " + f.to_string());
      ds.stalks[f] = dim;
    }
    for (const Face& f : x.all_faces())
      if (!ds.stalks.count(f))
        throw ParseError("document.sheaf.stalks: no entry for face " + f.to_string());

    const json& restrictions = member(sheaf, "restrictions", "document.sheaf");
    if (!restrictions.is_array())
      throw ParseError("document.sheaf.restrictions: expected an array");
    for (std::size_t i = 0; i < restrictions.size(); ++i) {
      const std::string path = "document.sheaf.restrictions[" + std::to_string(i) + "]";
      const Face from = io_detail::known_face(member(restrictions[i], "from", path), x,
                                              path + ".from");
      const Face to = io_detail::known_face(member(restrictions[i], "to", path), x, path + ".to");
      if (to.dimension() != from.dimension() + 1 || !to.contains(from))
        throw ParseError(path + ": " + from.to_string() + " -> " + to.to_string() +
                         " is not a codimension-1 attachment");
      const std::string name = "restriction " + from.to_string() + " -> " + to.to_string();
      if (ds.restrictions.count({from, to})) throw ParseError(path + ": duplicate " + name);
      ComplexMatrix m = io_detail::matrix_from_json(restrictions[i], real_field, path);
      if (m.rows() != ds.stalks.at(to) || m.cols() != ds.stalks.at(from))
        throw ParseError(path + ": " + name + " has shape " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + " but the stalks require " +
                         std::to_string(ds.stalks.at(to)) + "x" +
                         std::to_string(ds.stalks.at(from)));
      ds.restrictions[{from, to}] = std::move(m);
    }
    for (int k = 0; k < x.dimension(); ++k)
      for (const auto& [a, b] : x.attachments(k))
        if (!ds.restrictions.count({a, b}))
          throw ParseError("document.sheaf.restrictions: missing restriction " + a.to_string() +
                           " -> " + b.to_string());
    doc.sheaf = std::move(ds);
  }

  if (root.contains("morphism")) {
    const json& morphism = root["morphism"];
    DocumentMorphism dm;
    const json& vertex_map = member(morphism, "vertex_map", "document.morphism");
    if (!vertex_map.is_array())
      throw ParseError("document.morphism.vertex_map: expected an array");
    for (std::size_t i = 0; i < vertex_map.size(); ++i) {
      const std::string path = "document.morphism.vertex_map[" + std::to_string(i) + "]";
      const json& pair = vertex_map[i];
      if (!pair.is_array() || pair.size() != 2)
        throw ParseError(path + ": expected a [source, target] vertex pair");
      const VertexId from = io_detail::as_int(pair[0], path + "[0]");
      const VertexId to = io_detail::as_int(pair[1], path + "[1]");
      if (!x.has_vertex(from) || !x.has_vertex(to))
        throw ParseError(path + ": vertex pair [" + std::to_string(from) + ", " +
                         std::to_string(to) + "] leaves the complex");
      if (dm.vertex_map.count(from))
        throw ParseError(path + ": duplicate image for vertex " + std::to_string(from));
      dm.vertex_map[from] = to;
    }
    const json& components = member(morphism, "components", "document.morphism");
    if (!components.is_array())
      throw ParseError("document.morphism.components: expected an array");
    const bool real_field = !doc.sheaf || doc.sheaf->field == ScalarField::real;
    for (std::size_t i = 0; i < components.size(); ++i) {
      const std::string path = "document.morphism.components[" + std::to_string(i) + "]";
      const Face f = io_detail::known_face(member(components[i], "face", path), x,
                                           path + ".face");
      if (dm.components.count(f))
        throw ParseError(path + ": duplicate component for face " + f.to_string());
      dm.components[f] = io_detail::matrix_from_json(components[i], real_field, path);
    }
    for (const Face& f : x.all_faces())
      if (!dm.components.count(f))
        throw ParseError("document.morphism.components: no component for face " + f.to_string());
    doc.morphism = std::move(dm);
  }

  if (root.contains("sample_support")) {
    const json& support = root["sample_support"];
    if (!support.is_array()) throw ParseError("document.sample_support: expected an array");
    std::vector<VertexId> vs;
    for (std::size_t i = 0; i < support.size(); ++i) {
      const std::string path = "document.sample_support[" + std::to_string(i) + "]";
      const VertexId v = io_detail::as_int(support[i], path);
      if (!x.has_vertex(v))
        throw ParseError(path + ": vertex " + std::to_string(v) + " is not in the complex");
      vs.push_back(v);
    }
    std::set<VertexId> unique(vs.begin(), vs.end());
    if (unique.size() != vs.size())
      throw ParseError("document.sample_support: duplicate vertices");
    doc.sample_support = std::vector<VertexId>(unique.begin(), unique.end());
  }
  return doc;
}

inline InterchangeDocument load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return document_from_json_text(buffer.str());
}

inline void save_document(const InterchangeDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << to_json_text(doc);
}

// Typed extraction.  A real-field document widens to a complex sheaf on
// request; a complex-field document cannot narrow to a real one.
template <class Scalar>
CellularSheaf<Scalar> sheaf_from_document(const InterchangeDocument& doc) {
  if (!doc.sheaf) throw ParseError("document has no sheaf block");
  if (ScalarTraits<Scalar>::field == ScalarField::real &&
      doc.sheaf->field == ScalarField::complex_field)
    throw ParseError("document.sheaf.field: complex-field document read as a real sheaf");
  SimplicialComplex x = doc.complex();
  std::map<Face, int> dims = doc.sheaf->stalks;
  std::map<typename CellularSheaf<Scalar>::RestrictionKey, Matrix<Scalar>> maps;
  for (const auto& [key, m] : doc.sheaf->restrictions)
    maps[key] = io_detail::narrow_matrix<Scalar>(m);
  return CellularSheaf<Scalar>(std::move(x), std::move(dims), std::move(maps));
}

template <class Scalar>
InterchangeDocument document_from_sheaf(const CellularSheaf<Scalar>& f) {
  InterchangeDocument doc;
  for (const Face& g : f.base().maximal_faces()) doc.maximal_faces.push_back(g.vertices());
  DocumentSheaf ds;
  ds.field = ScalarTraits<Scalar>::field;
  for (const Face& g : f.base().all_faces()) ds.stalks[g] = f.stalk_dim(g);
  for (int k = 0; k < f.base().dimension(); ++k)
    for (const auto& [a, b] : f.base().attachments(k))
      ds.restrictions[{a, b}] = io_detail::widen_matrix<Scalar>(f.restriction(a, b));
  doc.sheaf = std::move(ds);
  return doc;
}

inline MetricGraph metric_graph_from_document(const InterchangeDocument& doc) {
  if (doc.edge_lengths.empty()) throw ParseError("document has no metric block");
  try {
    return MetricGraph(doc.complex(), doc.edge_lengths, doc.reversed_edges);
  } catch (const ParseError&) {
    throw;
  } catch (const SheafError& e) {
    throw ParseError(std::string("document.metric: ") + e.what());
  }
}

inline void attach_metric(InterchangeDocument& doc, const MetricGraph& mg) {
  doc.edge_lengths.clear();
  doc.reversed_edges.clear();
  for (const Face& e : mg.graph().faces(1)) {
    doc.edge_lengths[e] = mg.length(e);
    if (mg.is_reversed(e)) doc.reversed_edges.insert(e);
  }
}

// Store a sampling morphism (identity base map assumed by the reader).
template <class Scalar>
void attach_sampling_morphism(InterchangeDocument& doc, const SheafMorphism<Scalar>& m) {
  DocumentMorphism dm;
  for (VertexId v : m.along().source().vertex_ids()) dm.vertex_map[v] = m.along().map_vertex(v);
  for (const Face& f : m.along().source().all_faces())
    dm.components[f] = io_detail::widen_matrix<Scalar>(m.component(f));
  doc.morphism = std::move(dm);
}

// Rebuild a sampling morphism: the document's sheaf is the source, the
// destination is implied by the component row counts (zero restrictions).
template <class Scalar>
SheafMorphism<Scalar> sampling_morphism_from_document(const InterchangeDocument& doc) {
  if (!doc.morphism) throw ParseError("document has no morphism block");
  CellularSheaf<Scalar> f = sheaf_from_document<Scalar>(doc);
  const SimplicialComplex& x = f.base();
  for (const auto& [from, to] : doc.morphism->vertex_map)
    if (from != to)
      throw ParseError("document.morphism.vertex_map: sampling morphisms require the identity "
                       "map, but vertex " +
                       std::to_string(from) + " maps to " + std::to_string(to));
  std::map<Face, int> dims;
  std::map<Face, Matrix<Scalar>> components;
  for (const auto& [face, m] : doc.morphism->components) {
    dims[face] = static_cast<int>(m.rows());
    components[face] = io_detail::narrow_matrix<Scalar>(m);
  }
  std::map<typename CellularSheaf<Scalar>::RestrictionKey, Matrix<Scalar>> maps;
  for (int k = 0; k < x.dimension(); ++k)
    for (const auto& [a, b] : x.attachments(k))
      maps[{a, b}] = Matrix<Scalar>::Zero(dims.at(b), dims.at(a));
  CellularSheaf<Scalar> dest(x, std::move(dims), std::move(maps));
  // Built before f is moved from: x dangles once the argument list guts f.
  SimplicialMap id = SimplicialMap::identity(x);
  try {
    return SheafMorphism<Scalar>(std::move(id), std::move(f), std::move(dest),
                                 std::move(components));
  } catch (const SheafError& e) {
    throw ParseError(std::string("document.morphism: ") + e.what());
  }
}

}  // namespace sheaflab
