// Command-line front end: validation, cohomology, sampling analysis, and
// generator families over the JSON interchange format.
//
// Exit codes: 0 success (and affirmative verdicts), 1 domain failure
// (violations, negative verdicts, numerical trouble), 2 usage or parse
// errors.

#include <CLI11.hpp>

#include <complex>
#include <cstdio>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sheaflab.hpp"

namespace {

using namespace sheaflab;
using ojson = nlohmann::ordered_json;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

std::string fmt(const ComplexScalar& z) { return "[" + fmt(z.real()) + ", " + fmt(z.imag()) + "]"; }

ComplexScalar parse_wavenumber(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    const double re = std::stod(text.substr(0, comma), &used);
    if (used != (comma == std::string::npos ? text.size() : comma))
      throw std::invalid_argument(text);
    double im = 0.0;
    if (comma != std::string::npos) {
      const std::string rest = text.substr(comma + 1);
      im = std::stod(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(text);
    }
    return {re, im};
  } catch (const std::exception&) {
    throw ParseError("--wavenumber expects re or re,im, got \"" + text + "\"");
  }
}

void emit_document(const InterchangeDocument& doc, const std::string& out_path) {
  if (out_path.empty())
    std::cout << to_json_text(doc);
  else
    save_document(doc, out_path);
}

// Run fn on the document's sheaf in its native field.
template <class Fn>
int with_sheaf(const InterchangeDocument& doc, Fn&& fn) {
  if (!doc.sheaf) throw ParseError("document has no sheaf block");
  if (doc.sheaf->field == ScalarField::real) return fn(sheaf_from_document<double>(doc));
  return fn(sheaf_from_document<ComplexScalar>(doc));
}

template <class Fn>
int with_sampling_morphism(const InterchangeDocument& doc, Fn&& fn) {
  if (!doc.sheaf) throw ParseError("document has no sheaf block");
  if (doc.sheaf->field == ScalarField::real)
    return fn(sampling_morphism_from_document<double>(doc));
  return fn(sampling_morphism_from_document<ComplexScalar>(doc));
}

struct ToleranceFlag {
  double value = -1.0;  // negative: automatic, SVD-based
  bool overridden() const { return value >= 0.0; }
  RankOptions rank_options() const {
    RankOptions opts;
    if (overridden()) opts.rel_tol = value;
    return opts;
  }
  std::string describe() const { return overridden() ? fmt(value) + " (relative)" : "auto"; }
};

int cmd_validate(const std::string& file, double tol) {
  const InterchangeDocument doc = load_document(file);
  std::cout << "tolerance: " << fmt(tol) << "\n";
  int violation_count = 0;
  bool checked_anything = false;
  if (doc.sheaf) {
    checked_anything = true;
    with_sheaf(doc, [&](const auto& f) {
      const auto violations = validate(f, tol);
      std::cout << "sheaf: " << violations.size() << " violation"
                << (violations.size() == 1 ? "" : "s") << "\n";
      for (const auto& v : violations) std::cout << "  " << v.describe() << "\n";
      violation_count += static_cast<int>(violations.size());
      return 0;
    });
  }
  if (doc.morphism) {
    checked_anything = true;
    with_sampling_morphism(doc, [&](const auto& m) {
      const auto violations = validate_morphism(m, tol);
      std::cout << "morphism: " << violations.size() << " violation"
                << (violations.size() == 1 ? "" : "s") << "\n";
      for (const auto& v : violations) std::cout << "  " << v.describe() << "\n";
      violation_count += static_cast<int>(violations.size());
      return 0;
    });
  }
  if (!checked_anything) std::cout << "document has no sheaf or morphism block; nothing to check\n";
  return violation_count == 0 ? 0 : 1;
}

int cmd_cohomology(const std::string& file, int max_degree, const ToleranceFlag& tol,
                   bool print_basis, bool force) {
  const InterchangeDocument doc = load_document(file);
  return with_sheaf(doc, [&](const auto& f) {
    using Scalar = typename std::decay_t<decltype(f)>::ScalarType;
    const int top = max_degree >= 0 ? max_degree : f.base().dimension();
    CohomologyOptions opts;
    opts.rank = tol.rank_options();
    opts.throw_on_ill_conditioned = false;
    std::cout << "tolerance: " << tol.describe() << "\n";
    bool flagged = false;
    for (int k = 0; k <= top; ++k) {
      const CohomologyResult<Scalar> h = cohomology(f, k, opts);
      std::cout << "H" << k << ": " << h.dim << "  (cochain dim " << h.cochain_dim
                << ", rank d" << k << " = " << h.rank_d << ", cutoff " << fmt(h.tolerance_used)
                << ", gap ratio " << fmt(h.min_gap_ratio) << ")\n";
      if (h.ill_conditioned) {
        flagged = true;
        std::cout << "WARNING: ill-conditioned rank decision at degree " << k << " (gap ratio "
                  << fmt(h.min_gap_ratio) << ")\n";
      }
      if (print_basis && h.dim > 0) {
        const CochainLayout layout = cochain_space(f, k);
        for (int j = 0; j < h.dim; ++j) {
          std::cout << "  basis vector " << (j + 1) << ":\n";
          for (const auto& block : layout.blocks) {
            if (block.dim == 0) continue;
            std::cout << "    " << block.face.to_string() << ": [";
            for (int i = 0; i < block.dim; ++i)
              std::cout << (i ? ", " : "") << fmt(h.basis(block.offset + i, j));
            std::cout << "]\n";
          }
        }
      }
    }
    if (flagged && !force) {
      std::cerr << "error: ill-conditioned rank decision (rerun with --force to accept)\n";
      return 1;
    }
    return 0;
  });
}

std::string verdict_of(const SamplingReport& report) {
  if (report.perfect) return "PERFECT";
  if (report.ambiguity_dim > 0 && report.redundancy_dim > 0) return "BOTH";
  if (report.ambiguity_dim > 0) return "AMBIGUOUS";
  return "REDUNDANT";
}

int cmd_nyquist(const std::string& file, std::vector<VertexId> support, bool full_stalk,
                const std::string& morphism_file, const ToleranceFlag& tol, bool as_json) {
  const InterchangeDocument doc = load_document(file);
  if (support.empty() && doc.sample_support) support = *doc.sample_support;
  CohomologyOptions opts;
  opts.rank = tol.rank_options();

  SamplingReport report;
  if (full_stalk) {
    if (support.empty())
      throw ParseError("--full-stalk needs a sample support (--support or a sample_support block)");
    with_sheaf(doc, [&](const auto& f) {
      std::set<Face> faces;
      for (VertexId v : support) {
        if (!f.base().has_vertex(v))
          throw UnsupportedSupportError("support vertex " + std::to_string(v) +
                                        " is not in the complex");
        faces.insert(Face{v});
      }
      report = nyquist_check(full_stalk_sampling(f, faces), opts);
      return 0;
    });
  } else {
    const InterchangeDocument mdoc = morphism_file.empty() ? doc : load_document(morphism_file);
    if (!morphism_file.empty() && doc.sheaf && mdoc.sheaf && !(*doc.sheaf == *mdoc.sheaf))
      throw ParseError("morphism file carries a different sheaf than " + file);
    with_sampling_morphism(mdoc, [&](const auto& m) {
      report = nyquist_check(m, opts);
      return 0;
    });
  }

  if (as_json) {
    ojson out;
    out["version"] = kFormatVersion;
    out["ambiguity_dim"] = report.ambiguity_dim;
    out["redundancy_dim"] = report.redundancy_dim;
    out["perfect"] = report.perfect;
    out["verdict"] = verdict_of(report);
    out["tolerance"] = report.tolerance_used;
    std::cout << out.dump() << "\n";
  } else {
    std::cout << "tolerance: " << fmt(report.tolerance_used) << "\n";
    std::cout << "ambiguity: " << report.ambiguity_dim << "\n";
    std::cout << "redundancy: " << report.redundancy_dim << "\n";
    std::cout << "verdict: " << verdict_of(report) << "\n";
  }
  return report.perfect ? 0 : 1;
}

int cmd_obstruction(const std::string& file, std::vector<VertexId> support,
                    const ToleranceFlag& tol) {
  const InterchangeDocument doc = load_document(file);
  if (support.empty() && doc.sample_support) support = *doc.sample_support;
  if (support.empty())
    throw ParseError("a sample support is required (--support or a sample_support block)");
  CohomologyOptions opts;
  opts.rank = tol.rank_options();
  return with_sheaf(doc, [&](const auto& f) {
    const ObstructionReport report =
        obstruction_check(f, std::set<VertexId>(support.begin(), support.end()), opts);
    std::cout << "tolerance: " << fmt(report.tolerance_used) << "\n";
    std::cout << "dim H0 of the vanishing quotient: " << report.dim << "\n";
    std::cout << "verdict: " << (report.obstructed ? "OBSTRUCTED" : "CLEAR") << "\n";
    return report.obstructed ? 1 : 0;
  });
}

int cmd_zoo_grouping(int n, int m, int dim, const std::string& out) {
  try {
    emit_document(document_from_sheaf(grouping_sheaf(n, m, dim)), out);
  } catch (const ShapeError& e) {
    throw ParseError(std::string("invalid grouping parameters: ") + e.what());
  }
  return 0;
}

int cmd_zoo_pl(const std::string& graph_file, const std::string& out) {
  const InterchangeDocument graph = load_document(graph_file);
  emit_document(document_from_sheaf(pl_sheaf(graph.complex())), out);
  return 0;
}

int cmd_zoo_transmission(const std::string& graph_file, const std::string& wavenumber,
                         const std::string& out) {
  const InterchangeDocument graph = load_document(graph_file);
  const MetricGraph mg = metric_graph_from_document(graph);
  const ComplexScalar k = parse_wavenumber(wavenumber);
  InterchangeDocument doc = document_from_sheaf(transmission_line_sheaf(mg, k));
  attach_metric(doc, mg);
  emit_document(doc, out);
  return 0;
}

int cmd_zoo_spline(int n_vertices, int degree, double spacing, const std::string& out) {
  SplineParams params;
  params.degree = degree;
  params.spacing = spacing;
  try {
    emit_document(document_from_sheaf(spline_sheaf(n_vertices, params)), out);
  } catch (const ShapeError& e) {
    throw ParseError(std::string("invalid spline parameters: ") + e.what());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cellular sheaf sampling analysis"};
  app.require_subcommand(1);

  std::string file, morphism_file, graph_file, out_path, wavenumber;
  std::vector<VertexId> support;
  double validate_tol = 1e-8;
  ToleranceFlag tol;
  int max_degree = -1;
  bool print_basis = false, force = false, full_stalk = false, as_json = false;
  int zoo_n = 0, zoo_m = 0, zoo_dim = 1, spline_degree = 1;
  double spline_spacing = 1.0;

  CLI::App* validate = app.add_subcommand("validate", "check restriction functoriality");
  validate->add_option("file", file, "interchange document")->required();
  validate->add_option("--tolerance", validate_tol, "violation threshold (default 1e-8)");

  CLI::App* cohomology = app.add_subcommand("cohomology", "dimensions and bases of H^k");
  cohomology->add_option("file", file, "interchange document with a sheaf")->required();
  cohomology->add_option("--max-degree", max_degree, "compute H^0..H^k (default: complex dim)");
  cohomology->add_option("--tolerance", tol.value, "relative SVD cutoff override");
  cohomology->add_flag("--basis", print_basis, "print basis vectors grouped by face");
  cohomology->add_flag("--force", force, "accept ill-conditioned rank decisions");

  CLI::App* nyquist = app.add_subcommand("nyquist", "ambiguity/redundancy of a sampling");
  nyquist->add_option("file", file, "interchange document with a sheaf")->required();
  nyquist->add_option("--support", support, "sample vertices v1,v2,...")->delimiter(',');
  nyquist->add_flag("--full-stalk", full_stalk, "sample the full stalk at each support vertex");
  nyquist->add_option("--morphism", morphism_file,
                      "document carrying the sampling morphism (default: the main file)");
  nyquist->add_option("--tolerance", tol.value, "relative SVD cutoff override");
  nyquist->add_flag("--json", as_json, "machine-readable report");

  CLI::App* obstruction = app.add_subcommand("obstruction", "sections invisible to a support");
  obstruction->add_option("file", file, "interchange document with a sheaf")->required();
  obstruction->add_option("--support", support, "sample vertices v1,v2,...")->delimiter(',');
  obstruction->add_option("--tolerance", tol.value, "relative SVD cutoff override");

  CLI::App* zoo = app.add_subcommand("zoo", "generate a model sheaf");
  zoo->require_subcommand(1);
  CLI::App* grouping = zoo->add_subcommand("grouping", "sliding windows over a sequence");
  grouping->add_option("vertices", zoo_n, "number of chain vertices")->required();
  grouping->add_option("window", zoo_m, "window length")->required();
  grouping->add_option("dim", zoo_dim, "per-sample dimension")->required();
  CLI::App* pl = zoo->add_subcommand("pl", "piecewise-linear interpolation on a graph");
  pl->add_option("--graph", graph_file, "document with the complex")->required();
  CLI::App* transmission = zoo->add_subcommand("transmission", "traveling waves on a metric graph");
  transmission->add_option("--graph", graph_file, "document with complex and metric block")
      ->required();
  transmission->add_option("--wavenumber", wavenumber, "re or re,im")->required();
  CLI::App* spline = zoo->add_subcommand("spline", "piecewise polynomials on a chain");
  spline->add_option("vertices", zoo_n, "number of chain vertices (knots)")->required();
  spline->add_option("--degree", spline_degree, "polynomial degree (default 1)");
  spline->add_option("--spacing", spline_spacing, "knot spacing (default 1)");
  for (CLI::App* sub : {grouping, pl, transmission, spline})
    sub->add_option("--out", out_path, "write the document here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(file, validate_tol);
    if (*cohomology) return cmd_cohomology(file, max_degree, tol, print_basis, force);
    if (*nyquist) {
      if (full_stalk && !morphism_file.empty())
        throw ParseError("--full-stalk and --morphism are mutually exclusive");
      return cmd_nyquist(file, support, full_stalk, morphism_file, tol, as_json);
    }
    if (*obstruction) return cmd_obstruction(file, support, tol);
    if (*zoo) {
      if (*grouping) return cmd_zoo_grouping(zoo_n, zoo_m, zoo_dim, out_path);
      if (*pl) return cmd_zoo_pl(graph_file, out_path);
      if (*transmission) return cmd_zoo_transmission(graph_file, wavenumber, out_path);
      if (*spline) return cmd_zoo_spline(zoo_n, spline_degree, spline_spacing, out_path);
    }
  } catch (const sheaflab::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const sheaflab::SheafError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
