// Interchange document round-trips and structural validation.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "sheaflab/io.hpp"

using namespace sheaflab;

namespace {

// Emit -> parse -> emit must reproduce the document and the exact text.
InterchangeDocument require_round_trip(const InterchangeDocument& doc) {
  const std::string text = to_json_text(doc);
  const InterchangeDocument back = document_from_json_text(text);
  REQUIRE(back == doc);
  REQUIRE(to_json_text(back) == text);
  return back;
}

std::string with_patch(std::string text, const std::string& needle, const std::string& repl) {
  const auto pos = text.find(needle);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, needle.size(), repl);
}

}  // namespace

TEST_CASE("zoo sheaves round-trip through the interchange format") {
  SECTION("grouping") {
    const RealSheaf f = grouping_sheaf(4, 2, 2);
    const InterchangeDocument doc = document_from_sheaf(f);
    const InterchangeDocument back = require_round_trip(doc);
    const RealSheaf g = sheaf_from_document<double>(back);
    CHECK(validate(g).empty());
    CHECK(cohomology(g, 0).dim == cohomology(f, 0).dim);
  }
  SECTION("piecewise linear") {
    const RealSheaf f = pl_sheaf(star_complex(3));
    const InterchangeDocument back = require_round_trip(document_from_sheaf(f));
    CHECK(cohomology(sheaf_from_document<double>(back), 0).dim == 4);
  }
  SECTION("spline with fractional spacing") {
    SplineParams params;
    params.degree = 2;
    params.spacing = 0.5;
    const RealSheaf f = spline_sheaf(3, params);
    const InterchangeDocument back = require_round_trip(document_from_sheaf(f));
    CHECK(cohomology(sheaf_from_document<double>(back), 0).dim == 6);
  }
  SECTION("transmission line with metric block") {
    const MetricGraph mg(cycle_complex(3),
                         {{Face{0, 1}, 1.0}, {Face{0, 2}, 2.0}, {Face{1, 2}, 1.0}},
                         {Face{0, 2}});
    const ComplexSheaf t = transmission_line_sheaf(mg, Wavenumber(0.3, 0.7));
    InterchangeDocument doc = document_from_sheaf(t);
    attach_metric(doc, mg);
    const InterchangeDocument back = require_round_trip(doc);
    REQUIRE(back.sheaf.has_value());
    CHECK(back.sheaf->field == ScalarField::complex_field);
    const MetricGraph mg2 = metric_graph_from_document(back);
    CHECK(mg2.length(Face{0, 2}) == 2.0);
    CHECK(mg2.is_reversed(Face{0, 2}));
    CHECK_FALSE(mg2.is_reversed(Face{0, 1}));
    // Rebuilding the sheaf from the metric data reproduces the stored one.
    const InterchangeDocument rebuilt =
        document_from_sheaf(transmission_line_sheaf(mg2, Wavenumber(0.3, 0.7)));
    CHECK(rebuilt.sheaf.has_value());
    CHECK(*rebuilt.sheaf == *back.sheaf);
  }
  SECTION("sampling morphism and support") {
    const RealSheaf f = pl_sheaf(path_complex(3));
    const auto m = full_stalk_sampling(f, {Face{0}, Face{2}});
    InterchangeDocument doc = document_from_sheaf(f);
    attach_sampling_morphism(doc, m);
    doc.sample_support = std::vector<VertexId>{0, 2};
    const InterchangeDocument back = require_round_trip(doc);
    const auto m2 = sampling_morphism_from_document<double>(back);
    CHECK(is_sampling_morphism(m2));
    const auto direct = nyquist_check(m);
    const auto loaded = nyquist_check(m2);
    CHECK(loaded.ambiguity_dim == direct.ambiguity_dim);
    CHECK(loaded.redundancy_dim == direct.redundancy_dim);
  }
  SECTION("awkward floating values survive bit-exactly") {
    const SimplicialComplex x = path_complex(2);
    std::map<Face, int> dims{{Face{0}, 1}, {Face{1}, 1}, {Face{0, 1}, 1}};
    ComplexMatrix r0(1, 1), r1(1, 1);
    r0(0, 0) = ComplexScalar(0.1, -0.3);
    r1(0, 0) = ComplexScalar(1.0 / 3.0, 2e-17);
    const ComplexSheaf f(
        x, dims, {{{Face{0}, Face{0, 1}}, r0}, {{Face{1}, Face{0, 1}}, r1}});
    InterchangeDocument doc = document_from_sheaf(f);
    doc.edge_lengths[Face{0, 1}] = 0.30000000000000004;
    const InterchangeDocument back = require_round_trip(doc);
    CHECK(back.edge_lengths.at(Face{0, 1}) == 0.30000000000000004);
    const ComplexSheaf g = sheaf_from_document<ComplexScalar>(back);
    CHECK(g.restriction(Face{1}, Face{0, 1})(0, 0) == ComplexScalar(1.0 / 3.0, 2e-17));
  }
}

TEST_CASE("documents move through files") {
  const RealSheaf f = grouping_sheaf(3, 2, 1);
  InterchangeDocument doc = document_from_sheaf(f);
  const auto path = std::filesystem::temp_directory_path() / "sheaflab_io_test.json";
  save_document(doc, path.string());
  const InterchangeDocument back = load_document(path.string());
  CHECK(back == doc);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_document((path / "missing").string()), ParseError);
}

TEST_CASE("parse failures carry position or path information") {
  // Compact handcrafted document: identity sheaf on a single edge.
  const std::string base =
      R"({"version":"1","complex":{"maximal_faces":[[0,1]]},"sheaf":{"field":"real",)"
      R"("stalks":[{"face":[0],"dim":1},{"face":[1],"dim":1},{"face":[0,1],"dim":1}],)"
      R"("restrictions":[{"from":[0],"to":[0,1],"rows":1,"cols":1,"data":[[1.0,0.0]]},)"
      R"({"from":[1],"to":[0,1],"rows":1,"cols":1,"data":[[1.0,0.0]]}]}})";
  REQUIRE_NOTHROW(document_from_json_text(base));

  SECTION("syntax error reports line and column") {
    try {
      document_from_json_text("{\n  \"version\": \"1\",\n  oops\n}");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() >= 1);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SECTION("wrong version") {
    CHECK_THROWS_WITH(document_from_json_text(with_patch(base, R"("version":"1")",
                                                         R"("version":"9")")),
                      Catch::Matchers::ContainsSubstring("version"));
  }
  SECTION("missing complex block") {
    CHECK_THROWS_WITH(document_from_json_text(R"({"version": "1"})"),
                      Catch::Matchers::ContainsSubstring("complex"));
  }
  SECTION("matrix shape against stalks names the restriction") {
    // First stalk is face {0}; inflating it breaks the first restriction.
    const std::string text = with_patch(base, R"({"face":[0],"dim":1})",
                                        R"({"face":[0],"dim":2})");
    CHECK_THROWS_WITH(document_from_json_text(text),
                      Catch::Matchers::ContainsSubstring("restriction {0} -> {0,1}"));
  }
  SECTION("data length against declared dimensions") {
    const std::string text =
        with_patch(base, R"("rows":1,"cols":1,"data":[[1.0,0.0]]})",
                   R"("rows":1,"cols":2,"data":[[1.0,0.0]]})");
    CHECK_THROWS_WITH(document_from_json_text(text),
                      Catch::Matchers::ContainsSubstring("entries"));
  }
  SECTION("stalk on a face outside the closure") {
    const std::string text = with_patch(base, R"({"face":[0],"dim":1})",
                                        R"({"face":[7],"dim":1})");
    CHECK_THROWS_WITH(document_from_json_text(text),
                      Catch::Matchers::ContainsSubstring("closure"));
  }
  SECTION("duplicate stalk entry") {
    const std::string text = with_patch(base, R"({"face":[1],"dim":1})",
                                        R"({"face":[0],"dim":1})");
    CHECK_THROWS_WITH(document_from_json_text(text),
                      Catch::Matchers::ContainsSubstring("duplicate"));
  }
  SECTION("restriction across a non-attachment") {
    const std::string text = with_patch(base, R"("from":[1],"to":[0,1])",
                                        R"("from":[0],"to":[1])");
    CHECK_THROWS_WITH(document_from_json_text(text),
                      Catch::Matchers::ContainsSubstring("attachment"));
  }
  SECTION("imaginary entry in a real-field document") {
    const std::string text = with_patch(base, "[[1.0,0.0]]", "[[1.0,0.5]]");
    CHECK_THROWS_WITH(document_from_json_text(text),
                      Catch::Matchers::ContainsSubstring("imaginary"));
  }
}

TEST_CASE("structural checks on parsed documents") {
  const SimplicialComplex path = path_complex(2);

  SECTION("stalk entries must cover every face") {
    InterchangeDocument doc = document_from_sheaf(constant_sheaf(path, 1));
    doc.sheaf->stalks.erase(Face{0, 1});
    CHECK_THROWS_WITH(document_from_json_text(to_json_text(doc)),
                      Catch::Matchers::ContainsSubstring("no entry for face {0,1}"));
  }
  SECTION("restrictions must cover every attachment") {
    InterchangeDocument doc = document_from_sheaf(constant_sheaf(path, 1));
    doc.sheaf->restrictions.erase({Face{1}, Face{0, 1}});
    CHECK_THROWS_WITH(document_from_json_text(to_json_text(doc)),
                      Catch::Matchers::ContainsSubstring("missing restriction"));
  }
  SECTION("restriction keys must be codimension-1 attachments") {
    InterchangeDocument doc = document_from_sheaf(constant_sheaf(path, 1));
    auto r = doc.sheaf->restrictions.begin()->second;
    doc.sheaf->restrictions[{Face{0}, Face{1}}] = r;
    CHECK_THROWS_WITH(document_from_json_text(to_json_text(doc)),
                      Catch::Matchers::ContainsSubstring("attachment"));
  }
  SECTION("sample support must name vertices of the complex") {
    InterchangeDocument doc = document_from_sheaf(constant_sheaf(path, 1));
    doc.sample_support = std::vector<VertexId>{5};
    CHECK_THROWS_WITH(document_from_json_text(to_json_text(doc)),
                      Catch::Matchers::ContainsSubstring("not in the complex"));
  }
  SECTION("complex-field documents refuse to narrow") {
    const ComplexSheaf t = constant_sheaf<ComplexScalar>(cycle_complex(3), 1);
    const InterchangeDocument doc = document_from_sheaf(t);
    CHECK_THROWS_AS(sheaf_from_document<double>(doc), ParseError);
    CHECK_NOTHROW(sheaf_from_document<ComplexScalar>(doc));
  }
  SECTION("real-field documents widen on request") {
    const InterchangeDocument doc = document_from_sheaf(constant_sheaf(path, 2));
    const ComplexSheaf g = sheaf_from_document<ComplexScalar>(doc);
    CHECK(g.field() == ScalarField::complex_field);
    CHECK(cohomology(g, 0).dim == 2);
  }
  SECTION("non-identity vertex maps are stored but refuse sampling reconstruction") {
    InterchangeDocument doc = document_from_sheaf(constant_sheaf(path, 1));
    DocumentMorphism dm;
    dm.vertex_map = {{0, 1}, {1, 0}};
    for (const Face& f : path.all_faces())
      dm.components[f] = ComplexMatrix::Identity(1, 1);
    doc.morphism = dm;
    const InterchangeDocument back = require_round_trip(doc);
    CHECK_THROWS_WITH(sampling_morphism_from_document<double>(back),
                      Catch::Matchers::ContainsSubstring("identity"));
  }
  SECTION("document inequality notices a single entry flip") {
    InterchangeDocument a = document_from_sheaf(constant_sheaf(path, 1));
    InterchangeDocument b = a;
    b.sheaf->restrictions.begin()->second(0, 0) += 1.0;
    CHECK_FALSE(a == b);
  }
}
