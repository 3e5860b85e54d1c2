/// Python bindings: the document model, the rewriting operations, and the
/// seeded example generators.  Reports are flattened to their string forms.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "grope/errors.hpp"
#include "grope/generators.hpp"
#include "grope/graph_view.hpp"
#include "grope/ledger.hpp"
#include "grope/model.hpp"
#include "grope/pipeline.hpp"
#include "grope/serialize.hpp"
#include "grope/splitting.hpp"
#include "grope/unravel.hpp"

namespace py = pybind11;

namespace {

grope::ObjectId first_grope_root(const grope::Model& m) {
  const auto roots = m.grope_roots();
  if (roots.empty()) throw grope::ShapeError("model has no grope roots");
  return roots.front();
}

grope::Model discharge_all(grope::Model m) {
  while (!m.ledger.obligations.empty())
    m = grope::discharge_obligation(m, m.ledger.obligations.front().dual);
  return m;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "rewriting engine for capped gropes and Whitney towers";

  const auto base = py::register_exception<grope::Error>(mod, "EngineError");
  py::register_exception<grope::ParseError>(mod, "ParseError", base.ptr());
  py::register_exception<grope::PlanError>(mod, "PlanError", base.ptr());
  py::register_exception<grope::ShapeError>(mod, "ShapeError", base.ptr());
  py::register_exception<grope::PreconditionError>(mod, "PreconditionError", base.ptr());
  py::register_exception<grope::OracleScaleError>(mod, "OracleScaleError", base.ptr());
  py::register_exception<grope::BudgetError>(mod, "BudgetError", base.ptr());

  py::class_<grope::Model>(mod, "Model", "a capped-grope document")
      .def(py::init<>())
      .def_static(
          "parse", [](const std::string& text) { return grope::parse_model(text); },
          py::arg("text"), "parse a model document")
      .def("__str__", [](const grope::Model& m) { return grope::print_model(m); })
      .def("__repr__",
           [](const grope::Model& m) {
             return "<gropes.Model: " + std::to_string(m.objects.size()) + " objects, " +
                    std::to_string(m.edges.size()) + " edges, " +
                    std::to_string(m.pairs.size()) + " pairs>";
           })
      .def_property_readonly("object_count",
                             [](const grope::Model& m) { return m.objects.size(); })
      .def_property_readonly("edge_count", [](const grope::Model& m) { return m.edges.size(); })
      .def_property_readonly("pair_count", [](const grope::Model& m) { return m.pairs.size(); })
      .def_property_readonly("pending_obligations",
                             [](const grope::Model& m) { return m.ledger.obligations.size(); })
      .def(
          "labels",
          [](const grope::Model& m) {
            std::vector<std::string> out;
            for (const grope::GroupWord& w : grope::label_set(m)) out.push_back(w.str());
            return out;
          },
          "the normalized intersection labels, identity included when present")
      .def(
          "validate",
          [](const grope::Model& m) {
            std::vector<std::string> out;
            for (const grope::Violation& v : grope::validate(m))
              out.push_back("object " + std::to_string(v.subject) + " " + v.rule + ": " +
                            v.message);
            return out;
          },
          "structural violations, one line each; empty means well formed")
      .def(
          "girth",
          [](const grope::Model& m) { return grope::girth(grope::GraphView(m)); },
          "length of the shortest unpaired cycle, None when acyclic");

  mod.def(
      "split_to_dyadic",
      [](const grope::Model& m, std::optional<grope::ObjectId> root, std::size_t budget) {
        return grope::split_to_dyadic(m, root.value_or(first_grope_root(m)),
                                      grope::Budget{budget});
      },
      py::arg("model"), py::arg("root") = std::nullopt,
      py::arg("budget") = grope::Budget{}.max_objects,
      "split a grope until every branch is dyadic");

  mod.def(
      "split_to_distance",
      [](const grope::Model& m, std::size_t n, std::optional<grope::ObjectId> root,
         std::size_t budget) {
        return grope::split_to_distance(m, root.value_or(first_grope_root(m)), n,
                                        grope::Budget{budget});
      },
      py::arg("model"), py::arg("n"), py::arg("root") = std::nullopt,
      py::arg("budget") = grope::Budget{}.max_objects,
      "split a grope until cap collisions sit at distance >= n");

  mod.def(
      "split_transverse_pair",
      [](const grope::Model& m, int pair_index, std::uint64_t seed) {
        grope::Rng rng(seed);
        const auto plan = grope::random_pair_plan(rng, m, pair_index);
        if (!plan) throw grope::PlanError("no split plan for the pair");
        return grope::split_transverse_pair(m, pair_index, *plan);
      },
      py::arg("model"), py::arg("pair_index") = 0, py::arg("seed") = 0,
      "split a transverse pair along a seeded plan");

  mod.def(
      "attach_pair_handles",
      [](const grope::Model& m, int pair_index) {
        return grope::attach_pair_handles(m, pair_index);
      },
      py::arg("model"), py::arg("pair_index") = 0,
      "attach dual 2-handles along a transverse pair");

  mod.def(
      "attach_stage_handles",
      [](const grope::Model& m, grope::ObjectId stage, std::size_t pair_index) {
        return grope::attach_stage_handles(m, stage, pair_index);
      },
      py::arg("model"), py::arg("stage"), py::arg("pair_index") = 0,
      "attach dual 2-handles along one dual pair of a surface stage");

  mod.def(
      "discharge_obligation",
      [](const grope::Model& m, grope::ObjectId sphere) {
        return grope::discharge_obligation(m, sphere);
      },
      py::arg("model"), py::arg("sphere"), "retire the pending obligation of one dual sphere");

  mod.def("discharge_all", &discharge_all, py::arg("model"),
          "retire every pending obligation, oldest first");

  mod.def(
      "certify", [](const grope::Model& m) { return grope::certify(m).str(); },
      py::arg("model"),
      "classify the boundary matrix: identity, upper-triangular-units, or fail(...)");

  mod.def(
      "unravel",
      [](const grope::Model& m, std::size_t n, int seed_pair, std::size_t budget) {
        auto [out, report] = grope::unravel(m, seed_pair, n, grope::Budget{budget});
        return py::make_tuple(std::move(out), report.str());
      },
      py::arg("model"), py::arg("n"), py::arg("seed_pair") = 0,
      py::arg("budget") = grope::Budget{}.max_objects,
      "unravel the pairing chain through a pair at degree n; returns (model, report)");

  mod.def(
      "pipeline",
      [](const grope::Model& m, std::size_t n, int pair_index, int height, std::size_t budget) {
        auto [out, report] = grope::theorem1_pipeline(m, pair_index, n, height,
                                                      grope::Budget{budget});
        return py::make_tuple(std::move(out), report.str());
      },
      py::arg("model"), py::arg("n"), py::arg("pair_index") = 0, py::arg("height") = 2,
      py::arg("budget") = grope::Budget{}.max_objects,
      "split, cover, and certify a transverse pair; returns (model, report)");

  mod.def(
      "fig_cycle_model",
      [](bool with_handles) { return grope::fig_cycle_model(with_handles); },
      py::arg("with_handles") = false,
      "the length-1 cycle example: one pair whose doubled intersection closes a loop");

  mod.def(
      "random_grope",
      [](std::uint64_t seed) {
        grope::Rng rng(seed);
        return grope::random_grope(rng);
      },
      py::arg("seed"), "a seeded random capped grope with cap intersections");

  mod.def(
      "random_pair_model",
      [](std::uint64_t seed, std::size_t letters, bool all_paired) {
        grope::Rng rng(seed);
        return grope::random_pair_model(rng, letters, all_paired);
      },
      py::arg("seed"), py::arg("letters") = 3, py::arg("all_paired") = false,
      "a seeded random transverse pair");

  mod.def(
      "random_chain_model",
      [](std::uint64_t seed, std::size_t length, bool cyclic) {
        grope::Rng rng(seed);
        return grope::random_chain_model(rng, length, cyclic);
      },
      py::arg("seed"), py::arg("length"), py::arg("cyclic") = false,
      "a seeded random chain of Whitney-paired transverse pairs");
}
