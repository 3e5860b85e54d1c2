#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "grope/cli.hpp"
#include "grope/generators.hpp"
#include "grope/ledger.hpp"
#include "grope/model.hpp"
#include "grope/serialize.hpp"

namespace grope {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// A fresh scratch directory per test case, cleared up front so reruns see
/// the same initial state.
fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "grope_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

json report_of(const fs::path& out_dir) {
  return json::parse(slurp(out_dir / "report.doc"));
}

RunConfig base_config(const fs::path& dir, const std::string& command) {
  RunConfig config;
  config.input = (dir / "in.doc").string();
  config.command = command;
  config.out_dir = (dir / "out").string();
  return config;
}

/// A transverse pair whose four extras form one Whitney pairing per label.
Model two_pairing_pair() {
  Model m;
  m.generators = 2;
  const ObjectId a = m.add_object(Kind::Sphere);
  const ObjectId b = m.add_object(Kind::Sphere);
  TransversePair pair{a, b, m.add_edge(a, b, GroupWord::identity()), {}};
  for (const char* w : {"a", "b"}) {
    const PairingId pid = m.fresh_pairing();
    pair.extras.push_back(m.add_edge(a, b, GroupWord::parse(w), pid));
    pair.extras.push_back(m.add_edge(a, b, GroupWord::parse(w), pid));
  }
  m.pairs.push_back(pair);
  return m;
}

/// A two-pairing pair whose tower holds a first layer of two disks (one
/// splittable) and a second-layer disk over their mutual pairing.
Model splittable_tower() {
  Model m = two_pairing_pair();
  const PairingId p0 = *m.edge_at(m.pairs[0].extras[0]).pairing;
  const PairingId p1 = *m.edge_at(m.pairs[0].extras[2]).pairing;
  const ObjectId d0 = m.add_object(Kind::WhitneyDisk);
  const ObjectId d1 = m.add_object(Kind::WhitneyDisk);
  m.at(d0).cancels = p0;
  m.at(d1).cancels = p1;
  const PairingId q = m.fresh_pairing();
  m.add_edge(d0, d1, GroupWord::parse("a"), q);
  m.add_edge(d0, d1, GroupWord::parse("a"), q);
  m.add_edge(d0, d1, GroupWord::parse("b"));
  const ObjectId high = m.add_object(Kind::WhitneyDisk);
  m.at(high).cancels = q;
  m.towers.push_back(WhitneyTower{0, {{d0, d1}, {high}}});
  return m;
}

}  // namespace

TEST_CASE("validate writes its artifacts and passes a clean model") {
  const fs::path dir = scratch("validate");
  save_model(fig_cycle_model(false), (dir / "in.doc").string());
  const RunConfig config = base_config(dir, "validate");

  CHECK(run(config) == 0);
  const json report = report_of(dir / "out");
  CHECK(report.at("command") == "validate");
  CHECK(report.at("violations").empty());
  CHECK(slurp(dir / "out" / "model.doc") == slurp(dir / "in.doc"));
}

TEST_CASE("malformed requests exit two") {
  const fs::path dir = scratch("malformed");
  save_model(fig_cycle_model(false), (dir / "in.doc").string());

  RunConfig config = base_config(dir, "frobnicate");
  CHECK(run(config) == 2);

  config = base_config(dir, "validate");
  config.n = 0;
  CHECK(run(config) == 2);

  config = base_config(dir, "validate");
  config.budget = 0;
  CHECK(run(config) == 2);

  config = base_config(dir, "validate");
  config.input = (dir / "missing.doc").string();
  CHECK(run(config) == 2);

  std::ofstream(dir / "garbage.doc") << "not a model\n";
  config = base_config(dir, "validate");
  config.input = (dir / "garbage.doc").string();
  CHECK(run(config) == 2);
}

TEST_CASE("split rewrites every grope root and reports the girth") {
  const fs::path dir = scratch("split");
  Rng rng(5);
  const Model m = random_grope(rng);
  save_model(m, (dir / "in.doc").string());
  RunConfig config = base_config(dir, "split");
  config.n = 2;

  CHECK(run(config) == 0);
  const json report = report_of(dir / "out");
  CHECK(report.at("labels_before") == report.at("labels_after"));
  CHECK(report.contains("girth"));
  const Model out = load_model((fs::path(config.out_dir) / "model.doc").string());
  CHECK(validate(out).empty());
  CHECK(label_set(out) == label_set(m));
}

TEST_CASE("split-pair cuts the first transverse pair in two") {
  const fs::path dir = scratch("split-pair");
  save_model(two_pairing_pair(), (dir / "in.doc").string());
  RunConfig config = base_config(dir, "split-pair");
  config.seed = 9;

  CHECK(run(config) == 0);
  const json report = report_of(dir / "out");
  CHECK(report.at("pairs") == 2);
  const Model out = load_model((fs::path(config.out_dir) / "model.doc").string());
  CHECK(validate(out).empty());
}

TEST_CASE("split-tower splits the first plannable disk") {
  const fs::path dir = scratch("split-tower");
  const Model m = splittable_tower();
  save_model(m, (dir / "in.doc").string());
  const RunConfig config = base_config(dir, "split-tower");

  CHECK(run(config) == 0);
  const json report = report_of(dir / "out");
  CHECK(report.contains("disk"));
  const Model out = load_model((fs::path(config.out_dir) / "model.doc").string());
  CHECK(validate(out).empty());
  CHECK(out.towers.front().layers.front().size() == 3);
}

TEST_CASE("handles attaches, discharges and certifies") {
  const fs::path dir = scratch("handles");
  save_model(fig_cycle_model(false), (dir / "in.doc").string());
  const RunConfig config = base_config(dir, "handles");

  CHECK(run(config) == 0);
  const json report = report_of(dir / "out");
  CHECK(report.at("records") == 4);
  CHECK(report.at("incidences") == 0);
  CHECK(report.at("certificate") == "identity");
}

TEST_CASE("unravel reports girths, copies and the shift assignment") {
  const fs::path dir = scratch("unravel");
  save_model(fig_cycle_model(false), (dir / "in.doc").string());
  RunConfig config = base_config(dir, "unravel");
  config.n = 3;

  CHECK(run(config) == 0);
  const json report = report_of(dir / "out");
  CHECK(report.at("girth_before") == 1);
  CHECK(report.at("girth_after") == 3);
  CHECK(report.at("copies").size() == 1);
  CHECK(report.at("copies").begin()->size() == 3);
  CHECK(report.at("shift").size() == 3);
  const Model out = load_model((fs::path(config.out_dir) / "model.doc").string());
  CHECK(out.pairs.size() == 3);
  CHECK(validate(out).empty());
}

TEST_CASE("pipeline reports the encoded tree") {
  const fs::path dir = scratch("pipeline");
  save_model(fig_cycle_model(false), (dir / "in.doc").string());
  RunConfig config = base_config(dir, "pipeline");
  config.n = 3;

  CHECK(run(config) == 0);
  const json report = report_of(dir / "out");
  CHECK(report.at("tree") == true);
  CHECK(report.at("girth") == "infinite");
  CHECK(report.at("certificate") == "upper-triangular-units");
  CHECK(report.at("tree_nodes") == 3);
  CHECK(report.at("push_downs").size() == 1);
  const Model out = load_model((fs::path(config.out_dir) / "model.doc").string());
  CHECK(validate(out).empty());
}

TEST_CASE("certify failures and pending obligations exit one") {
  const fs::path dir = scratch("certify");
  {
    Model bad;
    bad.generators = 1;
    const ObjectId h0 = bad.add_object(Kind::Sphere);
    const ObjectId h1 = bad.add_object(Kind::Sphere);
    bad.ledger.records.push_back(HandleRecord{0, 2, h0, {}});
    bad.ledger.records.push_back(HandleRecord{1, 2, h1, {}});
    bad.ledger.boundary.add(0, 0, GroupWord::identity(), 1);
    bad.ledger.boundary.add(1, 1, GroupWord::identity(), 1);
    bad.ledger.boundary.add(1, 0, GroupWord::parse("a"), 1);
    save_model(bad, (dir / "in.doc").string());
  }
  RunConfig config = base_config(dir, "certify");
  CHECK(run(config) == 1);
  json report = report_of(dir / "out");
  CHECK(report.at("certificate") == "fail(row 1, col 0, entry 1*a)");

  save_model(attach_pair_handles(fig_cycle_model(false), 0), (dir / "in.doc").string());
  config.out_dir = (dir / "pending").string();
  CHECK(run(config) == 1);
  report = report_of(dir / "pending");
  const std::string error = report.at("error");
  CHECK(error.find("pending obligations") != std::string::npos);
  CHECK(error.find("handle 0") != std::string::npos);
}

TEST_CASE("an exhausted budget exits three with the partial model") {
  const fs::path dir = scratch("budget");
  save_model(two_pairing_pair(), (dir / "in.doc").string());
  RunConfig config = base_config(dir, "pipeline");
  config.n = 3;
  config.budget = 40;

  CHECK(run(config) == 3);
  const json report = report_of(dir / "out");
  CHECK(report.at("stage") == "pipeline");
  CHECK(report.contains("error"));
  const Model partial = load_model((fs::path(config.out_dir) / "model.doc").string());
  CHECK(!partial.objects.empty());
}

TEST_CASE("fuzz runs the operation rotation from its seed") {
  const fs::path dir = scratch("fuzz");
  save_model(fig_cycle_model(false), (dir / "in.doc").string());
  RunConfig config = base_config(dir, "fuzz");
  config.n = 10;
  config.seed = 42;

  CHECK(run(config) == 0);
  const json report = report_of(dir / "out");
  CHECK(report.at("instances") == 10);
  CHECK(!report.contains("failure"));
}

TEST_CASE("dot artifacts appear on demand") {
  const fs::path dir = scratch("dot");
  save_model(fig_cycle_model(true), (dir / "in.doc").string());
  RunConfig config = base_config(dir, "validate");
  config.dot = true;

  CHECK(run(config) == 0);
  const std::string before = slurp(fs::path(config.out_dir) / "before.dot");
  const std::string after = slurp(fs::path(config.out_dir) / "after.dot");
  CHECK(before.find("graph") != std::string::npos);
  CHECK(before == after);
}

TEST_CASE("repeated runs are byte-identical") {
  const fs::path dir = scratch("determinism");
  Rng rng(11);
  save_model(random_grope(rng), (dir / "in.doc").string());
  RunConfig config = base_config(dir, "split");
  config.n = 2;
  RunConfig again = config;
  again.out_dir = (dir / "out2").string();

  CHECK(run(config) == 0);
  CHECK(run(again) == 0);
  CHECK(slurp(fs::path(config.out_dir) / "model.doc") ==
        slurp(fs::path(again.out_dir) / "model.doc"));
  CHECK(slurp(fs::path(config.out_dir) / "report.doc") ==
        slurp(fs::path(again.out_dir) / "report.doc"));

  // The emitted document round-trips through parse and print unchanged.
  const std::string text = slurp(fs::path(config.out_dir) / "model.doc");
  CHECK(print_model(parse_model(text)) == text);
}

}  // namespace grope
