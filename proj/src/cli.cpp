#include "grope/cli.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "grope/canonical.hpp"
#include "grope/dot.hpp"
#include "grope/errors.hpp"
#include "grope/generators.hpp"
#include "grope/graph_view.hpp"
#include "grope/ledger.hpp"
#include "grope/model.hpp"
#include "grope/pipeline.hpp"
#include "grope/serialize.hpp"
#include "grope/splitting.hpp"
#include "grope/unravel.hpp"

namespace grope {

namespace {

using nlohmann::json;

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

json girth_json(const std::optional<std::size_t>& g, const char* absent) {
  if (g) return *g;
  return absent;
}

json labels_json(const Model& m) {
  json arr = json::array();
  for (const GroupWord& w : label_set(m)) arr.push_back(w.str());
  return arr;
}

/// One fuzz campaign: seeded random instances rotated across the splitting
/// operations, each checked for label-set conservation and a clean validate.
struct FuzzOutcome {
  std::size_t instances = 0;
  std::string failure;  ///< empty when every instance passed
};

FuzzOutcome run_fuzz(std::uint64_t seed, int count) {
  Rng rng(seed);
  FuzzOutcome outcome;
  for (int i = 0; i < count; ++i) {
    const int op = i % 5;
    Model before;
    Model after;
    bool made = false;
    for (int attempt = 0; attempt < 32 && !made; ++attempt) {
      switch (op) {
        case 0: {  // split_surface on the first cap or stage with an open plan
          before = random_grope(rng);
          for (ObjectId o : before.subtree(before.grope_roots().front())) {
            if (before.at(o).kind == Kind::BaseSurface) continue;
            if (auto plan = random_split_plan(rng, before, o)) {
              after = split_surface(before, *plan);
              made = true;
              break;
            }
          }
          break;
        }
        case 1: {
          before = random_grope(rng);
          after = split_to_dyadic(before, before.grope_roots().front());
          made = true;
          break;
        }
        case 2: {
          before = random_grope(rng);
          after = split_to_distance(before, before.grope_roots().front(),
                                    1 + static_cast<std::size_t>(i % 3));
          made = true;
          break;
        }
        case 3: {
          before = random_pair_model(rng);
          if (auto plan = random_pair_plan(rng, before, 0)) {
            after = split_transverse_pair(before, 0, *plan);
            made = true;
          }
          break;
        }
        default: {
          before = random_tower_model(rng);
          for (const auto& layer : before.towers.front().layers) {
            for (ObjectId disk : layer) {
              if (auto plan = random_split_plan(rng, before, disk)) {
                after = split_whitney_disk(before, 0, disk, *plan);
                made = true;
                break;
              }
            }
            if (made) break;
          }
          break;
        }
      }
    }
    if (!made) {
      outcome.failure =
          "no splittable instance drawn for operation " + std::to_string(op);
      return outcome;
    }
    if (label_set(before) != label_set(after)) {
      outcome.failure = "label set changed on instance " + std::to_string(i);
      return outcome;
    }
    if (const auto violations = validate(after); !violations.empty()) {
      outcome.failure = "structural violation on instance " +
                        std::to_string(i) + ": " +
                        violations.front().message;
      return outcome;
    }
    ++outcome.instances;
  }
  return outcome;
}

}  // namespace

int run(const RunConfig& config) {
  static const std::set<std::string> known = {
      "validate", "split",   "split-pair", "split-tower", "handles",
      "unravel",  "pipeline", "certify",   "fuzz"};
  if (!known.count(config.command) || config.n < 1 || config.budget < 1)
    return 2;

  Model m;
  try {
    m = load_model(config.input);
  } catch (const Error&) {
    return 2;
  }

  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) return 2;
  const std::filesystem::path out_dir(config.out_dir);

  json report;
  report["command"] = config.command;
  Model out = m;
  int status = 0;
  const Budget budget{static_cast<std::size_t>(config.budget)};

  try {
    if (config.command == "validate") {
      json arr = json::array();
      for (const Violation& v : validate(m))
        arr.push_back({{"subject", v.subject},
                       {"rule", v.rule},
                       {"message", v.message}});
      report["violations"] = arr;
      if (!arr.empty()) status = 1;
    } else if (config.command == "split") {
      const auto roots = m.grope_roots();
      if (roots.empty())
        throw PreconditionError("model has no grope roots to split");
      report["labels_before"] = labels_json(m);
      for (ObjectId root : roots)
        out = split_to_distance(out, root,
                                static_cast<std::size_t>(config.n), budget);
      report["labels_after"] = labels_json(out);
      report["girth"] =
          girth_json(girth(GraphView(out, surface_view())), "infinite");
    } else if (config.command == "split-pair") {
      if (m.pairs.empty())
        throw PreconditionError("model has no transverse pairs");
      Rng rng(config.seed);
      const auto plan = random_pair_plan(rng, m, 0);
      if (!plan)
        throw PreconditionError("transverse pair 0 admits no bipartition");
      out = split_transverse_pair(m, 0, *plan);
      report["pairs"] = out.pairs.size();
      report["labels_after"] = labels_json(out);
    } else if (config.command == "split-tower") {
      if (m.towers.empty())
        throw PreconditionError("model has no Whitney towers");
      Rng rng(config.seed);
      bool done = false;
      for (const auto& layer : m.towers.front().layers) {
        for (ObjectId disk : layer) {
          if (const auto plan = random_split_plan(rng, m, disk)) {
            out = split_whitney_disk(m, 0, disk, *plan);
            report["disk"] = disk;
            done = true;
            break;
          }
        }
        if (done) break;
      }
      if (!done)
        throw PreconditionError("no splittable disk in tower 0");
      report["labels_after"] = labels_json(out);
    } else if (config.command == "handles") {
      for (std::size_t i = 0; i < m.pairs.size(); ++i)
        out = attach_pair_handles(out, static_cast<int>(i));
      while (!out.ledger.obligations.empty())
        out = discharge_obligation(out, out.ledger.obligations.front().dual);
      report["records"] = out.ledger.records.size();
      report["incidences"] = out.ledger.incidences.size();
      report["certificate"] = certify(out).str();
    } else if (config.command == "unravel") {
      auto [rewritten, rep] =
          unravel(m, 0, static_cast<std::size_t>(config.n), budget);
      out = std::move(rewritten);
      report["girth_before"] = girth_json(rep.girth_before, "none");
      report["girth_after"] = girth_json(rep.girth_after, "none");
      json copies = json::object();
      for (const auto& [original, made] : rep.copies_made)
        copies[std::to_string(original)] = made;
      report["copies"] = copies;
      json shift = json::object();
      for (const auto& [torus, handle] : rep.shift_assignment)
        shift[std::to_string(torus)] = handle;
      report["shift"] = shift;
    } else if (config.command == "pipeline") {
      auto [rewritten, rep] = theorem1_pipeline(
          m, 0, static_cast<std::size_t>(config.n), 2, budget);
      out = std::move(rewritten);
      report["tree"] = rep.tree;
      report["girth"] = girth_json(rep.girth, "infinite");
      report["certificate"] = rep.certificate;
      report["distinguished_cap"] = rep.distinguished_cap;
      report["tree_nodes"] = rep.tree_nodes;
      report["push_downs"] = rep.push_downs;
    } else if (config.command == "certify") {
      const Certificate cert = certify(m);
      report["certificate"] = cert.str();
      if (cert.kind == Certificate::Kind::Fail) status = 1;
    } else {  // fuzz
      const FuzzOutcome fuzz = run_fuzz(config.seed, config.n);
      report["instances"] = fuzz.instances;
      if (!fuzz.failure.empty()) {
        report["failure"] = fuzz.failure;
        status = 1;
      }
    }
  } catch (const BudgetError& e) {
    report["error"] = e.what();
    report["stage"] = e.stage;
    if (e.partial) out = *e.partial;
    status = 3;
  } catch (const Error& e) {
    report["error"] = e.what();
    status = 1;
  }

  save_model(out, (out_dir / "model.doc").string());
  write_text(out_dir / "report.doc", report.dump(2) + "\n");
  if (config.dot) {
    write_text(out_dir / "before.dot", to_dot(m));
    write_text(out_dir / "after.dot", to_dot(out));
  }
  return status;
}

}  // namespace grope
