#include "grope/serialize.hpp"

#include <fstream>
#include <sstream>

#include "grope/errors.hpp"

namespace grope {

using nlohmann::json;

namespace {

json word_to_json(const GroupWord& w) { return w.str(); }

GroupWord word_from_json(const json& j, const char* where) {
  if (!j.is_string())
    throw ParseError(std::string(where) + ": label must be a string");
  return GroupWord::parse(j.get<std::string>());
}

json object_to_json(const Object& o) {
  json j;
  j["id"] = o.id;
  j["kind"] = kind_name(o.kind);
  j["class"] = o.cls;
  j["genus"] = o.pairs.size();
  if (o.parent) j["parent"] = *o.parent;
  json ps = json::array();
  for (const DualPair& p : o.pairs) ps.push_back({{"left", p.left}, {"right", p.right}});
  j["children"] = std::move(ps);
  if (o.height) j["height"] = *o.height;
  if (o.dyadic) j["dyadic"] = true;
  if (o.transverse) j["transverse"] = *o.transverse;
  if (o.dual_to) j["dual_to"] = *o.dual_to;
  if (o.cap_a) j["cap_a"] = *o.cap_a;
  if (o.cap_b) j["cap_b"] = *o.cap_b;
  if (o.cancels) j["cancels"] = *o.cancels;
  return j;
}

json edge_to_json(const Edge& e) {
  json j;
  j["id"] = e.id;
  j["endpoints"] = {e.a, e.b};
  j["label"] = word_to_json(e.label);
  if (e.pairing) j["pairing"] = *e.pairing;
  return j;
}

json ledger_to_json(const HandleLedger& l) {
  json j;
  json hs = json::array();
  for (const HandleRecord& h : l.records)
    hs.push_back({{"index", h.index},
                  {"dimension", h.dimension},
                  {"site", h.site},
                  {"duals", h.duals}});
  j["handles"] = std::move(hs);
  json obs = json::array();
  for (const Obligation& o : l.obligations)
    obs.push_back({{"handle", o.handle}, {"dual", o.dual}, {"host", o.host}});
  j["obligations"] = std::move(obs);
  json ins = json::array();
  for (const Incidence& i : l.incidences) {
    json ji = {{"from", i.from}, {"to", i.to}, {"label", word_to_json(i.label)}};
    if (i.edge) ji["edge"] = *i.edge;
    ins.push_back(std::move(ji));
  }
  j["incidences"] = std::move(ins);
  json cells = json::array();
  for (const auto& [pos, element] : l.boundary.entries) {
    json terms = json::array();
    for (const auto& [word, coeff] : element)
      terms.push_back({{"word", word_to_json(word)}, {"coeff", coeff}});
    cells.push_back({{"row", pos.first}, {"col", pos.second}, {"terms", std::move(terms)}});
  }
  j["boundary"] = std::move(cells);
  return j;
}

const json& need(const json& j, const char* key, const char* where) {
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(std::string(where) + ": missing key \"" + key + "\"");
  return *it;
}

std::uint32_t need_u32(const json& j, const char* key, const char* where) {
  const json& v = need(j, key, where);
  if (!v.is_number_unsigned())
    throw ParseError(std::string(where) + ": \"" + key + "\" must be a non-negative integer");
  return v.get<std::uint32_t>();
}

int need_int(const json& j, const char* key, const char* where) {
  const json& v = need(j, key, where);
  if (!v.is_number_integer())
    throw ParseError(std::string(where) + ": \"" + key + "\" must be an integer");
  return v.get<int>();
}

std::optional<std::uint32_t> opt_u32(const json& j, const char* key, const char* where) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_unsigned())
    throw ParseError(std::string(where) + ": \"" + key + "\" must be a non-negative integer");
  return it->get<std::uint32_t>();
}

Object object_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("objects: entries must be JSON objects");
  Object o;
  o.id = need_u32(j, "id", "objects");
  const json& kind = need(j, "kind", "objects");
  if (!kind.is_string()) throw ParseError("objects: \"kind\" must be a string");
  auto k = kind_from_name(kind.get<std::string>());
  if (!k) throw ParseError("objects: unknown kind \"" + kind.get<std::string>() + "\"");
  o.kind = *k;
  o.cls = need_u32(j, "class", "objects");
  o.parent = opt_u32(j, "parent", "objects");
  if (auto it = j.find("children"); it != j.end()) {
    if (!it->is_array()) throw ParseError("objects: \"children\" must be an array");
    for (const json& p : *it)
      o.pairs.push_back({need_u32(p, "left", "children"), need_u32(p, "right", "children")});
  }
  if (auto it = j.find("genus"); it != j.end()) {
    if (!it->is_number_unsigned() || it->get<std::size_t>() != o.pairs.size())
      throw ParseError("objects: \"genus\" must equal the number of child pairs");
  }
  if (auto it = j.find("height"); it != j.end() && !it->is_null())
    o.height = need_int(j, "height", "objects");
  if (auto it = j.find("dyadic"); it != j.end()) {
    if (!it->is_boolean()) throw ParseError("objects: \"dyadic\" must be a boolean");
    o.dyadic = it->get<bool>();
  }
  o.transverse = opt_u32(j, "transverse", "objects");
  o.dual_to = opt_u32(j, "dual_to", "objects");
  o.cap_a = opt_u32(j, "cap_a", "objects");
  o.cap_b = opt_u32(j, "cap_b", "objects");
  o.cancels = opt_u32(j, "cancels", "objects");
  return o;
}

Edge edge_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("edges: entries must be JSON objects");
  Edge e;
  e.id = need_u32(j, "id", "edges");
  const json& ends = need(j, "endpoints", "edges");
  if (!ends.is_array() || ends.size() != 2 || !ends[0].is_number_unsigned() ||
      !ends[1].is_number_unsigned())
    throw ParseError("edges: \"endpoints\" must be a pair of object ids");
  e.a = ends[0].get<std::uint32_t>();
  e.b = ends[1].get<std::uint32_t>();
  if (e.a > e.b) std::swap(e.a, e.b);
  e.label = word_from_json(need(j, "label", "edges"), "edges");
  e.pairing = opt_u32(j, "pairing", "edges");
  return e;
}

HandleLedger ledger_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("ledger: must be a JSON object");
  HandleLedger l;
  for (const json& h : need(j, "handles", "ledger")) {
    HandleRecord r;
    r.index = need_int(h, "index", "handles");
    r.dimension = need_int(h, "dimension", "handles");
    r.site = need_u32(h, "site", "handles");
    for (const json& d : need(h, "duals", "handles")) {
      if (!d.is_number_unsigned())
        throw ParseError("handles: \"duals\" must hold non-negative integers");
      r.duals.push_back(d.get<std::uint32_t>());
    }
    l.records.push_back(std::move(r));
  }
  for (const json& o : need(j, "obligations", "ledger"))
    l.obligations.push_back({need_int(o, "handle", "obligations"),
                             need_u32(o, "dual", "obligations"),
                             need_u32(o, "host", "obligations")});
  for (const json& i : need(j, "incidences", "ledger")) {
    Incidence in;
    in.from = need_int(i, "from", "incidences");
    in.to = need_int(i, "to", "incidences");
    in.label = word_from_json(need(i, "label", "incidences"), "incidences");
    in.edge = opt_u32(i, "edge", "incidences");
    l.incidences.push_back(std::move(in));
  }
  for (const json& c : need(j, "boundary", "ledger")) {
    int row = need_int(c, "row", "boundary");
    int col = need_int(c, "col", "boundary");
    GroupRingElement element;
    for (const json& t : need(c, "terms", "boundary")) {
      GroupWord w = word_from_json(need(t, "word", "boundary"), "boundary");
      element[w] += need_int(t, "coeff", "boundary");
    }
    std::erase_if(element, [](const auto& kv) { return kv.second == 0; });
    if (!element.empty()) l.boundary.entries[{row, col}] = std::move(element);
  }
  return l;
}

}  // namespace

json to_json(const Model& m) {
  json j;
  j["generators"] = m.generators;
  json objs = json::array();
  for (const auto& [id, o] : m.objects) objs.push_back(object_to_json(o));
  j["objects"] = std::move(objs);
  json edges = json::array();
  for (const auto& [id, e] : m.edges) edges.push_back(edge_to_json(e));
  j["edges"] = std::move(edges);
  json pairs = json::array();
  for (const TransversePair& p : m.pairs)
    pairs.push_back({{"sphere_a", p.sphere_a},
                     {"sphere_b", p.sphere_b},
                     {"distinguished", p.distinguished},
                     {"extras", p.extras}});
  j["pairs"] = std::move(pairs);
  json towers = json::array();
  for (const WhitneyTower& t : m.towers)
    towers.push_back({{"pair", t.pair_index}, {"layers", t.layers}});
  j["towers"] = std::move(towers);
  j["ledger"] = ledger_to_json(m.ledger);
  j["next"] = {{"object", m.next_object},
               {"edge", m.next_edge},
               {"class", m.next_class},
               {"pairing", m.next_pairing}};
  return j;
}

Model model_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("document: top level must be a JSON object");
  Model m;
  const json& gens = need(j, "generators", "document");
  if (!gens.is_number_unsigned())
    throw ParseError("document: \"generators\" must be a non-negative integer");
  m.generators = gens.get<unsigned>();

  const json& objs = need(j, "objects", "document");
  if (!objs.is_array()) throw ParseError("document: \"objects\" must be an array");
  for (const json& jo : objs) {
    Object o = object_from_json(jo);
    if (!m.objects.emplace(o.id, o).second)
      throw ParseError("objects: duplicate id " + std::to_string(o.id));
  }
  const json& edges = need(j, "edges", "document");
  if (!edges.is_array()) throw ParseError("document: \"edges\" must be an array");
  for (const json& je : edges) {
    Edge e = edge_from_json(je);
    if (!m.edges.emplace(e.id, e).second)
      throw ParseError("edges: duplicate id " + std::to_string(e.id));
  }
  if (auto it = j.find("pairs"); it != j.end()) {
    if (!it->is_array()) throw ParseError("document: \"pairs\" must be an array");
    for (const json& jp : *it) {
      TransversePair p;
      p.sphere_a = need_u32(jp, "sphere_a", "pairs");
      p.sphere_b = need_u32(jp, "sphere_b", "pairs");
      p.distinguished = need_u32(jp, "distinguished", "pairs");
      for (const json& x : need(jp, "extras", "pairs")) {
        if (!x.is_number_unsigned())
          throw ParseError("pairs: \"extras\" must hold non-negative integers");
        p.extras.push_back(x.get<std::uint32_t>());
      }
      m.pairs.push_back(std::move(p));
    }
  }
  if (auto it = j.find("towers"); it != j.end()) {
    if (!it->is_array()) throw ParseError("document: \"towers\" must be an array");
    for (const json& jt : *it) {
      WhitneyTower t;
      t.pair_index = need_int(jt, "pair", "towers");
      for (const json& layer : need(jt, "layers", "towers")) {
        std::vector<ObjectId> ids;
        for (const json& d : layer) {
          if (!d.is_number_unsigned())
            throw ParseError("towers: layers must hold non-negative integers");
          ids.push_back(d.get<std::uint32_t>());
        }
        t.layers.push_back(std::move(ids));
      }
      m.towers.push_back(std::move(t));
    }
  }
  if (auto it = j.find("ledger"); it != j.end()) m.ledger = ledger_from_json(*it);

  // Counters restore exactly when present; otherwise start past the used ids.
  if (auto it = j.find("next"); it != j.end()) {
    m.next_object = need_u32(*it, "object", "next");
    m.next_edge = need_u32(*it, "edge", "next");
    m.next_class = need_u32(*it, "class", "next");
    m.next_pairing = need_u32(*it, "pairing", "next");
  } else {
    for (const auto& [id, o] : m.objects) {
      m.next_object = std::max(m.next_object, id + 1);
      m.next_class = std::max(m.next_class, o.cls + 1);
    }
    for (const auto& [id, e] : m.edges) {
      m.next_edge = std::max(m.next_edge, id + 1);
      if (e.pairing) m.next_pairing = std::max(m.next_pairing, *e.pairing + 1);
    }
  }
  return m;
}

std::string print_model(const Model& m) { return to_json(m).dump(2) + "\n"; }

Model parse_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("document: ") + e.what());
  }
  return model_from_json(j);
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

void save_model(const Model& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << print_model(m);
}

}  // namespace grope
