#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "spe/model.hpp"

namespace spe {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {"n_sites", "sublattice", "afm_edges", "fm_edges", "fields"};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ModelParseError(where + ": " + what);
}

std::size_t site_index(const json& value, const std::string& where) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    fail(where, "site index must be a non-negative integer");
  }
  return value.get<std::size_t>();
}

double weight_value(const json& value, const std::string& where) {
  if (!value.is_number()) fail(where, "weight must be a number");
  return value.get<double>();
}

template <typename Edge>
std::vector<Edge> parse_edges(const json& doc, const char* key) {
  std::vector<Edge> edges;
  if (!doc.contains(key)) return edges;
  const json& list = doc.at(key);
  if (!list.is_array()) fail(key, "expected an array of [i, j, w] triples");
  for (std::size_t idx = 0; idx < list.size(); ++idx) {
    const std::string where = std::string(key) + "[" + std::to_string(idx) + "]";
    const json& item = list[idx];
    if (!item.is_array() || item.size() != 3) fail(where, "expected [i, j, w]");
    edges.push_back(Edge{site_index(item[0], where + "[0]"), site_index(item[1], where + "[1]"),
                         weight_value(item[2], where + "[2]")});
  }
  return edges;
}

}  // namespace

BipartiteModel parse_model(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("document", "expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kKnownKeys.contains(key)) fail(key, "unknown key");
  }
  if (!doc.contains("n_sites")) fail("n_sites", "missing");
  if (!doc.contains("sublattice")) fail("sublattice", "missing");

  const json& n_json = doc.at("n_sites");
  if (!n_json.is_number_integer() || n_json.get<long long>() < 0) fail("n_sites", "must be a non-negative integer");
  const auto n_sites = n_json.get<std::size_t>();

  const json& labels = doc.at("sublattice");
  if (!labels.is_array()) fail("sublattice", "expected an array of \"A\"/\"B\"");
  if (labels.size() != n_sites) {
    fail("sublattice", "has " + std::to_string(labels.size()) + " entries, n_sites is " + std::to_string(n_sites));
  }
  std::vector<Sublattice> sublattice;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string where = "sublattice[" + std::to_string(i) + "]";
    if (!labels[i].is_string()) fail(where, "expected \"A\" or \"B\"");
    const auto label = labels[i].get<std::string>();
    if (label == "A") {
      sublattice.push_back(Sublattice::A);
    } else if (label == "B") {
      sublattice.push_back(Sublattice::B);
    } else {
      fail(where, "expected \"A\" or \"B\", got \"" + label + "\"");
    }
  }

  auto afm = parse_edges<AfmEdge>(doc, "afm_edges");
  auto fm = parse_edges<FmEdge>(doc, "fm_edges");

  std::vector<double> fields;
  if (doc.contains("fields")) {
    const json& list = doc.at("fields");
    if (!list.is_array()) fail("fields", "expected an array of numbers");
    if (!list.empty() && list.size() != n_sites) {
      fail("fields", "has " + std::to_string(list.size()) + " entries, n_sites is " + std::to_string(n_sites));
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      fields.push_back(weight_value(list[i], "fields[" + std::to_string(i) + "]"));
    }
  }
  return BipartiteModel(std::move(sublattice), std::move(afm), std::move(fm), std::move(fields));
}

BipartiteModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelParseError(path + ": cannot open model file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_model(buffer.str());
  } catch (const ModelParseError& e) {
    throw ModelParseError(path + ": " + e.what());
  }
}

std::string model_to_json(const BipartiteModel& model) {
  json doc;
  doc["n_sites"] = model.n_sites();
  json labels = json::array();
  for (std::size_t i = 0; i < model.n_sites(); ++i) {
    labels.push_back(std::string(1, to_char(model.original_sublattice(i))));
  }
  doc["sublattice"] = labels;
  json afm = json::array();
  for (const auto& e : model.afm_edges()) afm.push_back({e.i, e.j, e.weight});
  doc["afm_edges"] = afm;
  json fm = json::array();
  for (const auto& e : model.fm_edges()) fm.push_back({e.k, e.l, e.weight});
  doc["fm_edges"] = fm;
  doc["fields"] = std::vector<double>(model.fields().begin(), model.fields().end());
  return doc.dump();
}

}  // namespace spe
