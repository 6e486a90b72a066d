#include "fence/document.hpp"

#include <set>

#include "json.hpp"

namespace fence {

using nlohmann::json;
using nlohmann::ordered_json;

DocumentError::DocumentError(std::string where, const std::string& message)
    : std::runtime_error(where.empty() ? message : where + ": " + message), where_(std::move(where)) {}

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw DocumentError(where.empty() ? key : where + "." + key, "unknown field");
  }
}

const json& field(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DocumentError(where, "missing field \"" + key + "\"");
  return *it;
}

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

Rational rational_at(const json& value, const std::string& where) {
  if (!value.is_string()) throw DocumentError(where, "expected a rational string such as \"7/3\"");
  try {
    return Rational::parse(value.get<std::string>());
  } catch (const std::exception& e) {
    throw DocumentError(where, e.what());
  }
}

std::uint64_t unsigned_at(const json& value, const std::string& where) {
  if (!value.is_number_unsigned()) throw DocumentError(where, "expected a non-negative integer");
  return value.get<std::uint64_t>();
}

DocumentMetadata parse_metadata(const json& obj) {
  const std::string where = "metadata";
  if (!obj.is_object()) throw DocumentError(where, "expected an object");
  reject_unknown(obj, {"name", "provenance", "seed", "budget", "grid"}, where);
  DocumentMetadata m;
  for (const char* key : {"name", "provenance"}) {
    if (!obj.contains(key)) continue;
    const json& v = obj.at(key);
    if (!v.is_string()) throw DocumentError(join(where, key), "expected a string");
    (std::string(key) == "name" ? m.name : m.provenance) = v.get<std::string>();
  }
  if (obj.contains("seed")) m.seed = unsigned_at(obj.at("seed"), join(where, "seed"));
  if (obj.contains("budget")) m.budget = unsigned_at(obj.at("budget"), join(where, "budget"));
  if (obj.contains("grid")) {
    const json& v = obj.at("grid");
    if (!v.is_number_integer()) throw DocumentError(join(where, "grid"), "expected an integer");
    m.grid = v.get<std::int64_t>();
  }
  return m;
}

AgentEntry parse_agent(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw DocumentError(where, "expected an object");
  reject_unknown(obj, {"speed", "weight", "breakpoints"}, where);
  AgentEntry a;
  a.speed = rational_at(field(obj, "speed", where), join(where, "speed"));
  a.weight = rational_at(field(obj, "weight", where), join(where, "weight"));
  const json& pts = field(obj, "breakpoints", where);
  const std::string pw = join(where, "breakpoints");
  if (!pts.is_array()) throw DocumentError(pw, "expected an array of [t, x] pairs");
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const std::string bw = pw + "[" + std::to_string(j) + "]";
    const json& p = pts[j];
    if (!p.is_array() || p.size() != 2) throw DocumentError(bw, "expected a [t, x] pair");
    a.breakpoints.push_back({rational_at(p[0], bw + "[0]"), rational_at(p[1], bw + "[1]")});
  }
  return a;
}

}  // namespace

ScheduleDocument parse_document(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DocumentError("", std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw DocumentError("", "expected a JSON object");
  reject_unknown(root, {"format_version", "fence_length", "period", "agents", "metadata"}, "");

  ScheduleDocument doc;
  const json& version = field(root, "format_version", "");
  if (!version.is_number_integer() || version.get<long long>() != kFormatVersion) {
    throw DocumentError("format_version", "unsupported version (expected " + std::to_string(kFormatVersion) + ")");
  }
  doc.format_version = kFormatVersion;
  doc.fence_length = rational_at(field(root, "fence_length", ""), "fence_length");
  doc.period = rational_at(field(root, "period", ""), "period");
  const json& agents = field(root, "agents", "");
  if (!agents.is_array()) throw DocumentError("agents", "expected an array");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    doc.agents.push_back(parse_agent(agents[i], "agents[" + std::to_string(i) + "]"));
  }
  if (root.contains("metadata")) doc.metadata = parse_metadata(root.at("metadata"));
  return doc;
}

std::string emit_document(const ScheduleDocument& doc) {
  ordered_json root;
  root["format_version"] = doc.format_version;
  root["fence_length"] = doc.fence_length.to_string();
  root["period"] = doc.period.to_string();
  ordered_json agents = ordered_json::array();
  for (const auto& a : doc.agents) {
    ordered_json entry;
    entry["speed"] = a.speed.to_string();
    entry["weight"] = a.weight.to_string();
    ordered_json pts = ordered_json::array();
    for (const auto& b : a.breakpoints) pts.push_back({b.t.to_string(), b.x.to_string()});
    entry["breakpoints"] = std::move(pts);
    agents.push_back(std::move(entry));
  }
  root["agents"] = std::move(agents);
  if (doc.metadata) {
    const DocumentMetadata& m = *doc.metadata;
    ordered_json meta = ordered_json::object();
    if (m.name) meta["name"] = *m.name;
    if (m.provenance) meta["provenance"] = *m.provenance;
    if (m.seed) meta["seed"] = *m.seed;
    if (m.budget) meta["budget"] = *m.budget;
    if (m.grid) meta["grid"] = *m.grid;
    root["metadata"] = std::move(meta);
  }
  return root.dump(2) + "\n";
}

ScheduleDocument to_document(const Schedule& s, std::optional<DocumentMetadata> metadata) {
  ScheduleDocument doc;
  doc.fence_length = s.fence_length;
  doc.period = s.period;
  for (const auto& a : s.agents) {
    doc.agents.push_back({a.spec.speed(), a.spec.weight(), a.trajectory.breakpoints()});
  }
  doc.metadata = std::move(metadata);
  return doc;
}

Schedule to_schedule(const ScheduleDocument& doc) {
  if (doc.period.sign() <= 0) throw DocumentError("period", "must be positive");
  Schedule s{doc.fence_length, doc.period, {}};
  for (std::size_t i = 0; i < doc.agents.size(); ++i) {
    const AgentEntry& a = doc.agents[i];
    const std::string where = "agents[" + std::to_string(i) + "]";
    std::optional<AgentSpec> spec;
    try {
      spec.emplace(a.speed, a.weight);
    } catch (const std::invalid_argument& e) {
      throw DocumentError(where, e.what());
    }
    try {
      s.agents.push_back({*spec, Trajectory(doc.period, a.breakpoints)});
    } catch (const std::invalid_argument& e) {
      throw DocumentError(where + ".breakpoints", e.what());
    }
  }
  return s;
}

}  // namespace fence
