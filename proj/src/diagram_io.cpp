#include "limterm/diagrams.hpp"

#include "limterm/error.hpp"

#include <json.hpp>

namespace limterm {

namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& path, const std::string& msg) {
  fail(ErrorKind::Parse, "field " + (path.empty() ? std::string("/") : path) + ": " + msg);
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports "line L, column C" in the message.
    fail(ErrorKind::Parse, std::string("malformed JSON: ") + e.what());
  }
}

const json& member(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) {
    field_error(path, "expected an object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    field_error(path + "/" + key, "missing");
  }
  return *it;
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) field_error(path, "expected a string");
  return v.get<std::string>();
}

FiniteModule as_module(const json& v, const std::string& path) {
  try {
    const auto inst = parse_instance(as_string(v, path));
    if (const auto* f = std::get_if<FiniteModule>(&inst)) {
      return *f;
    }
  } catch (const Error& e) {
    field_error(path, e.what());
  }
  field_error(path, "levels must be finite modules");
}

Homomorphism as_hom(const json& v, const std::string& path, const FiniteModule& domain, const FiniteModule& codomain) {
  if (!v.is_array()) field_error(path, "expected an array of image indices");
  std::vector<std::size_t> table;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_unsigned()) field_error(path + "/" + std::to_string(i), "expected a non-negative integer");
    table.push_back(v[i].get<std::size_t>());
  }
  try {
    return Homomorphism::from_table(domain, codomain, std::move(table));
  } catch (const Error& e) {
    field_error(path, e.what());
  }
}

std::vector<std::size_t> table_json(const Homomorphism& f) { return f.table(); }

InverseSystem system_from(const json& doc, const std::string& path) {
  const auto index = as_string(member(doc, path, "index"), path + "/index");
  const auto& prefix_json = member(doc, path, "prefix");
  if (!prefix_json.is_array() || prefix_json.empty()) field_error(path + "/prefix", "expected a non-empty array");
  std::vector<FiniteModule> levels;
  for (std::size_t k = 0; k < prefix_json.size(); ++k) {
    levels.push_back(as_module(prefix_json[k], path + "/prefix/" + std::to_string(k)));
  }
  std::vector<Homomorphism> maps;
  if (levels.size() > 1) {
    const auto& maps_json = member(doc, path, "maps");
    if (!maps_json.is_array() || maps_json.size() + 1 != levels.size()) {
      field_error(path + "/maps", "expected " + std::to_string(levels.size() - 1) + " maps");
    }
    for (std::size_t k = 0; k < maps_json.size(); ++k) {
      maps.push_back(as_hom(maps_json[k], path + "/maps/" + std::to_string(k), levels[k + 1], levels[k]));
    }
  }
  Ordinal alpha;
  try {
    alpha = Ordinal::parse(index);
  } catch (const Error& e) {
    field_error(path + "/index", e.what());
  }
  if (alpha == Ordinal::omega()) {
    const auto tail = as_string(member(doc, path, "tail"), path + "/tail");
    if (tail == "constant") {
      std::optional<Homomorphism> tail_map;
      if (doc.contains("tail_map")) {
        tail_map = as_hom(doc["tail_map"], path + "/tail_map", levels.back(), levels.back());
      }
      return InverseSystem::constant_tail(std::move(levels), std::move(maps), std::move(tail_map));
    }
    if (tail == "repeat-last-block") {
      const auto& block = member(doc, path, "block");
      if (!block.is_number_unsigned() || block.get<std::size_t>() == 0 || block.get<std::size_t>() > levels.size()) {
        field_error(path + "/block", "expected a block length between 1 and " + std::to_string(levels.size()));
      }
      const auto p = block.get<std::size_t>();
      auto closing = as_hom(member(doc, path, "closing_map"), path + "/closing_map", levels[levels.size() - p],
                            levels.back());
      return InverseSystem::omega(std::move(levels), std::move(maps), Tail{p, std::move(closing)});
    }
    field_error(path + "/tail", "expected \"constant\" or \"repeat-last-block\", got \"" + tail + "\"");
  }
  const auto n = alpha.finite_value();
  if (!n) field_error(path + "/index", "expected a natural number or w");
  if (*n != levels.size()) {
    field_error(path + "/prefix", "index " + std::to_string(*n) + " needs " + std::to_string(*n) + " levels, got " +
                                      std::to_string(levels.size()));
  }
  if (doc.contains("tail")) field_error(path + "/tail", "only systems indexed by w have a tail");
  return InverseSystem::finite(std::move(levels), std::move(maps));
}

json system_json(const InverseSystem& sys) {
  json doc;
  doc["index"] = sys.index().to_string();
  json levels = json::array();
  for (const auto& l : sys.prefix()) levels.push_back(l.to_string());
  doc["prefix"] = levels;
  json maps = json::array();
  for (std::size_t k = 0; k + 1 < sys.prefix_length(); ++k) maps.push_back(table_json(sys.map(k)));
  doc["maps"] = maps;
  if (sys.is_omega()) {
    const auto& t = *sys.tail();
    if (t.period == 1) {
      doc["tail"] = "constant";
      doc["tail_map"] = table_json(t.closing);
    } else {
      doc["tail"] = "repeat-last-block";
      doc["block"] = t.period;
      doc["closing_map"] = table_json(t.closing);
    }
  }
  return doc;
}

bool has_object(const json& j) {
  if (j.is_object()) return true;
  if (!j.is_array()) return false;
  for (const auto& e : j) {
    if (has_object(e)) return true;
  }
  return false;
}

// Objects one key per line; arrays inline when short, else one element per line.
void write_json(std::string& out, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  if (j.is_object()) {
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += pad + json(it.key()).dump() + ": ";
      write_json(out, it.value(), indent + 2);
    }
    out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "}";
  } else if (j.is_array() && !j.empty() && (has_object(j) || j.dump().size() > 80)) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ",\n";
      out += pad;
      write_json(out, j[i], indent + 2);
    }
    out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "]";
  } else {
    out += j.dump();
  }
}

std::string format_json(const json& j) {
  std::string out;
  write_json(out, j, 0);
  return out;
}

} // namespace

InverseSystem parse_system_json(const std::string& text) { return system_from(parse_document(text), ""); }

std::string system_to_json(const InverseSystem& sys) { return format_json(system_json(sys)); }

SystemMorphism parse_morphism_json(const std::string& text) {
  const auto doc = parse_document(text);
  auto source = system_from(member(doc, "", "source"), "/source");
  auto target = system_from(member(doc, "", "target"), "/target");
  const auto& levels_json = member(doc, "", "levels");
  if (!levels_json.is_array() || levels_json.size() != source.prefix_length()) {
    field_error("/levels", "expected " + std::to_string(source.prefix_length()) + " level maps");
  }
  std::vector<Homomorphism> levels;
  for (std::size_t k = 0; k < levels_json.size(); ++k) {
    if (k >= target.prefix_length()) field_error("/levels", "target has fewer levels than source");
    levels.push_back(as_hom(levels_json[k], "/levels/" + std::to_string(k), source.level(k), target.level(k)));
  }
  try {
    return SystemMorphism{std::move(source), std::move(target), std::move(levels)};
  } catch (const Error& e) {
    field_error("/levels", e.what());
  }
}

std::string morphism_to_json(const SystemMorphism& f) {
  json doc;
  doc["source"] = system_json(f.source());
  doc["target"] = system_json(f.target());
  json levels = json::array();
  for (const auto& h : f.levels()) levels.push_back(table_json(h));
  doc["levels"] = levels;
  return format_json(doc);
}

} // namespace limterm
