#include "files.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace storyweave::cli {

using nlohmann::json;

namespace {

// Line and column of a byte offset, both 1-based.
std::pair<std::size_t, std::size_t> locate(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json parse_document(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte points one past the offending character.
    const auto [line, col] = locate(text, e.byte > 0 ? e.byte - 1 : 0);
    throw InputError(fmt::format("{}:{}:{}: syntax error: {}", path.string(), line, col,
                                 e.what()));
  }
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw InputError(fmt::format("{}: expected an object", where));
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(fmt::format("{}: missing \"{}\"", where, key));
  return *it;
}

std::vector<std::string> string_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw InputError(fmt::format("{}: expected a list", where));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) {
      throw InputError(fmt::format("{}[{}]: expected a string", where, i));
    }
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

std::string describe(const ValidationError& e) {
  std::string out;
  for (const auto& v : e.violations()) {
    if (!out.empty()) out += "; ";
    out += v.path.empty() ? v.message : v.path + ": " + v.message;
  }
  return out;
}

std::vector<CharacterId> resolve(const StorylineInstance& inst, const json& names,
                                 const std::string& where) {
  std::vector<CharacterId> out;
  const auto list = string_list(names, where);
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto c = inst.find_character(list[i]);
    if (!c) throw InputError(fmt::format("{}[{}]: unknown character \"{}\"", where, i, list[i]));
    out.push_back(*c);
  }
  return out;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("{}: cannot open for reading", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("{}: cannot open for writing", path.string()));
  out << text;
  if (!out) throw std::runtime_error(fmt::format("{}: write failed", path.string()));
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

json instance_to_json(const StorylineInstance& inst) {
  json doc;
  doc["characters"] = inst.character_names();
  doc["timestamps"] = inst.timestamp_labels();
  json list = json::array();
  for (const auto& i : inst.interactions()) {
    json names = json::array();
    for (CharacterId c : i.characters) names.push_back(inst.character_name(c));
    list.push_back({{"characters", names}, {"time", inst.timestamp_label(i.time)}});
  }
  doc["interactions"] = list;
  return doc;
}

StorylineInstance instance_from_json(const json& doc) {
  RawInstance raw;
  raw.characters = string_list(member(doc, "characters", "document"), "characters");
  raw.timestamps = string_list(member(doc, "timestamps", "document"), "timestamps");
  const json& list = member(doc, "interactions", "document");
  if (!list.is_array()) throw InputError("interactions: expected a list");
  for (std::size_t j = 0; j < list.size(); ++j) {
    const std::string where = fmt::format("interactions[{}]", j);
    RawInteraction ri;
    ri.characters = string_list(member(list[j], "characters", where), where + ".characters");
    const json& time = member(list[j], "time", where);
    if (!time.is_string()) throw InputError(where + ".time: expected a string");
    ri.time = time.get<std::string>();
    raw.interactions.push_back(std::move(ri));
  }
  try {
    return validate_instance(raw);
  } catch (const ValidationError& e) {
    throw InputError(describe(e));
  }
}

StorylineInstance load_instance(const std::filesystem::path& path) {
  const json doc = parse_document(path);
  try {
    return instance_from_json(doc);
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

json storyline_to_json(const StorylineInstance& inst, const CombinatorialStoryline& s) {
  json layers = json::array();
  auto names = [&](const std::vector<CharacterId>& ids) {
    json out = json::array();
    for (CharacterId c : ids) out.push_back(inst.character_name(c));
    return out;
  };
  for (const auto& layer : s.layers) {
    json ids = json::array();
    for (InteractionId i : layer.interactions) ids.push_back(i.value);
    layers.push_back({{"time", inst.timestamp_label(layer.time)},
                      {"interactions", ids},
                      {"order", names(layer.order)},
                      {"active", names(layer.active)}});
  }
  return {{"layers", layers}, {"crossings", count_crossings(s).total}};
}

CombinatorialStoryline storyline_from_json(const StorylineInstance& inst, const json& doc) {
  CombinatorialStoryline s;
  const json& layers = member(doc, "layers", "document");
  if (!layers.is_array()) throw InputError("layers: expected a list");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string where = fmt::format("layers[{}]", l);
    Layer layer;
    const json& time = member(layers[l], "time", where);
    if (!time.is_string()) throw InputError(where + ".time: expected a string");
    const auto t = inst.find_timestamp(time.get<std::string>());
    if (!t) {
      throw InputError(fmt::format("{}.time: unknown timestamp \"{}\"", where,
                                   time.get<std::string>()));
    }
    layer.time = *t;
    const json& ids = member(layers[l], "interactions", where);
    if (!ids.is_array()) throw InputError(where + ".interactions: expected a list");
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (!ids[k].is_number_integer() || ids[k].get<long>() < 0 ||
          ids[k].get<long>() >= static_cast<long>(inst.num_interactions())) {
        throw InputError(fmt::format("{}.interactions[{}]: not an interaction id", where, k));
      }
      layer.interactions.emplace_back(ids[k].get<int>());
    }
    layer.order = resolve(inst, member(layers[l], "order", where), where + ".order");
    layer.active = resolve(inst, member(layers[l], "active", where), where + ".active");
    std::sort(layer.active.begin(), layer.active.end());
    s.layers.push_back(std::move(layer));
  }

  const auto violations = validate_storyline(inst, s);
  if (!violations.empty()) throw InputError(describe(ValidationError(violations)));

  const json& stored = member(doc, "crossings", "document");
  if (!stored.is_number_integer()) throw InputError("crossings: expected an integer");
  const long recount = count_crossings(s).total;
  if (stored.get<long>() != recount) {
    throw InputError(fmt::format("crossings: file says {} but the storyline has {}",
                                 stored.get<long>(), recount));
  }
  return s;
}

CombinatorialStoryline load_storyline(const StorylineInstance& inst,
                                      const std::filesystem::path& path) {
  const json doc = parse_document(path);
  try {
    return storyline_from_json(inst, doc);
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace storyweave::cli
