// Instance and storyline documents (JSON) and small file helpers.

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "storyweave/core.hpp"

namespace storyweave::cli {

/// Bad input file: unreadable, malformed or failing validation. The message
/// names the file and, for syntax errors, the line and column.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

/// {"characters": [...], "timestamps": [...], "interactions": [{"characters": [...], "time": t}]}
nlohmann::json instance_to_json(const StorylineInstance& inst);
StorylineInstance instance_from_json(const nlohmann::json& doc);
StorylineInstance load_instance(const std::filesystem::path& path);

/// {"layers": [{"time", "interactions", "order", "active"}], "crossings": n}
nlohmann::json storyline_to_json(const StorylineInstance& inst,
                                 const CombinatorialStoryline& s);

/// Resolves names against `inst`, validates the storyline and checks the
/// stored crossing count against a recount.
CombinatorialStoryline storyline_from_json(const StorylineInstance& inst,
                                           const nlohmann::json& doc);
CombinatorialStoryline load_storyline(const StorylineInstance& inst,
                                      const std::filesystem::path& path);

/// Text form written to disk: two-space indentation and a trailing newline.
std::string dump(const nlohmann::json& doc);

}  // namespace storyweave::cli
