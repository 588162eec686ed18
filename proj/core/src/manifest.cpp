#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "atomic_file.hpp"
#include "json.hpp"
#include "quakescore/codec.hpp"
#include "quakescore/dataset.hpp"
#include "quakescore/error.hpp"

namespace quakescore {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char* kPathFields[] = {"image", "mask", "pred_mask", "depth"};

// Works for both const and mutable entries.
template <typename Entry>
auto& path_field(Entry& e, std::string_view field) {
  if (field == "image") return e.image;
  if (field == "mask") return e.mask;
  if (field == "pred_mask") return e.pred_mask;
  return e.depth;
}

[[noreturn]] void line_error(const fs::path& manifest, std::size_t line, const std::string& what) {
  throw InputError(manifest.string() + ":" + std::to_string(line) + ": " + what);
}

std::optional<std::string> string_field(const json& obj, const char* key,
                                        const fs::path& manifest, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) line_error(manifest, line, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

fs::path portable_relative(const fs::path& p, const fs::path& dir) {
  const fs::path abs = fs::absolute(p).lexically_normal();
  const fs::path rel = abs.lexically_relative(fs::absolute(dir).lexically_normal());
  return rel.empty() ? abs : rel;
}

}  // namespace

std::string_view name(SeverityLabel label) noexcept {
  switch (label) {
    case SeverityLabel::LittleToNo: return "little_to_no";
    case SeverityLabel::Mild: return "mild";
    case SeverityLabel::Severe: return "severe";
  }
  return "invalid";
}

std::optional<SeverityLabel> parse_label(std::string_view text) noexcept {
  for (SeverityLabel label : kAllLabels) {
    if (name(label) == text) return label;
  }
  return std::nullopt;
}

Manifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open manifest");

  Manifest manifest;
  manifest.base_dir = path.parent_path();
  std::set<std::string> seen;

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;

    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      line_error(path, line, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) line_error(path, line, "expected a JSON object");

    ManifestEntry entry;
    const auto id = string_field(obj, "id", path, line);
    if (!id || id->empty()) line_error(path, line, "missing id");
    if (!seen.insert(*id).second) line_error(path, line, "duplicate id '" + *id + "'");
    entry.id = *id;

    for (const char* field : kPathFields) {
      if (auto value = string_field(obj, field, path, line)) {
        const fs::path p(*value);
        path_field(entry, field) =
            p.is_absolute() ? p : (manifest.base_dir / p).lexically_normal();
      }
    }
    if (auto label = string_field(obj, "label", path, line)) {
      entry.label = parse_label(*label);
      if (!entry.label) line_error(path, line, "unknown label '" + *label + "'");
    }

    for (const auto& [key, value] : obj.items()) {
      if (key != "id" && key != "image" && key != "mask" && key != "pred_mask" &&
          key != "depth" && key != "label") {
        manifest.warnings.push_back(path.string() + ":" + std::to_string(line) +
                                    ": unknown field '" + key + "' ignored");
      }
    }
    manifest.entries.push_back(std::move(entry));
  }
  if (in.bad()) throw InputError(path.string() + ": read error");
  return manifest;
}

void write_manifest(std::span<const ManifestEntry> entries, const fs::path& path) {
  const fs::path dir = path.parent_path().empty() ? fs::path(".") : path.parent_path();
  std::ostringstream out;
  for (const ManifestEntry& e : entries) {
    json obj = json::object();
    obj["id"] = e.id;
    for (const char* field : kPathFields) {
      if (const auto& p = path_field(e, field)) {
        obj[field] = portable_relative(*p, dir).generic_string();
      }
    }
    if (e.label) obj["label"] = std::string(name(*e.label));
    out << obj.dump() << '\n';
  }

  detail::AtomicFile file(path);
  const std::string bytes = out.str();
  if (std::fwrite(bytes.data(), 1, bytes.size(), file.stream()) != bytes.size()) {
    throw InputError(path.string() + ": write failed");
  }
  file.commit();
}

std::vector<std::string> validate_entry(const ManifestEntry& entry) {
  std::vector<std::string> violations;
  if (!entry.mask) violations.push_back("missing mask");

  std::optional<Size> mask_size, pred_size, depth_size;
  const auto probe = [&](const char* field, auto&& load) -> std::optional<Size> {
    const auto& p = path_field(entry, field);
    if (!p) return std::nullopt;
    std::error_code ec;
    if (!fs::is_regular_file(*p, ec)) {
      violations.push_back(std::string("file not found: ") + field + " " + p->string());
      return std::nullopt;
    }
    try {
      return load(*p).size();
    } catch (const Error& e) {
      violations.push_back(std::string("cannot decode ") + field + ": " + e.what());
      return std::nullopt;
    }
  };

  if (entry.image) {
    std::error_code ec;
    if (!fs::is_regular_file(*entry.image, ec)) {
      violations.push_back("file not found: image " + entry.image->string());
    }
  }
  mask_size = probe("mask", [](const fs::path& p) { return load_mask(p); });
  pred_size = probe("pred_mask", [](const fs::path& p) { return load_mask(p); });
  depth_size = probe("depth", [](const fs::path& p) { return load_depth(p); });

  if (mask_size && pred_size && *mask_size != *pred_size) {
    violations.push_back("dimension mismatch mask/pred_mask");
  }
  if (mask_size && depth_size && *mask_size != *depth_size) {
    violations.push_back("dimension mismatch mask/depth");
  }
  if (pred_size && depth_size && *pred_size != *depth_size) {
    violations.push_back("dimension mismatch pred_mask/depth");
  }
  return violations;
}

}  // namespace quakescore
