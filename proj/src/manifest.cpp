#include "denseval/manifest.hpp"

#include <cstdint>
#include <fstream>

#include <json.hpp>

#include "denseval/errors.hpp"
#include "denseval/version.hpp"

namespace denseval {

std::string fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::uint64_t hash = 14695981039346656037ull;
  char buf[1 << 14];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const auto got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 1099511628211ull;
    }
  }
  static const char* digits = "0123456789abcdef";
  std::string hex(16, '0');
  for (int i = 15; i >= 0; --i) {
    hex[i] = digits[hash & 0xf];
    hash >>= 4;
  }
  return hex;
}

std::filesystem::path write_manifest(const RunManifest& manifest) {
  nlohmann::ordered_json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["command"] = manifest.command;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [key, value] : manifest.parameters) params[key] = value;
  doc["parameters"] = std::move(params);
  nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
  for (const auto& input : manifest.inputs) {
    nlohmann::ordered_json entry;
    entry["path"] = input.string();
    entry["fnv1a64"] = fnv1a64_file(input);
    inputs.push_back(std::move(entry));
  }
  doc["inputs"] = std::move(inputs);
  doc["output"] = manifest.output.string();

  std::filesystem::path path = manifest.output;
  path += ".manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  return path;
}

}  // namespace denseval
