#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace denseval {

// FNV-1a 64-bit digest of the file contents, as 16 lowercase hex digits.
std::string fnv1a64_file(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path output;
};

// Writes <output>.manifest.json describing the run (tool, version, command,
// parameters, input digests) and returns the manifest path.
std::filesystem::path write_manifest(const RunManifest& manifest);

}  // namespace denseval
