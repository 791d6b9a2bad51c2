#pragma once

// The bundled corpus, one fixture per line of each corpus/*.mmp file.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "omlkit/mmp.hpp"

#ifndef OMLKIT_CORPUS_DIR
#error "OMLKIT_CORPUS_DIR must point at the corpus directory"
#endif

namespace fixtures {

struct Fixture {
  std::string name;
  std::string text;  // line as stored
  omlkit::MmpHypergraph h;
};

inline const std::vector<Fixture>& all() {
  static const std::vector<Fixture> cache = [] {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(OMLKIT_CORPUS_DIR))
      if (e.path().extension() == ".mmp") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<Fixture> out;
    for (const auto& f : files) {
      std::ifstream in(f);
      std::vector<std::string> lines;
      for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '#') lines.push_back(line);
      for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string name = lines.size() == 1 ? f.stem().string() : f.stem().string() + "#" + std::to_string(i + 1);
        out.push_back({name, lines[i], omlkit::parse_mmp(lines[i])});
      }
    }
    return out;
  }();
  return cache;
}

inline const omlkit::MmpHypergraph& get(const std::string& name) {
  for (const auto& f : all())
    if (f.name == name) return f.h;
  throw std::runtime_error("no fixture " + name);
}

inline bool has(const std::string& name) {
  return std::any_of(all().begin(), all().end(), [&](const Fixture& f) { return f.name == name; });
}

inline std::vector<const Fixture*> with_prefix(const std::string& prefix) {
  std::vector<const Fixture*> out;
  for (const auto& f : all())
    if (f.name.rfind(prefix, 0) == 0) out.push_back(&f);
  return out;
}

}  // namespace fixtures
