#pragma once

// The fixture battery behind `omlkit suite`.

#include <string>
#include <vector>

#include <json.hpp>

namespace omlkit {

struct SuiteOptions {
  int threads = 1;
  std::vector<std::string> equations{"oml", "modular", "distributive", "godowski3", "noa3", "newst1d", "e3", "superposition"};
};

/// {"fixtures": {name: {...}}} for every *.mmp file in `dir`; a file with
/// several hypergraphs yields name#1, name#2, ...
nlohmann::json run_suite(const std::string& dir, const SuiteOptions& opts = {});

nlohmann::json expectations_from(const nlohmann::json& report);

/// One line per disagreement: a value differing from the expectation, an
/// expected fixture that did not run, or a fixture with no expectation.
std::vector<std::string> compare_expectations(const nlohmann::json& report, const nlohmann::json& expected);

}  // namespace omlkit
