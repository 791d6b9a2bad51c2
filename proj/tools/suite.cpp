#include "suite.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>

#include "omlkit/equations.hpp"
#include "omlkit/errors.hpp"
#include "omlkit/lattice.hpp"
#include "omlkit/mmp.hpp"
#include "omlkit/report.hpp"
#include "omlkit/states.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace omlkit {

namespace {

json fixture_report(const MmpHypergraph& h, const SuiteOptions& opts) {
  json j;
  j["mmp"] = serialize_mmp(h);
  j["atoms"] = h.vertex_count();
  j["blocks"] = h.block_count();
  const auto v = validate(h, ValidationLevel::Greechie);
  j["greechie_valid"] = v.valid;
  json rules = json::array();
  for (const auto& x : v.violations) rules.push_back(x.rule);
  j["violations"] = rules;
  const auto loops = loop_analysis(h);
  j["max_loop_order"] = loops.max_loop_order;
  j["min_loop_order"] = loops.min_loop_order ? json(*loops.min_loop_order) : json(nullptr);
  const bool cubic = h.is_uniform(3) && h.is_regular(3);
  j["self_dual"] = cubic && h.vertex_count() == h.block_count() ? json(mmp_isomorphic(h, dualize(h))) : json(nullptr);

  std::optional<Oml> pasted;
  try {
    pasted.emplace(paste(h));
  } catch (const PreconditionError&) {
    j["lattice"] = nullptr;
    return j;
  }
  const Oml& L = *pasted;
  j["lattice"] = {{"elements", L.size()}, {"axioms", verify_axioms(L).pass}};

  json eqs;
  EvalOptions eo;
  eo.threads = opts.threads;
  for (const auto& name : opts.equations) {
    const auto r = evaluate(L, builtin(name), eo);
    eqs[name] = r.verdict == Verdict::Holds ? "HOLDS" : "FAILS";
  }
  j["equations"] = eqs;

  StateOptions so;
  so.threads = opts.threads;
  const auto s = solve_states(L, QueryAll, so);
  json st;
  st["admits"] = s.admits_state;
  st["exactly_one"] = s.exactly_one ? json(*s.exactly_one) : json(nullptr);
  st["dimension"] = s.dimension ? json(*s.dimension) : json(nullptr);
  st["strong_quantum"] = s.strong_quantum ? json(*s.strong_quantum) : json(nullptr);
  st["strong_classical"] = s.strong_classical ? json(*s.strong_classical) : json(nullptr);
  st["full_order_determining"] = s.full_order_determining ? json(*s.full_order_determining) : json(nullptr);
  st["two_valued"] = s.two_valued.has_value();
  if (s.unique_state) {
    json u = json::array();
    for (const auto& q : *s.unique_state) u.push_back(rational_string(q));
    st["unique_state"] = u;
  }
  j["states"] = st;
  return j;
}

void diff(const json& exp, const json& got, const std::string& path, std::vector<std::string>& out) {
  if (exp.is_object() && got.is_object()) {
    for (const auto& [k, v] : exp.items()) {
      if (!got.contains(k)) {
        out.push_back(path + "." + k + ": expected " + v.dump() + ", missing");
        continue;
      }
      diff(v, got.at(k), path + "." + k, out);
    }
    return;
  }
  if (exp != got) out.push_back(path + ": expected " + exp.dump() + ", got " + got.dump());
}

}  // namespace

json run_suite(const std::string& dir, const SuiteOptions& opts) {
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".mmp") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  json fixtures = json::object();
  for (const auto& f : files) {
    const auto hs = read_mmp_file(f.string());
    const std::string stem = f.stem().string();
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const std::string name = hs.size() == 1 ? stem : stem + "#" + std::to_string(i + 1);
      fixtures[name] = fixture_report(hs[i], opts);
    }
  }
  return {{"fixtures", fixtures}};
}

json expectations_from(const json& report) { return report; }

std::vector<std::string> compare_expectations(const json& report, const json& expected) {
  std::vector<std::string> out;
  const json& got = report.at("fixtures");
  const json& exp = expected.at("fixtures");
  for (const auto& [name, e] : exp.items()) {
    if (!got.contains(name)) {
      out.push_back(name + ": expected fixture did not run");
      continue;
    }
    diff(e, got.at(name), name, out);
  }
  for (const auto& [name, v] : got.items()) {
    (void)v;
    if (!exp.contains(name)) out.push_back(name + ": no expectation recorded");
  }
  return out;
}

}  // namespace omlkit
