// omlkit command-line front end.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "omlkit/bigraph.hpp"
#include "omlkit/equations.hpp"
#include "omlkit/errors.hpp"
#include "omlkit/lattice.hpp"
#include "omlkit/layout.hpp"
#include "omlkit/mmp.hpp"
#include "omlkit/report.hpp"
#include "omlkit/states.hpp"
#include "omlkit/vectors.hpp"
#include "suite.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace omlkit;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kUsage = 2, kBudget = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  int threads = 0;
  std::string format = "json";
};

int default_threads() {
  if (const char* env = std::getenv("OMLKIT_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t > 0) return t;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

void flatten(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object() && !j.empty()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void emit(const Globals& g, const json& j) {
  if (g.format == "text")
    flatten(j, "", std::cout);
  else
    std::cout << j.dump(2) << "\n";
}

std::vector<MmpHypergraph> load(const std::string& path) {
  if (!fs::exists(path)) throw UsageError("no such file: " + path);
  auto hs = read_mmp_file(path);
  if (hs.empty()) throw UsageError("no hypergraph in " + path);
  return hs;
}

// One object for a single input, an array otherwise.
json one_or_many(std::vector<json> items) {
  if (items.size() == 1) return items.front();
  return json(items);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Condition resolve_condition(const std::string& eq) {
  const auto names = builtin_names();
  if (std::find(names.begin(), names.end(), eq) != names.end()) return builtin(eq);
  try {
    return builtin(eq);  // parameterized names such as noa(5)
  } catch (const PreconditionError&) {
  }
  if (fs::exists(eq)) {
    std::string text = slurp(eq);
    std::string body;
    std::istringstream ls(text);
    for (std::string line; std::getline(ls, line);)
      if (line.find_first_not_of(" \t\r") != std::string::npos && line[line.find_first_not_of(" \t\r")] != '#') body += line + " ";
    Condition c = parse_condition(body);
    c.name = fs::path(eq).stem().string();
    return c;
  }
  Condition c = parse_condition(eq);
  c.name = eq;
  return c;
}

// ---------------------------------------------------------------------------

int cmd_validate(const Globals& g, const std::string& path, const std::string& level) {
  const ValidationLevel lv = level == "mmp" ? ValidationLevel::Mmp : ValidationLevel::Greechie;
  std::vector<json> out;
  bool ok = true;
  for (const auto& h : load(path)) {
    const auto r = validate(h, lv);
    ok = ok && r.valid;
    json j = to_json(h, r);
    j["mmp"] = serialize_mmp(h);
    out.push_back(j);
  }
  emit(g, one_or_many(out));
  return ok ? kOk : kMismatch;
}

int cmd_stats(const Globals& g, const std::string& path) {
  std::vector<json> out;
  for (const auto& h : load(path)) {
    json j = hypergraph_stats(h);
    j["mmp"] = serialize_mmp(h);
    out.push_back(j);
  }
  emit(g, one_or_many(out));
  return kOk;
}

int cmd_dual(const Globals& g, const std::string& path) {
  std::vector<json> out;
  for (const auto& h : load(path)) {
    const auto d = dualize(h);
    out.push_back({{"mmp", serialize_mmp(h)}, {"dual", serialize_mmp(d)}, {"self_dual", mmp_isomorphic(h, d)}});
  }
  emit(g, one_or_many(out));
  return kOk;
}

int cmd_convert(const std::string& in_path, const std::string& from, const std::string& to, int white_count,
                const std::string& atoms) {
  std::vector<BipartiteGraph> graphs;
  std::vector<MmpHypergraph> hs;
  if (from == "mmp") {
    hs = load(in_path);
  } else {
    std::istringstream in(slurp(in_path));
    if (from == "graph") {
      graphs = read_graphs(in);
    } else {
      if (white_count <= 0) throw UsageError("--white-count is required for graph6 input");
      for (std::string line; std::getline(in, line);)
        if (!line.empty()) graphs.push_back(from_graph6(line, white_count));
    }
    const AtomColor color = atoms == "black" ? AtomColor::Black : AtomColor::White;
    if (to == "mmp")
      for (const auto& gr : graphs) hs.push_back(graph_to_mmp(gr, color));
  }
  if (to == "mmp") {
    for (const auto& h : hs) std::cout << serialize_mmp(h) << "\n";
    return kOk;
  }
  if (from == "mmp")
    for (const auto& h : hs) graphs.push_back(mmp_to_graph(h));
  for (const auto& gr : graphs) std::cout << (to == "graph" ? write_graph(gr) : to_graph6(gr) + "\n");
  return kOk;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  int vertices = 0;
  int min_girth = 10;
  std::string shard;
  double budget_seconds = 0;
  std::uint64_t budget_nodes = 0;
  std::string emit = "mmp";
  std::string out;
  std::string checkpoint;
  std::uint64_t checkpoint_nodes = 10'000'000;
  int explored = -1;
};

std::string emit_graph(const BipartiteGraph& gr, const std::string& how) {
  if (how == "graph") return write_graph(gr);
  if (how == "graph6") return to_graph6(gr) + "\n";
  return serialize_mmp(graph_to_mmp(gr, AtomColor::White)) + "\n";
}

void add_stats(GenerationStats& a, const GenerationStats& b) {
  a.nodes += b.nodes;
  a.complete += b.complete;
  a.rejected_explored += b.rejected_explored;
  a.shard_nodes += b.shard_nodes;
}

json checkpoint_json(const GenerateArgs& a, const std::vector<int>& resume, const std::vector<GenerationResult>& parts,
                     const GenerationStats& stats) {
  json graphs = json::array();
  for (const auto& p : parts)
    for (const auto& gr : p.graphs) graphs.push_back(to_graph6(gr));
  return {{"vertices", a.vertices}, {"min_girth", a.min_girth}, {"shard", a.shard},
          {"resume", resume}, {"graphs", graphs}, {"stats", to_json(stats)}};
}

int cmd_generate(const Globals& g, const GenerateArgs& a) {
  if (a.vertices <= 0) throw UsageError("--vertices must be positive");
  GenerationJob job;
  job.white_count = a.vertices;
  job.min_girth = a.min_girth;
  job.explored_rejection_edges = a.explored;
  if (!a.shard.empty()) {
    const auto slash = a.shard.find('/');
    if (slash == std::string::npos) throw UsageError("--shard expects i/n");
    Shard s;
    s.index = std::stoi(a.shard.substr(0, slash));
    s.count = std::stoi(a.shard.substr(slash + 1));
    if (s.count <= 0 || s.index < 0 || s.index >= s.count) throw UsageError("--shard needs 0 <= i < n");
    job.shard = s;
  }

  std::vector<GenerationResult> parts;
  GenerationStats stats;
  bool complete = true;

  if (!a.checkpoint.empty() && fs::exists(a.checkpoint)) {
    const json cp = json::parse(slurp(a.checkpoint));
    if (cp.at("vertices") != a.vertices || cp.at("min_girth") != a.min_girth || cp.at("shard") != a.shard)
      throw UsageError("checkpoint belongs to a different job");
    job.resume = cp.at("resume").get<std::vector<int>>();
    GenerationResult prev;
    for (const auto& s : cp.at("graphs")) prev.graphs.push_back(from_graph6(s.get<std::string>(), a.vertices));
    for (const auto& gr : prev.graphs) prev.codes.push_back(canonical_code(gr, true));
    parts.push_back(std::move(prev));
    const auto& st = cp.at("stats");
    stats.nodes = st.at("nodes");
    stats.complete = st.at("complete");
    stats.rejected_explored = st.at("rejected_explored");
    stats.shard_nodes = st.at("shard_nodes");
  }

  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

  if (g.threads > 1 && !job.shard && a.checkpoint.empty() && a.budget_nodes == 0 && a.budget_seconds == 0) {
    // Shards on worker threads.
    std::vector<GenerationResult> res(static_cast<std::size_t>(g.threads));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(res.size());
    for (int t = 0; t < g.threads; ++t)
      pool.emplace_back([&, t] {
        try {
          GenerationJob j = job;
          j.shard = Shard{t, g.threads, Shard{}.depth};
          res[static_cast<std::size_t>(t)] = generate(j);
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (const auto& r : res) add_stats(stats, r.stats);
    parts.insert(parts.end(), res.begin(), res.end());
  } else {
    for (;;) {
      std::uint64_t chunk = 0;
      if (!a.checkpoint.empty()) chunk = a.checkpoint_nodes;
      if (a.budget_nodes) {
        const std::uint64_t left = a.budget_nodes > stats.nodes ? a.budget_nodes - stats.nodes : 0;
        if (left == 0) {
          complete = false;
          break;
        }
        chunk = chunk ? std::min(chunk, left) : left;
      }
      job.node_budget = chunk;
      if (a.budget_seconds > 0) {
        job.seconds_budget = a.budget_seconds - elapsed();
        if (job.seconds_budget <= 0) {
          complete = false;
          break;
        }
      }
      try {
        auto r = generate(job);
        add_stats(stats, r.stats);
        parts.push_back(std::move(r));
        job.resume.clear();
        break;
      } catch (const GenerationInterrupted& e) {
        add_stats(stats, e.partial().stats);
        parts.push_back(e.partial());
        job.resume = e.resume();
        if (!a.checkpoint.empty()) {
          std::ofstream cp(a.checkpoint + ".tmp");
          cp << checkpoint_json(a, job.resume, parts, stats).dump() << "\n";
          cp.close();
          fs::rename(a.checkpoint + ".tmp", a.checkpoint);
        }
      }
    }
  }

  GenerationResult merged = merge_results(parts);
  merged.stats = stats;
  if (!a.checkpoint.empty() && complete && fs::exists(a.checkpoint)) fs::remove(a.checkpoint);

  std::string emitted;
  for (const auto& gr : merged.graphs) emitted += emit_graph(gr, a.emit);
  if (!a.out.empty()) {
    std::ofstream out(a.out);
    out << emitted;
  }
  json graphs = json::array();
  for (const auto& gr : merged.graphs) {
    std::string s = emit_graph(gr, a.emit);
    if (!s.empty() && s.back() == '\n') s.pop_back();
    graphs.push_back(s);
  }
  json j{{"vertices", a.vertices},
         {"min_girth", a.min_girth},
         {"shard", a.shard.empty() ? json(nullptr) : json(a.shard)},
         {"complete", complete},
         {"classes", merged.graphs.size()},
         {"uncolored_classes", merged.uncolored_classes},
         {"stats", to_json(merged.stats)},
         {"graphs", graphs}};
  if (!complete) j["resume"] = job.resume;
  emit(g, j);
  return complete ? kOk : kBudget;
}

// ---------------------------------------------------------------------------

int cmd_check(const Globals& g, const std::string& eq, const std::string& path, std::uint64_t budget,
              std::size_t resume_from, const std::string& expect) {
  const Condition c = resolve_condition(eq);
  EvalOptions opts;
  opts.threads = g.threads;
  opts.tuple_budget = budget;
  opts.resume_from = resume_from;
  std::vector<json> out;
  bool ok = true;
  for (const auto& h : load(path)) {
    const Oml L = paste(h);
    try {
      const auto r = evaluate(L, c, opts);
      json j = to_json(c, r);
      j["mmp"] = serialize_mmp(h);
      if (!expect.empty()) {
        const bool holds = r.verdict == Verdict::Holds;
        if (holds != (expect == "holds")) {
          ok = false;
          j["mismatch"] = "expected " + expect;
        }
      }
      out.push_back(j);
    } catch (const EvaluationInterrupted& e) {
      out.push_back({{"condition", c.name},
                     {"mmp", serialize_mmp(h)},
                     {"verdict", "INTERRUPTED"},
                     {"tuples_examined", e.tuples_examined()},
                     {"resume_from", e.resume_from()}});
      emit(g, one_or_many(out));
      return kBudget;
    }
  }
  emit(g, one_or_many(out));
  return ok ? kOk : kMismatch;
}

unsigned parse_queries(const std::string& spec) {
  unsigned q = 0;
  std::istringstream in(spec);
  for (std::string part; std::getline(in, part, ',');) {
    if (part == "all") q |= QueryAll;
    else if (part == "admits") q |= QueryAdmits;
    else if (part == "unique") q |= QueryUnique;
    else if (part == "strong") q |= QueryStrong;
    else if (part == "classical") q |= QueryClassical;
    else if (part == "order") q |= QueryOrder;
    else if (part == "coloring") q |= QueryColoring;
    else throw UsageError("unknown state query '" + part + "'");
  }
  return q;
}

int cmd_states(const Globals& g, const std::string& path, const std::string& query) {
  const unsigned q = parse_queries(query);
  StateOptions opts;
  opts.threads = g.threads;
  std::vector<json> out;
  for (const auto& h : load(path)) {
    const Oml L = paste(h);
    json j = to_json(solve_states(L, q, opts), L);
    j["mmp"] = serialize_mmp(h);
    out.push_back(j);
  }
  emit(g, one_or_many(out));
  return kOk;
}

std::vector<long> parse_components(const std::string& s) {
  std::vector<long> v;
  std::istringstream in(s);
  for (std::string part; std::getline(in, part, ',');) {
    try {
      v.push_back(std::stol(part));
    } catch (const std::exception&) {
      throw UsageError("bad component '" + part + "'");
    }
  }
  if (v.empty()) throw UsageError("empty component set");
  return v;
}

int cmd_vectorfind(const Globals& g, const std::string& path, const std::string& components, std::uint64_t budget) {
  VectorfindOptions opts;
  opts.components = parse_components(components);
  opts.node_budget = budget;
  std::vector<json> out;
  for (const auto& h : load(path)) {
    json j{{"mmp", serialize_mmp(h)}};
    const auto a = vectorfind(h, opts);
    j["found"] = a.has_value();
    j["vectors"] = a ? to_json(h, *a) : json(nullptr);
    out.push_back(j);
  }
  emit(g, one_or_many(out));
  return kOk;
}

Subspace3 parse_subspace(const json& j) {
  const auto vec = [](const json& a) {
    if (!a.is_array() || a.size() != 3) throw UsageError("a vector needs three coordinates");
    const auto coord = [](const json& x) { return mpq_class(x.is_string() ? x.get<std::string>() : x.dump()); };
    return Vec3Q(coord(a[0]), coord(a[1]), coord(a[2]));
  };
  if (j.is_string()) {
    if (j == "0") return zero_space();
    if (j == "R3") return full_space();
    throw UsageError("unknown subspace " + j.dump());
  }
  if (j.is_array()) return span(vec(j));
  if (j.is_object() && j.contains("line")) return span(vec(j.at("line")));
  if (j.is_object() && j.contains("plane")) return plane(vec(j.at("plane")));
  throw UsageError("unknown subspace " + j.dump());
}

int cmd_oa_subspace(const Globals& g, int n, const std::string& path) {
  const json spec = json::parse(slurp(path));
  std::vector<Subspace3> M, N;
  for (const auto& s : spec.at("M")) M.push_back(parse_subspace(s));
  for (const auto& s : spec.at("N")) N.push_back(parse_subspace(s));
  const auto r = check_noa_subspace(n, M, N);
  json trace = json::array();
  for (const auto& [label, s] : r.trace) trace.push_back({{"label", label}, {"subspace", s.str()}});
  emit(g, {{"n", n}, {"holds", r.holds}, {"lhs", r.lhs.str()}, {"rhs", r.rhs.str()}, {"trace", trace}});
  return r.holds ? kOk : kMismatch;
}

int cmd_layout(const Globals& g, const std::string& path, const std::string& out_dir) {
  const auto hs = load(path);
  std::vector<json> out;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const auto& h = hs[i];
    const LayoutPlan plan = plan_layout(h);
    json j = to_json(h, plan);
    j["mmp"] = serialize_mmp(h);
    if (!out_dir.empty()) {
      const fs::path dir = hs.size() == 1 ? fs::path(out_dir) : fs::path(out_dir) / std::to_string(i);
      fs::create_directories(dir);
      const auto docs = render_svg(h, plan);
      std::vector<std::string> names{"combined.svg"};
      if (!plan.level1.blocks.empty()) names.push_back("level1.svg");
      if (!plan.level2.empty()) names.push_back("level2.svg");
      if (!plan.level3.empty()) names.push_back("level3.svg");
      json files = json::array();
      for (std::size_t d = 0; d < docs.size(); ++d) {
        std::ofstream(dir / names[d]) << docs[d];
        files.push_back((dir / names[d]).string());
      }
      std::ofstream(dir / "plan.json") << j.dump(2) << "\n";
      j["files"] = files;
    }
    out.push_back(j);
  }
  emit(g, one_or_many(out));
  return kOk;
}

int cmd_suite(const Globals& g, const std::string& dir, const std::string& expect, const std::string& write_expect) {
  SuiteOptions opts;
  opts.threads = g.threads;
  const json report = run_suite(dir, opts);
  if (!write_expect.empty()) std::ofstream(write_expect) << expectations_from(report).dump(2) << "\n";
  json out = report;
  int code = kOk;
  if (!expect.empty()) {
    const auto mismatches = compare_expectations(report, json::parse(slurp(expect)));
    out["mismatches"] = mismatches;
    if (!mismatches.empty()) code = kMismatch;
  }
  emit(g, out);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthomodular lattices from MMP hypergraphs"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--threads", g.threads, "Worker threads (default: OMLKIT_THREADS or 1)")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "text"}));

  std::string mmp, level = "greechie", eq, query = "all", components = "-2,-1,0,1,2", out_dir, fixtures, expect,
                   write_expect, subspaces, in_path, from = "mmp", to = "graph", atoms = "white", check_expect;
  std::uint64_t budget_tuples = 0, budget_nodes = 0;
  std::size_t resume_from = 0;
  int white_count = 0, oa_n = 1;
  GenerateArgs gen;

  auto* validate_cmd = app.add_subcommand("validate", "Check MMP or Greechie conditions");
  validate_cmd->add_option("--mmp", mmp)->required();
  validate_cmd->add_option("--level", level)->check(CLI::IsMember({"mmp", "greechie"}));

  auto* stats_cmd = app.add_subcommand("stats", "Sizes, loops, girth, self-duality");
  stats_cmd->add_option("--mmp", mmp)->required();

  auto* dual_cmd = app.add_subcommand("dual", "Dual hypergraph (atoms and blocks exchanged)");
  dual_cmd->add_option("--mmp", mmp)->required();

  auto* convert_cmd = app.add_subcommand("convert", "Convert between MMP, graph and graph6");
  convert_cmd->add_option("--in", in_path)->required();
  convert_cmd->add_option("--from", from)->check(CLI::IsMember({"mmp", "graph", "graph6"}));
  convert_cmd->add_option("--to", to)->check(CLI::IsMember({"mmp", "graph", "graph6"}));
  convert_cmd->add_option("--white-count", white_count, "White vertices (graph6 input)");
  convert_cmd->add_option("--atoms", atoms, "Colour read as atoms")->check(CLI::IsMember({"white", "black"}));

  auto* gen_cmd = app.add_subcommand("generate", "Cubic bipartite graphs with a girth bound (n-n MMPs)");
  gen_cmd->add_option("--vertices", gen.vertices, "Vertices per colour (atoms = blocks)")->required();
  gen_cmd->add_option("--min-girth", gen.min_girth);
  gen_cmd->add_option("--shard", gen.shard, "i/n");
  gen_cmd->add_option("--budget-seconds", gen.budget_seconds)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--budget-nodes", gen.budget_nodes)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--emit", gen.emit)->check(CLI::IsMember({"mmp", "graph", "graph6"}));
  gen_cmd->add_option("--out", gen.out, "Also write emitted graphs here");
  gen_cmd->add_option("--checkpoint", gen.checkpoint, "Resume file, rewritten every --checkpoint-nodes");
  gen_cmd->add_option("--checkpoint-nodes", gen.checkpoint_nodes)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--explored-edges", gen.explored, "Explored-configuration rejection depth (-1 default, 0 off)");

  auto* check_cmd = app.add_subcommand("check", "Evaluate a lattice condition");
  check_cmd->add_option("--eq", eq, "Builtin name, condition file, or condition text")->required();
  check_cmd->add_option("--mmp", mmp)->required();
  check_cmd->add_option("--budget-tuples", budget_tuples)->check(CLI::PositiveNumber);
  check_cmd->add_option("--resume-from", resume_from);
  check_cmd->add_option("--expect", check_expect)->check(CLI::IsMember({"holds", "fails"}));

  auto* states_cmd = app.add_subcommand("states", "States, strong sets, two-valued states");
  states_cmd->add_option("--mmp", mmp)->required();
  states_cmd->add_option("--query", query, "all, admits, unique, strong, classical, order, coloring (comma separated)");

  auto* vf_cmd = app.add_subcommand("vectorfind", "Vectors in R^3 realizing the blocks");
  vf_cmd->add_option("--mmp", mmp)->required();
  vf_cmd->add_option("--components", components)->allow_extra_args(false);
  vf_cmd->add_option("--budget-nodes", budget_nodes)->check(CLI::PositiveNumber);

  auto* oa_cmd = app.add_subcommand("check-oa-subspace", "Orthoarguesian inclusion for subspaces of R^3");
  oa_cmd->add_option("--n", oa_n)->check(CLI::PositiveNumber);
  oa_cmd->add_option("--subspaces", subspaces, "JSON {\"M\": [...], \"N\": [...]}")->required();

  auto* layout_cmd = app.add_subcommand("layout", "Separate-level layout and SVG");
  layout_cmd->add_option("--mmp", mmp)->required();
  layout_cmd->add_option("--out", out_dir);

  auto* suite_cmd = app.add_subcommand("suite", "Run the battery over a fixture directory");
  suite_cmd->add_option("--fixtures", fixtures)->required();
  suite_cmd->add_option("--expect", expect);
  suite_cmd->add_option("--write-expect", write_expect);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  if (g.threads <= 0) g.threads = default_threads();

  try {
    if (*validate_cmd) return cmd_validate(g, mmp, level);
    if (*stats_cmd) return cmd_stats(g, mmp);
    if (*dual_cmd) return cmd_dual(g, mmp);
    if (*convert_cmd) return cmd_convert(in_path, from, to, white_count, atoms);
    if (*gen_cmd) return cmd_generate(g, gen);
    if (*check_cmd) return cmd_check(g, eq, mmp, budget_tuples, resume_from, check_expect);
    if (*states_cmd) return cmd_states(g, mmp, query);
    if (*vf_cmd) return cmd_vectorfind(g, mmp, components, budget_nodes);
    if (*oa_cmd) return cmd_oa_subspace(g, oa_n, subspaces);
    if (*layout_cmd) return cmd_layout(g, mmp, out_dir);
    if (*suite_cmd) return cmd_suite(g, fixtures, expect, write_expect);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "json: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
