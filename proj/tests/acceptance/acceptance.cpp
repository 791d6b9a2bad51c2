// Acceptance run: one PASS/FAIL line per criterion, then a summary.
//
//   acceptance [--strict] [--extended] [--only 3,7] [--threads N] [--report FILE]
//
// Exit status is 0 once every selected criterion has run; with --strict any
// failure gives 1.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "fixtures.hpp"
#include "omlkit/bigraph.hpp"
#include "omlkit/equations.hpp"
#include "omlkit/lattice.hpp"
#include "omlkit/layout.hpp"
#include "omlkit/mmp.hpp"
#include "omlkit/states.hpp"
#include "omlkit/vectors.hpp"
#include "oracles.hpp"

using namespace omlkit;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void fail(const std::string& why) {
    pass = false;
    notes.push_back("FAIL: " + why);
  }
  void note(const std::string& s) { notes.push_back(s); }
  void expect(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
  // Time limits are part of several criteria.
  void within(double seconds, double limit, const std::string& what) {
    if (seconds > limit) fail(what + " took " + secs(seconds) + ", limit " + secs(limit));
  }
};

struct Options {
  bool extended = false;
  int threads = 1;
};

std::vector<const fixtures::Fixture*> thirty_nines() { return fixtures::with_prefix("39-39-"); }

std::vector<const fixtures::Fixture*> generated_fixtures() {
  auto out = fixtures::with_prefix("35-35");
  for (auto* f : fixtures::with_prefix("36-36")) out.push_back(f);
  return out;
}

// ---------------------------------------------------------------------------

Outcome fixture_round_trip() {
  Outcome o;
  const auto t = Clock::now();
  auto list = thirty_nines();
  for (auto* f : fixtures::with_prefix("conway-kochen")) list.push_back(f);
  o.expect(thirty_nines().size() == 13, "expected 13 39-39 strings (eleven classes, two dual pairs)");
  for (const auto* f : list) {
    const auto h = parse_mmp(f->text);
    o.expect(validate(h, ValidationLevel::Greechie).valid, f->name + " is not a Greechie diagram");
    o.expect(serialize_mmp(h) == f->text, f->name + " does not re-serialize byte for byte");
  }
  o.note(std::to_string(list.size()) + " strings");
  o.within(since(t), 1, "round trip");
  return o;
}

Outcome conway_kochen_lattice() {
  Outcome o;
  const auto t = Clock::now();
  const auto& h = fixtures::get("conway-kochen");
  const Oml L = paste(h);
  const auto r = verify_axioms(L);
  o.expect(h.vertex_count() == 51, "atoms = " + std::to_string(h.vertex_count()));
  o.expect(L.size() == 104, "elements = " + std::to_string(L.size()));
  o.expect(r.pass, "verify_axioms: " + r.law);
  o.note("51 atoms, 104 elements, orthomodular");
  o.within(since(t), 10, "pasting and axioms");
  return o;
}

GenerationResult generate_threaded(int white, int threads) {
  if (threads <= 1) {
    GenerationJob job;
    job.white_count = white;
    return generate(job);
  }
  std::vector<GenerationResult> parts(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  for (int i = 0; i < threads; ++i)
    pool.emplace_back([&, i] {
      GenerationJob job;
      job.white_count = white;
      job.shard = Shard{i, threads, Shard{}.depth};
      parts[static_cast<std::size_t>(i)] = generate(job);
    });
  for (auto& th : pool) th.join();
  return merge_results(parts);
}

Outcome generation_counts(const Options& opt) {
  Outcome o;
  struct Want {
    int white;
    std::size_t classes;
    long graphs;  // uncoloured, -1 when not stated
  };
  std::vector<Want> wants{{35, 5, -1}, {36, 1, -1}, {37, 0, -1}};
  if (opt.extended) {
    wants.push_back({38, 8, -1});
    wants.push_back({39, 13, 11});
  }
  const auto t0 = Clock::now();
  for (const auto& w : wants) {
    const auto t = Clock::now();
    const auto r = generate_threaded(w.white, opt.threads);
    std::ostringstream s;
    s << w.white << "-" << w.white << ": " << r.graphs.size() << " classes, " << r.uncolored_classes << " graphs, "
      << r.stats.nodes << " nodes, " << secs(since(t));
    o.note(s.str());
    o.expect(r.graphs.size() == w.classes, std::to_string(2 * w.white) + " vertices: expected " + std::to_string(w.classes) + " classes");
    if (w.graphs >= 0) o.expect(static_cast<long>(r.uncolored_classes) == w.graphs, "uncoloured count");
    if (w.white == 39) {
      std::size_t self_dual = 0;
      for (const auto& g : r.graphs) {
        const auto h = graph_to_mmp(g, AtomColor::White);
        self_dual += mmp_isomorphic(h, dualize(h));
      }
      o.note(std::to_string(self_dual) + " self-dual");
      o.expect(self_dual == 9, "expected 9 self-dual 39-39 classes");
    }
    if (w.white == 35 || w.white == 36) {
      // The shipped corpus must be exactly this output.
      std::set<CanonicalCode> gen(r.codes.begin(), r.codes.end()), shipped;
      for (const auto* f : fixtures::with_prefix(std::to_string(w.white) + "-" + std::to_string(w.white)))
        shipped.insert(mmp_canonical_code(f->h));
      o.expect(gen == shipped, "corpus " + std::to_string(w.white) + "-" + std::to_string(w.white) + " differs from the generator");
    }
  }
  if (!opt.extended) o.note("76 and 78 vertices skipped (--extended)");
  o.within(since(t0), 48 * 3600.0, "generation");
  return o;
}

Outcome self_duality() {
  Outcome o;
  const auto& a = fixtures::get("39-39-00");
  o.expect(mmp_isomorphic(dualize(a), a), "39-39-00 is not self-dual");
  o.expect(mmp_isomorphic(dualize(fixtures::get("39-39-01a")), fixtures::get("39-39-01b")), "01a/01b are not duals");
  o.expect(mmp_isomorphic(dualize(fixtures::get("39-39-08a")), fixtures::get("39-39-08b")), "08a/08b are not duals");
  o.expect(!mmp_isomorphic(fixtures::get("39-39-01a"), fixtures::get("39-39-01b")), "01a and 01b coincide");
  std::size_t self_dual = 0;
  for (const auto* f : thirty_nines()) self_dual += mmp_isomorphic(dualize(f->h), f->h);
  o.note(std::to_string(self_dual) + " of 13 fixtures self-dual");
  return o;
}

Outcome states(const Options& opt) {
  Outcome o;
  StateOptions so;
  so.threads = opt.threads;
  for (const auto* f : thirty_nines()) {
    const auto t = Clock::now();
    const Oml L = paste(f->h);
    const auto r = solve_states(L, QueryAdmits | QueryUnique, so);
    const bool self_dual = mmp_isomorphic(dualize(f->h), f->h);
    const std::string name = f->name;
    o.expect(r.admits_state, name + " admits no state");
    if (self_dual || name == "39-39-08a" || name == "39-39-08b") {
      o.expect(r.exactly_one && *r.exactly_one, name + " should have exactly one state");
      if (r.unique_state)
        for (const auto& q : *r.unique_state) o.expect(q == mpq_class(1, 3), name + " unique state is not 1/3 everywhere");
    }
    if (name == "39-39-01a" || name == "39-39-01b")
      o.expect(r.dimension && *r.dimension >= 1, name + " should have a state polytope of dimension >= 1");
    o.note(name + (self_dual ? " (self-dual)" : "") + ": dimension " + (r.dimension ? std::to_string(*r.dimension) : "?") + ", " +
           secs(since(t)));
    o.within(since(t), 300, name + " states");
  }
  return o;
}

Outcome strong_sets(const Options& opt) {
  Outcome o;
  StateOptions so;
  so.threads = opt.threads;
  auto list = thirty_nines();
  for (auto* f : generated_fixtures()) list.push_back(f);
  o.expect(!fixtures::with_prefix("35-35").empty() && !fixtures::with_prefix("36-36").empty(), "generated 35-35/36-36 missing from the corpus");
  for (const auto* f : list) {
    const auto r = solve_states(paste(f->h), QueryAdmits | QueryStrong, so);
    o.expect(r.strong_quantum && !*r.strong_quantum, f->name + " has a strong set of states");
  }
  const auto t = Clock::now();
  const auto ck = solve_states(paste(fixtures::get("conway-kochen")), QueryAdmits | QueryStrong, so);
  o.expect(ck.strong_quantum && *ck.strong_quantum, "Conway-Kochen has no strong set of states");
  o.note(std::to_string(list.size()) + " equal-size lattices without strong sets; Conway-Kochen strong (" +
         std::to_string(ck.lps_solved) + " LPs, " + secs(since(t)) + ")");
  o.within(since(t), 1800, "Conway-Kochen strong set");
  return o;
}

Outcome equations(const Options& opt) {
  Outcome o;
  EvalOptions eo;
  eo.threads = opt.threads;
  const auto run = [&](const fixtures::Fixture& f, const Oml& L, const std::string& eq) {
    const Condition c = builtin(eq);
    const auto t = Clock::now();
    const auto r = evaluate(L, c, eo);
    o.within(since(t), 600, eq + " on " + f.name);
    if (r.verdict == Verdict::Fails) {
      std::map<std::string, int> env;
      std::string ce;
      for (const auto& b : r.counterexample) {
        env[b.variable] = b.element;
        ce += (ce.empty() ? "" : " ") + b.variable + "=" + b.element_name;
      }
      // Substituted back by the independent evaluator.
      const bool confirmed = !oracle::NaiveEvaluator(L).instance(c, env);
      return std::make_pair(false, ce + (confirmed ? " (confirmed)" : " (NOT confirmed)"));
    }
    return std::make_pair(true, secs(since(t)));
  };

  const auto& ckf = *fixtures::with_prefix("conway-kochen").front();
  const Oml ck = paste(ckf.h);
  o.expect(!run(ckf, ck, "modular").first, "modular law holds on Conway-Kochen");
  for (const char* eq : {"e3", "e4", "godowski3"}) {
    const auto [holds, info] = run(ckf, ck, eq);
    o.expect(holds, std::string(eq) + " fails on Conway-Kochen: " + info);
  }
  for (const auto* f : thirty_nines()) {
    const Oml L = paste(f->h);
    for (const char* eq : {"e3", "e4"}) {
      const auto [holds, info] = run(*f, L, eq);
      o.expect(holds, std::string(eq) + " fails on " + f->name + ": " + info);
    }
    const auto noa3 = run(*f, L, "noa3");
    const auto noa4 = run(*f, L, "noa4");
    o.note(f->name + ": noa3 " + (noa3.first ? "holds" : "fails") + ", noa4 " + (noa4.first ? "holds" : "fails"));
    o.expect(!noa3.first || !noa4.first, "noa3 and noa4 both hold on " + f->name);
    o.expect(!run(*f, L, "godowski3").first, "godowski3 holds on " + f->name);
  }
  return o;
}

Outcome superposition() {
  Outcome o;
  const auto check = [&](const std::string& name, const MmpHypergraph& h, bool expect) {
    const auto t = Clock::now();
    const Oml L = paste(h);
    const bool holds = check_superposition(L).verdict == Verdict::Holds;
    const bool prenex = evaluate(L, builtin("superposition")).verdict == Verdict::Holds;
    o.expect(holds == prenex, name + ": direct check and evaluated condition disagree");
    o.expect(holds == expect, name + (expect ? " fails" : " holds"));
    o.within(since(t), 1, name);
  };
  check("pentagon", fixtures::get("pentagon"), false);
  check("123,145.", parse_mmp("123,145."), false);
  std::size_t n = 0;
  for (const auto& f : fixtures::all())
    if (f.h.is_uniform(3) && f.h.is_regular(3)) {
      check(f.name, f.h, true);
      ++n;
    }
  o.expect(fixtures::has("36-36"), "36-36 missing from the corpus");
  o.note(std::to_string(n) + " 3-regular fixtures hold");
  return o;
}

Outcome loops() {
  Outcome o;
  for (const auto& f : fixtures::all()) {
    const auto t = Clock::now();
    const auto r = loop_analysis(f.h);
    // At most half the atoms: each block of a loop brings two new ones.
    o.expect(r.max_loop_order <= static_cast<int>(f.h.vertex_count()) / 2, f.name + " exceeds the half-atom bound");
    if (f.name.rfind("39-39-", 0) == 0) o.expect(r.max_loop_order == 19, f.name + " max loop " + std::to_string(r.max_loop_order));
    o.within(since(t), 60, f.name + " loops");
  }
  o.note("39-39 max loops are enneadecagons");
  return o;
}

Outcome ks_coloring() {
  Outcome o;
  const auto t = Clock::now();
  o.expect(!two_valued_coloring(fixtures::get("conway-kochen")), "Conway-Kochen has a two-valued state");
  o.note("no two-valued state, " + secs(since(t)));
  o.within(since(t), 60, "coloring search");
  return o;
}

Outcome modularity_scan() {
  Outcome o;
  const auto t = Clock::now();
  const std::vector<std::string> stars{"123.", "123,145.", "123,145,167.", "123,145,167,189."};
  std::vector<std::vector<MmpHypergraph>> modular(5);
  for (const auto& h : generate_greechie_small(4))
    if (evaluate(paste(h), builtin("modular")).verdict == Verdict::Holds) modular[h.block_count()].push_back(h);
  for (std::size_t k = 1; k <= 4; ++k) {
    o.expect(modular[k].size() == 1, std::to_string(modular[k].size()) + " modular lattices with " + std::to_string(k) + " blocks");
    if (modular[k].size() == 1) o.expect(mmp_isomorphic(modular[k][0], parse_mmp(stars[k - 1])), "modular lattice is not the star");
  }
  o.within(since(t), 600, "scan");
  return o;
}

Outcome vectors_from_stars() {
  Outcome o;
  const auto t = Clock::now();
  using Triple = std::set<Vec3Q>;
  const auto triple = [](std::initializer_list<Vec3Q> v) { return Triple(v); };
  const auto compare = [&](const std::string& mmp, const std::vector<Triple>& want) {
    const auto h = parse_mmp(mmp);
    const auto a = vectorfind(h);
    if (!a) return o.fail(mmp + ": no vectors found");
    o.expect(is_realization(h, *a), mmp + ": not a realization");
    const auto pb = h.position_blocks();
    for (std::size_t b = 0; b < pb.size(); ++b) {
      Triple got;
      for (int x : pb[b]) got.insert((*a)[static_cast<std::size_t>(x)]);
      std::string s;
      for (const auto& v : got) s += v.str();
      o.expect(got == want[b], mmp + " block " + std::to_string(b + 1) + " got " + s);
    }
  };
  const Triple base = triple({Vec3Q(0, 0, 1), Vec3Q(0, 1, 0), Vec3Q(1, 0, 0)});
  compare("123,145,167,189.", {base, triple({Vec3Q(0, 0, 1), Vec3Q(1, -2, 0), Vec3Q(2, 1, 0)}),
                               triple({Vec3Q(0, 0, 1), Vec3Q(1, -1, 0), Vec3Q(1, 1, 0)}),
                               triple({Vec3Q(0, 0, 1), Vec3Q(1, 2, 0), Vec3Q(2, -1, 0)})});
  compare("123,145,267.", {base, triple({Vec3Q(0, 0, 1), Vec3Q(1, -2, 0), Vec3Q(2, 1, 0)}),
                           triple({Vec3Q(0, 1, 0), Vec3Q(1, 0, -2), Vec3Q(2, 0, 1)})});
  o.within(since(t), 60, "vectorfind");
  return o;
}

Outcome subspace_oa() {
  Outcome o;
  const Vec3Q v1(0, 0, 1), v2(1, 0, 0), vF(1, -2, -1), vD(1, 1, -1);
  const auto bub = check_noa_subspace(1, {span(v1), span(vF)}, {span(v2), span(vD)});
  o.expect(bub.holds, "Bub quadruple fails");
  o.note("Bub: " + bub.lhs.str() + " <= " + bub.rhs.str());

  std::mt19937_64 rng(20240501);
  std::uniform_int_distribution<long> c(-3, 3);
  int done = 0, failed = 0;
  while (done < 1000) {
    std::vector<Subspace3> M, N;
    for (int i = 0; i < 2; ++i) {
      const Vec3Q a(c(rng), c(rng), c(rng));
      const Vec3Q b = cross(a, Vec3Q(c(rng), c(rng), c(rng)));
      if (a.is_zero() || b.is_zero()) break;
      M.push_back(span(a));
      N.push_back(rng() % 3 == 0 ? plane(a) : span(b));
    }
    if (M.size() != 2) continue;
    failed += !check_noa_subspace(1, M, N).holds;
    ++done;
  }
  o.expect(failed == 0, std::to_string(failed) + " random quadruples fail");

  // Lattice side: in the pasted fragment two nonorthogonal atoms join to 1,
  // where the subspaces only span a plane.
  const auto& h = fixtures::get("bub-fragment");
  const Oml L = paste(h);
  const auto id = [&](const char* label) { return L.atom(h.vertex_position(parse_vertex_label(label))); };
  const int a1 = id("1"), a2 = id("2"), aF = id("F"), aD = id("D");
  o.expect(L.join(a1, aF) == Oml::one(), "1 v F is not 1 in the lattice");
  o.expect(sum(span(v1), span(vF)).dim() == 2, "1 + F is not a plane");
  o.note("lattice 1 v F = 1, subspace 1 + F = " + sum(span(v1), span(vF)).str());

  const Condition c3 = builtin("oa3_split");
  oracle::NaiveEvaluator ev(L);
  std::vector<std::array<int, 4>> pairings{{a1, a2, aF, aD}, {a2, a1, aF, aD}, {a1, a2, aD, aF}, {a2, a1, aD, aF},
                                           {aF, aD, a1, a2}, {aD, aF, a1, a2}, {aF, aD, a2, a1}, {aD, aF, a2, a1}};
  std::string rec;
  for (const auto& p : pairings) {
    const bool holds = ev.instance(c3, {{"a", p[0]}, {"b", p[1]}, {"q", p[2]}, {"n", p[3]}});
    rec += " (" + L.name(p[0]) + "," + L.name(p[1]) + "|" + L.name(p[2]) + "," + L.name(p[3]) + ")" + (holds ? "holds" : "fails");
  }
  o.note("3OA pairings:" + rec);
  return o;
}

Outcome layout_36() {
  Outcome o;
  if (!fixtures::has("36-36")) {
    o.fail("36-36 missing from the corpus");
    return o;
  }
  const auto& h = fixtures::get("36-36");
  const auto p = plan_layout(h);
  o.expect(p.independent_blocks.size() == 9, std::to_string(p.independent_blocks.size()) + " independent blocks");
  o.expect(p.free_atoms.size() == 9, std::to_string(p.free_atoms.size()) + " free atoms");
  o.expect(p.level1.closed && !p.level1.blocks.empty(), "level 1 is not a closed cycle");
  o.expect(p.level2.size() == 1 && p.level2[0].closed, "level 2 is not a single closed cycle");
  o.expect(p.level3.size() == 1 && p.level3[0].closed, "level 3 is not a single closed cycle");
  const auto a = render_svg(h, p), b = render_svg(h, plan_layout(h));
  o.expect(a == b, "SVG output differs between runs");
  o.expect(a.size() == 4, std::to_string(a.size()) + " SVG documents");
  o.note("cycles of " + std::to_string(p.level1.blocks.size()) + ", " + (p.level2.empty() ? "0" : std::to_string(p.level2[0].blocks.size())) +
         ", " + (p.level3.empty() ? "0" : std::to_string(p.level3[0].blocks.size())) + " blocks");
  return o;
}

Outcome property_suites() {
  Outcome o;
  std::mt19937_64 rng(77);
  for (int i = 0; i < 10000; ++i) {
    const auto h = oracle::random_hypergraph(rng, 40, 300);
    const auto s = serialize_mmp(h);
    if (!(parse_mmp(s) == h) || serialize_mmp(parse_mmp(s)) != s) {
      o.fail("round trip broke on " + s);
      break;
    }
  }

  std::size_t lattices = 0;
  for (const auto& h : generate_greechie_small(6)) {
    if (2 * h.vertex_count() + 2 > 26) continue;
    const Oml L = paste(h);
    ++lattices;
    for (const char* eq : {"oml", "modular", "distributive", "noa3", "godowski3", "newst1d", "oa3_split", "superposition"}) {
      const Condition c = builtin(eq);
      if ((evaluate(L, c).verdict == Verdict::Holds) != oracle::NaiveEvaluator(L).holds(c))
        o.fail(std::string(eq) + " disagrees with the naive evaluator on " + serialize_mmp(h));
    }
  }
  o.note(std::to_string(lattices) + " lattices up to 26 elements");

  for (int W = 3; W <= 7; ++W)
    for (int g : {4, 6}) {
      GenerationJob job;
      job.white_count = W;
      job.min_girth = g;
      const auto r = generate(job);
      const auto b = oracle::brute_cubic_bipartite(W, g);
      o.expect(r.graphs.size() == b.colored && r.uncolored_classes == b.uncolored,
               "generation at " + std::to_string(W) + "+" + std::to_string(W) + " girth " + std::to_string(g));
      for (const auto& gr : r.graphs) {
        const auto h = graph_to_mmp(gr, AtomColor::White);
        const auto lr = loop_analysis(h);
        const auto gi = girth(gr);
        o.expect(lr.min_loop_order.has_value() == gi.has_value() && (!gi || 2 * *lr.min_loop_order == *gi),
                 "loop/girth mismatch on " + serialize_mmp(h));
      }
    }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance run"};
  bool strict = false;
  Options opt;
  opt.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<int> only;
  app.add_flag("--strict", strict, "exit 1 on any failure");
  app.add_flag("--extended", opt.extended, "also generate 38-38 and 39-39 (days)");
  app.add_option("--only", only, "criteria to run")->delimiter(',');
  app.add_option("--threads", opt.threads, "worker threads");
  std::string report_path;
  app.add_option("--report", report_path, "also write the report here");
  CLI11_PARSE(app, argc, argv);

  std::ofstream report;
  if (!report_path.empty()) report.open(report_path);
  const auto say = [&](const std::string& line) {
    std::cout << line << std::endl;
    if (report) report << line << std::endl;
  };

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"fixture round trip", fixture_round_trip},
      {"Conway-Kochen lattice", conway_kochen_lattice},
      {"generation counts", [&] { return generation_counts(opt); }},
      {"self-duality", self_duality},
      {"states", [&] { return states(opt); }},
      {"strong sets", [&] { return strong_sets(opt); }},
      {"equations", [&] { return equations(opt); }},
      {"superposition", superposition},
      {"loop statistics", loops},
      {"Kochen-Specker colouring", ks_coloring},
      {"modularity scan", modularity_scan},
      {"vectorfind", vectors_from_stars},
      {"subspace 3OA", subspace_oa},
      {"layout", layout_36},
      {"property suites", property_suites},
  };

  int passed = 0, failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), n) == only.end()) continue;
    const auto t = Clock::now();
    Outcome r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.fail(std::string("exception: ") + e.what());
    }
    say(std::string(r.pass ? "PASS " : "FAIL ") + (n < 10 ? " " : "") + std::to_string(n) + " " + criteria[i].first + " (" +
        secs(since(t)) + ")");
    for (const auto& s : r.notes) say("       " + s);
    (r.pass ? passed : failed)++;
  }
  say(std::to_string(passed) + " passed, " + std::to_string(failed) + " failed");
  return strict && failed > 0 ? 1 : 0;
}
