#include "omlkit/report.hpp"

namespace omlkit {

namespace {

nlohmann::json labels(const MmpHypergraph& h, const std::vector<int>& blocks) {
  nlohmann::json out = nlohmann::json::array();
  for (int b : blocks) {
    std::string s;
    for (VertexId v : h.block(static_cast<std::size_t>(b))) s += vertex_label(v);
    out.push_back(s);
  }
  return out;
}

}  // namespace

nlohmann::json to_json(const MmpHypergraph& h, const ValidationReport& r) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& x : r.violations) {
    nlohmann::json verts = nlohmann::json::array();
    for (VertexId id : x.vertices) verts.push_back(vertex_label(id));
    v.push_back({{"rule", x.rule}, {"message", x.message}, {"blocks", labels(h, x.blocks)}, {"vertices", verts}});
  }
  return {{"level", r.level == ValidationLevel::Mmp ? "mmp" : "greechie"}, {"valid", r.valid}, {"violations", v}};
}

nlohmann::json to_json(const MmpHypergraph& h, const LoopReport& r) {
  nlohmann::json j{{"max_loop_order", r.max_loop_order}, {"witness", labels(h, r.witness)}};
  j["min_loop_order"] = r.min_loop_order ? nlohmann::json(*r.min_loop_order) : nlohmann::json(nullptr);
  j["min_witness"] = labels(h, r.min_witness);
  return j;
}

nlohmann::json to_json(const Oml& L, const AxiomReport& r) {
  nlohmann::json w = nlohmann::json::array();
  for (Oml::Id id : r.witness) w.push_back(L.name(id));
  return {{"pass", r.pass}, {"law", r.law}, {"witness", w}};
}

nlohmann::json to_json(const Condition& c, const CheckResult& r) {
  nlohmann::json ce = nlohmann::json::object();
  for (const auto& b : r.counterexample) ce[b.variable] = b.element_name;
  nlohmann::json j{{"condition", c.name},
                   {"verdict", r.verdict == Verdict::Holds ? "HOLDS" : "FAILS"},
                   {"tuples_examined", r.tuples_examined}};
  j["counterexample"] = r.verdict == Verdict::Fails ? ce : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const GenerationStats& s) {
  return {{"nodes", s.nodes}, {"complete", s.complete}, {"rejected_explored", s.rejected_explored}, {"shard_nodes", s.shard_nodes}};
}

nlohmann::json hypergraph_stats(const MmpHypergraph& h) {
  nlohmann::json j;
  j["atoms"] = h.vertex_count();
  j["blocks"] = h.block_count();
  j["uniform3"] = h.is_uniform(3);
  j["regular3"] = h.is_regular(3);
  j["connected"] = h.is_connected();
  j["loops"] = to_json(h, loop_analysis(h));
  const bool cubic = h.is_uniform(3) && h.is_regular(3);
  if (cubic) {
    const auto gi = girth(mmp_to_graph(h));
    j["incidence_girth"] = gi ? nlohmann::json(*gi) : nlohmann::json(nullptr);
  } else {
    j["incidence_girth"] = nullptr;
  }
  j["self_dual"] = cubic && h.vertex_count() == h.block_count() ? nlohmann::json(mmp_isomorphic(h, dualize(h))) : nlohmann::json(nullptr);
  j["canonical_code"] = mmp_canonical_code(h).hex();
  return j;
}

}  // namespace omlkit
