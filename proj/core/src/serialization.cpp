#include "aklt/serialization.hpp"

namespace aklt {

using nlohmann::json;

namespace {

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_get(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

json edge_json(const EdgeKey& e) { return json::array({e.a.x, e.a.y, e.b.x, e.b.y}); }

json tally_json(const ClassTally& t) {
  json raw = json::array();
  for (const auto& m : t.raw) raw.push_back({m.a, m.b, m.c});
  return {{"members", t.members}, {"expected", t.expected}, {"min", t.min_total},
          {"max", t.max_total},   {"raw_counts", raw},       {"pass", t.pass}};
}

}  // namespace

json to_json(const SpectralResult& r) {
  json sectors = json::array();
  for (const auto& s : r.sectors) {
    sectors.push_back({{"twice_sz", s.twice_sz},
                       {"dim", s.dim},
                       {"method", s.method},
                       {"lowest", opt(s.lowest)},
                       {"lowest_residual", s.lowest_residual},
                       {"gap", opt(s.gap)},
                       {"gap_residual", s.gap_residual},
                       {"kernel_dimension", s.kernel_dimension},
                       {"kernel_exact", s.kernel_exact},
                       {"probe_gap", opt(s.probe_gap)},
                       {"matvecs", s.matvecs},
                       {"restarts", s.restarts},
                       {"seconds", s.seconds}});
  }
  return {{"system", r.system},
          {"num_sites", r.num_sites},
          {"twice_s", r.twice_s},
          {"J", r.J},
          {"strategy", std::string(to_string(r.strategy))},
          {"kernel_tol", r.kernel_tol},
          {"tol", r.tol},
          {"seed", r.seed},
          {"gap", opt(r.gap)},
          {"gap_twice_sz", r.gap_twice_sz},
          {"ground_energy", opt(r.ground_energy)},
          {"sectors", sectors}};
}

SpectralResult spectral_result_from_json(const json& j) {
  SpectralResult r;
  r.system = j.at("system").get<std::string>();
  r.num_sites = j.at("num_sites").get<int>();
  r.twice_s = j.at("twice_s").get<int>();
  r.J = j.at("J").get<int>();
  r.strategy = j.at("strategy").get<std::string>() == "all_sectors" ? GapStrategy::all_sectors
                                                                     : GapStrategy::minimal_sz;
  r.kernel_tol = j.at("kernel_tol").get<double>();
  r.tol = j.at("tol").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.gap = opt_get<double>(j, "gap");
  r.gap_twice_sz = j.at("gap_twice_sz").get<int>();
  r.ground_energy = opt_get<double>(j, "ground_energy");
  for (const auto& s : j.at("sectors")) {
    SectorResult sr;
    sr.twice_sz = s.at("twice_sz").get<int>();
    sr.dim = s.at("dim").get<std::size_t>();
    sr.method = s.at("method").get<std::string>();
    sr.lowest = opt_get<double>(s, "lowest");
    sr.lowest_residual = s.at("lowest_residual").get<double>();
    sr.gap = opt_get<double>(s, "gap");
    sr.gap_residual = s.at("gap_residual").get<double>();
    sr.kernel_dimension = s.at("kernel_dimension").get<int>();
    sr.kernel_exact = s.at("kernel_exact").get<bool>();
    sr.probe_gap = opt_get<double>(s, "probe_gap");
    sr.matvecs = s.at("matvecs").get<std::uint64_t>();
    sr.restarts = s.at("restarts").get<int>();
    sr.seconds = s.at("seconds").get<double>();
    r.sectors.push_back(std::move(sr));
  }
  return r;
}

json to_json(const CoverageReport& r) {
  json edges = json::object(), pairs = json::object();
  for (const auto& t : r.edge_classes) edges[t.name] = tally_json(t);
  for (const auto& t : r.pair_classes) pairs[t.name] = tally_json(t);
  json maxd = nullptr;
  if (r.max_disjoint) {
    const auto& d = *r.max_disjoint;
    maxd = {{"total", d.total},
            {"bound", d.bound},
            {"edges", {edge_json(d.first), edge_json(d.second)}},
            {"raw_counts", {d.raw.a, d.raw.b, d.raw.c}},
            {"type", d.description},
            {"pairs_seen", d.pairs_seen}};
  }
  return {{"n", r.n},
          {"K", r.K},
          {"edge_totals", edges},
          {"pair_totals", pairs},
          {"max_disjoint", maxd},
          {"pass", r.pass}};
}

json to_json(const CriterionReport& r) {
  json meta = json::array();
  for (const auto& m : r.solver_metadata) {
    meta.push_back({{"system", m.system},
                    {"gap", m.gap},
                    {"residual", opt(m.residual)},
                    {"tol", opt(m.tol)},
                    {"kernel_tol", opt(m.kernel_tol)},
                    {"seed", opt(m.seed)},
                    {"strategy", m.strategy},
                    {"source", m.source}});
  }
  json j = {{"model", r.model},
            {"gamma_min", r.gamma_min},
            {"gamma_min_system", r.gamma_min_system},
            {"threshold",
             {{"fraction", to_string(r.threshold)},
              {"value", r.threshold_value},
              {"comparison_value", r.threshold_upper}}},
            {"bound", opt(r.bound)},
            {"verdict", std::string(to_string(r.verdict))},
            {"constant_c", opt(r.constant_c)},
            {"relative_shortfall", opt(r.relative_shortfall)},
            {"solver_metadata", meta},
            {"audit", r.audit ? to_json(*r.audit) : json(nullptr)}};
  if (r.model == "hexagonal_sun") {
    j["a"] = opt(r.a);
    j["gamma_S"] = r.gaps.at("S");
  } else {
    j["K"] = opt(r.K);
    j["gaps"] = r.gaps;
    j["min_chain_length"] = opt(r.min_chain_length);
  }
  return j;
}

}  // namespace aklt
