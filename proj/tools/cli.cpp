#include "cli.hpp"

#include "aklt/errors.hpp"
#include "aklt/serialization.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

namespace aklt::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kTwiceSpin = 3;
constexpr int kProjectorJ = 3;

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  return buf;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SystemSpec {
  std::string system;
  std::optional<int> K;
  std::optional<int> n;
  std::string a = "1";
};

struct SolverFlags {
  std::string solver = "auto";
  std::string strategy = "minimal";
  double tol = 1e-10;
  double kernel_tol = 1e-8;
  std::uint64_t seed = 1;
  int threads = 1;
  std::size_t max_dim = 2'000'000;
  std::string cache;
  bool progress = false;
  std::string checkpoint;
  double checkpoint_wall = std::numeric_limits<double>::infinity();
};

struct OutputFlags {
  std::string json_path;
  std::string csv_path;
};

void add_system_options(CLI::App* cmd, SystemSpec& spec, bool required) {
  auto* opt = cmd->add_option("--system", spec.system, "A | B | C | C_tilde | sun | chain");
  if (required) opt->required();
  cmd->add_option("--K", spec.K, "path length of C / C_tilde");
  cmd->add_option("--n", spec.n, "number of hexagons for chain");
  cmd->add_option("--a", spec.a, "inner-edge weight of the sun (decimal)");
}

void add_solver_options(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--solver", f.solver, "auto | lanczos | dense")
      ->check(CLI::IsMember({"auto", "lanczos", "dense"}));
  cmd->add_option("--strategy", f.strategy, "minimal | all")
      ->check(CLI::IsMember({"minimal", "all"}));
  cmd->add_option("--tol", f.tol, "residual tolerance");
  cmd->add_option("--kernel-tol", f.kernel_tol, "eigenvalues at or below count as kernel");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--threads", f.threads, "threads for the matrix-vector product")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-dim", f.max_dim, "refuse sectors above this dimension");
  cmd->add_option("--cache", f.cache, "results cache directory");
  cmd->add_flag("--progress", f.progress, "JSON progress records on stderr");
  cmd->add_option("--checkpoint", f.checkpoint, "checkpoint file prefix for Lanczos runs");
  cmd->add_option("--checkpoint-wall", f.checkpoint_wall,
                  "save a checkpoint and stop after this many seconds");
}

void add_output_options(CLI::App* cmd, OutputFlags& o, bool csv) {
  cmd->add_option("--json", o.json_path, "write JSON here ('-' for stdout)");
  if (csv) cmd->add_option("--csv", o.csv_path, "write CSV here ('-' for stdout)");
}

LatticeGraph build_graph(const SystemSpec& spec) {
  const std::string& sys = spec.system;
  if (sys == "chain") {
    if (!spec.n) throw UsageError("--system chain requires --n");
    return hexagonal_chain(*spec.n);
  }
  SubsystemKind kind;
  try {
    kind = parse_subsystem(sys);
  } catch (const StructuralError& e) {
    throw UsageError(e.what());
  }
  if (kind == SubsystemKind::sun) {
    const Rational a = parse_decimal(spec.a);
    return subsystem(kind, std::nullopt, boost::rational_cast<double>(a));
  }
  if ((kind == SubsystemKind::C || kind == SubsystemKind::C_tilde) && !spec.K)
    throw UsageError("--system " + sys + " requires --K");
  return subsystem(kind, spec.K);
}

GapOptions gap_options(const SolverFlags& f, std::ostream& err) {
  GapOptions o;
  o.kernel_tol = f.kernel_tol;
  o.solver = f.solver == "dense"     ? SolverChoice::dense
             : f.solver == "lanczos" ? SolverChoice::lanczos
                                     : SolverChoice::automatic;
  o.lanczos.tol = f.tol;
  o.lanczos.seed = f.seed;
  if (f.progress) o.lanczos.progress = &err;
  o.assemble.threads = f.threads;
  o.max_dim = f.max_dim;
  if (!f.checkpoint.empty()) o.checkpoint_prefix = f.checkpoint;
  o.checkpoint_wall_seconds = f.checkpoint_wall;
  return o;
}

GapStrategy strategy_of(const SolverFlags& f) {
  return f.strategy == "all" ? GapStrategy::all_sectors : GapStrategy::minimal_sz;
}

// Everything that determines the numbers of a gap computation.
json cache_key(const LatticeGraph& g, const SolverFlags& f) {
  std::ostringstream edges;
  write_edge_list(edges, g);
  return {{"format", 1},
          {"edges", edges.str()},
          {"twice_s", kTwiceSpin},
          {"J", kProjectorJ},
          {"strategy", std::string(to_string(strategy_of(f)))},
          {"tol", f.tol},
          {"kernel_tol", f.kernel_tol}};
}

struct GapOutcome {
  SpectralResult result;
  std::string source;  // "computed" or "cache"
  std::string key_hash;
};

void write_cache(const fs::path& file, const json& key, const SpectralResult& r) {
  fs::create_directories(file.parent_path());
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream o(tmp);
    o << json{{"key", key}, {"result", to_json(r)}}.dump(2) << '\n';
  }
  fs::rename(tmp, file);
}

GapOutcome compute_or_load(const LatticeGraph& g, const SolverFlags& f, std::ostream& err) {
  const json key = cache_key(g, f);
  GapOutcome out;
  out.key_hash = sha256_hex(key.dump());
  fs::path file;
  if (!f.cache.empty()) {
    file = fs::path(f.cache) / (out.key_hash + ".json");
    if (fs::exists(file)) {
      std::ifstream in(file);
      const json j = json::parse(in);
      if (j.at("key") == key) {
        out.result = spectral_result_from_json(j.at("result"));
        out.source = "cache";
        return out;
      }
    }
  }
  out.result = spectral_gap(g, SpinValue(kTwiceSpin), kProjectorJ, strategy_of(f), gap_options(f, err));
  out.source = "computed";
  if (!file.empty()) write_cache(file, key, out.result);
  return out;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

void emit_json(const OutputFlags& o, const json& j, std::ostream& out) {
  if (!o.json_path.empty()) write_text(o.json_path, j.dump(2) + "\n", out);
}

bool json_to_stdout(const OutputFlags& o) { return o.json_path == "-"; }

SolverMetadata metadata_of(const std::string& name, const GapOutcome& g, const SolverFlags& f) {
  SolverMetadata m;
  m.system = name;
  m.gap = *g.result.gap;
  for (const auto& s : g.result.sectors)
    if (s.twice_sz == g.result.gap_twice_sz) m.residual = s.gap_residual;
  m.tol = g.result.tol;
  m.kernel_tol = g.result.kernel_tol;
  m.seed = g.result.seed;
  m.strategy = std::string(to_string(g.result.strategy));
  m.source = g.source;
  (void)f;
  return m;
}

// ---------------------------------------------------------------------------

int cmd_gap(const SystemSpec& spec, const SolverFlags& f, const OutputFlags& o, std::ostream& out,
            std::ostream& err) {
  const LatticeGraph g = build_graph(spec);
  const GapOutcome r = compute_or_load(g, f, err);
  json j = to_json(r.result);
  j["cache_key"] = r.key_hash;
  if (!json_to_stdout(o)) {
    out << "system " << g.name() << "  sites " << g.num_sites() << "  edges " << g.edges().size()
        << "  strategy " << to_string(r.result.strategy) << "  (" << r.source << ")\n";
    for (const auto& s : r.result.sectors) {
      out << "  2Sz=" << s.twice_sz << "  dim " << s.dim << "  " << s.method;
      if (s.lowest) out << "  lowest " << sci(*s.lowest);
      if (s.kernel_dimension >= 0)
        out << "  kernel " << (s.kernel_exact ? "" : ">=") << s.kernel_dimension;
      if (s.gap) out << "  gap " << fixed(*s.gap, 12) << "  residual " << sci(s.gap_residual);
      out << "  " << fixed(s.seconds, 2) << " s\n";
    }
    if (r.result.gap)
      out << "gap " << fixed(*r.result.gap, 12) << "  (2Sz=" << r.result.gap_twice_sz << ")\n";
    else
      out << "gap: none (operator vanishes)\n";
  }
  emit_json(o, j, out);
  return success;
}

int cmd_table(int which, const SolverFlags& f, const OutputFlags& o, std::ostream& out,
              std::ostream& err) {
  std::vector<std::pair<std::string, SystemSpec>> rows;
  if (which == 1) {
    rows = {{"A", {"A", {}, {}, "1"}}, {"B", {"B", {}, {}, "1"}}};
  } else if (which == 2) {
    for (int K : {5, 10, 11, 12, 13, 14}) rows.push_back({"C(" + std::to_string(K) + ")", {"C", K, {}, "1"}});
  } else {
    throw UsageError("--which must be 1 or 2");
  }
  json jrows = json::array();
  std::ostringstream csv;
  csv << "table,system,K,gap,lower_bound,status,message\n";
  const bool text = !json_to_stdout(o) && o.csv_path != "-";
  if (text) out << "Table " << which << ": spectral gaps (lower bound = gap rounded down to 3 decimals)\n";
  int status = success;
  for (const auto& [label, spec] : rows) {
    json row{{"system", label}, {"K", spec.K ? json(*spec.K) : json(nullptr)}};
    std::string kcol = spec.K ? std::to_string(*spec.K) : "";
    try {
      const LatticeGraph g = build_graph(spec);
      const GapOutcome r = compute_or_load(g, f, err);
      const double gap = *r.result.gap;
      const double lb = floor_decimals(gap, 3);
      row["gap"] = gap;
      row["lower_bound"] = lb;
      row["status"] = r.source;
      if (text) out << "  " << label << "  " << fixed(lb, 3) << "  (" << fixed(gap, 10) << ", " << r.source << ")\n";
      csv << "table" << which << ',' << label << ',' << kcol << ',' << fixed(gap, 12) << ','
          << fixed(lb, 3) << ',' << r.source << ",\n";
    } catch (const BudgetRefusal& e) {
      row["status"] = "skipped";
      row["message"] = e.what();
      if (text) out << "  " << label << "  skipped: " << e.what() << " (raise --max-dim)\n";
      csv << "table" << which << ',' << label << ',' << kcol << ",,,skipped,\"" << e.what() << "\"\n";
    } catch (const LanczosFailure& e) {
      row["status"] = "error";
      row["message"] = e.what();
      status = solver_failure;
      if (text) out << "  " << label << "  error: " << e.what() << '\n';
      csv << "table" << which << ',' << label << ',' << kcol << ",,,error,\"" << e.what() << "\"\n";
    }
    jrows.push_back(row);
  }
  emit_json(o, json{{"table", which}, {"rows", jrows}}, out);
  if (!o.csv_path.empty()) write_text(o.csv_path, csv.str(), out);
  return status;
}

std::map<std::string, double> parse_supplied(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--gap expects NAME=VALUE, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    try {
      out[name] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("--gap value is not a number: '" + item + "'");
    }
  }
  return out;
}

// Gap of one subsystem: supplied value, else cache, else computed within
// budget. Returns nullopt (with a reason) when none of these applies.
std::optional<SolverMetadata> resolve_gap(const std::string& name, const LatticeGraph& g,
                                          const std::map<std::string, double>& supplied,
                                          const SolverFlags& f, std::ostream& err,
                                          std::string& reason) {
  if (auto it = supplied.find(name); it != supplied.end()) {
    SolverMetadata m;
    m.system = name;
    m.gap = it->second;
    m.source = "supplied";
    return m;
  }
  try {
    const GapOutcome r = compute_or_load(g, f, err);
    if (!r.result.gap) {
      reason = name + ": no positive eigenvalue";
      return std::nullopt;
    }
    return metadata_of(name, r, f);
  } catch (const BudgetRefusal& e) {
    reason = name + ": " + e.what();
    return std::nullopt;
  }
}

int print_certificate(const CriterionReport& r, const OutputFlags& o, std::ostream& out) {
  const json j = to_json(r);
  if (!json_to_stdout(o)) {
    out << "model " << r.model << '\n';
    for (const auto& [name, g] : r.gaps) out << "  gamma_" << name << " = " << fixed(g, 6) << '\n';
    out << "gamma_min " << fixed(r.gamma_min, 6) << " (" << r.gamma_min_system << ")  threshold "
        << to_string(r.threshold) << " = " << fixed(r.threshold_value, 6) << '\n';
    if (r.bound) out << "bound " << fixed(*r.bound, 6) << "  c = " << fixed(*r.constant_c, 3) << '\n';
    if (r.relative_shortfall) out << "relative shortfall " << fixed(100.0 * *r.relative_shortfall, 2) << "%\n";
    if (r.audit) out << "coverage audit (n=" << r.audit->n << "): " << (r.audit->pass ? "pass" : "FAIL") << '\n';
    out << "verdict: " << to_string(r.verdict) << '\n';
  }
  emit_json(o, j, out);
  return r.verdict == Verdict::certified ? success : criterion_failed;
}

int cmd_certify_chain(int K, std::optional<int> n, const std::vector<std::string>& gap_items,
                      bool audit, const SolverFlags& f, const OutputFlags& o, std::ostream& out,
                      std::ostream& err) {
  chain_threshold_exact(K);  // validates K before any computation
  const auto supplied = parse_supplied(gap_items);
  for (const auto& [name, v] : supplied)
    if (name != "A" && name != "B" && name != "C") throw UsageError("unknown gap name '" + name + "'");
  std::vector<SolverMetadata> meta;
  std::vector<std::string> missing;
  ChainGaps gaps;
  const std::pair<std::string, LatticeGraph> systems[] = {
      {"A", subsystem(SubsystemKind::A)},
      {"B", subsystem(SubsystemKind::B)},
      {"C", subsystem(SubsystemKind::C, K)},
  };
  for (const auto& [name, g] : systems) {
    std::string reason;
    auto m = resolve_gap(name, g, supplied, f, err, reason);
    if (!m) {
      missing.push_back(reason);
      continue;
    }
    (name == "A" ? gaps.A : name == "B" ? gaps.B : gaps.C) = m->gap;
    meta.push_back(*m);
  }
  if (!missing.empty()) {
    std::string msg = "missing gap data;";
    for (const auto& r : missing) msg += " " + r + ";";
    msg += " supply values with --gap NAME=VALUE or raise --max-dim";
    throw IncompleteDataError(msg);
  }
  CriterionReport r = certify_chain(K, gaps, std::move(meta));
  if (audit) r.audit = full_audit(n.value_or(minimum_chain_length(K)), K);
  return print_certificate(r, o, out);
}

int cmd_certify_sun(const std::string& a_text, const std::vector<std::string>& gap_items,
                    const SolverFlags& f, const OutputFlags& o, std::ostream& out, std::ostream& err) {
  const Rational a = parse_decimal(a_text);
  sun_threshold_exact(a);  // validates a >= 1
  const auto supplied = parse_supplied(gap_items);
  for (const auto& [name, v] : supplied)
    if (name != "S") throw UsageError("unknown gap name '" + name + "' (expected S)");
  const LatticeGraph g = subsystem(SubsystemKind::sun, std::nullopt, boost::rational_cast<double>(a));
  std::string reason;
  auto m = resolve_gap("S", g, supplied, f, err, reason);
  if (!m) throw IncompleteDataError("missing gap data; " + reason);
  return print_certificate(certify_sun(a, m->gap, {*m}), o, out);
}

int cmd_audit(int n, int K, const OutputFlags& o, std::ostream& out) {
  CoverageReport r;
  try {
    r = full_audit(n, K);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (!json_to_stdout(o)) {
    out << "coverage audit n=" << n << " K=" << K << '\n';
    for (const auto* group : {&r.edge_classes, &r.pair_classes})
      for (const auto& t : *group)
        out << "  " << t.name << ": " << t.members << " members, totals [" << t.min_total << ", "
            << t.max_total << "], expected " << t.expected << "  " << (t.pass ? "ok" : "FAIL") << '\n';
    if (r.max_disjoint)
      out << "  disjoint pairs: max total " << r.max_disjoint->total << " <= " << r.max_disjoint->bound
          << "  (" << r.max_disjoint->description << ")\n";
    out << (r.pass ? "pass" : "FAIL") << '\n';
  }
  emit_json(o, to_json(r), out);
  return r.pass ? success : criterion_failed;
}

int cmd_export(const SystemSpec& spec, const std::string& format, std::optional<int> sector,
               const std::string& output, const SolverFlags& f, std::ostream& out) {
  const LatticeGraph g = build_graph(spec);
  std::ostringstream text;
  if (format == "edges") {
    write_edge_list(text, g);
  } else {
    const SpinValue s(kTwiceSpin);
    const int tw = sector.value_or(SectorBasis::minimal_twice_sz(g.num_sites(), s));
    const auto dim = SectorBasis::dimension(g.num_sites(), s, tw);
    if (dim > f.max_dim)
      throw BudgetRefusal("sector dimension " + std::to_string(dim) + " exceeds --max-dim " +
                              std::to_string(f.max_dim),
                          dim, f.max_dim);
    AssembleOptions ao;
    ao.explicit_cutoff = 0;
    ao.threads = f.threads;
    write_matrix_market(text, assemble(g, s, kProjectorJ, tw, ao).build_sparse());
  }
  write_text(output, text.str(), out);
  return success;
}

void error_json(std::ostream& err, const OutputFlags& o, std::ostream& out, const std::string& kind,
                const std::string& message, int code, json extra = json::object()) {
  json j{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
  for (auto& [k, v] : extra.items()) j["error"][k] = v;
  err << j.dump() << '\n';
  if (!o.json_path.empty() && o.json_path != "-") {
    try {
      write_text(o.json_path, j.dump(2) + "\n", out);
    } catch (...) {
    }
  }
}

}  // namespace

void store_cached_result(const std::string& dir, const LatticeGraph& graph,
                         const SpectralResult& result) {
  const json key = cache_key(graph, SolverFlags{});
  write_cache(fs::path(dir) / (sha256_hex(key.dump()) + ".json"), key, result);
}

std::string sha256_hex(const std::string& text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral-gap certification for the spin-3/2 AKLT model on hexagonal chains",
               "aklt-gap"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "aklt-gap 0.1.0");

  SystemSpec spec;
  SolverFlags flags;
  OutputFlags output;

  auto* gap = app.add_subcommand("gap", "spectral gap of one system");
  add_system_options(gap, spec, true);
  add_solver_options(gap, flags);
  add_output_options(gap, output, false);

  int which = 2;
  auto* table = app.add_subcommand("table", "reproduce a gap table (1: A, B; 2: C(K))");
  table->add_option("--which", which, "table number")->check(CLI::IsMember({1, 2}));
  add_solver_options(table, flags);
  add_output_options(table, output, true);

  auto* certify = app.add_subcommand("certify", "evaluate a finite-size criterion");
  certify->require_subcommand(1);
  std::vector<std::string> gap_items;
  int cert_K = 0;
  std::optional<int> cert_n;
  bool no_audit = false;
  auto* chain = certify->add_subcommand("chain", "hexagonal chain criterion");
  chain->add_option("--K", cert_K, "even K >= 4")->required();
  chain->add_option("--n", cert_n, "chain length for the coverage audit");
  chain->add_option("--gap", gap_items, "supplied gap, e.g. A=0.168 (repeatable)");
  chain->add_flag("--no-audit", no_audit, "skip the coverage audit");
  add_solver_options(chain, flags);
  add_output_options(chain, output, false);
  std::string sun_a = "1.4";
  auto* sun = certify->add_subcommand("sun", "weighted hexagonal sun criterion");
  sun->add_option("--a", sun_a, "inner-edge weight (decimal)");
  sun->add_option("--gap", gap_items, "supplied gap, S=VALUE");
  add_solver_options(sun, flags);
  add_output_options(sun, output, false);

  int audit_n = 0, audit_K = 0;
  auto* audit = app.add_subcommand("audit", "coverage audit of the counting identities");
  audit->add_option("--n", audit_n, "hexagons in the chain")->required();
  audit->add_option("--K", audit_K, "path length")->required();
  add_output_options(audit, output, false);

  std::string format = "mtx", export_out = "-";
  std::optional<int> sector;
  auto* exp = app.add_subcommand("export", "export a sector matrix or an edge list");
  add_system_options(exp, spec, true);
  exp->add_option("--format", format, "mtx | edges")->check(CLI::IsMember({"mtx", "edges"}));
  exp->add_option("--sector", sector, "2Sz of the exported sector (default: minimal)");
  exp->add_option("--output", export_out, "output file ('-' for stdout)");
  exp->add_option("--max-dim", flags.max_dim, "refuse sectors above this dimension");
  exp->add_option("--threads", flags.threads, "threads");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return success;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return success;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return success;
  } catch (const CLI::ParseError& e) {
    error_json(err, output, out, "usage", e.what(), usage_error);
    return usage_error;
  }

  try {
    if (*gap) return cmd_gap(spec, flags, output, out, err);
    if (*table) return cmd_table(which, flags, output, out, err);
    if (*chain) return cmd_certify_chain(cert_K, cert_n, gap_items, !no_audit, flags, output, out, err);
    if (*sun) return cmd_certify_sun(sun_a, gap_items, flags, output, out, err);
    if (*audit) return cmd_audit(audit_n, audit_K, output, out);
    if (*exp) return cmd_export(spec, format, sector, export_out, flags, out);
  } catch (const UsageError& e) {
    error_json(err, output, out, "usage", e.what(), usage_error);
    return usage_error;
  } catch (const BudgetRefusal& e) {
    error_json(err, output, out, "budget_refusal", e.what(), budget_refusal,
               {{"dimension", e.dimension}, {"max_dim", e.max_dim}});
    return budget_refusal;
  } catch (const IncompleteDataError& e) {
    error_json(err, output, out, "incomplete_gap_data", e.what(), budget_refusal);
    return budget_refusal;
  } catch (const LanczosFailure& e) {
    json best{{"values", e.best.values}, {"residuals", e.best.residuals}, {"matvecs", e.best.matvecs}};
    error_json(err, output, out, "solver_failure", e.what(), solver_failure, {{"best", best}});
    return solver_failure;
  } catch (const CheckpointSaved& e) {
    error_json(err, output, out, "checkpoint_saved", e.what(), solver_failure);
    return solver_failure;
  } catch (const DomainError& e) {
    error_json(err, output, out, "usage", e.what(), usage_error);
    return usage_error;
  } catch (const StructuralError& e) {
    error_json(err, output, out, "usage", e.what(), usage_error);
    return usage_error;
  } catch (const std::exception& e) {
    error_json(err, output, out, "solver_failure", e.what(), solver_failure);
    return solver_failure;
  }
  return usage_error;
}

}  // namespace aklt::cli
