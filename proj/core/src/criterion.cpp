#include "aklt/criterion.hpp"

#include "aklt/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>

namespace aklt {

namespace {

void require_chain_K(int K) {
  if (K < 4 || K % 2 != 0)
    throw DomainError("K must be an even integer >= 4, got " + std::to_string(K));
}

void require_audit_preconditions(int n, int K) {
  require_chain_K(K);
  if (n < minimum_chain_length(K))
    throw DomainError("audit requires n >= max(20, 2K+1) = " +
                      std::to_string(minimum_chain_length(K)) + ", got n=" + std::to_string(n));
}

using EdgeIndex = std::map<EdgeKey, int>;

struct Translations {
  std::vector<std::vector<EdgeKey>> systems;
  std::vector<int> kind;  // 0 = A, 1 = B, 2 = C or C_tilde
};

// Every translated subsystem entering the auxiliary sum.
Translations translations(int n, int K) {
  Translations t;
  for (int s = 0; s < 2 * n; ++s) {
    if (s % 2 == 0) {
      t.systems.push_back(shift_subsystem(SubsystemKind::A, s, n));
      t.kind.push_back(0);
      t.systems.push_back(shift_subsystem(SubsystemKind::B, s, n));
      t.kind.push_back(1);
    }
    t.systems.push_back(shift_subsystem(SubsystemKind::C, s, n, K));
    t.kind.push_back(2);
    t.systems.push_back(shift_subsystem(SubsystemKind::C_tilde, s, n, K));
    t.kind.push_back(2);
  }
  return t;
}

void bump(Multiplicity& m, int kind) {
  if (kind == 0)
    ++m.a;
  else if (kind == 1)
    ++m.b;
  else
    ++m.c;
}

ClassTally make_tally(std::string name, std::int64_t expected) {
  ClassTally t;
  t.name = std::move(name);
  t.expected = expected;
  t.min_total = std::numeric_limits<std::int64_t>::max();
  t.max_total = std::numeric_limits<std::int64_t>::min();
  return t;
}

void record(ClassTally& t, const Multiplicity& m, int K) {
  const auto total = m.weighted(K);
  ++t.members;
  t.min_total = std::min(t.min_total, total);
  t.max_total = std::max(t.max_total, total);
  t.raw.insert(m);
}

void finish(ClassTally& t) {
  t.pass = t.members > 0 && t.min_total == t.expected && t.max_total == t.expected;
}

int row_offset(int y1, int y2, int period) {
  int d = ((y2 - y1) % period + period) % period;
  return std::min(d, period - d);
}

std::string describe_pair(const Edge& e, const Edge& f, int period) {
  const Vertex& lo_e = e.a.y <= e.b.y ? e.a : e.b;
  const Vertex& lo_f = f.a.y <= f.b.y ? f.a : f.b;
  std::string s(to_string(e.edge_class));
  s += " + ";
  s += to_string(f.edge_class);
  s += e.a.x == f.a.x && e.b.x == f.b.x ? ", same column" : ", across columns";
  s += ", row offset " + std::to_string(row_offset(lo_e.y, lo_f.y, period));
  return s;
}

}  // namespace

std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_decimal(std::string_view text) {
  if (text.empty()) throw DomainError("parse_decimal: empty string");
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::int64_t num = 0, den = 1;
  bool seen_point = false, seen_digit = false;
  for (char ch : text) {
    if (ch == '.' && !seen_point) {
      seen_point = true;
      continue;
    }
    if (ch < '0' || ch > '9') throw DomainError("parse_decimal: bad literal '" + std::string(text) + "'");
    if (num > (std::numeric_limits<std::int64_t>::max() - 9) / 10 || den > std::numeric_limits<std::int64_t>::max() / 10)
      throw DomainError("parse_decimal: too many digits");
    num = num * 10 + (ch - '0');
    if (seen_point) den *= 10;
    seen_digit = true;
  }
  if (!seen_digit) throw DomainError("parse_decimal: no digits");
  return Rational(negative ? -num : num, den);
}

double round_up_to_grid(const Rational& r) {
  const __int128 scaled = static_cast<__int128>(r.numerator()) * 1'000'000'000'000LL;
  const __int128 q = r.denominator();
  __int128 c = scaled / q;
  if (c * q < scaled) ++c;  // ceiling for positive values
  const double v = static_cast<double>(c) / 1e12;
  return std::nextafter(v, std::numeric_limits<double>::infinity());
}

double floor_decimals(double x, int digits) {
  const double scale = std::pow(10.0, digits);
  return std::floor(x * scale) / scale;
}

Rational chain_threshold_exact(int K) {
  require_chain_K(K);
  return Rational(1, 7) + Rational(1, 7 * (K - 2));
}

double chain_threshold(int K) { return boost::rational_cast<double>(chain_threshold_exact(K)); }

double chain_bound(double gamma_min, int K) {
  return 7.0 / 6.0 * (gamma_min - chain_threshold(K));
}

Rational sun_threshold_exact(const Rational& a) {
  if (a < Rational(1)) throw DomainError("sun threshold requires a >= 1");
  return (a * a - Rational(2) * a + Rational(2)) / (Rational(2) * a + Rational(2));
}

double sun_threshold(double a) {
  if (!(a >= 1.0)) throw DomainError("sun threshold requires a >= 1");
  return (a * a - 2.0 * a + 2.0) / (2.0 * a + 2.0);
}

SunThresholdMinimum minimize_sun_threshold(double a_max, double tol) {
  if (!(a_max > 1.0)) throw DomainError("minimize_sun_threshold: a_max must exceed 1");
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 1.0, hi = a_max;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = sun_threshold(x1), f2 = sun_threshold(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = sun_threshold(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = sun_threshold(x2);
    }
  }
  const double a = 0.5 * (lo + hi);
  return {a, sun_threshold(a)};
}

int minimum_chain_length(int K) { return std::max(20, 2 * K + 1); }

CoverageReport coverage_audit(int n, int K) {
  require_audit_preconditions(n, K);
  const LatticeGraph chain = hexagonal_chain(n);
  EdgeIndex index;
  for (std::size_t i = 0; i < chain.edges().size(); ++i) index[key_of(chain.edges()[i])] = static_cast<int>(i);

  std::vector<Multiplicity> mult(chain.edges().size());
  const Translations t = translations(n, K);
  for (std::size_t k = 0; k < t.systems.size(); ++k)
    for (const EdgeKey& e : t.systems[k]) {
      const auto it = index.find(e);
      if (it == index.end()) throw StructuralError("coverage_audit: translated edge not in chain");
      bump(mult[it->second], t.kind[k]);
    }

  CoverageReport r;
  r.n = n;
  r.K = K;
  const std::int64_t diag = 7LL * (K - 2) + 1, horiz = 7LL * (K - 2);
  r.edge_classes = {make_tally("diag_up", diag), make_tally("diag_down", diag),
                    make_tally("horizontal", horiz)};
  for (std::size_t i = 0; i < chain.edges().size(); ++i) {
    const auto cls = chain.edges()[i].edge_class;
    const int slot = cls == EdgeClass::diag_up ? 0 : cls == EdgeClass::diag_down ? 1 : 2;
    record(r.edge_classes[slot], mult[i], K);
  }
  for (auto& c : r.edge_classes) finish(c);
  r.pass = std::all_of(r.edge_classes.begin(), r.edge_classes.end(), [](const auto& c) { return c.pass; });
  return r;
}

CoverageReport pair_coverage_audit(int n, int K) {
  require_audit_preconditions(n, K);
  const LatticeGraph chain = hexagonal_chain(n);
  const auto& edges = chain.edges();
  EdgeIndex index;
  for (std::size_t i = 0; i < edges.size(); ++i) index[key_of(edges[i])] = static_cast<int>(i);

  std::map<std::pair<int, int>, Multiplicity> pairs;
  const Translations t = translations(n, K);
  for (std::size_t k = 0; k < t.systems.size(); ++k) {
    std::vector<int> ids;
    for (const EdgeKey& e : t.systems[k]) ids.push_back(index.at(e));
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j)
        bump(pairs[{std::min(ids[i], ids[j]), std::max(ids[i], ids[j])}], t.kind[k]);
  }

  CoverageReport r;
  r.n = n;
  r.K = K;
  const std::int64_t target = 6LL * (K - 2);
  r.pair_classes = {make_tally("wedge_left", target), make_tally("wedge_right", target),
                    make_tally("diag_horizontal", target)};
  // Every vertex-sharing pair of the chain, whether or not it was covered.
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const PairClass pc = classify_edge_pair(edges[i], edges[j]);
      if (pc == PairClass::disjoint) continue;
      const auto it = pairs.find({static_cast<int>(i), static_cast<int>(j)});
      const Multiplicity m = it == pairs.end() ? Multiplicity{} : it->second;
      const int slot = pc == PairClass::wedge_left ? 0 : pc == PairClass::wedge_right ? 1 : 2;
      record(r.pair_classes[slot], m, K);
    }
  for (auto& c : r.pair_classes) finish(c);

  DisjointMaximum dm;
  dm.bound = target;
  dm.total = -1;
  for (const auto& [ij, m] : pairs) {
    const Edge& e = edges[ij.first];
    const Edge& f = edges[ij.second];
    if (classify_edge_pair(e, f) != PairClass::disjoint) continue;
    ++dm.pairs_seen;
    if (m.weighted(K) > dm.total) {
      dm.total = m.weighted(K);
      dm.first = key_of(e);
      dm.second = key_of(f);
      dm.raw = m;
      dm.description = describe_pair(e, f, 2 * n);
    }
  }
  r.max_disjoint = dm;
  r.pass = std::all_of(r.pair_classes.begin(), r.pair_classes.end(), [](const auto& c) { return c.pass; }) &&
           dm.total <= dm.bound;
  return r;
}

CoverageReport full_audit(int n, int K) {
  CoverageReport edges = coverage_audit(n, K);
  CoverageReport pairs = pair_coverage_audit(n, K);
  edges.pair_classes = std::move(pairs.pair_classes);
  edges.max_disjoint = std::move(pairs.max_disjoint);
  edges.pass = edges.pass && pairs.pass;
  return edges;
}

std::string_view to_string(Verdict v) { return v == Verdict::certified ? "certified" : "failed"; }

CriterionReport certify_chain(int K, const ChainGaps& gaps, std::vector<SolverMetadata> metadata) {
  require_chain_K(K);
  std::string missing;
  if (!gaps.A) missing += " A";
  if (!gaps.B) missing += " B";
  if (!gaps.C) missing += " C";
  if (!missing.empty()) throw IncompleteDataError("certify_chain: missing gaps for" + missing);

  CriterionReport r;
  r.model = "hexagonal_chain";
  r.K = K;
  r.gaps = {{"A", *gaps.A}, {"B", *gaps.B}, {"C", *gaps.C}};
  r.gamma_min = *gaps.A;
  r.gamma_min_system = "A";
  for (const auto& [name, g] : r.gaps)
    if (g < r.gamma_min) {
      r.gamma_min = g;
      r.gamma_min_system = name;
    }
  r.threshold = chain_threshold_exact(K);
  r.threshold_value = boost::rational_cast<double>(r.threshold);
  r.threshold_upper = round_up_to_grid(r.threshold);
  r.bound = chain_bound(r.gamma_min, K);
  r.constant_c = floor_decimals(*r.bound, 3);
  r.verdict = r.gamma_min > r.threshold_upper ? Verdict::certified : Verdict::failed;
  r.min_chain_length = minimum_chain_length(K);
  r.solver_metadata = std::move(metadata);
  return r;
}

CriterionReport certify_sun(const Rational& a, double gamma_s, std::vector<SolverMetadata> metadata) {
  CriterionReport r;
  r.model = "hexagonal_sun";
  r.a = to_string(a);
  r.gaps = {{"S", gamma_s}};
  r.gamma_min = gamma_s;
  r.gamma_min_system = "S";
  r.threshold = sun_threshold_exact(a);
  r.threshold_value = boost::rational_cast<double>(r.threshold);
  r.threshold_upper = round_up_to_grid(r.threshold);
  r.verdict = gamma_s > r.threshold_upper ? Verdict::certified : Verdict::failed;
  if (r.verdict == Verdict::failed)
    r.relative_shortfall = (r.threshold_value - gamma_s) / r.threshold_value;
  r.solver_metadata = std::move(metadata);
  return r;
}

}  // namespace aklt
