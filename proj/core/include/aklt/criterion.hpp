#pragma once

#include "aklt/lattice.hpp"

#include <boost/rational.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace aklt {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);
/// Exact value of a decimal literal such as "1.4" or "2".
Rational parse_decimal(std::string_view text);
/// Smallest multiple of 1e-12 that is >= r, as a double.
double round_up_to_grid(const Rational& r);
/// x rounded toward -infinity at `digits` decimals.
double floor_decimals(double x, int digits);

// ---------------------------------------------------------------------------
// Threshold arithmetic

/// 1/7 + 1/(7(K-2)). K must be even and >= 4.
Rational chain_threshold_exact(int K);
double chain_threshold(int K);

/// (7/6)(gamma_min - chain_threshold(K)); negative when the criterion fails.
double chain_bound(double gamma_min, int K);

/// (a^2 - 2a + 2) / (2a + 2) for a >= 1.
Rational sun_threshold_exact(const Rational& a);
double sun_threshold(double a);

struct SunThresholdMinimum {
  double a = 0.0;
  double threshold = 0.0;
};
/// Golden-section search for the weight minimizing the sun threshold on
/// [1, a_max].
SunThresholdMinimum minimize_sun_threshold(double a_max = 10.0, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Coverage audits

/// Occurrences of one edge (or edge pair) among the translated subsystems.
struct Multiplicity {
  int a = 0;  // shifted A copies
  int b = 0;  // shifted B copies
  int c = 0;  // shifted C and C_tilde copies
  std::int64_t weighted(int K) const noexcept {
    return static_cast<std::int64_t>(K - 2) * (a + b) + c;
  }
  friend auto operator<=>(const Multiplicity&, const Multiplicity&) = default;
};

struct ClassTally {
  std::string name;
  std::size_t members = 0;
  std::int64_t expected = 0;
  std::int64_t min_total = 0;
  std::int64_t max_total = 0;
  std::set<Multiplicity> raw;  // distinct (A, B, C) triples observed
  bool pass = false;
};

struct DisjointMaximum {
  std::int64_t total = 0;
  std::int64_t bound = 0;
  EdgeKey first;
  EdgeKey second;
  Multiplicity raw;
  std::string description;  // symmetry type of the achieving pair
  std::size_t pairs_seen = 0;
};

struct CoverageReport {
  int n = 0;
  int K = 0;
  std::vector<ClassTally> edge_classes;  // diag_up, diag_down, horizontal
  std::vector<ClassTally> pair_classes;  // wedge_left, wedge_right, diag_horizontal
  std::optional<DisjointMaximum> max_disjoint;
  bool pass = false;
};

/// Translates A and B by whole hexagons (even s) and C, C_tilde by every row
/// s in [0, 2n), and counts how often each chain edge is covered. Requires K
/// even >= 4 and n >= max(20, 2K+1).
CoverageReport coverage_audit(int n, int K);

/// Same translations; counts vertex-sharing edge pairs (must all total
/// 6(K-2)) and disjoint pairs (must not exceed it).
CoverageReport pair_coverage_audit(int n, int K);

/// Both audits merged into one report.
CoverageReport full_audit(int n, int K);

int minimum_chain_length(int K);

// ---------------------------------------------------------------------------
// Certificates

struct SolverMetadata {
  std::string system;
  double gap = 0.0;
  std::optional<double> residual;
  std::optional<double> tol;
  std::optional<double> kernel_tol;
  std::optional<std::uint64_t> seed;
  std::string strategy;
  std::string source;  // "computed", "cache" or "supplied"
};

struct ChainGaps {
  std::optional<double> A;
  std::optional<double> B;
  std::optional<double> C;
};

enum class Verdict { certified, failed };
std::string_view to_string(Verdict v);

struct CriterionReport {
  std::string model;  // "hexagonal_chain" or "hexagonal_sun"
  std::optional<int> K;
  std::optional<std::string> a;
  std::map<std::string, double> gaps;
  double gamma_min = 0.0;
  std::string gamma_min_system;
  Rational threshold;
  double threshold_value = 0.0;
  double threshold_upper = 0.0;  // comparison value, rounded outward
  std::optional<double> bound;
  std::optional<double> constant_c;
  std::optional<double> relative_shortfall;
  Verdict verdict = Verdict::failed;
  std::optional<int> min_chain_length;
  std::vector<SolverMetadata> solver_metadata;
  std::optional<CoverageReport> audit;
};

/// gamma_min = min over A, B, C; certified iff gamma_min exceeds the
/// threshold. Throws IncompleteDataError if a gap is missing.
CriterionReport certify_chain(int K, const ChainGaps& gaps,
                              std::vector<SolverMetadata> metadata = {});

/// Weighted sun criterion: verdict only (certified iff gamma_S > threshold),
/// plus the relative shortfall when it fails.
CriterionReport certify_sun(const Rational& a, double gamma_s,
                            std::vector<SolverMetadata> metadata = {});

}  // namespace aklt
