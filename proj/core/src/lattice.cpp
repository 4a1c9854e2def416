#include "aklt/lattice.hpp"

#include "aklt/errors.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

namespace aklt {

namespace {

// Vertical edge from row y to row y+1 (before reduction) in column x.
EdgeClass vertical_class(int x, int y) {
  return ((x + y) % 2 == 0) ? EdgeClass::diag_up : EdgeClass::diag_down;
}

int mod(int a, int m) {
  const int r = a % m;
  return r < 0 ? r + m : r;
}

Edge vertical_edge(int x, int y, std::optional<int> period) {
  const int y2 = period ? mod(y + 1, *period) : y + 1;
  const int y1 = period ? mod(y, *period) : y;
  Edge e;
  e.a = {x, y1};
  e.b = {x, y2};
  e.edge_class = vertical_class(x, period ? mod(y, 2) : y);
  if (e.b < e.a) std::swap(e.a, e.b);
  return e;
}

Edge rung(int y) {
  Edge e;
  e.a = {0, y};
  e.b = {1, y};
  e.edge_class = EdgeClass::horizontal;
  return e;
}

// Two-column window of rows [lo, hi] with rungs on even rows.
LatticeGraph ladder_window(std::string name, int lo, int hi) {
  std::vector<Vertex> vs;
  std::vector<Edge> es;
  for (int y = lo; y <= hi; ++y)
    for (int x = 0; x <= 1; ++x) vs.push_back({x, y});
  for (int x = 0; x <= 1; ++x)
    for (int y = lo; y < hi; ++y) es.push_back(vertical_edge(x, y, std::nullopt));
  for (int y = lo; y <= hi; ++y)
    if (y % 2 == 0) es.push_back(rung(y));
  return LatticeGraph(std::move(name), std::move(vs), std::move(es));
}

LatticeGraph column_path(std::string name, int x, int K) {
  std::vector<Vertex> vs;
  std::vector<Edge> es;
  for (int y = 1; y <= K; ++y) vs.push_back({x, y});
  for (int y = 1; y < K; ++y) es.push_back(vertical_edge(x, y, std::nullopt));
  return LatticeGraph(std::move(name), std::move(vs), std::move(es));
}

LatticeGraph hexagonal_sun(double a) {
  std::vector<Vertex> vs;
  std::vector<Edge> es;
  for (int k = 0; k < 6; ++k) vs.push_back({k, 0});
  for (int k = 0; k < 6; ++k) vs.push_back({k, 1});
  for (int k = 0; k < 6; ++k) {
    Edge inner{Vertex{k, 0}, Vertex{(k + 1) % 6, 0}, a, EdgeClass::unclassified, Region::inner};
    if (inner.b < inner.a) std::swap(inner.a, inner.b);
    es.push_back(inner);
  }
  for (int k = 0; k < 6; ++k)
    es.push_back({Vertex{k, 0}, Vertex{k, 1}, 1.0, EdgeClass::unclassified, Region::outer});
  return LatticeGraph("sun", std::move(vs), std::move(es));
}

}  // namespace

EdgeKey make_key(Vertex u, Vertex v) noexcept {
  if (v < u) std::swap(u, v);
  return {u, v};
}

EdgeKey key_of(const Edge& e) noexcept { return make_key(e.a, e.b); }

LatticeGraph::LatticeGraph(std::string name, std::vector<Vertex> vertices,
                           std::vector<Edge> edges, std::optional<int> vertical_period)
    : name_(std::move(name)),
      vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      period_(vertical_period) {
  std::set<Vertex> vset(vertices_.begin(), vertices_.end());
  if (vset.size() != vertices_.size()) throw StructuralError(name_ + ": duplicate vertex");
  std::set<EdgeKey> seen;
  std::map<Vertex, int> deg;
  for (auto& e : edges_) {
    if (e.b < e.a) std::swap(e.a, e.b);
    if (e.a == e.b) throw StructuralError(name_ + ": self-loop");
    if (!vset.count(e.a) || !vset.count(e.b))
      throw StructuralError(name_ + ": edge endpoint is not a vertex");
    if (!(e.weight > 0.0)) throw DomainError(name_ + ": edge weights must be positive");
    if (!seen.insert(key_of(e)).second) throw StructuralError(name_ + ": duplicate edge");
    if (++deg[e.a] > 3 || ++deg[e.b] > 3)
      throw StructuralError(name_ + ": vertex degree exceeds 3");
  }
}

int LatticeGraph::site_index(const Vertex& v) const {
  const auto it = std::find(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end()) throw StructuralError(name_ + ": vertex not in graph");
  return static_cast<int>(it - vertices_.begin());
}

int LatticeGraph::degree(const Vertex& v) const {
  return static_cast<int>(
      std::count_if(edges_.begin(), edges_.end(), [&](const Edge& e) { return e.touches(v); }));
}

std::size_t LatticeGraph::count_class(EdgeClass c) const {
  return std::count_if(edges_.begin(), edges_.end(),
                       [c](const Edge& e) { return e.edge_class == c; });
}

std::size_t LatticeGraph::count_region(Region r) const {
  return std::count_if(edges_.begin(), edges_.end(),
                       [r](const Edge& e) { return e.region == r; });
}

LatticeGraph hexagonal_chain(int n) {
  if (n < 2) throw DomainError("hexagonal_chain: n must be >= 2");
  const int period = 2 * n;
  std::vector<Vertex> vs;
  std::vector<Edge> es;
  for (int y = 0; y < period; ++y)
    for (int x = 0; x <= 1; ++x) vs.push_back({x, y});
  for (int x = 0; x <= 1; ++x)
    for (int y = 0; y < period; ++y) es.push_back(vertical_edge(x, y, period));
  for (int y = 0; y < period; y += 2) es.push_back(rung(y));
  return LatticeGraph("chain(" + std::to_string(n) + ")", std::move(vs), std::move(es), period);
}

SubsystemKind parse_subsystem(std::string_view name) {
  if (name == "A") return SubsystemKind::A;
  if (name == "B") return SubsystemKind::B;
  if (name == "C") return SubsystemKind::C;
  if (name == "C_tilde" || name == "Ct") return SubsystemKind::C_tilde;
  if (name == "sun") return SubsystemKind::sun;
  throw StructuralError("unknown subsystem '" + std::string(name) + "'");
}

std::string_view to_string(SubsystemKind kind) {
  switch (kind) {
    case SubsystemKind::A: return "A";
    case SubsystemKind::B: return "B";
    case SubsystemKind::C: return "C";
    case SubsystemKind::C_tilde: return "C_tilde";
    case SubsystemKind::sun: return "sun";
  }
  return "?";
}

std::string_view to_string(EdgeClass c) {
  switch (c) {
    case EdgeClass::diag_up: return "diag_up";
    case EdgeClass::diag_down: return "diag_down";
    case EdgeClass::horizontal: return "horizontal";
    case EdgeClass::unclassified: return "unclassified";
  }
  return "?";
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::none: return "none";
    case Region::inner: return "inner";
    case Region::outer: return "outer";
  }
  return "?";
}

std::string_view to_string(PairClass c) {
  switch (c) {
    case PairClass::wedge_left: return "wedge_left";
    case PairClass::wedge_right: return "wedge_right";
    case PairClass::diag_horizontal: return "diag_horizontal";
    case PairClass::disjoint: return "disjoint";
    case PairClass::identical: return "identical";
  }
  return "?";
}

LatticeGraph subsystem(SubsystemKind kind, std::optional<int> K, double a) {
  switch (kind) {
    case SubsystemKind::A: return ladder_window("A", 1, 7);
    case SubsystemKind::B: return ladder_window("B", 0, 6);
    case SubsystemKind::C:
    case SubsystemKind::C_tilde: {
      if (!K) throw StructuralError("subsystem C requires K");
      if (*K < 2) throw DomainError("subsystem C requires K >= 2");
      const bool mirrored = kind == SubsystemKind::C_tilde;
      return column_path((mirrored ? "C_tilde(" : "C(") + std::to_string(*K) + ")",
                         mirrored ? 1 : 0, *K);
    }
    case SubsystemKind::sun:
      if (a < 1.0) throw DomainError("sun weight a must be >= 1");
      return hexagonal_sun(a);
  }
  throw StructuralError("unknown subsystem");
}

std::vector<EdgeKey> shift_subsystem(SubsystemKind kind, int s, int n, std::optional<int> K) {
  if (kind == SubsystemKind::sun) throw StructuralError("the sun is not a chain subsystem");
  if (n < 2) throw DomainError("shift_subsystem: n must be >= 2");
  const int period = 2 * n;
  if ((kind == SubsystemKind::A || kind == SubsystemKind::B) && mod(s, 2) != 0)
    throw DomainError("shift_subsystem: A and B translate by whole hexagons (even s)");
  const auto base = subsystem(kind, K);
  int lo = base.vertices().front().y, hi = lo;
  for (const auto& v : base.vertices()) {
    lo = std::min(lo, v.y);
    hi = std::max(hi, v.y);
  }
  if (hi - lo + 1 > period)
    throw DomainError("shift_subsystem: subsystem does not fit in the chain");
  std::vector<EdgeKey> out;
  out.reserve(base.edges().size());
  for (const auto& e : base.edges()) {
    out.push_back(make_key({e.a.x, mod(e.a.y + s, period)}, {e.b.x, mod(e.b.y + s, period)}));
  }
  std::sort(out.begin(), out.end());
  return out;
}

PairClass classify_edge_pair(const Edge& e, const Edge& e2) {
  if (key_of(e) == key_of(e2)) return PairClass::identical;
  std::optional<Vertex> shared;
  for (const Vertex& v : {e.a, e.b})
    if (e2.touches(v)) shared = v;
  if (!shared) return PairClass::disjoint;
  if (e.edge_class == EdgeClass::unclassified || e2.edge_class == EdgeClass::unclassified)
    throw DomainError("classify_edge_pair: edges carry no chain classification");
  if (e.edge_class == EdgeClass::horizontal || e2.edge_class == EdgeClass::horizontal)
    return PairClass::diag_horizontal;
  // Two column edges meeting at (x, y). Reflection x -> 1-x swaps the two.
  return ((shared->x + shared->y) % 2 == 0) ? PairClass::wedge_left : PairClass::wedge_right;
}

LatticeGraph reflect_columns(const LatticeGraph& g) {
  std::vector<Vertex> vs;
  for (const auto& v : g.vertices()) {
    if (v.x != 0 && v.x != 1) throw StructuralError("reflect_columns: not a two-column graph");
    vs.push_back({1 - v.x, v.y});
  }
  std::vector<Edge> es;
  for (Edge e : g.edges()) {
    e.a.x = 1 - e.a.x;
    e.b.x = 1 - e.b.x;
    if (e.edge_class == EdgeClass::diag_up)
      e.edge_class = EdgeClass::diag_down;
    else if (e.edge_class == EdgeClass::diag_down)
      e.edge_class = EdgeClass::diag_up;
    es.push_back(e);
  }
  return LatticeGraph(g.name() + "~", std::move(vs), std::move(es), g.vertical_period());
}

void write_edge_list(std::ostream& out, const LatticeGraph& g) {
  out << "# " << g.name() << ": " << g.num_sites() << " sites, " << g.edges().size()
      << " edges\n";
  for (const auto& e : g.edges()) {
    out << e.a.x << ' ' << e.a.y << ' ' << e.b.x << ' ' << e.b.y << ' ' << e.weight << ' '
        << to_string(e.edge_class) << '\n';
  }
}

}  // namespace aklt
