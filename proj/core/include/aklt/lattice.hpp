#pragma once

#include <compare>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aklt {

/// Site of the hexagonal chain in Cartesian form: column x in {0, 1}, row y.
/// Rows of a periodic chain are reduced modulo its vertical period. The
/// hexagonal sun reuses the struct with x = position on the hexagon and
/// y = 0 (inner ring) or 1 (ray tip).
struct Vertex {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

enum class EdgeClass { diag_up, diag_down, horizontal, unclassified };
enum class Region { none, inner, outer };

/// Undirected edge; endpoints are stored with a < b.
struct Edge {
  Vertex a;
  Vertex b;
  double weight = 1.0;
  EdgeClass edge_class = EdgeClass::unclassified;
  Region region = Region::none;

  bool touches(const Vertex& v) const noexcept { return a == v || b == v; }
};

/// Endpoint pair used as an identity for edges of a common graph.
struct EdgeKey {
  Vertex a;
  Vertex b;
  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

EdgeKey key_of(const Edge& e) noexcept;
EdgeKey make_key(Vertex u, Vertex v) noexcept;

class LatticeGraph {
 public:
  LatticeGraph(std::string name, std::vector<Vertex> vertices, std::vector<Edge> edges,
               std::optional<int> vertical_period = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::optional<int> vertical_period() const noexcept { return period_; }
  int num_sites() const noexcept { return static_cast<int>(vertices_.size()); }

  /// Position of v in vertices(); this is the site index used by the
  /// Hamiltonian. Throws StructuralError if v is not a vertex.
  int site_index(const Vertex& v) const;
  int degree(const Vertex& v) const;
  std::size_t count_class(EdgeClass c) const;
  std::size_t count_region(Region r) const;

 private:
  std::string name_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::optional<int> period_;
};

/// Hexagonal chain of n stacked hexagons: 4n sites, 5n edges, periodic in y
/// with period 2n. Rungs sit at even rows.
LatticeGraph hexagonal_chain(int n);

enum class SubsystemKind { A, B, C, C_tilde, sun };

SubsystemKind parse_subsystem(std::string_view name);
std::string_view to_string(SubsystemKind kind);
std::string_view to_string(EdgeClass c);
std::string_view to_string(Region r);

/// Builds one of the finite subsystems. `K` is the path length for C and
/// C_tilde; `a` weights the six inner edges of the sun.
LatticeGraph subsystem(SubsystemKind kind, std::optional<int> K = std::nullopt,
                       double a = 1.0);

/// Edge set of `kind` translated up by s rows inside the chain of n
/// hexagons, rows reduced modulo 2n. A and B only admit even s (whole
/// hexagon translations); an odd shift would move rungs onto rows that have
/// none. Sorted ascending.
std::vector<EdgeKey> shift_subsystem(SubsystemKind kind, int s, int n,
                                     std::optional<int> K = std::nullopt);

enum class PairClass { wedge_left, wedge_right, diag_horizontal, disjoint, identical };
std::string_view to_string(PairClass c);

/// Symmetry type of two edges of a hexagonal-chain graph (or subsystem).
PairClass classify_edge_pair(const Edge& e, const Edge& e2);

/// Column reflection x -> 1 - x of a two-column graph.
LatticeGraph reflect_columns(const LatticeGraph& g);

/// One edge per line: "x1 y1 x2 y2 weight class".
void write_edge_list(std::ostream& out, const LatticeGraph& g);

}  // namespace aklt
