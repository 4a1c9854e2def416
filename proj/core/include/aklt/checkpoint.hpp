#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace aklt {

/// Binary vector checkpoint. Layout (host byte order, little-endian on all
/// supported targets):
///
///   char[8]  magic "AKLTVEC1"
///   u32      version (1)
///   i32      num_sites
///   i32      twice_s
///   i32      twice_total_sz
///   u64      dim
///   u64      seed
///   u64      matvecs performed so far
///   f64      current Ritz value
///   u32      number of vectors
///   f64[dim] per vector
struct CheckpointHeader {
  std::int32_t num_sites = 0;
  std::int32_t twice_s = 0;
  std::int32_t twice_total_sz = 0;
  std::uint64_t dim = 0;
  std::uint64_t seed = 0;
  std::uint64_t matvecs = 0;
  double ritz_value = 0.0;

  bool same_problem(const CheckpointHeader& o) const noexcept {
    return num_sites == o.num_sites && twice_s == o.twice_s &&
           twice_total_sz == o.twice_total_sz && dim == o.dim && seed == o.seed;
  }
};

struct Checkpoint {
  CheckpointHeader header;
  std::vector<std::vector<double>> vectors;
};

void write_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header,
                      std::span<const std::vector<double>> vectors);

/// nullopt if the file does not exist; throws std::runtime_error if it is
/// malformed.
std::optional<Checkpoint> read_checkpoint(const std::filesystem::path& path);

}  // namespace aklt
