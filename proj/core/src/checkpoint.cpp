#include "aklt/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace aklt {

namespace {

constexpr std::array<char, 8> kMagic{'A', 'K', 'L', 'T', 'V', 'E', 'C', '1'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return v;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const CheckpointHeader& h,
                      std::span<const std::vector<double>> vectors) {
  // Write-then-rename so an interrupted save never clobbers a good file.
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("checkpoint: cannot open " + tmp.string());
    out.write(kMagic.data(), kMagic.size());
    put(out, kVersion);
    put(out, h.num_sites);
    put(out, h.twice_s);
    put(out, h.twice_total_sz);
    put(out, h.dim);
    put(out, h.seed);
    put(out, h.matvecs);
    put(out, h.ritz_value);
    put(out, static_cast<std::uint32_t>(vectors.size()));
    for (const auto& v : vectors) {
      if (v.size() != h.dim) throw std::runtime_error("checkpoint: vector length != dim");
      out.write(reinterpret_cast<const char*>(v.data()),
                static_cast<std::streamsize>(v.size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("checkpoint: write failed");
  }
  std::filesystem::rename(tmp, path);
}

std::optional<Checkpoint> read_checkpoint(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path.string());
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error("checkpoint: bad magic");
  if (get<std::uint32_t>(in) != kVersion) throw std::runtime_error("checkpoint: bad version");
  Checkpoint c;
  c.header.num_sites = get<std::int32_t>(in);
  c.header.twice_s = get<std::int32_t>(in);
  c.header.twice_total_sz = get<std::int32_t>(in);
  c.header.dim = get<std::uint64_t>(in);
  c.header.seed = get<std::uint64_t>(in);
  c.header.matvecs = get<std::uint64_t>(in);
  c.header.ritz_value = get<double>(in);
  const auto count = get<std::uint32_t>(in);
  c.vectors.resize(count);
  for (auto& v : c.vectors) {
    v.resize(c.header.dim);
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!in) throw std::runtime_error("checkpoint: truncated vector data");
  }
  return c;
}

}  // namespace aklt
