#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "kwg/solver.hpp"

namespace kwg {

/// Binary snapshot, magic "KWG1": little-endian u32 d, N; f64 L, t, eps, mu,
/// lambda, kappa, p; then q and each velocity component as interleaved
/// (re, im) f64 pairs in row-major mode order.
void write_snapshot(const std::string& path, const FluidState& state,
                    const PhysParams& params);
FluidState read_snapshot(const std::string& path,
                         PhysParams* params_out = nullptr);

std::uint64_t fnv1a64(const void* data, std::size_t len,
                      std::uint64_t h = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a64_file(const std::string& path);

/// fixed-format double so identical runs emit identical bytes
std::string fmt(double v);

class CsvWriter {
public:
  explicit CsvWriter(const std::string& path);
  void row(const std::vector<std::string>& cells);
  void close();

private:
  std::ofstream out_;
};

/// manifest.txt: one line per artifact "name<TAB>fnv1a64<TAB>bytes", plus a
/// header naming the deterministic generator used for any random corpus
void write_manifest(const std::string& dir,
                    const std::vector<std::string>& files);

}  // namespace kwg
