#include "kwg/artifacts.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <stdexcept>

namespace kwg {

namespace {

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

void put_field(std::ofstream& out, const SpectralField& f) {
  for (const cplx& c : f.coef()) {
    put(out, c.real());
    put(out, c.imag());
  }
}

void get_field(std::ifstream& in, SpectralField& f) {
  for (cplx& c : f.coef()) {
    double re = get<double>(in);
    double im = get<double>(in);
    c = {re, im};
  }
}

}  // namespace

void write_snapshot(const std::string& path, const FluidState& state,
                    const PhysParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write snapshot: " + path);
  out.write("KWG1", 4);
  const TorusGrid& g = state.q.grid();
  put<std::uint32_t>(out, std::uint32_t(g.dim()));
  put<std::uint32_t>(out, std::uint32_t(g.n()));
  put(out, g.period());
  put(out, state.t);
  put(out, params.eps);
  put(out, params.mu);
  put(out, params.lambda);
  put(out, params.kappa);
  put(out, params.p);
  put_field(out, state.q);
  for (const auto& c : state.u) put_field(out, c);
  if (!out) throw std::runtime_error("snapshot write failed: " + path);
}

FluidState read_snapshot(const std::string& path, PhysParams* params_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "KWG1", 4) != 0)
    throw std::runtime_error("not a KWG1 snapshot: " + path);
  int d = int(get<std::uint32_t>(in));
  int n = int(get<std::uint32_t>(in));
  double L = get<double>(in);
  double t = get<double>(in);
  PhysParams p;
  p.eps = get<double>(in);
  p.mu = get<double>(in);
  p.lambda = get<double>(in);
  p.kappa = get<double>(in);
  p.p = get<double>(in);
  TorusGrid grid(d, n, L);
  FluidState s = FluidState::zero(grid);
  s.t = t;
  get_field(in, s.q);
  for (auto& c : s.u) get_field(in, c);
  if (!in) throw std::runtime_error("truncated snapshot: " + path);
  if (params_out) *params_out = p;
  return s;
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t h) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash missing file: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0)
    h = fnv1a64(buf, std::size_t(in.gcount()), h);
  return h;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot write csv: " + path);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

void CsvWriter::close() { out_.close(); }

void write_manifest(const std::string& dir,
                    const std::vector<std::string>& files) {
  namespace fs = std::filesystem;
  std::ofstream out(fs::path(dir) / "manifest.txt");
  if (!out) throw std::runtime_error("cannot write manifest in " + dir);
  out << "generator\tsplitmix64\n";
  for (const auto& name : files) {
    fs::path p = fs::path(dir) / name;
    char hex[20];
    std::snprintf(hex, sizeof hex, "%016llx",
                  (unsigned long long)fnv1a64_file(p.string()));
    out << name << '\t' << hex << '\t' << fs::file_size(p) << '\n';
  }
}

}  // namespace kwg
