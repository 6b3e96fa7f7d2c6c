#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kwg/solver.hpp"
#include "kwg/thermo.hpp"

namespace kwg {

struct ConfigError : std::runtime_error {
  ConfigError(int line_no, const std::string& msg)
      : std::runtime_error("config line " + std::to_string(line_no) + ": " +
                           msg),
        line(line_no) {}
  int line;
};

struct InitialRecipe {
  enum class Kind { gaussian, random, snapshot };
  Kind kind = Kind::gaussian;
  double amplitude = 0.01;      // q bump height
  double u_amplitude = 0.0;     // velocity bump height, same profile
  double width = 1.0;
  std::array<double, 2> center{0.0, 0.0};
  std::string path;             // snapshot kind
  double band_fraction = 0.25;  // random kind
};

/// Everything a run needs; parsed from key = value text with [section]
/// headers, all physical constraints enforced at parse time.
struct RunConfig {
  std::string subcommand;

  int d = 2;
  int N = 64;
  double L = 20.0 * 3.14159265358979323846;

  PhysParams params;
  InitialRecipe initial;

  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;

  double T = 1.0;
  double dt = 1e-3;
  int snapshots = 11;
  double friedrichs_n = 0.0;

  std::vector<double> sweep_eps{0.2, 0.14, 0.1, 0.07, 0.05};
  double alpha = 0.9;
  double slope_floor = 0.9;
  double eta = 0.0;

  double besov_s = 0.0;
  std::string besov_r = "1";  // "1" or "inf"

  VdWParams vdw;

  TorusGrid grid() const { return TorusGrid(d, N, L); }
  /// canonical echo; parsing the echo reproduces this config
  std::string normalized() const;
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// initial data from the recipe (gaussian bump periodized and mean-zeroed,
/// random band-limited, or a snapshot file)
FluidState build_initial(const RunConfig& cfg);

}  // namespace kwg
