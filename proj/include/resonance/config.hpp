#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "resonance/asymptotics.hpp"
#include "resonance/dqs.hpp"
#include "resonance/mrs.hpp"
#include "resonance/oracles.hpp"

namespace resonance {

enum class Experiment { MrsFront, DqsFront, TwoHarmonic, Compare, Oracle, Custom };

const char* to_string(Experiment e);

/// Parameters of the `oracle` experiment.
struct OracleConfig {
  enum class Kind { Dispersion, Harmonic, TravelingWave };
  Kind kind = Kind::Dispersion;
  // dispersion
  KernelSpec kernel = KernelSpec::sawtooth_s();
  int k_min = 1;
  int k_max = 3;
  Branch branch = Branch::Plus;
  long truncation = 100000;
  bool tail_correction = true;
  // harmonic
  int harmonic = 1;
  Complex a0{1.0, 0.0};
  double tau_end = 1.0;
  // traveling wave
  double c = 1.0;
  double xi_min = -1.0;
  double xi_max = 1.0;
  double newton_tol = 1e-13;
  int samples = 101;
};

/// Fully validated run description. Only the fields relevant to `experiment` are used.
struct RunConfig {
  Experiment experiment = Experiment::TwoHarmonic;
  std::size_t n = 0;
  /// Evenly spaced snapshots per run, including both endpoints.
  int snapshots = 64;
  /// custom runs: zero | pulse | bump | two-harmonic | single-harmonic
  std::string profile = "two-harmonic";
  /// custom runs: mrs | dqs | mrs-amplitude
  std::string solver = "dqs";
  /// Half-width of the smooth bump profile.
  double bump_width = 1.0;
  int harmonic = 1;
  Complex a0{1.0, 0.0};

  MrsConfig mrs;
  DqsConfig dqs;
  ScalingParams scaling;
  OracleConfig oracle;

  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  bool paper_scale = false;
  /// Wall-clock time in the manifest makes otherwise identical runs differ; off by default.
  bool record_wall_time = false;
};

/// Parses `key = value` lines with optional [run], [scaling], [mrs], [dqs] and [oracle]
/// sections; `#` starts a comment. A key outside a section must be unambiguous. Unknown
/// keys, malformed values, missing required keys and out-of-range values raise
/// ConfigError naming the key and line. Defaults are filled per experiment.
/// `fallback` supplies the experiment when the text has no experiment key.
RunConfig parse_config(std::string_view text, std::optional<Experiment> fallback = std::nullopt);
RunConfig load_config(const std::filesystem::path& path, std::optional<Experiment> fallback = std::nullopt);

/// Applies the full-scale resolutions (n = 2^17 for MRS runs, 2^15 for amplitude runs).
/// Returns a warning message describing the change.
std::string apply_paper_scale(RunConfig& config);

/// Default output location: $RESONANCE_OUTPUT_ROOT/<experiment>, or runs/<experiment>.
std::filesystem::path default_output_dir(Experiment e);

}  // namespace resonance
