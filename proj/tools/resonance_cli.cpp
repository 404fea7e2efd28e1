// resonance: run experiments and evaluate oracles from the command line.
//
// Exit codes: 0 success, 1 configuration or usage error, 2 solver divergence,
// 3 any other failure (I/O).

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "resonance/config.hpp"
#include "resonance/errors.hpp"
#include "resonance/experiments.hpp"
#include "resonance/oracles.hpp"

using namespace resonance;

namespace {

constexpr int kConfigExit = 1;
constexpr int kDivergedExit = 2;
constexpr int kOtherExit = 3;

int run_config(const std::string& path, const std::string& output, bool paper_scale, std::optional<Experiment> force) {
  RunConfig config = load_config(path, force);
  if (force && config.experiment != *force)
    throw ConfigError("this subcommand needs experiment = " + std::string(to_string(*force)), "experiment");
  if (paper_scale) std::cerr << "warning: " << apply_paper_scale(config) << "\n";
  const std::filesystem::path dir = output.empty() ? config.output_dir : std::filesystem::path(output);
  const auto result = run_and_export(config, dir);
  std::cout << "wrote " << dir.string() << " (status " << result.manifest.get("status").value_or("ok") << ")\n";
  return 0;
}

void print_table(const DiagnosticsTable& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) std::cout << (i ? "," : "") << t.columns[i];
  std::cout << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << format_double(row[i]);
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonant reflection lab: MRS and DQS solvers, asymptotic maps and oracles"};
  app.require_subcommand(1);

  std::string config_path, output;
  bool paper_scale = false;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", output, "Output directory (default: config output_dir)");
  run->add_flag("--paper-scale", paper_scale, "Use the full-scale resolutions (slow)");

  auto* compare = app.add_subcommand("compare", "Run MRS and DQS side by side and compare envelopes");
  compare->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  compare->add_option("-o,--output", output, "Output directory");

  auto* oracle = app.add_subcommand("oracle", "Evaluate an exact or reference solution");
  oracle->require_subcommand(1);

  int k = 1;
  std::string branch = "plus", kernel = "sawtooth_s";
  long truncation = 100000;
  bool no_tail = false;
  auto* disp = oracle->add_subcommand("dispersion", "Second-order dispersion relation for resonant waves");
  disp->add_option("-k,--k", k, "Wavenumber (nonzero)");
  disp->add_option("--branch", branch, "plus or minus")->check(CLI::IsMember({"plus", "minus"}));
  disp->add_option("--truncation", truncation, "Sum truncation N")->check(CLI::Range(16L, 100000000L));
  disp->add_option("--kernel", kernel, "sawtooth_s or sawtooth_k")->check(CLI::IsMember({"sawtooth_s", "sawtooth_k"}));
  disp->add_flag("--no-tail", no_tail, "Skip the 1/n^2 tail estimate");

  int harmonic = 1;
  double a0_re = 1.0, a0_im = 0.0, mu = 1.0, tau = 0.0, coefficient = 1.0;
  auto* harm = oracle->add_subcommand("harmonic", "Exact single-harmonic solution");
  harm->add_option("-n,--n", harmonic, "Harmonic index (nonzero)");
  harm->add_option("--a0-re", a0_re);
  harm->add_option("--a0-im", a0_im);
  harm->add_option("--mu", mu)->check(CLI::NonNegativeNumber);
  harm->add_option("--tau", tau);
  harm->add_option("--coefficient", coefficient, "Nonlinear coefficient");

  double c = 1.0, xi = 0.0, tol = 1e-13;
  auto* tw = oracle->add_subcommand("traveling-wave", "Implicit traveling-wave profile");
  tw->add_option("-c,--c", c, "Speed (nonzero)");
  tw->add_option("--xi", xi, "xi = z - c tau");
  tw->add_option("--tol", tol, "Newton residual tolerance")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*run) return run_config(config_path, output, paper_scale, std::nullopt);
    if (*compare) return run_config(config_path, output, false, Experiment::Compare);
    if (*disp) {
      const auto spec = kernel == "sawtooth_k" ? KernelSpec::sawtooth_k() : KernelSpec::sawtooth_s();
      const auto d = dispersion(spec, k, branch == "plus" ? Branch::Plus : Branch::Minus, truncation, !no_tail);
      DiagnosticsTable t;
      t.columns = {"k", "omega0", "omega1", "omega2"};
      t.add_row({static_cast<double>(d.k), d.omega0, d.omega1, d.omega2});
      print_table(t);
    } else if (*harm) {
      const Complex a0(a0_re, a0_im);
      const Complex a = single_harmonic(harmonic, a0, mu, tau, coefficient);
      DiagnosticsTable t;
      t.columns = {"tau", "re_a", "im_a", "abs_a", "omega"};
      t.add_row({tau, a.real(), a.imag(), std::abs(a), single_harmonic_frequency(harmonic, a0, mu, coefficient)});
      print_table(t);
    } else if (*tw) {
      const auto p = traveling_wave(c, xi, tol);
      DiagnosticsTable t;
      t.columns = {"xi", "phi", "re_a", "im_a", "abs_a", "residual"};
      t.add_row({xi, p.phi, p.a.real(), p.a.imag(), std::abs(p.a), p.residual});
      print_table(t);
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfigExit;
  } catch (const DegenerateInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfigExit;
  } catch (const DegenerateResonance& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfigExit;
  } catch (const SolverDiverged& e) {
    std::cerr << "solver diverged: " << e.what() << "\n";
    return kDivergedExit;
  } catch (const StepFailure& e) {
    std::cerr << "solver diverged: " << e.what() << "\n";
    return kDivergedExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOtherExit;
  }
}
