#include "resonance/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "resonance/errors.hpp"

namespace resonance {

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::MrsFront: return "mrs-front";
    case Experiment::DqsFront: return "dqs-front";
    case Experiment::TwoHarmonic: return "two-harmonic";
    case Experiment::Compare: return "compare";
    case Experiment::Oracle: return "oracle";
    case Experiment::Custom: return "custom";
  }
  return "unknown";
}

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Reader {
 public:
  Reader(const std::string& key, const Entry& e) : key_(key), e_(e) {}

  double real() const {
    double x = 0.0;
    const auto& s = e_.value;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(x)) fail("malformed number '" + s + "'");
    return x;
  }
  long long integer() const {
    long long x = 0;
    const auto& s = e_.value;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec == std::errc{} && p == s.data() + s.size()) return x;
    // Accept integral reals such as 1e5 or 2^14.
    if (auto caret = s.find('^'); caret != std::string::npos) {
      long long base = 0, ex = 0;
      auto r1 = std::from_chars(s.data(), s.data() + caret, base);
      auto r2 = std::from_chars(s.data() + caret + 1, s.data() + s.size(), ex);
      if (r1.ec == std::errc{} && r2.ec == std::errc{} && r1.ptr == s.data() + caret &&
          r2.ptr == s.data() + s.size() && ex >= 0 && ex < 62 && base >= 0) {
        const double v = std::pow(static_cast<double>(base), static_cast<double>(ex));
        if (v < 9.0e18) return static_cast<long long>(v);
      }
      fail("malformed integer '" + s + "'");
    }
    const double d = real();
    if (d != std::floor(d) || std::abs(d) > 9.0e18) fail("expected an integer, got '" + s + "'");
    return static_cast<long long>(d);
  }
  bool boolean() const {
    const auto& s = e_.value;
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    fail("expected a boolean, got '" + s + "'");
  }
  const std::string& text() const { return e_.value; }
  double positive() const {
    const double x = real();
    if (!(x > 0.0)) fail("must be positive");
    return x;
  }
  double nonnegative() const {
    const double x = real();
    if (x < 0.0) fail("must be nonnegative");
    return x;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(what, key_, e_.line); }

 private:
  const std::string& key_;
  const Entry& e_;
};

using Setter = std::function<void(RunConfig&, const Reader&)>;

struct KeySpec {
  const char* section;
  const char* name;
  Setter set;
};

std::vector<double> even_times(double t_end, int count) {
  if (count == 1) return {t_end};
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) t[static_cast<std::size_t>(i)] = t_end * i / (count - 1);
  t.back() = t_end;
  return t;
}

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      // [run]
      {"run", "experiment", [](RunConfig&, const Reader&) {}},
      {"run", "n",
       [](RunConfig& c, const Reader& r) {
         const long long n = r.integer();
         if (n < 8 || (n & (n - 1)) != 0) r.fail("n must be a power of two >= 8");
         c.n = static_cast<std::size_t>(n);
       }},
      {"run", "snapshots",
       [](RunConfig& c, const Reader& r) {
         const long long s = r.integer();
         if (s < 1 || s > 100000) r.fail("snapshots out of range [1, 100000]");
         c.snapshots = static_cast<int>(s);
       }},
      {"run", "profile",
       [](RunConfig& c, const Reader& r) {
         static const char* ok[] = {"zero", "pulse", "bump", "two-harmonic", "single-harmonic"};
         if (std::find(std::begin(ok), std::end(ok), r.text()) == std::end(ok)) r.fail("unknown profile '" + r.text() + "'");
         c.profile = r.text();
       }},
      {"run", "solver",
       [](RunConfig& c, const Reader& r) {
         if (r.text() != "mrs" && r.text() != "dqs" && r.text() != "mrs-amplitude")
           r.fail("solver must be mrs, dqs or mrs-amplitude");
         c.solver = r.text();
       }},
      {"run", "bump_width", [](RunConfig& c, const Reader& r) { c.bump_width = r.positive(); }},
      {"run", "harmonic",
       [](RunConfig& c, const Reader& r) {
         const long long k = r.integer();
         if (k == 0) r.fail("harmonic must be nonzero");
         c.harmonic = static_cast<int>(k);
       }},
      {"run", "a0_re", [](RunConfig& c, const Reader& r) { c.a0.real(r.real()); }},
      {"run", "a0_im", [](RunConfig& c, const Reader& r) { c.a0.imag(r.real()); }},
      {"run", "output_dir", [](RunConfig& c, const Reader& r) { c.output_dir = r.text(); }},
      {"run", "seed", [](RunConfig& c, const Reader& r) {
         const long long s = r.integer();
         if (s < 0) r.fail("seed must be nonnegative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"run", "paper_scale", [](RunConfig& c, const Reader& r) { c.paper_scale = r.boolean(); }},
      {"run", "record_wall_time", [](RunConfig& c, const Reader& r) { c.record_wall_time = r.boolean(); }},
      // [scaling]
      {"scaling", "epsilon", [](RunConfig& c, const Reader& r) { c.scaling.epsilon = r.positive(); }},
      {"scaling", "gamma",
       [](RunConfig& c, const Reader& r) {
         const double g = r.real();
         if (!(g > 1.0)) r.fail("gamma must exceed 1");
         c.scaling.gamma = g;
       }},
      {"scaling", "mach", [](RunConfig& c, const Reader& r) { c.scaling.mach = r.positive(); }},
      // [mrs]
      {"mrs", "cfl",
       [](RunConfig& c, const Reader& r) {
         const double x = r.real();
         if (!(x > 0.0 && x <= 1.0)) r.fail("cfl out of range (0, 1]");
         c.mrs.cfl = x;
       }},
      {"mrs", "t_end", [](RunConfig& c, const Reader& r) { c.mrs.t_end = r.positive(); }},
      {"mrs", "kernel",
       [](RunConfig& c, const Reader& r) {
         if (r.text() == "sawtooth_k") c.mrs.kernel = KernelSpec::sawtooth_k();
         else if (r.text() == "sawtooth_s") c.mrs.kernel = KernelSpec::sawtooth_s();
         else r.fail("kernel must be sawtooth_k or sawtooth_s");
       }},
      {"mrs", "dt_cap", [](RunConfig& c, const Reader& r) { c.mrs.dt_cap = r.positive(); }},
      {"mrs", "reconstruction_order",
       [](RunConfig& c, const Reader& r) {
         if (r.integer() != 5) r.fail("only reconstruction_order = 5 is available");
         c.mrs.reconstruction_order = 5;
       }},
      {"mrs", "diagnostic_interval", [](RunConfig& c, const Reader& r) { c.mrs.diagnostic_interval = r.nonnegative(); }},
      {"mrs", "shock_threshold", [](RunConfig& c, const Reader& r) { c.mrs.shock_threshold = r.positive(); }},
      {"mrs", "shock_persistence",
       [](RunConfig& c, const Reader& r) {
         const long long p = r.integer();
         if (p < 1) r.fail("shock_persistence must be at least 1");
         c.mrs.shock_persistence = static_cast<int>(p);
       }},
      {"mrs", "front_fraction", [](RunConfig& c, const Reader& r) { c.mrs.front_fraction = r.positive(); }},
      {"mrs", "front_expansion_shift", [](RunConfig& c, const Reader& r) { c.mrs.front_expansion_shift = r.positive(); }},
      {"mrs", "divergence_factor", [](RunConfig& c, const Reader& r) { c.mrs.divergence_factor = r.positive(); }},
      // [dqs]
      {"dqs", "mu", [](RunConfig& c, const Reader& r) { c.dqs.mu = r.nonnegative(); }},
      {"dqs", "dt", [](RunConfig& c, const Reader& r) { c.dqs.dt = r.positive(); }},
      {"dqs", "tau_end", [](RunConfig& c, const Reader& r) { c.dqs.tau_end = r.positive(); }},
      {"dqs", "viscosity", [](RunConfig& c, const Reader& r) { c.dqs.viscosity_nu = r.nonnegative(); }},
      {"dqs", "viscosity_cutoff",
       [](RunConfig& c, const Reader& r) { c.dqs.viscosity_cutoff = static_cast<int>(r.integer()); }},
      {"dqs", "picard_tol",
       [](RunConfig& c, const Reader& r) {
         const double x = r.real();
         if (!(x > 0.0 && x <= 1e-6)) r.fail("picard_tol out of range (0, 1e-6]");
         c.dqs.picard_tol = x;
       }},
      {"dqs", "picard_max_iters",
       [](RunConfig& c, const Reader& r) {
         const long long m = r.integer();
         if (m < 2) r.fail("picard_max_iters must be at least 2");
         c.dqs.picard_max_iters = static_cast<int>(m);
       }},
      {"dqs", "anderson_depth",
       [](RunConfig& c, const Reader& r) {
         const long long m = r.integer();
         if (m < 0 || m > 50) r.fail("anderson_depth out of range [0, 50]");
         c.dqs.anderson_depth = static_cast<int>(m);
       }},
      {"dqs", "coefficient", [](RunConfig& c, const Reader& r) { c.dqs.nonlinear_coefficient = r.real(); }},
      {"dqs", "diagnostic_interval", [](RunConfig& c, const Reader& r) { c.dqs.diagnostic_interval = r.nonnegative(); }},
      {"dqs", "max_dt_halvings",
       [](RunConfig& c, const Reader& r) {
         const long long m = r.integer();
         if (m < 0 || m > 20) r.fail("max_dt_halvings out of range [0, 20]");
         c.dqs.max_dt_halvings = static_cast<int>(m);
       }},
      {"dqs", "front_fraction", [](RunConfig& c, const Reader& r) { c.dqs.front_fraction = r.positive(); }},
      // [oracle]
      {"oracle", "oracle",
       [](RunConfig& c, const Reader& r) {
         if (r.text() == "dispersion") c.oracle.kind = OracleConfig::Kind::Dispersion;
         else if (r.text() == "harmonic") c.oracle.kind = OracleConfig::Kind::Harmonic;
         else if (r.text() == "traveling-wave") c.oracle.kind = OracleConfig::Kind::TravelingWave;
         else r.fail("oracle must be dispersion, harmonic or traveling-wave");
       }},
      {"oracle", "kernel",
       [](RunConfig& c, const Reader& r) {
         if (r.text() == "sawtooth_k") c.oracle.kernel = KernelSpec::sawtooth_k();
         else if (r.text() == "sawtooth_s") c.oracle.kernel = KernelSpec::sawtooth_s();
         else r.fail("kernel must be sawtooth_k or sawtooth_s");
       }},
      {"oracle", "k_min", [](RunConfig& c, const Reader& r) { c.oracle.k_min = static_cast<int>(r.integer()); }},
      {"oracle", "k_max", [](RunConfig& c, const Reader& r) { c.oracle.k_max = static_cast<int>(r.integer()); }},
      {"oracle", "branch",
       [](RunConfig& c, const Reader& r) {
         if (r.text() == "plus") c.oracle.branch = Branch::Plus;
         else if (r.text() == "minus") c.oracle.branch = Branch::Minus;
         else r.fail("branch must be plus or minus");
       }},
      {"oracle", "truncation",
       [](RunConfig& c, const Reader& r) {
         const long long t = r.integer();
         if (t < 16) r.fail("truncation must be at least 16");
         c.oracle.truncation = static_cast<long>(t);
       }},
      {"oracle", "tail_correction", [](RunConfig& c, const Reader& r) { c.oracle.tail_correction = r.boolean(); }},
      {"oracle", "oracle_harmonic",
       [](RunConfig& c, const Reader& r) {
         const long long k = r.integer();
         if (k == 0) r.fail("harmonic must be nonzero");
         c.oracle.harmonic = static_cast<int>(k);
       }},
      {"oracle", "oracle_a0_re", [](RunConfig& c, const Reader& r) { c.oracle.a0.real(r.real()); }},
      {"oracle", "oracle_a0_im", [](RunConfig& c, const Reader& r) { c.oracle.a0.imag(r.real()); }},
      {"oracle", "oracle_tau_end", [](RunConfig& c, const Reader& r) { c.oracle.tau_end = r.nonnegative(); }},
      {"oracle", "oracle_mu", [](RunConfig& c, const Reader& r) { c.dqs.mu = r.nonnegative(); }},
      {"oracle", "oracle_coefficient", [](RunConfig& c, const Reader& r) { c.dqs.nonlinear_coefficient = r.real(); }},
      {"oracle", "c",
       [](RunConfig& c, const Reader& r) {
         const double x = r.real();
         if (x == 0.0) r.fail("c must be nonzero");
         c.oracle.c = x;
       }},
      {"oracle", "xi_min", [](RunConfig& c, const Reader& r) { c.oracle.xi_min = r.real(); }},
      {"oracle", "xi_max", [](RunConfig& c, const Reader& r) { c.oracle.xi_max = r.real(); }},
      {"oracle", "newton_tol", [](RunConfig& c, const Reader& r) { c.oracle.newton_tol = r.positive(); }},
      {"oracle", "samples",
       [](RunConfig& c, const Reader& r) {
         const long long s = r.integer();
         if (s < 1 || s > 10000000) r.fail("samples out of range");
         c.oracle.samples = static_cast<int>(s);
       }},
  };
  return table;
}

Experiment parse_experiment(const std::string& s, int line) {
  for (auto e : {Experiment::MrsFront, Experiment::DqsFront, Experiment::TwoHarmonic, Experiment::Compare,
                 Experiment::Oracle, Experiment::Custom})
    if (s == to_string(e)) return e;
  throw ConfigError("unknown experiment '" + s + "'", "experiment", line);
}

// Per-experiment defaults, applied before the explicit keys.
void apply_defaults(RunConfig& c) {
  c.output_dir = default_output_dir(c.experiment);
  switch (c.experiment) {
    case Experiment::MrsFront:
      c.n = 1u << 14;
      c.profile = "pulse";
      c.solver = "mrs";
      c.scaling.epsilon = default_front_epsilon();
      c.mrs.t_end = 800.0 * kTwoPi;
      c.mrs.diagnostic_interval = 10.0;
      break;
    case Experiment::DqsFront:
      c.n = 1u << 12;
      c.profile = "pulse";
      c.solver = "mrs-amplitude";
      c.scaling.epsilon = default_front_epsilon();
      c.dqs.mu = 0.0;
      c.dqs.nonlinear_coefficient = kMrsAmplitudeCoefficient;
      c.dqs.viscosity_nu = 3e-4;
      c.dqs.tau_end = 0.15;
      c.dqs.diagnostic_interval = 1e-3;
      break;
    case Experiment::TwoHarmonic:
      c.n = 1u << 13;
      c.profile = "two-harmonic";
      c.solver = "dqs";
      c.dqs.mu = 1.0;
      c.dqs.dt = 1e-4;
      c.dqs.tau_end = 0.5;
      break;
    case Experiment::Compare:
      c.n = 1u << 10;
      c.profile = "bump";
      c.scaling.epsilon = 0.01;
      c.mrs.t_end = 0.05 / (0.01 * 0.01);
      c.dqs.mu = 0.0;
      c.dqs.nonlinear_coefficient = kMrsAmplitudeCoefficient;
      break;
    case Experiment::Oracle:
    case Experiment::Custom:
      break;
  }
}

}  // namespace

std::filesystem::path default_output_dir(Experiment e) {
  std::filesystem::path root = "runs";
  if (const char* env = std::getenv("RESONANCE_OUTPUT_ROOT"); env && *env) root = env;
  return root / to_string(e);
}

RunConfig parse_config(std::string_view text, std::optional<Experiment> fallback) {
  const auto& table = key_table();
  std::map<std::string, Entry> entries;  // canonical "section.name"
  std::string section;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header", std::string(line), line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "run" && section != "scaling" && section != "mrs" && section != "dqs" && section != "oracle")
        throw ConfigError("unknown section '" + section + "'", section, line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key = value", std::string(line), line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("empty key", {}, line_no);
    if (value.empty()) throw ConfigError("missing value", key, line_no);

    std::vector<const KeySpec*> matches;
    for (const auto& k : table)
      if (key == k.name && (section.empty() || section == k.section)) matches.push_back(&k);
    if (matches.empty()) throw ConfigError("unknown key", key, line_no);
    if (matches.size() > 1) throw ConfigError("ambiguous key; place it under a [mrs] or [dqs] section", key, line_no);
    const std::string canonical = std::string(matches.front()->section) + "." + key;
    if (entries.contains(canonical)) throw ConfigError("duplicate key", key, line_no);
    entries[canonical] = {value, line_no};
  }

  auto exp_it = entries.find("run.experiment");
  RunConfig c;
  if (exp_it != entries.end()) c.experiment = parse_experiment(exp_it->second.value, exp_it->second.line);
  else if (fallback) c.experiment = *fallback;
  else throw ConfigError("missing required key", "experiment", 0);
  apply_defaults(c);

  for (const auto& spec : table) {
    auto it = entries.find(std::string(spec.section) + "." + spec.name);
    if (it == entries.end()) continue;
    const std::string name = spec.name;
    spec.set(c, Reader(name, it->second));
  }

  auto has = [&](const char* k) { return entries.contains(k); };
  if (c.experiment == Experiment::Custom) {
    if (!has("run.n")) throw ConfigError("missing required key for custom runs", "n", 0);
    if (c.solver == "mrs" && (c.profile == "two-harmonic" || c.profile == "single-harmonic") && !has("scaling.epsilon"))
      throw ConfigError("an MRS run from amplitude data needs epsilon", "epsilon", 0);
  }
  if (c.experiment == Experiment::Compare && has("scaling.epsilon") && !has("mrs.t_end"))
    c.mrs.t_end = 0.05 / (c.scaling.epsilon * c.scaling.epsilon);
  if (c.experiment == Experiment::DqsFront && has("scaling.epsilon") && !has("dqs.tau_end"))
    c.dqs.tau_end = c.scaling.epsilon * c.scaling.epsilon * 800.0 * kTwoPi;
  if (c.experiment == Experiment::Oracle && c.oracle.xi_max < c.oracle.xi_min)
    throw ConfigError("xi_max below xi_min", "xi_max", entries.contains("oracle.xi_max") ? entries["oracle.xi_max"].line : 0);
  if (c.experiment == Experiment::Oracle && c.oracle.k_max < c.oracle.k_min)
    throw ConfigError("k_max below k_min", "k_max", entries.contains("oracle.k_max") ? entries["oracle.k_max"].line : 0);

  c.mrs.snapshot_times = even_times(c.mrs.t_end, c.snapshots);
  c.dqs.snapshot_taus = even_times(c.dqs.tau_end, c.snapshots);
  try {
    c.mrs.validate();
    c.dqs.validate();
    c.scaling.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path, std::optional<Experiment> fallback) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), fallback);
}

std::string apply_paper_scale(RunConfig& config) {
  const std::size_t before = config.n;
  switch (config.experiment) {
    case Experiment::MrsFront: config.n = 1u << 17; break;
    case Experiment::DqsFront:
    case Experiment::TwoHarmonic: config.n = 1u << 15; break;
    case Experiment::Compare:
    case Experiment::Custom:
    case Experiment::Oracle: return "paper scale has no effect on this experiment";
  }
  config.paper_scale = true;
  return "paper scale: n raised from " + std::to_string(before) + " to " + std::to_string(config.n) +
         "; expect hours of runtime and large outputs";
}

}  // namespace resonance
