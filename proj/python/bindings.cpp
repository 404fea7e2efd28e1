#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "resonance/asymptotics.hpp"
#include "resonance/config.hpp"
#include "resonance/dqs.hpp"
#include "resonance/errors.hpp"
#include "resonance/experiments.hpp"
#include "resonance/mrs.hpp"
#include "resonance/oracles.hpp"
#include "resonance/spectral.hpp"

namespace py = pybind11;
using namespace resonance;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;
using RArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

template <class T>
std::vector<T> to_vector(const py::array_t<T, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw py::value_error("expected a one-dimensional array");
  return std::vector<T>(a.data(), a.data() + a.size());
}

template <class T>
py::array_t<T> to_array(const std::vector<T>& v) {
  py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

SpectralAmplitude amplitude_from(const CArray& coeffs) {
  auto c = to_vector(coeffs);
  const PeriodicGrid grid(c.size());
  return SpectralAmplitude(grid, std::move(c));
}

py::dict manifest_dict(const Manifest& m) {
  py::dict d;
  for (const auto& [k, v] : m.entries()) d[py::str(k)] = v;
  return d;
}

py::dict diagnostics_dict(const DiagnosticsTable& t) {
  py::dict d;
  for (const auto& name : t.columns) d[py::str(name)] = to_array(t.column(name));
  return d;
}

py::dict output_dict(const RunOutput& out) {
  py::dict d;
  d["manifest"] = manifest_dict(out.manifest);
  d["diagnostics"] = diagnostics_dict(out.diagnostics);
  d["times"] = to_array(out.snapshot_times());
  const auto n = static_cast<py::ssize_t>(out.grid.size());
  const auto count = static_cast<py::ssize_t>(out.snapshot_count());
  if (out.layout == FieldLayout::Mrs) {
    py::array_t<double> u({count, n}), v({count, n});
    for (py::ssize_t i = 0; i < count; ++i) {
      const auto& s = out.mrs_snapshots[static_cast<std::size_t>(i)];
      std::copy(s.u.begin(), s.u.end(), u.mutable_data(i, 0));
      std::copy(s.v.begin(), s.v.end(), v.mutable_data(i, 0));
    }
    d["u"] = u;
    d["v"] = v;
  } else {
    py::array_t<Complex> a({count, n});
    for (py::ssize_t i = 0; i < count; ++i) {
      const auto& s = out.dqs_snapshots[static_cast<std::size_t>(i)];
      std::copy(s.a.begin(), s.a.end(), a.mutable_data(i, 0));
    }
    d["a"] = a;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Resonant reflection lab core";
  m.attr("__version__") = RESONANCE_VERSION_STRING;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SolverDiverged>(m, "SolverDiverged", PyExc_RuntimeError);
  py::register_exception<StepFailure>(m, "StepFailure", PyExc_RuntimeError);
  py::register_exception<DegenerateResonance>(m, "DegenerateResonance", PyExc_ValueError);
  py::register_exception<DegenerateInput>(m, "DegenerateInput", PyExc_ValueError);
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<RootFailure>(m, "RootFailure", PyExc_RuntimeError);

  m.def("to_spectral", [](const CArray& values) {
    const auto v = to_vector(values);
    return to_array(to_spectral(PeriodicGrid(v.size()), v).coeffs);
  }, py::arg("values"), "Fourier coefficients (FFT order) of grid samples.");
  m.def("to_physical", [](const CArray& coeffs) { return to_array(to_physical(amplitude_from(coeffs))); },
        py::arg("coeffs"));
  m.def("sawtooth", [](double x, const std::string& variant) {
    return sawtooth_eval(variant == "K" ? SawtoothVariant::K : SawtoothVariant::S, x);
  }, py::arg("x"), py::arg("variant") = "S");

  m.def("dispersion", [](int k, const std::string& branch, long truncation, bool tail, const std::string& kernel) {
    const auto spec = kernel == "sawtooth_k" ? KernelSpec::sawtooth_k() : KernelSpec::sawtooth_s();
    const auto r = dispersion(spec, k, branch == "minus" ? Branch::Minus : Branch::Plus, truncation, tail);
    py::dict d;
    d["k"] = r.k;
    d["omega0"] = r.omega0;
    d["omega1"] = r.omega1;
    d["omega2"] = r.omega2;
    return d;
  }, py::arg("k"), py::arg("branch") = "plus", py::arg("truncation") = 100000L, py::arg("tail_correction") = true,
     py::arg("kernel") = "sawtooth_s");
  m.def("single_harmonic", &single_harmonic, py::arg("n"), py::arg("a0"), py::arg("mu"), py::arg("tau"),
        py::arg("coefficient") = 1.0);
  m.def("traveling_wave", [](double c, double xi, double tol) {
    const auto p = traveling_wave(c, xi, tol);
    return py::make_tuple(p.phi, p.a);
  }, py::arg("c"), py::arg("xi"), py::arg("newton_tol") = 1e-13);
  m.def("galerkin_oracle", [](const std::vector<int>& ks, const CArray& coeffs, double mu, double coefficient,
                              double tau_end) {
    const auto c = to_vector(coeffs);
    return to_array(galerkin_oracle(ks, c, mu, coefficient, tau_end));
  }, py::arg("wavenumbers"), py::arg("coeffs"), py::arg("mu"), py::arg("coefficient"), py::arg("tau_end"));

  m.def("dqs_rhs", [](const CArray& coeffs, double mu, double coefficient) {
    return to_array(dqs_rhs(amplitude_from(coeffs), mu, coefficient).coeffs);
  }, py::arg("coeffs"), py::arg("mu"), py::arg("coefficient") = 1.0);
  m.def("two_harmonic_initial", [](std::size_t n) { return to_array(two_harmonic_initial(PeriodicGrid(n)).coeffs); },
        py::arg("n"));
  m.def("run_dqs", [](const CArray& coeffs, double mu, double dt, double tau_end, std::vector<double> snapshot_taus,
                      double viscosity, double coefficient) {
    DqsConfig c;
    c.mu = mu;
    c.dt = dt;
    c.tau_end = tau_end;
    c.snapshot_taus = std::move(snapshot_taus);
    c.viscosity_nu = viscosity;
    c.nonlinear_coefficient = coefficient;
    const auto a = amplitude_from(coeffs);
    const auto out = [&] {
      py::gil_scoped_release release;
      return run_dqs(a, c);
    }();
    return output_dict(out);
  }, py::arg("coeffs"), py::arg("mu") = 1.0, py::arg("dt") = 1e-4, py::arg("tau_end") = 0.1,
     py::arg("snapshot_taus") = std::vector<double>{}, py::arg("viscosity") = 0.0, py::arg("coefficient") = 1.0);
  m.def("run_mrs", [](const RArray& u, const RArray& v, double t_end, double cfl, std::vector<double> snapshot_times) {
    const auto uu = to_vector(u);
    const PeriodicGrid grid(uu.size());
    MrsState s{RealField(grid, uu), RealField(grid, to_vector(v)), 0.0};
    MrsConfig c;
    c.t_end = t_end;
    c.cfl = cfl;
    c.snapshot_times = std::move(snapshot_times);
    const auto out = [&] {
      py::gil_scoped_release release;
      return run_mrs(s, c);
    }();
    return output_dict(out);
  }, py::arg("u"), py::arg("v"), py::arg("t_end"), py::arg("cfl") = 0.5,
     py::arg("snapshot_times") = std::vector<double>{});

  m.def("reconstruct_mrs", [](const CArray& coeffs, double eps, double t, int order) {
    const auto s = reconstruct_mrs(amplitude_from(coeffs), eps, t, order);
    return py::make_tuple(to_array(s.u.values), to_array(s.v.values));
  }, py::arg("coeffs"), py::arg("epsilon"), py::arg("t"), py::arg("order") = 1);
  m.def("extract_amplitude", [](const RArray& u, const RArray& v, double eps, double t, bool zero_mean) {
    const auto uu = to_vector(u);
    const PeriodicGrid grid(uu.size());
    MrsState s{RealField(grid, uu), RealField(grid, to_vector(v)), t};
    return to_array(extract_amplitude(s, eps, zero_mean).coeffs);
  }, py::arg("u"), py::arg("v"), py::arg("epsilon"), py::arg("t"), py::arg("zero_mean") = true);
  m.def("normalize", [](double eps, double gamma, double mach) {
    const auto n = normalize(ScalingParams{eps, gamma, mach});
    py::dict d;
    d["mu"] = n.mu;
    d["amplitude_scale"] = n.amplitude_scale;
    d["time_scale"] = n.time_scale;
    d["frame_shift_rate"] = n.frame_shift_rate;
    return d;
  }, py::arg("epsilon"), py::arg("gamma"), py::arg("mach"));
  m.def("asyeq_coefficient", &asyeq_coefficient, py::arg("gamma"));

  m.def("parse_config", [](const std::string& text) {
    const auto c = parse_config(text);
    py::dict d;
    d["experiment"] = to_string(c.experiment);
    d["n"] = c.n;
    d["snapshots"] = c.snapshots;
    d["epsilon"] = c.scaling.epsilon;
    d["mu"] = c.dqs.mu;
    d["dt"] = c.dqs.dt;
    d["tau_end"] = c.dqs.tau_end;
    d["viscosity"] = c.dqs.viscosity_nu;
    d["cfl"] = c.mrs.cfl;
    d["t_end"] = c.mrs.t_end;
    d["output_dir"] = c.output_dir.string();
    return d;
  }, py::arg("text"));
  m.def("run_experiment", [](const std::string& text, const std::string& output_dir) {
    const auto c = parse_config(text);
    ExperimentResult r = [&] {
      py::gil_scoped_release release;
      return run_experiment(c);
    }();
    if (!output_dir.empty()) export_experiment(r, output_dir);
    py::dict d;
    d["manifest"] = manifest_dict(r.manifest);
    py::dict runs;
    for (const auto& [name, out] : r.runs) runs[py::str(name)] = output_dict(out);
    d["runs"] = runs;
    if (r.oracle_table) d["oracle"] = diagnostics_dict(*r.oracle_table);
    if (r.envelope_diff) d["envelope_diff"] = diagnostics_dict(*r.envelope_diff);
    if (r.error) std::rethrow_exception(r.error);
    return d;
  }, py::arg("config_text"), py::arg("output_dir") = "");
}
