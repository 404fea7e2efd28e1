"""Resonant reflection lab: MRS and DQS solvers, asymptotic maps and oracles."""

from ._core import (
    __version__,
    asyeq_coefficient,
    dispersion,
    dqs_rhs,
    extract_amplitude,
    galerkin_oracle,
    normalize,
    parse_config,
    reconstruct_mrs,
    run_dqs,
    run_experiment,
    run_mrs,
    sawtooth,
    single_harmonic,
    to_physical,
    to_spectral,
    traveling_wave,
    two_harmonic_initial,
)

__all__ = [
    "__version__",
    "asyeq_coefficient",
    "dispersion",
    "dqs_rhs",
    "extract_amplitude",
    "galerkin_oracle",
    "normalize",
    "parse_config",
    "reconstruct_mrs",
    "run_dqs",
    "run_experiment",
    "run_mrs",
    "sawtooth",
    "single_harmonic",
    "to_physical",
    "to_spectral",
    "traveling_wave",
    "two_harmonic_initial",
]
