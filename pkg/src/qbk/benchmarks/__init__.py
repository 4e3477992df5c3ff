"""Scalable benchmark families and their score functions."""

from __future__ import annotations

from .core import BenchmarkInstance, ScoreUndefinedError, hellinger_fidelity, relative_energy_score
from .ec import ECConfig, bit_code_circuit, ec_score, phase_code_circuit
from .ghz import ghz_circuit, ghz_instance, ghz_score
from .hamsim import TFIMParams, hamsim_circuit, hamsim_score, magnetization_from_histogram
from .mermin import classical_bound, mermin_bell_circuits, mermin_score
from .qaoa import (
    QAOAParams,
    SKInstance,
    optimize_qaoa_params,
    qaoa_energy,
    qaoa_instance,
    qaoa_score,
    qaoa_vanilla_circuit,
    qaoa_zzswap_circuit,
    sk_instance,
)
from .suite import FAMILIES, default_suite, load_instance, make_instance, save_instance, score_payload, shot_split
from .vqe import optimize_vqe, tfim_exact_ground_energy, vqe_instance, vqe_score

__all__ = [
    "FAMILIES",
    "BenchmarkInstance",
    "ECConfig",
    "QAOAParams",
    "SKInstance",
    "ScoreUndefinedError",
    "TFIMParams",
    "bit_code_circuit",
    "classical_bound",
    "default_suite",
    "ec_score",
    "ghz_circuit",
    "ghz_instance",
    "ghz_score",
    "hamsim_circuit",
    "hamsim_score",
    "hellinger_fidelity",
    "load_instance",
    "magnetization_from_histogram",
    "make_instance",
    "mermin_bell_circuits",
    "mermin_score",
    "optimize_qaoa_params",
    "optimize_vqe",
    "phase_code_circuit",
    "qaoa_energy",
    "qaoa_instance",
    "qaoa_score",
    "qaoa_vanilla_circuit",
    "qaoa_zzswap_circuit",
    "relative_energy_score",
    "save_instance",
    "score_payload",
    "shot_split",
    "sk_instance",
    "tfim_exact_ground_energy",
    "vqe_instance",
    "vqe_score",
]
