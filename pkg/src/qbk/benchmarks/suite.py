"""Family registry, payload-driven scoring and on-disk instance format."""

from __future__ import annotations

import json
from collections.abc import Callable, Mapping, Sequence
from pathlib import Path
from typing import Any

from ..histogram import ShotHistogram, as_histogram
from ..pauli import Observable
from ..qasm import emit_qasm, parse_qasm
from .core import BenchmarkInstance, histogram_fidelity, relative_energy_score, zz_expectations
from .ec import ECConfig, bit_code_circuit, phase_code_circuit
from .ghz import ghz_instance
from .hamsim import TFIMParams, hamsim_circuit, hamsim_score, magnetization_from_histogram
from .mermin import mermin_bell_circuits, mermin_score_from_observable
from .qaoa import qaoa_instance
from .vqe import tfim_energy_from_histograms, vqe_instance

FAMILIES = ("ghz", "mermin", "bit_code", "phase_code", "qaoa_vanilla", "qaoa_zzswap", "vqe", "hamsim")
DEFAULT_SIZES = range(3, 9)
INSTANCE_FILE = "instance.json"


def _ec(builder: Callable[[ECConfig], BenchmarkInstance]):
    def make(size: int, seed: int, rounds: int = 1, pattern: str = "") -> BenchmarkInstance:
        return builder(ECConfig(size, rounds, pattern))

    return make


_GENERATORS: dict[str, Callable[..., BenchmarkInstance]] = {
    "ghz": lambda size, seed: ghz_instance(size),
    "mermin": lambda size, seed: mermin_bell_circuits(size),
    "bit_code": _ec(bit_code_circuit),
    "phase_code": _ec(phase_code_circuit),
    "qaoa_vanilla": lambda size, seed: qaoa_instance(size, seed, "vanilla"),
    "qaoa_zzswap": lambda size, seed: qaoa_instance(size, seed, "zzswap"),
    "vqe": lambda size, seed, J=1.0, h=1.0: vqe_instance(size, J, h),
    "hamsim": lambda size, seed, **params: hamsim_circuit(size, TFIMParams(**params)),
}


def make_instance(family: str, size: int, seed: int = 0, label: str = "", **params: Any) -> BenchmarkInstance:
    """Build one instance; ``params`` are the family-specific keyword options."""
    try:
        generator = _GENERATORS[family]
    except KeyError:
        raise ValueError(f"unknown benchmark family {family!r}; expected one of {FAMILIES}") from None
    try:
        instance = generator(size, seed, **params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {family}: {exc}") from None
    if label:
        instance = BenchmarkInstance(instance.family, instance.size, instance.params, instance.circuits, instance.ideal, label)
    return instance


def default_suite(sizes: Sequence[int] = DEFAULT_SIZES, seed: int = 0) -> list[BenchmarkInstance]:
    return [make_instance(family, size, seed) for family in FAMILIES for size in sizes]


def shot_split(family: str, shots: int) -> list[int]:
    """Shots per circuit; the two VQE bases share the budget evenly."""
    if family == "vqe":
        return [shots - shots // 2, shots // 2]
    return [shots]


def score_payload(family: str, ideal: Mapping[str, Any], histograms: Sequence[ShotHistogram | Mapping[str, int]]) -> float:
    """Score from the ideal payload and one histogram per circuit."""
    hists = [as_histogram(h) for h in histograms]
    expected = 2 if family == "vqe" else 1
    if len(hists) != expected:
        raise ValueError(f"{family} needs {expected} histogram(s), got {len(hists)}")
    hist = hists[0]
    if family == "ghz":
        return histogram_fidelity(hist, ideal["distribution"])
    if family == "mermin":
        return mermin_score_from_observable(hist, Observable.from_pairs(ideal["observable"]))
    if family in ("bit_code", "phase_code"):
        return histogram_fidelity(hist.marginal(ideal["bits"]), ideal["distribution"])
    if family in ("qaoa_vanilla", "qaoa_zzswap"):
        n = hist.width
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        energy = sum(w * zz for w, zz in zip(ideal["weights"], zz_expectations(hist, pairs)))
        return relative_energy_score(energy, ideal["energy"])
    if family == "vqe":
        energy = tfim_energy_from_histograms(hists[0], hists[1], ideal["J"], ideal["h"])
        return relative_energy_score(energy, ideal["energy"])
    if family == "hamsim":
        return hamsim_score(magnetization_from_histogram(hist), ideal["magnetization"])
    raise ValueError(f"unknown benchmark family {family!r}")


def circuit_filename(index: int) -> str:
    return f"circuit_{index}.qasm"


def instance_to_dict(instance: BenchmarkInstance) -> dict[str, Any]:
    return {
        "id": instance.id,
        "family": instance.family,
        "size": instance.size,
        "label": instance.label,
        "params": dict(instance.params),
        "ideal": dict(instance.ideal),
        "circuits": [circuit_filename(i) for i in range(len(instance.circuits))],
    }


def save_instance(instance: BenchmarkInstance, directory: str | Path) -> Path:
    """Write ``instance.json`` plus one ``.qasm`` file per circuit into ``directory``."""
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    (path / INSTANCE_FILE).write_text(json.dumps(instance_to_dict(instance), indent=2, sort_keys=True) + "\n")
    for i, circuit in enumerate(instance.circuits):
        (path / circuit_filename(i)).write_text(emit_qasm(circuit))
    return path


def load_instance(directory: str | Path) -> BenchmarkInstance:
    path = Path(directory)
    meta = json.loads((path / INSTANCE_FILE).read_text())
    circuits = tuple(parse_qasm((path / name).read_text()) for name in meta["circuits"])
    return BenchmarkInstance(meta["family"], meta["size"], meta["params"], circuits, meta["ideal"], meta.get("label", ""))
