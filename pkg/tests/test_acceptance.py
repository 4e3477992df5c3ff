"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``ACCEPTANCE <n> PASS|FAIL: ...`` line (visible in
``pytest -v`` output) before asserting.
"""

from __future__ import annotations

import json
import math
import statistics
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from qbk.analysis import (
    FeatureRecord,
    ScoreTable,
    correlation_table,
    family_of,
    hull_volume,
    monte_carlo_hull_volume,
    synthetic_suite,
)
from qbk.benchmarks import (
    FAMILIES,
    QAOAParams,
    classical_bound,
    make_instance,
    mermin_bell_circuits,
    mermin_score,
    qaoa_vanilla_circuit,
    qaoa_zzswap_circuit,
    sk_instance,
    tfim_exact_ground_energy,
    vqe_instance,
)
from qbk.benchmarks.qaoa import swap_network_order
from qbk.circuit import GATES, CircuitBuilder
from qbk.cli import main, run_one
from qbk.config import BackendProfile
from qbk.features import AXES, FeatureVector, compute_features
from qbk.histogram import ShotHistogram
from qbk.pauli import Observable
from qbk.qasm import emit_qasm, parse_qasm
from qbk.simulator import NoiseModel, sample, simulate_state

from test_qasm import MALFORMED

SHOTS = 2000


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\nACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail

    return emit


def strip_readout(circuit):
    return circuit.replace_instructions(i for i in circuit.instructions if i.name not in ("measure", "barrier"))


def repeated_scores(instance, backend: BackendProfile, seed: int = 0) -> list[float]:
    return [run_one(instance, backend, r, seed)["score"] for r in range(backend.repetitions)]


def test_criterion_1_synthetic_coverage(report):
    start = time.perf_counter()
    points = synthetic_suite()
    exact = hull_volume(points)
    mc, se = monte_carlo_hull_volume(points)
    elapsed = time.perf_counter() - start
    checks = {
        "exact": abs(exact - 1 / 720) <= 1e-12,
        "2 sig figs": f"{exact:.1e}" == "1.4e-03",
        "monte carlo": abs(mc - 1 / 720) <= 3 * se,
        "runtime": elapsed < 60,
    }
    report(
        1,
        all(checks.values()),
        f"exact={exact:.6e} mc={mc:.6e}+-{se:.1e} time={elapsed:.1f}s failed={[k for k, v in checks.items() if not v]}",
    )


def test_criterion_2_noiseless_scores(report):
    start = time.perf_counter()
    backend = BackendProfile("noiseless", NoiseModel(), SHOTS, 5)
    low_single, low_mean = [], []
    worst = 1.0
    for family in FAMILIES:
        sizes = range(3, 9) if family == "ghz" else range(3, 7)
        for size in sizes:
            scores = repeated_scores(make_instance(family, size), backend)
            mean = statistics.fmean(scores)
            worst = min(worst, min(scores))
            if min(scores) < 0.98:
                low_single.append(f"{family}-{size}:{min(scores):.4f}")
            if mean < 0.995:
                low_mean.append(f"{family}-{size}:{mean:.4f}")
    elapsed = time.perf_counter() - start
    ok = not low_single and not low_mean and elapsed < 300
    report(
        2,
        ok,
        f"min single={worst:.4f} time={elapsed:.0f}s single<0.98={low_single} mean<0.995={low_mean}",
    )


def test_criterion_3_mermin(report):
    exact_ok, gaps = True, []
    for n in range(2, 7):
        inst = mermin_bell_circuits(n)
        probs = simulate_state(strip_readout(inst.circuits[0])).probabilities()
        diag = Observable.from_pairs(inst.ideal["observable"])
        value = 0.0
        for c, p in diag.terms:
            mask = sum(1 << q for q, letter in enumerate(p.letters) if letter == "Z")
            value += c * sum(pr * (-1) ** bin(i & mask).count("1") for i, pr in enumerate(probs))
        exact_ok &= abs(value - 2 ** (n - 1)) <= 1e-9
    for n in range(3, 7):
        # the n = 2 local bound already equals the quantum maximum, so no gap exists there
        inst = mermin_bell_circuits(n)
        per_shot: list[float] = []
        for r in range(5):
            hist = sample(inst.circuits[0], SHOTS, seed=1000 * n + r)
            for key, count in hist.counts.items():
                per_shot += [mermin_score(ShotHistogram.from_counts({key: 1}), n)] * count
        mean = statistics.fmean(per_shot)
        se = statistics.pstdev(per_shot) / math.sqrt(len(per_shot))
        bound_score = (classical_bound(n) + 2 ** (n - 1)) / 2**n
        gaps.append((n, mean, bound_score, mean - bound_score >= 5 * se, se))
    ok = exact_ok and all(g[3] for g in gaps)
    detail = ", ".join(f"n={n}: {m:.4f} vs bound {b:.4f} (se {se:.1e})" for n, m, b, _, se in gaps)
    report(3, ok, f"exact 2^(n-1) for n=2..6: {exact_ok}; {detail}")


def random_circuit(rng: np.random.Generator):
    n = int(rng.integers(1, 7))
    b = CircuitBuilder(n, n)
    kinds = [g for g, (nq, _) in GATES.items() if nq <= n] + ["measure", "reset", "barrier"]
    for _ in range(int(rng.integers(0, 31))):
        kind = kinds[int(rng.integers(len(kinds)))]
        if kind == "measure":
            b.measure(int(rng.integers(n)), int(rng.integers(n)))
        elif kind == "reset":
            b.reset(int(rng.integers(n)))
        elif kind == "barrier":
            b.barrier(*rng.choice(n, size=int(rng.integers(0, n + 1)), replace=False).tolist())
        else:
            nq, npar = GATES[kind]
            qs = rng.choice(n, size=nq, replace=False).tolist()
            b.gate(kind, *qs, params=rng.uniform(-math.pi, math.pi, npar).tolist())
    return b.build()


def test_criterion_4_ghz_features(report):
    closed = True
    for n in range(2, 11):
        fv = compute_features(make_instance("ghz", n).circuits[0])
        expected = (Fraction(2, n), 1, Fraction(n - 1, n), 0)
        got = (fv.communication, fv.critical_depth, fv.entanglement, fv.parallelism)
        closed &= all(abs(g - float(e)) <= 1e-15 for g, e in zip(got, expected))
    rng = np.random.default_rng(2024)
    outside = 0
    for _ in range(1000):
        fv = compute_features(random_circuit(rng))
        outside += any(not 0.0 <= v <= 1.0 for v in fv.as_tuple())
    report(4, closed and outside == 0, f"closed forms N=2..10: {closed}; out-of-range vectors in 1000 random circuits: {outside}")


def test_criterion_5_vqe(report):
    two = tfim_exact_ground_energy(2)
    errors = {}
    for n in range(2, 9):
        energy = vqe_instance(n).ideal["energy"]
        exact = tfim_exact_ground_energy(n)
        errors[n] = abs(energy - exact) / abs(exact)
    ok = abs(two + math.sqrt(5)) <= 1e-6 and max(errors.values()) < 0.01
    report(5, ok, f"n=2 exact {two:.9f}; worst relative error {max(errors.values()):.2e} at n={max(errors, key=errors.get)}")


def test_criterion_6_qaoa_equivalence(report):
    rng = np.random.default_rng(6)
    worst = 0.0
    for k in range(20):
        n = 3 + k % 4
        sk = sk_instance(n, int(rng.integers(2**31)))
        params = QAOAParams(*rng.uniform(-math.pi, math.pi, 2))
        cost = sk.cost_diagonal()
        vanilla = simulate_state(strip_readout(qaoa_vanilla_circuit(sk, params))).probabilities()
        swapped = simulate_state(strip_readout(qaoa_zzswap_circuit(sk, params))).probabilities()
        final = swap_network_order(n)[1]
        idx = np.arange(1 << n)
        logical = np.zeros_like(idx)
        for line, q in enumerate(final):
            logical |= ((idx >> line) & 1) << q
        remapped = np.zeros(1 << n)
        remapped[logical] = swapped
        worst = max(worst, abs(float(vanilla @ cost) - float(remapped @ cost)))
    report(6, worst <= 1e-9, f"max |<H>_vanilla - <H>_zzswap| over 20 pairs = {worst:.1e}")


def test_criterion_7_monotone_degradation(report):
    sweep = (0.0, 0.001, 0.01, 0.05)
    violations, table = [], {}
    for family in FAMILIES:
        inst = make_instance(family, 4)
        stats = []
        for p2 in sweep:
            scores = repeated_scores(inst, BackendProfile(f"p2={p2}", NoiseModel(p2=p2), SHOTS, 10))
            stats.append((statistics.fmean(scores), statistics.stdev(scores) / math.sqrt(len(scores))))
        table[family] = [round(m, 4) for m, _ in stats]
        for (m0, s0), (m1, s1) in zip(stats, stats[1:]):
            if m1 > m0 + math.hypot(s0, s1):
                violations.append(family)
    readout = BackendProfile("readout", NoiseModel(p2=0.001, p_meas=0.05, p_reset=0.05), SHOTS, 10)
    means = {f: statistics.fmean(repeated_scores(make_instance(f, 4), readout)) for f in FAMILIES}
    ec = max(means["bit_code"], means["phase_code"])
    others = min(v for f, v in means.items() if f not in ("bit_code", "phase_code"))
    ok = not violations and ec < others
    report(
        7,
        ok,
        f"non-monotone={violations}; readout noise: best EC={ec:.4f} < lowest non-EC={others:.4f}; sweep={table}",
    )


def test_criterion_8_correlation(report, tmp_path):
    rng = np.random.default_rng(8)
    ids = [f"{fam}-{k}" for fam in FAMILIES for k in (3, 4, 5)]
    worst_linear, zero_ok, records, triples = 1.0, True, [], []
    for target, axis in enumerate(AXES):
        records, triples = [], []
        for i, bid in enumerate(ids):
            vec = [float(v) for v in rng.random(len(AXES))]
            vec[target] = i / len(ids)
            vec[(target + 1) % len(AXES)] = 0.5  # zero-variance axis
            records.append(FeatureRecord(bid, FeatureVector(*vec)))
            triples.append((bid, "sim", 0.95 - 0.6 * vec[target]))
        matrix = correlation_table(records, ScoreTable.from_scores(triples))
        worst_linear = min(worst_linear, matrix[(axis, "sim")])
        zero_ok &= matrix[(AXES[(target + 1) % len(AXES)], "sim")] == 0.0

    features = tmp_path / "features.json"
    features.write_text(
        json.dumps([{"benchmark_id": r.benchmark_id, **dict(zip(AXES, r.features.as_tuple()))} for r in records])
    )
    results = tmp_path / "results.jsonl"
    results.write_text("".join(json.dumps({"benchmark_id": b, "backend": s, "score": v}) + "\n" for b, s, v in triples))
    kept = tmp_path / "kept.jsonl"
    kept.write_text("".join(line + "\n" for line in results.read_text().splitlines() if family_of(json.loads(line)["benchmark_id"]) not in ("bit_code", "phase_code")))
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    main(["correlate", "--features", str(features), "--results", str(results), "--exclude", "bit_code,phase_code", "--out", str(out_a)])
    main(["correlate", "--features", str(features), "--results", str(kept), "--out", str(out_b)])
    same = (out_a / "correlation.csv").read_text() == (out_b / "correlation.csv").read_text()
    ok = abs(worst_linear - 1.0) <= 1e-9 and zero_ok and same
    report(8, ok, f"min R2 on the linear axis = {worst_linear:.12f}; zero-variance -> 0: {zero_ok}; --exclude equals row removal: {same}")


def test_criterion_9_parser_and_determinism(report, tmp_path):
    roundtrip_failures = []
    for family in FAMILIES:
        for size in range(2, 7):
            for circuit in make_instance(family, size).circuits:
                back = parse_qasm(emit_qasm(circuit))
                if not back.approx_equal(circuit) or emit_qasm(back) != emit_qasm(circuit):
                    roundtrip_failures.append(f"{family}-{size}")
    classes = set()
    corpus_ok = True
    for text, error in MALFORMED:
        try:
            parse_qasm(text)
            corpus_ok = False
        except Exception as exc:  # noqa: BLE001 - the class itself is checked
            corpus_ok &= type(exc) is error
            classes.add(type(exc).__name__)

    config = tmp_path / "suite.toml"
    config.write_text(
        "seed = 5\n"
        + "".join(f'[[benchmarks]]\nfamily = "{f}"\nsizes = [3, 4]\n' for f in FAMILIES)
        + '[[backends]]\nname = "noisy"\nshots = 300\nrepetitions = 2\nnoise = { p1 = 0.002, p2 = 0.02, p_meas = 0.02, p_reset = 0.01 }\n'
    )

    def artifacts(root: Path) -> dict[str, object]:
        main(["--config", str(config), "--out", str(root), "generate"])
        main(["--config", str(config), "--out", str(root), "run"])
        main(["features", str(root / "instances"), "--out", str(root)])
        main(["score", str(root / "results.jsonl"), "--out", str(root)])
        out: dict[str, object] = {
            str(p.relative_to(root)): p.read_bytes() for p in sorted((root / "instances").rglob("*")) if p.is_file()
        }
        out["scores.csv"] = (root / "scores.csv").read_bytes()
        out["results"] = [
            {k: v for k, v in json.loads(line).items() if k not in ("timestamp", "wall_clock")}
            for line in (root / "results.jsonl").read_text().splitlines()
        ]
        # the feature report names each file by path, so drop that column
        out["features"] = [row.split(",")[:1] + row.split(",")[2:] for row in (root / "features.csv").read_text().splitlines()]
        return out

    identical = artifacts(tmp_path / "one") == artifacts(tmp_path / "two")
    ok = not roundtrip_failures and corpus_ok and len(classes) == 6 and identical
    report(
        9,
        ok,
        f"roundtrip failures={roundtrip_failures}; {len(MALFORMED)} malformed inputs, {len(classes)} error classes, all correct: {corpus_ok}; rerun byte-identical: {identical}",
    )
