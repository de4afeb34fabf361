"""Randomized verification suites: picture equivalence and locality.

Both suites generate random circuits from a seeded generator and check the
descriptor engine against an independent standard.  Picture equivalence
compares every joint outcome measure with the state-vector oracle; locality
checks that gates avoiding a watched qubit leave its stored descriptor
untouched bit for bit.  The CLI `verify` subcommand and the acceptance
tests both run these, so the suite parameters and defaults live here,
in one place.
"""

from __future__ import annotations

import itertools
import math
from typing import NamedTuple

import numpy as np

from . import descriptors, statevector
from .descriptors import GateSpec

#: Joint-measure agreement tolerance between the two pictures.
EQUIVALENCE_TOL = 1e-9

#: Default seed for suite circuit generation; fixed so runs are repeatable.
DEFAULT_SUITE_SEED = 20260816


class SuiteResult(NamedTuple):
    """Outcome of one verification suite."""

    passed: bool
    checked: int
    failures: int
    max_deviation: float
    detail: str


def random_circuit(
    rng: np.random.Generator,
    n: int,
    depth: int,
    allowed: tuple[int, ...] | None = None,
) -> list[GateSpec]:
    """Random gate sequence on an n-qubit register.

    `allowed` restricts the qubits gates may target (default: all).  CNOTs
    appear only when two targets are available.
    """
    targets = tuple(range(n)) if allowed is None else tuple(allowed)
    if not targets:
        raise ValueError("need at least one allowed qubit")
    names = list(descriptors.GATE_NAMES) if len(targets) >= 2 else list(
        descriptors.GATE_NAMES[:-1]
    )
    gates = []
    for _ in range(depth):
        name = names[rng.integers(len(names))]
        if name == "CNOT":
            control, target = rng.choice(len(targets), size=2, replace=False)
            gates.append(GateSpec.cnot(targets[control], targets[target]))
        elif name == "ROTY":
            theta = rng.uniform(-math.pi, math.pi)
            gates.append(GateSpec.roty(theta, targets[rng.integers(len(targets))]))
        else:
            gates.append(GateSpec(name, (targets[rng.integers(len(targets))],)))
    return gates


def picture_equivalence_suite(
    n_circuits: int = 1000,
    max_qubits: int = 4,
    max_depth: int = 20,
    tol: float = EQUIVALENCE_TOL,
    seed: int = DEFAULT_SUITE_SEED,
) -> SuiteResult:
    """Compare descriptor measures against the oracle on random circuits.

    For each circuit, every full joint outcome (all 2**n of them) and every
    single-qubit marginal is computed by both routes; any deviation beyond
    `tol` is a failure.
    """
    rng = np.random.default_rng(seed)
    failures = 0
    checked = 0
    max_deviation = 0.0
    worst = ""
    for index in range(n_circuits):
        n = int(rng.integers(1, max_qubits + 1))
        depth = int(rng.integers(1, max_depth + 1))
        gates = random_circuit(rng, n, depth)
        net = descriptors.apply_circuit(descriptors.init_network(n), gates)
        state = statevector.run_circuit(n, gates)
        joints = [
            [(k, o) for k, o in enumerate(bits)]
            for bits in itertools.product((0, 1), repeat=n)
        ]
        singles = [[(k, o)] for k in range(n) for o in (0, 1)]
        for outcomes in joints + singles:
            engine = descriptors.joint_measure(net, outcomes)
            oracle = statevector.outcome_probability(state, outcomes)
            deviation = abs(engine - oracle)
            checked += 1
            if deviation > max_deviation:
                max_deviation = deviation
                worst = f"circuit {index}, n={n}, outcomes {outcomes}"
            if deviation > tol:
                failures += 1
    detail = (
        f"{checked} joint measures across {n_circuits} circuits, "
        f"max deviation {max_deviation:.3e}"
    )
    if failures:
        detail += f"; worst at {worst}"
    return SuiteResult(failures == 0, checked, failures, max_deviation, detail)


def locality_suite(
    n_circuits: int = 500,
    max_qubits: int = 4,
    max_depth: int = 20,
    seed: int = DEFAULT_SUITE_SEED + 1,
) -> SuiteResult:
    """Audit descriptor locality against random remote circuits.

    Each trial preludes with gates anywhere (so the watched descriptor is
    generally nontrivial), then audits a circuit that avoids the watched
    qubit: its stored matrices must come back exactly unchanged and must
    match recomputation from the cumulative unitary.
    """
    rng = np.random.default_rng(seed)
    failures = 0
    for _ in range(n_circuits):
        n = int(rng.integers(2, max_qubits + 1))
        watched = int(rng.integers(n))
        others = tuple(k for k in range(n) if k != watched)
        prelude_depth = int(rng.integers(0, max_depth + 1))
        remote_depth = int(rng.integers(1, max_depth + 1))
        net = descriptors.init_network(n)
        if prelude_depth:
            net = descriptors.apply_circuit(net, random_circuit(rng, n, prelude_depth))
        remote_ops = random_circuit(rng, n, remote_depth, allowed=others)
        if not descriptors.locality_audit(net, watched, remote_ops):
            failures += 1
    detail = f"{n_circuits} remote circuits audited, {failures} locality violations"
    return SuiteResult(failures == 0, n_circuits, failures, 0.0, detail)
