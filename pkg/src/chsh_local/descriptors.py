"""Heisenberg-picture engine with strictly local per-qubit descriptors.

The reference state is pinned to |0...0> for the life of a network and never
changes; all dynamics lives in operators.  Each qubit owns a *descriptor*, a
pair of evolved Pauli generators (qx, qz), and a gate rewrites only the
descriptors of the qubits it targets.  Descriptors of untouched qubits are
carried over verbatim, which is exact, not an approximation: the embedded
gate matrix commutes with the initial Paulis of every qubit it does not act
on, so conjugating by the new cumulative unitary returns the stored matrix
unchanged.  Locality is therefore a structural property of the data, and
:func:`locality_audit` can demand bit-for-bit equality rather than a
tolerance.

Outcome statistics are extracted as *branch measures*: the squared-amplitude
weight of a history, read as the expectation of a projector against the fixed
reference state.  Two independent routes exist for every such number, this
engine and the state-vector oracle in :mod:`chsh_local.statevector`; they
share gate-matrix constants but no application code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from . import linalg
from .linalg import DEFAULT_TOL, MAX_QUBITS

#: Branch measures at or below this are treated as an impossible history;
#: conditioning on one is a caller bug, not a 0/0.
ZERO_MEASURE = 1e-12

_SINGLE_QUBIT_GATES = ("X", "Y", "Z", "H", "ROTY")
GATE_NAMES = _SINGLE_QUBIT_GATES + ("CNOT",)


@dataclass(frozen=True)
class GateSpec:
    """One gate of a circuit: a name, target qubits, and an optional angle.

    CNOT targets are ordered (control, target).  The only parametrized gate
    is ROTY, carrying the rotation angle in radians.
    """

    name: str
    targets: tuple[int, ...]
    theta: float | None = None

    def __post_init__(self):
        if self.name not in GATE_NAMES:
            raise ValueError(f"unknown gate {self.name!r}")
        arity = 2 if self.name == "CNOT" else 1
        if len(self.targets) != arity:
            raise ValueError(f"{self.name} takes {arity} target(s), got {self.targets}")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"targets must be distinct, got {self.targets}")
        if any(t < 0 for t in self.targets):
            raise ValueError(f"targets must be >= 0, got {self.targets}")
        if self.name == "ROTY":
            if self.theta is None or not np.isfinite(self.theta):
                raise ValueError(f"ROTY needs a finite angle, got {self.theta}")
        elif self.theta is not None:
            raise ValueError(f"{self.name} takes no angle")

    def validate_for(self, n: int) -> None:
        if any(t >= n for t in self.targets):
            raise ValueError(f"gate {self.name} targets {self.targets} out of range for n={n}")

    @classmethod
    def x(cls, q: int) -> "GateSpec":
        return cls("X", (q,))

    @classmethod
    def y(cls, q: int) -> "GateSpec":
        return cls("Y", (q,))

    @classmethod
    def z(cls, q: int) -> "GateSpec":
        return cls("Z", (q,))

    @classmethod
    def h(cls, q: int) -> "GateSpec":
        return cls("H", (q,))

    @classmethod
    def roty(cls, theta: float, q: int) -> "GateSpec":
        return cls("ROTY", (q,), theta)

    @classmethod
    def cnot(cls, control: int, target: int) -> "GateSpec":
        return cls("CNOT", (control, target))


class OutcomeSpec(NamedTuple):
    """A z-basis outcome on one qubit: 0 is the +1 eigenvalue, 1 the -1."""

    qubit: int
    outcome: int


@dataclass(frozen=True)
class Descriptor:
    """Evolved Pauli generator pair of one qubit, each of full register size."""

    qubit_id: int
    qx: np.ndarray
    qz: np.ndarray

    def qy(self) -> np.ndarray:
        """Derived third component i * qx * qz; never stored."""
        return 1j * linalg.matmul(self.qx, self.qz)


@dataclass(frozen=True)
class DescriptorNetwork:
    """Ordered descriptors of an n-qubit register plus an audit trail.

    The cumulative unitary is maintained for audits only; measures and gate
    application read it, but the per-qubit truth lives in the descriptors.
    Networks are values: gate application returns a new network and never
    mutates arrays, so distinct networks may evolve in parallel freely.
    """

    n: int
    descriptors: tuple[Descriptor, ...]
    cumulative_unitary: np.ndarray
    gate_log: tuple[GateSpec, ...] = ()

    @property
    def dim(self) -> int:
        return 2**self.n


def _single_qubit_matrix(g: GateSpec) -> np.ndarray:
    if g.name == "ROTY":
        return linalg.roty(g.theta)
    return {"X": linalg.X, "Y": linalg.Y, "Z": linalg.Z, "H": linalg.H}[g.name]


def embedded_gate(g: GateSpec, n: int) -> np.ndarray:
    """Full 2**n matrix of a gate at its target slots."""
    g.validate_for(n)
    if g.name == "CNOT":
        control, target = g.targets
        idle = [linalg.identity(2)] * n
        on_zero = list(idle)
        on_zero[control] = linalg.P0
        on_one = list(idle)
        on_one[control] = linalg.P1
        on_one[target] = linalg.X
        return linalg.tensor_all(on_zero) + linalg.tensor_all(on_one)
    return linalg.embed_one(_single_qubit_matrix(g), g.targets[0], n)


def _initial_pauli(pauli: np.ndarray, qubit: int, n: int) -> np.ndarray:
    return linalg.embed_one(pauli, qubit, n)


def _frozen(m: np.ndarray) -> np.ndarray:
    m.setflags(write=False)
    return m


def _conjugated_pair(u: np.ndarray, qubit: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """dagger(u) P u for both initial Paulis of one qubit."""
    ud = linalg.dagger(u)
    qx = linalg.matmul(ud, linalg.matmul(_initial_pauli(linalg.X, qubit, n), u))
    qz = linalg.matmul(ud, linalg.matmul(_initial_pauli(linalg.Z, qubit, n), u))
    return _frozen(qx), _frozen(qz)


def init_network(n: int) -> DescriptorNetwork:
    """Fresh n-qubit network: descriptor k holds the embedded Paulis of slot k."""
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")
    descriptors = tuple(
        Descriptor(
            qubit_id=k,
            qx=_frozen(_initial_pauli(linalg.X, k, n)),
            qz=_frozen(_initial_pauli(linalg.Z, k, n)),
        )
        for k in range(n)
    )
    return DescriptorNetwork(
        n=n,
        descriptors=descriptors,
        cumulative_unitary=_frozen(linalg.identity(2**n)),
        gate_log=(),
    )


def apply_gate(net: DescriptorNetwork, g: GateSpec) -> DescriptorNetwork:
    """Apply a gate, rewriting only the targeted qubits' descriptors.

    The cumulative unitary picks up the embedded gate on the left; each
    targeted descriptor is recomputed from scratch as dagger(U) P U against
    its initial Pauli.  Non-targets keep their stored arrays, object
    identity included.
    """
    g.validate_for(net.n)
    gate_matrix = embedded_gate(g, net.n)
    unitary = _frozen(linalg.matmul(gate_matrix, net.cumulative_unitary))
    updated = dict.fromkeys(g.targets)
    for k in g.targets:
        qx, qz = _conjugated_pair(unitary, k, net.n)
        updated[k] = Descriptor(qubit_id=k, qx=qx, qz=qz)
    descriptors = tuple(updated.get(k, d) for k, d in enumerate(net.descriptors))
    return DescriptorNetwork(
        n=net.n,
        descriptors=descriptors,
        cumulative_unitary=unitary,
        gate_log=net.gate_log + (g,),
    )


def apply_circuit(net: DescriptorNetwork, gates: Iterable[GateSpec]) -> DescriptorNetwork:
    """Fold :func:`apply_gate` over a gate sequence."""
    for g in gates:
        net = apply_gate(net, g)
    return net


def _check_outcome(net: DescriptorNetwork, o) -> OutcomeSpec:
    qubit, outcome = o
    if not 0 <= qubit < net.n:
        raise ValueError(f"qubit {qubit} out of range for n={net.n}")
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome}")
    return OutcomeSpec(int(qubit), int(outcome))


def _projector(net: DescriptorNetwork, o: OutcomeSpec) -> np.ndarray:
    sign = 1.0 if o.outcome == 0 else -1.0
    return (np.eye(net.dim, dtype=complex) + sign * net.descriptors[o.qubit].qz) / 2.0


def branch_measure(net: DescriptorNetwork, o) -> float:
    """Measure of the history where qubit's z-readout shows `outcome`.

    Reads <0...0| (I + (-1)**outcome qz) / 2 |0...0>, i.e. the (0, 0) entry
    of the outcome projector.  Measures of the two outcomes of any qubit
    sum to 1.
    """
    o = _check_outcome(net, o)
    sign = 1.0 if o.outcome == 0 else -1.0
    value = (1.0 + sign * net.descriptors[o.qubit].qz[0, 0]) / 2.0
    return float(value.real)


def joint_measure(net: DescriptorNetwork, outcomes) -> float:
    """Measure of a joint outcome record on distinct qubits.

    The outcome projectors commute (they live on different qubits), so the
    product order is irrelevant; this is asserted by evaluating the chain in
    both orders and comparing within the default tolerance.
    """
    specs = [_check_outcome(net, o) for o in outcomes]
    if len({s.qubit for s in specs}) != len(specs):
        raise ValueError(f"joint outcome qubits must be distinct, got {[s.qubit for s in specs]}")
    if not specs:
        return 1.0
    projectors = [_projector(net, s) for s in specs]

    def chain(ps) -> complex:
        v = np.zeros(net.dim, dtype=complex)
        v[0] = 1.0
        for p in reversed(ps):
            v = p @ v
        return v[0]

    forward = chain(projectors)
    backward = chain(projectors[::-1])
    if abs(forward - backward) > DEFAULT_TOL:
        raise RuntimeError(
            f"projector ordering changed a joint measure by {abs(forward - backward):.3e}; "
            "cross-qubit commutation is broken"
        )
    return float(forward.real)


def conditional_measure(net: DescriptorNetwork, given, then) -> float:
    """Share of the `given` branch that also carries the `then` record."""
    given = _check_outcome(net, given)
    then = _check_outcome(net, then)
    if given.qubit == then.qubit:
        raise ValueError(f"conditional outcomes must be on distinct qubits, got {given.qubit}")
    base = branch_measure(net, given)
    if base <= ZERO_MEASURE:
        raise ValueError(
            f"conditioning on a zero-measure branch (qubit {given.qubit}, "
            f"outcome {given.outcome}, measure {base:.3e})"
        )
    return joint_measure(net, [given, then]) / base


def recomputed_components(net: DescriptorNetwork, qubit: int) -> tuple[np.ndarray, np.ndarray]:
    """Audit route: (qx, qz) of a qubit rebuilt from the cumulative unitary."""
    if not 0 <= qubit < net.n:
        raise ValueError(f"qubit {qubit} out of range for n={net.n}")
    return _conjugated_pair(net.cumulative_unitary, qubit, net.n)


def locality_audit(net: DescriptorNetwork, watched: int, remote_ops: Iterable[GateSpec]) -> bool:
    """Check that gates avoiding `watched` leave its descriptor untouched.

    The stored matrices must come back bit-for-bit identical (exact equality,
    no tolerance: gate application never rewrites a non-target), and the
    cumulative-unitary recomputation must agree with the stored matrices
    within the default tolerance.
    """
    if not 0 <= watched < net.n:
        raise ValueError(f"qubit {watched} out of range for n={net.n}")
    remote_ops = list(remote_ops)
    for g in remote_ops:
        if watched in g.targets:
            raise ValueError(f"remote op {g.name} targets the watched qubit {watched}")
    before = net.descriptors[watched]
    evolved = apply_circuit(net, remote_ops)
    after = evolved.descriptors[watched]
    untouched = np.array_equal(before.qx, after.qx) and np.array_equal(before.qz, after.qz)
    qx_audit, qz_audit = recomputed_components(evolved, watched)
    consistent = (
        linalg.frobenius_distance(qx_audit, after.qx) <= DEFAULT_TOL
        and linalg.frobenius_distance(qz_audit, after.qz) <= DEFAULT_TOL
    )
    return untouched and consistent
