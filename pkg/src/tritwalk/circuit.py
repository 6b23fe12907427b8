"""Circuit IR: gates with valued controls on qutrit wires.

A :class:`Gate` applies a 3x3 operation to one target wire, optionally gated
on other wires each holding a specific value in {0, 1, 2} (the circled-value
controls of ternary circuit diagrams).  A :class:`Circuit` is an ordered gate
list; the list order is temporal, so the first gate acts first and the dense
unitary is the reversed matrix product.

Circuits are immutable once built.  The text format is line oriented::

    CIRCUIT width=3
    GATE rotation axis=Y01 angle=0.5 target=1
    GATE xgate x=X+1 target=3 controls=1:2,2:0
    GATE phase angle=-0.25 target=2
    GATE custom matrix=(1+0j),...,(0j) target=2

with the nine custom-matrix entries row major.  Parsing and printing round
trip losslessly (floats via repr).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .gates import AXES, X_KINDS, is_unitary, phase_matrix, rotation_matrix, x_matrix

__all__ = [
    "Gate",
    "Circuit",
    "GateCounts",
    "rotation",
    "xgate",
    "phase",
    "custom",
    "gate_matrix",
    "embed_gate",
    "circuit_unitary",
    "apply_state",
    "inverse",
    "count_gates",
    "serialize_circuit",
    "parse_circuit",
    "shift_gates",
    "add_control",
]

KINDS = ("rotation", "xgate", "phase", "custom")


@dataclass(frozen=True, eq=False)
class Gate:
    """One gate: kind, per-kind payload, 1-based target wire, valued controls."""

    kind: str
    target: int
    axis: str | None = None
    angle: float | None = None
    xkind: str | None = None
    matrix: np.ndarray | None = None
    controls: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if not isinstance(self.target, int) or self.target < 1:
            raise ValueError(f"target must be a positive wire index, got {self.target!r}")
        if self.kind == "rotation":
            if self.axis not in AXES or self.angle is None:
                raise ValueError("rotation gate needs axis and angle")
        elif self.kind == "xgate":
            if self.xkind not in X_KINDS:
                raise ValueError(f"unknown X gate kind {self.xkind!r}")
        elif self.kind == "phase":
            if self.angle is None:
                raise ValueError("phase gate needs an angle")
        else:
            m = np.asarray(self.matrix, dtype=complex)
            if m.shape != (3, 3) or not is_unitary(m, tol=1e-8):
                raise ValueError("custom gate needs a 3x3 unitary matrix")
            object.__setattr__(self, "matrix", m)
        ctrls = tuple(sorted((int(w), int(v)) for w, v in self.controls))
        wires = [w for w, _ in ctrls]
        if len(set(wires)) != len(wires):
            raise ValueError("duplicate control wires")
        for w, v in ctrls:
            if w < 1:
                raise ValueError(f"control wire {w} out of range")
            if w == self.target:
                raise ValueError("control wire coincides with target")
            if v not in (0, 1, 2):
                raise ValueError(f"control value {v} not a qutrit level")
        object.__setattr__(self, "controls", ctrls)


def rotation(
    axis: str, angle: float, target: int, controls: Iterable[tuple[int, int]] = ()
) -> Gate:
    return Gate("rotation", target, axis=axis, angle=float(angle), controls=tuple(controls))


def xgate(kind: str, target: int, controls: Iterable[tuple[int, int]] = ()) -> Gate:
    return Gate("xgate", target, xkind=kind, controls=tuple(controls))


def phase(angle: float, target: int, controls: Iterable[tuple[int, int]] = ()) -> Gate:
    return Gate("phase", target, angle=float(angle), controls=tuple(controls))


def custom(matrix: np.ndarray, target: int, controls: Iterable[tuple[int, int]] = ()) -> Gate:
    return Gate("custom", target, matrix=matrix, controls=tuple(controls))


def gate_matrix(g: Gate) -> np.ndarray:
    """The 3x3 matrix the gate applies on its target (controls not included)."""
    if g.kind == "rotation":
        return rotation_matrix(g.axis, g.angle)
    if g.kind == "xgate":
        return x_matrix(g.xkind)
    if g.kind == "phase":
        return phase_matrix(g.angle)
    return g.matrix.copy()


@dataclass(frozen=True, eq=False)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.width, int) or self.width < 1:
            raise ValueError(f"width must be a positive integer, got {self.width!r}")
        gs = tuple(self.gates)
        for g in gs:
            wires = [g.target] + [w for w, _ in g.controls]
            if any(w > self.width for w in wires):
                raise ValueError(f"gate wire out of range for width {self.width}")
        object.__setattr__(self, "gates", gs)

    def __len__(self) -> int:
        return len(self.gates)


@dataclass(frozen=True)
class GateCounts:
    one_qutrit_rotation: int = 0
    one_qutrit_other: int = 0
    two_qutrit_controlled: int = 0
    multi_controlled: int = 0

    @property
    def total(self) -> int:
        return (
            self.one_qutrit_rotation
            + self.one_qutrit_other
            + self.two_qutrit_controlled
            + self.multi_controlled
        )


def _apply_gate(t: np.ndarray, g: Gate, width: int, offset: int = 0, conj: bool = False) -> np.ndarray:
    """Fold one gate into a tensor whose axes offset..offset+width-1 are wires.

    Extra axes (batch columns, the second index set of a density matrix) pass
    through untouched.  With conj=True the conjugated matrix is applied, which
    together with offset=width is the right-side factor of rho -> G rho G†.
    """
    m = gate_matrix(g)
    if conj:
        m = m.conj()
    ax = offset + g.target - 1
    out = np.tensordot(m, t, axes=([1], [ax]))
    out = np.moveaxis(out, 0, ax)
    if g.controls:
        mask = np.ones((1,) * t.ndim, dtype=bool)
        for w, v in g.controls:
            shape = [1] * t.ndim
            shape[offset + w - 1] = 3
            mask = mask & (np.arange(3) == v).reshape(shape)
        out = np.where(mask, out, t)
    return out


def embed_gate(width: int, g: Gate) -> np.ndarray:
    """Dense 3^width x 3^width unitary of one (possibly controlled) gate.

    Wire 1 is the most significant base-3 digit of the basis index.
    """
    Circuit(width, (g,))  # reuse wire-range validation
    dim = 3**width
    t = np.eye(dim, dtype=complex).reshape((3,) * width + (dim,))
    return _apply_gate(t, g, width).reshape(dim, dim)


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Dense unitary of the whole circuit, first-listed gate applied first."""
    dim = 3**c.width
    t = np.eye(dim, dtype=complex).reshape((3,) * c.width + (dim,))
    for g in c.gates:
        t = _apply_gate(t, g, c.width)
    return t.reshape(dim, dim)


def apply_state(c: Circuit, psi: np.ndarray) -> np.ndarray:
    """Apply the circuit to a state vector without forming the unitary."""
    psi = np.asarray(psi, dtype=complex)
    dim = 3**c.width
    if psi.shape != (dim,):
        raise ValueError(f"state dimension {psi.shape} does not match width {c.width}")
    t = psi.reshape((3,) * c.width)
    for g in c.gates:
        t = _apply_gate(t, g, c.width)
    return t.reshape(dim)


def _invert_gate(g: Gate) -> Gate:
    if g.kind == "rotation":
        return Gate("rotation", g.target, axis=g.axis, angle=-g.angle, controls=g.controls)
    if g.kind == "phase":
        return Gate("phase", g.target, angle=-g.angle, controls=g.controls)
    if g.kind == "xgate":
        flip = {"X+1": "X+2", "X+2": "X+1"}
        return Gate("xgate", g.target, xkind=flip.get(g.xkind, g.xkind), controls=g.controls)
    return Gate("custom", g.target, matrix=g.matrix.conj().T, controls=g.controls)


def inverse(c: Circuit) -> Circuit:
    return Circuit(c.width, tuple(_invert_gate(g) for g in reversed(c.gates)))


def count_gates(c: Circuit) -> GateCounts:
    rot = other = two = multi = 0
    for g in c.gates:
        k = len(g.controls)
        if k == 0:
            if g.kind == "rotation":
                rot += 1
            else:
                other += 1
        elif k == 1:
            two += 1
        else:
            multi += 1
    return GateCounts(rot, other, two, multi)


def shift_gates(gates: Iterable[Gate], offset: int) -> list[Gate]:
    """The same gates with every wire index moved by ``offset``."""
    out = []
    for g in gates:
        ctrls = tuple((w + offset, v) for w, v in g.controls)
        out.append(
            Gate(g.kind, g.target + offset, axis=g.axis, angle=g.angle,
                 xkind=g.xkind, matrix=g.matrix, controls=ctrls)
        )
    return out


def add_control(gates: Iterable[Gate], wire: int, value: int) -> list[Gate]:
    """The same gates with one more control appended to each."""
    out = []
    for g in gates:
        ctrls = g.controls + ((wire, value),)
        out.append(
            Gate(g.kind, g.target, axis=g.axis, angle=g.angle,
                 xkind=g.xkind, matrix=g.matrix, controls=ctrls)
        )
    return out


def _format_gate(g: Gate) -> str:
    parts = ["GATE", g.kind]
    if g.kind == "rotation":
        parts.append(f"axis={g.axis}")
        parts.append(f"angle={g.angle!r}")
    elif g.kind == "xgate":
        parts.append(f"x={g.xkind}")
    elif g.kind == "phase":
        parts.append(f"angle={g.angle!r}")
    else:
        entries = ",".join(repr(complex(v)) for v in g.matrix.reshape(9))
        parts.append(f"matrix={entries}")
    parts.append(f"target={g.target}")
    if g.controls:
        parts.append("controls=" + ",".join(f"{w}:{v}" for w, v in g.controls))
    return " ".join(parts)


def serialize_circuit(c: Circuit) -> str:
    lines = [f"CIRCUIT width={c.width}"]
    lines.extend(_format_gate(g) for g in c.gates)
    return "\n".join(lines) + "\n"


def _parse_fields(tokens: Sequence[str], line: str) -> dict[str, str]:
    fields: dict[str, str] = {}
    for tok in tokens:
        if "=" not in tok:
            raise ValueError(f"malformed token {tok!r} in line {line!r}")
        key, val = tok.split("=", 1)
        if key in fields:
            raise ValueError(f"duplicate field {key!r} in line {line!r}")
        fields[key] = val
    return fields


def _parse_gate(line: str) -> Gate:
    tokens = line.split()
    kind = tokens[1]
    fields = _parse_fields(tokens[2:], line)
    target = int(fields.pop("target"))
    controls: tuple[tuple[int, int], ...] = ()
    if "controls" in fields:
        controls = tuple(
            (int(w), int(v))
            for w, v in (item.split(":") for item in fields.pop("controls").split(","))
        )
    if kind == "rotation":
        g = rotation(fields.pop("axis"), float(fields.pop("angle")), target, controls)
    elif kind == "xgate":
        g = xgate(fields.pop("x"), target, controls)
    elif kind == "phase":
        g = phase(float(fields.pop("angle")), target, controls)
    elif kind == "custom":
        entries = [complex(v) for v in fields.pop("matrix").split(",")]
        if len(entries) != 9:
            raise ValueError(f"custom matrix needs 9 entries, got {len(entries)}")
        g = custom(np.array(entries).reshape(3, 3), target, controls)
    else:
        raise ValueError(f"unknown gate kind {kind!r} in line {line!r}")
    if fields:
        raise ValueError(f"unexpected fields {sorted(fields)} in line {line!r}")
    return g


def parse_circuit(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("CIRCUIT "):
        raise ValueError("circuit text must start with a CIRCUIT header line")
    header = _parse_fields(lines[0].split()[1:], lines[0])
    if set(header) != {"width"}:
        raise ValueError(f"malformed circuit header {lines[0]!r}")
    gates = []
    for ln in lines[1:]:
        if not ln.startswith("GATE "):
            raise ValueError(f"expected GATE line, got {ln!r}")
        gates.append(_parse_gate(ln))
    return Circuit(int(header["width"]), tuple(gates))
