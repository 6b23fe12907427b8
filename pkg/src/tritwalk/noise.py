"""Kraus channels and density-matrix evolution of walk circuits."""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import product
from typing import Iterator

import numpy as np

from .circuit import Circuit, Gate, circuit_unitary
from .gates import x_matrix
from .toffoli import lower_circuit

IDLE_KINDS = ("none", "amplitude", "phase")
IDLE_SCOPES = ("untouched", "all")

_Z3 = np.diag(np.exp(2j * np.pi * np.arange(3) / 3))


@dataclass(frozen=True)
class KrausChannel:
    """A completely positive map given by explicit Kraus operators."""

    kind: str
    operators: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if not self.operators:
            raise ValueError("channel needs at least one Kraus operator")
        ops = tuple(np.asarray(op, dtype=complex) for op in self.operators)
        dim = ops[0].shape[0] if ops[0].ndim == 2 else 0
        arity = 0
        while 3**arity < dim:
            arity += 1
        if dim == 0 or 3**arity != dim:
            raise ValueError("Kraus operators must be square with power-of-3 size")
        for op in ops:
            if op.shape != (dim, dim):
                raise ValueError("Kraus operators must share one shape")
        object.__setattr__(self, "operators", ops)

    @property
    def arity(self) -> int:
        dim = self.operators[0].shape[0]
        count = 0
        while 3**count < dim:
            count += 1
        return count


def completeness_defect(ch: KrausChannel) -> float:
    """Frobenius norm of sum(K†K) - I; zero for a trace-preserving channel."""
    dim = ch.operators[0].shape[0]
    acc = sum(op.conj().T @ op for op in ch.operators)
    return float(np.linalg.norm(acc - np.eye(dim)))


def depolarizing_channel(k: int, p1: float) -> KrausChannel:
    """Uniform Weyl-twirl noise on k qutrits.

    The operator set is sqrt(1 - 3^2k p1) I together with sqrt(p1) W for
    every tensor product W of X+1^a Z3^b factors, the identity included.
    Complete positivity bounds p1 by 3^(-2k).
    """
    if k < 1:
        raise ValueError("channel needs at least one qutrit")
    if not 0 <= p1 <= 3.0 ** (-2 * k) + 1e-15:
        raise ValueError(f"p1={p1} outside [0, 3^-{2 * k}]")
    xp1 = x_matrix("X+1")
    factors = {
        (a, b): np.linalg.matrix_power(xp1, a) @ np.linalg.matrix_power(_Z3, b)
        for a in range(3)
        for b in range(3)
    }
    ops = [np.sqrt(max(0.0, 1 - 3 ** (2 * k) * p1)) * np.eye(3**k)]
    for choice in product(range(3), repeat=2 * k):
        weyl = np.eye(1)
        for j in range(k):
            weyl = np.kron(weyl, factors[choice[2 * j], choice[2 * j + 1]])
        ops.append(np.sqrt(p1) * weyl)
    return KrausChannel("depolarizing", tuple(ops))


def amplitude_damping_channel(r1: float, r2: float, t: float) -> KrausChannel:
    """Relaxation of |1> and |2> toward |0> at rates r1 and r2."""
    if r1 < 0 or r2 < 0 or t < 0:
        raise ValueError("rates and duration must be nonnegative")
    e1, e2 = np.exp(-r1 * t), np.exp(-r2 * t)
    k0 = np.diag([1.0, np.sqrt(e1), np.sqrt(e2)])
    k1 = np.zeros((3, 3))
    k1[0, 1] = np.sqrt(1 - e1)
    k2 = np.zeros((3, 3))
    k2[0, 2] = np.sqrt(1 - e2)
    return KrausChannel("amplitude", (k0, k1, k2))


def phase_damping_channel(r1: float, t: float) -> KrausChannel:
    """Dephasing that mixes in a Z3 kick; diagonal states are fixed points."""
    if r1 < 0 or t < 0:
        raise ValueError("rate and duration must be nonnegative")
    e1 = np.exp(-r1 * t)
    return KrausChannel("phase", (np.sqrt(e1) * np.eye(3), np.sqrt(1 - e1) * _Z3))


@dataclass(frozen=True)
class NoiseConfig:
    """Which noise processes run and with what strength.

    When epsilon_exponent is set, p1/r1/r2 are drawn uniformly from
    (0, 10^-epsilon) with rng_seed; otherwise they must be given
    explicitly for whichever processes are enabled.
    """

    gate_noise_enabled: bool = False
    p1: float | None = None
    idle_kind: str = "none"
    r1: float | None = None
    r2: float | None = None
    t_idle: float = 1.0
    idle_scope: str = "untouched"
    epsilon_exponent: int | None = None
    rng_seed: int | None = None

    def __post_init__(self) -> None:
        if self.idle_kind not in IDLE_KINDS:
            raise ValueError(f"unknown idle kind {self.idle_kind!r}")
        if self.idle_scope not in IDLE_SCOPES:
            raise ValueError(f"unknown idle scope {self.idle_scope!r}")
        if self.t_idle < 0:
            raise ValueError("t_idle must be nonnegative")
        for name in ("p1", "r1", "r2"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.epsilon_exponent is not None and self.rng_seed is None:
            raise ValueError("parameter draws need rng_seed")


def resolve_noise(config: NoiseConfig) -> NoiseConfig:
    """Fill in drawn parameters, or validate that explicit ones suffice."""
    if config.epsilon_exponent is not None:
        rng = np.random.default_rng(config.rng_seed)
        scale = 10.0 ** (-config.epsilon_exponent)
        p1, r1, r2 = rng.uniform(0.0, 1.0, 3) * scale
        return replace(
            config, p1=float(p1), r1=float(r1), r2=float(r2), epsilon_exponent=None
        )
    if config.gate_noise_enabled and config.p1 is None:
        raise ValueError("gate noise needs p1 or epsilon_exponent")
    if config.idle_kind == "amplitude" and (config.r1 is None or config.r2 is None):
        raise ValueError("amplitude damping needs r1 and r2")
    if config.idle_kind == "phase" and config.r1 is None:
        raise ValueError("phase damping needs r1")
    return config


def clamped_p1(p1: float, k: int) -> float:
    """Largest CP-admissible Weyl weight not exceeding the requested one."""
    return min(p1, 3.0 ** (-2 * k))


def _apply_operator(
    t: np.ndarray,
    m: np.ndarray,
    wires: tuple[int, ...],
    width: int,
    offset: int,
    conj: bool,
) -> np.ndarray:
    k = len(wires)
    op = (m.conj() if conj else m).reshape((3,) * (2 * k))
    axes = [offset + w - 1 for w in wires]
    t = np.tensordot(op, t, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(t, list(range(k)), axes)


def _apply_channel_tensor(
    t: np.ndarray, ch: KrausChannel, wires: tuple[int, ...], width: int
) -> np.ndarray:
    out = None
    for op in ch.operators:
        term = _apply_operator(t, op, wires, width, 0, conj=False)
        term = _apply_operator(term, op, wires, width, width, conj=True)
        out = term if out is None else out + term
    return out


def apply_channel(rho: np.ndarray, ch: KrausChannel, wires: tuple[int, ...]) -> np.ndarray:
    """Kraus-sum application of ch to the given wires of a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    dim = rho.shape[0]
    width = 0
    while 3**width < dim:
        width += 1
    if 3**width != dim:
        raise ValueError("density dimension must be a power of 3")
    wires = tuple(wires)
    if len(set(wires)) != len(wires):
        raise ValueError("wires must be distinct")
    if len(wires) != ch.arity:
        raise ValueError("channel arity does not match wire count")
    for w in wires:
        if not 1 <= w <= width:
            raise ValueError(f"wire {w} outside register")
    t = rho.reshape((3,) * (2 * width))
    return _apply_channel_tensor(t, ch, wires, width).reshape(dim, dim)


def _twirl_depolarizing(
    t: np.ndarray, wires: tuple[int, ...], width: int, p1: float
) -> np.ndarray:
    # Same map as the explicit Weyl sum: mix toward I/3^k on the wires.
    k = len(wires)
    lam = 3 ** (2 * k) * clamped_p1(p1, k)
    if lam == 0:
        return t
    ket = [w - 1 for w in wires]
    bra = [width + w - 1 for w in wires]
    front = np.moveaxis(t, ket + bra, range(2 * k))
    rest_shape = front.shape[2 * k :]
    traced = np.trace(front.reshape(3**k, 3**k, -1))
    repl = np.multiply.outer(np.eye(3**k) / 3**k, traced.reshape(rest_shape))
    repl = repl.reshape((3,) * (2 * k) + rest_shape)
    repl = np.moveaxis(repl, range(2 * k), ket + bra)
    return (1 - lam) * t + lam * repl


def _support(g: Gate) -> tuple[int, ...]:
    return (g.target,) + tuple(w for w, _ in g.controls)


# The noisy path works on the density as a (9,)*width tensor whose axis j
# combines ket and bra trit j, so one gate plus its depolarizing twirl is
# a single local superoperator contraction.

_PAIR_ID = np.eye(3).reshape(9)


def _support_unitary(g: Gate, support: tuple[int, ...]) -> np.ndarray:
    from .circuit import gate_matrix

    u = gate_matrix(g)
    if len(support) == 1:
        return u
    ((cw, cv),) = g.controls
    fire = np.zeros((3, 3))
    fire[cv, cv] = 1
    rest = np.eye(3) - fire
    if support[0] == cw:
        return np.kron(fire, u) + np.kron(rest, np.eye(3))
    return np.kron(u, fire) + np.kron(np.eye(3), rest)


def _conj_superop(u: np.ndarray, k: int) -> np.ndarray:
    m = np.kron(u, u.conj())
    if k == 2:
        # kron orders indices (kets, bras); regroup per wire pairs
        m = m.reshape((3,) * 8).transpose(0, 2, 1, 3, 4, 6, 5, 7).reshape(81, 81)
    return m


def _twirl_superop(k: int, p1: float) -> np.ndarray:
    lam = 3 ** (2 * k) * clamped_p1(p1, k)
    ident = _PAIR_ID
    for _ in range(k - 1):
        ident = np.kron(ident, _PAIR_ID)
    return (1 - lam) * np.eye(9**k) + (lam / 3**k) * np.outer(ident, ident)


def _channel_superop(ch: KrausChannel) -> np.ndarray:
    return sum(np.kron(op, op.conj()) for op in ch.operators)


def _promote_superop(m: np.ndarray, axes: tuple[int, ...], to: tuple[int, ...]) -> np.ndarray:
    if axes == to:
        return m
    return np.kron(m, np.eye(9)) if axes[0] == to[0] else np.kron(np.eye(9), m)


def _apply_superop(t: np.ndarray, m: np.ndarray, axes: tuple[int, ...]) -> np.ndarray:
    k = len(axes)
    op = m.reshape((9,) * (2 * k))
    t = np.tensordot(op, t, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(t, list(range(k)), axes)


def _interleave(rho: np.ndarray, width: int) -> np.ndarray:
    perm = [x for i in range(width) for x in (i, width + i)]
    return rho.reshape((3,) * (2 * width)).transpose(perm).reshape((9,) * width)


def _deinterleave(t: np.ndarray, width: int) -> np.ndarray:
    perm = [x for i in range(width) for x in (i, width + i)]
    inverse = np.argsort(perm)
    dim = 3**width
    return t.reshape((3,) * (2 * width)).transpose(inverse).reshape(dim, dim)


def simulate_noisy_walk(
    layer: Circuit,
    width: int,
    rho0: np.ndarray,
    steps: int,
    noise: NoiseConfig,
) -> Iterator[np.ndarray]:
    """Yield the density matrix after each of `steps` walk layers.

    With gate noise enabled the layer is lowered to elementary gates and
    a depolarizing channel of matching arity follows every gate; without
    it the layer acts as one dense unitary. Idle damping is applied once
    per step, after the layer, to untouched wires or to all of them.
    """
    if layer.width != width:
        raise ValueError("layer width does not match register width")
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    dim = 3**width
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (dim, dim):
        raise ValueError("initial density has the wrong shape")
    if np.linalg.norm(rho0 - rho0.conj().T) > 1e-10:
        raise ValueError("initial density must be Hermitian")
    if abs(np.trace(rho0) - 1) > 1e-9:
        raise ValueError("initial density must have unit trace")

    cfg = resolve_noise(noise)
    circuit = lower_circuit(layer) if cfg.gate_noise_enabled else layer

    gate_ops: list[tuple[tuple[int, ...], np.ndarray]] = []
    if cfg.gate_noise_enabled:
        for g in circuit.gates:
            support = tuple(sorted(_support(g)))
            k = len(support)
            if k > 2:
                raise ValueError("lowered circuit still holds a multi-controlled gate")
            m = _twirl_superop(k, cfg.p1) @ _conj_superop(_support_unitary(g, support), k)
            axes = tuple(w - 1 for w in support)
            # Fuse runs whose supports share a wire pair into one contraction;
            # exact, since each entry is already the gate's full noisy map.
            if gate_ops:
                prev_axes, prev = gate_ops[-1]
                union = tuple(sorted(set(prev_axes) | set(axes)))
                if len(union) <= 2:
                    gate_ops[-1] = (
                        union,
                        _promote_superop(m, axes, union) @ _promote_superop(prev, prev_axes, union),
                    )
                    continue
            gate_ops.append((axes, m))
        dense = None
    else:
        dense = circuit_unitary(circuit)

    if cfg.idle_kind == "amplitude":
        idle = amplitude_damping_channel(cfg.r1, cfg.r2, cfg.t_idle)
    elif cfg.idle_kind == "phase":
        idle = phase_damping_channel(cfg.r1, cfg.t_idle)
    else:
        idle = None
    if cfg.idle_scope == "all":
        idle_wires = tuple(range(1, width + 1))
    else:
        touched = {w for g in circuit.gates for w in _support(g)}
        idle_wires = tuple(w for w in range(1, width + 1) if w not in touched)
    idle_op = None if idle is None else _channel_superop(idle)

    t = _interleave(rho0, width)
    for _ in range(steps):
        if dense is not None:
            rho = dense @ _deinterleave(t, width) @ dense.conj().T
            t = _interleave(rho, width)
        else:
            for axes, m in gate_ops:
                t = _apply_superop(t, m, axes)
        if idle_op is not None:
            for w in idle_wires:
                t = _apply_superop(t, idle_op, (w - 1,))
        yield _deinterleave(t, width)
