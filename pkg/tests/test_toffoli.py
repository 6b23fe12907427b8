import numpy as np
import pytest
from helpers import random_circuit, random_unitary

from tritwalk.circuit import (
    Circuit,
    circuit_unitary,
    count_gates,
    embed_gate,
    phase,
    rotation,
    xgate,
)
from tritwalk.gates import frobenius_distance
from tritwalk.toffoli import (
    _compensate_defect,
    compile_mc_x_target_first,
    compile_mc_x_target_last,
    lower_circuit,
    lower_controls,
    mc_phase_gates,
    p_gate_circuit,
)


def mc_phase_reference(width, theta, controls):
    dim = 3**width
    d = np.ones(dim, dtype=complex)
    active = np.ones(dim, dtype=bool)
    for w, v in controls:
        active &= (np.arange(dim) // 3 ** (width - w)) % 3 == v
    d[active] = np.exp(1j * theta)
    return np.diag(d)


def test_mc_phase_single_wire():
    for v in (0, 1, 2):
        u = circuit_unitary(Circuit(1, tuple(mc_phase_gates(0.7, ((1, v),)))))
        assert frobenius_distance(u, mc_phase_reference(1, 0.7, ((1, v),))) < 1e-12


def test_mc_phase_multiwire_patterns():
    rng = np.random.default_rng(51)
    for width in (2, 3):
        for _ in range(6):
            theta = rng.uniform(-np.pi, np.pi)
            values = rng.integers(0, 3, size=width)
            controls = tuple((w + 1, int(values[w])) for w in range(width))
            u = circuit_unitary(Circuit(width, tuple(mc_phase_gates(theta, controls))))
            assert frobenius_distance(u, mc_phase_reference(width, theta, controls)) < 1e-10


def test_mc_phase_needs_controls():
    with pytest.raises(ValueError):
        mc_phase_gates(0.5, ())


def mc_x_reference(n, a, x, target):
    controls = tuple((w, a) for w in range(1, n + 1) if w != target)
    return embed_gate(n, xgate(x, target, controls))


def test_target_last_all_kinds_small():
    for n in (2, 3):
        for a in (0, 1, 2):
            for x in ("X+1", "X+2", "X01", "X12", "X02"):
                c = compile_mc_x_target_last(n, a, x)
                assert count_gates(c).multi_controlled == 0
                got = circuit_unitary(c)
                assert frobenius_distance(got, mc_x_reference(n, a, x, n)) < 1e-9, (n, a, x)


def test_target_last_pinned_stage_counts():
    # Shift by one: two ladders; shift by two: four ladders (no extras fire).
    for n in (2, 3, 4):
        slots = 3 ** (n - 1)
        per_ladder_two = 2 * (slots - 1)
        c1 = count_gates(compile_mc_x_target_last(n, 2, "X+1"))
        assert c1.one_qutrit_rotation == 2 * slots
        assert c1.two_qutrit_controlled == 2 * per_ladder_two
        c2 = count_gates(compile_mc_x_target_last(n, 2, "X+2"))
        assert c2.one_qutrit_rotation == 4 * slots
        assert c2.two_qutrit_controlled == 4 * per_ladder_two


def test_compensation_repairs_synthetic_defect():
    # Inject a known active-pattern phase and let the checker repair it.
    n, a = 2, 2
    controls = ((1, a),)
    clean = list(compile_mc_x_target_last(n, a, "X+1").gates)
    defective = clean + mc_phase_gates(0.4, controls)
    reference = mc_x_reference(n, a, "X+1", 2)
    fixed = _compensate_defect(defective, n, controls, reference)
    assert len(fixed) > len(defective)
    assert frobenius_distance(circuit_unitary(Circuit(n, tuple(fixed))), reference) < 1e-9


def test_compensation_rejects_non_diagonal():
    n, controls = 2, ((1, 2),)
    broken = [rotation("Y01", 0.3, 2)]
    with pytest.raises(ValueError):
        _compensate_defect(broken, n, controls, mc_x_reference(n, 2, "X+1", 2))


def test_p_gate_permutation():
    c = p_gate_circuit()
    assert len(c) == 8
    u = circuit_unitary(c)
    perm = np.argmax(np.abs(u), axis=0)
    expected = np.arange(9)
    expected[[2, 7]] = [7, 2]
    expected[[5, 6]] = [6, 5]
    assert np.array_equal(perm, expected)
    assert frobenius_distance(u @ u, np.eye(9)) < 1e-12  # involution


def test_target_first_matches_reference():
    for n in (2, 3):
        for a in (0, 2):
            for x in ("X+1", "X+2"):
                c = compile_mc_x_target_first(n, a, x)
                assert count_gates(c).multi_controlled == 0
                got = circuit_unitary(c)
                assert frobenius_distance(got, mc_x_reference(n, a, x, 1)) < 1e-9, (n, a, x)


def test_target_first_rejects_middle_value():
    with pytest.raises(ValueError):
        compile_mc_x_target_first(3, 1, "X+1")
    with pytest.raises(ValueError):
        compile_mc_x_target_first(3, 2, "X01")


def test_lower_controls_values():
    c = Circuit(
        3,
        (
            xgate("X+1", 3, controls=((1, 0), (2, 1))),
            rotation("Y01", 0.4, 2, controls=((1, 2),)),
        ),
    )
    low = lower_controls(c)
    assert all(v == 2 for g in low.gates for _, v in g.controls)
    assert frobenius_distance(circuit_unitary(low), circuit_unitary(c)) < 1e-10
    # Two borders per rewritten control.
    assert len(low) == len(c) + 4


def test_lower_circuit_random_mixed():
    rng = np.random.default_rng(61)
    for _ in range(8):
        c = random_circuit(rng, 3, 6)
        low = lower_circuit(c)
        assert count_gates(low).multi_controlled == 0
        assert frobenius_distance(circuit_unitary(low), circuit_unitary(c)) < 1e-9


def test_lower_circuit_custom_with_phase():
    # A controlled custom unitary with non-unit determinant exercises the
    # controlled-phase route.
    rng = np.random.default_rng(67)
    from tritwalk.circuit import custom

    u = random_unitary(rng)
    g = custom(u, 3, controls=((1, 2), (2, 0)))
    c = Circuit(3, (g,))
    low = lower_circuit(c)
    assert count_gates(low).multi_controlled == 0
    assert frobenius_distance(circuit_unitary(low), circuit_unitary(c)) < 1e-9


def test_lower_circuit_mc_phase():
    c = Circuit(3, (phase(0.8, 3, controls=((1, 1), (2, 2))),))
    low = lower_circuit(c)
    assert count_gates(low).multi_controlled == 0
    assert frobenius_distance(circuit_unitary(low), circuit_unitary(c)) < 1e-9
