"""Command line front end: synthesis reports, walk runs, comparisons, counts."""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import replace
from datetime import datetime, timezone

import numpy as np

from .analysis import Distribution, kl_divergence, time_average, tvd, vertex_distribution
from .blockdiag import blockdiag_synthesize
from .circuit import apply_state, circuit_unitary, count_gates
from .config import ExperimentConfig, build_initial_state, load_config
from .gates import frobenius_distance
from .noise import NoiseConfig, clamped_p1, resolve_noise, simulate_noisy_walk
from .su3 import decompose_u3
from .toffoli import lower_circuit
from .walk import CoinSpec, WalkGraph, build_layer_cycle, build_layer_dihedral

_FORMAT = "tritwalk-walk-1"


def _read_matrix(path: str) -> np.ndarray:
    """Parse a text matrix: one row per line, complex literals like 0.5+0.5j.

    Entries split on whitespace or commas, so the same tokens work here
    and in the config [coin] matrix key.
    """
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rows.append([complex(token) for token in line.replace(",", " ").split()])
            except ValueError:
                raise ValueError(f"unparseable matrix row: {line!r}") from None
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ValueError("matrix file must hold a square matrix")
    return np.array(rows)


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tritwalk-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _fmt(value: float) -> str:
    return repr(float(value))


def _apply_overrides(noise: NoiseConfig, args: argparse.Namespace) -> NoiseConfig:
    if args.seed is not None:
        noise = replace(noise, rng_seed=args.seed)
    if args.epsilon is not None:
        noise = replace(noise, epsilon_exponent=args.epsilon)
    if args.noise is not None:
        gate = args.noise in ("gate", "both")
        if args.noise in ("idle", "both"):
            idle = noise.idle_kind if noise.idle_kind != "none" else "amplitude"
        else:
            idle = "none"
        noise = replace(noise, gate_noise_enabled=gate, idle_kind=idle)
    return noise


def _vertex_labels(g: WalkGraph) -> list[str]:
    if g.kind == "dihedral":
        return [f"{s}:{r}" for s in (0, 1) for r in range(g.N)]
    return [str(r) for r in range(g.N)]


def _run_walk(cfg: ExperimentConfig, noise: NoiseConfig) -> tuple[list[Distribution], NoiseConfig]:
    g = cfg.graph
    if g.kind == "dihedral":
        layer = build_layer_dihedral(g.N, cfg.coin)
    else:
        layer = build_layer_cycle(g.N, cfg.coin, g.liveliness)
    resolved = resolve_noise(noise)
    psi = build_initial_state(cfg)
    dists = [vertex_distribution(psi, g)]
    if not resolved.gate_noise_enabled and resolved.idle_kind == "none":
        for _ in range(cfg.steps):
            psi = apply_state(layer, psi)
            dists.append(vertex_distribution(psi, g))
    else:
        rho = np.outer(psi, psi.conj())
        for rho_t in simulate_noisy_walk(layer, g.circuit_width, rho, cfg.steps, resolved):
            dists.append(vertex_distribution(rho_t, g))
    return dists, resolved


def _walk_csv(cfg: ExperimentConfig, noise: NoiseConfig, requested_epsilon: int | None) -> str:
    dists, resolved = _run_walk(cfg, noise)
    avg = time_average(dists if cfg.average_includes_t0 else dists[1:])
    g = cfg.graph
    labels = _vertex_labels(g)
    gate_on = resolved.gate_noise_enabled
    idle_on = resolved.idle_kind != "none"
    lines = [
        f"# format={_FORMAT}",
        f"# timestamp={datetime.now(timezone.utc).isoformat()}",
        f"# graph={g.kind}",
        f"# vertices={g.N}",
        f"# liveliness={'' if g.liveliness is None else g.liveliness}",
        f"# coin_kind={cfg.coin.kind}",
        f"# coin_theta={'' if cfg.coin.theta is None else _fmt(cfg.coin.theta)}",
        f"# initial_vertex={labels[_initial_vertex_index(cfg)]}",
        f"# steps={cfg.steps}",
        f"# average_includes_t0={str(cfg.average_includes_t0).lower()}",
        f"# gate_noise={str(gate_on).lower()}",
        f"# idle_kind={resolved.idle_kind}",
        f"# idle_scope={resolved.idle_scope}",
        f"# t_idle={_fmt(resolved.t_idle)}",
        f"# epsilon={'' if requested_epsilon is None else requested_epsilon}",
        f"# seed={'' if noise.rng_seed is None else noise.rng_seed}",
        f"# p1={_fmt(resolved.p1) if gate_on else ''}",
        f"# p1_eff_k1={_fmt(clamped_p1(resolved.p1, 1)) if gate_on else ''}",
        f"# p1_eff_k2={_fmt(clamped_p1(resolved.p1, 2)) if gate_on else ''}",
        f"# r1={_fmt(resolved.r1) if idle_on else ''}",
        f"# r2={_fmt(resolved.r2) if resolved.idle_kind == 'amplitude' else ''}",
        "t,vertex,probability,leaked",
    ]
    for t, dist in enumerate(dists):
        leak = _fmt(dist.leaked)
        for label, p in zip(labels, dist.probs):
            lines.append(f"{t},{label},{_fmt(p)},{leak}")
    leak = _fmt(avg.avg.leaked)
    for label, p in zip(labels, avg.avg.probs):
        lines.append(f"avg,{label},{_fmt(p)},{leak}")
    return "\n".join(lines) + "\n"


def _initial_vertex_index(cfg: ExperimentConfig) -> int:
    if cfg.graph.kind == "dihedral":
        s, r = cfg.initial_vertex
        return s * cfg.graph.N + r
    return cfg.initial_vertex


def _parse_walk_csv(path: str) -> tuple[dict, Distribution]:
    meta: dict[str, str] = {}
    labels: list[str] = []
    probs: list[float] = []
    leaked = 0.0
    saw_header = False
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("# "):
                key, _, value = line[2:].partition("=")
                meta[key] = value
                continue
            if not saw_header:
                if line != "t,vertex,probability,leaked":
                    raise ValueError(f"{path}: unexpected header {line!r}")
                saw_header = True
                continue
            t, label, prob, leak = line.split(",")
            if t != "avg":
                continue
            labels.append(label)
            probs.append(float(prob))
            leaked = float(leak)
    if meta.get("format") != _FORMAT:
        raise ValueError(f"{path}: not a walk CSV")
    if not probs:
        raise ValueError(f"{path}: no time-averaged rows")
    return meta, Distribution(np.array(probs), leaked)


def _cmd_synth_su3(args: argparse.Namespace) -> int:
    try:
        u = _read_matrix(args.matrix)
        d = decompose_u3(u)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    from .su3 import reconstruct_u3

    print(f"alpha {_fmt(d.alpha)}")
    for name in ("theta1", "phi1", "psi1", "theta2", "psi2", "theta3", "phi3", "psi3"):
        print(f"{name} {_fmt(getattr(d.su3, name))}")
    print(f"residual {_fmt(frobenius_distance(reconstruct_u3(d), u))}")
    return 0


def _cmd_synth_blockdiag(args: argparse.Namespace) -> int:
    try:
        u = _read_matrix(args.matrix)
        circuit = blockdiag_synthesize(u)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    counts = count_gates(circuit)
    print(f"width {circuit.width}")
    print(f"rotations {counts.one_qutrit_rotation}")
    print(f"other_single {counts.one_qutrit_other}")
    print(f"two_qutrit {counts.two_qutrit_controlled}")
    print(f"residual {_fmt(frobenius_distance(circuit_unitary(circuit), u))}")
    return 0


def _cmd_walk(args: argparse.Namespace) -> int:
    try:
        cfg = load_config(args.config)
        noise = _apply_overrides(cfg.noise, args)
        requested = args.epsilon if args.epsilon is not None else noise.epsilon_exponent
        text = _walk_csv(cfg, noise, requested)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = os.path.join(args.out, "walk.csv")
    os.makedirs(args.out, exist_ok=True)
    _write_atomic(out, text)
    print(out)
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    try:
        ideal_meta, ideal = _parse_walk_csv(args.ideal)
        rows = []
        for path in args.noisy:
            meta, dist = _parse_walk_csv(path)
            for key in ("graph", "vertices", "liveliness"):
                if meta.get(key) != ideal_meta.get(key):
                    raise ValueError(
                        f"{path}: {key}={meta.get(key)!r} does not match ideal {ideal_meta.get(key)!r}"
                    )
            rows.append(
                (
                    meta.get("epsilon", ""),
                    meta.get("idle_kind", ""),
                    kl_divergence(ideal, dist, floor=args.floor),
                    tvd(ideal, dist),
                )
            )
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    lines = ["epsilon,idle_kind,kl_bits,tvd"]
    for eps, idle, kl, dist in rows:
        lines.append(f"{eps},{idle},{_fmt(kl)},{_fmt(dist)}")
    text = "\n".join(lines) + "\n"
    if args.out is not None:
        os.makedirs(args.out, exist_ok=True)
        out = os.path.join(args.out, "compare.csv")
        _write_atomic(out, text)
        print(out)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_count(args: argparse.Namespace) -> int:
    if args.n_min < 1 or args.n_max > 6 or args.n_min > args.n_max:
        print("error: n range must satisfy 1 <= n-min <= n-max <= 6", file=sys.stderr)
        return 1
    coin = CoinSpec("xclass", theta=np.pi)
    lines = ["graph,n,vertices,rotations,other_single,two_qutrit,total"]
    two_qutrit: list[int] = []
    for n in range(args.n_min, args.n_max + 1):
        vertices = 3**n
        if args.graph == "dihedral":
            layer = build_layer_dihedral(vertices, coin)
        else:
            layer = build_layer_cycle(vertices, coin, args.liveliness)
        counts = count_gates(lower_circuit(layer))
        assert counts.multi_controlled == 0
        two_qutrit.append(counts.two_qutrit_controlled)
        lines.append(
            f"{args.graph},{n},{vertices},{counts.one_qutrit_rotation},"
            f"{counts.one_qutrit_other},{counts.two_qutrit_controlled},{counts.total}"
        )
    if len(two_qutrit) > 1:
        ratios = [b / a for a, b in zip(two_qutrit, two_qutrit[1:])]
        exponent = float(np.mean([np.log(r) / np.log(3) for r in ratios]))
        lines.insert(0, f"# fitted_exponent_base3={_fmt(exponent)}")
    text = "\n".join(lines) + "\n"
    if args.out is not None:
        os.makedirs(args.out, exist_ok=True)
        out = os.path.join(args.out, "count.csv")
        _write_atomic(out, text)
        print(out)
    else:
        sys.stdout.write(text)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="tritwalk", description="Qutrit circuit synthesis and quantum walk runner."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth-su3", help="decompose a 3x3 unitary into nine rotations")
    p.add_argument("matrix", help="text file with three rows of complex entries")
    p.set_defaults(func=_cmd_synth_su3)

    p = sub.add_parser("synth-blockdiag", help="compile a block-diagonal special unitary")
    p.add_argument("matrix", help="text file with a 3^n x 3^n matrix")
    p.set_defaults(func=_cmd_synth_blockdiag)

    p = sub.add_parser("walk", help="run a walk experiment from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=".")
    p.add_argument("--noise", choices=("none", "gate", "idle", "both"), default=None)
    p.add_argument("--epsilon", type=int, default=None)
    p.set_defaults(func=_cmd_walk)

    p = sub.add_parser("compare", help="KL and TVD between an ideal run and noisy runs")
    p.add_argument("ideal")
    p.add_argument("noisy", nargs="+")
    p.add_argument("--floor", type=float, default=1e-12)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("count", help="gate counts of fully lowered walk layers")
    p.add_argument("--graph", choices=("cycle", "dihedral"), required=True)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--liveliness", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_count)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
