"""Batch front end: run experiments, verify the build, dump programs.

Subcommands
-----------
entropy   entropy-growth curves as CSV (step,variant,entropy_bits)
hyper     hypersensitivity frontier as CSV (delta_s_bits,i_min_bits,provenance)
verify    run the invariant checks and print a pass/fail table
compile   dump the gate sequences and the canned pulse programs

Every output embeds the fully resolved configuration in '#' header
lines, floats carry 17 significant digits, and lines end with LF, so a
rerun with the same arguments is byte-identical.

Exit codes: 0 success, 1 verification failure, 2 bad arguments,
3 physics violation during a run, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from itertools import product

import numpy as np

from . import baker, chaos, lindblad, nmr, qstate
from .chaos import ExperimentConfig
from .lindblad import EvolutionEngine, NoiseModel, PhysicsError


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _config_header(cfg: ExperimentConfig, preset: str, map_choice: str) -> str:
    fields = [
        f"preset={preset}",
        f"map={map_choice}",
        f"hamiltonian={cfg.hamiltonian}",
        f"convention={cfg.convention}",
        f"steps={cfg.steps}",
        f"seed={cfg.seed}",
        f"inv_gamma_h={_fmt(cfg.inv_gamma_h)}",
        f"inv_gamma_c1={_fmt(cfg.inv_gamma_c1)}",
        f"inv_gamma_c2={_fmt(cfg.inv_gamma_c2)}",
    ]
    return "# " + " ".join(fields)


def emit_plot_data(column_names, rows, preset: str) -> str:
    """Whitespace-separated columns with a header naming them and the preset."""
    rows = list(rows)
    if not rows:
        raise ValueError("refusing to emit an empty series")
    lines = [f"# preset={preset} columns: " + " ".join(column_names)]
    for row in rows:
        lines.append(" ".join(_fmt(float(x)) for x in row))
    return "\n".join(lines) + "\n"


def parse_plot_data(text: str):
    """Inverse of :func:`emit_plot_data`: (column_names, rows, preset)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise ValueError("missing plot-data header")
    header = lines[0]
    if "columns:" not in header or "preset=" not in header:
        raise ValueError(f"malformed plot-data header: {header!r}")
    preset = header.split("preset=")[1].split()[0]
    names = header.split("columns:")[1].split()
    rows = [tuple(float(x) for x in ln.split()) for ln in lines[1:]]
    return names, rows, preset


# ---------------------------------------------------------------------------
# invariant checks for the `verify` subcommand
# ---------------------------------------------------------------------------

def standard_checks() -> list[nmr.VerifyReport]:
    """Pin down every module-level identity at its contract tolerance."""
    checks: list[nmr.VerifyReport] = []

    def add(name, distance, tol):
        checks.append(nmr.VerifyReport(name, float(distance), tol, distance < tol))

    ref = nmr.HamiltonianModel().compiler_reference()
    measured = nmr.HamiltonianModel(variant="simplified")

    # gate layer
    t_gates = baker.gate_sequence_unitary(baker.baker_gate_sequence(), 3)
    add("baker gate product vs closed form",
        qstate.phase_invariant_distance(t_gates, baker.baker_unitary(3)), 1e-10)
    t_full = baker.baker_unitary(3)
    t_simple = baker.simplified_baker_unitary()
    worst_full = worst_simple = 0.0
    for bits in product([0, 1], repeat=3):
        worst_full = max(worst_full, 1 - qstate.state_fidelity(
            baker.shift_image_state(bits, "full"),
            t_full @ baker.shift_domain_state(bits, "full")))
        worst_simple = max(worst_simple, 1 - qstate.state_fidelity(
            baker.shift_image_state(bits, "simplified"),
            t_simple @ baker.shift_domain_state(bits, "simplified")))
    add("shift property, full map (1 - fidelity)", worst_full, 1e-10)
    add("shift property, simplified map (1 - fidelity)", worst_simple, 1e-10)

    # pulse layer primitives
    worst = max(
        qstate.phase_invariant_distance(
            nmr.sequence_unitary(nmr.z_rotation_pulses("C1", 0.9, v), ref),
            nmr.z_rotation_unitary("C1", 0.9))
        for v in (1, 2, 3, 4))
    add("z-rotation pulse variants", worst, 1e-12)
    worst = max(
        qstate.phase_invariant_distance(
            nmr.sequence_unitary(nmr.hadamard_pulses("H", v), ref),
            nmr.hadamard_unitary("H"))
        for v in (1, 2))
    add("hadamard pulse variants", worst, 1e-12)
    add("phase gate C1-H",
        qstate.phase_invariant_distance(
            nmr.sequence_unitary(nmr.phase_gate_pulses(("C1", "H"), np.pi / 2, ref), ref),
            nmr.phase_gate_unitary(("C1", "H"), -np.pi / 2)), 1e-8)
    add("phase gate C1-C2 (offset corrected)",
        qstate.phase_invariant_distance(
            nmr.sequence_unitary(nmr.phase_gate_pulses(("C1", "C2"), np.pi / 2, ref), ref),
            nmr.phase_gate_unitary(("C1", "C2"), -np.pi / 2)), 1e-8)
    add("swap C1-H from three CNOTs",
        qstate.phase_invariant_distance(
            nmr.sequence_unitary(nmr.swap_pulses(("C1", "H"), ref), ref),
            nmr.swap_unitary(("C1", "H"))), 1e-8)
    swap_seq = nmr.swap_pulses(("C1", "C2"), ref)
    add("swap applied twice is identity",
        qstate.phase_invariant_distance(
            nmr.sequence_unitary(swap_seq + swap_seq, ref), np.eye(8)), 1e-7)

    # canned programs
    add("t_odd vs ideal gate product",
        nmr.verify_sequence(nmr.t_odd(ref), nmr.ideal_t_odd(), ref, 1e-8).distance, 1e-8)
    add("t_even vs ideal gate product",
        nmr.verify_sequence(nmr.t_even(ref), nmr.ideal_t_even(), ref, 1e-8).distance, 1e-8)
    add("t_regular vs offset rotation",
        nmr.verify_sequence(
            nmr.t_regular(measured), nmr.ideal_t_regular(measured), measured, 1e-10
        ).distance, 1e-10)
    add("full baker program vs ideal gate product",
        nmr.verify_sequence(
            nmr.full_baker_appendix(ref), nmr.ideal_full_baker(), ref, 1e-7
        ).distance, 1e-7)
    t1 = measured.tau1
    add("total delay t_odd = 7 tau1",
        abs(nmr.t_odd(measured).total_delay - 7 * t1), 1e-15)
    add("total delay t_even = 14 tau1",
        abs(nmr.t_even(measured).total_delay - 14 * t1), 1e-15)
    add("total delay t_regular = 10.5 tau1",
        abs(nmr.t_regular(measured).total_delay - 10.5 * t1), 1e-15)

    # open-system layer
    noise = NoiseModel.from_inverse_times(4.0, 0.7, 0.4)
    model = nmr.HamiltonianModel()
    engine = EvolutionEngine(model, noise)
    rho0 = chaos.initial_density()
    t = 0.05
    evolved = lindblad.apply_superoperator(engine.delay_propagator(t), rho0)
    add("analytic dephasing decay exp(-2*Gamma*t)",
        abs(abs(evolved[0, 4]) - abs(rho0[0, 4]) * np.exp(-2 * noise.gamma_h * t)), 1e-8)
    add("delay propagator semigroup",
        np.max(np.abs(engine.delay_propagator(0.02) @ engine.delay_propagator(0.01)
                      - engine.delay_propagator(0.03))), 1e-9)
    rk4 = EvolutionEngine(model, noise, method="rk4")
    add("rk4 integrator vs exact exponential",
        max(np.max(np.abs(engine.delay_propagator(tt) - rk4.delay_propagator(tt)))
            for tt in (model.tau1, model.tau2, 1.5 * model.tau3, 2.5 * model.tau3, model.tau4)),
        1e-6)
    rho = rho0
    drift = 0.0
    for n in range(1, 7):
        seq = nmr.t_odd(model) if n % 2 else nmr.t_even(model)
        rho = lindblad.run_sequence(rho, seq, engine)
        drift = max(drift, abs(np.trace(rho).real - 1.0))
    add("trace drift over six noisy steps", drift, 1e-9)

    ang = nmr.HamiltonianModel(variant="simplified", j2=203 / 2, convention="angular")
    cyc = nmr.HamiltonianModel(variant="simplified", j2=203 / 2, convention="cycles")
    add("frequency-convention invariance of t_odd",
        qstate.phase_invariant_distance(
            nmr.sequence_unitary(nmr.t_odd(ang), ang),
            nmr.sequence_unitary(nmr.t_odd(cyc), cyc)), 1e-10)
    return checks


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def _resolve_config(args, steps_default=None) -> ExperimentConfig:
    overrides = {}
    if args.steps is not None:
        overrides["steps"] = args.steps
    elif steps_default is not None:
        overrides["steps"] = steps_default
    if args.gamma_h is not None:
        overrides["inv_gamma_h"] = args.gamma_h
    if args.gamma_c1 is not None:
        overrides["inv_gamma_c1"] = args.gamma_c1
    if args.gamma_c2 is not None:
        overrides["inv_gamma_c2"] = args.gamma_c2
    overrides["hamiltonian"] = args.hamiltonian
    overrides["convention"] = args.convention
    overrides["seed"] = args.seed
    return ExperimentConfig.preset(args.preset, **overrides)


def _run_entropy(args) -> str:
    variants = [args.map] if args.map else ["chaotic", "regular"]
    cfg0 = _resolve_config(args)
    lines = [
        _config_header(cfg0, args.preset, args.map or "both"),
        "step,variant,entropy_bits",
    ]
    for variant in variants:
        cfg = replace(cfg0, map_variant=variant)
        for n, s in chaos.entropy_experiment(cfg):
            lines.append(f"{n},{variant},{_fmt(s)}")
    return "\n".join(lines) + "\n"


def _run_hyper(args) -> str:
    variant = args.map or "chaotic"
    cfg = replace(_resolve_config(args, steps_default=3), map_variant=variant)
    result = chaos.hypersensitivity_experiment(cfg, n_steps=cfg.steps)
    lines = [
        _config_header(cfg, args.preset, variant),
        f"# s_bar_max_bits={_fmt(result.s_bar_max)} frontier_slope={_fmt(result.slope)}"
        f" partitions={result.n_partitions}",
        "delta_s_bits,i_min_bits,provenance",
    ]
    for d, i in result.frontier.points():
        lines.append(f"{_fmt(d)},{_fmt(i)},exhaustive")
    for d, i in result.greedy_points:
        lines.append(f"{_fmt(d)},{_fmt(i)},greedy")
    return "\n".join(lines) + "\n"


def _run_verify() -> tuple[str, bool]:
    checks = standard_checks()
    width = max(len(c.name) for c in checks)
    lines = [f"{'check':<{width}}  {'distance':>12}  {'tolerance':>10}  result"]
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        lines.append(f"{c.name:<{width}}  {c.distance:>12.3e}  {c.tolerance:>10.0e}  {status}")
    ok = all(c.passed for c in checks)
    lines.append(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    return "\n".join(lines) + "\n", ok


def _dump_gate_sequence(name: str, gates) -> str:
    lines = [f"# gates name={name} n_qubits=3 order=execution"]
    for g in gates:
        if g.kind == baker.HADAMARD_KIND:
            lines.append(f"H {g.qubits[0]}")
        elif g.kind == baker.PHASE_KIND:
            lines.append(f"PHASE {g.qubits[0]} {g.qubits[1]} {_fmt(g.theta)}")
        else:
            lines.append(f"SWAP {g.qubits[0]} {g.qubits[1]}")
    return "\n".join(lines) + "\n"


def _run_compile(args) -> str:
    model = nmr.HamiltonianModel(
        variant=args.hamiltonian, convention=args.convention
    )
    blocks = [
        _dump_gate_sequence("baker_full", baker.baker_gate_sequence()),
        _dump_gate_sequence("baker_simplified", baker.simplified_baker_gate_sequence()),
        nmr.dump_sequence(nmr.t_odd(model), args.convention),
        nmr.dump_sequence(nmr.t_even(model), args.convention),
        nmr.dump_sequence(nmr.t_regular(model), args.convention),
        nmr.dump_sequence(nmr.full_baker_appendix(model), args.convention),
    ]
    return "\n".join(blocks)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nmrbaker",
        description="Simulate the quantum baker's map on a three-spin NMR register.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_physics=True):
        p.add_argument("--out", help="output path (default: stdout)")
        if with_physics:
            p.add_argument("--preset", default="fig2",
                           choices=["fig2", "fig3", "fig4", "fig5"])
            p.add_argument("--steps", type=int, default=None)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--gamma-h", type=float, default=None,
                           help="1/Gamma_H in seconds")
            p.add_argument("--gamma-c1", type=float, default=None,
                           help="1/Gamma_C1 in seconds")
            p.add_argument("--gamma-c2", type=float, default=None,
                           help="1/Gamma_C2 in seconds")
            p.add_argument("--map", choices=["chaotic", "regular"], default=None)
        p.add_argument("--hamiltonian", choices=["full", "noxy", "simplified"],
                       default="noxy")
        p.add_argument("--convention", choices=["angular", "cycles"],
                       default="angular")

    add_common(sub.add_parser("entropy", help="entropy-growth experiment"))
    add_common(sub.add_parser("hyper", help="hypersensitivity experiment"))
    verify_p = sub.add_parser("verify", help="run the invariant checks")
    verify_p.add_argument("--out", help="output path (default: stdout)")
    add_common(sub.add_parser("compile", help="dump gate and pulse programs"),
               with_physics=False)
    return parser


def _write(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", newline="\n") as fh:
            fh.write(text)


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "entropy":
            _write(_run_entropy(args), args.out)
        elif args.command == "hyper":
            _write(_run_hyper(args), args.out)
        elif args.command == "verify":
            text, ok = _run_verify()
            _write(text, args.out)
            if not ok:
                return 1
        elif args.command == "compile":
            _write(_run_compile(args), args.out)
    except PhysicsError as exc:
        print(f"physics violation: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
