"""From gates to RF pulses: the compiler and its verification.

Single-qubit z rotations and Hadamards come from short x/y pulse
combinations; two-qubit phase gates use refocused delays (a pi pulse on
the spectator spin cancels every coupling involving it); CNOTs and
swaps stack on top.  Each construction is compared against its target
unitary up to a global phase, under the simplified drift Hamiltonian
with the exact 2:1 coupling ratio the timings assume, and then against
the measured couplings to expose the approximation error.
"""

import numpy as np

from nmrbaker import nmr, qstate

reference = nmr.HamiltonianModel().compiler_reference()
measured = nmr.HamiltonianModel(variant="simplified")

print("compiled primitives (exact coupling ratio)")
print("------------------------------------------")
checks = [
    ("z rotation Z(0.9) on C1",
     nmr.z_rotation_pulses("C1", 0.9), nmr.z_rotation_unitary("C1", 0.9)),
    ("hadamard on H", nmr.hadamard_pulses("H"), nmr.hadamard_unitary("H")),
    ("phase gate B(-pi/2) on C1-H",
     nmr.phase_gate_pulses(("C1", "H"), np.pi / 2, reference),
     nmr.phase_gate_unitary(("C1", "H"), -np.pi / 2)),
    ("phase gate B(-pi/2) on C1-C2",
     nmr.phase_gate_pulses(("C1", "C2"), np.pi / 2, reference),
     nmr.phase_gate_unitary(("C1", "C2"), -np.pi / 2)),
    ("swap C1-H (three CNOTs)",
     nmr.swap_pulses(("C1", "H"), reference), nmr.swap_unitary(("C1", "H"))),
]
for name, seq, target in checks:
    rep = nmr.verify_sequence(seq, target, reference, tol=1e-8)
    print(f"  {name:32s} {len(seq.instructions):3d} pulses  distance {rep.distance:.1e}")

print()
print("canned step programs")
print("--------------------")
t1 = reference.tau1
for build, ideal, tol in [
    (nmr.t_odd, nmr.ideal_t_odd(), 1e-8),
    (nmr.t_even, nmr.ideal_t_even(), 1e-8),
    (nmr.t_regular, nmr.ideal_t_regular(reference), 1e-10),
    (nmr.full_baker_appendix, nmr.ideal_full_baker(), 1e-7),
]:
    seq = build(reference)
    exact = nmr.verify_sequence(seq, ideal, reference, tol)
    # the physical couplings are not exactly 2:1, so the same pulse
    # timings leave a small coherent error
    seq_m = build(measured)
    ideal_m = nmr.ideal_t_regular(measured) if seq.name == "t_regular" else ideal
    real = nmr.verify_sequence(seq_m, ideal_m, measured, tol)
    print(f"  {seq.name:12s} delay {seq.total_delay / t1:5.2f} tau1   "
          f"ideal ratio: {exact.distance:.1e}   measured j2: {real.distance:.1e}")

print()
print("pulse program text format (first lines of t_odd):")
for line in nmr.dump_sequence(nmr.t_odd(measured)).splitlines()[:5]:
    print("  " + line)
print("  ...")
