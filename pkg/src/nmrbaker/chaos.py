"""The two quantum-chaos experiments on the simulated NMR machine.

Entropy growth: starting from the pure product state with every spin
along +y, iterate the simplified baker's map (alternating odd/even
pulse programs) or the do-nothing reference map through the dephasing
master equation and record the von Neumann entropy after each step.
Optionally an artificial perturbation channel is averaged in after
every step.

Hypersensitivity: apply, over n steps, all 2^n perturbation histories
(at each step either the plain map or the map followed by a z kick on
one spin), collect the 2^n final density matrices, and ask how many
bits of information about the history are needed to reduce the entropy
of the averaged state by a given amount.  The exact answer enumerates
every set partition of the history ensemble; a greedy clustering on a
Jensen-Shannon-type distance approximates it.

Perturbation schedule: the kick acts on H after odd steps and on C2
after even steps of the chaotic map (the same logical qubit, since the
labels alternate), and on H after every step of the reference map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import lindblad, nmr, qstate
from .lindblad import EvolutionEngine, NoiseModel, apply_perturbation, perturbation_unitary, run_sequence
from .nmr import SPIN_C2, SPIN_H, HamiltonianModel

MAP_VARIANTS = ("chaotic", "regular")

# noise presets: 1/Gamma in seconds per spin (H, C1, C2)
PRESETS = {
    "fig2": dict(inv_gamma_h=4.0, inv_gamma_c1=0.7, inv_gamma_c2=0.4,
                 steps=6, artificial_perturbation=False),
    "fig3": dict(inv_gamma_h=10.0, inv_gamma_c1=10.0, inv_gamma_c2=0.2,
                 steps=6, artificial_perturbation=False),
    "fig4": dict(inv_gamma_h=10.0, inv_gamma_c1=10.0, inv_gamma_c2=10.0,
                 steps=6, artificial_perturbation=True),
    "fig5": dict(inv_gamma_h=4.0, inv_gamma_c1=0.7, inv_gamma_c2=0.4,
                 steps=3, artificial_perturbation=False),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one experiment run."""

    map_variant: str = "chaotic"
    hamiltonian: str = "noxy"
    inv_gamma_h: float = 4.0
    inv_gamma_c1: float = 0.7
    inv_gamma_c2: float = 0.4
    steps: int = 6
    artificial_perturbation: bool = False
    convention: str = "angular"
    method: str = "superoperator_expm"
    seed: int = 0

    def __post_init__(self):
        if self.map_variant not in MAP_VARIANTS:
            raise ValueError(f"unknown map variant {self.map_variant!r}")
        if self.steps < 1:
            raise ValueError("need at least one step")

    @classmethod
    def preset(cls, name: str, **overrides) -> "ExperimentConfig":
        if name not in PRESETS:
            raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        params = dict(PRESETS[name])
        params.update(overrides)
        return cls(**params)

    def noise(self) -> NoiseModel:
        return NoiseModel.from_inverse_times(
            self.inv_gamma_h, self.inv_gamma_c1, self.inv_gamma_c2
        )

    def model(self) -> HamiltonianModel:
        return HamiltonianModel(variant=self.hamiltonian, convention=self.convention)

    def engine(self) -> EvolutionEngine:
        return EvolutionEngine(self.model(), self.noise(), method=self.method)


def initial_state() -> np.ndarray:
    """All three spins along +y: ((|0> + i|1>)/sqrt(2))^(x3)."""
    plus_y = np.array([1.0, 1.0j]) / np.sqrt(2)
    return np.kron(np.kron(plus_y, plus_y), plus_y)


def initial_density() -> np.ndarray:
    psi = initial_state()
    return np.outer(psi, psi.conj())


def _step_sequences(config: ExperimentConfig):
    model = config.model()
    if config.map_variant == "chaotic":
        odd, even = nmr.t_odd(model), nmr.t_even(model)
        return lambda n: odd if n % 2 else even
    regular = nmr.t_regular(model)
    return lambda n: regular


def _perturbed_spin(config: ExperimentConfig, step: int) -> str:
    """Kick H after odd chaotic steps and C2 after even ones (the same
    logical qubit under the alternating labels); always H for the
    reference map."""
    if config.map_variant == "chaotic" and step % 2 == 0:
        return SPIN_C2
    return SPIN_H


def entropy_experiment(config: ExperimentConfig) -> list[tuple[int, float]]:
    """Entropy in bits after 0..steps iterations of the chosen map."""
    engine = config.engine()
    seq_for = _step_sequences(config)
    rho = initial_density()
    series = [(0, qstate.von_neumann_entropy_bits(rho))]
    for n in range(1, config.steps + 1):
        rho = run_sequence(rho, seq_for(n), engine)
        if config.artificial_perturbation:
            rho = apply_perturbation(rho, _perturbed_spin(config, n))
        series.append((n, qstate.von_neumann_entropy_bits(rho)))
    return series


def history_ensemble(config: ExperimentConfig, n_steps: int) -> list[np.ndarray]:
    """Final states of all 2**n perturbation histories, in binary order.

    History bit k (most significant first) says whether the kick
    unitary was applied after step k+1.  The all-zero history is the
    unperturbed run.
    """
    if n_steps > 6:
        raise ValueError("history ensembles beyond 6 steps are impractical (2^n runs)")
    engine = config.engine()
    seq_for = _step_sequences(config)
    kicks = [perturbation_unitary(_perturbed_spin(config, n)) for n in range(1, n_steps + 1)]
    out = []
    for idx in range(2**n_steps):
        rho = initial_density()
        for n in range(1, n_steps + 1):
            rho = run_sequence(rho, seq_for(n), engine)
            if (idx >> (n_steps - n)) & 1:
                k = kicks[n - 1]
                rho = k @ rho @ k.conj().T
        out.append(rho)
    return out


def average_rho(rhos) -> np.ndarray:
    """Uniform mixture of equiprobable states."""
    rhos = list(rhos)
    if not rhos:
        raise ValueError("cannot average an empty ensemble")
    dim = rhos[0].shape
    if any(r.shape != dim for r in rhos):
        raise ValueError("ensemble members must share a dimension")
    return sum(rhos) / len(rhos)


@dataclass(frozen=True)
class GroupingStats:
    """Bookkeeping for one partition of a history ensemble."""

    probabilities: np.ndarray       # p_r = N_r / N
    group_rhos: list                # averaged state per group
    group_entropies: np.ndarray     # S_r in bits
    mean_conditional_entropy: float  # S-bar = sum p_r S_r
    information: float              # I = -sum p_r log2 p_r


def grouping_stats(assignment, rhos) -> GroupingStats:
    """Per-group probabilities, states, entropies, and the information cost."""
    rhos = list(rhos)
    assignment = list(assignment)
    if len(assignment) != len(rhos):
        raise ValueError("assignment length must match the ensemble size")
    groups: dict = {}
    for idx, g in enumerate(assignment):
        groups.setdefault(g, []).append(idx)
    n = len(rhos)
    probs, group_rhos, entropies = [], [], []
    for g in sorted(groups, key=lambda k: groups[k][0]):
        members = groups[g]
        probs.append(len(members) / n)
        rho_r = average_rho([rhos[i] for i in members])
        group_rhos.append(rho_r)
        entropies.append(qstate.von_neumann_entropy_bits(rho_r))
    probs = np.array(probs)
    entropies = np.array(entropies)
    return GroupingStats(
        probabilities=probs,
        group_rhos=group_rhos,
        group_entropies=entropies,
        mean_conditional_entropy=float(probs @ entropies),
        information=float(-(probs @ np.log2(probs))),
    )


def js_distance(a: np.ndarray, b: np.ndarray) -> float:
    """S((a+b)/2) - (S(a)+S(b))/2 in bits; nonnegative by concavity."""
    if a.shape != b.shape:
        raise ValueError("states must share a dimension")
    s_mix = qstate.von_neumann_entropy_bits((a + b) / 2)
    s_avg = (
        qstate.von_neumann_entropy_bits(a) + qstate.von_neumann_entropy_bits(b)
    ) / 2
    return max(s_mix - s_avg, 0.0)


def greedy_grouping(rhos, n_groups: int, seed) -> list[int]:
    """Nearly optimal grouping into ``n_groups`` clusters.

    Seeds the groups with ``n_groups`` distinct members chosen at
    random, then assigns each remaining state, in list order, to the
    group whose running average is closest in :func:`js_distance`.
    Deterministic for a fixed seed.
    """
    rhos = list(rhos)
    n = len(rhos)
    if not 1 <= n_groups <= n:
        raise ValueError("group count must be between 1 and the ensemble size")
    rng = np.random.default_rng(seed)
    seeds = rng.choice(n, size=n_groups, replace=False)
    assignment = [-1] * n
    sums = []
    counts = []
    for g, idx in enumerate(seeds):
        assignment[idx] = g
        sums.append(rhos[idx].copy())
        counts.append(1)
    for idx in range(n):
        if assignment[idx] >= 0:
            continue
        dists = [js_distance(sums[g] / counts[g], rhos[idx]) for g in range(n_groups)]
        g = int(np.argmin(dists))
        assignment[idx] = g
        sums[g] += rhos[idx]
        counts[g] += 1
    return assignment


def set_partitions(n: int):
    """All partitions of range(n) as restricted-growth strings.

    a[k] is the group of element k, with a[k] <= 1 + max(a[:k]); the
    number of strings is the Bell number B(n).
    """
    if n < 1:
        raise ValueError("need at least one element")
    a = [0] * n
    b = [1] * n  # b[k] = 1 + max(a[:k])
    while True:
        yield tuple(a)
        j = n - 1
        while j > 0 and a[j] == b[j]:
            j -= 1
        if j == 0:
            return
        a[j] += 1
        top = max(b[j], a[j] + 1)
        for k in range(j + 1, n):
            a[k] = 0
            b[k] = top


@dataclass(frozen=True)
class HypersensitivityCurve:
    """Minimum information vs entropy reduction."""

    delta_s: np.ndarray
    i_min: np.ndarray
    provenance: str

    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.delta_s.tolist(), self.i_min.tolist()))


def partition_scan(rhos) -> tuple[np.ndarray, np.ndarray, float]:
    """(delta_s, information) over every set partition of the ensemble.

    Entropies are precomputed per subset (2^n - 1 of them), so the scan
    over the Bell(n) partitions is just table lookups.
    """
    rhos = list(rhos)
    n = len(rhos)
    if n > 10:
        raise ValueError("exhaustive partition scan is limited to 10 states")
    subset_sum = np.zeros((2**n, rhos[0].shape[0], rhos[0].shape[1]), dtype=complex)
    subset_entropy = np.zeros(2**n)
    for mask in range(1, 2**n):
        low = mask & -mask
        subset_sum[mask] = subset_sum[mask ^ low] + rhos[low.bit_length() - 1]
        count = mask.bit_count()
        subset_entropy[mask] = qstate.von_neumann_entropy_bits(subset_sum[mask] / count)
    # taking S_bar_max from the same table keeps the trivial one-group
    # partition at delta_s = 0 exactly
    s_max = float(subset_entropy[2**n - 1])
    delta_s, info = [], []
    for assignment in set_partitions(n):
        masks: dict = {}
        for idx, g in enumerate(assignment):
            masks[g] = masks.get(g, 0) | (1 << idx)
        s_bar = 0.0
        inf = 0.0
        for mask in masks.values():
            p = mask.bit_count() / n
            s_bar += p * subset_entropy[mask]
            inf -= p * math.log2(p)
        delta_s.append(s_max - s_bar)
        info.append(inf)
    return np.array(delta_s), np.array(info), s_max


def _frontier_from_scan(delta_s, info) -> HypersensitivityCurve:
    order = np.argsort(delta_s)[::-1]  # descending delta_s
    d_sorted = delta_s[order]
    i_suffix = np.minimum.accumulate(info[order])
    # keep one point per distinct delta_s (the running minimum I)
    grid, imin = [], []
    for d, i in zip(d_sorted, i_suffix):
        if grid and math.isclose(d, grid[-1], rel_tol=0, abs_tol=1e-12):
            imin[-1] = i
        else:
            grid.append(d)
            imin.append(i)
    return HypersensitivityCurve(
        delta_s=np.array(grid[::-1]), i_min=np.array(imin[::-1]), provenance="exhaustive"
    )


def exhaustive_imin(rhos) -> HypersensitivityCurve:
    """Exact I_min(delta_s) frontier from the full set-partition scan.

    I_min(x) = min{ I : partition achieves delta_s >= x }, evaluated on
    the grid of all achieved delta_s values; nondecreasing by
    construction.
    """
    delta_s, info, _ = partition_scan(rhos)
    return _frontier_from_scan(delta_s, info)


def _pareto_points(points) -> list[tuple[float, float]]:
    """Keep the nondominated (delta_s high, information low) corner."""
    best = []
    for d, i in sorted(points, key=lambda p: (-p[0], p[1])):
        if not best or i < best[-1][1] - 1e-12:
            best.append((d, i))
    return best[::-1]


def frontier_slope(curve: HypersensitivityCurve, window: tuple[float, float] = (0.2, 0.8)) -> float:
    """Least-squares slope of I_min vs delta_s over the interior of the
    achieved range (the saturated ends are excluded)."""
    lo = curve.delta_s.max() * window[0]
    hi = curve.delta_s.max() * window[1]
    mask = (curve.delta_s >= lo) & (curve.delta_s <= hi)
    if mask.sum() < 2:
        return float("nan")
    return float(np.polyfit(curve.delta_s[mask], curve.i_min[mask], 1)[0])


@dataclass(frozen=True)
class HyperResult:
    s_bar_max: float
    frontier: HypersensitivityCurve
    slope: float
    greedy_points: list = field(default_factory=list)
    n_partitions: int = 0


GREEDY_RESTARTS = 64


def hypersensitivity_experiment(config: ExperimentConfig, n_steps: int = 3) -> HyperResult:
    """Full pipeline: ensemble, exact frontier, slope, greedy comparison.

    The greedy pass runs :data:`GREEDY_RESTARTS` seedings per group
    count and keeps the nondominated (delta_s, information) points.
    """
    rhos = history_ensemble(config, n_steps)
    delta_s, info, s_max = partition_scan(rhos)
    frontier = _frontier_from_scan(delta_s, info)
    slope = frontier_slope(frontier)
    greedy = []
    for n_groups in range(1, len(rhos) + 1):
        for trial in range(GREEDY_RESTARTS):
            assignment = greedy_grouping(
                rhos, n_groups, seed=[config.seed, n_groups, trial]
            )
            stats = grouping_stats(assignment, rhos)
            greedy.append((s_max - stats.mean_conditional_entropy, stats.information))
    return HyperResult(
        s_bar_max=s_max,
        frontier=frontier,
        slope=slope,
        greedy_points=_pareto_points(greedy),
        n_partitions=len(delta_s),
    )
