"""Scenario types and the trial-level simulation driver.

Each trial samples an intermediate outcome with Born weights, collapses the
system onto the corresponding branch state, and is then accepted with the
exact post-selection probability of that branch. Because the collapsed
state depends only on the outcome, the per-branch Born weights and
acceptance probabilities are computed once and the compiled kernel samples
against them.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .. import abl
from ..errors import DimensionMismatch, ValidationError
from ..hilbert import (
    Bra,
    HilbertSpace,
    Ket,
    Operator,
    SpectralDecomposition,
    tensor,
)
from ..tsv import GeneralizedTSV, TwoStateVector
from . import kernel
from .rng import RngPolicy

UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class Projective:
    observable: SpectralDecomposition


@dataclass(frozen=True)
class UnitaryDevice:
    """System-device coupling ``U`` acting on ``system ⊗ device``.

    The device starts in basis state ``ready_index`` and is read out in its
    own basis; ``outcome_labels[k]`` names device basis state ``k``.
    """

    unitary: Operator
    device_space: HilbertSpace
    ready_index: int
    outcome_labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "outcome_labels", tuple(self.outcome_labels))
        if len(self.outcome_labels) != self.device_space.dimension:
            raise ValidationError("one outcome label per device basis state")
        if not 0 <= self.ready_index < self.device_space.dimension:
            raise ValidationError("ready_index out of range")
        if self.unitary.dim % self.device_space.dimension:
            raise DimensionMismatch("unitary dimension is not a multiple of "
                                    "the device dimension")
        if not self.unitary.is_unitary(UNITARY_TOL):
            raise ValidationError("device operator is not unitary")

    @property
    def system_dimension(self) -> int:
        return self.unitary.dim // self.device_space.dimension


@dataclass(frozen=True)
class RankOne:
    bra: Bra


@dataclass(frozen=True)
class Subspace:
    projector: Operator


Intermediate = Optional[Union[Projective, UnitaryDevice]]
Post = Optional[Union[RankOne, Subspace]]


@dataclass(frozen=True)
class Scenario:
    space: HilbertSpace
    pre: Ket
    intermediate: Intermediate = None
    post: Post = None

    def __post_init__(self):
        d = self.space.dimension
        if self.pre.dim != d:
            raise DimensionMismatch("pre-selected state has the wrong dimension")
        if isinstance(self.intermediate, Projective) and self.intermediate.observable.space.dimension != d:
            raise DimensionMismatch("observable has the wrong dimension")
        if isinstance(self.intermediate, UnitaryDevice) and self.intermediate.system_dimension != d:
            raise DimensionMismatch("device unitary does not match the system")
        if isinstance(self.post, RankOne) and self.post.bra.dim != d:
            raise DimensionMismatch("post-selected bra has the wrong dimension")
        if isinstance(self.post, Subspace):
            if self.post.projector.dim != d:
                raise DimensionMismatch("post-selection projector has the wrong dimension")
            if not self.post.projector.is_projector():
                raise ValidationError("post-selection operator is not a projector")


@dataclass(frozen=True)
class EnsembleStats:
    trials: int
    selected: int
    outcome_counts: dict[str, int]
    branch_counts: dict[str, int] = field(default_factory=dict)

    @property
    def selection_rate(self) -> float:
        return self.selected / self.trials if self.trials else 0.0

    @property
    def conditional_freq(self) -> dict[str, float]:
        if not self.selected:
            return {}
        return {k: c / self.selected for k, c in self.outcome_counts.items()}

    @property
    def stderr(self) -> dict[str, float]:
        if not self.selected:
            return {}
        return {k: float(np.sqrt(f * (1 - f) / self.selected))
                for k, f in self.conditional_freq.items()}

    def freq(self, label) -> float:
        if not isinstance(label, str):
            label = outcome_label(label)
        return self.conditional_freq.get(label, 0.0)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "selected": self.selected,
            "selection_rate": self.selection_rate,
            "outcome_counts": dict(self.outcome_counts),
            "branch_counts": dict(self.branch_counts),
            "conditional_freq": self.conditional_freq,
            "stderr": self.stderr,
        }


def outcome_label(value: float) -> str:
    s = format(float(value), ".12g")
    return "0" if s == "-0" else s


def _acceptance(post: Post, state: np.ndarray) -> float:
    if post is None:
        return 1.0
    if isinstance(post, RankOne):
        return float(abs(post.bra.amplitudes @ state) ** 2)
    v = post.projector.matrix @ state
    return float(np.vdot(v, v).real)


def _projective_branches(s: Scenario):
    psi = s.pre.amplitudes
    labels, weights, accept = [], [], []
    obs = s.intermediate.observable
    for c, p in obs:
        v = p.matrix @ psi
        w = float(np.vdot(v, v).real)
        labels.append(outcome_label(c))
        weights.append(w)
        accept.append(_acceptance(s.post, v / np.sqrt(w)) if w > 0 else 0.0)
    return labels, weights, accept


def _device_branches(s: Scenario):
    dev = s.intermediate
    dd = dev.device_space.dimension
    ready = np.zeros(dd, dtype=complex)
    ready[dev.ready_index] = 1.0
    joint = dev.unitary.matrix @ np.kron(s.pre.amplitudes, ready)
    joint = joint.reshape(s.space.dimension, dd)
    labels, weights, accept = [], [], []
    for k in range(dd):
        v = joint[:, k]
        w = float(np.vdot(v, v).real)
        labels.append(dev.outcome_labels[k])
        weights.append(w)
        accept.append(_acceptance(s.post, v / np.sqrt(w)) if w > 0 else 0.0)
    return labels, weights, accept


def _cumulative(weights) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    w = w / w.sum()
    cum = np.cumsum(w)
    # round-off must never leave a gap above the last reachable branch
    cum[int(np.flatnonzero(w > 0)[-1]):] = 1.0
    return cum


def _split(trials: int, parts: int) -> list[tuple[int, int]]:
    bounds = np.linspace(0, trials, parts + 1).round().astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _simulate(labels, weights, accept, trials: int, rng: RngPolicy,
              workers: int = 1, tally=None) -> EnsembleStats:
    if trials < 0:
        raise ValueError("trials must be non-negative")
    tally = tally or kernel.tally
    cum = _cumulative(weights)
    acc = np.clip(np.asarray(accept, dtype=float), 0.0, 1.0)
    key = rng.key
    nb = len(labels)
    branch = np.zeros(nb, dtype=np.int64)
    selected = np.zeros(nb, dtype=np.int64)
    blocks = _split(trials, max(1, int(workers)))
    if len(blocks) <= 1:
        results = [tally(key, a, b, cum, acc) for a, b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            results = list(pool.map(lambda ab: tally(key, ab[0], ab[1], cum, acc), blocks))
    for b, s in results:
        branch += b
        selected += s
    return EnsembleStats(
        trials=int(trials),
        selected=int(selected.sum()),
        outcome_counts={l: int(c) for l, c in zip(labels, selected)},
        branch_counts={l: int(c) for l, c in zip(labels, branch)},
    )


def branches(s: Scenario) -> tuple[list[str], list[float], list[float]]:
    """Outcome labels, Born weights and post-selection acceptance per branch."""
    if isinstance(s.intermediate, Projective):
        return _projective_branches(s)
    if isinstance(s.intermediate, UnitaryDevice):
        return _device_branches(s)
    return ["selected"], [1.0], [_acceptance(s.post, s.pre.amplitudes)]


def exact_conditional(s: Scenario) -> dict[str, float]:
    """Closed-form outcome probabilities given successful post-selection.

    This is Bayes' rule over the branch table; for a projective intermediate
    it coincides with the ABL rule, for a state-changing device it need not.
    """
    labels, weights, accept = branches(s)
    joint = np.asarray(weights) * np.asarray(accept)
    total = joint.sum()
    if total < abl.NULL_EVENT_TOL:
        raise abl.NullEvent("post-selection has zero probability")
    return {l: float(j / total) for l, j in zip(labels, joint)}


def run_projective(s: Scenario, trials: int, rng: RngPolicy, workers: int = 1,
                   tally=None) -> EnsembleStats:
    if not isinstance(s.intermediate, Projective):
        raise ValidationError("run_projective needs a projective intermediate measurement")
    return _simulate(*_projective_branches(s), trials, rng, workers, tally)


def run_device(s: Scenario, trials: int, rng: RngPolicy, workers: int = 1,
               tally=None) -> EnsembleStats:
    if not isinstance(s.intermediate, UnitaryDevice):
        raise ValidationError("run_device needs a unitary device intermediate")
    return _simulate(*_device_branches(s), trials, rng, workers, tally)


def run(s: Scenario, trials: int, rng: RngPolicy, workers: int = 1,
        tally=None) -> EnsembleStats:
    if isinstance(s.intermediate, Projective):
        return run_projective(s, trials, rng, workers, tally)
    if isinstance(s.intermediate, UnitaryDevice):
        return run_device(s, trials, rng, workers, tally)
    return _simulate(*branches(s), trials, rng, workers, tally)


# ---------------------------------------------------------------------------
# two spin-1/2 particles in the |S^2, S_z> basis, with a three-state device

SHIMONY_SYSTEM = HilbertSpace(4, ("0,0", "1,-1", "1,0", "1,1"))
SHIMONY_DEVICE = HilbertSpace(3, ("R", "0", "1"))


def shimony_unitary() -> UnitaryDevice:
    """Total-spin measurement that cycles ``S_z`` within the triplet.

    Only the columns with the device in its ready state are physically
    specified; the remaining columns are filled deterministically with the
    unused standard basis vectors in order.
    """
    sd, dd = SHIMONY_SYSTEM.dimension, SHIMONY_DEVICE.dimension
    R, zero, one = 0, 1, 2
    sys = {"0,0": 0, "1,-1": 1, "1,0": 2, "1,1": 3}
    rules = [
        (("0,0", R), ("0,0", zero)),
        (("1,-1", R), ("1,0", one)),
        (("1,0", R), ("1,1", one)),
        (("1,1", R), ("1,-1", one)),
    ]
    n = sd * dd
    u = np.zeros((n, n), dtype=complex)
    used_in, used_out = set(), []
    for (s_in, d_in), (s_out, d_out) in rules:
        col = sys[s_in] * dd + d_in
        row = sys[s_out] * dd + d_out
        u[row, col] = 1.0
        used_in.add(col)
        used_out.append(u[:, col].copy())

    free_cols = [c for c in range(n) if c not in used_in]
    basis = list(used_out)
    fill = []
    for i in range(n):
        v = np.zeros(n, dtype=complex)
        v[i] = 1.0
        for e in basis:
            v = v - np.vdot(e, v) * e
        norm = np.linalg.norm(v)
        if norm > 1e-10:
            v = v / norm
            basis.append(v)
            fill.append(v)
    for col, v in zip(free_cols, fill):
        u[:, col] = v

    space = HilbertSpace(n)
    return UnitaryDevice(Operator(space, u), SHIMONY_DEVICE, R,
                         SHIMONY_DEVICE.labels)


# ---------------------------------------------------------------------------
# ancilla construction for generalized two-state vectors


@dataclass(frozen=True)
class Comparison:
    formula: abl.OutcomeDistribution
    composite_formula: abl.OutcomeDistribution
    freq: EnsembleStats
    scenario: Scenario

    def __iter__(self):
        return iter((self.formula, self.composite_formula, self.freq))


def ancilla_embedding(g: GeneralizedTSV) -> tuple[Ket, Bra, HilbertSpace]:
    """Composite pre-state ``sum_i a_i |Psi_i>|i>`` and post bra ``sum_i <Phi_i|<i| / sqrt(N)``."""
    n = len(g)
    anc = HilbertSpace(n)
    pre = sum(t.coeff * np.kron(t.ket.amplitudes, np.eye(n)[i])
              for i, t in enumerate(g.terms))
    post = sum(np.kron(t.bra.amplitudes, np.eye(n)[i])
               for i, t in enumerate(g.terms)) / np.sqrt(n)
    space = HilbertSpace(g.space.dimension * n)
    return Ket(space, pre / np.linalg.norm(pre)), Bra(space, post), anc


def prepare_and_compare(g: GeneralizedTSV, C, trials: int, rng: RngPolicy,
                        workers: int = 1) -> Comparison:
    """Evaluate a generalized two-state vector three ways.

    Returns the generalized ABL formula, the ordinary ABL formula on the
    system+ancilla composite, and Monte Carlo frequencies for the composite.
    """
    C = abl.spectral(C)
    formula = abl.abl_generalized(g, C)
    pre, post, anc = ancilla_embedding(g)
    eye = anc.identity()
    composite = SpectralDecomposition(
        pre.space, C.eigenvalues, [tensor(p, eye) for p in C.projectors])
    composite_formula = abl.abl_probability(TwoStateVector(post, pre), composite)
    scenario = Scenario(pre.space, pre, Projective(composite), RankOne(post))
    freq = run_projective(scenario, trials, rng, workers)
    return Comparison(formula, composite_formula, freq, scenario)
