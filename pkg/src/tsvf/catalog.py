"""Named, self-checking reproductions of the standard worked examples.

Each :class:`NamedExample` carries a list of claims. A claim knows its
expected value, tolerance and a short reference string, and computes its
actual value lazily from a :class:`RunContext` so that Monte Carlo claims
share one ensemble run per scenario.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import ensemble
from .abl import abl_probability, element_of_reality, spectral
from .hilbert import (
    HilbertSpace,
    basis_projector,
    bra,
    ket,
    operator,
    pauli_x,
    pauli_y,
    pauli_z,
)
from .pointer import Coupling, evolve_pointer, stats
from .tsv import PrePost, TwoStateVector, reverse
from .weak import weak_value

DEFAULT_TRIALS = 100_000
DEFAULT_SEED = 20_251_015


@dataclass
class RunContext:
    trials: int = DEFAULT_TRIALS
    seed: int = DEFAULT_SEED
    workers: int = 1
    _cache: dict = field(default_factory=dict, repr=False)

    def simulate(self, key: str, scenario: ensemble.Scenario) -> ensemble.EnsembleStats:
        if key not in self._cache:
            self._cache[key] = ensemble.run(scenario, self.trials,
                                            ensemble.RngPolicy(self.seed),
                                            self.workers)
        return self._cache[key]


@dataclass(frozen=True)
class Claim:
    label: str
    expected: complex
    tolerance: float
    anchor: str
    # returns the actual value, or (actual, tolerance) for statistical claims
    compute: Callable[[RunContext], object] = field(repr=False)


@dataclass(frozen=True)
class ClaimResult:
    label: str
    expected: complex
    actual: complex
    tolerance: float
    anchor: str

    @property
    def error(self) -> float:
        return float(abs(complex(self.actual) - complex(self.expected)))

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.tolerance)


@dataclass(frozen=True)
class NamedExample:
    name: str
    description: PrePost
    scenarios: dict[str, ensemble.Scenario]
    claims: tuple[Claim, ...]


def run_example(ex: NamedExample, ctx: RunContext | None = None) -> list[ClaimResult]:
    ctx = ctx or RunContext()
    results = []
    for c in ex.claims:
        out = c.compute(ctx)
        tol = c.tolerance
        if isinstance(out, tuple):
            out, tol = out
        results.append(ClaimResult(c.label, c.expected, out, tol, c.anchor))
    return results


def _or_nan(value):
    return float("nan") if value is None else value


def _within_sigmas(stats: ensemble.EnsembleStats, label: str, p: float, k: float = 4.0):
    """Frequency and a ``k``-sigma binomial band around the expected ``p``."""
    n = max(stats.selected, 1)
    return stats.freq(label), k * float(np.sqrt(p * (1 - p) / n))


# ---------------------------------------------------------------------------

BOXES = HilbertSpace(3, ("A", "B", "C"))


def three_box_tsv() -> TwoStateVector:
    s = 1 / np.sqrt(3)
    return TwoStateVector(bra([s, s, -s], BOXES), ket([s, s, s], BOXES))


def three_box() -> NamedExample:
    t = three_box_tsv()
    PA, PB, PC = (basis_projector(BOXES, x) for x in "ABC")
    total = PA + PB + PC
    strong_tol, weak_tol = 1e-10, 1e-10

    def abl1(tt, op):
        return lambda ctx: abl_probability(tt, op).prob(1.0)

    def wv(op):
        return lambda ctx: weak_value(t, op).value

    scen_a = ensemble.Scenario(BOXES, t.ket, ensemble.Projective(
        spectral(PA)), ensemble.RankOne(t.bra))

    def contrary(ctx):
        return ctx.simulate("P_A", scen_a).outcome_counts.get("0", 0)

    def pointer_weak(ctx):
        k = Coupling(0.01, 10.0)
        return stats(evolve_pointer(t.ket, PC, k, t.bra)).mean_q / k.strength

    claims = (
        Claim("ABL Prob(P_A = 1)", 1.0, strong_tol, "box A opened: found with certainty", abl1(t, PA)),
        Claim("ABL Prob(P_B = 1)", 1.0, strong_tol, "box B opened: found with certainty", abl1(t, PB)),
        Claim("ABL Prob(P_A + P_B + P_C = 1)", 1.0, strong_tol, "all boxes opened: found somewhere", abl1(t, total)),
        Claim("reversed ABL Prob(P_A = 1)", 1.0, strong_tol, "time-reversal invariance", abl1(reverse(t), PA)),
        Claim("reversed ABL Prob(P_B = 1)", 1.0, strong_tol, "time-reversal invariance", abl1(reverse(t), PB)),
        Claim("element of reality P_A", 1.0, 0.0, "certain inference",
              lambda ctx: _or_nan(element_of_reality(PrePost(t), PA))),
        Claim("weak (P_A)_w", 1.0, weak_tol, "weak element of reality", wv(PA)),
        Claim("weak (P_B)_w", 1.0, weak_tol, "weak element of reality", wv(PB)),
        Claim("weak (P_C)_w", -1.0, weak_tol, "negative occupation of box C", wv(PC)),
        Claim("weak (P_A + P_B + P_C)_w", 1.0, weak_tol, "weak value sum rule", wv(total)),
        Claim("MC contrary accepted trials, P_A", 0, 0.0, "box A opened: found with certainty", contrary),
        Claim("MC freq(P_A = 1)", 1.0, 0.0, "box A opened: found with certainty",
              lambda ctx: ctx.simulate("P_A", scen_a).freq("1")),
        Claim("pointer mean_q / lambda, P_C weak limit", -1.0, 1e-3,
              "pointer reading clusters at Re(C_w)", pointer_weak),
    )
    return NamedExample("three-box", PrePost(t), {"P_A": scen_a}, claims)


# ---------------------------------------------------------------------------


def shimony_tsvs() -> tuple[TwoStateVector, TwoStateVector]:
    """Forward and time-reversed two-state vectors for the total-spin device."""
    sp = ensemble.SHIMONY_SYSTEM
    h = 1 / np.sqrt(2)
    forward = TwoStateVector(bra([h, 0, 0, h], sp), ket([h, 0, h, 0], sp))
    return forward, reverse(forward)


def total_spin(space: HilbertSpace | None = None):
    """Total spin quantum number ``s`` (0 or 1) in the ``|s, m>`` basis."""
    return operator(np.diag([0.0, 1.0, 1.0, 1.0]), space or ensemble.SHIMONY_SYSTEM)


def shimony_pair() -> NamedExample:
    fwd, rev = shimony_tsvs()
    dev = ensemble.shimony_unitary()
    sp = ensemble.SHIMONY_SYSTEM
    scen_f = ensemble.Scenario(sp, fwd.ket, dev, ensemble.RankOne(fwd.bra))
    scen_r = ensemble.Scenario(sp, rev.ket, dev, ensemble.RankOne(rev.bra))
    S = total_spin()

    claims = (
        Claim("device Bayes Prob(1), forward", 0.5, 1e-12, "Bayes chain over device outcomes",
              lambda ctx: ensemble.exact_conditional(scen_f)["1"]),
        Claim("device Bayes Prob(1), reversed", 0.0, 1e-12, "outcome 1 orthogonal to post-selection",
              lambda ctx: ensemble.exact_conditional(scen_r)["1"]),
        Claim("MC freq(1), forward", 0.5, 0.0, "Bayes chain over device outcomes",
              lambda ctx: _within_sigmas(ctx.simulate("forward", scen_f), "1", 0.5)),
        Claim("MC freq(1), reversed", 0.0, 0.0, "outcome 1 orthogonal to post-selection",
              lambda ctx: ctx.simulate("reversed", scen_r).freq("1")),
        Claim("ABL Prob(1), forward", 0.0, 1e-12, "symmetric rule gives zero both ways",
              lambda ctx: abl_probability(fwd, S).prob(1.0)),
        Claim("ABL Prob(1), reversed", 0.0, 1e-12, "symmetric rule gives zero both ways",
              lambda ctx: abl_probability(rev, S).prob(1.0)),
    )
    return NamedExample("shimony-pair", PrePost(fwd),
                        {"forward": scen_f, "reversed": scen_r}, claims)


# ---------------------------------------------------------------------------


def spin_xy_tsv() -> TwoStateVector:
    h = 1 / np.sqrt(2)
    return TwoStateVector(bra([h, h]), ket([1, 0]))


def spin_xy() -> NamedExample:
    t = spin_xy_tsv()
    sx, sy, sz = pauli_x(t.space), pauli_y(t.space), pauli_z(t.space)
    scen = ensemble.Scenario(t.space, t.ket,
                             ensemble.Projective(spectral(sy)),
                             ensemble.RankOne(t.bra))

    def p_shift_sign(ctx):
        st = stats(evolve_pointer(t.ket, sy, Coupling(1.0, 40.0), t.bra))
        return float(np.sign(st.mean_p))

    claims = (
        Claim("weak (sigma_z)_w", 1.0, 1e-12, "weak value", lambda ctx: weak_value(t, sz).value),
        Claim("weak (sigma_x)_w", 1.0, 1e-12, "weak value", lambda ctx: weak_value(t, sx).value),
        Claim("weak (sigma_y)_w", 1j, 1e-12, "complex weak value", lambda ctx: weak_value(t, sy).value),
        Claim("ABL Prob(sigma_y = +1)", 0.5, 1e-12, "ABL rule", lambda ctx: abl_probability(t, sy).prob(1.0)),
        Claim("ABL Prob(sigma_y = -1)", 0.5, 1e-12, "ABL rule", lambda ctx: abl_probability(t, sy).prob(-1.0)),
        Claim("MC freq(sigma_y = +1)", 0.5, 0.0, "ABL rule",
              lambda ctx: _within_sigmas(ctx.simulate("sigma_y", scen), "1", 0.5)),
        Claim("pointer sign(mean_p) for sigma_y", 1.0, 0.0, "p-shift tracks Im(C_w)", p_shift_sign),
    )
    return NamedExample("spin-xy", PrePost(t), {"sigma_y": scen}, claims)


EXAMPLES: dict[str, Callable[[], NamedExample]] = {
    "three-box": three_box,
    "shimony-pair": shimony_pair,
    "spin-xy": spin_xy,
}
