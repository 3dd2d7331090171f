"""Von Neumann pointer model with a Gaussian pointer.

The interaction ``H = g(t) p C`` with ``int g = lambda`` (hbar = 1) shifts
the pointer wavefunction by ``lambda * c_n`` on the ``P_n`` branch. The
pointer state is stored analytically as a list of Gaussian components

    psi(q) = sum_k a_k G(q - mu_k),   G(q) = (2 pi D^2)^(-1/4) exp(-q^2 / (4 D^2))

so ``|G|^2`` has variance ``D^2``. The product ``G(q - mu_k) G(q - mu_l)`` is
a normal density of variance ``D^2`` centred at ``(mu_k + mu_l) / 2`` scaled by
``exp(-(mu_k - mu_l)^2 / (8 D^2))``, which gives every moment in closed form.

For a weak coupling with pre/post-selection the pointer ends up displaced
by ``lambda * Re(C_w)`` in ``q`` and ``lambda * Im(C_w) / (2 D^2)`` in ``p``
to first order in ``lambda / D``. The second follows from writing the
post-selected pointer as ``<Phi|Psi> G(q - lambda C_w)`` with complex shift
and expanding the exponent: the imaginary part of the shift contributes a
phase ``exp(i q lambda Im(C_w) / (2 D^2))``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .abl import OutcomeDistribution, spectral
from .errors import DimensionMismatch, NullSelection, RegimeViolation
from .hilbert import Bra, Ket

NULL_SELECTION_TOL = 1e-14


@dataclass(frozen=True)
class Coupling:
    strength: float
    pointer_width: float

    def __post_init__(self):
        for name in ("strength", "pointer_width"):
            v = float(getattr(self, name))
            if not np.isfinite(v) or v <= 0:
                raise ValueError(f"{name} must be positive and finite, got {v}")
            object.__setattr__(self, name, v)


@dataclass(frozen=True, eq=False)
class PointerWavefunction:
    """Gaussian-component pointer state.

    ``mixture=True`` marks an incoherent mixture (no post-selection): the
    squared amplitudes are then branch weights and no interference terms
    are formed.
    """

    amplitudes: np.ndarray = field(repr=False)
    centers: np.ndarray
    width: float
    normalization: float
    mixture: bool = False

    @property
    def components(self) -> list[tuple[complex, float]]:
        return list(zip(self.amplitudes.tolist(), self.centers.tolist()))

    @property
    def survival(self) -> float:
        return self.normalization

    def density(self, q) -> np.ndarray:
        """``|psi(q)|^2`` (or the mixture density) on an array of points."""
        q = np.asarray(q, dtype=float)[..., None]
        g = (2 * np.pi * self.width ** 2) ** -0.25 * np.exp(
            -(q - self.centers) ** 2 / (4 * self.width ** 2))
        if self.mixture:
            return (np.abs(self.amplitudes) ** 2 * g ** 2).sum(-1)
        return np.abs((self.amplitudes * g).sum(-1)) ** 2


@dataclass(frozen=True)
class PointerStats:
    mean_q: float
    var_q: float
    mean_p: float
    survival: float


def _overlaps(centers: np.ndarray, width: float):
    diff = centers[:, None] - centers[None, :]
    mid = 0.5 * (centers[:, None] + centers[None, :])
    return np.exp(-diff ** 2 / (8 * width ** 2)), mid, diff


def evolve_pointer(pre: Ket, C, k: Coupling, post: Bra | None = None
                   ) -> PointerWavefunction:
    C = spectral(C)
    if not pre.space.compatible(C.space):
        raise DimensionMismatch("state and observable live in different spaces")
    centers = k.strength * C.eigenvalues
    psi = pre.amplitudes
    if post is None:
        weights = np.array([np.vdot(p.matrix @ psi, p.matrix @ psi).real
                            for p in C.projectors])
        weights /= weights.sum()
        return PointerWavefunction(np.sqrt(weights).astype(complex), centers,
                                   k.pointer_width, 1.0, mixture=True)

    if not post.space.compatible(pre.space):
        raise DimensionMismatch("post-selected bra lives in a different space")
    amps = np.array([post.amplitudes @ (p.matrix @ psi) for p in C.projectors])
    overlap, _, _ = _overlaps(centers, k.pointer_width)
    survival = float(np.real(amps.conj() @ overlap @ amps))
    if survival < NULL_SELECTION_TOL:
        raise NullSelection("post-selection probability vanishes")
    return PointerWavefunction(amps / np.sqrt(survival), centers,
                               k.pointer_width, survival)


def stats(w: PointerWavefunction) -> PointerStats:
    a, mu, width = w.amplitudes, w.centers, w.width
    if w.mixture:
        weights = np.abs(a) ** 2
        weights = weights / weights.sum()
        mean = float(weights @ mu)
        var = width ** 2 + float(weights @ (mu - mean) ** 2)
        return PointerStats(mean, var, 0.0, w.normalization)

    overlap, mid, diff = _overlaps(mu, width)
    rho = np.outer(a.conj(), a) * overlap
    norm = float(rho.sum().real)
    mean = float((rho * mid).sum().real) / norm
    var = float((rho * ((mid - mean) ** 2 + width ** 2)).sum().real) / norm
    # <p> = -i int psi* psi' dq, evaluated termwise on Gaussian pairs
    mean_p = float((rho * 1j * diff).sum().real) / (4 * width ** 2 * norm)
    return PointerStats(mean, var, mean_p, w.normalization)


def _normal_mass(lo, hi, mean, sd):
    # integrate in whichever tail keeps the difference well conditioned
    a, b = (lo - mean) / sd, (hi - mean) / sd
    upper = a > 0
    return np.where(upper, ndtr(-a) - ndtr(-b), ndtr(b) - ndtr(a))


def strong_readout(w: PointerWavefunction, C, k: Coupling) -> OutcomeDistribution:
    """Probability of the pointer landing in each eigenvalue's bin.

    Bins are centred on ``lambda * c_n`` with boundaries at the midpoints
    between neighbouring centres. Only meaningful when the pointer is much
    narrower than the bin spacing.
    """
    C = spectral(C)
    if len(w.centers) != len(C):
        raise DimensionMismatch("pointer components do not match the observable")
    centers = k.strength * C.eigenvalues
    if len(C) > 1:
        gap = float(np.min(np.diff(centers)))
        if w.width > gap / 10:
            raise RegimeViolation(
                f"pointer width {w.width:g} is not small against the "
                f"bin spacing {gap:g} (need width <= spacing / 10)")
    edges = np.concatenate(([-np.inf], 0.5 * (centers[1:] + centers[:-1]), [np.inf]))
    lo, hi = edges[:-1], edges[1:]

    a, mu = w.amplitudes, w.centers
    if w.mixture:
        weights = np.abs(a) ** 2
        mass = np.array([(weights * _normal_mass(l, h, mu, w.width)).sum()
                         for l, h in zip(lo, hi)])
    else:
        overlap, mid, _ = _overlaps(mu, w.width)
        rho = np.outer(a.conj(), a) * overlap
        mass = np.array([(rho * _normal_mass(l, h, mid, w.width)).sum().real
                         for l, h in zip(lo, hi)])
    mass = np.clip(mass, 0.0, None)
    return OutcomeDistribution(C, mass / mass.sum())
