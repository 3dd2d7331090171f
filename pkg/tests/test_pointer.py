import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tsvf.abl import abl_probability, born_probability
from tsvf.catalog import BOXES, spin_xy_tsv, three_box_tsv
from tsvf.errors import NullSelection, RegimeViolation
from tsvf.hilbert import HilbertSpace, basis_projector, bra, eigendecompose, ket, pauli_y, pauli_z
from tsvf.pointer import Coupling, evolve_pointer, stats, strong_readout
from tsvf.tsv import reverse
from tsvf.weak import weak_value

from helpers import grid_moments, grid_pointer, random_hermitian, random_tsv


def _grid(t, C, lam, delta, **kw):
    sd = eigendecompose(C)
    q, psi_q, dq = grid_pointer(t.ket.amplitudes, t.bra.amplitudes, sd.eigenvalues,
                                [p.matrix for p in sd.projectors], lam, delta, **kw)
    return grid_moments(q, psi_q, dq)


def test_coupling_validation():
    for bad in [(0, 1), (1, 0), (-1, 1), (np.inf, 1), (1, np.nan)]:
        with pytest.raises(ValueError):
            Coupling(*bad)


def test_three_box_pc_against_grid():
    t = three_box_tsv()
    PC = basis_projector(BOXES, "C")
    k = Coupling(0.1, 10.0)
    w = evolve_pointer(t.ket, PC, k, t.bra)
    s = stats(w)
    norm, mq, vq, mp = _grid(t, PC, 0.1, 10.0, half_width=120.0)
    assert mq == pytest.approx(-0.1, rel=0.1)
    assert s.mean_q == pytest.approx(mq, abs=1e-9)
    assert s.var_q == pytest.approx(vq, rel=1e-8)
    assert s.mean_p == pytest.approx(mp, abs=1e-9)
    assert s.survival == pytest.approx(norm, rel=1e-8)


@pytest.mark.parametrize("lam, delta", [(0.5, 1.0), (1.0, 0.7), (2.0, 3.0)])
def test_complex_weak_value_against_grid(lam, delta):
    t = spin_xy_tsv()
    s = stats(evolve_pointer(t.ket, pauli_y(), Coupling(lam, delta), t.bra))
    norm, mq, vq, mp = _grid(t, pauli_y(), lam, delta, half_width=40 * delta, step=delta / 40)
    assert s.mean_q == pytest.approx(mq, abs=1e-9)
    assert s.var_q == pytest.approx(vq, rel=1e-8)
    assert s.mean_p == pytest.approx(mp, abs=1e-8)
    assert s.survival == pytest.approx(norm, rel=1e-8)


def test_random_instances_against_grid(rng):
    space = HilbertSpace(3)
    for _ in range(5):
        t, C = random_tsv(rng, space, 0.1), random_hermitian(rng, space)
        lam, delta = rng.uniform(0.2, 2), rng.uniform(0.3, 2)
        s = stats(evolve_pointer(t.ket, C, Coupling(lam, delta), t.bra))
        norm, mq, vq, mp = _grid(t, C, lam, delta, half_width=40 * delta + 10 * lam, step=delta / 40)
        assert s.mean_q == pytest.approx(mq, abs=1e-8)
        assert s.var_q == pytest.approx(vq, rel=1e-7)
        assert s.mean_p == pytest.approx(mp, abs=1e-7)
        assert s.survival == pytest.approx(norm, rel=1e-7)


def test_density_integrates_to_one():
    t = three_box_tsv()
    w = evolve_pointer(t.ket, basis_projector(BOXES, "C"), Coupling(1.0, 0.4), t.bra)
    q = np.linspace(-10, 10, 20001)
    assert np.trapezoid(w.density(q), q) == pytest.approx(1, abs=1e-9)


def test_no_post_selection_is_born_mixture(rng):
    space = HilbertSpace(4)
    t, C = random_tsv(rng, space), random_hermitian(rng, space)
    k = Coupling(0.7, 0.3)
    w = evolve_pointer(t.ket, C, k)
    assert w.mixture and w.survival == 1.0
    s = stats(w)
    expectation = np.vdot(t.ket.amplitudes, C.matrix @ t.ket.amplitudes).real
    assert s.mean_q == pytest.approx(k.strength * expectation, abs=1e-12)
    assert s.mean_p == 0.0
    np.testing.assert_allclose(born_probability(t.ket, C).probabilities,
                               np.abs(w.amplitudes) ** 2, atol=1e-12)


@pytest.mark.parametrize("case", ["three-box", "spin-xy", "random"])
def test_strong_bridge(case, rng):
    if case == "three-box":
        t, C = three_box_tsv(), basis_projector(BOXES, "A")
    elif case == "spin-xy":
        t, C = spin_xy_tsv(), pauli_y()
    else:
        space = HilbertSpace(4)
        t, C = random_tsv(rng, space, 0.1), random_hermitian(rng, space)
    sd = eigendecompose(C)
    lam = 1.0
    gap = lam * np.min(np.diff(sd.eigenvalues))
    k = Coupling(lam, gap / 20)
    w = evolve_pointer(t.ket, sd, k, t.bra)
    got = strong_readout(w, sd, k).probabilities
    np.testing.assert_allclose(got, abl_probability(t, sd).probabilities, atol=1e-6)


def test_strong_bridge_without_post_selection(rng):
    space = HilbertSpace(3)
    pre, C = random_tsv(rng, space).ket, eigendecompose(random_hermitian(rng, space))
    gap = np.min(np.diff(C.eigenvalues))
    k = Coupling(1.0, gap / 20)
    got = strong_readout(evolve_pointer(pre, C, k), C, k).probabilities
    np.testing.assert_allclose(got, born_probability(pre, C).probabilities, atol=1e-6)


def test_regime_violation():
    t = spin_xy_tsv()
    k = Coupling(1.0, 0.5)
    w = evolve_pointer(t.ket, pauli_y(), k, t.bra)
    with pytest.raises(RegimeViolation):
        strong_readout(w, pauli_y(), k)


def test_null_selection():
    # post-selecting the opposite spin after a strong sigma_z coupling
    with pytest.raises(NullSelection):
        evolve_pointer(ket([1, 0]), pauli_z(), Coupling(1.0, 1e-3), bra([0, 1]))


@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_weak_bridge_mean_q(d, seed):
    rng = np.random.default_rng(seed)
    space = HilbertSpace(d)
    t, C = random_tsv(rng, space, 0.3), random_hermitian(rng, space)
    sd = eigendecompose(C)
    spread = float(sd.eigenvalues[-1] - sd.eigenvalues[0])
    lam = 0.05
    k = Coupling(lam, 20 * lam * spread)
    s = stats(evolve_pointer(t.ket, sd, k, t.bra))
    cw = weak_value(t, C).value
    assert abs(s.mean_q - lam * cw.real) <= 0.05 * lam * spread


@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_weak_bridge_mean_p(d, seed):
    rng = np.random.default_rng(seed)
    space = HilbertSpace(d)
    t, C = random_tsv(rng, space, 0.3), random_hermitian(rng, space)
    sd = eigendecompose(C)
    spread = float(sd.eigenvalues[-1] - sd.eigenvalues[0])
    lam = 0.05
    delta = 100 * lam * spread
    s = stats(evolve_pointer(t.ket, sd, Coupling(lam, delta), t.bra))
    cw = weak_value(t, C).value
    predicted = lam * cw.imag / (2 * delta ** 2)
    assert abs(s.mean_p - predicted) <= 0.01 * lam * (spread + abs(cw)) / (2 * delta ** 2)


def test_p_shift_sign_follows_imaginary_weak_value():
    t = spin_xy_tsv()
    assert stats(evolve_pointer(t.ket, pauli_y(), Coupling(1.0, 40.0), t.bra)).mean_p > 0
    r = reverse(t)
    assert weak_value(r, pauli_y()).value == pytest.approx(-1j)
    assert stats(evolve_pointer(r.ket, pauli_y(), Coupling(1.0, 40.0), r.bra)).mean_p < 0


def test_weak_survival_matches_overlap(rng):
    space = HilbertSpace(3)
    for _ in range(10):
        t, C = random_tsv(rng, space, 0.1), random_hermitian(rng, space)
        w = evolve_pointer(t.ket, C, Coupling(1e-6, 1.0), t.bra)
        assert w.survival == pytest.approx(abs(t.overlap) ** 2, abs=1e-8)
