"""Random instance generators and independent oracles for the test suite.

Oracles here deliberately avoid the package's own evaluation paths: they
work on raw numpy arrays, enumerate outcome trees explicitly, or discretize
the pointer on a grid.
"""
import numpy as np

from tsvf.hilbert import Bra, Ket, Operator
from tsvf.tsv import GeneralizedTSV, Term, TwoStateVector


def random_vector(rng, d):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_ket(rng, space):
    return Ket(space, random_vector(rng, space.dimension))


def random_bra(rng, space):
    return Bra(space, random_vector(rng, space.dimension))


def random_hermitian_matrix(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


def random_hermitian(rng, space):
    return Operator(space, random_hermitian_matrix(rng, space.dimension))


def random_unitary(rng, d):
    q, r = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_degenerate_hermitian(rng, space, n_distinct):
    """Hermitian operator with at most ``n_distinct`` eigenvalues (forced degeneracy)."""
    d = space.dimension
    vals = rng.choice(np.arange(-3, 4), size=n_distinct, replace=False).astype(float)
    spectrum = vals[rng.integers(0, n_distinct, size=d)]
    u = random_unitary(rng, d)
    return Operator(space, u @ np.diag(spectrum) @ u.conj().T)


def random_tsv(rng, space, min_overlap=0.0):
    while True:
        t = TwoStateVector(random_bra(rng, space), random_ket(rng, space))
        if abs(t.overlap) >= min_overlap:
            return t


def random_generalized(rng, space, n_terms):
    ub = random_unitary(rng, space.dimension)
    uk = random_unitary(rng, space.dimension)
    coeffs = rng.normal(size=n_terms) + 1j * rng.normal(size=n_terms)
    terms = [Term(coeffs[i], Bra(space, ub[:, i].conj()), Ket(space, uk[:, i]))
             for i in range(n_terms)]
    return GeneralizedTSV(tuple(terms))


# ---------------------------------------------------------------------------
# oracles


def sequential_born_tree(psi, c_projectors, f_projectors):
    """Joint probabilities P(c_n, f) by explicit collapse-and-measure."""
    joint = np.zeros((len(c_projectors), len(f_projectors)))
    for n, pn in enumerate(c_projectors):
        v = pn @ psi
        pc = np.vdot(v, v).real
        if pc == 0:
            continue
        collapsed = v / np.sqrt(pc)
        for f, pf in enumerate(f_projectors):
            w = pf @ collapsed
            joint[n, f] = pc * np.vdot(w, w).real
    return joint


def brute_force_total_spin_squared():
    """S^2 for two spins from explicit spin matrices, diagonalized by eigh."""
    sx = np.array([[0, 1], [1, 0]]) / 2
    sy = np.array([[0, -1j], [1j, 0]]) / 2
    sz = np.array([[1, 0], [0, -1]]) / 2
    i2 = np.eye(2)
    s2 = np.zeros((4, 4), dtype=complex)
    for s in (sx, sy, sz):
        tot = np.kron(s, i2) + np.kron(i2, s)
        s2 += tot @ tot
    return s2


def grid_pointer(psi, phi_row, eigvals, projectors, lam, delta, half_width=80.0, step=None):
    """Post-selected pointer on a q grid by explicit unitary evolution.

    The joint state sum_j |j> phi0(q) is evolved with exp(-i lam p C) through
    an FFT (each eigenspace gets a momentum phase), then projected onto the
    post-selected bra. Returns (q, psi_q, dq) with psi_q unnormalized.
    """
    step = step or delta / 50
    q = np.arange(-half_width, half_width, step)
    phi0 = (2 * np.pi * delta ** 2) ** -0.25 * np.exp(-q ** 2 / (4 * delta ** 2))
    p = 2 * np.pi * np.fft.fftfreq(q.size, d=step)
    f0 = np.fft.fft(phi0)
    out = np.zeros(q.size, dtype=complex)
    for c, proj in zip(eigvals, projectors):
        amp = phi_row @ (proj @ psi)
        shifted = np.fft.ifft(f0 * np.exp(-1j * lam * c * p))
        out += amp * shifted
    return q, out, step


def grid_moments(q, psi_q, dq):
    dens = np.abs(psi_q) ** 2
    norm = dens.sum() * dq
    mean_q = (q * dens).sum() * dq / norm
    var_q = ((q - mean_q) ** 2 * dens).sum() * dq / norm
    p = 2 * np.pi * np.fft.fftfreq(q.size, d=dq)
    pk = np.abs(np.fft.fft(psi_q)) ** 2
    mean_p = (p * pk).sum() / pk.sum()
    return norm, mean_q, var_q, mean_p
