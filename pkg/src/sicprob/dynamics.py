"""Generators of quantum dynamics acting on probability vectors.

Unitary evolution becomes rotation by orthogonal pseudobistochastic
matrices, open GKSL evolution becomes a pseudo-Kolmogorov generator (real,
zero column sums, possibly negative off-diagonal rates). This module
builds the Hermitian operator basis, the antisymmetric generator basis
spanning all Hamiltonian dynamics, the full GKSL-to-generator conversion,
and the two projections: onto the unitary subspace and onto the cone of
valid time-independent dissipative parts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._optim import OptConfig, multistart_minimize
from .errors import NumericalDomainError, PhysicalityError
from .linalg import frobenius_dist, mat_exp
from .sic import SicPovm

__all__ = [
    "Generator",
    "GkslSpec",
    "basis_sigma",
    "hgen_from_hamiltonian",
    "basis_hunit",
    "project_unit",
    "evolve_unitary",
    "evolve_time_ordered",
    "lgen_from_gksl",
    "kolmogorov_matrix",
    "omega_basis",
    "dgen_from_v",
    "project_mark",
    "is_time_independent_markovian",
]


@dataclass(frozen=True)
class Generator:
    """A pseudo-Kolmogorov generator, optionally split into its parts.

    ``matrix`` has zero column sums. When both parts are present,
    ``matrix = h_part + d_part`` with ``h_part`` the antisymmetric
    Hamiltonian piece and ``d_part`` the dissipative remainder.
    """

    dim: int
    matrix: np.ndarray
    h_part: np.ndarray | None = None
    d_part: np.ndarray | None = None


@dataclass(frozen=True)
class GkslSpec:
    """Hamiltonian plus noise operators defining a GKSL master equation."""

    dim: int
    hamiltonian: np.ndarray
    noise_ops: tuple[np.ndarray, ...] = field(default_factory=tuple)


def as_matrix(g: Generator | np.ndarray) -> np.ndarray:
    """Accept either a Generator bundle or a bare matrix."""
    if isinstance(g, Generator):
        return g.matrix
    return np.asarray(g, dtype=float)


def basis_sigma(d: int) -> np.ndarray:
    """Hermitian operator basis with ``Tr(sigma_i sigma_j) = 2 delta_ij``.

    Generalized Gell-Mann ordering: symmetric pair matrices
    (lexicographic), antisymmetric pair matrices (lexicographic), diagonal
    matrices in ascending size, and finally ``sqrt(2/d) I``. For ``d = 2``
    this is exactly ``(sigma_x, sigma_y, sigma_z, I)``.
    """
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    mats = []
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = 1
            m[k, j] = 1
            mats.append(m)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j
            m[k, j] = 1j
            mats.append(m)
    for l in range(1, d):
        m = np.zeros((d, d), dtype=complex)
        coeff = math.sqrt(2.0 / (l * (l + 1)))
        for mm in range(l):
            m[mm, mm] = coeff
        m[l, l] = -l * coeff
        mats.append(m)
    mats.append(math.sqrt(2.0 / d) * np.eye(d, dtype=complex))
    return np.stack(mats)


def _check_hermitian(h: np.ndarray, what: str = "Hamiltonian") -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"{what} must be square, got shape {h.shape}")
    dev = float(np.abs(h - h.conj().T).max())
    if dev > 1e-10:
        raise PhysicalityError(f"{what} is not Hermitian: max dev {dev:.3e}")
    return h


def _conjugated_superop(m: np.ndarray, s: SicPovm) -> np.ndarray:
    return s.kinv @ m @ s.kmat


def hgen_from_hamiltonian(h: np.ndarray, s: SicPovm) -> np.ndarray:
    """Hamiltonian part ``-i K^-1 (H (x) I - I (x) H.conj()) K``.

    Real, antisymmetric, zero row and column sums; depends only on the
    traceless part of ``H``.
    """
    h = _check_hermitian(h)
    d = s.dim
    if h.shape[0] != d:
        raise ValueError(f"Hamiltonian dimension {h.shape[0]} does not match SIC {d}")
    eye = np.eye(d)
    lam = -1j * (np.kron(h, eye) - np.kron(eye, h.conj()))
    hmat = _conjugated_superop(lam, s)
    imag = float(np.abs(hmat.imag).max())
    if imag > 1e-10:
        raise NumericalDomainError(f"generator has imaginary residual {imag:.3e}")
    return hmat.real


def basis_hunit(s: SicPovm) -> np.ndarray:
    """The ``d^2 - 1`` antisymmetric matrices spanning unitary generators.

    Built by feeding each traceless basis element through the Hamiltonian
    construction; normalized so ``Tr(H_i H_j^T) = 4 d delta_ij``.
    """
    d = s.dim
    sig = basis_sigma(d)
    eye = np.eye(d)
    out = []
    for i in range(d * d - 1):
        lam = -1j * (np.kron(sig[i], eye) - np.kron(eye, sig[i].conj()))
        hi = _conjugated_superop(lam, s)
        out.append(hi.real)
    return np.stack(out)


def project_unit(m: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Orthogonal projection onto the span of the unitary generator basis.

    ``P(M) = sum_i Tr(H_i^T M) H_i / (4 d)``; idempotent, and the identity
    on any Hamiltonian-generated matrix.
    """
    m = np.asarray(m, dtype=float)
    b = np.asarray(b)
    n = b.shape[1]
    if m.shape != (n, n):
        raise ValueError(f"matrix shape {m.shape} does not match basis {b.shape[1:]}")
    d = math.isqrt(n)
    coeffs = np.einsum("iab,ab->i", b, m)
    return np.einsum("i,iab->ab", coeffs, b) / (4.0 * d)


def evolve_unitary(
    g: Generator | np.ndarray, t: float, s: SicPovm | np.ndarray
) -> np.ndarray:
    """Rotation matrix ``exp(H t)`` for a unitary-part generator.

    ``s`` may be the SIC or a precomputed basis stack; it is needed to
    check that ``g`` actually lies in the unitary subspace (within 1e-8),
    which is what guarantees the result is orthogonal and
    pseudobistochastic.
    """
    h = as_matrix(g)
    basis = basis_hunit(s) if isinstance(s, SicPovm) else np.asarray(s)
    proj = project_unit(h, basis)
    dev = math.sqrt(frobenius_dist(proj, h))
    scale = max(1.0, math.sqrt(float(np.sum(h * h))))
    if dev > 1e-8 * scale:
        raise ValueError(
            f"generator is not in the unitary subspace (projection residual {dev:.3e})"
        )
    return mat_exp(h * float(t))


def evolve_time_ordered(gen_fn, t: float, steps: int | None = None) -> np.ndarray:
    """Time-ordered evolution by midpoint-rule product integration.

    ``gen_fn(t)`` returns the generator at time ``t`` (matrix or
    Generator). Defaults to 1000 steps per unit time. Later factors
    multiply from the left, matching the time-ordering convention.
    """
    t = float(t)
    if steps is None:
        steps = max(1, math.ceil(1000 * abs(t)))
    if steps < 1:
        raise ValueError(f"steps must be at least 1, got {steps}")
    dt = t / steps
    first = as_matrix(gen_fn(0.5 * dt))
    u = np.eye(first.shape[0])
    for k in range(steps):
        lk = as_matrix(gen_fn((k + 0.5) * dt))
        u = mat_exp(lk * dt) @ u
    return u


def _gksl_action(h: np.ndarray, noise_ops, x: np.ndarray) -> np.ndarray:
    out = -1j * (h @ x - x @ h)
    for v in noise_ops:
        vdv = v.conj().T @ v
        out += v @ x @ v.conj().T - 0.5 * (vdv @ x + x @ vdv)
    return out


def lgen_from_gksl(spec: GkslSpec, s: SicPovm) -> Generator:
    """Pseudo-Kolmogorov generator of a GKSL master equation.

    Builds ``C = H - (i/2) sum_k V_k^H V_k`` and conjugates
    ``Lambda = -i (C (x) I - I (x) C.conj()) + sum_k V_k (x) V_k.conj()``
    with the frame change. The result carries its Hamiltonian part and the
    dissipative remainder.

    Noise operators with a nonzero trace are allowed: the identity
    component of ``V = V0 + c I`` acts as the extra Hamiltonian
    ``(i/2)(c* V0 - c V0^H)``, so the returned split folds it into
    ``h_part`` and leaves ``d_part`` a genuine traceless-noise dissipator.
    """
    h = _check_hermitian(np.asarray(spec.hamiltonian, dtype=complex))
    d = s.dim
    if h.shape[0] != d:
        raise ValueError(f"Hamiltonian dimension {h.shape[0]} does not match SIC {d}")
    noise = [np.asarray(v, dtype=complex) for v in spec.noise_ops]
    for v in noise:
        if v.shape != (d, d):
            raise ValueError(f"noise operator shape {v.shape}, expected ({d}, {d})")
    eye = np.eye(d)
    c = h - 0.5j * sum((v.conj().T @ v for v in noise), start=np.zeros((d, d), complex))
    lam = -1j * (np.kron(c, eye) - np.kron(eye, c.conj()))
    lam += sum(
        (np.kron(v, v.conj()) for v in noise), start=np.zeros((d * d, d * d), complex)
    )
    lmat = _conjugated_superop(lam, s)
    imag = float(np.abs(lmat.imag).max())
    if imag > 1e-8:
        raise NumericalDomainError(f"generator has imaginary residual {imag:.3e}")
    lmat = lmat.real
    h_eff = h.astype(complex).copy()
    for v in noise:
        trace_coef = np.trace(v) / d
        v0 = v - trace_coef * eye
        h_eff += 0.5j * (np.conj(trace_coef) * v0 - trace_coef * v0.conj().T)
    h_part = hgen_from_hamiltonian(h_eff, s)
    return Generator(dim=d, matrix=lmat, h_part=h_part, d_part=lmat - h_part)


def kolmogorov_matrix(spec: GkslSpec, basis_states: np.ndarray | None = None) -> np.ndarray:
    """Classical rate matrix ``Tr[P_i L(P_j)]`` over an orthonormal basis.

    ``basis_states`` holds the vectors as columns; defaults to the
    computational basis. Off-diagonals are nonnegative and columns sum to
    zero, so this is a genuine Kolmogorov generator on the diagonal.
    """
    h = _check_hermitian(np.asarray(spec.hamiltonian, dtype=complex))
    d = h.shape[0]
    noise = [np.asarray(v, dtype=complex) for v in spec.noise_ops]
    if basis_states is None:
        basis_states = np.eye(d, dtype=complex)
    basis_states = np.asarray(basis_states, dtype=complex)
    ortho_dev = float(np.abs(basis_states.conj().T @ basis_states - np.eye(d)).max())
    if ortho_dev > 1e-10:
        raise ValueError(f"basis states are not orthonormal: dev {ortho_dev:.3e}")
    kmat = np.empty((d, d))
    projs = [np.outer(basis_states[:, i], basis_states[:, i].conj()) for i in range(d)]
    for j in range(d):
        image = _gksl_action(h, noise, projs[j])
        for i in range(d):
            kmat[i, j] = np.trace(projs[i] @ image).real
    return kmat


def omega_basis(s: SicPovm, b: np.ndarray) -> np.ndarray:
    """Dissipator basis family, indexed ``[i, j]`` over operator-basis pairs.

    ``Omega_ij = K^-1 (sigma_i (x) sigma_j.conj()
    - (sigma_j sigma_i (x) I)/2 - (I (x) (sigma_i sigma_j).conj())/2) K``;
    any PSD combination ``sum_ij P_ij Omega_ij`` is a valid dissipative
    part. Each element has zero column sums. ``b`` must hold the traceless
    operator-basis elements (the identity direction belongs to the
    Hamiltonian sector, not here).
    """
    d = s.dim
    n = d * d
    sig = np.asarray(b)
    m = sig.shape[0]
    eye = np.eye(d)
    omega = np.empty((m, m, n, n), dtype=complex)
    for i in range(m):
        for j in range(m):
            mid = np.kron(sig[i], sig[j].conj())
            mid -= 0.5 * np.kron(sig[j] @ sig[i], eye)
            mid -= 0.5 * np.kron(eye, (sig[i] @ sig[j]).conj())
            omega[i, j] = _conjugated_superop(mid, s)
    return omega


def dgen_from_v(vmat: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """Dissipative part generated by noise-coefficient matrix ``V``."""
    vmat = np.asarray(vmat, dtype=complex)
    p = vmat @ vmat.conj().T
    d = np.einsum("ij,ijab->ab", p, omega)
    imag = float(np.abs(d.imag).max())
    if imag > 1e-8:
        raise NumericalDomainError(f"dissipator has imaginary residual {imag:.3e}")
    return d.real


def _mark_objective_factory(dtilde: np.ndarray, omega: np.ndarray, m: int):
    def fun_grad(x: np.ndarray) -> tuple[float, np.ndarray]:
        v = (x[: m * m] + 1j * x[m * m :]).reshape(m, m)
        p = v @ v.conj().T
        model = np.einsum("ij,ijab->ab", p, omega).real
        resid = model - dtilde
        f = float(np.sum(resid**2))
        w = np.einsum("ab,ijab->ij", 2.0 * resid, omega)
        a = (w.T + w.conj()) / 2
        av = a @ v
        return f, np.concatenate([2 * av.real.ravel(), 2 * av.imag.ravel()])

    return fun_grad


def _mark_warm_start(dtilde: np.ndarray, omega: np.ndarray, m: int) -> np.ndarray:
    """Least-squares pre-fit of the coefficient matrix, then its PSD factor."""
    n2 = dtilde.size
    bmat = omega.reshape(m * m, n2).T
    stacked = np.concatenate([bmat.real, -bmat.imag], axis=1)
    sol, *_ = np.linalg.lstsq(stacked, dtilde.reshape(n2), rcond=None)
    p = (sol[: m * m] + 1j * sol[m * m :]).reshape(m, m)
    p = (p + p.conj().T) / 2
    vals, vecs = np.linalg.eigh(p)
    return vecs * np.sqrt(np.clip(vals, 0.0, None))


def project_mark(
    dtilde: np.ndarray, s: SicPovm, opt: OptConfig | None = None
) -> tuple[np.ndarray, float]:
    """Closest valid dissipative part to an arbitrary real matrix.

    Minimizes the Frobenius distance of ``sum_ij [V V^H]_ij Omega_ij`` to
    ``dtilde`` over complex coefficient matrices ``V``, multistart
    quasi-Newton with an analytic gradient, warm started from a linear
    pre-fit. Returns the projected matrix and the Frobenius norm of the
    residual.
    """
    opt = opt or OptConfig()
    d = s.dim
    n = d * d
    m = n - 1
    dtilde = np.asarray(dtilde, dtype=float)
    if dtilde.shape != (n, n):
        raise ValueError(f"matrix shape {dtilde.shape}, expected ({n}, {n})")
    sig = basis_sigma(d)[:-1]
    omega = omega_basis(s, sig)
    v0 = _mark_warm_start(dtilde, omega, m)
    x0 = np.concatenate([v0.real.ravel(), v0.imag.ravel()])
    result = multistart_minimize(_mark_objective_factory(dtilde, omega, m), x0, opt)
    v = (result.x[: m * m] + 1j * result.x[m * m :]).reshape(m, m)
    dproj = np.einsum("ij,ijab->ab", v @ v.conj().T, omega).real
    residual = math.sqrt(frobenius_dist(dproj, dtilde))
    return dproj, residual


def is_time_independent_markovian(
    g: Generator | np.ndarray,
    s: SicPovm,
    tol: float = 1e-6,
    opt: OptConfig | None = None,
) -> tuple[bool, float]:
    """Whether a generator splits into Hamiltonian plus valid dissipator.

    Computes ``r = ||P_unit(L) + P_mark(L - P_unit(L)) - L||_F`` and
    compares against ``tol``. ``r`` is dominated by the distance of the
    non-unitary remainder from the dissipative cone.
    """
    lmat = as_matrix(g)
    basis = basis_hunit(s)
    h_part = project_unit(lmat, basis)
    _, residual = project_mark(lmat - h_part, s, opt)
    return bool(residual <= tol), residual
