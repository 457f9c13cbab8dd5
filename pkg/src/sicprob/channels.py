"""Quantum channels as pseudostochastic matrices on probability vectors.

A channel acts on SIC probability vectors by an affine-free linear map: a
real matrix whose columns sum to 1 but whose entries may be negative.
This module builds that matrix from Kraus operators, converts to and from
Choi states, verifies complete positivity, projects noisy matrices onto
the CPTP set, and provides two positive-but-not-completely-positive
reference maps for contrast.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._optim import OptConfig
from .errors import NumericalDomainError, OptimizerError, PhysicalityError
from .sic import SicPovm

__all__ = [
    "CptpReport",
    "kraus_to_pstoch",
    "builtin_ptp",
    "pstoch_to_choi",
    "choi_to_pstoch",
    "is_cptp",
    "project_cptp",
    "compose",
    "apply",
]


def _check_kraus(kraus: list[np.ndarray], atol: float = 1e-9) -> tuple[int, int]:
    if not kraus:
        raise ValueError("empty Kraus set")
    d_out, d_in = kraus[0].shape
    for a in kraus:
        if a.shape != (d_out, d_in):
            raise ValueError("Kraus operators have inconsistent shapes")
    total = sum(a.conj().T @ a for a in kraus)
    dev = float(np.abs(total - np.eye(d_in)).max())
    if dev > atol:
        raise PhysicalityError(f"Kraus set is not trace preserving: |sum A^H A - I| = {dev:.3e}")
    return d_in, d_out


def kraus_to_pstoch(
    kraus: list[np.ndarray] | np.ndarray,
    sic_in: SicPovm,
    sic_out: SicPovm,
) -> np.ndarray:
    """Pseudostochastic matrix ``K_out^-1 (sum_k A_k (x) A_k.conj()) K_in``.

    Raises PhysicalityError for a non-trace-preserving Kraus set and
    NumericalDomainError if the result fails to be real to 1e-8.
    """
    kraus = [np.asarray(a, dtype=complex) for a in kraus]
    d_in, d_out = _check_kraus(kraus)
    if d_in != sic_in.dim or d_out != sic_out.dim:
        raise ValueError(
            f"Kraus shape ({d_out}, {d_in}) does not match SICs ({sic_out.dim}, {sic_in.dim})"
        )
    amat = sum(np.kron(a, a.conj()) for a in kraus)
    s = sic_out.kinv @ amat @ sic_in.kmat
    imag = float(np.abs(s.imag).max())
    if imag > 1e-8:
        raise NumericalDomainError(f"channel matrix has imaginary residual {imag:.3e}")
    return s.real


def _pstoch_from_action(phi, sic: SicPovm) -> np.ndarray:
    """Elementwise construction from a map's action on the projectors."""
    d = sic.dim
    offset = np.einsum("iab,ba->i", sic.projectors, phi(np.eye(d, dtype=complex))).real / d
    s = np.empty((d * d, d * d))
    for j in range(d * d):
        out = phi(sic.projectors[j])
        s[:, j] = (d + 1) / d * np.einsum("iab,ba->i", sic.projectors, out).real - offset
    return s


def builtin_ptp(name: str, sic: SicPovm) -> np.ndarray:
    """Positive trace-preserving (but not CP) example maps.

    ``"transposition"`` is ``X -> X^T``; ``"reduction"`` is
    ``X -> (Tr(X) I - X)/(d-1)``. Both are unital, so their matrices are
    pseudobistochastic; neither passes :func:`is_cptp`.
    """
    d = sic.dim
    if name == "transposition":
        return _pstoch_from_action(lambda x: x.T, sic)
    if name == "reduction":
        if d < 2:
            raise ValueError("reduction map needs dimension at least 2")
        return _pstoch_from_action(
            lambda x: (np.trace(x) * np.eye(d, dtype=complex) - x) / (d - 1), sic
        )
    raise ValueError(f"unknown builtin map {name!r}; choose 'transposition' or 'reduction'")


def _check_column_sums(s: np.ndarray, atol: float = 1e-9) -> None:
    dev = float(np.abs(s.sum(axis=0) - 1.0).max())
    if dev > atol:
        raise ValueError(f"columns do not sum to 1 (max deviation {dev:.3e})")


def pstoch_to_choi(s: np.ndarray, sic_in: SicPovm, sic_out: SicPovm) -> np.ndarray:
    """Choi state of the channel, index order ``(in, out) x (in, out)``.

    Built by conjugating with the frame-change matrices and reshuffling;
    Hermitian to 1e-9 for any real input with unit column sums.
    """
    s = np.asarray(s, dtype=float)
    d_in, d_out = sic_in.dim, sic_out.dim
    if s.shape != (d_out * d_out, d_in * d_in):
        raise ValueError(f"matrix shape {s.shape} does not match SIC dims ({d_out}², {d_in}²)")
    _check_column_sums(s)
    r = (sic_out.kmat @ s @ sic_in.kinv) / d_in
    rho = (
        r.reshape(d_out, d_out, d_in, d_in)
        .transpose(2, 0, 3, 1)
        .reshape(d_in * d_out, d_in * d_out)
    )
    herm = float(np.abs(rho - rho.conj().T).max())
    if herm > 1e-9:
        raise NumericalDomainError(f"Choi matrix not Hermitian: dev {herm:.3e}")
    return rho


def choi_to_pstoch(rho: np.ndarray, sic_in: SicPovm, sic_out: SicPovm) -> np.ndarray:
    """Inverse of :func:`pstoch_to_choi`."""
    rho = np.asarray(rho, dtype=complex)
    d_in, d_out = sic_in.dim, sic_out.dim
    n = d_in * d_out
    if rho.shape != (n, n):
        raise ValueError(f"Choi matrix shape {rho.shape}, expected ({n}, {n})")
    r = (
        rho.reshape(d_in, d_out, d_in, d_out)
        .transpose(1, 3, 0, 2)
        .reshape(d_out * d_out, d_in * d_in)
    )
    s = d_in * (sic_out.kinv @ r @ sic_in.kmat)
    imag = float(np.abs(s.imag).max())
    if imag > 1e-8:
        raise NumericalDomainError(f"channel matrix has imaginary residual {imag:.3e}")
    return s.real


@dataclass(frozen=True)
class CptpReport:
    """Evidence behind an is_cptp verdict."""

    ok: bool
    min_choi_eig: float
    tp_residual: float
    herm_residual: float


def is_cptp(
    s: np.ndarray, sic_in: SicPovm, sic_out: SicPovm, tol: float = 1e-9
) -> tuple[bool, CptpReport]:
    """Complete-positivity and trace-preservation check via the Choi state.

    True iff the Choi matrix is PSD to ``-tol`` and its partial trace over
    the output factor equals ``I/d_in`` within ``tol`` (the latter is the
    matrix form of ``sum_k A_k^H A_k = I``). Report-only; never raises for
    an unphysical matrix.
    """
    s = np.asarray(s, dtype=float)
    d_in, d_out = sic_in.dim, sic_out.dim
    r = (sic_out.kmat @ s @ sic_in.kinv) / d_in
    rho = (
        r.reshape(d_out, d_out, d_in, d_in)
        .transpose(2, 0, 3, 1)
        .reshape(d_in * d_out, d_in * d_out)
    )
    herm = float(np.abs(rho - rho.conj().T).max())
    rho_h = (rho + rho.conj().T) / 2
    min_eig = float(np.linalg.eigvalsh(rho_h).min())
    tr_out = np.einsum(
        "iaja->ij", rho_h.reshape(d_in, d_out, d_in, d_out)
    )
    tp_dev = float(np.abs(tr_out - np.eye(d_in) / d_in).max())
    ok = min_eig >= -tol and tp_dev <= tol and herm <= max(tol, 1e-9)
    return ok, CptpReport(
        ok=ok, min_choi_eig=min_eig, tp_residual=tp_dev, herm_residual=herm
    )


def _theta_stack(sic_in: SicPovm, sic_out: SicPovm, sig: np.ndarray) -> np.ndarray:
    """Channel basis elements ``K_out^-1 (sigma_i (x) sigma_j.conj()) K_in``.

    The conjugate on the second factor is what makes ``sum P_ij Theta_ij``
    with PSD ``P`` exactly the CP channels; without it the Choi state of
    the expansion is not PSD-equivalent to ``P``.
    """
    d = sic_in.dim
    n = d * d
    kinv4 = sic_out.kinv.reshape(n, d, d)
    kmat4 = sic_in.kmat.reshape(d, d, n)
    return np.einsum("ace,icf,jeg,fgb->ijab", kinv4, sig, sig.conj(), kmat4, optimize=True)


def _tp_operator(p: np.ndarray, sig: np.ndarray) -> np.ndarray:
    """``sum_k A_k^H A_k`` expressed through the coefficient Gram matrix."""
    return np.einsum("ji,iab,jbc->ac", p, sig, sig)


def _kraus_coeffs_from_choi(rho: np.ndarray, d: int, sig: np.ndarray) -> np.ndarray:
    """Warm-start V: clip the Choi spectrum, read off Kraus coefficients."""
    n = d * d
    rho_h = (rho + rho.conj().T) / 2
    vals, vecs = np.linalg.eigh(rho_h)
    v0 = np.zeros((n, n), dtype=complex)
    col = 0
    for lam, u in zip(vals[::-1], vecs.T[::-1]):
        if lam <= 1e-12:
            continue
        a = (np.sqrt(d * lam) * u).reshape(d, d).T
        v0[:, col] = np.einsum("iab,ba->i", sig, a) / 2
        col += 1
    return v0


def project_cptp(
    s_raw: np.ndarray,
    sic_in: SicPovm,
    sic_out: SicPovm,
    opt: OptConfig | None = None,
) -> np.ndarray:
    """Nearest CPTP channel matrix in Frobenius distance.

    Parametrizes the channel by a coefficient matrix ``V`` (Kraus operators
    expanded in the Hermitian basis), which makes complete positivity
    automatic, and treats trace preservation as a quadratic penalty whose
    weight is ramped up across optimization stages. The best of
    ``opt.restarts`` perturbed runs is then repaired to exact trace
    preservation by the substitution ``A_k -> A_k T^{-1/2}`` with
    ``T = sum_k A_k^H A_k``, so the returned matrix is exactly CPTP.

    Raises OptimizerError if no restart converges or the trace operator of
    the best run is close to singular.
    """
    from .dynamics import basis_sigma

    if sic_in.dim != sic_out.dim:
        raise ValueError("projection requires equal input and output dimensions")
    opt = opt or OptConfig()
    d = sic_in.dim
    n = d * d
    s_raw = np.asarray(s_raw, dtype=float)
    if s_raw.shape != (n, n):
        raise ValueError(f"matrix shape {s_raw.shape}, expected ({n}, {n})")
    sig = basis_sigma(d)
    theta = _theta_stack(sic_in, sic_out, sig)
    eye = np.eye(d)

    r = (sic_out.kmat @ s_raw @ sic_in.kinv) / d
    rho = (
        r.reshape(d, d, d, d).transpose(2, 0, 3, 1).reshape(n, n)
    )
    v_start = _kraus_coeffs_from_choi(rho, d, sig)
    x_start = np.concatenate([v_start.real.ravel(), v_start.imag.ravel()])

    def make_objective(mu: float):
        def fun_grad(x: np.ndarray) -> tuple[float, np.ndarray]:
            v = (x[: n * n] + 1j * x[n * n :]).reshape(n, n)
            p = v @ v.conj().T
            s_model = np.einsum("ij,ijab->ab", p, theta).real
            resid = s_model - s_raw
            t_dev = _tp_operator(p, sig) - eye
            f = float(np.sum(resid**2)) + mu * float(np.sum(np.abs(t_dev) ** 2))
            w = np.einsum("ab,ijab->ij", 2.0 * resid, theta)
            w += 2.0 * mu * np.einsum("ab,ibc,jca->ji", t_dev, sig, sig)
            a = (w.T + w.conj()) / 2
            av = a @ v
            grad = np.concatenate([2 * av.real.ravel(), 2 * av.imag.ravel()])
            return f, grad

        return fun_grad

    import scipy.optimize

    best: tuple[float, np.ndarray] | None = None
    n_converged = 0
    for k in range(max(1, opt.restarts)):
        if k == 0:
            x = x_start.copy()
        else:
            rng = np.random.default_rng(opt.seed + k)
            x = x_start + 0.3 * rng.standard_normal(x_start.shape)
        res = None
        for mu in (1.0, 10.0, 100.0, 1000.0):
            res = scipy.optimize.minimize(
                make_objective(mu),
                x,
                jac=True,
                method="L-BFGS-B",
                options={"maxiter": opt.max_iter, "gtol": opt.grad_tol, "ftol": 1e-14},
            )
            x = res.x
        grad_inf = float(np.abs(res.jac).max())
        if res.success or grad_inf <= 1e-5 * max(1.0, abs(res.fun)):
            n_converged += 1
        if np.isfinite(res.fun) and (best is None or res.fun < best[0]):
            best = (float(res.fun), res.x.copy())
    if best is None or n_converged == 0:
        raise OptimizerError(f"CPTP projection failed to converge in {opt.restarts} restarts")

    v = (best[1][: n * n] + 1j * best[1][n * n :]).reshape(n, n)
    t_op = _tp_operator(v @ v.conj().T, sig)
    vals, vecs = np.linalg.eigh((t_op + t_op.conj().T) / 2)
    if vals.min() < 1e-8:
        raise OptimizerError(
            f"trace operator nearly singular after optimization (min eig {vals.min():.3e})"
        )
    t_inv_sqrt = (vecs / np.sqrt(vals)) @ vecs.conj().T
    rescale = np.einsum("iab,jbc,ca->ij", sig, sig, t_inv_sqrt) / 2
    v = rescale @ v
    p = v @ v.conj().T
    s_proj = np.einsum("ij,ijab->ab", p, theta).real
    ok, report = is_cptp(s_proj, sic_in, sic_out, tol=1e-7)
    if not ok:
        raise OptimizerError(
            f"projection output failed the CPTP check: min Choi eig {report.min_choi_eig:.3e}, "
            f"TP residual {report.tp_residual:.3e}"
        )
    return s_proj


def compose(s2: np.ndarray, s1: np.ndarray) -> np.ndarray:
    """Channel composition: ``s2`` after ``s1``."""
    s2 = np.asarray(s2, dtype=float)
    s1 = np.asarray(s1, dtype=float)
    if s2.shape[1] != s1.shape[0]:
        raise ValueError(f"inner dimensions do not match: {s2.shape} @ {s1.shape}")
    return s2 @ s1


def apply(s: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Act on a probability vector."""
    s = np.asarray(s, dtype=float)
    p = np.asarray(p, dtype=float)
    if s.shape[1] != p.shape[0]:
        raise ValueError(f"dimension mismatch: matrix {s.shape}, vector {p.shape}")
    return s @ p
