"""Quantifying how non-classical and non-Markovian an evolution is.

A generator drives classical stochastic dynamics exactly when its
off-diagonal entries are nonnegative. Negative entries may be an artifact
of the chosen SIC frame; the quantity computed here conjugates the
generator over the whole family of unitary frame rotations and reports the
negativity that survives at the most favorable frame, so a strictly
positive value certifies genuinely quantum dynamics. A second measure
projects an evolution matrix onto those generated by time-independent
Markovian master equations and reports the normalized distance.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from ._optim import OptConfig
from .dynamics import (
    Generator,
    as_matrix,
    basis_hunit,
    project_mark,
    project_unit,
)
from .errors import OptimizerError
from .linalg import frobenius_dist, mat_exp, mat_log_real
from .sic import SicPovm
from .states import MeasurementMap

__all__ = [
    "OptConfig",
    "ExperimentScheme",
    "DeltaQuantReport",
    "MarkovReport",
    "EvolutionAnalysis",
    "classicality_check",
    "negativity",
    "delta_quant",
    "delta_quant_detail",
    "markov_projection",
    "delta_nmark",
    "markov_report",
    "analyze_evolution",
    "experiment_compose",
]


def classicality_check(g: Generator | np.ndarray) -> bool:
    """True iff every off-diagonal entry is ``>= -1e-12``.

    For a zero-column-sum generator this is exactly the condition for
    ``exp(L t)`` to be stochastic at all positive times.
    """
    m = as_matrix(g)
    off = m - np.diag(np.diag(m))
    return bool(off.min() >= -1e-12)


def negativity(m: np.ndarray) -> float:
    """Magnitude of the most negative off-diagonal entry (0 if none)."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    off = m.copy()
    np.fill_diagonal(off, 0.0)
    return float(max(0.0, -off.min()))


@dataclass(frozen=True)
class DeltaQuantReport:
    """Best frame found by the nonclassicality search."""

    value: float
    lam: np.ndarray
    restarts_agreeing: int


def _conjugated_negativity(lam: np.ndarray, lmat: np.ndarray, basis: np.ndarray) -> float:
    u = mat_exp(np.einsum("i,iab->ab", lam, basis))
    return negativity(u @ lmat @ u.T)


def _coordinate_polish(
    fun, lam: np.ndarray, step0: float = 0.05, step_min: float = 1e-7
) -> tuple[np.ndarray, float]:
    """Shrinking-step coordinate descent; cleans up the simplex optimum."""
    lam = lam.copy()
    best = fun(lam)
    step = step0
    while step > step_min:
        improved = False
        for i in range(lam.size):
            for sign in (1.0, -1.0):
                trial = lam.copy()
                trial[i] += sign * step
                val = fun(trial)
                if val < best - 1e-15:
                    lam, best = trial, val
                    improved = True
        if not improved:
            step /= 2
    return lam, best


def delta_quant_detail(
    g: Generator | np.ndarray, b: np.ndarray, opt: OptConfig | None = None
) -> DeltaQuantReport:
    """Irremovable negativity of a generator, with search diagnostics.

    Minimizes ``negativity(U L U^T)`` over the frame rotations
    ``U = exp(sum_i lam_i H_i)``. The first restart starts at the identity
    (so the result never exceeds the raw negativity); the rest start from
    uniform random ``lam`` in ``[-pi, pi]`` per coordinate, with search
    bounds ``[-4 pi, 4 pi]``. Each simplex run is followed by a
    coordinate-descent polish. The reported value is an upper bound of the
    true infimum; zero means the negativity is a frame artifact.
    """
    lmat = as_matrix(g)
    basis = np.asarray(b)
    opt = opt or OptConfig(restarts=32)
    nlam = basis.shape[0]

    def fun(lam: np.ndarray) -> float:
        return _conjugated_negativity(lam, lmat, basis)

    results: list[tuple[float, np.ndarray]] = []
    for k in range(opt.restarts):
        if k == 0:
            lam0 = np.zeros(nlam)
        else:
            rng = np.random.default_rng(opt.seed + k)
            lam0 = rng.uniform(-np.pi, np.pi, nlam)
        res = scipy.optimize.minimize(
            fun,
            lam0,
            method="Nelder-Mead",
            bounds=scipy.optimize.Bounds(-4 * np.pi, 4 * np.pi),
            options={"maxiter": opt.max_iter, "xatol": 1e-6, "fatol": 1e-10},
        )
        results.append((float(res.fun), res.x))
    if not any(np.isfinite(f) for f, _ in results):
        raise OptimizerError(f"nonclassicality search failed in {opt.restarts} restarts")
    best_f, best_lam = min(results, key=lambda r: r[0])
    best_lam, best_f = _coordinate_polish(fun, best_lam)
    agreeing = sum(1 for f, _ in results if f <= best_f + 1e-3)
    return DeltaQuantReport(value=best_f, lam=best_lam, restarts_agreeing=agreeing)


def delta_quant(
    g: Generator | np.ndarray, b: np.ndarray, opt: OptConfig | None = None
) -> float:
    """Negativity of a generator minimized over unitary frame changes."""
    return delta_quant_detail(g, b, opt).value


def _markov_parts(s_matrix: np.ndarray, s: SicPovm, opt: OptConfig | None):
    lmat = mat_log_real(np.asarray(s_matrix, dtype=float))
    basis = basis_hunit(s)
    h_part = project_unit(lmat, basis)
    d_proj, residual = project_mark(lmat - h_part, s, opt)
    s_mark = mat_exp(h_part + d_proj)
    return lmat, h_part, d_proj, residual, s_mark


def markov_projection(
    s_matrix: np.ndarray, s: SicPovm, opt: OptConfig | None = None
) -> np.ndarray:
    """Closest evolution generated by a time-independent master equation.

    Takes the real principal log of the matrix, keeps its unitary part,
    projects the remainder onto valid dissipative parts, and
    re-exponentiates. Raises LogBranchError (with the offending
    eigenvalues) when the log does not exist on the principal branch.
    """
    return _markov_parts(s_matrix, s, opt)[4]


def delta_nmark(s_matrix: np.ndarray, s: SicPovm, opt: OptConfig | None = None) -> float:
    """Non-Markovianity: ``sqrt(frobenius_dist(S, S_mark)) / d^2``."""
    s_matrix = np.asarray(s_matrix, dtype=float)
    s_mark = markov_projection(s_matrix, s, opt)
    return math.sqrt(frobenius_dist(s_matrix, s_mark)) / (s.dim * s.dim)


@dataclass(frozen=True)
class MarkovReport:
    """Markovian projection of an evolution matrix, with distances."""

    delta_nmark: float
    s_mark: np.ndarray
    log_residual: float


def markov_report(
    s_matrix: np.ndarray, s: SicPovm, opt: OptConfig | None = None
) -> MarkovReport:
    """Markovian projection bundled with its quality diagnostics.

    ``log_residual`` is the reconstruction error ``||exp(log S) - S||_F``
    of the real principal logarithm, i.e. how trustworthy the generator
    extraction itself was.
    """
    s_matrix = np.asarray(s_matrix, dtype=float)
    lmat, _, _, _, s_mark = _markov_parts(s_matrix, s, opt)
    log_resid = math.sqrt(frobenius_dist(mat_exp(lmat), s_matrix))
    value = math.sqrt(frobenius_dist(s_matrix, s_mark)) / (s.dim * s.dim)
    return MarkovReport(delta_nmark=value, s_mark=s_mark, log_residual=log_resid)


@dataclass(frozen=True)
class EvolutionAnalysis:
    """Everything the generator-level analysis of one evolution produces."""

    log: np.ndarray
    h_part: np.ndarray
    d_part: np.ndarray
    quant: DeltaQuantReport
    mark: MarkovReport
    markov_residual: float


def analyze_evolution(
    s_matrix: np.ndarray, s: SicPovm, opt: OptConfig | None = None
) -> EvolutionAnalysis:
    """Full generator analysis of one evolution matrix.

    Extracts the generator, splits it into unitary and dissipative parts,
    and computes the Markovian projection distances. ``markov_residual``
    is the Frobenius distance of the generator itself from the Markovian
    set (``delta_nmark`` measures the same thing at the level of evolution
    matrices). The nonclassicality search runs on the projected generator
    ``h_part + dissipative fit``: that is the physical generator nearest
    the data, and for an exactly Markovian matrix it equals the log.
    """
    s_matrix = np.asarray(s_matrix, dtype=float)
    lmat, h_part, d_proj, residual, s_mark = _markov_parts(s_matrix, s, opt)
    basis = basis_hunit(s)
    quant = delta_quant_detail(h_part + d_proj, basis, opt)
    log_resid = math.sqrt(frobenius_dist(mat_exp(lmat), s_matrix))
    value = math.sqrt(frobenius_dist(s_matrix, s_mark)) / (s.dim * s.dim)
    mark = MarkovReport(delta_nmark=value, s_mark=s_mark, log_residual=log_resid)
    return EvolutionAnalysis(
        log=lmat,
        h_part=h_part,
        d_part=lmat - h_part,
        quant=quant,
        mark=mark,
        markov_residual=residual,
    )


@dataclass(frozen=True)
class ExperimentScheme:
    """Preparation, channel chain and measurement of one experiment.

    ``prep`` holds SIC probability columns of the input states, one per
    experiment setting; ``channels`` apply left to right in time order;
    ``meas`` maps the final state's probabilities to outcome probabilities.
    """

    prep: np.ndarray
    channels: tuple[np.ndarray, ...]
    meas: MeasurementMap


def experiment_compose(e: ExperimentScheme) -> np.ndarray:
    """Overall outcome matrix ``Q = M (S_n ... S_1) G``.

    ``Q`` is column stochastic for physical components; tiny negative
    entries found in ingested noisy data trigger a warning, not an error.
    """
    q = np.asarray(e.prep, dtype=float)
    col_dev = float(np.abs(q.sum(axis=0) - 1.0).max())
    if col_dev > 1e-9:
        raise ValueError(f"preparation columns must sum to 1 (dev {col_dev:.3e})")
    for k, ch in enumerate(e.channels):
        ch = np.asarray(ch, dtype=float)
        if ch.shape[1] != q.shape[0]:
            raise ValueError(
                f"channel {k} input dimension {ch.shape[1]} does not match chain {q.shape[0]}"
            )
        q = ch @ q
    bigm = np.asarray(e.meas.bigm, dtype=float)
    if bigm.shape[1] != q.shape[0]:
        raise ValueError(
            f"measurement input dimension {bigm.shape[1]} does not match chain {q.shape[0]}"
        )
    q = bigm @ q
    col_dev = float(np.abs(q.sum(axis=0) - 1.0).max())
    if col_dev > 1e-9:
        raise ValueError(f"composed outcome columns do not sum to 1 (dev {col_dev:.3e})")
    if q.min() < -1e-9:
        warnings.warn(
            f"composed outcome matrix has negative entry {q.min():.3e}; "
            "inputs are not exactly physical",
            stacklevel=2,
        )
    return q
