"""Typed exceptions shared across the package.

The CLI maps these onto process exit codes, so the distinctions matter:
malformed input data, physically invalid quantum objects, numerical domain
failures (matrix-log branch problems and friends), and optimizer
non-convergence are all different failure modes.
"""

from __future__ import annotations


class PhysicalityError(ValueError):
    """An object fails a quantum-mechanical validity requirement.

    Raised for non-PSD density matrices, POVMs that do not resolve the
    identity, Kraus sets that are not trace preserving, vectors whose
    Weyl-Heisenberg orbit is not equiangular, and similar violations.
    """


class NumericalDomainError(ValueError):
    """A computation left the domain where its result is well defined."""


class LogBranchError(NumericalDomainError):
    """The principal matrix logarithm is undefined or ambiguous.

    Carries the offending eigenvalues in ``args`` so callers can report
    which part of the spectrum sits on the closed negative real axis.
    """


class NonRealLogError(NumericalDomainError):
    """A logarithm expected to be real carries too much imaginary part."""


class OptimizerError(RuntimeError):
    """No optimizer restart reached the requested convergence criteria."""
