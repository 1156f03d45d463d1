"""Leading-eigenpair solvers: matrix-free power iteration and a dense oracle.

Operators are anything :func:`scipy.sparse.linalg.aslinearoperator` accepts
(sparse matrices, dense arrays, or :class:`~scipy.sparse.linalg.LinearOperator`
instances with a ``matvec``), so the adjacency matrix, the Ihara-Bass block
operator and the explicit nonbacktracking matrix share one code path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, aslinearoperator

from .errors import DimensionError, ParameterError

__all__ = [
    "EigenResult",
    "power_iteration",
    "dense_leading_eigenpair",
    "residual",
    "fix_sign",
    "DEFAULT_TOL",
    "CLI_TOL",
    "DENSE_MAX_DIM",
]

DEFAULT_TOL = 1e-10
CLI_TOL = 1e-8
DEFAULT_MAX_ITERS = 20_000
DENSE_MAX_DIM = 4000
JITTER = 1e-3


@dataclass(frozen=True)
class EigenResult:
    eigenvalue: float
    vector: np.ndarray
    residual: float
    iterations: int
    converged: bool


def fix_sign(v: np.ndarray) -> np.ndarray:
    """Flip ``v`` so that its largest-magnitude entry is positive (first such entry on ties)."""
    k = int(np.argmax(np.abs(v)))
    return -v if v[k] < 0 else v


def residual(op, eigenvalue: float, vector: np.ndarray) -> float:
    """``||op v - lambda v||_2``, recomputed from scratch."""
    op = aslinearoperator(op)
    return float(np.linalg.norm(op.matvec(vector) - eigenvalue * vector))


def start_vector(dim: int, seed: int) -> np.ndarray:
    """All-ones plus seeded jitter of relative size 1e-3, unit-normalized."""
    rng = np.random.Generator(np.random.PCG64(seed))
    v = 1.0 + JITTER * rng.uniform(-1.0, 1.0, dim)
    return v / np.linalg.norm(v)


def power_iteration(
    op,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
    shift: float = 0.0,
    seed: int = 0,
) -> EigenResult:
    """Leading eigenpair of a real linear operator by shifted power iteration.

    Iterates ``v <- (op + shift I) v / ||...||`` and estimates the eigenvalue
    of ``op`` each sweep by the Rayleigh quotient ``v . op v``. The loop stops
    once the relative residual ``||op v - lambda v|| <= tol |lambda|``; the
    returned vector is the one whose residual was tested.

    Parameters
    ----------
    op
        Square operator; only ``matvec`` is used.
    tol : float
        Relative residual tolerance.
    max_iters : int
        Sweep budget. Exhausting it returns ``converged=False`` rather than
        raising.
    shift : float
        Spectral shift ``sigma``. A positive shift breaks ties between
        ``lambda`` and ``-lambda`` (bipartite graphs) and damps complex
        subdominant pairs of non-symmetric operators.
    seed : int
        Seed for the start-vector jitter.

    Returns
    -------
    EigenResult
        Eigenvalue of ``op`` (shift removed), unit vector with its
        largest-magnitude entry positive, final residual and sweep count.
    """
    if tol <= 0:
        raise ParameterError("tol must be positive")
    op = aslinearoperator(op)
    dim = op.shape[0]
    if op.shape[0] != op.shape[1]:
        raise DimensionError("operator must be square")
    if dim == 0:
        raise DimensionError("operator has dimension 0")

    v = start_vector(dim, seed)
    lam = 0.0
    res = np.inf
    converged = False
    it = 0
    while it < max_iters:
        it += 1
        w = op.matvec(v)
        lam = float(v @ w)
        res = float(np.linalg.norm(w - lam * v))
        if res <= tol * abs(lam) or res == 0.0:
            converged = True
            break
        if shift:
            w += shift * v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            # v lies in the null space of op + shift; nothing further to iterate
            break
        v = w / norm
    vec = fix_sign(v)
    return EigenResult(lam, vec, res, it, converged)


def dense_leading_eigenpair(matrix, which: str = "largest-real") -> EigenResult:
    """Leading eigenpair from a full dense decomposition (desk-scale oracle).

    Symmetric input goes through ``eigh``; anything else through ``eig``, taking
    the eigenvalue of largest real part. If that eigenvalue is repeated, the
    returned vector is the projection of the all-ones vector onto its
    eigenspace, which picks out the nonnegative Perron vector for the
    operators used here.
    """
    if which != "largest-real":
        raise ParameterError(f"unsupported selection {which!r}")
    a = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix, dtype=np.float64)
    dim = a.shape[0]
    if a.ndim != 2 or a.shape[1] != dim:
        raise DimensionError("matrix must be square")
    if dim == 0:
        raise DimensionError("matrix has dimension 0")
    if dim > DENSE_MAX_DIM:
        raise DimensionError(f"dense oracle capped at dimension {DENSE_MAX_DIM}, got {dim}")

    if np.array_equal(a, a.T):
        vals, vecs = np.linalg.eigh(a)
    else:
        vals, vecs = np.linalg.eig(a)
    top = vals.real.max()
    close = np.abs(vals - top) <= 1e-9 * max(1.0, abs(top))
    basis = vecs[:, close]
    if basis.shape[1] == 1:
        v = basis[:, 0]
        # complex eigenvectors of a real eigenvalue: rotate to real
        v = v * np.exp(-1j * np.angle(v[np.argmax(np.abs(v))])) if np.iscomplexobj(v) else v
        v = np.real(v)
    else:
        coef, *_ = np.linalg.lstsq(basis, np.ones(dim), rcond=None)
        v = np.real(basis @ coef)
    v = fix_sign(v / np.linalg.norm(v))
    lam = float(top)
    res = float(np.linalg.norm(a @ v - lam * v))
    return EigenResult(lam, v, res, 1, True)


def as_operator(matvec, dim: int) -> LinearOperator:
    return LinearOperator((dim, dim), matvec=matvec, dtype=np.float64)
