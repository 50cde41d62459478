"""Matrix exponential and logarithm over the complex field.

``expm`` uses scaling-and-squaring around a fixed-degree Taylor core;
``logm`` inverts it through the complex Schur form: repeated principal
square roots of the triangular factor until the Mercator series
log(I + K) = K - K^2/2 + K^3/3 - ... converges fast, then squaring the
result back up. Logarithm branches are selected per eigenvalue as
log lam = ln|lam| + i*(arg lam + 2*pi*k) with principal arg in (-pi, pi].

``jordan_block_log`` is the exact finite-series logarithm of a single
Jordan block; it exists as an independent oracle for ``logm``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    DimensionError,
    IllConditionedError,
    SingularInputError,
)
from .linalg import CMatrix, SchurForm, _check_square, lu_factor, schur_decompose

# Scaling-and-squaring constants. With ||A/2^s||_1 <= 0.5 the degree-20
# Taylor core has truncation error below 1e-26, far under roundoff; these
# are implementation constants, not part of the contract.
EXPM_SCALING_THRESHOLD = 0.5
EXPM_TAYLOR_DEGREE = 20
EXPM_NORM_LIMIT = 1e8

# logm: square-root until ||T - I||_1 is inside the Mercator region, then
# sum until the next term falls below 1e-16 relative (at most ~30 terms
# once ||K||_1 <= 0.25; the cap is never the effective stop).
LOGM_SQRT_TARGET = 0.25
LOGM_MAX_SQRTS = 60
MERCATOR_RELATIVE_TOL = 1e-16
MERCATOR_MAX_TERMS = 96

#: rcond floor below which logm refuses its input as singular.
LOGM_RCOND_FLOOR = 1e-10


@dataclass(frozen=True)
class BranchSpec:
    """Logarithm branch choice.

    ``branch_offset = k`` selects log lam = ln|lam| + i*(arg lam + 2*pi*k)
    for every eigenvalue, principal arg in (-pi, pi]. The default k = 0 is
    the principal branch. Any k yields a valid logarithm because the
    matrix exponential maps all of them back to the same matrix.
    """

    branch_offset: int = 0


PRINCIPAL = BranchSpec(0)


def _principal_log(lam: complex) -> complex:
    """Scalar principal log with arg in (-pi, pi], closed at +pi."""
    lam = complex(lam)
    if lam == 0:
        raise SingularInputError("log of zero eigenvalue")
    if lam.imag == 0.0:
        # fold -0.0 onto the +0.0 side so arg(-1) = +pi, not -pi
        lam = complex(lam.real, 0.0)
    return complex(np.log(lam))


def _require_finite(a: np.ndarray) -> None:
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")


def expm(a: CMatrix) -> CMatrix:
    """Matrix exponential sum(A^k / k!) by scaling and squaring.

    Scales by the smallest power of two bringing the 1-norm at or below
    ``EXPM_SCALING_THRESHOLD``, applies the Horner-evaluated Taylor core
    of degree ``EXPM_TAYLOR_DEGREE``, and squares back up. The result of
    an exact exponential is always invertible.

    Raises
    ------
    OverflowError
        If ``||a||_1 > 1e8``, or if entries overflow during the repeated
        squaring (e^||a|| beyond float range).
    """
    _check_square(a)
    a = np.asarray(a, dtype=np.complex128)
    _require_finite(a)
    dim = a.shape[0]
    anorm = float(np.linalg.norm(a, 1))
    if anorm > EXPM_NORM_LIMIT:
        raise OverflowError(
            f"||a||_1 = {anorm:.3e} exceeds {EXPM_NORM_LIMIT:.0e}; entries would overflow"
        )
    squarings = 0
    if anorm > EXPM_SCALING_THRESHOLD:
        squarings = int(math.ceil(math.log2(anorm / EXPM_SCALING_THRESHOLD)))
    scaled = a / (2.0**squarings)
    eye = np.eye(dim, dtype=np.complex128)
    result = eye.copy()
    for k in range(EXPM_TAYLOR_DEGREE, 0, -1):
        result = eye + (scaled @ result) / k
    # overflow during squaring is reported as an error below, not a warning
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(squarings):
            result = result @ result
    if not np.all(np.isfinite(result.real)) or not np.all(np.isfinite(result.imag)):
        raise OverflowError("entries overflowed during repeated squaring")
    return result


def _sqrtm_triu(t: np.ndarray) -> np.ndarray:
    """Principal square root of an upper-triangular matrix.

    Column-by-column substitution; the division is by sqrt(t_ii) +
    sqrt(t_jj), which only degenerates when two eigenvalues approach the
    negative real axis from opposite sides (a branch-cut straddle).
    """
    dim = t.shape[0]
    r = np.zeros_like(t)
    for i in range(dim):
        r[i, i] = np.sqrt(_normalize_negative_zero(t[i, i]))
    for j in range(1, dim):
        for i in range(j - 1, -1, -1):
            s = t[i, j]
            if j - i > 1:
                s = s - r[i, i + 1 : j] @ r[i + 1 : j, j]
            denom = r[i, i] + r[j, j]
            if abs(s) > 1e8 * abs(denom):
                raise IllConditionedError(
                    f"eigenvalues {t[i, i]:.6g} and {t[j, j]:.6g} straddle the "
                    "logarithm branch cut inside a coupled cluster"
                )
            r[i, j] = s / denom if denom != 0 else 0.0
    return r


def _normalize_negative_zero(lam: complex) -> complex:
    lam = complex(lam)
    if lam.imag == 0.0:
        return complex(lam.real, 0.0)
    return lam


def _reject_straddling_clusters(form: SchurForm) -> None:
    """Refuse inputs whose near-multiple eigenvalues sit on different
    branch sheets while being coupled through the triangular factor."""
    eig = form.eigenvalues
    dim = len(eig)
    logs = [_principal_log(lam) for lam in eig]
    for i in range(dim):
        for j in range(i + 1, dim):
            gap = abs(eig[i] - eig[j])
            if gap > 1e-8 * max(abs(eig[i]), abs(eig[j])):
                continue
            if abs(logs[i].imag - logs[j].imag) <= math.pi:
                continue
            block = form.t[i : j + 1, i : j + 1]
            if np.any(np.triu(block, 1) != 0):
                raise IllConditionedError(
                    f"eigenvalues {eig[i]:.6g} and {eig[j]:.6g} form a coupled "
                    f"cluster (gap {gap:.3e}) straddling the log branch cut"
                )


def _logm_triu(t: np.ndarray) -> np.ndarray:
    """Principal logarithm of an upper-triangular matrix.

    Inverse scaling and squaring: principal square roots until
    ``||T - I||_1 <= LOGM_SQRT_TARGET``, Mercator series on K = T - I,
    then multiply by 2^s. The diagonal is finally reset to exact scalar
    logs of the original eigenvalues.
    """
    dim = t.shape[0]
    eye = np.eye(dim, dtype=np.complex128)
    work = np.array(t, dtype=np.complex128)
    squarings = 0
    while np.linalg.norm(work - eye, 1) > LOGM_SQRT_TARGET:
        if squarings >= LOGM_MAX_SQRTS:
            raise ConvergenceError(
                "square-root chain failed to reach the Mercator convergence region"
            )
        work = _sqrtm_triu(work)
        squarings += 1
    k = work - eye
    term = k.copy()
    acc = k.copy()
    for m in range(2, MERCATOR_MAX_TERMS + 1):
        term = term @ k
        acc += ((-1.0) ** (m + 1) / m) * term
        if np.linalg.norm(term, 1) / m <= MERCATOR_RELATIVE_TOL * np.linalg.norm(acc, 1):
            break
    out = acc * (2.0**squarings)
    for i in range(dim):
        out[i, i] = _principal_log(t[i, i])
    return np.triu(out)


def eigenvector_condition_estimate(form: SchurForm) -> float:
    """Cheap conditioning proxy kappa used in the logm accuracy contract.

    kappa = max(1, ||strict upper of T||_F / g) where g is the smallest
    pairwise eigenvalue gap, clamped below at eps * max|eigenvalue|.
    Normal matrices give 1; defective clusters blow up, voiding the
    roundtrip bound (the computation itself still proceeds).
    """
    eig = form.eigenvalues
    dim = len(eig)
    offdiag = float(np.linalg.norm(np.triu(form.t, 1)))
    if dim < 2 or offdiag == 0.0:
        return 1.0
    gaps = [
        abs(eig[i] - eig[j]) for i in range(dim) for j in range(i + 1, dim)
    ]
    floor = np.finfo(float).eps * max(abs(eig).max(), 1e-300)
    gap = max(min(gaps), floor)
    return max(1.0, offdiag / gap)


def logm(a: CMatrix, branch: BranchSpec = PRINCIPAL) -> CMatrix:
    """Matrix logarithm on the requested branch.

    Accuracy contract: ``||expm(logm(a)) - a||_F <= 1e-8 * ||a||_F *
    max(1, kappa)`` with kappa from
    :func:`eigenvector_condition_estimate` of the Schur form.

    Raises
    ------
    SingularInputError
        rcond at or below 1e-10, or a zero eigenvalue in the Schur form.
    IllConditionedError
        Coupled near-multiple eigenvalues straddling the branch cut; no
        accurate primary logarithm exists there.
    """
    _check_square(a)
    a = np.asarray(a, dtype=np.complex128)
    _require_finite(a)
    factors = lu_factor(a)
    if factors.rcond <= LOGM_RCOND_FLOOR:
        raise SingularInputError(
            f"matrix is singular to working precision (rcond {factors.rcond:.3e})"
        )
    form = schur_decompose(a)
    if np.any(form.eigenvalues == 0):
        raise SingularInputError("zero eigenvalue; no logarithm exists")
    _reject_straddling_clusters(form)
    log_t = _logm_triu(form.t)
    if branch.branch_offset:
        log_t = log_t + (2j * math.pi * branch.branch_offset) * np.eye(
            a.shape[0], dtype=np.complex128
        )
    return form.q @ log_t @ form.q.conj().T


def jordan_block_log(lam: complex, m: int) -> CMatrix:
    """Exact logarithm of the m x m Jordan block with eigenvalue lam.

    The block factors as lam * (I + K) with K the upper shift divided by
    lam, so log = (ln lam) I + K - K^2/2 + ... with exactly m - 1 series
    terms (K^m = 0). Superdiagonal j carries (-1)^(j+1) lam^(-j) / j.
    Principal scalar branch. Serves as an exact oracle for :func:`logm`
    on single Jordan blocks.
    """
    if m < 1:
        raise ValueError(f"block size must be >= 1, got {m}")
    lam = complex(lam)
    if lam == 0:
        raise SingularInputError("Jordan block with zero eigenvalue has no logarithm")
    out = np.zeros((m, m), dtype=np.complex128)
    np.fill_diagonal(out, _principal_log(lam))
    for j in range(1, m):
        value = (-1.0) ** (j + 1) * lam ** (-j) / j
        idx = np.arange(m - j)
        out[idx, idx + j] = value
    return out


def check_commuting_product(a: CMatrix, b: CMatrix) -> float:
    """Relative defect of exp(a) exp(b) = exp(a + b).

    Returns ``||expm(a) @ expm(b) - expm(a + b)||_F / ||expm(a + b)||_F``.
    At most ~1e-9 for commuting pairs of moderate norm; order one (the
    size of the Baker-Campbell-Hausdorff correction) otherwise.
    """
    _check_square(a, "a")
    _check_square(b, "b")
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    combined = expm(np.asarray(a) + np.asarray(b))
    separate = expm(a) @ expm(b)
    return float(np.linalg.norm(separate - combined) / np.linalg.norm(combined))
