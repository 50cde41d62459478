"""Closed-form weight construction for matrix-exponential networks.

A three-layer map f(X) = W3 expm(W2 expm(W1 X)) can interpolate two
data/label pairs (X1, Y1), (X2, Y2) of invertible d x d complex matrices
exactly, provided X1 - X2 is invertible. The weights come from a free
positive scale alpha != 1:

    W1 = ln(alpha) * (X1 - X2)^-1
    Z  = logm(alpha * Y1^-1 Y2)            (any branch)
    W2 = (Z - ln(alpha) I) expm(-W1 X2) / (1 - alpha)
    W3 = Y1 expm(-W2 expm(W1 X1))

No gradient descent is involved. ``verify`` recomputes the forward map
and a battery of internal identities that the construction satisfies.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, InstanceRejectedError, MaxResampleError
from .linalg import (
    CMatrix,
    cmatrix,
    gaussian_entries,
    inverse,
    lu_factor,
    matrix_from_json,
    matrix_to_json,
)
from .matfuncs import PRINCIPAL, BranchSpec, expm, logm

#: rcond threshold all five instance matrices must clear to be admitted.
ADMISSION_RCOND = 1e-3

#: Default interpolation scale (ln(alpha) = 1).
DEFAULT_ALPHA = math.e

#: Required distance of alpha from the degenerate value 1.
MIN_ALPHA_GAP = 1e-3

#: Default pass tolerance on the relative interpolation residuals.
DEFAULT_TOLERANCE = 1e-6

_RCOND_KEYS = ("x1", "x2", "y1", "y2", "x1_minus_x2")


@dataclass(frozen=True)
class ProblemInstance:
    """Data/label quadruple (X1, X2, Y1, Y2) with conditioning metadata.

    ``rconds`` holds the 1-norm reciprocal-condition estimates of the
    four matrices and of X1 - X2; an instance is *admitted* when all five
    clear the threshold.
    """

    x1: CMatrix
    x2: CMatrix
    y1: CMatrix
    y2: CMatrix
    rconds: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return self.x1.shape[0]

    def admitted(self, threshold: float = ADMISSION_RCOND) -> bool:
        return all(self.rconds[k] > threshold for k in _RCOND_KEYS)


def make_instance(x1, x2, y1, y2) -> ProblemInstance:
    """Validate four matrices into a ProblemInstance, computing rconds."""
    x1, x2, y1, y2 = cmatrix(x1), cmatrix(x2), cmatrix(y1), cmatrix(y2)
    dims = {m.shape[0] for m in (x1, x2, y1, y2)}
    if len(dims) != 1:
        raise DimensionError(f"instance matrices disagree on dimension: {sorted(dims)}")
    rconds = {
        "x1": lu_factor(x1).rcond,
        "x2": lu_factor(x2).rcond,
        "y1": lu_factor(y1).rcond,
        "y2": lu_factor(y2).rcond,
        "x1_minus_x2": lu_factor(x1 - x2).rcond,
    }
    return ProblemInstance(x1=x1, x2=x2, y1=y1, y2=y2, rconds=rconds)


def draw_instance(rng: np.random.Generator, dim: int, kind: str) -> ProblemInstance:
    """Draw one instance from an open Gaussian stream (x1, x2, y1, y2 order)."""
    x1 = gaussian_entries(rng, dim, kind)
    x2 = gaussian_entries(rng, dim, kind)
    y1 = gaussian_entries(rng, dim, kind)
    y2 = gaussian_entries(rng, dim, kind)
    return make_instance(x1, x2, y1, y2)


def random_instance(
    dim: int,
    seed: int,
    kind: str = "complex-gaussian",
    threshold: float = ADMISSION_RCOND,
    max_tries: int = 100,
) -> ProblemInstance:
    """Sample Gaussian instances until one is admitted.

    Deterministic for fixed arguments: a single PCG64 stream seeded with
    ``seed`` supplies every draw. Raises :class:`MaxResampleError` after
    ``max_tries`` consecutive rejections.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(max_tries):
        inst = draw_instance(rng, dim, kind)
        if inst.admitted(threshold):
            return inst
    raise MaxResampleError(
        f"no admitted instance in {max_tries} tries (dim={dim}, seed={seed}, "
        f"threshold={threshold:g})"
    )


@dataclass(frozen=True)
class ThreeLayerWeights:
    """Closed-form solution record (W1, W2, W3, alpha, Z).

    Z satisfies expm(Z) = alpha * Y1^-1 Y2 for the instance it was built
    from; alpha is positive with |alpha - 1| >= MIN_ALPHA_GAP.
    """

    w1: CMatrix
    w2: CMatrix
    w3: CMatrix
    alpha: float
    z: CMatrix

    def __post_init__(self):
        _validate_alpha(self.alpha)

    @property
    def dim(self) -> int:
        return self.w1.shape[0]


@dataclass(frozen=True)
class SolveReport:
    """Verification outcome: forward residuals plus internal identities.

    ``residual1``/``residual2`` are relative Frobenius interpolation
    errors; ``identity_checks`` maps named internal identities to their
    residuals (and ``difference_rcond`` to an rcond value); ``passed`` is
    the pass verdict at ``tol``.
    """

    residual1: float
    residual2: float
    identity_checks: dict
    admitted: bool
    passed: bool
    tol: float


def _validate_alpha(alpha: float) -> None:
    if not (alpha > 0):
        raise ValueError(f"alpha must be positive, got {alpha}")
    if abs(alpha - 1.0) < MIN_ALPHA_GAP:
        raise ValueError(
            f"alpha must differ from 1 by at least {MIN_ALPHA_GAP}, got {alpha}"
        )


def solve_single_layer(x: CMatrix, y: CMatrix) -> CMatrix:
    """Weight W = Y X^-1 of the one-layer interpolation Y = W X."""
    if x.shape != y.shape:
        raise DimensionError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return np.asarray(y) @ inverse(x)


def solve_block_diagonal(inst: ProblemInstance) -> tuple[CMatrix, CMatrix]:
    """Widened one-layer solution: the 2d x 2d block-diagonal weight
    diag(Y1 X1^-1, Y2 X2^-1) maps stacked [X1; X2] to [Y1; Y2]."""
    return (
        np.asarray(inst.y1) @ inverse(inst.x1),
        np.asarray(inst.y2) @ inverse(inst.x2),
    )


def compute_z(
    y1: CMatrix, y2: CMatrix, alpha: float, branch: BranchSpec = PRINCIPAL
) -> CMatrix:
    """A matrix Z with expm(Z) = alpha * Y1^-1 Y2.

    Existence is guaranteed for invertible labels because the matrix
    exponential is onto the invertible matrices; ``branch`` picks among
    the infinitely many logarithms.
    """
    if not (alpha > 0) or alpha == 1.0:
        raise ValueError(f"alpha must be positive and != 1, got {alpha}")
    return logm(alpha * (inverse(y1) @ np.asarray(y2)), branch)


def solve_three_layer(
    inst: ProblemInstance,
    alpha: float = DEFAULT_ALPHA,
    branch: BranchSpec = PRINCIPAL,
) -> ThreeLayerWeights:
    """Closed-form weights interpolating both pairs of an admitted instance.

    Raises
    ------
    InstanceRejectedError
        If some rcond of (X1, X2, Y1, Y2, X1 - X2) is at or below the
        admission threshold.
    ValueError
        For alpha <= 0 or |alpha - 1| < MIN_ALPHA_GAP.
    """
    if not inst.admitted():
        failing = {
            k: v for k, v in inst.rconds.items() if v <= ADMISSION_RCOND
        }
        raise InstanceRejectedError(
            f"instance rejected: rcond at or below {ADMISSION_RCOND:g} for {failing}"
        )
    _validate_alpha(alpha)
    ln_alpha = math.log(alpha)
    eye = np.eye(inst.dim, dtype=np.complex128)
    w1 = ln_alpha * inverse(inst.x1 - inst.x2)
    z = compute_z(inst.y1, inst.y2, alpha, branch)
    w2 = (z - ln_alpha * eye) @ expm(-(w1 @ inst.x2)) / (1.0 - alpha)
    w3 = np.asarray(inst.y1) @ expm(-(w2 @ expm(w1 @ inst.x1)))
    for name, w in (("w1", w1), ("w2", w2), ("w3", w3)):
        if not np.all(np.isfinite(w.real)) or not np.all(np.isfinite(w.imag)):
            raise OverflowError(f"{name} overflowed during construction")
    return ThreeLayerWeights(w1=w1, w2=w2, w3=w3, alpha=alpha, z=z)


def eval_three_layer(weights: ThreeLayerWeights, x: CMatrix) -> CMatrix:
    """Forward map f(x) = W3 expm(W2 expm(W1 x))."""
    if x.shape != weights.w1.shape:
        raise DimensionError(f"dimension mismatch: {x.shape} vs {weights.w1.shape}")
    return weights.w3 @ expm(weights.w2 @ expm(weights.w1 @ np.asarray(x)))


def _ratio(num: float, den: float) -> float:
    if den == 0.0:
        return 0.0 if num == 0.0 else math.inf
    return num / den


def verify(
    weights: ThreeLayerWeights, inst: ProblemInstance, tol: float = DEFAULT_TOLERANCE
) -> SolveReport:
    """Evaluate the network on both data points and audit the construction.

    Never raises: numerical blowups surface as infinite residuals. The
    identity checks record, as relative Frobenius residuals:

    - ``scale_identity``: expm(W1 X1) = alpha * expm(W1 X2)
    - ``commutation``: W2 expm(W1 X1) commutes with Z
    - ``commutant_form``: W2 expm(W1 X1) = alpha/(1-alpha) (Z - ln(alpha) I)
    - ``difference_identity``: expm(W1 X2) - expm(W1 X1) = (1-alpha) expm(W1 X2)
    - ``difference_rcond``: rcond of that difference (a value, not a residual)
    - ``w3_consistency``: W3 = Y1 expm(-W2 expm(W1 X1))
    - ``z_definition``: expm(Z) = alpha * Y1^-1 Y2
    """
    norm = np.linalg.norm
    alpha, z = weights.alpha, weights.z
    ln_alpha = math.log(alpha)
    eye = np.eye(weights.dim, dtype=np.complex128)

    def residual_against(x, y):
        try:
            out = eval_three_layer(weights, x)
        except OverflowError:
            return math.inf
        return _ratio(float(norm(out - y)), float(norm(y)))

    residual1 = residual_against(inst.x1, inst.y1)
    residual2 = residual_against(inst.x2, inst.y2)

    checks: dict[str, float] = {}
    try:
        e1 = expm(weights.w1 @ inst.x1)
        e2 = expm(weights.w1 @ inst.x2)
        checks["scale_identity"] = _ratio(float(norm(e1 - alpha * e2)), float(norm(e1)))
        c = weights.w2 @ e1
        checks["commutation"] = _ratio(
            float(norm(c @ z - z @ c)), float(norm(c)) * float(norm(z))
        )
        commutant = (alpha / (1.0 - alpha)) * (z - ln_alpha * eye)
        checks["commutant_form"] = _ratio(float(norm(c - commutant)), float(norm(c)))
        diff = e2 - e1
        checks["difference_rcond"] = lu_factor(diff).rcond
        checks["difference_identity"] = _ratio(
            float(norm(diff - (1.0 - alpha) * e2)), float(norm((1.0 - alpha) * e2))
        )
        checks["w3_consistency"] = _ratio(
            float(norm(weights.w3 - inst.y1 @ expm(-c))), float(norm(weights.w3))
        )
        checks["z_definition"] = _ratio(
            float(norm(expm(z) - alpha * (inverse(inst.y1) @ inst.y2))),
            float(norm(expm(z))),
        )
    except Exception:
        for key in (
            "scale_identity",
            "commutation",
            "commutant_form",
            "difference_rcond",
            "difference_identity",
            "w3_consistency",
            "z_definition",
        ):
            checks.setdefault(key, math.inf)

    passed = residual1 <= tol and residual2 <= tol
    return SolveReport(
        residual1=residual1,
        residual2=residual2,
        identity_checks=checks,
        admitted=inst.admitted(),
        passed=passed,
        tol=tol,
    )


# -- JSON representations ----------------------------------------------------


def weights_to_json(weights: ThreeLayerWeights) -> dict:
    return {
        "alpha": weights.alpha,
        "w1": matrix_to_json(weights.w1),
        "w2": matrix_to_json(weights.w2),
        "w3": matrix_to_json(weights.w3),
        "z": matrix_to_json(weights.z),
    }


def weights_from_json(obj: dict) -> ThreeLayerWeights:
    return ThreeLayerWeights(
        w1=matrix_from_json(obj["w1"]),
        w2=matrix_from_json(obj["w2"]),
        w3=matrix_from_json(obj["w3"]),
        alpha=float(obj["alpha"]),
        z=matrix_from_json(obj["z"]),
    )


def report_to_json(report: SolveReport) -> dict:
    return {
        "residual1": report.residual1,
        "residual2": report.residual2,
        "identity_checks": dict(report.identity_checks),
        "admitted": report.admitted,
        "pass": report.passed,
        "tol": report.tol,
    }


def save_weights(path, weights: ThreeLayerWeights) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(weights_to_json(weights), fh)
        fh.write("\n")


def load_weights(path) -> ThreeLayerWeights:
    with open(path, "r", encoding="utf-8") as fh:
        return weights_from_json(json.load(fh))


def save_instance(directory, inst: ProblemInstance, manifest_extra: dict | None = None):
    """Write x1/x2/y1/y2 JSON files plus an instance.json manifest."""
    os.makedirs(directory, exist_ok=True)
    files = {}
    for name in ("x1", "x2", "y1", "y2"):
        fname = f"{name}.json"
        with open(os.path.join(directory, fname), "w", encoding="utf-8") as fh:
            json.dump(matrix_to_json(getattr(inst, name)), fh)
            fh.write("\n")
        files[name] = fname
    manifest = {
        "dim": inst.dim,
        "rconds": dict(inst.rconds),
        "files": files,
    }
    if manifest_extra:
        manifest.update(manifest_extra)
    manifest_path = os.path.join(directory, "instance.json")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return manifest_path


def load_instance(path) -> ProblemInstance:
    """Read an instance from its manifest (or a directory containing one).

    Conditioning estimates are recomputed from the matrices on load; the
    manifest's recorded values are informational.
    """
    if os.path.isdir(path):
        path = os.path.join(path, "instance.json")
    with open(path, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    base = os.path.dirname(os.path.abspath(path))
    mats = {}
    for name in ("x1", "x2", "y1", "y2"):
        with open(os.path.join(base, manifest["files"][name]), encoding="utf-8") as fh:
            mats[name] = matrix_from_json(json.load(fh))
    return make_instance(mats["x1"], mats["x2"], mats["y1"], mats["y2"])
