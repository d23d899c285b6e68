"""Trapezoidal contour quadrature of f'/f on circles.

The counting integral (1/2pi*i) * integral of f'/f dz over |z - c| = r is,
after parametrizing z = c + r*e^{i*theta}, the plain average of
(z - c) * f'(z)/f(z) over equispaced angles.  For integrands analytic in a
neighbourhood of the circle the trapezoidal rule on a periodic function
converges geometrically, so node doubling with a successive-difference test
is both cheap and sharp; Gaussian quadrature would buy nothing here.

Robustness notes:

- Every node set is evaluated afresh and reduced with a fixed pairwise
  summation tree, so results are bit-reproducible and independent of any
  internal parallelism in the evaluator.
- A zero or pole sitting (nearly) on the contour shows up as an exact zero
  of f, an evaluation error, or an integrand magnitude blowup.  The defense
  is to nudge the radius by (1 + 0.013*attempt) for three attempts -- zeros
  and poles are isolated, so a small nudge escapes them -- before giving up
  with :class:`ContourSingularityError`.
- Non-convergence at max_nodes is NOT an error: the result is returned with
  converged=False and callers treat it as evidence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .expressions import JetEvaluationError

#: integrand magnitude beyond which a node is treated as touching a
#: singularity; |(z-c)*f'/f| is O(|d|) for healthy meromorphic inputs and
#: O(r/dist) near a zero/pole, so this only fires on genuine proximity.
INTEGRAND_GUARD = 1e12

_PERTURB_STEP = 0.013
_PERTURB_ATTEMPTS = 3


class ContourSingularityError(ArithmeticError):
    """A zero/pole obstructed the contour even after radius perturbation."""

    def __init__(self, radius: float, detail: str):
        super().__init__(
            f"contour evaluation failed near radius {radius!r} "
            f"after {_PERTURB_ATTEMPTS} perturbations: {detail}"
        )
        self.radius = radius
        self.detail = detail


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class ContourSpec:
    """Circle |z - center| = radius plus quadrature controls."""

    radius: float
    center: complex = 0j
    initial_nodes: int = 64
    max_nodes: int = 65536
    tol: float = 1e-9

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.initial_nodes < 8 or not _is_pow2(self.initial_nodes):
            raise ValueError("initial_nodes must be a power of two >= 8")
        if not _is_pow2(self.max_nodes) or self.max_nodes < self.initial_nodes:
            raise ValueError("max_nodes must be a power of two >= initial_nodes")


@dataclass(frozen=True)
class WindingResult:
    """One counting integral with its quadrature diagnostics."""

    raw: complex
    nearest_int: int
    residual: float
    nodes_used: int
    radius_used: float
    converged: bool


def _nodes(center: complex, radius: float, n: int) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(n) / n
    return center + radius * np.exp(1j * theta)


def circle_nodes(spec: ContourSpec, n: int) -> np.ndarray:
    """The n equispaced points center + radius*e^{2pi*i*j/n}, j = 0..n-1."""
    if n < 1:
        raise ValueError("need at least one node")
    return _nodes(spec.center, spec.radius, n)


def _tree_sum(values: np.ndarray) -> complex:
    """Pairwise summation in fixed index order (deterministic reduction)."""
    acc = values
    while acc.size > 1:
        pairs = acc.size // 2
        head = acc[: 2 * pairs : 2] + acc[1 : 2 * pairs : 2]
        if acc.size % 2:
            head = np.concatenate([head, acc[-1:]])
        acc = head
    return complex(acc[0])


class _SingularNode(Exception):
    def __init__(self, detail: str):
        self.detail = detail


def _integrand(f, center: complex, radius: float, n: int, k: int) -> np.ndarray:
    z = _nodes(center, radius, n)
    try:
        v, d = f(z)
    except JetEvaluationError as err:
        raise _SingularNode(f"evaluation failed at node {err.point}") from err
    if (v == 0).any():
        idx = int(np.argmax(v == 0))
        raise _SingularNode(f"f vanishes at node {complex(z[idx])}")
    w = (z - center) * (d / v)
    if k:
        w = w * z**k
    mag = np.abs(w)
    if not np.isfinite(mag).all() or (mag > INTEGRAND_GUARD).any():
        bad = ~np.isfinite(mag) | (mag > INTEGRAND_GUARD)
        idx = int(np.argmax(bad))
        raise _SingularNode(f"integrand blowup at node {complex(z[idx])}")
    return w


def _quadrature(f, spec: ContourSpec, k: int):
    """Adaptive node doubling with singularity defense.

    Returns (raw, nodes_used, radius_used, delta_converged, samples) where
    samples holds the final level's integrand values.
    """
    last_detail = ""
    for attempt in range(_PERTURB_ATTEMPTS + 1):
        radius = spec.radius * (1.0 + _PERTURB_STEP * attempt)
        try:
            n = spec.initial_nodes
            w = _integrand(f, spec.center, radius, n, k)
            value = _tree_sum(w) / n
            while n < spec.max_nodes:
                n *= 2
                w = _integrand(f, spec.center, radius, n, k)
                next_value = _tree_sum(w) / n
                delta = abs(next_value - value)
                value = next_value
                if delta <= spec.tol:
                    return value, n, radius, True, w
            return value, n, radius, False, w
        except _SingularNode as bad:
            last_detail = bad.detail
            continue
    raise ContourSingularityError(spec.radius, last_detail)


def winding_with_samples(f, spec: ContourSpec) -> tuple[WindingResult, np.ndarray]:
    """Winding result plus the final node set's (z - c)*f'/f samples."""
    raw, nodes, radius, delta_ok, samples = _quadrature(f, spec, 0)
    nearest = int(round(raw.real))
    residual = abs(raw - nearest)
    converged = delta_ok and residual <= spec.tol
    result = WindingResult(raw, nearest, residual, nodes, radius, converged)
    return result, samples


def winding_integral(f, spec: ContourSpec) -> WindingResult:
    """Zeros-minus-poles counting integral on the circle, adaptively refined."""
    result, _ = winding_with_samples(f, spec)
    return result


def moment_integral(f, spec: ContourSpec, k: int) -> complex:
    """(1/2pi*i) * integral of z^k * f'/f dz; k = 0 is winding_integral.raw.

    For k >= 1 this is the k-th power sum of the enclosed zeros minus that
    of the enclosed poles (a diagnostic; no root recovery is attempted).
    """
    if k < 0:
        raise ValueError("moment order must be >= 0")
    raw, _, _, _, _ = _quadrature(f, spec, k)
    return raw
