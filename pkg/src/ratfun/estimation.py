"""Divisor estimation from the boundary behavior of z*f'/f.

For a rational function of divisor d, z*f'(z)/f(z) tends to d uniformly in
the angle as |z| grows, and the counting integral on |z| = r equals d once r
encloses every zero and pole.  The estimator probes a geometric radius
schedule and records, per radius, the angle-average of z*f'/f (identical to
the counting integral on an origin-centered circle), the spread (sup over
sampled angles of the distance to that average) and the winding result.

The spread is what separates rational functions from everything else: for
f = e^z the angle-average of z*f'/f is identically zero -- indistinguishable
from a divisor-0 rational by averages -- while the spread equals r.  A C/r
spread decay certifies uniform convergence at the sampled angles; spread
growth refutes it.

Verdicts are numerical evidence at explicit radii and node counts, not
decisions of the mathematical predicate: any finite sampling can be fooled,
and inputs with finite essential singularities (outside the meromorphic
precondition) are not reliably detected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .contour import ContourSpec, WindingResult, winding_with_samples
from .exact import (
    GaussianRational,
    Polynomial,
    RationalFunctionExact,
    cauchy_root_bound,
    divisor,
    joint_cauchy_bound,
    log_derivative,
)
from .expressions import jet_evaluator, polynomial_expression, rational_expression

#: spreads at or below this are quadrature/rounding noise (z^d has exact
#: spread 0); they count as decayed and never as growth.
SPREAD_FLOOR = 1e-9

#: per-doubling spread growth that refutes uniform convergence.
GROWTH_FACTOR = 1.5

#: jet path and exact path of z*f'/f must agree pointwise to this.
NECESSITY_POINTWISE_TOL = 1e-10

KIND_RATIONAL = "rational"
KIND_NOT_RATIONAL = "not_rational"
KIND_INCONCLUSIVE = "inconclusive"

REASON_GROWTH = "growth"
REASON_NON_INTEGER_WINDING = "non-integer-winding"
REASON_RESIDUAL = "residual"

_NOT_RATIONAL_REASONS = (REASON_GROWTH, REASON_NON_INTEGER_WINDING, REASON_RESIDUAL)


@dataclass(frozen=True)
class Verdict:
    """Exactly one of Rational(d), NotRational(reason), Inconclusive(reason)."""

    kind: str
    d: int | None = None
    reason: str | None = None

    def __post_init__(self):
        if self.kind == KIND_RATIONAL:
            if self.d is None or self.reason is not None:
                raise ValueError("rational verdict carries d and nothing else")
        elif self.kind == KIND_NOT_RATIONAL:
            if self.d is not None or self.reason not in _NOT_RATIONAL_REASONS:
                raise ValueError("not-rational verdict needs a known reason")
        elif self.kind == KIND_INCONCLUSIVE:
            if self.d is not None or not self.reason:
                raise ValueError("inconclusive verdict needs a reason string")
        else:
            raise ValueError(f"unknown verdict kind {self.kind!r}")

    @staticmethod
    def rational(d: int) -> "Verdict":
        return Verdict(KIND_RATIONAL, d=d)

    @staticmethod
    def not_rational(reason: str) -> "Verdict":
        return Verdict(KIND_NOT_RATIONAL, reason=reason)

    @staticmethod
    def inconclusive(reason: str) -> "Verdict":
        return Verdict(KIND_INCONCLUSIVE, reason=reason)


@dataclass(frozen=True)
class RadiusProbe:
    """One circle's worth of z*f'/f statistics."""

    radius: float
    mean_zff: complex  # angle-average over the node set; equals winding.raw
    spread: float      # sup over nodes of |z*f'/f - mean_zff|
    winding: WindingResult


@dataclass(frozen=True)
class DivisorEstimate:
    probes: tuple[RadiusProbe, ...]
    d_hat: int | None
    verdict: Verdict
    residual_trace: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        radii = [p.radius for p in self.probes]
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("probe radii must be strictly increasing")


def limit_probe(
    f,
    r0: float,
    growth: float = 2.0,
    steps: int = 6,
    *,
    initial_nodes: int = 64,
    max_nodes: int = 65536,
    tol: float = 1e-9,
) -> DivisorEstimate:
    """Probe z*f'/f on circles r0 * growth^k, k = 0..steps-1.

    Performs no classification; the verdict comes back Inconclusive and
    contour-singularity errors propagate with the failing radius attached.
    """
    if not r0 > 0:
        raise ValueError("r0 must be positive")
    if not growth > 1:
        raise ValueError("growth must exceed 1")
    if steps < 3:
        raise ValueError("need at least 3 radii to classify")
    probes = []
    for k in range(steps):
        spec = ContourSpec(
            radius=r0 * growth**k,
            initial_nodes=initial_nodes,
            max_nodes=max_nodes,
            tol=tol,
        )
        result, samples = winding_with_samples(f, spec)
        mean = result.raw
        spread = float(np.max(np.abs(samples - mean)))
        probes.append(RadiusProbe(result.radius_used, mean, spread, result))
    return DivisorEstimate(
        tuple(probes), None, Verdict.inconclusive("not yet classified")
    )


def _per_step_factor(base: float, radius_ratio: float) -> float:
    # thresholds are quoted per radius doubling; rescale for other schedules
    return base ** math.log2(radius_ratio)


def classify(
    est: DivisorEstimate, tol_int: float = 1e-3, decay_factor: float = 1.5
) -> Verdict:
    """Decide rational/not-rational/inconclusive from the last three probes.

    Rational(d) requires converged windings agreeing on d with residuals
    below tol_int AND a spread decaying by at least decay_factor per radius
    doubling (C/r decay gives a factor of 2; the default 1.5 tolerates
    near-cancelling root/pole terms).  Spread growth of 1.5x per doubling
    refutes uniform convergence outright.
    """
    if len(est.probes) < 3:
        raise ValueError("classification needs at least 3 probes")
    last = est.probes[-3:]
    spreads = [p.spread for p in last]
    ratios = [last[i + 1].radius / last[i].radius for i in range(2)]

    decays = all(
        spreads[i + 1] <= SPREAD_FLOOR
        or spreads[i] >= _per_step_factor(decay_factor, ratios[i]) * spreads[i + 1]
        for i in range(2)
    )
    grows = all(
        spreads[i + 1] > SPREAD_FLOOR
        and spreads[i + 1] >= _per_step_factor(GROWTH_FACTOR, ratios[i]) * spreads[i]
        for i in range(2)
    )
    all_converged = all(p.winding.converged for p in last)
    ints = [p.winding.nearest_int for p in last]
    same_int = ints[0] == ints[1] == ints[2]
    residual_ok = all(p.winding.residual < tol_int for p in last)

    if all_converged and same_int and residual_ok and decays:
        return Verdict.rational(ints[-1])
    if grows:
        return Verdict.not_rational(REASON_GROWTH)
    if all_converged and not (same_int and residual_ok):
        return Verdict.not_rational(REASON_NON_INTEGER_WINDING)
    if not all_converged:
        bad = next(p for p in last if not p.winding.converged)
        return Verdict.inconclusive(
            f"winding integral did not converge at radius {bad.radius:g}"
        )
    return Verdict.inconclusive(
        "spread neither decays like a rational tail nor grows like an "
        f"exponential factor over the last 3 radii (spreads {spreads[0]:.3g}, "
        f"{spreads[1]:.3g}, {spreads[2]:.3g})"
    )


def classify_estimate(
    est: DivisorEstimate, tol_int: float = 1e-3, decay_factor: float = 1.5
) -> DivisorEstimate:
    """Attach the classification verdict (and d_hat when rational) to est."""
    verdict = classify(est, tol_int, decay_factor)
    return replace(est, verdict=verdict, d_hat=verdict.d)


def residual_zg(
    f,
    zeros: Sequence[complex],
    poles: Sequence[complex],
    radii: Sequence[float],
    nodes: int = 256,
) -> list[tuple[float, float]]:
    """Max of |z*g'(z)| per radius, where g' = f'/f - sum 1/(z-a) + sum 1/(z-b).

    With the true zeros a_k and poles b_k of a rational f this is identically
    zero; an exponential factor e^{g} leaves exactly z*g'(z) behind.  Zeros
    and poles are given with multiplicity (repeat entries).
    """
    if radii and (zeros or poles):
        rmin = min(radii)
        worst = max((abs(w) for w in [*zeros, *poles]), default=0.0)
        if worst >= rmin:
            raise ValueError("all supplied zeros/poles must lie inside the radii")
    out = []
    for r in radii:
        theta = 2.0 * np.pi * np.arange(nodes) / nodes
        z = r * np.exp(1j * theta)
        v, d = f(z)
        g = d / v
        for a in zeros:
            g = g - 1.0 / (z - a)
        for b in poles:
            g = g + 1.0 / (z - b)
        out.append((float(r), float(np.max(np.abs(z * g)))))
    return out


@dataclass(frozen=True)
class FtaCheck:
    """Winding count of a polynomial versus its degree."""

    count: int
    degree: int
    passed: bool
    radius: float
    winding: WindingResult


def fta_check(p: Polynomial, *, initial_nodes: int = 64,
              max_nodes: int = 65536, tol: float = 1e-9) -> FtaCheck:
    """Count the zeros of p by winding at 1.1x its Cauchy bound.

    A degree-d polynomial must show exactly d zeros, multiplicity included.
    """
    if p.is_zero:
        raise ValueError("zero polynomial")
    radius = cauchy_root_bound(p) * 1.1
    spec = ContourSpec(
        radius=radius, initial_nodes=initial_nodes, max_nodes=max_nodes, tol=tol
    )
    result, _ = winding_with_samples(jet_evaluator(polynomial_expression(p)), spec)
    degree = p.degree
    passed = result.converged and result.nearest_int == degree
    return FtaCheck(result.nearest_int, degree, passed, radius, result)


@dataclass(frozen=True)
class NecessityReport:
    """Exact versus jet evaluation of z*f'/f along a radius schedule.

    sup errors measure max_j |z_j*f'/f - d| over the sampled angles (the
    quantity with the C/r tail); mean errors measure |angle-average - d|,
    which the quadrature drives to rounding level once every zero and pole
    is enclosed.
    """

    divisor: int
    radii: tuple[float, ...]
    pointwise_diff: tuple[float, ...]
    sup_error_exact: tuple[float, ...]
    sup_error_jet: tuple[float, ...]
    mean_error_exact: tuple[float, ...]
    mean_error_jet: tuple[float, ...]
    max_pointwise_diff: float
    pointwise_ok: bool


def verify_necessity(
    f: RationalFunctionExact, radii: Sequence[float], nodes: int = 256
) -> NecessityReport:
    """Cross-check z*f'/f between the exact log-derivative and the jet path.

    Both are sampled on the same circle nodes: the exact path lifts each
    float node to a Gaussian rational and evaluates (P'Q - PQ')/(PQ) with
    exact arithmetic; the jet path differentiates the equivalent expression
    tree numerically.  Radii must lie beyond the joint Cauchy bound.
    """
    bound = joint_cauchy_bound(f)
    if not radii:
        raise ValueError("need at least one radius")
    if min(radii) <= bound:
        raise ValueError(
            f"radius {min(radii):g} is inside the root/pole bound {bound:g}"
        )
    d = divisor(f)
    num, den = log_derivative(f)
    evaluate = jet_evaluator(rational_expression(f))

    diffs, sup_ex, sup_jet, mean_ex, mean_jet = [], [], [], [], []
    for r in radii:
        theta = 2.0 * np.pi * np.arange(nodes) / nodes
        z = r * np.exp(1j * theta)
        v, dv = evaluate(z)
        jet_vals = z * dv / v
        exact_vals = np.empty_like(z)
        for j in range(nodes):
            zg = GaussianRational.from_complex(complex(z[j]))
            exact_vals[j] = (zg * (num(zg) / den(zg))).to_complex()
        diffs.append(float(np.max(np.abs(jet_vals - exact_vals))))
        sup_ex.append(float(np.max(np.abs(exact_vals - d))))
        sup_jet.append(float(np.max(np.abs(jet_vals - d))))
        mean_ex.append(float(abs(np.mean(exact_vals) - d)))
        mean_jet.append(float(abs(np.mean(jet_vals) - d)))
    worst = max(diffs)
    return NecessityReport(
        divisor=d,
        radii=tuple(float(r) for r in radii),
        pointwise_diff=tuple(diffs),
        sup_error_exact=tuple(sup_ex),
        sup_error_jet=tuple(sup_jet),
        mean_error_exact=tuple(mean_ex),
        mean_error_jet=tuple(mean_jet),
        max_pointwise_diff=worst,
        pointwise_ok=worst < NECESSITY_POINTWISE_TOL,
    )


def attach_residual_trace(
    est: DivisorEstimate,
    f,
    zeros: Sequence[complex],
    poles: Sequence[complex],
    nodes: int = 256,
) -> DivisorEstimate:
    """Record max |z*g'| at every probed radius (zeros/poles known a priori)."""
    trace = residual_zg(f, zeros, poles, [p.radius for p in est.probes], nodes)
    return replace(est, residual_trace=tuple(trace))
