"""Shared generators: factored rational corpora with exactly known divisors.

Roots and poles are chosen first (uniformly in a disc, with a minimum
pairwise separation so numerator and denominator stay coprime and the
quadrature never sits on top of a confluent pair), then lifted exactly into
Gaussian rationals and expanded.  The exact coprime form provides the
ground-truth divisor; the factored expression tree provides the black-box
evaluator.  Nothing here ever computes a root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce as fold

import numpy as np
import pytest

from ratfun.exact import (
    GaussianRational,
    Polynomial,
    RationalFunctionExact,
    divisor,
    joint_cauchy_bound,
    reduce,
)
from ratfun.expressions import Const, Div, Expr, Mul, Sub, Var

DISC_RADIUS = 4.0
MIN_SEPARATION = 1e-2
MAX_DEGREE = 8


@dataclass(frozen=True)
class CorpusFunction:
    """A rational function with roots/poles known by construction."""

    zeros: tuple[complex, ...]
    poles: tuple[complex, ...]
    rf: RationalFunctionExact
    expr: Expr

    @property
    def divisor(self) -> int:
        return len(self.zeros) - len(self.poles)

    @property
    def sum_moduli(self) -> float:
        return sum(abs(w) for w in self.zeros) + sum(abs(w) for w in self.poles)

    @property
    def max_modulus(self) -> float:
        return max((abs(w) for w in (*self.zeros, *self.poles)), default=0.0)

    @property
    def joint_bound(self) -> float:
        return joint_cauchy_bound(self.rf)


def sample_disc_points(
    rng: np.random.Generator,
    count: int,
    radius: float = DISC_RADIUS,
    min_sep: float = MIN_SEPARATION,
) -> list[complex]:
    """Uniform draws from the disc with pairwise separation >= min_sep."""
    points: list[complex] = []
    while len(points) < count:
        r = radius * math.sqrt(rng.uniform())
        theta = 2.0 * math.pi * rng.uniform()
        z = complex(r * math.cos(theta), r * math.sin(theta))
        if all(abs(z - w) >= min_sep for w in points):
            points.append(z)
    return points


def factored_expression(zeros, poles) -> Expr:
    """Product of (z - a) factors over product of (z - b) factors."""

    def linear(a: complex) -> Expr:
        return Sub(Var(), Const.from_float_complex(a))

    num: Expr = (
        fold(Mul, [linear(a) for a in zeros])
        if zeros
        else Const.from_decimal("1")
    )
    if not poles:
        return num
    den = fold(Mul, [linear(b) for b in poles])
    return Div(num, den)


def exact_from_roots(zeros, poles) -> RationalFunctionExact:
    p = Polynomial.from_roots(GaussianRational.from_complex(a) for a in zeros)
    q = Polynomial.from_roots(GaussianRational.from_complex(b) for b in poles)
    return reduce(p, q)


def make_corpus_function(
    rng: np.random.Generator, max_degree: int = MAX_DEGREE
) -> CorpusFunction:
    m = int(rng.integers(0, max_degree + 1))
    n = int(rng.integers(0, max_degree + 1))
    points = sample_disc_points(rng, m + n)
    zeros, poles = tuple(points[:m]), tuple(points[m:])
    rf = exact_from_roots(zeros, poles)
    fn = CorpusFunction(zeros, poles, rf, factored_expression(zeros, poles))
    # separation guarantees coprimality, so expansion never cancels degrees
    assert divisor(rf) == fn.divisor
    return fn


def make_corpus(seed: int, count: int, max_degree: int = MAX_DEGREE):
    rng = np.random.default_rng(seed)
    return [make_corpus_function(rng, max_degree) for _ in range(count)]


@pytest.fixture(scope="session")
def small_corpus():
    """Two dozen factored rationals for module-level property tests."""
    return make_corpus(seed=1105, count=24)


#: curated malformed inputs with the 1-based byte offset the parser must
#: report (offsets point at the offending token; end-of-input errors point
#: one past the last byte).
MALFORMED_INPUTS = [
    ("", 1),
    ("z +", 4),
    ("(z", 3),
    ("z)", 2),
    ("z^", 3),
    ("z^(3", 3),
    ("z^z", 3),
    ("z^1.5", 3),
    ("z^-", 4),
    ("z^99999", 3),
    ("exp", 4),
    ("exp z", 5),
    ("exp()", 5),
    ("exp(z", 6),
    ("()", 2),
    ("*z", 1),
    ("z*", 3),
    ("2z", 2),
    ("1..5", 2),
    ("w+1", 1),
    ("z@1", 2),
    ("1/0", 3),
]


def random_garden_ast(rng: np.random.Generator, depth: int) -> Expr:
    """Random grammar-expressible tree (every Const is a printable literal)."""
    from ratfun.expressions import Add, Exp, IntPow, Neg

    if depth <= 0 or rng.uniform() < 0.3:
        pick = int(rng.integers(0, 4))
        if pick == 0:
            return Var()
        if pick == 1:
            return Const.imaginary_unit()
        if pick == 2:
            return Const.from_decimal(str(int(rng.integers(0, 100))))
        return Const.from_decimal(
            f"{int(rng.integers(0, 50))}.{int(rng.integers(0, 1000)):03d}"
        )
    pick = int(rng.integers(0, 7))
    if pick == 0:
        return Add(random_garden_ast(rng, depth - 1), random_garden_ast(rng, depth - 1))
    if pick == 1:
        return Sub(random_garden_ast(rng, depth - 1), random_garden_ast(rng, depth - 1))
    if pick == 2:
        return Mul(random_garden_ast(rng, depth - 1), random_garden_ast(rng, depth - 1))
    if pick == 3:
        den = random_garden_ast(rng, depth - 1)
        if isinstance(den, Const) and den.value == 0:
            den = Const.from_decimal("1")
        return Div(random_garden_ast(rng, depth - 1), den)
    if pick == 4:
        return Neg(random_garden_ast(rng, depth - 1))
    if pick == 5:
        return IntPow(random_garden_ast(rng, depth - 1), int(rng.integers(-8, 9)))
    return Exp(random_garden_ast(rng, depth - 1))
