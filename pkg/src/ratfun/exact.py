"""Exact arithmetic over the Gaussian rationals Q(i) and univariate polynomials.

This is the ground-truth layer of the package: every quantity here is exact,
so polynomial GCDs, coprime reduction and divisors are decidable facts rather
than numerical estimates.  The numerical modules (contour quadrature, divisor
estimation) are checked against it.

Representation conventions:

- A Gaussian rational is a pair of ``fractions.Fraction`` values (real and
  imaginary part).  ``Fraction`` already guarantees lowest terms and a
  positive denominator, which is exactly the invariant we need.
- A polynomial is a tuple of Gaussian-rational coefficients in ascending
  degree order whose last entry is nonzero.  The zero polynomial is the
  empty tuple; its degree is ``None`` (a sentinel, deliberately distinct
  from 0, so divisor arithmetic cannot silently treat 0 as a constant).
- A ``RationalFunctionExact`` is a coprime numerator/denominator pair with a
  monic denominator.  That normalization makes the representative unique, so
  equality of rational functions is structural equality of the dataclass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

Scalar = Union["GaussianRational", Fraction, int]


class PoleError(ArithmeticError):
    """Evaluation hit a pole; carries the offending point."""

    def __init__(self, point):
        super().__init__(f"evaluation at a pole: z = {point}")
        self.point = point


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex scalar with rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    @staticmethod
    def of(re, im=0) -> "GaussianRational":
        return GaussianRational(_as_fraction(re), _as_fraction(im))

    @staticmethod
    def from_complex(z: complex) -> "GaussianRational":
        """Exact lift of a float complex: every finite float is a rational."""
        return GaussianRational(Fraction(float(z.real)), Fraction(float(z.imag)))

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __add__(self, other: Scalar) -> "GaussianRational":
        o = _coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    def __sub__(self, other: Scalar) -> "GaussianRational":
        o = _coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: Scalar) -> "GaussianRational":
        o = _coerce(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    def __truediv__(self, other: Scalar) -> "GaussianRational":
        o = _coerce(other)
        n2 = o.re * o.re + o.im * o.im
        if not n2:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n2,
            (self.im * o.re - self.re * o.im) / n2,
        )

    __radd__ = __add__
    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs_squared(self) -> Fraction:
        """|z|^2, exact (|z| itself is usually irrational)."""
        return self.re * self.re + self.im * self.im

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def _coerce(x: Scalar) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(_as_fraction(x), Fraction(0))


GR_ZERO = GaussianRational.of(0)
GR_ONE = GaussianRational.of(1)
GR_I = GaussianRational.of(0, 1)


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial over the Gaussian rationals, ascending coefficients."""

    coeffs: tuple[GaussianRational, ...]

    @staticmethod
    def of(coeffs: Iterable) -> "Polynomial":
        """Build from any iterable of scalars, trimming trailing zeros."""
        cs = [_coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero:
            cs.pop()
        return Polynomial(tuple(cs))

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial(())

    @staticmethod
    def one() -> "Polynomial":
        return Polynomial.of([1])

    @staticmethod
    def variable() -> "Polynomial":
        """The polynomial z."""
        return Polynomial.of([0, 1])

    @staticmethod
    def from_roots(roots: Iterable[GaussianRational]) -> "Polynomial":
        """Monic product of (z - r); roots are inputs, never computed here."""
        p = Polynomial.one()
        for r in roots:
            p = p * Polynomial.of([-r, 1])
        return p

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int | None:
        """Degree, or None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def leading(self) -> GaussianRational:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial.of(out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (GaussianRational, Fraction, int)):
            return self.scale(other)
        if self.is_zero or other.is_zero:
            return Polynomial.zero()
        out = [GR_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial.of(out)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "Polynomial":
        c = _coerce(c)
        if c.is_zero:
            return Polynomial.zero()
        return Polynomial(tuple(a * c for a in self.coeffs))

    def derivative(self) -> "Polynomial":
        return Polynomial.of(c * k for k, c in enumerate(self.coeffs) if k > 0)

    def monic(self) -> "Polynomial":
        if self.is_zero:
            raise ValueError("cannot normalize the zero polynomial")
        return self.scale(GR_ONE / self.leading)

    def __divmod__(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        """Exact long division over the field Q(i)."""
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if self.is_zero:
            return Polynomial.zero(), Polynomial.zero()
        rem = list(self.coeffs)
        dn = other.degree
        lead = other.leading
        q = [GR_ZERO] * max(len(rem) - dn, 0)
        while len(rem) - 1 >= dn and rem:
            k = len(rem) - 1 - dn
            factor = rem[-1] / lead
            q[k] = factor
            for j, c in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - factor * c
            while rem and rem[-1].is_zero:
                rem.pop()
        return Polynomial.of(q), Polynomial.of(rem)

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    def __call__(self, z: GaussianRational) -> GaussianRational:
        """Horner evaluation, exact."""
        acc = GR_ZERO
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_zero:
                continue
            if k == 0:
                term = f"{c}"
            else:
                zs = "z" if k == 1 else f"z^{k}"
                term = zs if c == GR_ONE else f"({c})*{zs}"
            parts.append(term)
        return " + ".join(parts)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic GCD by the Euclidean algorithm.

    Every remainder is renormalized monic: scaling does not change the ideal,
    and with Fraction coefficients it keeps entries small at desk-scale
    degrees.  Raises ValueError when both inputs are zero.
    """
    if a.is_zero and b.is_zero:
        raise ValueError("gcd(0, 0) is undefined")
    while not b.is_zero:
        a, b = b, (a % b)
        if not b.is_zero:
            b = b.monic()
    return a.monic()


@dataclass(frozen=True)
class RationalFunctionExact:
    """Coprime P/Q with monic Q; the unique exact representative of f."""

    numer: Polynomial
    denom: Polynomial

    def __post_init__(self):
        if self.numer.is_zero:
            raise ValueError("rational function must be nonzero")
        if self.denom.is_zero:
            raise ValueError("denominator must be nonzero")
        if self.denom.leading != GR_ONE:
            raise ValueError("denominator must be monic")
        if poly_gcd(self.numer, self.denom).degree != 0:
            raise ValueError("numerator and denominator must be coprime")


def reduce(p: Polynomial, q: Polynomial) -> RationalFunctionExact:
    """Cancel the common factor of p/q and normalize the denominator monic."""
    if p.is_zero:
        raise ValueError("zero numerator: the function is identically zero")
    if q.is_zero:
        raise ValueError("zero denominator")
    g = poly_gcd(p, q)
    if g.degree != 0:
        p, q = p // g, q // g
    lead = q.leading
    return RationalFunctionExact(p.scale(GR_ONE / lead), q.scale(GR_ONE / lead))


def divisor(f: RationalFunctionExact) -> int:
    """deg P - deg Q of the coprime form; equals deg P for polynomials."""
    return f.numer.degree - f.denom.degree


def log_derivative(f: RationalFunctionExact) -> tuple[Polynomial, Polynomial]:
    """f'/f as the formal pair (P'Q - PQ', PQ), deliberately not reduced.

    At any point that is not a root of PQ this evaluates to P'/P - Q'/Q.
    """
    p, q = f.numer, f.denom
    num = p.derivative() * q - p * q.derivative()
    return num, p * q


def eval_exact(f: RationalFunctionExact, z: GaussianRational) -> GaussianRational:
    """Exact value of f at z via Horner on both polynomials."""
    den = f.denom(z)
    if den.is_zero:
        raise PoleError(z)
    return f.numer(z) / den


def _sqrt_rounded_up(q: Fraction) -> float:
    """Smallest convenient float r with r^2 >= q (q >= 0)."""
    if q < 0:
        raise ValueError("negative radicand")
    if not q:
        return 0.0
    r = math.sqrt(float(q))
    # float(q) rounds to nearest; nudge upward until the square dominates.
    while Fraction(r) * Fraction(r) < q:
        r = math.nextafter(r, math.inf)
    return r


def cauchy_root_bound(p: Polynomial) -> float:
    """1 + max |a_i| / |a_deg| over non-leading coefficients, rounded upward.

    Every root of p has modulus strictly below the returned value; upward
    rounding keeps that guarantee through the exact-to-float conversion.
    """
    if p.is_zero:
        raise ValueError("zero polynomial has no root bound")
    lead2 = p.leading.abs_squared()
    best = 0.0
    for c in p.coeffs[:-1]:
        if c.is_zero:
            continue
        best = max(best, _sqrt_rounded_up(c.abs_squared() / lead2))
    bound = 1.0 + best
    while Fraction(bound) - 1 < Fraction(best):
        bound = math.nextafter(bound, math.inf)
    return bound


def joint_cauchy_bound(f: RationalFunctionExact) -> float:
    """Cauchy bound of numer*denom: a radius enclosing every zero and pole."""
    return cauchy_root_bound(f.numer * f.denom)
