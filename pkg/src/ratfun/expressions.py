"""Expression trees for meromorphic functions and their joint (f, f') evaluation.

The node vocabulary is deliberately small: arithmetic, integer powers and the
entire exponential.  That is exactly enough to denote p(z)/q(z)*e^{g(z)}-shaped
functions, which is the class the divisor estimator cares about.

Evaluation is forward-mode: every node propagates the pair (value, derivative)
using the sum/product/quotient/power rules and the chain rule through exp.
The workhorse is :func:`eval_jet_many`, which evaluates a whole array of
points at once with numpy (the contour module feeds it entire node sets);
:func:`eval_jet` is the scalar convenience wrapper over the same code path.

Evaluating at a pole is an error, never an infinity: a division whose
denominator is exactly zero, or any non-finite intermediate (including exp
overflow), raises :class:`JetEvaluationError` carrying the offending point, so
callers can detect and re-route rather than propagate NaN.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exact import (
    GR_ONE,
    GaussianRational,
    Polynomial,
    RationalFunctionExact,
    reduce,
)

MAX_EXPONENT = 4096


class JetEvaluationError(ArithmeticError):
    """Evaluation hit a pole or produced a non-finite intermediate."""

    def __init__(self, point: complex, detail: str = "pole"):
        super().__init__(f"evaluation failed at z = {point}: {detail}")
        self.point = point
        self.detail = detail


class ExactConversionError(ValueError):
    """The expression cannot be converted to exact rational form."""


class ZeroFunctionError(ExactConversionError):
    """The expression denotes the zero function, which has no divisor."""


class Expr:
    """Base class for expression nodes; subclasses are frozen dataclasses."""


@dataclass(frozen=True)
class Var(Expr):
    """The variable z."""


@dataclass(frozen=True)
class Const(Expr):
    """A complex constant.

    ``exact`` is the Gaussian-rational value of the literal as written, kept
    alongside the float so the exact bridge never silently rounds a decimal
    literal through binary floating point.  Parser-produced constants always
    have it; programmatic constants may not, in which case conversion to
    exact form refuses them by name.
    """

    value: complex
    exact: GaussianRational | None = field(default=None)

    @staticmethod
    def from_decimal(text: str) -> "Const":
        """Constant from a decimal literal, converted exactly."""
        exact = GaussianRational.of(Fraction(text))
        return Const(complex(float(exact.re), 0.0), exact)

    @staticmethod
    def from_float_complex(z: complex) -> "Const":
        """Constant from a float complex, lifted exactly (floats are rationals)."""
        return Const(complex(z), GaussianRational.from_complex(complex(z)))

    @staticmethod
    def imaginary_unit() -> "Const":
        return Const(1j, GaussianRational.of(0, 1))


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class IntPow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Exp(Expr):
    operand: Expr


@dataclass(frozen=True)
class JetValue:
    """(f(z), f'(z)) at one point; both components finite by construction."""

    value: complex
    deriv: complex


def _check_finite(v: np.ndarray, d: np.ndarray, z: np.ndarray, detail: str):
    bad = ~(np.isfinite(v) & np.isfinite(d))
    if bad.any():
        idx = int(np.argmax(bad))
        raise JetEvaluationError(complex(z[idx]), detail)


def _jet(e: Expr, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(e, Var):
        return z, np.ones_like(z)
    if isinstance(e, Const):
        return np.full_like(z, e.value), np.zeros_like(z)
    if isinstance(e, Add):
        va, da = _jet(e.left, z)
        vb, db = _jet(e.right, z)
        return va + vb, da + db
    if isinstance(e, Sub):
        va, da = _jet(e.left, z)
        vb, db = _jet(e.right, z)
        return va - vb, da - db
    if isinstance(e, Neg):
        v, d = _jet(e.operand, z)
        return -v, -d
    if isinstance(e, Mul):
        va, da = _jet(e.left, z)
        vb, db = _jet(e.right, z)
        v = va * vb
        d = va * db + da * vb
        _check_finite(v, d, z, "non-finite product")
        return v, d
    if isinstance(e, Div):
        va, da = _jet(e.left, z)
        vb, db = _jet(e.right, z)
        zero = vb == 0
        if zero.any():
            idx = int(np.argmax(zero))
            raise JetEvaluationError(complex(z[idx]), "division by zero")
        v = va / vb
        d = (da * vb - va * db) / (vb * vb)
        _check_finite(v, d, z, "non-finite quotient")
        return v, d
    if isinstance(e, IntPow):
        vb, db = _jet(e.base, z)
        k = e.exponent
        if k == 0:
            return np.ones_like(z), np.zeros_like(z)
        if k < 0:
            zero = vb == 0
            if zero.any():
                idx = int(np.argmax(zero))
                raise JetEvaluationError(complex(z[idx]), "zero base with negative power")
        v = vb**k
        d = k * vb ** (k - 1) * db
        _check_finite(v, d, z, "non-finite power")
        return v, d
    if isinstance(e, Exp):
        v0, d0 = _jet(e.operand, z)
        v = np.exp(v0)
        d = v * d0
        _check_finite(v, d, z, "exp overflow")
        return v, d
    raise TypeError(f"unknown expression node {type(e).__name__}")


def eval_jet_many(e: Expr, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate (f, f') at every point of a complex array."""
    z = np.asarray(z, dtype=np.complex128)
    with np.errstate(all="ignore"):
        v, d = _jet(e, z)
    _check_finite(v, d, z, "non-finite result")
    return v, d


def eval_jet(e: Expr, z: complex) -> JetValue:
    """Evaluate (f(z), f'(z)) at a single point."""
    v, d = eval_jet_many(e, np.array([complex(z)], dtype=np.complex128))
    return JetValue(complex(v[0]), complex(d[0]))


def jet_evaluator(e: Expr):
    """Closure form of eval_jet_many, the shape the contour module consumes."""

    def evaluate(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return eval_jet_many(e, z)

    return evaluate


# ---------------------------------------------------------------------------
# Bridge to the exact core
# ---------------------------------------------------------------------------


def _contains_exp(e: Expr) -> bool:
    if isinstance(e, Exp):
        return True
    if isinstance(e, (Add, Sub, Mul, Div)):
        return _contains_exp(e.left) or _contains_exp(e.right)
    if isinstance(e, Neg):
        return _contains_exp(e.operand)
    if isinstance(e, IntPow):
        return _contains_exp(e.base)
    return False


def _to_pair(e: Expr) -> tuple[Polynomial, Polynomial]:
    """Formal numerator/denominator pair of an exp-free expression."""
    if isinstance(e, Var):
        return Polynomial.variable(), Polynomial.one()
    if isinstance(e, Const):
        if e.exact is None:
            raise ExactConversionError(
                f"constant {e.value!r} has no exact representation"
            )
        return Polynomial.of([e.exact]), Polynomial.one()
    if isinstance(e, Add):
        an, ad = _to_pair(e.left)
        bn, bd = _to_pair(e.right)
        return an * bd + bn * ad, ad * bd
    if isinstance(e, Sub):
        an, ad = _to_pair(e.left)
        bn, bd = _to_pair(e.right)
        return an * bd - bn * ad, ad * bd
    if isinstance(e, Neg):
        n, d = _to_pair(e.operand)
        return -n, d
    if isinstance(e, Mul):
        an, ad = _to_pair(e.left)
        bn, bd = _to_pair(e.right)
        return an * bn, ad * bd
    if isinstance(e, Div):
        an, ad = _to_pair(e.left)
        bn, bd = _to_pair(e.right)
        if bn.is_zero:
            raise ZeroFunctionError("division by an identically-zero denominator")
        return an * bd, ad * bn
    if isinstance(e, IntPow):
        n, d = _to_pair(e.base)
        k = e.exponent
        if k == 0:
            return Polynomial.one(), Polynomial.one()
        if k < 0:
            if n.is_zero:
                raise ZeroFunctionError(
                    "negative power of an identically-zero base"
                )
            n, d, k = d, n, -k
        # square-and-multiply keeps large exponents tractable
        nn, dd = Polynomial.one(), Polynomial.one()
        while k:
            if k & 1:
                nn, dd = nn * n, dd * d
            k >>= 1
            if k:
                n, d = n * n, d * d
        return nn, dd
    raise TypeError(f"unknown expression node {type(e).__name__}")


def as_exact_rational(e: Expr) -> RationalFunctionExact | None:
    """Exact coprime form of an exp-free expression.

    Returns None (the not-rational-form marker) when the tree contains an
    Exp node: such expressions are valid inputs to the numerical pipeline,
    just not to the exact one.  Raises :class:`ExactConversionError` for a
    constant without an exact value and :class:`ZeroFunctionError` for the
    identically-zero function (which has no divisor).
    """
    if _contains_exp(e):
        return None
    n, d = _to_pair(e)
    if n.is_zero:
        raise ZeroFunctionError("expression is identically zero")
    return reduce(n, d)


def _grammar_const_tree(c: GaussianRational) -> Expr:
    """Smallest grammar-shaped tree denoting an exact constant."""

    def real_part(x: Fraction) -> Expr:
        num = Const(complex(float(abs(x.numerator)), 0.0),
                    GaussianRational.of(abs(x.numerator)))
        e: Expr = num
        if x.denominator != 1:
            den = Const(complex(float(x.denominator), 0.0),
                        GaussianRational.of(x.denominator))
            e = Div(e, den)
        if x < 0:
            e = Neg(e)
        return e

    if not c.im:
        return real_part(c.re)
    imag: Expr = Mul(real_part(abs(c.im)), Const.imaginary_unit())
    if c.im < 0:
        imag = Neg(imag)
    if not c.re:
        return imag
    return Add(real_part(c.re), imag)


def polynomial_expression(p: Polynomial) -> Expr:
    """Horner-form expression tree evaluating p, with exact constants."""
    if p.is_zero:
        return Const(0j, GaussianRational.of(0))
    acc: Expr = Const(p.coeffs[-1].to_complex(), p.coeffs[-1])
    for c in reversed(p.coeffs[:-1]):
        step = Mul(acc, Var())
        acc = step if c.is_zero else Add(step, Const(c.to_complex(), c))
    return acc


def rational_expression(f: RationalFunctionExact) -> Expr:
    """Expression tree for an exact rational function (Div of Horner forms)."""
    num = polynomial_expression(f.numer)
    if f.denom.degree == 0 and f.denom.leading == GR_ONE:
        return num
    return Div(num, polynomial_expression(f.denom))


# ---------------------------------------------------------------------------
# Canonical printing
# ---------------------------------------------------------------------------


def _fraction_decimal(x: Fraction) -> str | None:
    """Finite decimal rendering of x, or None when none exists."""
    den = x.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return None
    shift = max(twos, fives)
    scaled = x.numerator * 10**shift // x.denominator
    digits = str(abs(scaled)).rjust(shift + 1, "0")
    sign = "-" if scaled < 0 else ""
    if shift == 0:
        return f"{sign}{digits}"
    return f"{sign}{digits[:-shift]}.{digits[-shift:]}"


def _print_const(c: Const) -> str:
    if c.exact is not None:
        g = c.exact
        if not g.im:
            dec = _fraction_decimal(g.re)
            if dec is not None and not dec.startswith("-"):
                return dec
        if not g.re and g.im == 1:
            return "i"
        return print_canonical(_grammar_const_tree(g))
    # No exact part: fall back to the float repr (re-parsable when real).
    if c.value.imag == 0 and c.value.real >= 0:
        return repr(c.value.real)
    re, im = c.value.real, c.value.imag
    return f"({re!r} + {im!r} * i)"


def print_canonical(e: Expr) -> str:
    """Fully parenthesized text form; parsing it back restores the tree.

    The round trip is structural for every tree made of grammar-expressible
    constants (nonnegative finite decimals and the literal i); constants
    outside that set are printed as equivalent compound expressions.
    """
    if isinstance(e, Var):
        return "z"
    if isinstance(e, Const):
        return _print_const(e)
    if isinstance(e, Add):
        return f"({print_canonical(e.left)} + {print_canonical(e.right)})"
    if isinstance(e, Sub):
        return f"({print_canonical(e.left)} - {print_canonical(e.right)})"
    if isinstance(e, Mul):
        return f"({print_canonical(e.left)} * {print_canonical(e.right)})"
    if isinstance(e, Div):
        return f"({print_canonical(e.left)} / {print_canonical(e.right)})"
    if isinstance(e, Neg):
        return f"(-{print_canonical(e.operand)})"
    if isinstance(e, IntPow):
        return f"({print_canonical(e.base)} ^ {e.exponent})"
    if isinstance(e, Exp):
        return f"exp({print_canonical(e.operand)})"
    raise TypeError(f"unknown expression node {type(e).__name__}")
