"""HTTP service exposing the divisor/classification pipelines.

Every endpoint returns the same envelope the CLI prints in JSON mode:

    {"schema": 1, "command": ..., "input": ..., "params": ..., "result": ...}

with the effective (post-default) parameters echoed under "params" so runs
are reproducible from the response alone.  Domain failures return HTTP 422
with {"schema", "command", "input", "error": {"kind", "message", ...}} where
kind is one of "parse", "wrong-form" or "contour"; the CLI maps those to its
exit codes.  Responses carry no timestamps and are built in a fixed key
order, so identical requests yield byte-identical bodies.

Complex numbers are serialized as two-element [re, im] arrays throughout.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, field_validator

from . import estimation
from .contour import ContourSingularityError, ContourSpec, winding_integral
from .exact import Polynomial, RationalFunctionExact, divisor, joint_cauchy_bound
from .expressions import (
    ExactConversionError,
    Expr,
    JetEvaluationError,
    ZeroFunctionError,
    as_exact_rational,
    jet_evaluator,
)
from .parser import ParseError, parse

SCHEMA_VERSION = 1

_COMPLEX_PAIR = {
    "type": "array",
    "prefixItems": [{"type": "number"}, {"type": "number"}],
    "minItems": 2,
    "maxItems": 2,
}

_WINDING_SCHEMA = {
    "type": "object",
    "required": ["raw", "nearest_int", "residual", "nodes", "converged"],
    "properties": {
        "raw": _COMPLEX_PAIR,
        "nearest_int": {"type": "integer"},
        "residual": {"type": "number"},
        "nodes": {"type": "integer"},
        "converged": {"type": "boolean"},
    },
}

_EXACT_COEFF = {
    "type": "object",
    "required": ["re", "im"],
    "properties": {"re": {"type": "string"}, "im": {"type": "string"}},
}

_POLY_SCHEMA = {
    "type": "object",
    "required": ["coeffs", "degree", "text"],
    "properties": {
        "coeffs": {"type": "array", "items": _EXACT_COEFF},
        "degree": {"type": ["integer", "null"]},
        "text": {"type": "string"},
    },
}

#: jsonschema documents for the envelope and each command's result payload.
RESULT_SCHEMAS = {
    "divisor": {
        "type": "object",
        "required": ["numer", "denom", "m", "n", "d"],
        "properties": {
            "numer": _POLY_SCHEMA,
            "denom": _POLY_SCHEMA,
            "m": {"type": "integer"},
            "n": {"type": "integer"},
            "d": {"type": "integer"},
        },
    },
    "classify": {
        "type": "object",
        "required": ["verdict", "probes"],
        "properties": {
            "verdict": {
                "type": "object",
                "required": ["kind"],
                "properties": {
                    "kind": {"enum": ["rational", "not_rational", "inconclusive"]},
                    "d": {"type": "integer"},
                    "reason": {"type": "string"},
                },
            },
            "probes": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["radius", "mean", "spread", "winding"],
                    "properties": {
                        "radius": {"type": "number"},
                        "mean": _COMPLEX_PAIR,
                        "spread": {"type": "number"},
                        "winding": _WINDING_SCHEMA,
                    },
                },
            },
            "exact": {
                "type": "object",
                "required": ["d"],
                "properties": {"d": {"type": "integer"}},
            },
            "agrees": {"type": "boolean"},
        },
    },
    "winding": {
        "type": "object",
        "required": ["raw", "nearest_int", "residual", "nodes", "converged",
                     "radius_used"],
        "properties": {**_WINDING_SCHEMA["properties"],
                       "radius_used": {"type": "number"}},
    },
    "fta": {
        "type": "object",
        "required": ["degree", "count", "pass", "radius", "winding"],
        "properties": {
            "degree": {"type": "integer"},
            "count": {"type": "integer"},
            "pass": {"type": "boolean"},
            "radius": {"type": "number"},
            "winding": _WINDING_SCHEMA,
        },
    },
}

ENVELOPE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "command", "input", "params", "result"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "command": {"enum": sorted(RESULT_SCHEMAS)},
        "input": {"type": "string"},
        "params": {"type": "object"},
        "result": {"type": "object"},
    },
}

ERROR_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "command", "input", "error"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "command": {"type": "string"},
        "input": {"type": "string"},
        "error": {
            "type": "object",
            "required": ["kind", "message"],
            "properties": {
                "kind": {"enum": ["parse", "wrong-form", "contour"]},
                "message": {"type": "string"},
                "offset": {"type": "integer"},
                "expected": {"type": "array", "items": {"type": "string"}},
            },
        },
    },
}


# ---------------------------------------------------------------------------
# Requests
# ---------------------------------------------------------------------------


def _require_pow2(name: str):
    def check(v: int) -> int:
        if v < 8 or v & (v - 1):
            raise ValueError(f"{name} must be a power of two >= 8")
        return v

    return check


class QuadratureParams(BaseModel):
    initial_nodes: int = 64
    max_nodes: int = 65536
    tol: float = Field(default=1e-9, gt=0)

    _pow2_init = field_validator("initial_nodes")(_require_pow2("initial_nodes"))
    _pow2_max = field_validator("max_nodes")(_require_pow2("max_nodes"))


class DivisorRequest(BaseModel):
    expression: str


class ClassifyRequest(QuadratureParams):
    expression: str
    r0: float | None = Field(default=None, gt=0)
    growth: float = Field(default=2.0, gt=1)
    steps: int = Field(default=6, ge=3)
    tol_int: float = Field(default=1e-3, gt=0)
    decay_factor: float = Field(default=1.5, gt=1)


class WindingRequest(QuadratureParams):
    expression: str
    radius: float = Field(gt=0)
    center: tuple[float, float] = (0.0, 0.0)


class FtaRequest(QuadratureParams):
    expression: str


# ---------------------------------------------------------------------------
# Result payload models
# ---------------------------------------------------------------------------


class WindingModel(BaseModel):
    raw: tuple[float, float]
    nearest_int: int
    residual: float
    nodes: int
    converged: bool

    @staticmethod
    def of(w) -> "WindingModel":
        return WindingModel(
            raw=(w.raw.real, w.raw.imag),
            nearest_int=w.nearest_int,
            residual=w.residual,
            nodes=w.nodes_used,
            converged=w.converged,
        )


class ProbeModel(BaseModel):
    radius: float
    mean: tuple[float, float]
    spread: float
    winding: WindingModel


class VerdictModel(BaseModel):
    kind: str
    d: int | None = None
    reason: str | None = None


def _poly_json(p: Polynomial) -> dict:
    return {
        "coeffs": [{"re": str(c.re), "im": str(c.im)} for c in p.coeffs],
        "degree": p.degree,
        "text": str(p),
    }


def _envelope(command: str, expression: str, params: dict, result: dict) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "input": expression,
        "params": params,
        "result": result,
    }


class _DomainError(Exception):
    def __init__(self, kind: str, message: str, **extra):
        self.kind = kind
        self.message = message
        self.extra = extra


def _parse_expression(text: str) -> Expr:
    try:
        return parse(text)
    except ParseError as err:
        raise _DomainError(
            "parse", str(err), offset=err.offset, expected=list(err.expected)
        ) from err


def _exact_form(e: Expr) -> RationalFunctionExact | None:
    """Exact form, a wrong-form error, or None for exp-containing trees."""
    try:
        return as_exact_rational(e)
    except ZeroFunctionError as err:
        raise _DomainError("wrong-form", str(err)) from err
    except ExactConversionError as err:
        raise _DomainError("wrong-form", str(err)) from err


def _error_response(command: str, expression: str, err: _DomainError) -> JSONResponse:
    body = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "input": expression,
        "error": {"kind": err.kind, "message": err.message, **err.extra},
    }
    return JSONResponse(status_code=422, content=body)


def create_app() -> FastAPI:
    app = FastAPI(
        title="ratfun",
        description="Rational-function divisors and black-box rationality "
        "classification from the boundary behavior of z*f'/f.",
        version="0.1.0",
    )

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.post("/v1/divisor")
    def cmd_divisor(req: DivisorRequest):
        try:
            expr = _parse_expression(req.expression)
            rf = _exact_form(expr)
            if rf is None:
                raise _DomainError(
                    "wrong-form",
                    "expression contains exp and is not in exact rational "
                    "form; use classify for numerical evidence",
                )
        except _DomainError as err:
            return _error_response("divisor", req.expression, err)
        m, n = rf.numer.degree, rf.denom.degree
        result = {
            "numer": _poly_json(rf.numer),
            "denom": _poly_json(rf.denom),
            "m": m,
            "n": n,
            "d": divisor(rf),
        }
        return _envelope("divisor", req.expression, {}, result)

    @app.post("/v1/classify")
    def cmd_classify(req: ClassifyRequest):
        try:
            expr = _parse_expression(req.expression)
            rf = _exact_form(expr)
            r0 = req.r0
            if r0 is None:
                r0 = 2.0 * joint_cauchy_bound(rf) if rf is not None else 4.0
            try:
                est = estimation.limit_probe(
                    jet_evaluator(expr),
                    r0,
                    req.growth,
                    req.steps,
                    initial_nodes=req.initial_nodes,
                    max_nodes=req.max_nodes,
                    tol=req.tol,
                )
            except (ContourSingularityError, JetEvaluationError) as err:
                raise _DomainError("contour", str(err)) from err
            est = estimation.classify_estimate(est, req.tol_int, req.decay_factor)
        except _DomainError as err:
            return _error_response("classify", req.expression, err)

        verdict = VerdictModel(
            kind=est.verdict.kind, d=est.verdict.d, reason=est.verdict.reason
        )
        probes = [
            ProbeModel(
                radius=p.radius,
                mean=(p.mean_zff.real, p.mean_zff.imag),
                spread=p.spread,
                winding=WindingModel.of(p.winding),
            )
            for p in est.probes
        ]
        result = {
            "verdict": verdict.model_dump(exclude_none=True),
            "probes": [p.model_dump() for p in probes],
        }
        if rf is not None:
            exact_d = divisor(rf)
            result["exact"] = {"d": exact_d}
            result["agrees"] = (
                est.verdict.kind == estimation.KIND_RATIONAL
                and est.verdict.d == exact_d
            )
        params = {
            "r0": r0,
            "growth": req.growth,
            "steps": req.steps,
            "initial_nodes": req.initial_nodes,
            "max_nodes": req.max_nodes,
            "tol": req.tol,
            "tol_int": req.tol_int,
            "decay_factor": req.decay_factor,
        }
        return _envelope("classify", req.expression, params, result)

    @app.post("/v1/winding")
    def cmd_winding(req: WindingRequest):
        try:
            expr = _parse_expression(req.expression)
            spec = ContourSpec(
                radius=req.radius,
                center=complex(*req.center),
                initial_nodes=req.initial_nodes,
                max_nodes=req.max_nodes,
                tol=req.tol,
            )
            try:
                w = winding_integral(jet_evaluator(expr), spec)
            except (ContourSingularityError, JetEvaluationError) as err:
                raise _DomainError("contour", str(err)) from err
        except _DomainError as err:
            return _error_response("winding", req.expression, err)
        result = WindingModel.of(w).model_dump()
        result["radius_used"] = w.radius_used
        params = {
            "center": list(req.center),
            "radius": req.radius,
            "initial_nodes": req.initial_nodes,
            "max_nodes": req.max_nodes,
            "tol": req.tol,
        }
        return _envelope("winding", req.expression, params, result)

    @app.post("/v1/fta")
    def cmd_fta(req: FtaRequest):
        try:
            expr = _parse_expression(req.expression)
            rf = _exact_form(expr)
            if rf is None:
                raise _DomainError(
                    "wrong-form", "expression contains exp; fta needs a polynomial"
                )
            if rf.denom.degree != 0:
                raise _DomainError(
                    "wrong-form",
                    "expression is not a polynomial (denominator has degree "
                    f"{rf.denom.degree})",
                )
            try:
                check = estimation.fta_check(
                    rf.numer,
                    initial_nodes=req.initial_nodes,
                    max_nodes=req.max_nodes,
                    tol=req.tol,
                )
            except (ContourSingularityError, JetEvaluationError) as err:
                raise _DomainError("contour", str(err)) from err
        except _DomainError as err:
            return _error_response("fta", req.expression, err)
        result = {
            "degree": check.degree,
            "count": check.count,
            "pass": check.passed,
            "radius": check.radius,
            "winding": WindingModel.of(check.winding).model_dump(),
        }
        params = {
            "initial_nodes": req.initial_nodes,
            "max_nodes": req.max_nodes,
            "tol": req.tol,
        }
        return _envelope("fta", req.expression, params, result)

    return app


app = create_app()
