"""Fourier-multiplier dispersion symbols m(k).

Built-in families, a small expression parser for user-defined symbols,
derivative evaluation, and empirical verification of the structural
assumptions (smoothness, evenness with m(0)=1, power-law tails, absence
of harmonic resonances m(k)=m(nk)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import EmptyGrid, NonFinite, ParseError
from .numerics import Bracket, find_root

#: finite-difference steps for fallback derivatives
_H1 = 1e-5
_H2 = 1e-4


@dataclass(frozen=True)
class DispersionSymbol:
    """Evaluable dispersion symbol m(k) with optional analytic derivatives.

    ``raw`` is the symbol as supplied (used for evenness checks); public
    evaluation goes through :func:`eval_m`, which symmetrizes to |k|.
    ``alpha`` is the nominal growth exponent of the large-k tail when
    known, ``params`` any named parameters of the family.
    """

    name: str
    raw: Callable[[float], float]
    d1: Callable[[float], float] | None = None
    d2: Callable[[float], float] | None = None
    alpha: float | None = None
    params: dict[str, float] = field(default_factory=dict)
    warnings: tuple[str, ...] = ()


def eval_m(sym: DispersionSymbol, k: float) -> float:
    """m(k); evaluates at |k| since every admissible symbol is even."""
    val = sym.raw(abs(k))
    if not math.isfinite(val):
        raise NonFinite(f"{sym.name}({k}) is not finite")
    return val


def d1_m(sym: DispersionSymbol, k: float) -> float:
    """First derivative m'(k), analytic when available."""
    s = -1.0 if k < 0 else 1.0
    if sym.d1 is not None:
        val = s * sym.d1(abs(k))
    else:
        h = _H1 * max(1.0, abs(k))
        val = (eval_m(sym, k + h) - eval_m(sym, k - h)) / (2.0 * h)
    if not math.isfinite(val):
        raise NonFinite(f"{sym.name}'({k}) is not finite")
    return val


def d2_m(sym: DispersionSymbol, k: float) -> float:
    """Second derivative m''(k), analytic when available."""
    if sym.d2 is not None:
        val = sym.d2(abs(k))
    else:
        h = _H2 * max(1.0, abs(k))
        val = (eval_m(sym, k + h) - 2.0 * eval_m(sym, k) + eval_m(sym, k - h)) / (h * h)
    if not math.isfinite(val):
        raise NonFinite(f"{sym.name}''({k}) is not finite")
    return val


def phase_speed(sym: DispersionSymbol, k: float) -> float:
    """Phase speed of the plane wave with wave number k; equals m(k)."""
    return eval_m(sym, k)


def group_speed(sym: DispersionSymbol, k: float) -> float:
    """Group speed (k m(k))' = m(k) + k m'(k)."""
    return eval_m(sym, k) + k * d1_m(sym, k)


# ---------------------------------------------------------------------------
# Built-in families
# ---------------------------------------------------------------------------


def _whitham_g(k: float) -> float:
    # tanh(k)/k with the removable singularity filled by its Taylor series
    if abs(k) < 1e-6:
        k2 = k * k
        return 1.0 - k2 / 3.0 + 2.0 * k2 * k2 / 15.0
    return math.tanh(k) / k


def _whitham_g1(k: float) -> float:
    if abs(k) < 1e-4:
        return -2.0 * k / 3.0 + 8.0 * k**3 / 15.0
    t = math.tanh(k)
    return (1.0 - t * t) / k - t / (k * k)


def _whitham_g2(k: float) -> float:
    if abs(k) < 1e-3:
        return -2.0 / 3.0 + 24.0 * k * k / 15.0
    t = math.tanh(k)
    s2 = 1.0 - t * t  # sech^2
    return -2.0 * s2 * t / k - 2.0 * s2 / (k * k) + 2.0 * t / (k**3)


def _whitham(k: float) -> float:
    return math.sqrt(_whitham_g(k))


def _whitham_d1(k: float) -> float:
    return _whitham_g1(k) / (2.0 * _whitham(k))


def _whitham_d2(k: float) -> float:
    g = _whitham_g(k)
    g1 = _whitham_g1(k)
    return _whitham_g2(k) / (2.0 * math.sqrt(g)) - g1 * g1 / (4.0 * g**1.5)


def bbm_symbol() -> DispersionSymbol:
    """m(k) = 1/(1+k^2)."""
    return DispersionSymbol(
        name="bbm",
        raw=lambda k: 1.0 / (1.0 + k * k),
        d1=lambda k: -2.0 * k / (1.0 + k * k) ** 2,
        d2=lambda k: (6.0 * k * k - 2.0) / (1.0 + k * k) ** 3,
        alpha=-2.0,
    )


def boussinesq_symbol() -> DispersionSymbol:
    """m(k) = (1+k^2)^(-1/2)."""
    return DispersionSymbol(
        name="boussinesq",
        raw=lambda k: (1.0 + k * k) ** -0.5,
        d1=lambda k: -k * (1.0 + k * k) ** -1.5,
        d2=lambda k: (2.0 * k * k - 1.0) * (1.0 + k * k) ** -2.5,
        alpha=-1.0,
    )


def fractional_symbol(alpha: float) -> DispersionSymbol:
    """m(k) = 1 + |k|^alpha.

    Twice continuously differentiable at 0 only for alpha >= 2; derivatives
    at k = 0 for smaller alpha raise NonFinite where genuinely unbounded.
    """

    def d1(k: float) -> float:
        if k == 0.0:
            if alpha > 1.0:
                return 0.0
            raise NonFinite(f"fractional symbol with alpha={alpha} has no m'(0)")
        return alpha * k ** (alpha - 1.0)

    def d2(k: float) -> float:
        if k == 0.0:
            if alpha == 2.0:
                return 2.0
            if alpha > 2.0:
                return 0.0
            raise NonFinite(f"fractional symbol with alpha={alpha} has no m''(0)")
        return alpha * (alpha - 1.0) * k ** (alpha - 2.0)

    def raw(k: float) -> float:
        if k == 0.0:
            return 1.0 if alpha > 0.0 else math.inf
        return 1.0 + k**alpha

    return DispersionSymbol(
        name=f"fractional(alpha={alpha:g})",
        raw=raw,
        d1=d1,
        d2=d2,
        alpha=alpha,
        params={"alpha": alpha},
    )


def whitham_symbol() -> DispersionSymbol:
    """m(k) = sqrt(tanh(k)/k), with m(0) = 1 by the Taylor limit."""
    return DispersionSymbol(
        name="whitham", raw=_whitham, d1=_whitham_d1, d2=_whitham_d2, alpha=-0.5
    )


_BUILTINS: dict[str, Callable[..., DispersionSymbol]] = {
    "bbm": bbm_symbol,
    "boussinesq": boussinesq_symbol,
    "whitham": whitham_symbol,
    "fractional": fractional_symbol,
}


def builtin_symbol(name: str, **params: float) -> DispersionSymbol:
    """Look up a built-in family by name (fractional requires alpha=...)."""
    try:
        factory = _BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown builtin symbol '{name}'; have {sorted(_BUILTINS)}") from None
    return factory(**params)


# ---------------------------------------------------------------------------
# Expression parser
#
# Grammar: reals, identifier k, named parameters, + - * / ^, unary minus,
# functions sqrt, tanh, abs, exp, cos, pow; standard precedence with a
# right-associative '^'.
# ---------------------------------------------------------------------------

_FUNCTIONS: dict[str, tuple[int, Callable]] = {
    "sqrt": (1, math.sqrt),
    "tanh": (1, math.tanh),
    "abs": (1, abs),
    "exp": (1, math.exp),
    "cos": (1, math.cos),
    "pow": (2, lambda x, y: x**y),
}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            while j < n and (text[j].isdigit() or text[j] == "."):
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            tokens.append(("number", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], i))
            i = j
        elif ch in "+-*/^(),":
            tokens.append((ch, ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i,
                             ("number", "identifier", "operator"))
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, params: dict[str, float]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.params = params

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2], (kind,))
        return self.advance()

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"trailing input {tok[1]!r}", tok[2], ("end of input",))
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.advance()[0]
            rhs = self.unary()
            node = ("mul" if op == "*" else "div", node, rhs)
        return node

    def unary(self):
        if self.peek()[0] == "-":
            self.advance()
            return ("neg", self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.advance()
            return ("pow", base, self.unary())
        return base

    def atom(self):
        tok = self.peek()
        if tok[0] == "number":
            self.advance()
            return ("num", float(tok[1]))
        if tok[0] == "ident":
            self.advance()
            name = tok[1]
            if self.peek()[0] == "(":
                if name not in _FUNCTIONS:
                    raise ParseError(f"unknown function {name!r}", tok[2],
                                     tuple(sorted(_FUNCTIONS)))
                self.advance()
                args = [self.expr()]
                while self.peek()[0] == ",":
                    self.advance()
                    args.append(self.expr())
                self.expect(")")
                arity = _FUNCTIONS[name][0]
                if len(args) != arity:
                    raise ParseError(
                        f"function {name!r} takes {arity} argument(s), got {len(args)}",
                        tok[2], (f"{arity} argument(s)",))
                return ("call", name, args)
            if name == "k":
                return ("var",)
            if name in self.params:
                return ("num", float(self.params[name]))
            raise ParseError(f"unknown identifier {name!r}", tok[2],
                             ("k",) + tuple(sorted(self.params)))
        if tok[0] == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected token {tok[1]!r}", tok[2],
                         ("number", "identifier", "("))


def _eval_node(node, k: float) -> float:
    op = node[0]
    if op == "num":
        return node[1]
    if op == "var":
        return k
    if op == "neg":
        return -_eval_node(node[1], k)
    if op == "add":
        return _eval_node(node[1], k) + _eval_node(node[2], k)
    if op == "sub":
        return _eval_node(node[1], k) - _eval_node(node[2], k)
    if op == "mul":
        return _eval_node(node[1], k) * _eval_node(node[2], k)
    if op == "div":
        return _eval_node(node[1], k) / _eval_node(node[2], k)
    if op == "pow":
        return _eval_node(node[1], k) ** _eval_node(node[2], k)
    if op == "call":
        args = [_eval_node(a, k) for a in node[2]]
        return _FUNCTIONS[node[1]][1](*args)
    raise AssertionError(f"unknown node {op}")


_PROBE_GRID = (0.3781, 0.9132, 1.7, 2.64, 4.41, 7.9)


def parse_symbol(expr: str, params: dict[str, float] | None = None) -> DispersionSymbol:
    """Compile a textual expression in k into a DispersionSymbol.

    Removable singularities (0/0 at isolated points) are filled by a
    numerical limit.  The result carries warnings when the expression
    violates m(0)=1 or evenness on a probe grid.
    """
    params = dict(params or {})
    ast = _Parser(expr, params).parse()

    def raw(k: float) -> float:
        try:
            val = _eval_node(ast, k)
        except (ZeroDivisionError, ValueError, OverflowError):
            val = math.nan
        if math.isfinite(val):
            return val
        # probe the two-sided limit for removable singularities
        h = 1e-6 * max(1.0, abs(k))
        samples = []
        for kk in (k - 2 * h, k - h, k + h, k + 2 * h):
            try:
                v = _eval_node(ast, kk)
            except (ZeroDivisionError, ValueError, OverflowError):
                continue
            if math.isfinite(v):
                samples.append(v)
        if len(samples) >= 2 and max(samples) - min(samples) <= 1e-6 * max(
            1.0, abs(samples[0])
        ):
            return float(np.mean(samples))
        raise NonFinite(f"expression {expr!r} is not finite at k={k}")

    warnings = []
    try:
        m0 = raw(0.0)
        if abs(m0 - 1.0) > 1e-12:
            warnings.append(f"normalization violated: m(0) = {m0!r}, expected 1")
    except NonFinite:
        warnings.append("normalization violated: m(0) is not finite")
    for kk in _PROBE_GRID:
        try:
            left, right = raw(-kk), raw(kk)
        except NonFinite:
            warnings.append(f"evaluation failed on probe point k={kk}")
            continue
        if abs(left - right) > 1e-9 * max(1.0, abs(right)):
            warnings.append(f"evenness violated: m({-kk}) != m({kk})")
            break

    return DispersionSymbol(
        name=f"expr[{expr}]", raw=raw, params=params, warnings=tuple(warnings)
    )


def symbol_from_config(spec: dict) -> DispersionSymbol:
    """Build a symbol from a JSON-style declaration.

    Accepted forms: {"builtin": name, "params": {...}} and
    {"expr": text, "params": {...}}; an optional "name" overrides the label.
    """
    if "builtin" in spec:
        sym = builtin_symbol(spec["builtin"], **spec.get("params", {}))
    elif "expr" in spec:
        sym = parse_symbol(spec["expr"], spec.get("params", {}))
    else:
        raise KeyError("symbol declaration needs 'builtin' or 'expr'")
    if "name" in spec:
        sym = DispersionSymbol(
            name=spec["name"], raw=sym.raw, d1=sym.d1, d2=sym.d2,
            alpha=sym.alpha, params=sym.params, warnings=sym.warnings,
        )
    return sym


# ---------------------------------------------------------------------------
# Assumption verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AssumptionReport:
    """Outcome of the empirical structural checks on a symbol."""

    m1_ok: bool
    m2_ok: bool
    m3_ok: bool
    m4_ok: bool
    m3_bounds: tuple[float, float, float]  # (C1, C2, alpha_hat)
    m4_violations: tuple[tuple[float, int], ...]
    grid: tuple[float, ...]

    def all_ok(self) -> bool:
        return self.m1_ok and self.m2_ok and self.m3_ok and self.m4_ok


def check_assumptions(
    sym: DispersionSymbol, k_grid, n_max: int = 8
) -> AssumptionReport:
    """Verify smoothness, symmetry, tail growth and harmonic non-resonance.

    The tail exponent is fitted by log-log regression over the top decade
    of the grid; the power-law envelope (C1, C2, alpha_hat) is reported.
    Resonances m(k) = m(nk) are located by sign-change bisection for
    n = 2..n_max; any hit is a violation of the non-resonance assumption
    and downstream expansions refuse those wave numbers.
    """
    grid = np.asarray(sorted(k_grid), dtype=float)
    if grid.size == 0:
        raise EmptyGrid("k_grid is empty")
    if n_max < 2:
        raise ValueError("n_max must be >= 2")

    # (M1): derivative values finite and consistent with central differences
    m1_ok = True
    for k in grid:
        try:
            d_an = d1_m(sym, float(k))
            h = 1e-5 * max(1.0, abs(k))
            d_fd = (eval_m(sym, k + h) - eval_m(sym, k - h)) / (2 * h)
            d2_m(sym, float(k))
        except NonFinite:
            m1_ok = False
            break
        if abs(d_an - d_fd) > 1e-3 * max(1.0, abs(d_an)):
            m1_ok = False
            break

    # (M2): normalization and evenness of the raw expression
    m2_ok = True
    try:
        if abs(sym.raw(0.0) - 1.0) > 1e-12:
            m2_ok = False
        for k in grid[:: max(1, grid.size // 16)]:
            if abs(sym.raw(float(-k)) - sym.raw(float(k))) > 1e-12:
                m2_ok = False
                break
    except Exception:
        m2_ok = False

    # (M3): power-law envelope over the top decade of the grid
    tail = grid[grid >= grid[-1] / 10.0]
    if tail.size < 3:
        tail = grid[-3:]
    vals = np.array([eval_m(sym, float(k)) for k in tail])
    if np.any(vals <= 0.0):
        m3_ok = False
        bounds = (math.nan, math.nan, math.nan)
    else:
        logk, logm = np.log(tail), np.log(vals)
        alpha_hat, intercept = np.polyfit(logk, logm, 1)
        resid = logm - (alpha_hat * logk + intercept)
        ratios = vals / tail**alpha_hat
        bounds = (float(ratios.min()), float(ratios.max()), float(alpha_hat))
        # report-only quality gate: the tail must actually look like a power law
        m3_ok = bool(np.max(np.abs(resid)) <= 0.15)

    # (M4): second and higher harmonic resonances
    violations: list[tuple[float, int]] = []
    for n in range(2, n_max + 1):
        def g(k: float, n=n) -> float:
            return eval_m(sym, k) - eval_m(sym, n * k)

        prev_k = float(grid[0])
        prev_g = g(prev_k)
        if abs(prev_g) < 1e-14:
            violations.append((prev_k, n))
        for k in grid[1:]:
            cur_g = g(float(k))
            if abs(cur_g) < 1e-14:
                violations.append((float(k), n))
            elif prev_g * cur_g < 0.0:
                root = find_root(g, Bracket(prev_k, float(k), prev_g, cur_g), 1e-12)
                violations.append((root, n))
            prev_k, prev_g = float(k), cur_g
    m4_ok = not violations

    return AssumptionReport(
        m1_ok=m1_ok,
        m2_ok=m2_ok,
        m3_ok=m3_ok,
        m4_ok=m4_ok,
        m3_bounds=bounds,
        m4_violations=tuple(violations),
        grid=tuple(float(k) for k in grid),
    )
