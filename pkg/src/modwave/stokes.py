"""Small-amplitude periodic traveling waves.

Closed-form Stokes expansions for the unidirectional (BBM/KdV-type) and
bidirectional (regularized-Boussinesq-type) equations, and a
Newton-Galerkin solver of the exact traveling-wave equations in even
cosine space that serves as an independent oracle for the expansions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .dispersion import DispersionSymbol, eval_m
from .errors import DegenerateResonance, NoConvergence
from .numerics import cos_product_matrix, cos_square

#: resonant denominators smaller than this are refused
RESONANCE_TOL = 1e-10


class EquationKind(enum.Enum):
    KDV = "kdv"
    BBM = "bbm"
    BOUSSINESQ = "boussinesq"


@dataclass(frozen=True)
class StokesExpansion:
    """Expansion coefficients of the wave profile and speed in amplitude.

    The u-profile is  mean + cos1*a*cos(z) + a^2*(u2_mean + u2_cos2*cos(2z))
    with mean = mean0 + mean_b*(b1-b2); the q-channel fields are populated
    only for the bidirectional system (the scalar equations use b1 as
    their single mean parameter and b2 = 0).  The speed is
    c0 + c_b*(b1-b2) + c2*a^2.  Remainder O(a(a^2+b)) dropped.
    """

    kind: EquationKind
    k: float
    a: float
    b1: float
    b2: float
    mean0: float
    mean_b: float
    cos1: float
    cos1_b: float
    u2_mean: float
    u2_cos2: float
    c0: float
    c_b: float
    c2: float
    q0_b1: float | None = None
    q0_b2: float | None = None
    q1: float | None = None
    q1_b: float | None = None
    q2_mean: float | None = None
    q2_cos2: float | None = None

    @property
    def b(self) -> float:
        return self.b1 - self.b2

    def speed(self) -> float:
        return self.c0 + self.c_b * self.b + self.c2 * self.a**2

    def u_cosines(self, n_modes: int) -> np.ndarray:
        """Cosine coefficients 0..n_modes of the truncated expansion."""
        a, b = self.a, self.b
        out = np.zeros(n_modes + 1)
        out[0] = self.mean0 + self.mean_b * b + a * a * self.u2_mean
        if n_modes >= 1:
            out[1] = a * (self.cos1 + self.cos1_b * b)
        if n_modes >= 2:
            out[2] = a * a * self.u2_cos2
        return out

    def q_cosines(self, n_modes: int) -> np.ndarray:
        if self.q1 is None:
            raise ValueError("q-channel only exists for the bidirectional system")
        a = self.a
        out = np.zeros(n_modes + 1)
        out[0] = self.q0_b1 * self.b1 + self.q0_b2 * self.b2 + a * a * self.q2_mean
        if n_modes >= 1:
            out[1] = a * (self.q1 + self.q1_b * self.b)
        if n_modes >= 2:
            out[2] = a * a * self.q2_cos2
        return out

    def u_profile(self, z: np.ndarray) -> np.ndarray:
        coeffs = self.u_cosines(2)
        return coeffs[0] + coeffs[1] * np.cos(z) + coeffs[2] * np.cos(2 * z)


def _check_unidirectional_denominators(mk: float, m2k: float) -> None:
    if abs(mk - 1.0) <= RESONANCE_TOL:
        raise DegenerateResonance(f"m(k)={mk} too close to 1 (mean-flow resonance)")
    if abs(mk - m2k) <= RESONANCE_TOL:
        raise DegenerateResonance(
            f"m(k)={mk} too close to m(2k)={m2k} (second harmonic resonance)"
        )


def bbm_expansion(sym: DispersionSymbol, k: float, a: float, b: float = 0.0) -> StokesExpansion:
    """Stokes coefficients for the unidirectional equation with nonlinearity
    inside the multiplier."""
    mk, m2k = eval_m(sym, k), eval_m(sym, 2 * k)
    _check_unidirectional_denominators(mk, m2k)
    r2 = m2k / (mk - m2k)
    return StokesExpansion(
        kind=EquationKind.BBM,
        k=k, a=a, b1=b, b2=0.0,
        mean0=0.0,
        mean_b=mk - 1.0,
        cos1=1.0,
        cos1_b=0.0,
        u2_mean=0.5 / (mk - 1.0),
        u2_cos2=0.5 * r2,
        c0=mk,
        c_b=2.0 * mk * (mk - 1.0),
        c2=mk * (1.0 / (mk - 1.0) + 0.5 * r2),
    )


def kdv_expansion(sym: DispersionSymbol, k: float, a: float) -> StokesExpansion:
    """Stokes coefficients for the KdV-type equation (nonlinearity outside
    the multiplier), at zero mean parameter; used as the Newton initial
    guess."""
    mk, m2k = eval_m(sym, k), eval_m(sym, 2 * k)
    _check_unidirectional_denominators(mk, m2k)
    return StokesExpansion(
        kind=EquationKind.KDV,
        k=k, a=a, b1=0.0, b2=0.0,
        mean0=0.0,
        mean_b=0.0,
        cos1=1.0,
        cos1_b=0.0,
        u2_mean=0.5 / (mk - 1.0),
        u2_cos2=0.5 / (mk - m2k),
        c0=mk,
        c_b=0.0,
        c2=1.0 / (mk - 1.0) + 0.5 / (mk - m2k),
    )


def bnesq_expansion(
    sym: DispersionSymbol, k: float, a: float, b1: float = 0.0, b2: float = 0.0
) -> StokesExpansion:
    """Stokes coefficients for the bidirectional system (u, q channels)."""
    mk, m2k = eval_m(sym, k), eval_m(sym, 2 * k)
    mk2, m2k2 = mk * mk, m2k * m2k
    if abs(mk2 - 1.0) <= RESONANCE_TOL:
        raise DegenerateResonance(f"m^2(k)={mk2} too close to 1")
    if abs(mk2 - m2k2) <= RESONANCE_TOL:
        raise DegenerateResonance(
            f"m^2(k)={mk2} too close to m^2(2k)={m2k2} (second harmonic resonance)"
        )
    u0_coeff = mk2 - 1.0
    cap_u0 = 0.5 * mk2 / (mk2 - 1.0)
    cap_u2 = 0.5 * mk2 * m2k2 / (mk2 - m2k2)
    return StokesExpansion(
        kind=EquationKind.BOUSSINESQ,
        k=k, a=a, b1=b1, b2=b2,
        mean0=0.0,
        mean_b=u0_coeff,
        cos1=mk,
        cos1_b=mk * (mk2 - 1.0),
        u2_mean=cap_u0,
        u2_cos2=cap_u2,
        c0=mk,
        c_b=mk * (mk2 - 1.0),
        c2=mk * (cap_u0 + 0.5 * cap_u2),
        q0_b1=-(mk2 - 1.0) / mk,
        q0_b2=mk * (mk2 - 1.0),
        q1=-1.0,
        q1_b=-2.0 * (mk2 - 1.0),
        q2_mean=-mk * cap_u0,
        q2_cos2=-mk * cap_u2 / m2k2,
    )


def expansion_for(kind: EquationKind, sym: DispersionSymbol, k: float, a: float) -> StokesExpansion:
    if kind is EquationKind.BBM:
        return bbm_expansion(sym, k, a)
    if kind is EquationKind.KDV:
        return kdv_expansion(sym, k, a)
    return bnesq_expansion(sym, k, a)


@dataclass(frozen=True)
class WaveSolution:
    """Galerkin-truncated traveling wave in even cosine space."""

    kind: EquationKind
    sym: DispersionSymbol
    k: float
    a: float
    n_modes: int
    u_hat: np.ndarray
    c: float
    residual: float
    q_hat: np.ndarray | None = None
    iterations: int = 0

    def u_profile(self, z: np.ndarray) -> np.ndarray:
        modes = np.arange(self.n_modes + 1)
        return np.cos(np.outer(z, modes)) @ self.u_hat


def _pin_value(kind: EquationKind, sym: DispersionSymbol, k: float, a: float) -> float:
    # first cosine coefficient of u fixed to its Stokes value
    return a * eval_m(sym, k) if kind is EquationKind.BOUSSINESQ else a


def newton_wave(
    kind: EquationKind,
    sym: DispersionSymbol,
    k: float,
    a: float,
    n_modes: int = 32,
    tol: float = 1e-12,
    max_iter: int = 50,
) -> WaveSolution:
    """Solve the exact traveling-wave equations by Newton iteration.

    Unknowns are the cosine coefficients (modes 0..n_modes, two channels
    for the bidirectional system) plus the speed c; the amplitude and
    phase are pinned by fixing the first cosine coefficient of u to its
    Stokes value.  The Jacobian is assembled densely from the Toeplitz
    multiplication table and the diagonal multiplier.
    """
    if n_modes < 8:
        raise ValueError("n_modes must be >= 8")
    if k <= 0:
        raise ValueError("k must be positive")
    exp = expansion_for(kind, sym, k, a)
    n = n_modes + 1
    mvals = np.array([eval_m(sym, k * j) for j in range(n)])
    pin = _pin_value(kind, sym, k, a)

    if kind is EquationKind.BOUSSINESQ:
        m2vals = mvals**2
        u = exp.u_cosines(n_modes)
        q = exp.q_cosines(n_modes)
        c = exp.speed()

        def residual(u, q, c):
            uu = cos_square(u, n_modes)
            return np.concatenate([c * u + m2vals * q, c * q + u + uu])

        ident = np.eye(n)
        for it in range(max_iter + 1):
            res = residual(u, q, c)
            rnorm = float(np.linalg.norm(res))
            if rnorm <= tol:
                return WaveSolution(kind, sym, k, a, n_modes, u, float(c),
                                    rnorm, q_hat=q, iterations=it)
            if it == max_iter:
                raise NoConvergence(it, rnorm)
            jac = np.zeros((2 * n + 1, 2 * n + 1))
            jac[:n, :n] = c * ident
            jac[:n, n:2 * n] = np.diag(m2vals)
            jac[:n, -1] = u
            jac[n:2 * n, :n] = ident + 2.0 * cos_product_matrix(u, n_modes)
            jac[n:2 * n, n:2 * n] = c * ident
            jac[n:2 * n, -1] = q
            jac[-1, 1] = 1.0  # pin row: d(u_hat[1]) = 0
            rhs = np.concatenate([res, [u[1] - pin]])
            try:
                step = np.linalg.solve(jac, -rhs)
            except np.linalg.LinAlgError as exc:
                raise DegenerateResonance(
                    f"singular Newton system at k={k}: {exc}"
                ) from exc
            u = u + step[:n]
            q = q + step[n:2 * n]
            c = c + step[-1]

    # scalar equations: BBM has the nonlinearity inside the multiplier,
    # KdV outside
    u = exp.u_cosines(n_modes)
    c = exp.speed()
    inside = kind is EquationKind.BBM

    def residual_scalar(u, c):
        uu = cos_square(u, n_modes)
        if inside:
            return mvals * (u + uu) - c * u
        return mvals * u + uu - c * u

    ident = np.eye(n)
    for it in range(max_iter + 1):
        res = residual_scalar(u, c)
        rnorm = float(np.linalg.norm(res))
        if rnorm <= tol:
            return WaveSolution(kind, sym, k, a, n_modes, u, float(c),
                                rnorm, iterations=it)
        if it == max_iter:
            raise NoConvergence(it, rnorm)
        conv = cos_product_matrix(u, n_modes)
        if inside:
            jac_u = np.diag(mvals) @ (ident + 2.0 * conv) - c * ident
        else:
            jac_u = np.diag(mvals) + 2.0 * conv - c * ident
        jac = np.zeros((n + 1, n + 1))
        jac[:n, :n] = jac_u
        jac[:n, -1] = -u
        jac[-1, 1] = 1.0
        rhs = np.concatenate([res, [u[1] - pin]])
        try:
            step = np.linalg.solve(jac, -rhs)
        except np.linalg.LinAlgError as exc:
            raise DegenerateResonance(f"singular Newton system at k={k}: {exc}") from exc
        u = u + step[:n]
        c = c + step[-1]
    raise AssertionError("unreachable")


def wave_l2_norm(u_hat: np.ndarray) -> float:
    """L2 norm (normalized by the period) of a cosine series."""
    return math.sqrt(u_hat[0] ** 2 + 0.5 * float(np.sum(u_hat[1:] ** 2)))


@dataclass(frozen=True)
class ExpansionErrorRow:
    a: float
    error: float


@dataclass(frozen=True)
class ExpansionErrorTable:
    kind: EquationKind
    k: float
    rows: tuple[ExpansionErrorRow, ...]
    slope: float


def expansion_error(
    kind: EquationKind,
    sym: DispersionSymbol,
    k: float,
    a_list,
    n_modes: int = 32,
) -> ExpansionErrorTable:
    """Distance between the Newton wave and its Stokes truncation.

    The fitted log-log slope of error versus amplitude exposes the cubic
    remainder of the expansions.
    """
    rows = []
    for a in a_list:
        sol = newton_wave(kind, sym, k, float(a), n_modes)
        exp = expansion_for(kind, sym, k, float(a))
        diff = sol.u_hat - exp.u_cosines(n_modes)
        rows.append(ExpansionErrorRow(float(a), wave_l2_norm(diff)))
    positive = [(r.a, r.error) for r in rows if r.a > 0 and r.error > 0]
    if len(positive) >= 2:
        la = np.log([p[0] for p in positive])
        le = np.log([p[1] for p in positive])
        slope = float(np.polyfit(la, le, 1)[0])
    else:
        slope = math.nan
    return ExpansionErrorTable(kind=kind, k=k, rows=tuple(rows), slope=slope)
