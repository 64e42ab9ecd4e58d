"""Ruled surfaces f(s, t) = gamma(s) t + x(s) and their differential geometry.

First and second fundamental forms are taken with respect to the ambient
indefinite pairing; the second form's values are the normal components of
the second derivatives, obtained by subtracting the tangential part via the
explicit 2x2 Gram solve (adjugate over determinant). No orthonormalization
of the tangent plane is ever attempted, so mixed-causal tangent planes need
no special cases. Since f is affine in t, f_tt = 0 and h22 = 0 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad

from .basisfn import ScalarFn
from .curves import CurveExpr, SampledCurve, symbolic_inner, uniform_grid
from .errors import (
    ConventionError,
    DegenerateMetricError,
    EverywhereDegenerateError,
    UsageError,
)
from .metric import Signature, ip_array

# |det g| at or below this is treated as a degenerate tangent plane.
TAU_DEG = 1e-9
# Mean curvature below this (euclidean norm) counts as vanishing.
H_TOL = 1e-8

DEFAULT_SURFACE_GRID = (41, 41)


def _is_curve_like(obj) -> bool:
    return isinstance(obj, (CurveExpr, GaugedBaseCurve))


@dataclass
class RuledSurface:
    """Surface swept by lines: f(s, t) = gamma(s) * t + x(s).

    gamma is the direction curve (ruling directions), base is x. Both must
    support exact derivatives; table-backed curves are refused.
    """

    gamma: CurveExpr
    base: object  # CurveExpr or GaugedBaseCurve
    s_domain: tuple[float, float] = (-3.0, 3.0)
    t_domain: tuple[float, float] = (-3.0, 3.0)

    def __post_init__(self):
        if isinstance(self.gamma, SampledCurve) or isinstance(self.base, SampledCurve):
            raise TypeError(
                "table-backed SampledCurve has no exact derivatives; "
                "surface geometry needs CurveExpr (or gauge-normalized) curves"
            )
        if not _is_curve_like(self.gamma) or not _is_curve_like(self.base):
            raise UsageError("gamma and base must be curve objects")
        if self.gamma.n != self.base.n:
            raise UsageError(
                f"gamma lives in R^{self.gamma.n} but base in R^{self.base.n}"
            )
        for name, dom in (("s_domain", self.s_domain), ("t_domain", self.t_domain)):
            a, b = dom
            if not (np.isfinite(a) and np.isfinite(b) and a < b):
                raise UsageError(f"{name} must be a finite interval [a, b] with a < b")
        self.s_domain = (float(self.s_domain[0]), float(self.s_domain[1]))
        self.t_domain = (float(self.t_domain[0]), float(self.t_domain[1]))

    @property
    def n(self) -> int:
        return self.gamma.n

    def default_grids(self, shape: tuple[int, int] = DEFAULT_SURFACE_GRID):
        s = uniform_grid(*self.s_domain, shape[0])
        t = uniform_grid(*self.t_domain, shape[1])
        return s, t


@dataclass
class Jet2:
    """Second-order jet of the immersion at one point."""

    s: float
    t: float
    f: np.ndarray
    f_s: np.ndarray
    f_t: np.ndarray
    f_ss: np.ndarray
    f_st: np.ndarray
    f_tt: np.ndarray


def immersion_jet(surface: RuledSurface, s: float, t: float) -> Jet2:
    g0 = surface.gamma.eval(s, 0)
    g1 = surface.gamma.eval(s, 1)
    g2 = surface.gamma.eval(s, 2)
    x0 = surface.base.eval(s, 0)
    x1 = surface.base.eval(s, 1)
    x2 = surface.base.eval(s, 2)
    t = float(t)
    return Jet2(
        s=float(s),
        t=t,
        f=g0 * t + x0,
        f_s=g1 * t + x1,
        f_t=g0,
        f_ss=g2 * t + x2,
        f_st=g1,
        f_tt=np.zeros(surface.n),
    )


class FirstForm(NamedTuple):
    g11: float
    g12: float
    g22: float
    det_g: float


class SecondForm(NamedTuple):
    h11: np.ndarray
    h12: np.ndarray
    h22: np.ndarray


def first_form(sig: Signature, jet: Jet2) -> FirstForm:
    g11 = float(ip_array(sig, jet.f_s, jet.f_s))
    g12 = float(ip_array(sig, jet.f_s, jet.f_t))
    g22 = float(ip_array(sig, jet.f_t, jet.f_t))
    return FirstForm(g11, g12, g22, g11 * g22 - g12 * g12)


def _normal_part(sig, vec, f_s, f_t, g: FirstForm) -> np.ndarray:
    b1 = float(ip_array(sig, vec, f_s))
    b2 = float(ip_array(sig, vec, f_t))
    alpha = (g.g22 * b1 - g.g12 * b2) / g.det_g
    beta = (-g.g12 * b1 + g.g11 * b2) / g.det_g
    return vec - alpha * f_s - beta * f_t


def second_form(
    sig: Signature, jet: Jet2, g: FirstForm | None = None, tau_deg: float = TAU_DEG
) -> SecondForm:
    """Normal components of the second derivatives.

    Raises DegenerateMetricError when |det g| <= tau_deg: a degenerate
    tangent plane has no tangential/normal splitting.
    """
    if g is None:
        g = first_form(sig, jet)
    if abs(g.det_g) <= tau_deg:
        raise DegenerateMetricError(jet.s, jet.t, g.det_g)
    h11 = _normal_part(sig, jet.f_ss, jet.f_s, jet.f_t, g)
    h12 = _normal_part(sig, jet.f_st, jet.f_s, jet.f_t, g)
    h22 = np.zeros(len(jet.f))  # f_tt = 0 for ruled surfaces
    return SecondForm(h11, h12, h22)


def mean_curvature(g: FirstForm, h: SecondForm) -> np.ndarray:
    """H = (g11 h22 - 2 g12 h12 + g22 h11) / (2 det g), an ambient vector."""
    return 0.5 * (g.g11 * h.h22 - 2.0 * g.g12 * h.h12 + g.g22 * h.h11) / g.det_g


@dataclass
class FormBundle:
    s: float
    t: float
    first: FirstForm
    second: SecondForm
    H: np.ndarray


def form_bundle(sig: Signature, surface: RuledSurface, s: float, t: float) -> FormBundle:
    jet = immersion_jet(surface, s, t)
    g = first_form(sig, jet)
    h = second_form(sig, jet, g)
    return FormBundle(s=float(s), t=float(t), first=g, second=h, H=mean_curvature(g, h))


# ---------------------------------------------------------------------------
# vectorized grid sweep


@dataclass
class SurfaceSweep:
    """All form data over an (s, t) grid; arrays indexed [i_s, i_t]."""

    s_grid: np.ndarray
    t_grid: np.ndarray
    g11: np.ndarray
    g12: np.ndarray
    g22: np.ndarray
    det_g: np.ndarray
    nondegenerate: np.ndarray  # bool mask, |det g| > tau_deg
    h11: np.ndarray
    h12: np.ndarray
    H: np.ndarray
    H_norm: np.ndarray  # euclidean norm of H, NaN at degenerate points
    f: np.ndarray
    tau_deg: float


def sweep_grid(
    sig: Signature,
    surface: RuledSurface,
    s_grid: np.ndarray | None = None,
    t_grid: np.ndarray | None = None,
    tau_deg: float = TAU_DEG,
) -> SurfaceSweep:
    if s_grid is None or t_grid is None:
        ds, dt = surface.default_grids()
        s_grid = ds if s_grid is None else s_grid
        t_grid = dt if t_grid is None else t_grid
    s_grid = np.atleast_1d(np.asarray(s_grid, dtype=float))
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))

    G = [surface.gamma.eval(s_grid, o) for o in (0, 1, 2)]
    X = [surface.base.eval(s_grid, o) for o in (0, 1, 2)]
    T = t_grid[None, :, None]
    shape = (s_grid.size, t_grid.size, sig.n)

    f = G[0][:, None, :] * T + X[0][:, None, :]
    f_s = G[1][:, None, :] * T + X[1][:, None, :]
    f_t = np.broadcast_to(G[0][:, None, :], shape)
    f_ss = G[2][:, None, :] * T + X[2][:, None, :]
    f_st = np.broadcast_to(G[1][:, None, :], shape)

    g11 = ip_array(sig, f_s, f_s)
    g12 = ip_array(sig, f_s, f_t)
    g22 = ip_array(sig, f_t, f_t)
    det = g11 * g22 - g12 * g12
    mask = np.abs(det) > tau_deg
    safe = np.where(mask, det, 1.0)

    def normal(vec):
        b1 = ip_array(sig, vec, f_s)
        b2 = ip_array(sig, vec, f_t)
        alpha = (g22 * b1 - g12 * b2) / safe
        beta = (-g12 * b1 + g11 * b2) / safe
        return vec - alpha[..., None] * f_s - beta[..., None] * f_t

    h11 = normal(f_ss)
    h12 = normal(f_st)
    # h22 = 0 identically
    H = 0.5 * (-2.0 * g12[..., None] * h12 + g22[..., None] * h11) / safe[..., None]
    H_norm = np.where(mask, np.sqrt((H * H).sum(axis=-1)), np.nan)
    return SurfaceSweep(
        s_grid=s_grid,
        t_grid=t_grid,
        g11=g11,
        g12=g12,
        g22=g22,
        det_g=det,
        nondegenerate=mask,
        h11=h11,
        h12=h12,
        H=H,
        H_norm=H_norm,
        f=f,
        tau_deg=tau_deg,
    )


# ---------------------------------------------------------------------------
# verdicts


class MinimalityVerdict(Enum):
    MINIMAL = "minimal"
    NOT_MINIMAL = "not-minimal"


@dataclass
class MinimalityReport:
    verdict: MinimalityVerdict
    max_h_norm: float
    tol: float
    points_checked: int
    points_degenerate: int
    degenerate_sample: list = field(default_factory=list)
    grid_shape: tuple[int, int] = (0, 0)

    @property
    def is_minimal(self) -> bool:
        return self.verdict is MinimalityVerdict.MINIMAL


def _degenerate_sample(sweep: SurfaceSweep, cap: int = 16) -> list[tuple[float, float]]:
    bad = np.argwhere(~sweep.nondegenerate)
    out = []
    for i, j in bad[:cap]:
        out.append((float(sweep.s_grid[i]), float(sweep.t_grid[j])))
    return out


def is_minimal(
    sig: Signature,
    surface: RuledSurface,
    s_grid: np.ndarray | None = None,
    t_grid: np.ndarray | None = None,
    tol: float = H_TOL,
    tau_deg: float = TAU_DEG,
) -> MinimalityReport:
    """Decide max |H| <= tol over the grid, skipping degenerate points.

    Degenerate points are excluded from the max and listed in the report;
    if every grid point is degenerate there is nothing to decide and
    EverywhereDegenerateError is raised.
    """
    sweep = sweep_grid(sig, surface, s_grid, t_grid, tau_deg)
    n_deg = int((~sweep.nondegenerate).sum())
    n_tot = int(sweep.nondegenerate.size)
    if n_deg == n_tot:
        raise EverywhereDegenerateError(
            f"all {n_tot} grid points have |det g| <= {tau_deg}"
        )
    max_h = float(np.nanmax(sweep.H_norm))
    verdict = (
        MinimalityVerdict.MINIMAL if max_h <= tol else MinimalityVerdict.NOT_MINIMAL
    )
    return MinimalityReport(
        verdict=verdict,
        max_h_norm=max_h,
        tol=tol,
        points_checked=n_tot - n_deg,
        points_degenerate=n_deg,
        degenerate_sample=_degenerate_sample(sweep),
        grid_shape=(sweep.s_grid.size, sweep.t_grid.size),
    )


def is_totally_geodesic(
    sig: Signature,
    surface: RuledSurface,
    s_grid: np.ndarray | None = None,
    t_grid: np.ndarray | None = None,
    tol: float = H_TOL,
    tau_deg: float = TAU_DEG,
) -> bool:
    """True when the whole second form vanishes on the non-degenerate grid."""
    sweep = sweep_grid(sig, surface, s_grid, t_grid, tau_deg)
    mask = sweep.nondegenerate
    if not mask.any():
        raise EverywhereDegenerateError("no non-degenerate points to test")
    m11 = np.abs(sweep.h11[mask]).max() if mask.any() else 0.0
    m12 = np.abs(sweep.h12[mask]).max()
    return float(max(m11, m12)) <= tol


def c_function(
    sig: Signature, surface: RuledSurface, s: float, t: float, tau_deg: float = TAU_DEG
) -> float:
    """The ratio whose t-independence characterizes the minimal cases.

    C(s, t) = ((<gamma'', x'> + <gamma', x''>) t + <x'', x'>) / g11 with
    g11 = <gamma', gamma'> t^2 + 2 <gamma', x'> t + <x', x'>. Meaningful on
    gauge-normalized surfaces; raises when the denominator degenerates.
    """
    g1 = surface.gamma.eval(s, 1)
    g2 = surface.gamma.eval(s, 2)
    x1 = surface.base.eval(s, 1)
    x2 = surface.base.eval(s, 2)
    t = float(t)
    denom = (
        float(ip_array(sig, g1, g1)) * t * t
        + 2.0 * float(ip_array(sig, g1, x1)) * t
        + float(ip_array(sig, x1, x1))
    )
    if abs(denom) <= tau_deg:
        raise DegenerateMetricError(s, t, denom)
    num = (
        float(ip_array(sig, g2, x1)) + float(ip_array(sig, g1, x2))
    ) * t + float(ip_array(sig, x2, x1))
    return num / denom


def c_function_grid(
    sig: Signature,
    surface: RuledSurface,
    s_grid: np.ndarray,
    t_grid: np.ndarray,
    tau_deg: float = TAU_DEG,
):
    """Vectorized C over a grid; returns (values, valid_mask)."""
    s_grid = np.atleast_1d(np.asarray(s_grid, dtype=float))
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    g1 = surface.gamma.eval(s_grid, 1)
    g2 = surface.gamma.eval(s_grid, 2)
    x1 = surface.base.eval(s_grid, 1)
    x2 = surface.base.eval(s_grid, 2)
    eta = ip_array(sig, g1, g1)[:, None]
    mu = ip_array(sig, g1, x1)[:, None]
    dd = ip_array(sig, x1, x1)[:, None]
    a = (ip_array(sig, g2, x1) + ip_array(sig, g1, x2))[:, None]
    b = ip_array(sig, x2, x1)[:, None]
    T = t_grid[None, :]
    denom = eta * T * T + 2.0 * mu * T + dd
    mask = np.abs(denom) > tau_deg
    vals = np.where(mask, (a * T + b) / np.where(mask, denom, 1.0), np.nan)
    return vals, mask


# ---------------------------------------------------------------------------
# gauge normalization


class GaugedBaseCurve:
    """Base curve x + lambda * gamma with lambda obtained by quadrature.

    Used when the gauge integrand has no closed form in the term algebra.
    lambda itself comes from adaptive quadrature (absolute error <= ~1e-11),
    but its first three derivatives are evaluated in closed form from
    lambda' = -eps * <gamma, x'>, so downstream jets stay exact in the
    derivative slots. Evaluation accepts scalars or arrays like CurveExpr.
    """

    def __init__(self, base: CurveExpr, gamma: CurveExpr, eps: int, sig: Signature):
        self.base = base
        self.gamma = gamma
        self.eps = int(eps)
        self.sig = sig
        self._cache: dict[float, float] = {0.0: 0.0}

    @property
    def n(self) -> int:
        return self.base.n

    def _integrand(self, s: float) -> float:
        g0 = self.gamma.eval(s, 0)
        x1 = self.base.eval(s, 1)
        return float(ip_array(self.sig, g0, x1))

    def lam_values(self, s) -> np.ndarray:
        """Raw integral M(s) of <gamma, x'> from 0, via cached quadrature.

        Each new value is integrated from the nearest cached anchor (0 is
        always cached), keeping segments short and the accumulated absolute
        error around 1e-11 for the grids used here.
        """
        arr = np.atleast_1d(np.asarray(s, dtype=float))
        for v in sorted(set(map(float, arr))):
            if v in self._cache:
                continue
            anchor = min(self._cache, key=lambda x: abs(x - v))
            seg, _ = quad(self._integrand, anchor, v, epsabs=1e-13, limit=200)
            self._cache[v] = self._cache[anchor] + seg
        return np.array([self._cache[float(v)] for v in arr])

    def _lam(self, s) -> np.ndarray:
        return -self.eps * self.lam_values(s)

    def _lam_prime(self, s_arr: np.ndarray) -> np.ndarray:
        g0 = self.gamma.eval(s_arr, 0)
        x1 = self.base.eval(s_arr, 1)
        return -self.eps * ip_array(self.sig, g0, x1)

    def _lam_second(self, s_arr: np.ndarray) -> np.ndarray:
        g0 = self.gamma.eval(s_arr, 0)
        g1 = self.gamma.eval(s_arr, 1)
        x1 = self.base.eval(s_arr, 1)
        x2 = self.base.eval(s_arr, 2)
        return -self.eps * (ip_array(self.sig, g1, x1) + ip_array(self.sig, g0, x2))

    def _lam_third(self, s_arr: np.ndarray) -> np.ndarray:
        g0 = self.gamma.eval(s_arr, 0)
        g1 = self.gamma.eval(s_arr, 1)
        g2 = self.gamma.eval(s_arr, 2)
        x1 = self.base.eval(s_arr, 1)
        x2 = self.base.eval(s_arr, 2)
        x3 = self.base.eval(s_arr, 3)
        return -self.eps * (
            ip_array(self.sig, g2, x1)
            + 2.0 * ip_array(self.sig, g1, x2)
            + ip_array(self.sig, g0, x3)
        )

    def eval(self, s, order: int = 0):
        if not 0 <= order <= 3:
            raise UsageError(f"order must be in 0..3, got {order}")
        arr = np.atleast_1d(np.asarray(s, dtype=float))
        lam = self._lam(arr)[:, None]
        if order == 0:
            out = self.base.eval(arr, 0) + lam * self.gamma.eval(arr, 0)
        elif order == 1:
            lp = self._lam_prime(arr)[:, None]
            out = (
                self.base.eval(arr, 1)
                + lp * self.gamma.eval(arr, 0)
                + lam * self.gamma.eval(arr, 1)
            )
        elif order == 2:
            lp = self._lam_prime(arr)[:, None]
            lpp = self._lam_second(arr)[:, None]
            out = (
                self.base.eval(arr, 2)
                + lpp * self.gamma.eval(arr, 0)
                + 2.0 * lp * self.gamma.eval(arr, 1)
                + lam * self.gamma.eval(arr, 2)
            )
        else:
            lp = self._lam_prime(arr)[:, None]
            lpp = self._lam_second(arr)[:, None]
            lppp = self._lam_third(arr)[:, None]
            out = (
                self.base.eval(arr, 3)
                + lppp * self.gamma.eval(arr, 0)
                + 3.0 * lpp * self.gamma.eval(arr, 1)
                + 3.0 * lp * self.gamma.eval(arr, 2)
                + lam * self.gamma.eval(arr, 3)
            )
        if np.isscalar(s) or np.asarray(s).ndim == 0:
            return out.reshape(self.n)
        return out


@dataclass
class GaugeResult:
    """Outcome of gauge normalization (making g12 vanish identically)."""

    surface: RuledSurface
    epsilon: int
    exact: bool
    lam: ScalarFn | None  # closed form when exact
    lam_table: tuple[np.ndarray, np.ndarray] | None  # (s, lambda(s)) otherwise
    max_abs_g12: float


def gauge_normalize(
    sig: Signature,
    surface: RuledSurface,
    tol: float = 1e-9,
    check_grid: tuple[int, int] = DEFAULT_SURFACE_GRID,
) -> GaugeResult:
    """Translate the base along the rulings so the mixed metric entry vanishes.

    Replaces x by x + lambda * gamma with lambda(s) = -eps * integral of
    <gamma, x'> from 0, where eps = <gamma, gamma> = +-1 must be constant.
    The swept point set is unchanged because the shift happens inside each
    ruling line. Closed-form lambda is used whenever the term algebra allows
    it; otherwise the base becomes a quadrature-backed curve whose derivative
    slots are still exact.
    """
    if not isinstance(surface.base, CurveExpr):
        raise UsageError("gauge_normalize expects a closed-form base curve")
    s_chk = uniform_grid(*surface.s_domain, 201)
    g0 = surface.gamma.eval(s_chk, 0)
    gg = ip_array(sig, g0, g0)
    if float(gg.max() - gg.min()) > tol:
        raise ConventionError(
            "<gamma, gamma> is not constant on the domain; normalize the "
            "direction curve before gauge fixing"
        )
    val = float(gg.mean())
    if abs(abs(val) - 1.0) > 1e-6:
        raise ConventionError(
            f"<gamma, gamma> = {val!r}, expected +-1 (unit direction convention)"
        )
    eps = 1 if val > 0 else -1

    lam_sym = None
    new_base = None
    m_sym = symbolic_inner(sig, surface.gamma, surface.base.derivative(1))
    if m_sym is not None:
        anti = m_sym.antiderivative()
        lam_sym = (anti + ScalarFn.constant(-anti.eval(0.0))).scaled(-float(eps))
        new_base = surface.base.plus_scalar_times(lam_sym, surface.gamma)

    if new_base is not None:
        gauged = RuledSurface(
            gamma=surface.gamma,
            base=new_base,
            s_domain=surface.s_domain,
            t_domain=surface.t_domain,
        )
        exact = True
        lam_table = None
    else:
        qbase = GaugedBaseCurve(surface.base, surface.gamma, eps, sig)
        gauged = RuledSurface(
            gamma=surface.gamma,
            base=qbase,
            s_domain=surface.s_domain,
            t_domain=surface.t_domain,
        )
        exact = False
        lam_sym = None
        table_s = uniform_grid(*surface.s_domain, 201)
        lam_table = (table_s, -eps * qbase.lam_values(table_s))

    sweep = sweep_grid(sig, gauged, *gauged.default_grids(check_grid))
    max_g12 = float(np.abs(sweep.g12).max())
    return GaugeResult(
        surface=gauged,
        epsilon=eps,
        exact=exact,
        lam=lam_sym,
        lam_table=lam_table,
        max_abs_g12=max_g12,
    )
