"""Recognize which minimal family a ruled surface belongs to.

The pipeline is invariant-driven: constant ruling directions branch to the
cylinder test, everything else is reduced to the sign data (epsilon, eta,
delta, mu) of the normalized curves, placed in the six viable metric cases,
checked for minimality, and matched to a family. Inputs are expected in the
standard conventions (unit direction, vanishing mixed metric entry); the
errors say which normalization is missing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .curves import CurveExpr, uniform_grid
from .errors import ConventionError, NullDirectionError, UsageError
from .families import FamilyId
from .metric import Signature, ip_array
from .surface import (
    H_TOL,
    MinimalityReport,
    RuledSurface,
    gauge_normalize,
    is_minimal,
    is_totally_geodesic,
)

SCAN_POINTS = 201
CONSTANCY_TOL = 1e-9
GAUGE_TOL = 1e-8
DEPENDENCE_TOL = 1e-10


# ---------------------------------------------------------------------------
# genericity scan


@dataclass(frozen=True)
class ScalarProfile:
    """Behavior of one scalar invariant along the directrix."""

    name: str
    identically_zero: bool
    max_abs: float
    isolated_zeros: tuple[float, ...]

    @property
    def clean(self) -> bool:
        return self.identically_zero or not self.isolated_zeros


@dataclass
class GenericityReport:
    sig: Signature
    num_points: int
    profiles: dict
    dependence_switches: tuple[float, ...]

    @property
    def generic(self) -> bool:
        return all(p.clean for p in self.profiles.values()) and not self.dependence_switches


def _isolated_zeros(s: np.ndarray, vals: np.ndarray, tol: float) -> tuple[float, ...]:
    hits: list[float] = []
    small = np.abs(vals) <= tol
    for i in range(len(s)):
        if small[i]:
            hits.append(float(s[i]))
        elif i + 1 < len(s) and not small[i + 1] and vals[i] * vals[i + 1] < 0:
            # sign change between samples; report the midpoint
            hits.append(float(0.5 * (s[i] + s[i + 1])))
    # collapse runs of adjacent grid hits to one representative
    out: list[float] = []
    step = float(s[1] - s[0]) if len(s) > 1 else 0.0
    for h in hits:
        if not out or h - out[-1] > 1.5 * step:
            out.append(h)
    return tuple(out)


def genericity_scan(
    sig: Signature,
    surface: RuledSurface,
    num: int = SCAN_POINTS,
    tol: float = CONSTANCY_TOL,
) -> GenericityReport:
    """Sample the four classifying invariants and flag sign changes.

    A surface is generic for classification when each of <gamma, gamma>,
    <gamma', gamma'>, <x', x'>, <gamma', x'> is either identically zero or
    nowhere zero on the scan grid, and gamma', x' never switch between
    linear dependence and independence. Isolated zeros mean the case label
    changes across the domain and the surface should be split first.
    """
    s = uniform_grid(*surface.s_domain, num)
    g0 = surface.gamma.eval(s, 0)
    g1 = surface.gamma.eval(s, 1)
    x1 = surface.base.eval(s, 1)
    series = {
        "direction_norm": ip_array(sig, g0, g0),
        "direction_speed": ip_array(sig, g1, g1),
        "base_speed": ip_array(sig, x1, x1),
        "mixed_speed": ip_array(sig, g1, x1),
    }
    profiles = {}
    for name, vals in series.items():
        max_abs = float(np.abs(vals).max())
        if max_abs <= tol:
            profiles[name] = ScalarProfile(name, True, max_abs, ())
        else:
            profiles[name] = ScalarProfile(name, False, max_abs, _isolated_zeros(s, vals, tol))

    # 2x2 Euclidean Gram determinant of (gamma', x'), row-normalized so the
    # threshold is scale-free
    rows = np.stack([g1, x1], axis=1)  # (num, 2, n)
    norms = np.linalg.norm(rows, axis=2)
    safe = np.where(norms > 0, norms, 1.0)
    unit = rows / safe[:, :, None]
    gram = unit @ np.swapaxes(unit, 1, 2)
    dets = np.abs(np.linalg.det(gram))
    dependent = (dets < DEPENDENCE_TOL) | (norms.min(axis=1) == 0.0)
    switches = tuple(
        float(0.5 * (s[i] + s[i + 1]))
        for i in range(num - 1)
        if dependent[i] != dependent[i + 1]
    )
    return GenericityReport(
        sig=sig, num_points=num, profiles=profiles, dependence_switches=switches
    )


# ---------------------------------------------------------------------------
# case invariants


@dataclass(frozen=True)
class MuProfile:
    kind: str  # "constant" or "varying"
    value: float | None
    max_abs: float

    @property
    def is_zero(self) -> bool:
        return self.max_abs <= CONSTANCY_TOL


@dataclass(frozen=True)
class CaseInvariants:
    """Sign data of a normalized non-cylindrical ruled surface.

    epsilon = <gamma, gamma>, eta = <gamma', gamma'>, delta = sign class of
    <x', x'> (delta_value holds the constant), mu profiles <gamma', x'>.
    """

    epsilon: int
    eta: int
    delta: int
    delta_value: float
    mu: MuProfile


def _constant_value(name: str, vals: np.ndarray, tol: float) -> float:
    spread = float(vals.max() - vals.min())
    if spread > tol:
        raise ConventionError(
            f"{name} varies by {spread:.3e} across the domain; the case "
            "invariants assume it is constant"
        )
    return float(vals.mean())


def case_invariants(
    sig: Signature,
    surface: RuledSurface,
    num: int = SCAN_POINTS,
    tol: float = CONSTANCY_TOL,
    gauge_tol: float = GAUGE_TOL,
) -> CaseInvariants:
    """Extract (epsilon, eta, delta, mu) from a gauge-normalized surface.

    Raises UsageError for constant directions (use the cylinder branch),
    NullDirectionError when the direction curve is null but non-constant,
    and ConventionError when a normalization is missing.
    """
    if isinstance(surface.gamma, CurveExpr) and surface.gamma.is_constant():
        raise UsageError(
            "the ruling direction is constant; classify with cylinder_check"
        )
    s = uniform_grid(*surface.s_domain, num)
    g0 = surface.gamma.eval(s, 0)
    g1 = surface.gamma.eval(s, 1)
    x1 = surface.base.eval(s, 1)

    gg = ip_array(sig, g0, g0)
    if float(np.abs(gg).max()) <= tol:
        raise NullDirectionError(
            "the ruling direction is null along a non-constant curve; such a "
            "surface is never minimal away from degenerate points"
        )
    eps_val = _constant_value("<gamma, gamma>", gg, tol)
    if abs(abs(eps_val) - 1.0) > 1e-6:
        raise ConventionError(
            f"<gamma, gamma> = {eps_val!r}; scale the direction to unit norm"
        )
    epsilon = 1 if eps_val > 0 else -1

    pairing = ip_array(sig, g0, x1)
    if float(np.abs(pairing).max()) > gauge_tol:
        raise ConventionError(
            "<gamma, x'> does not vanish; apply gauge_normalize before "
            "classification"
        )

    eta_val = _constant_value("<gamma', gamma'>", ip_array(sig, g1, g1), tol)
    if abs(eta_val) <= tol:
        eta = 0
    elif abs(abs(eta_val) - 1.0) <= 1e-6:
        eta = 1 if eta_val > 0 else -1
    else:
        raise ConventionError(
            f"<gamma', gamma'> = {eta_val!r}; reparametrize the direction "
            "curve so its speed is 0 or +-1"
        )

    delta_value = _constant_value("<x', x'>", ip_array(sig, x1, x1), tol)
    delta = 0 if abs(delta_value) <= tol else (1 if delta_value > 0 else -1)
    if eta == 0 and delta != 0 and abs(abs(delta_value) - 1.0) > 1e-6:
        raise ConventionError(
            f"<x', x'> = {delta_value!r}; with a null direction derivative "
            "the base speed normalizes to 0 or +-1"
        )

    mu_vals = ip_array(sig, g1, x1)
    mu_spread = float(mu_vals.max() - mu_vals.min())
    if mu_spread <= tol:
        mu = MuProfile("constant", float(mu_vals.mean()), float(np.abs(mu_vals).max()))
    else:
        mu = MuProfile("varying", None, float(np.abs(mu_vals).max()))
    return CaseInvariants(
        epsilon=epsilon, eta=eta, delta=delta, delta_value=delta_value, mu=mu
    )


# ---------------------------------------------------------------------------
# metric cases


class CaseLabel(Enum):
    CYLINDER = "cylinder"
    CASE_I = "i"
    CASE_II = "ii"
    CASE_III = "iii"
    CASE_IV = "iv"
    CASE_V = "v"
    CASE_VI = "vi"
    CASE_VII_EXCLUDED = "vii"


def table1_case(inv: CaseInvariants) -> CaseLabel:
    """Place the invariants in the seven-way split of the induced metric.

    The split is by (eta, delta, mu): cases i-iii have eta = +-1, iv-vii have
    eta = 0. Case vii (eta = delta = mu = 0) makes g11 vanish identically and
    is excluded from classification.
    """
    mu_zero = inv.mu.is_zero
    if inv.eta != 0:
        if inv.delta == 0:
            return CaseLabel.CASE_II
        return CaseLabel.CASE_I if mu_zero else CaseLabel.CASE_III
    if inv.delta != 0:
        return CaseLabel.CASE_IV if not mu_zero else CaseLabel.CASE_V
    return CaseLabel.CASE_VI if not mu_zero else CaseLabel.CASE_VII_EXCLUDED


# ---------------------------------------------------------------------------
# cylinders


class CylinderVerdict(Enum):
    PLANE = "plane"
    MINIMAL_CYLINDER = "minimal-cylinder"
    NOT_MINIMAL = "not-minimal"


@dataclass
class CylinderReport:
    verdict: CylinderVerdict
    direction_null: bool
    base_null: bool
    min_pairing: float
    max_h_norm: float
    note: str


def cylinder_check(
    sig: Signature,
    surface: RuledSurface,
    num: int = SCAN_POINTS,
    tol: float = CONSTANCY_TOL,
    h_tol: float = H_TOL,
) -> CylinderReport:
    """Decide plane / minimal cylinder / not minimal for constant directions.

    The only non-planar minimal cylinders have a null direction, a null base
    derivative, and a nowhere-zero pairing <gamma0, x'> between them.
    """
    if isinstance(surface.gamma, CurveExpr) and not surface.gamma.is_constant():
        raise UsageError("cylinder_check expects a constant ruling direction")
    s = uniform_grid(*surface.s_domain, num)
    g0 = surface.gamma.eval(s, 0)
    x1 = surface.base.eval(s, 1)
    direction_null = float(np.abs(ip_array(sig, g0, g0)).max()) <= tol
    base_null = float(np.abs(ip_array(sig, x1, x1)).max()) <= tol
    min_pairing = float(np.abs(ip_array(sig, g0, x1)).min())

    report = is_minimal(sig, surface, tol=h_tol)
    if report.is_minimal and is_totally_geodesic(sig, surface, tol=h_tol):
        return CylinderReport(
            verdict=CylinderVerdict.PLANE,
            direction_null=direction_null,
            base_null=base_null,
            min_pairing=min_pairing,
            max_h_norm=report.max_h_norm,
            note="totally geodesic: the surface lies in a plane",
        )
    if (
        report.is_minimal
        and direction_null
        and base_null
        and min_pairing > tol
    ):
        return CylinderReport(
            verdict=CylinderVerdict.MINIMAL_CYLINDER,
            direction_null=direction_null,
            base_null=base_null,
            min_pairing=min_pairing,
            max_h_norm=report.max_h_norm,
            note="null direction over a null base with nowhere-zero pairing",
        )
    if report.is_minimal:
        note = (
            "mean curvature vanishes on the grid but the null-cylinder "
            "structure checks fail; treat as unresolved"
        )
    else:
        note = f"max |H| = {report.max_h_norm:.3e} exceeds {h_tol:.1e}"
    return CylinderReport(
        verdict=CylinderVerdict.NOT_MINIMAL,
        direction_null=direction_null,
        base_null=base_null,
        min_pairing=min_pairing,
        max_h_norm=report.max_h_norm,
        note=note,
    )


# ---------------------------------------------------------------------------
# structure equations


@dataclass
class StructureReport:
    eta: int
    max_direction_residual: float
    max_base_residual: float
    tol: float

    @property
    def ok(self) -> bool:
        return max(self.max_direction_residual, self.max_base_residual) <= self.tol


def verify_structure_odes(
    sig: Signature,
    surface: RuledSurface,
    inv: CaseInvariants | None = None,
    num: int = SCAN_POINTS,
    tol: float = 1e-8,
) -> StructureReport:
    """Residuals of the curve equations every normalized minimal case obeys.

    eta = +-1: gamma'' + eps * eta * gamma = 0; eta = 0: gamma'' = 0. In all
    cases the base satisfies x'' = eps <gamma, x''> gamma (x'' is parallel to
    the ruling direction).
    """
    if inv is None:
        inv = case_invariants(sig, surface, num=num)
    s = uniform_grid(*surface.s_domain, num)
    g0 = surface.gamma.eval(s, 0)
    g2 = surface.gamma.eval(s, 2)
    x2 = surface.base.eval(s, 2)
    if inv.eta != 0:
        dir_res = g2 + (inv.epsilon * inv.eta) * g0
    else:
        dir_res = g2
    coeff = inv.epsilon * ip_array(sig, g0, x2)
    base_res = x2 - coeff[:, None] * g0
    return StructureReport(
        eta=inv.eta,
        max_direction_residual=float(np.linalg.norm(dir_res, axis=1).max()),
        max_base_residual=float(np.linalg.norm(base_res, axis=1).max()),
        tol=tol,
    )


# ---------------------------------------------------------------------------
# the classifier


@dataclass
class ClassificationResult:
    sig: Signature
    family: FamilyId | None
    case_label: CaseLabel | None
    reported_case: CaseLabel | None
    invariants: CaseInvariants | None
    minimality: MinimalityReport | None
    genericity: GenericityReport | None
    structure: StructureReport | None = None
    diagnosis: str | None = None
    notes: list = field(default_factory=list)

    @property
    def recognized(self) -> bool:
        return self.family is not None


def identify_family(
    sig: Signature,
    surface: RuledSurface,
    h_tol: float = H_TOL,
    tol: float = CONSTANCY_TOL,
    auto_gauge: bool = True,
) -> ClassificationResult:
    """Match a ruled surface against the classified minimal families.

    Returns the family together with the metric case the input realizes and
    the case its normal form reports after ruling-line shifts. Unrecognized
    inputs come back with family None and a diagnosis string instead.
    """
    notes: list[str] = []

    if isinstance(surface.gamma, CurveExpr) and surface.gamma.is_constant():
        cyl = cylinder_check(sig, surface, tol=tol, h_tol=h_tol)
        family = {
            CylinderVerdict.PLANE: FamilyId.PLANE,
            CylinderVerdict.MINIMAL_CYLINDER: FamilyId.MINIMAL_CYLINDER,
            CylinderVerdict.NOT_MINIMAL: None,
        }[cyl.verdict]
        return ClassificationResult(
            sig=sig,
            family=family,
            case_label=CaseLabel.CYLINDER,
            reported_case=CaseLabel.CYLINDER,
            invariants=None,
            minimality=None,
            genericity=None,
            diagnosis=None if family is not None else cyl.note,
            notes=[cyl.note] if family is not None else [],
        )

    s = uniform_grid(*surface.s_domain, SCAN_POINTS)
    g0 = surface.gamma.eval(s, 0)
    if float(np.abs(ip_array(sig, g0, g0)).max()) <= tol:
        # gauge normalization would mask this as a unit-norm failure
        raise NullDirectionError(
            "the ruling direction is null along a non-constant curve; such a "
            "surface is never minimal away from degenerate points"
        )

    if auto_gauge and isinstance(surface.base, CurveExpr):
        pairing = ip_array(sig, g0, surface.base.eval(s, 1))
        if float(np.abs(pairing).max()) > GAUGE_TOL:
            surface = gauge_normalize(sig, surface).surface
            notes.append("base curve replaced by its gauge normalization")

    genericity = genericity_scan(sig, surface)
    if not genericity.generic:
        notes.append(
            "invariants change type inside the domain; the classification "
            "applies to its generic part"
        )

    inv = case_invariants(sig, surface, tol=tol)
    raw_case = table1_case(inv)

    def unrecognized(diagnosis: str, minimality=None) -> ClassificationResult:
        return ClassificationResult(
            sig=sig,
            family=None,
            case_label=raw_case,
            reported_case=None,
            invariants=inv,
            minimality=minimality,
            genericity=genericity,
            diagnosis=diagnosis,
            notes=notes,
        )

    if raw_case is CaseLabel.CASE_VII_EXCLUDED:
        return unrecognized(
            "the induced metric vanishes identically (eta = delta = mu = 0); "
            "no surface geometry to classify"
        )

    minimality = is_minimal(sig, surface, tol=h_tol)
    if not minimality.is_minimal:
        return unrecognized(
            f"not minimal: max |H| = {minimality.max_h_norm:.3e} exceeds "
            f"{h_tol:.1e}",
            minimality,
        )

    if is_totally_geodesic(sig, surface, tol=h_tol):
        return ClassificationResult(
            sig=sig,
            family=FamilyId.PLANE,
            case_label=raw_case,
            reported_case=raw_case,
            invariants=inv,
            minimality=minimality,
            genericity=genericity,
            notes=[*notes, "totally geodesic: the surface lies in a plane"],
        )

    if inv.mu.kind != "constant":
        return unrecognized(
            "minimal but <gamma', x'> is not constant; the input violates "
            "the normalized-structure assumptions",
            minimality,
        )
    mu_value = inv.mu.value

    if inv.eta != 0:
        # a shift along the rulings kills mu and moves delta to delta~
        delta_shifted = inv.delta_value - inv.eta * mu_value * mu_value
        second_kind = abs(delta_shifted) <= 1e-9
        elliptic = inv.epsilon * inv.eta > 0
        if elliptic:
            family = (
                FamilyId.ELLIPTIC_HELICOID_2
                if second_kind
                else FamilyId.ELLIPTIC_HELICOID_1
            )
        else:
            family = (
                FamilyId.HYPERBOLIC_HELICOID_2
                if second_kind
                else FamilyId.HYPERBOLIC_HELICOID_1
            )
        reported = CaseLabel.CASE_II if second_kind else CaseLabel.CASE_I
        if reported is not raw_case:
            notes.append(
                f"case {raw_case.value} input; a ruling-line shift "
                f"normalizes it to case {reported.value}"
            )
    else:
        if not inv.mu.is_zero:
            family = FamilyId.PARABOLIC_HELICOID
            reported = CaseLabel.CASE_IV
            if raw_case is CaseLabel.CASE_VI:
                notes.append(
                    "case vi input; a ruling-line shift makes the base "
                    "speed +-1 (case iv)"
                )
        else:
            family = FamilyId.MINIMAL_HYPERBOLIC_PARABOLOID
            reported = CaseLabel.CASE_V

    structure = verify_structure_odes(sig, surface, inv)
    if not structure.ok:
        notes.append(
            "structure-equation residuals are larger than expected "
            f"({structure.max_direction_residual:.2e}, "
            f"{structure.max_base_residual:.2e}); treat the match as numerical"
        )

    return ClassificationResult(
        sig=sig,
        family=family,
        case_label=raw_case,
        reported_case=reported,
        invariants=inv,
        minimality=minimality,
        genericity=genericity,
        structure=structure,
        notes=notes,
    )
