"""Tests for family generators, causal maps, span checks, and the graph check."""

import numpy as np
import pytest

from ruledmin import (
    DEG_BAND,
    CausalCharacter,
    FamilyId,
    FrameSpec,
    NonExistenceError,
    SignChoice,
    Signature,
    UsageError,
    bernstein_check,
    causal_map,
    det_g_closed_form,
    degenerate_span_check,
    existence_oracle,
    first_form,
    generate,
    immersion_jet,
    is_minimal,
    pick_signs,
    scale_surface,
    uniform_grid,
)
from ruledmin.catalog import SpanType

R30 = Signature(3, 0)
R31 = Signature(3, 1)
R41 = Signature(4, 1)
R42 = Signature(4, 2)

FRAME_FAMILIES = (
    FamilyId.ELLIPTIC_HELICOID_1,
    FamilyId.ELLIPTIC_HELICOID_2,
    FamilyId.HYPERBOLIC_HELICOID_1,
    FamilyId.HYPERBOLIC_HELICOID_2,
    FamilyId.PARABOLIC_HELICOID,
    FamilyId.MINIMAL_HYPERBOLIC_PARABOLOID,
)


def _admissible_triples(n_range=(3, 4, 5, 6)):
    """Yield every (sig, family, signs) the existence decision admits."""
    for n in n_range:
        for p in range(0, n + 1):
            sig = Signature(n, p)
            for family in FamilyId:
                if family is FamilyId.PLANE:
                    continue
                result = existence_oracle(sig, family)
                if not result.exists:
                    continue
                if family is FamilyId.MINIMAL_CYLINDER:
                    yield sig, family, None
                    continue
                for choice, ok, _ in result.per_sign:
                    if ok:
                        yield sig, family, choice


# ---------------------------------------------------------------------------
# generation


def test_classical_helicoid_coordinates():
    surf = generate(R30, FamilyId.ELLIPTIC_HELICOID_1, signs=SignChoice(1, 1, 1))
    for s, t in [(0.0, 1.0), (0.7, -2.0), (-1.2, 0.4)]:
        f = immersion_jet(surf, s, t).f
        assert np.allclose(f, (t * np.cos(s), t * np.sin(s), s), atol=1e-15)


def test_second_kind_witness_frame_in_neutral_four_space():
    surf = generate(R42, FamilyId.HYPERBOLIC_HELICOID_2, signs=SignChoice(-1, 1, 0))
    # gamma(0) = e1, gamma'(0) = e2 up to sign, x'(0) covers e3
    assert np.allclose(surf.gamma.eval(0.0), (1, 0, 0, 0), atol=1e-15)
    assert np.allclose(surf.base.eval(0.0, 1), (0, 1, 0, 1), atol=1e-15)
    assert is_minimal(R42, surf, tau_deg=1e-6).is_minimal


def test_minimal_cylinder_canonical_witness():
    surf = generate(R31, FamilyId.MINIMAL_CYLINDER)
    s_grid = uniform_grid(-3.0, 3.0, 31)
    gamma0 = surf.gamma.eval(0.0)
    assert np.allclose(gamma0, (1, 1, 0), atol=1e-15)
    x1 = surf.base.eval(s_grid, 1)
    pairing = -x1[:, 0] + x1[:, 1]
    assert np.max(np.abs(pairing + np.exp(-s_grid))) < 1e-12


def test_generate_rejects_inadmissible_requests():
    with pytest.raises(NonExistenceError) as err:
        generate(R31, FamilyId.HYPERBOLIC_HELICOID_2)
    assert err.value.result.certificate is not None
    with pytest.raises(NonExistenceError):
        generate(R30, FamilyId.MINIMAL_CYLINDER)


def test_generate_rejects_wrong_sign_pattern():
    with pytest.raises(UsageError):
        generate(R30, FamilyId.ELLIPTIC_HELICOID_1, signs=SignChoice(1, -1, 0))


def test_plane_generation():
    surf = generate(R30, FamilyId.PLANE)
    assert surf.gamma.is_constant()
    assert is_minimal(R30, surf).is_minimal


def test_all_admissible_triples_generate_minimal_surfaces():
    count = 0
    for sig, family, signs in _admissible_triples(n_range=(3, 4)):
        surf = generate(sig, family, signs=signs)
        assert is_minimal(sig, surf, tau_deg=1e-6).is_minimal, (sig, family, signs)
        count += 1
    assert count > 20


# ---------------------------------------------------------------------------
# closed-form determinant of the first form


def test_det_g_closed_forms():
    cases = [
        (FamilyId.ELLIPTIC_HELICOID_1, SignChoice(1, 1, 1), (1.0, 0.0, 1.0)),
        (FamilyId.ELLIPTIC_HELICOID_1, SignChoice(1, 1, -1), (1.0, 0.0, -1.0)),
        (FamilyId.ELLIPTIC_HELICOID_2, SignChoice(1, 1, 0), (1.0, 0.0, 0.0)),
        (FamilyId.HYPERBOLIC_HELICOID_1, SignChoice(1, -1, 1), (-1.0, 0.0, 1.0)),
        (FamilyId.HYPERBOLIC_HELICOID_2, SignChoice(1, -1, 0), (-1.0, 0.0, 0.0)),
        (FamilyId.PARABOLIC_HELICOID, SignChoice(1, 1, -1), (0.0, -4.0, 0.0)),
        (FamilyId.PARABOLIC_HELICOID, SignChoice(-1, -1, 1), (0.0, -4.0, 0.0)),
        (FamilyId.MINIMAL_HYPERBOLIC_PARABOLOID, SignChoice(0, 1, 1), (0.0, 0.0, 1.0)),
        (FamilyId.MINIMAL_HYPERBOLIC_PARABOLOID, SignChoice(0, 1, -1), (0.0, 0.0, -1.0)),
    ]
    for family, signs, (c2, c1, c0) in cases:
        form = det_g_closed_form(family, signs)
        assert (form.c2, form.c1, form.c0) == (c2, c1, c0), (family, signs)
        assert not form.s_dependent


def test_det_g_cylinder_is_s_dependent():
    form = det_g_closed_form(FamilyId.MINIMAL_CYLINDER)
    assert form.s_dependent


def test_det_g_closed_form_rejects_plane():
    with pytest.raises(UsageError):
        det_g_closed_form(FamilyId.PLANE)


def test_det_g_closed_form_matches_samples_everywhere():
    """Sampled first-form determinants agree with the polynomial in t."""
    reps = [
        (R30, FamilyId.ELLIPTIC_HELICOID_1, SignChoice(1, 1, 1)),
        (R31, FamilyId.ELLIPTIC_HELICOID_1, SignChoice(1, 1, -1)),
        (R41, FamilyId.ELLIPTIC_HELICOID_2, SignChoice(1, 1, 0)),
        (R31, FamilyId.HYPERBOLIC_HELICOID_1, SignChoice(1, -1, 1)),
        (R42, FamilyId.HYPERBOLIC_HELICOID_2, SignChoice(-1, 1, 0)),
        (R31, FamilyId.PARABOLIC_HELICOID, SignChoice(1, 1, -1)),
        (R41, FamilyId.MINIMAL_HYPERBOLIC_PARABOLOID, SignChoice(0, 1, 1)),
    ]
    s_grid = uniform_grid(-3.0, 3.0, 100)
    t_grid = uniform_grid(-3.0, 3.0, 100)
    for sig, family, signs in reps:
        surf = generate(sig, family, signs=signs)
        form = det_g_closed_form(family, signs)
        worst = 0.0
        for s in s_grid:
            for t in t_grid:
                det = first_form(sig, immersion_jet(surf, float(s), float(t))).det_g
                worst = max(worst, abs(det - form.value(float(t))))
        assert worst < 1e-10, (family, signs, worst)


# ---------------------------------------------------------------------------
# causal region maps


def test_causal_map_type_change_helicoid():
    report = causal_map(R31, FamilyId.ELLIPTIC_HELICOID_1, SignChoice(1, 1, -1))
    assert report.degenerate_loci == [-1.0, 1.0]
    verdicts = [r.verdict for r in report.regions]
    assert verdicts == ["spacelike", "timelike", "spacelike"]
    assert report.cross_validated


def test_causal_map_parabolic_sign_split():
    for s1 in (1, -1):
        signs = SignChoice(s1, s1, -s1)
        sig = R31 if s1 == 1 else R42
        report = causal_map(sig, FamilyId.PARABOLIC_HELICOID, signs)
        assert report.degenerate_loci == [0.0]
        assert [r.verdict for r in report.regions] == ["spacelike", "timelike"]


def test_causal_map_constant_paraboloid():
    report = causal_map(R41, FamilyId.MINIMAL_HYPERBOLIC_PARABOLOID, SignChoice(0, 1, 1))
    assert report.constant
    assert not report.degenerate_loci
    assert [r.verdict for r in report.regions] == ["spacelike"]


def test_causal_map_cylinder_is_timelike():
    report = causal_map(R31, FamilyId.MINIMAL_CYLINDER)
    assert report.constant
    assert [r.verdict for r in report.regions] == ["timelike"]


def test_causal_map_second_kind_no_type_change():
    # det g = +-t^2 keeps one sign on both sides of the degenerate locus
    rep_e = causal_map(R41, FamilyId.ELLIPTIC_HELICOID_2, SignChoice(1, 1, 0))
    assert rep_e.degenerate_loci == [0.0]
    assert {r.verdict for r in rep_e.regions} == {"spacelike"}
    rep_h = causal_map(R42, FamilyId.HYPERBOLIC_HELICOID_2, SignChoice(-1, 1, 0))
    assert rep_h.degenerate_loci == [0.0]
    assert {r.verdict for r in rep_h.regions} == {"timelike"}


def test_causal_maps_cross_validate_for_all_triples():
    for sig, family, signs in _admissible_triples(n_range=(3, 4)):
        if family is FamilyId.PLANE:
            continue
        report = causal_map(sig, family, signs)
        assert report.cross_validated, (sig, family, signs)


# ---------------------------------------------------------------------------
# span degeneracy


def test_degenerate_span_examples():
    frame42 = ((1, 0, 0, 0), (0, 0, 1, 0), (0, 1, 0, 1))
    assert degenerate_span_check(R42, frame42) is SpanType.DEGENERATE_SPAN
    basis30 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert degenerate_span_check(R30, basis30) is SpanType.NONDEGENERATE_SPAN
    frame41 = ((1, 0, 0, 1), (0, 1, 0, 0), (0, 0, 1, 0))
    assert degenerate_span_check(R41, frame41) is SpanType.DEGENERATE_SPAN


def test_degenerate_span_rejects_dependent_frames():
    with pytest.raises(UsageError):
        degenerate_span_check(R30, ((1, 0, 0), (0, 1, 0), (1, 1, 0)))


def test_span_type_tracks_family_kind():
    """Second-kind and paraboloid frames span degenerate 3-spaces; the others do not."""
    degenerate = {
        FamilyId.ELLIPTIC_HELICOID_2,
        FamilyId.HYPERBOLIC_HELICOID_2,
        FamilyId.MINIMAL_HYPERBOLIC_PARABOLOID,
    }
    for sig, family, signs in _admissible_triples(n_range=(3, 4, 5)):
        if family not in FRAME_FAMILIES:
            continue
        result = existence_oracle(sig, family, signs=signs)
        span = degenerate_span_check(sig, result.frame)
        expected = (
            SpanType.DEGENERATE_SPAN if family in degenerate else SpanType.NONDEGENERATE_SPAN
        )
        assert span is expected, (sig, family, signs)


# ---------------------------------------------------------------------------
# homothety stability


def test_homothety_preserves_verdict_and_region_structure():
    surf = generate(R31, FamilyId.ELLIPTIC_HELICOID_1, signs=SignChoice(1, 1, -1))
    scaled = scale_surface(surf, 2.5)
    assert is_minimal(R31, scaled, tau_deg=1e-6).is_minimal
    # det g scales by k^4 > 0: sign structure over t is unchanged
    for t in (-2.0, -0.5, 0.5, 2.0):
        det = first_form(R31, immersion_jet(surf, 0.3, t)).det_g
        det_k = first_form(R31, immersion_jet(scaled, 0.3, t)).det_g
        assert np.sign(det) == np.sign(det_k)
        assert abs(det_k - 2.5**4 * det) < 1e-10


def test_homothety_rejects_non_positive_ratio():
    surf = generate(R30, FamilyId.ELLIPTIC_HELICOID_1)
    with pytest.raises(UsageError):
        scale_surface(surf, 0.0)
    with pytest.raises(UsageError):
        scale_surface(surf, -2.0)


# ---------------------------------------------------------------------------
# entire-graph check


def test_bernstein_counterexample_in_lorentz_four_space():
    report = bernstein_check(R41)
    assert report.exists
    assert report.entire_graph
    assert report.spacelike
    assert report.minimal
    assert not report.planar
    assert report.min_det_g > 0.0
    assert report.min_g11 > 0.0
    assert report.max_h_norm <= 1e-8
    assert max(abs(v) for dom in report.domains for v in dom) >= 100.0


def test_bernstein_check_requires_spacelike_pattern():
    with pytest.raises(UsageError):
        bernstein_check(R41, signs=SignChoice(0, 1, -1))


@pytest.mark.parametrize("sig", [R30, R31])
def test_bernstein_check_nonexistence(sig):
    with pytest.raises(NonExistenceError) as err:
        bernstein_check(sig)
    assert err.value.result.certificate is not None


# ---------------------------------------------------------------------------
# sign selection


def test_pick_signs_returns_first_admissible_choice():
    assert pick_signs(R30, FamilyId.ELLIPTIC_HELICOID_1) == SignChoice(1, 1, 1)
    assert pick_signs(R31, FamilyId.HYPERBOLIC_HELICOID_2) is None
    assert pick_signs(R42, FamilyId.HYPERBOLIC_HELICOID_2) is not None


def test_frame_spec_validates_gram_exactly():
    FrameSpec(sig=R42, vectors=((1, 0, 0, 0), (0, 0, 1, 0), (0, 1, 0, 1)), signs=(-1, 1, 0))
    with pytest.raises(UsageError):
        FrameSpec(sig=R42, vectors=((1, 0, 0, 0), (0, 0, 1, 0), (0, 1, 0, 1)), signs=(1, 1, 0))
    with pytest.raises(UsageError):
        FrameSpec(sig=R30, vectors=((1, 0, 0), (0, 0, 0), (0, 0, 1)), signs=(1, 0, 1))


def test_deg_band_masks_match_causal_tags():
    surf = generate(R31, FamilyId.PARABOLIC_HELICOID)
    # det g = -4t here, so |det g| <= DEG_BAND corresponds to |t| <= DEG_BAND/4
    t_vals = np.array([-2.0, -DEG_BAND / 8, 0.0, DEG_BAND / 8, 2.0])
    dets = [first_form(R31, immersion_jet(surf, 0.0, float(t))).det_g for t in t_vals]
    from ruledmin.export import causal_tag

    tags = [causal_tag(d) for d in dets]
    assert tags == ["spacelike", "degenerate", "degenerate", "degenerate", "timelike"]
