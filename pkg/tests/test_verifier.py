import math

import pytest

from tcplan.catalog import catalog_space
from tcplan.geometry import make_point
from tcplan.planner_core import (
    arm_planner,
    circle_planner,
    punctured_plane_planner,
    sphere_planner,
    straight_line_planner,
)
from tcplan.verifier import (
    FamilyLeavesDomain,
    Mismatch,
    VerifyConfig,
    circle_antipodal_families,
    demonstrate_discontinuity,
    reconcile,
    sphere_antipodal_families,
    verify_planner,
)

FAST = VerifyConfig(pairs=400)


def test_config_validation():
    with pytest.raises(ValueError):
        VerifyConfig(pairs=0)
    with pytest.raises(ValueError):
        VerifyConfig(margin_eta=1.0)
    with pytest.raises(ValueError):
        VerifyConfig(delta=0.0)


def test_circle_passes_and_uses_second_rule():
    report = verify_planner(circle_planner(), FAST)
    assert report.passed
    assert report.rule_usage[2] > 0  # adversarial antipodal pairs reach rule 2
    assert report.max_endpoint_error <= FAST.tolerance
    assert report.uncovered_pairs == 0


def test_sphere2_passes_and_field_zero_pair_hits_chart_rule():
    planner = sphere_planner(2)
    report = verify_planner(planner, FAST)
    assert report.passed
    assert all(report.rule_usage[i] > 0 for i in (1, 2, 3))
    south = make_point(planner.geometry, [0, 0, -1])
    north = make_point(planner.geometry, [0, 0, 1])
    index, _, _ = planner.plan_info(south, north)
    assert index == 3


def test_straight_line_passes():
    assert verify_planner(straight_line_planner(3), FAST).passed


def test_torus2_all_levels_exercised():
    report = verify_planner(arm_planner("planar", 2), FAST)
    assert report.passed
    assert all(report.rule_usage[i] > 0 for i in (1, 2, 3))


def test_sphere_product_passes_with_every_level():
    report = verify_planner(arm_planner("spatial", 2), FAST)
    assert report.passed
    assert all(report.rule_usage[i] > 0 for i in (1, 2, 3, 4, 5))


def test_punctured_plane_passes():
    report = verify_planner(punctured_plane_planner(), FAST)
    assert report.passed


def test_reports_reproducible():
    first = verify_planner(circle_planner(), FAST)
    second = verify_planner(circle_planner(), FAST)
    assert first == second
    assert first.as_dict() == second.as_dict()


def test_continuity_ratio_within_empirical_bound():
    for planner in (circle_planner(), sphere_planner(2), arm_planner("planar", 2)):
        report = verify_planner(planner, FAST)
        assert math.isfinite(report.max_continuity_ratio)
        assert report.max_continuity_ratio <= 200.0


# -- discontinuity demonstrations ----------------------------------------------

def test_circle_boundary_gap():
    planner = circle_planner()
    fam_a, fam_b = circle_antipodal_families(planner)
    report = demonstrate_discontinuity(planner, 1, fam_a, fam_b)
    by_offset = dict(zip(report.offsets, report.gaps))
    assert by_offset[1e-3] >= 1.9
    assert report.min_gap >= 1.0  # non-vanishing across three decades


def test_sphere_boundary_gap():
    planner = sphere_planner(2)
    fam_a, fam_b = sphere_antipodal_families(planner)
    report = demonstrate_discontinuity(planner, 1, fam_a, fam_b)
    assert min(report.gaps) >= 1.0


def test_identical_families_have_zero_gap():
    planner = circle_planner()
    fam_a, _ = circle_antipodal_families(planner)
    report = demonstrate_discontinuity(planner, 1, fam_a, fam_a)
    assert report.min_gap == 0.0


def test_family_leaving_domain_rejected():
    planner = circle_planner()

    def bad_family(eps):
        a = make_point(planner.geometry, [1, 0])
        return a, make_point(planner.geometry, [-1, 0])  # antipodal: outside rule 1

    fam_a, _ = circle_antipodal_families(planner)
    with pytest.raises(FamilyLeavesDomain):
        demonstrate_discontinuity(planner, 1, bad_family, fam_a)


# -- reconciliation ---------------------------------------------------------------

@pytest.mark.parametrize(
    "spec,builder,expected",
    [
        ("torus:3", lambda: arm_planner("planar", 3), 4),
        ("product(sphere:2,sphere:2,sphere:2)", lambda: arm_planner("spatial", 3), 7),
        ("sphere:3", lambda: sphere_planner(3), 2),
    ],
)
def test_reconcile_rule_counts(spec, builder, expected):
    report = reconcile(builder(), catalog_space(spec))
    assert report.rule_count == report.known_tc == expected
    assert report.bounds.exact


def test_reconcile_mismatch_names_both_numbers():
    wrong = circle_planner()  # 2 rules against torus:3's exact value 4
    with pytest.raises(Mismatch) as err:
        reconcile(wrong, catalog_space("torus:3"))
    assert "2" in str(err.value) and "4" in str(err.value)


def test_reconcile_requires_known_value():
    with pytest.raises(ValueError):
        reconcile(sphere_planner(2), catalog_space("cpn:2"))
