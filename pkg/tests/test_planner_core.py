import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tcplan.geometry import (
    ConfigPoint,
    InvalidPoint,
    ParityError,
    config_distance,
    even_vector_field,
    make_point,
    odd_vector_field,
    random_point,
)
from tcplan.planner_core import (
    DomainMiss,
    HomotopyEndpointMismatch,
    LengthMismatch,
    arm_planner,
    build_planner,
    circle_planner,
    forward_kinematics,
    plan,
    product_planner,
    punctured_plane_planner,
    sample_path,
    sphere_planner,
    straight_line_planner,
    transfer_planner,
)

EPS = 1e-9


def pt(planner, *coords):
    return make_point(planner.geometry, list(coords))


def angle_of(point, factor=0):
    v = point.parts[factor]
    return math.atan2(v[1], v[0])


unit_vectors = st.integers(min_value=0, max_value=2**32 - 1).map(
    lambda seed: np.random.default_rng(seed)
)


# -- straight line -----------------------------------------------------------

def test_straight_line_midpoint():
    planner = straight_line_planner(2)
    result = plan(planner, pt(planner, 0, 0), pt(planner, 2, 0))
    assert result.rule_index == 1
    assert np.allclose(result.path(0.5).flat, [1, 0])


def test_straight_line_constant():
    planner = straight_line_planner(2)
    result = plan(planner, pt(planner, 1, 1), pt(planner, 1, 1))
    assert np.allclose(result.path(0.3).flat, [1, 1])


def test_straight_line_single_rule():
    assert len(straight_line_planner(3).rules) == 1


# -- circle --------------------------------------------------------------------

def test_circle_quarter_arc_uses_shortest_rule():
    planner = circle_planner()
    result = plan(planner, pt(planner, 1, 0), pt(planner, 0, 1))
    assert result.rule_index == 1
    assert abs(angle_of(result.path(0.5)) - math.pi / 4) < EPS


def test_circle_antipodal_goes_positive():
    planner = circle_planner()
    result = plan(planner, pt(planner, 1, 0), pt(planner, -1, 0))
    assert result.rule_index == 2
    assert abs(angle_of(result.path(0.5)) - math.pi / 2) < EPS  # counterclockwise


def test_circle_equal_pair_constant():
    planner = circle_planner()
    result = plan(planner, pt(planner, 1, 0), pt(planner, 1, 0))
    assert result.rule_index == 1
    assert config_distance(result.path(0.7), pt(planner, 1, 0)) < EPS


def test_circle_rule_count_is_two():
    assert len(circle_planner().rules) == 2


# -- tangent fields ---------------------------------------------------------------

def test_odd_field_swaps_coordinates():
    assert np.allclose(odd_vector_field(np.array([1.0, 0, 0, 0]), 3), [0, 1, 0, 0])


def test_odd_field_tangent_and_unit_on_1000_samples():
    rng = np.random.default_rng(17)
    for _ in range(1000):
        x = rng.standard_normal(4)
        x /= np.linalg.norm(x)
        v = odd_vector_field(x, 3)
        assert abs(np.dot(v, x)) < 1e-12
        assert abs(np.linalg.norm(v) - 1.0) < 1e-12


def test_odd_field_parity_error():
    with pytest.raises(ParityError):
        odd_vector_field(np.array([0.0, 0, 1]), 2)
    with pytest.raises(ParityError):
        even_vector_field(np.array([0.0, 1, 0, 0]), 3)


def test_even_field_zero_only_at_pole():
    pole = np.array([0.0, 0, 1])
    assert np.allclose(even_vector_field(pole, 2), 0)
    # at the antipode the chart differential is 2 * e1
    assert np.allclose(even_vector_field(-pole, 2), [2, 0, 0])


def test_even_field_quadratic_decay_near_pole():
    for delta in (1e-1, 1e-2):
        x = np.array([math.sin(delta), 0.0, math.cos(delta)])
        norm = np.linalg.norm(even_vector_field(x, 2))
        assert norm < delta**2  # ~ delta^2 / 2
    x = np.array([math.sin(1e-2), 0.0, math.cos(1e-2)])
    assert np.linalg.norm(even_vector_field(x, 2)) < 1e-3


@settings(max_examples=100, deadline=None)
@given(rng=unit_vectors)
def test_even_field_tangency(rng):
    x = rng.standard_normal(3)
    x /= np.linalg.norm(x)
    v = even_vector_field(x, 2)
    assert abs(np.dot(v, x)) < 1e-12


# -- sphere planners -----------------------------------------------------------------

def test_sphere_rule_counts_by_parity():
    assert len(sphere_planner(1).rules) == 2
    assert len(sphere_planner(2).rules) == 3
    assert len(sphere_planner(3).rules) == 2
    assert len(sphere_planner(4).rules) == 3


def test_sphere3_geodesic_midpoint():
    planner = sphere_planner(3)
    result = plan(planner, pt(planner, 1, 0, 0, 0), pt(planner, 0, 1, 0, 0))
    assert result.rule_index == 1
    assert np.allclose(result.path(0.5).flat, [1 / math.sqrt(2), 1 / math.sqrt(2), 0, 0])


def test_sphere3_antipodal_two_stage():
    planner = sphere_planner(3)
    a = pt(planner, 1, 0, 0, 0)
    b = pt(planner, -1, 0, 0, 0)
    result = plan(planner, a, b)
    assert result.rule_index == 2
    # first stage is constant (start already antipodal to goal); at t = 0.75
    # the polar arc sits at the tangent direction of the coordinate-swap field
    assert np.allclose(result.path(0.75).flat, [0, -1, 0, 0], atol=1e-12)
    assert config_distance(result.path(0.0), a) < EPS
    assert config_distance(result.path(1.0), b) < EPS


def test_sphere2_field_zero_pair_uses_chart_rule():
    planner = sphere_planner(2)
    result = plan(planner, pt(planner, 0, 0, -1), pt(planner, 0, 0, 1))
    assert result.rule_index == 3
    assert config_distance(result.path(1.0), pt(planner, 0, 0, 1)) < EPS


def test_sphere2_equal_pair_constant():
    planner = sphere_planner(2)
    a = pt(planner, 0.6, 0.8, 0)
    result = plan(planner, a, a)
    assert result.rule_index == 1
    assert config_distance(result.path(0.4), a) < EPS


@settings(max_examples=50, deadline=None)
@given(rng=unit_vectors)
def test_sphere_sections_hit_endpoints(rng):
    planner = sphere_planner(2)
    a = random_point(planner.geometry, rng)
    b = random_point(planner.geometry, rng)
    result = plan(planner, a, b)
    assert config_distance(result.path(0.0), a) < EPS
    assert config_distance(result.path(1.0), b) < EPS
    for t in (0.25, 0.5, 0.75):
        assert abs(np.linalg.norm(result.path(t).parts[0]) - 1.0) < EPS


# -- products ---------------------------------------------------------------------

def test_product_rule_count():
    assert len(product_planner(circle_planner(), circle_planner()).rules) == 3


def test_torus_level_two_for_generic_pair():
    planner = arm_planner("planar", 2)
    a = pt(planner, 1, 0, 1, 0)
    deg10 = math.radians(10)
    deg20 = math.radians(20)
    b = make_point(
        planner.geometry,
        [math.cos(deg10), math.sin(deg10), math.cos(deg20), math.sin(deg20)],
    )
    index, _, signature = planner.plan_info(a, b)
    assert index == 1  # level 2
    assert signature == ((0,), (0,))
    result = plan(planner, a, b)
    mid = result.path(0.5)
    assert abs(angle_of(mid, 0) - deg10 / 2) < EPS
    assert abs(angle_of(mid, 1) - deg20 / 2) < EPS


def test_torus_exact_tie_hits_top_level():
    planner = arm_planner("planar", 2)
    a = pt(planner, 1, 0, 1, 0)
    b = pt(planner, 0, 1, 0, 1)  # exactly a quarter turn per factor
    index, _, signature = planner.plan_info(a, b)
    assert index == 3  # level 4
    assert signature == ((0, 1), (0, 1))


def test_product_weights_are_partition_of_unity():
    planner = arm_planner("spatial", 2)
    rng = np.random.default_rng(3)
    for _ in range(100):
        a = random_point(planner.geometry, rng)
        b = random_point(planner.geometry, rng)
        weights = planner.weights(a, b)
        assert abs(sum(weights) - 1.0) < 1e-12
        assert all(0.0 <= w <= 1.0 for w in weights)
        index, _, _ = planner.plan_info(a, b)
        assert weights[index - 1] > 0.0


def test_product_cell_inequalities_hold():
    """The derived argmax cell satisfies the defining strict inequalities."""
    left = circle_planner()
    right = sphere_planner(2)
    planner = product_planner(left, right)
    rng = np.random.default_rng(11)
    for _ in range(50):
        a = random_point(planner.geometry, rng)
        b = random_point(planner.geometry, rng)
        _, _, (s, t) = planner.plan_info(a, b)
        ax, ay = a.geometry.split_point(a, 1)
        bx, by = b.geometry.split_point(b, 1)
        f = left.weights(ax, bx)
        g = right.weights(ay, by)
        inside = min(f[i] * g[j] for i in s for j in t)
        for i in range(len(f)):
            for j in range(len(g)):
                if i not in s or j not in t:
                    assert inside > f[i] * g[j]
        # the chosen factor rules cover the factor pairs
        assert f[min(s)] > 0 and g[min(t)] > 0


def test_arm_rule_counts():
    assert len(arm_planner("planar", 3).rules) == 4
    assert len(arm_planner("spatial", 2).rules) == 5
    assert len(arm_planner("planar", 1).rules) == 2


def test_componentwise_section():
    planner = arm_planner("planar", 2)
    result = plan(planner, pt(planner, 1, 0, 0, 1), pt(planner, 0, 1, 0, 1))
    mid = result.path(0.5)
    assert abs(angle_of(mid, 0) - math.pi / 4) < EPS  # moving factor
    assert abs(angle_of(mid, 1) - math.pi / 2) < EPS  # parked factor


# -- transfer --------------------------------------------------------------------

def test_punctured_plane_planner_has_two_rules():
    assert len(punctured_plane_planner().rules) == 2


def test_punctured_plane_sections_avoid_origin():
    planner = punctured_plane_planner()
    rng = np.random.default_rng(5)
    for _ in range(100):
        a = planner.point_sampler(rng)
        b = planner.point_sampler(rng)
        result = plan(planner, a, b)
        assert config_distance(result.path(0.0), a) < EPS
        assert config_distance(result.path(1.0), b) < EPS
        radii = [np.linalg.norm(result.path(t).parts[0]) for t in np.linspace(0, 1, 21)]
        assert min(radii) > 1e-6


def test_transfer_identity_homotopy_reproduces_source():
    circle = circle_planner()
    identity = lambda p: p
    planner = transfer_planner(
        circle,
        identity,
        identity,
        lambda t, p: p,
        circle.geometry,
        space="circle-again",
    )
    assert len(planner.rules) == len(circle.rules)
    a = pt(circle, 1, 0)
    b = pt(circle, 0, 1)
    source = plan(circle, a, b)
    transferred = plan(planner, a, b)
    assert transferred.rule_index == source.rule_index
    for tau in np.linspace(0, 1, 9):
        expected = source.path(min(1.0, max(0.0, 3 * tau - 1)))
        assert config_distance(transferred.path(tau), expected) < EPS


def test_transfer_rejects_bad_homotopy():
    circle = circle_planner()
    with pytest.raises(HomotopyEndpointMismatch):
        transfer_planner(
            circle,
            lambda p: p,
            lambda p: p,
            lambda t, p: ConfigPoint(p.geometry, (-p.parts[0],)),
            circle.geometry,
            check_points=[pt(circle, 1, 0)],
        )


# -- plan / sample_path -------------------------------------------------------------

def test_plan_is_deterministic():
    planner = sphere_planner(2)
    rng = np.random.default_rng(9)
    a = random_point(planner.geometry, rng)
    b = random_point(planner.geometry, rng)
    first = plan(planner, a, b)
    second = plan(planner, a, b)
    assert first.rule_index == second.rule_index
    for t in np.linspace(0, 1, 7):
        assert first.path(t).flat.tobytes() == second.path(t).flat.tobytes()


def test_sample_path_endpoints_and_spacing():
    planner = circle_planner()
    eighth = math.pi / 4
    goal = make_point(planner.geometry, [math.cos(eighth), math.sin(eighth)])
    result = plan(planner, pt(planner, 1, 0), goal)
    two = sample_path(result.path, 2)
    assert [t for t, _ in two] == [0.0, 1.0]
    three = sample_path(result.path, 3)
    assert abs(angle_of(three[1][1]) - math.pi / 8) < EPS
    for _, point in sample_path(result.path, 9):
        assert abs(np.linalg.norm(point.parts[0]) - 1.0) < EPS


def test_section_outside_domain_raises():
    planner = circle_planner()
    a = pt(planner, 1, 0)
    with pytest.raises(DomainMiss):
        planner.rules[1].section(a, a)  # positive-arc rule needs a != b


# -- kinematics ----------------------------------------------------------------------

def test_planar_kinematics():
    planner = arm_planner("planar", 2)
    config = pt(planner, 1, 0, 0, 1)  # angles 0 and pi/2
    joints = forward_kinematics(config, [1.0, 1.0])
    assert np.allclose(joints, [[0, 0], [1, 0], [1, 1]])


def test_spatial_kinematics():
    planner = arm_planner("spatial", 2)
    config = pt(planner, 1, 0, 0, 0, 0, 1)
    joints = forward_kinematics(config, [2.0, 1.0])
    assert np.allclose(joints, [[0, 0, 0], [2, 0, 0], [2, 0, 1]])


def test_kinematics_length_mismatch():
    planner = arm_planner("planar", 2)
    with pytest.raises(LengthMismatch):
        forward_kinematics(pt(planner, 1, 0, 1, 0), [1.0])


def test_reach_bounded_by_total_length_on_1000_samples():
    planner = arm_planner("planar", 3)
    rng = np.random.default_rng(23)
    lengths = [0.5, 1.0, 2.0]
    for _ in range(1000):
        config = random_point(planner.geometry, rng)
        joints = forward_kinematics(config, lengths)
        assert np.linalg.norm(joints[-1]) <= sum(lengths) + 1e-12


# -- wiring --------------------------------------------------------------------------

def test_build_planner_matches_catalog_counts():
    from tcplan.catalog import planner_rule_count

    for spec in ["circle", "sphere:2", "sphere:3", "torus:2", "torus:4", "convex:3",
                 "surface:0", "surface:1", "product(sphere:2,sphere:2)",
                 "product(circle,sphere:2)"]:
        planner = build_planner(spec)
        assert planner is not None
        assert len(planner.rules) == planner_rule_count(spec)


def test_build_planner_none_for_unplannable():
    assert build_planner("surface:2") is None
    assert build_planner("cpn:2") is None


def test_point_validation():
    planner = circle_planner()
    with pytest.raises(InvalidPoint):
        make_point(planner.geometry, [1.0, 1.0])
    ok = make_point(planner.geometry, [1.0 + 5e-7, 0.0], renormalize=True)
    assert abs(np.linalg.norm(ok.parts[0]) - 1.0) < 1e-12
