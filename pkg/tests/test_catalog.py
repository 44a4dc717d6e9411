import pytest

from tcplan.catalog import (
    BadSpec,
    UnsupportedParameter,
    catalog_space,
    circle_algebra,
    kunneth,
    parse_spec,
    planner_rule_count,
    point_algebra,
    sphere_algebra,
    tc_bounds,
)


# -- parser -----------------------------------------------------------------

@pytest.mark.parametrize(
    "text,expect",
    [
        ("circle", "circle"),
        ("sphere:3", "sphere:3"),
        (" torus : 4 ", "torus:4"),
        ("product( sphere:2 , sphere:2 )", "product(sphere:2,sphere:2)"),
        ("product(circle,product(circle,circle))", "product(circle,product(circle,circle))"),
        ("convex:7", "convex:7"),
        ("surface:0", "surface:0"),
    ],
)
def test_parse_roundtrip(text, expect):
    assert str(parse_spec(text)) == expect


@pytest.mark.parametrize("bad", ["sphere", "sphere:", "blob:2", "product(circle)", "circle extra", "product(circle,)"])
def test_parse_errors_carry_position(bad):
    with pytest.raises(BadSpec) as err:
        parse_spec(bad)
    assert "position" in str(err.value)


def test_out_of_range_parameters():
    with pytest.raises(UnsupportedParameter):
        parse_spec("sphere:0")
    with pytest.raises(UnsupportedParameter):
        parse_spec("convex:0")
    parse_spec("surface:0")  # genus 0 is fine


# -- descriptors -------------------------------------------------------------

@pytest.mark.parametrize(
    "spec,dim,tc",
    [
        ("circle", 1, 2),
        ("sphere:2", 2, 3),
        ("sphere:3", 3, 2),
        ("torus:3", 3, 4),
        ("surface:0", 2, 3),
        ("surface:1", 2, 3),
        ("surface:2", 2, 5),
        ("convex:4", 4, 1),
        ("product(sphere:2,sphere:2)", 4, 5),
        ("product(sphere:3,sphere:3)", 6, 3),
        ("product(circle,circle,circle)", 3, 4),
    ],
)
def test_catalog_dimensions_and_known_values(spec, dim, tc):
    d = catalog_space(spec)
    assert d.geometry_dim == dim
    assert d.known_tc == tc


def test_cpn_has_no_exact_value():
    d = catalog_space("cpn:2")
    assert d.geometry_dim == 4
    assert d.known_tc is None


def test_mixed_product_has_no_exact_value():
    assert catalog_space("product(circle,sphere:2)").known_tc is None


def test_closed_manifold_top_degree_matches_dimension():
    for spec in ["circle", "sphere:4", "torus:3", "surface:2", "cpn:3",
                 "product(sphere:2,sphere:2)"]:
        d = catalog_space(spec)
        assert d.algebra.top_degree == d.geometry_dim


def test_catalog_algebras_satisfy_all_ring_laws():
    """Unit, grading, sign rule and associativity hold on every basis
    pair/triple of each (desk-scale) catalog algebra."""
    for spec in ["circle", "sphere:4", "cpn:2", "surface:2", "torus:3",
                 "product(circle,sphere:2)", "convex:2"]:
        catalog_space(spec).algebra.validate()


def test_category_bracket_consistent_with_known_tc():
    for spec in ["circle", "sphere:2", "sphere:5", "torus:4", "surface:2", "convex:2"]:
        d = catalog_space(spec)
        if d.cat is not None and d.known_tc is not None:
            assert d.cat <= d.known_tc <= 2 * d.cat - 1


# -- kunneth -----------------------------------------------------------------

def test_kunneth_of_circles_is_torus_algebra():
    t2 = kunneth(circle_algebra(), circle_algebra())
    t2.validate()
    a1, a2 = (t2.basis_element(g) for g in t2.generators)
    assert a1 * a2 == (a2 * a1).scale(-1)
    assert not (a1 * a2).is_zero


def test_kunneth_with_point_is_isomorphic():
    s2 = sphere_algebra(2)
    product = kunneth(s2, point_algebra())
    assert product.dim == s2.dim
    assert sorted(product.degree.values()) == sorted(s2.degree.values())
    # structure constants transported through the pairing with the unit
    u = product.basis_element(product.pair_label("u", "1"))
    assert (u * u).is_zero


def test_iterated_kunneth_sphere_cube():
    s2 = sphere_algebra(2)
    cube = kunneth(kunneth(s2, s2), s2)
    assert cube.dim == 8
    assert cube.top_degree == 6


# -- bounds -------------------------------------------------------------------

def test_bounds_sphere2_with_planner_count():
    report = tc_bounds(catalog_space("sphere:2"), planner_rule_count("sphere:2"))
    assert (report.lower, report.upper, report.exact) == (3, 3, True)
    assert report.lower_provenance == "cup-length lower bound"
    assert report.upper_provenance == "planner rule count"


def test_bounds_torus6_product_inequality():
    report = tc_bounds(catalog_space("torus:6"))
    assert (report.lower, report.upper, report.exact) == (7, 7, True)
    assert report.upper_provenance == "product inequality"


def test_bounds_cpn2_not_exact():
    report = tc_bounds(catalog_space("cpn:2"))
    assert (report.lower, report.upper, report.exact) == (5, 9, False)
    assert report.upper_provenance == "dimension bound"


def test_bounds_surface2_exact_via_dimension():
    report = tc_bounds(catalog_space("surface:2"))
    assert (report.lower, report.upper, report.exact) == (5, 5, True)
    assert report.upper_provenance == "dimension bound"


def test_bounds_convex():
    report = tc_bounds(catalog_space("convex:5"), planner_rule_count("convex:5"))
    assert (report.lower, report.upper) == (1, 1)
    assert report.lower_provenance == "contractible"


def test_lower_is_one_only_for_contractible():
    for spec in ["circle", "sphere:2", "torus:2", "surface:3", "cpn:1"]:
        assert tc_bounds(catalog_space(spec)).lower >= 2
    assert tc_bounds(catalog_space("convex:1")).lower == 1
    assert tc_bounds(catalog_space("product(convex:1,convex:2)")).lower == 1


def test_known_tc_inside_bounds_for_whole_catalog():
    specs = ["circle", "sphere:2", "sphere:3", "sphere:4", "torus:2", "torus:4",
             "surface:0", "surface:1", "surface:2", "convex:3",
             "product(sphere:2,sphere:2)", "product(sphere:3,sphere:3)"]
    for spec in specs:
        d = catalog_space(spec)
        report = tc_bounds(d, planner_rule_count(spec))
        assert report.lower <= report.upper
        if d.known_tc is not None:
            assert report.lower <= d.known_tc <= report.upper
        count = planner_rule_count(spec)
        if count is not None and d.known_tc is not None:
            assert count == d.known_tc


def test_product_upper_monotone():
    pairs = [("circle", "sphere:2"), ("torus:2", "circle"), ("sphere:2", "sphere:3")]
    for left, right in pairs:
        combined = tc_bounds(catalog_space(f"product({left},{right})"))
        a = tc_bounds(catalog_space(left), planner_rule_count(left))
        b = tc_bounds(catalog_space(right), planner_rule_count(right))
        assert combined.upper <= a.upper + b.upper - 1


def test_reports_deterministic():
    d = catalog_space("torus:3")
    assert tc_bounds(d) == tc_bounds(d)


def test_rule_count_formulae():
    assert planner_rule_count("circle") == 2
    assert planner_rule_count("sphere:5") == 2
    assert planner_rule_count("sphere:6") == 3
    assert planner_rule_count("torus:4") == 5
    assert planner_rule_count("product(sphere:2,sphere:2,sphere:2)") == 7
    assert planner_rule_count("surface:2") is None
    assert planner_rule_count("cpn:3") is None
