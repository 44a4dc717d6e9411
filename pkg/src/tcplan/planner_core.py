"""Executable piecewise motion planners.

A planner is an ordered list of rules.  Each rule owns an open subset of
(start, goal) pairs, a section producing a path from start to goal on that
subset, and a continuous weight in [0, 1] that is positive exactly on the
subset; the normalized weights form a partition of unity.  Planning a query
means taking the first rule whose weight is positive and evaluating its
section, so the number of rules is an upper bound for the complexity of the
space and the constructions below realize the known minimal counts:

* convex pieces: 1 rule (straight segments);
* the circle: 2 rules (shortest arc; fixed-orientation arc);
* spheres: 2 rules for odd dimension, 3 for even, using a tangent field
  that is nowhere zero (odd) or vanishes at a single pole (even), plus a
  stereographic-chart rule for the even-dimensional leftover pair;
* products: the two factor planners combine into n + m - 1 rules indexed
  by tie level, giving n + 1 rules for the planar n-bar arm (a torus) and
  2n + 1 for the spatial arm (a product of 2-spheres);
* any planner transfers along a homotopy equivalence (three-stage paths),
  e.g. from the circle to the punctured plane.

Planners are immutable once built and planning is pure, so a planner may be
shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Sequence

import numpy as np

from .geometry import (
    ConfigPoint,
    Geometry,
    InvalidPoint,
    ParityError,
    PathFn,
    antipode,
    chart_segment_path,
    concat_geometry,
    concat_paths,
    config_distance,
    convex_geometry,
    even_vector_field,
    factor_distance,
    geodesic_path,
    mapped_path,
    odd_vector_field,
    pair_paths,
    polar_arc_path,
    sphere_geometry,
)

__all__ = [
    "CoverageGap",
    "DomainMiss",
    "HomotopyEndpointMismatch",
    "LengthMismatch",
    "ParityError",
    "Planner",
    "PlannerRule",
    "PlanResult",
    "arm_planner",
    "build_planner",
    "circle_planner",
    "even_vector_field",
    "forward_kinematics",
    "odd_vector_field",
    "plan",
    "product_planner",
    "punctured_plane_planner",
    "sample_path",
    "sphere_planner",
    "straight_line_planner",
    "transfer_planner",
]


class DomainMiss(RuntimeError):
    """A section was evaluated outside its rule's domain."""


class CoverageGap(RuntimeError):
    """No rule matched a query pair; the rule domains failed to cover."""


class HomotopyEndpointMismatch(ValueError):
    """The supplied homotopy does not start at the identity or end at g o f."""


class LengthMismatch(ValueError):
    """Bar lengths do not match the arm's factor count."""


@dataclass(frozen=True)
class PlannerRule:
    """One motion-planning rule: domain, section, partition-of-unity weight.

    ``weight`` maps a pair to [0, 1] and is positive exactly where the rule
    applies; ``predicate`` is the induced domain test.  ``cell_signature``
    (product planners only) names the tie cell the pair falls in, which a
    verifier uses to perturb within a single continuity region.
    """

    name: str
    weight: Callable[[ConfigPoint, ConfigPoint], float]
    section: Callable[[ConfigPoint, ConfigPoint], PathFn]
    cell_signature: Callable[[ConfigPoint, ConfigPoint], object] | None = None

    def predicate(self, a: ConfigPoint, b: ConfigPoint) -> bool:
        return self.weight(a, b) > 0.0


@dataclass(frozen=True)
class PlanResult:
    rule_index: int  # 1-based, first applicable rule
    path: PathFn


@dataclass
class Planner:
    """An ordered rule system over a product geometry.

    ``info_fn``, when present, computes (first rule index, raw weights,
    cell signature) in one pass; composite planners install one to avoid
    re-deriving their tie structure rule by rule.  ``point_sampler`` lets
    spaces with excluded loci (e.g. the punctured plane) provide their own
    random points to verifiers.
    """

    space: str
    geometry: Geometry
    rules: tuple[PlannerRule, ...]
    info_fn: Callable[[ConfigPoint, ConfigPoint], tuple[int, tuple[float, ...], object]] | None = None
    point_sampler: Callable[[np.random.Generator], ConfigPoint] | None = None

    def raw_weights(self, a: ConfigPoint, b: ConfigPoint) -> tuple[float, ...]:
        if self.info_fn is not None:
            return self.info_fn(a, b)[1]
        return tuple(r.weight(a, b) for r in self.rules)

    def weights(self, a: ConfigPoint, b: ConfigPoint) -> tuple[float, ...]:
        raw = self.raw_weights(a, b)
        total = sum(raw)
        if total <= 0.0:
            raise CoverageGap(f"{self.space}: no rule applies at ({a}, {b})")
        return tuple(w / total for w in raw)

    def plan_info(self, a: ConfigPoint, b: ConfigPoint) -> tuple[int, tuple[float, ...], object]:
        """First applicable 1-based rule index, normalized weights, signature."""
        if self.info_fn is not None:
            index, raw, signature = self.info_fn(a, b)
        else:
            raw = tuple(r.weight(a, b) for r in self.rules)
            index = next((i + 1 for i, w in enumerate(raw) if w > 0.0), 0)
            signature = None
        if index == 0:
            raise CoverageGap(f"{self.space}: no rule applies at ({a}, {b})")
        total = sum(raw)
        if signature is None and self.rules[index - 1].cell_signature is not None:
            signature = self.rules[index - 1].cell_signature(a, b)
        return index, tuple(w / total for w in raw), signature


def plan(planner: Planner, a: ConfigPoint, b: ConfigPoint) -> PlanResult:
    """Answer a query with the first rule that covers it."""
    index, _, _ = planner.plan_info(a, b)
    return PlanResult(index, planner.rules[index - 1].section(a, b))


def sample_path(path: PathFn, n: int) -> list[tuple[float, ConfigPoint]]:
    """n uniformly spaced samples including both endpoints."""
    if n < 2:
        raise ValueError("need at least 2 samples")
    return [(i / (n - 1), path(i / (n - 1))) for i in range(n)]


# -- elementary planners --------------------------------------------------------


def straight_line_planner(dim: int) -> Planner:
    """One-rule planner on a convex piece: constant-velocity segments."""
    geometry = convex_geometry(dim)
    rule = PlannerRule(
        name="segment",
        weight=lambda a, b: 1.0,
        section=lambda a, b: geodesic_path(a, b),
    )
    return Planner(space=f"convex:{dim}", geometry=geometry, rules=(rule,))


def circle_planner() -> Planner:
    """Two rules on the circle: shortest arc, else positively oriented arc."""
    geometry = sphere_geometry(1)
    factor = geometry.factors[0]

    def w_shortest(a, b):
        return factor_distance(factor, a.parts[0], -b.parts[0]) / math.pi

    def s_shortest(a, b):
        if w_shortest(a, b) <= 0.0:
            raise DomainMiss("shortest-arc rule needs a != -b")
        return geodesic_path(a, b)

    def w_positive(a, b):
        return factor_distance(factor, a.parts[0], b.parts[0]) / math.pi

    def s_positive(a, b):
        if w_positive(a, b) <= 0.0:
            raise DomainMiss("positive-arc rule needs a != b")
        xa, xb = a.parts[0], b.parts[0]
        start = math.atan2(xa[1], xa[0])
        sweep = (math.atan2(xb[1], xb[0]) - start) % (2.0 * math.pi)

        def fn(t):
            angle = start + t * sweep
            return ConfigPoint(geometry, (np.array([math.cos(angle), math.sin(angle)]),))

        return PathFn(fn, ((0.0, 1.0, True),), "positive-arc")

    return Planner(
        space="circle",
        geometry=geometry,
        rules=(
            PlannerRule("shortest-arc", w_shortest, s_shortest),
            PlannerRule("positive-arc", w_positive, s_positive),
        ),
    )


def sphere_planner(n: int) -> Planner:
    """Minimal-rule planner on the n-sphere: 2 rules for odd n, 3 for even.

    Rule 1 rides the unique shortest arc where start and goal are not
    antipodal.  Rule 2 first moves the start to the goal's antipode, then
    sweeps the half great circle  -cos(pi t) B + sin(pi t) v(B)  through a
    unit tangent direction v(B); for even n the tangent field necessarily
    dies somewhere, so its zero B_0 (the last coordinate pole) is excluded
    and rule 3 handles the remainder inside the stereographic chart based
    at C (the first coordinate pole, distinct from both B_0 and -B_0).
    """
    if n < 1:
        raise ValueError("sphere dimension must be >= 1")
    geometry = sphere_geometry(n)
    factor = geometry.factors[0]
    odd = n % 2 == 1
    pole = np.zeros(n + 1)
    pole[n] = 1.0  # B_0, zero of the even tangent field
    chart_axis = 0  # C = e_1, base point of the rule-3 chart

    def w_shortest(a, b):
        return factor_distance(factor, a.parts[0], -b.parts[0]) / math.pi

    def s_shortest(a, b):
        if w_shortest(a, b) <= 0.0:
            raise DomainMiss("shortest-arc rule needs a != -b")
        return geodesic_path(a, b)

    def tangent_at(vec: np.ndarray) -> np.ndarray:
        v = odd_vector_field(vec, n) if odd else even_vector_field(vec, n)
        return v / np.linalg.norm(v)

    if odd:
        def w_two_stage(a, b):
            return factor_distance(factor, a.parts[0], b.parts[0]) / math.pi
    else:
        def w_two_stage(a, b):
            d_ab = factor_distance(factor, a.parts[0], b.parts[0])
            d_pole = factor_distance(factor, b.parts[0], pole)
            return min(d_ab, d_pole) / math.pi

    def s_two_stage(a, b):
        if w_two_stage(a, b) <= 0.0:
            raise DomainMiss("two-stage rule needs a != b (and b off the field zero)")
        to_antipode = geodesic_path(a, antipode(b))
        sweep = polar_arc_path(geometry, b.parts[0], tangent_at(b.parts[0]))
        return concat_paths([(0.0, 0.5, to_antipode), (0.5, 1.0, sweep)], "two-stage")

    rules = [
        PlannerRule("shortest-arc", w_shortest, s_shortest),
        PlannerRule("two-stage", w_two_stage, s_two_stage),
    ]

    if not odd:
        chart_pole = np.zeros(n + 1)
        chart_pole[chart_axis] = 1.0

        def w_chart(a, b):
            d_a = factor_distance(factor, a.parts[0], chart_pole)
            d_b = factor_distance(factor, b.parts[0], chart_pole)
            return min(d_a, d_b) / math.pi

        def s_chart(a, b):
            if w_chart(a, b) <= 0.0:
                raise DomainMiss("chart rule needs both points off the chart pole")
            return chart_segment_path(geometry, a.parts[0], b.parts[0], chart_axis)

        rules.append(PlannerRule("chart-segment", w_chart, s_chart))

    return Planner(space=f"sphere:{n}", geometry=geometry, rules=tuple(rules))


# -- product combination ---------------------------------------------------------


def _tie_cells(f: tuple[float, ...], g: tuple[float, ...]):
    """Tie-cell analysis of one query against two weight vectors.

    A cell is a pair (S, T) of index sets; a query is in the cell when every
    product f_i * g_j over S x T strictly exceeds every product outside.
    Only supersets of the argmax sets can contain the query, so those are
    the only cells examined.  Returns the raw per-level weights (the sums
    of clamped cell margins, with an empty outside treated as comparing
    against zero), the containing cell per level, and the argmax cell.
    """
    n, m = len(f), len(g)
    fmax, gmax = max(f), max(g)
    s0 = [i for i in range(n) if f[i] == fmax]
    t0 = [j for j in range(m) if g[j] == gmax]
    rest_s = [i for i in range(n) if f[i] != fmax]
    rest_t = [j for j in range(m) if g[j] != gmax]

    levels = [0.0] * (n + m + 1)
    cells: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = {}

    for s_bits in range(1 << len(rest_s)):
        s_extra = [rest_s[k] for k in range(len(rest_s)) if s_bits >> k & 1]
        s = s0 + s_extra
        min_f = min(fmax, min((f[i] for i in s_extra), default=fmax))
        out_f = max((f[i] for i in rest_s if i not in s_extra), default=None)
        for t_bits in range(1 << len(rest_t)):
            t_extra = [rest_t[k] for k in range(len(rest_t)) if t_bits >> k & 1]
            t = t0 + t_extra
            min_g = min(gmax, min((g[j] for j in t_extra), default=gmax))
            out_g = max((g[j] for j in rest_t if j not in t_extra), default=None)

            outside = 0.0
            if out_f is not None:
                outside = max(outside, out_f * gmax)
            if out_g is not None:
                outside = max(outside, fmax * out_g)
            margin = min_f * min_g - outside
            if margin > 0.0:
                level = len(s) + len(t)
                levels[level] += margin
                if level not in cells:
                    cells[level] = (tuple(sorted(s)), tuple(sorted(t)))

    return levels, cells, (tuple(sorted(s0)), tuple(sorted(t0)))


def product_planner(left: Planner, right: Planner) -> Planner:
    """Combine planners on X and Y into n + m - 1 rules on X x Y.

    For a query, normalized factor weights are computed on each side and
    their argmax sets S, T (grouped at exact equality) select the tie cell
    W(S, T) at level |S| + |T|.  Rules are the levels k = 2, ..., n + m;
    the section on a cell pairs the factor sections with the smallest
    indices in S and T, and the level weight is the sum of clamped cell
    margins, positive exactly on the union of that level's cells.
    """
    n, m = len(left.rules), len(right.rules)
    split = len(left.geometry.factors)
    geometry = concat_geometry(left.geometry, right.geometry)

    def analyze(a: ConfigPoint, b: ConfigPoint):
        ax, ay = a.geometry.split_point(a, split)
        bx, by = b.geometry.split_point(b, split)
        f = left.weights(ax, bx)
        g = right.weights(ay, by)
        return (ax, ay, bx, by), _tie_cells(f, g)

    def rule_for_level(level: int) -> PlannerRule:
        def weight(a, b, level=level):
            _, (levels, _, _) = analyze(a, b)
            return levels[level]

        def signature(a, b, level=level):
            _, (_, cells, _) = analyze(a, b)
            return cells.get(level)

        def section(a, b, level=level):
            (ax, ay, bx, by), (_, cells, _) = analyze(a, b)
            cell = cells.get(level)
            if cell is None:
                raise DomainMiss(f"level-{level} rule does not cover this pair")
            s, t = cell
            path_left = left.rules[min(s)].section(ax, bx)
            path_right = right.rules[min(t)].section(ay, by)
            return pair_paths(geometry, path_left, path_right)

        return PlannerRule(f"level-{level}", weight, section, cell_signature=signature)

    def info_fn(a, b):
        _, (levels, cells, (s0, t0)) = analyze(a, b)
        level = len(s0) + len(t0)
        return level - 1, tuple(levels[2:]), cells[level]

    return Planner(
        space=f"product({left.space},{right.space})",
        geometry=geometry,
        rules=tuple(rule_for_level(k) for k in range(2, n + m + 1)),
        info_fn=info_fn,
    )


def arm_planner(kind: str, n: int) -> Planner:
    """Planner for an n-bar arm: joint factors folded with product_planner.

    planar arms live on the n-torus (n + 1 rules), spatial arms on the
    product of n two-spheres (2n + 1 rules).
    """
    if n < 1:
        raise ValueError("arm needs at least one bar")
    if kind == "planar":
        planner = reduce(product_planner, [circle_planner() for _ in range(n)])
        planner.space = f"torus:{n}" if n > 1 else "circle"
    elif kind == "spatial":
        planner = reduce(product_planner, [sphere_planner(2) for _ in range(n)])
        if n > 1:
            planner.space = "product(" + ",".join(["sphere:2"] * n) + ")"
    else:
        raise ValueError(f"unknown arm kind {kind!r}")
    return planner


# -- transfer along a homotopy equivalence ----------------------------------------


def transfer_planner(
    planner: Planner,
    f: Callable[[ConfigPoint], ConfigPoint],
    g: Callable[[ConfigPoint], ConfigPoint],
    h: Callable[[float, ConfigPoint], ConfigPoint],
    geometry: Geometry,
    space: str = "transfer",
    check_points: Sequence[ConfigPoint] = (),
    tol: float = 1e-6,
    point_sampler=None,
) -> Planner:
    """Pull a planner on Y back to X along f: X -> Y, g: Y -> X.

    ``h`` is a homotopy on X with h(0, .) the identity and h(1, .) = g o f
    (checked on ``check_points`` within ``tol``).  Each rule of the source
    planner becomes a rule on X whose domain and weight are pulled back
    through f x f and whose section runs in three stages: slide the start
    along the homotopy, traverse the Y-path pushed through g, then slide
    back to the goal along the reversed homotopy.  Rule count is preserved.
    """
    for x in check_points:
        if config_distance(h(0.0, x), x) > tol:
            raise HomotopyEndpointMismatch(f"h(0, .) is not the identity at {x}")
        if config_distance(h(1.0, x), g(f(x))) > tol:
            raise HomotopyEndpointMismatch(f"h(1, .) differs from g(f(.)) at {x}")

    def make_rule(source: PlannerRule) -> PlannerRule:
        def weight(a, b):
            return source.weight(f(a), f(b))

        def signature(a, b):
            if source.cell_signature is None:
                return None
            return source.cell_signature(f(a), f(b))

        def section(a, b):
            if weight(a, b) <= 0.0:
                raise DomainMiss(f"transferred rule {source.name} does not cover this pair")
            mid = mapped_path(source.section(f(a), f(b)), g, geometry, "pushed")
            head = PathFn(lambda t: h(t, a), ((0.0, 1.0, False),), "homotopy-in")
            tail = PathFn(lambda t: h(1.0 - t, b), ((0.0, 1.0, False),), "homotopy-out")
            return concat_paths(
                [(0.0, 1.0 / 3.0, head), (1.0 / 3.0, 2.0 / 3.0, mid), (2.0 / 3.0, 1.0, tail)],
                "transfer",
            )

        return PlannerRule(f"transfer({source.name})", weight, section, cell_signature=signature)

    return Planner(
        space=space,
        geometry=geometry,
        rules=tuple(make_rule(r) for r in planner.rules),
        point_sampler=point_sampler,
    )


def punctured_plane_planner() -> Planner:
    """Circle planner transferred to the plane minus the origin.

    The radial retraction x -> x / |x| dominates the circle; the straight-line
    homotopy (1 - t) x + t x / |x| never crosses the origin, so transferred
    paths stay at positive radius.
    """
    circle = circle_planner()
    geometry = convex_geometry(2)

    def to_circle(p: ConfigPoint) -> ConfigPoint:
        v = p.parts[0]
        return ConfigPoint(circle.geometry, (v / np.linalg.norm(v),))

    def from_circle(p: ConfigPoint) -> ConfigPoint:
        return ConfigPoint(geometry, (np.asarray(p.parts[0], dtype=float),))

    def radial_homotopy(t: float, p: ConfigPoint) -> ConfigPoint:
        v = p.parts[0]
        return ConfigPoint(geometry, ((1.0 - t) * v + t * v / np.linalg.norm(v),))

    def sampler(rng: np.random.Generator) -> ConfigPoint:
        radius = rng.uniform(0.2, 2.0)
        angle = rng.uniform(0.0, 2.0 * math.pi)
        return ConfigPoint(
            geometry, (np.array([radius * math.cos(angle), radius * math.sin(angle)]),)
        )

    checks = [
        ConfigPoint(geometry, (np.array([x, y]),))
        for x, y in [(1.0, 0.0), (0.5, 0.5), (-2.0, 0.25), (0.0, -0.3)]
    ]
    return transfer_planner(
        circle,
        to_circle,
        from_circle,
        radial_homotopy,
        geometry,
        space="punctured-plane",
        check_points=checks,
        point_sampler=sampler,
    )


# -- catalog wiring and kinematics -------------------------------------------------


def build_planner(spec) -> Planner | None:
    """Planner for a catalog space expression, or None where none exists
    (higher-genus surfaces, complex projective spaces)."""
    from .catalog import parse_spec

    if isinstance(spec, str):
        spec = parse_spec(spec)
    if spec.kind == "convex":
        return straight_line_planner(spec.param)
    if spec.kind == "circle":
        return circle_planner()
    if spec.kind == "sphere":
        return sphere_planner(spec.param)
    if spec.kind == "torus":
        planner = arm_planner("planar", spec.param)
        planner.space = str(spec)
        return planner
    if spec.kind == "surface":
        if spec.param == 0:
            planner = sphere_planner(2)
        elif spec.param == 1:
            planner = arm_planner("planar", 2)
        else:
            return None
        planner.space = str(spec)
        return planner
    if spec.kind == "product":
        factors = [build_planner(f) for f in spec.factors]
        if any(p is None for p in factors):
            return None
        planner = reduce(product_planner, factors)
        planner.space = str(spec)
        return planner
    return None


def forward_kinematics(config: ConfigPoint, bar_lengths: Sequence[float]) -> list[np.ndarray]:
    """Joint positions of an arm configuration: the base at the origin, then
    one bar per factor along that factor's unit direction."""
    factors = config.geometry.factors
    if len(bar_lengths) != len(factors):
        raise LengthMismatch(
            f"{len(bar_lengths)} bar lengths for {len(factors)} joints"
        )
    dims = {f.dim for f in factors}
    if any(f.kind != "sphere" for f in factors) or not dims <= {1, 2} or len(dims) != 1:
        raise InvalidPoint("kinematics needs all-circle or all-2-sphere configurations")
    for length in bar_lengths:
        if length <= 0:
            raise ValueError(f"bar lengths must be positive, got {length}")
    joints = [np.zeros(factors[0].ambient)]
    for direction, length in zip(config.parts, bar_lengths):
        joints.append(joints[-1] + length * direction)
    return joints
