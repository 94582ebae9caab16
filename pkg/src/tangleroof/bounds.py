"""Convex-roof upper bounds: characteristic curves, linearized and pivot bounds.

Every value reported here is certified by an explicit pure-state
decomposition of rho(p). Inside the axis zero interval the bound is exactly
zero (interval witnesses); outside it, the linearized bound mixes a pure
endpoint with an interval endpoint, and the pivot bound mixes a zero-tangle
anchor inside the polytope with the boundary state where the ray through
rho(p) exits the sphere. The lower convex envelope of pivot samples is again
an upper bound because decompositions of two mixtures mix into a
decomposition of any intermediate mixture.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bloch import (
    AxisInterval,
    ZeroPolytope,
    axis_point,
    axis_zero_interval,
    build_polytope,
    state_from_bloch,
)
from .invariants import c3, c3_many
from .pencil import (
    IdenticallyZeroPencilError,
    PencilPolynomial,
    ZeroSet,
    pencil_polynomial,
    zero_set,
)
from .states import PureState, RankTwoMixture

__all__ = [
    "Anchor",
    "BoundCurve",
    "SpanGeometry",
    "span_geometry",
    "characteristic_curve",
    "linearized_upper_bound",
    "default_anchors",
    "pivot_upper_bound",
    "convex_envelope",
    "BoundReport",
    "upper_bound_report",
]

GRID_SIZE_DEFAULT = 401


@dataclass(frozen=True, eq=False)
class SpanGeometry:
    """Zero-set geometry of a rank-two span, shared across bound evaluations."""

    pencil: PencilPolynomial
    zeros: Optional[ZeroSet]
    polytope: Optional[ZeroPolytope]
    interval: Optional[AxisInterval]
    identically_zero: bool
    c3_psi1: float
    c3_psi2: float


def span_geometry(mix: RankTwoMixture) -> SpanGeometry:
    """Pencil, zero set, polytope, and axis interval of the mixture's span."""
    poly = pencil_polynomial(mix.psi1, mix.psi2)
    try:
        zeros = zero_set(mix)
    except IdenticallyZeroPencilError:
        return SpanGeometry(poly, None, None, None, True, 0.0, 0.0)
    polytope = build_polytope(zeros)
    interval = axis_zero_interval(polytope)
    return SpanGeometry(
        poly, zeros, polytope, interval, False, c3(mix.psi1), c3(mix.psi2)
    )


@dataclass(frozen=True, eq=False)
class BoundCurve:
    """Piecewise-linear curve over p in [0, 1] with per-knot provenance.

    Provenance labels: "endpoint" (pure eigenstate ends), "zero-interval"
    (knots where the bound is exactly zero), "pivot" (anchor ray knots).
    """

    knots: np.ndarray
    provenance: tuple

    def __post_init__(self):
        k = np.asarray(self.knots, dtype=float)
        if k.ndim != 2 or k.shape[1] != 2 or k.shape[0] < 2:
            raise ValueError("knots must be an (m, 2) array with m >= 2")
        if np.any(np.diff(k[:, 0]) <= 0):
            raise ValueError("knot abscissae must be strictly increasing")
        k.setflags(write=False)
        object.__setattr__(self, "knots", k)
        object.__setattr__(self, "provenance", tuple(self.provenance))

    def __call__(self, p):
        return np.interp(p, self.knots[:, 0], self.knots[:, 1])


@dataclass(frozen=True, eq=False)
class Anchor:
    """Zero-tangle point inside the polytope, with its achieving decomposition.

    ``construction`` is one of "vertex", "pair-mixture", "axis-interval-point",
    or "face-grid"; ``face``/``weights`` give the convex combination of
    polytope vertices realizing the point, and ``certificate_c3`` is the
    decomposition average of c3 over the face states (zero up to root noise).
    """

    point: np.ndarray
    construction: str
    face: tuple
    weights: np.ndarray
    certificate_c3: float

    def __post_init__(self):
        pt = np.asarray(self.point, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        pt.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "point", pt)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "face", tuple(int(i) for i in self.face))


def characteristic_curve(mix: RankTwoMixture, phi: float, grid: Sequence[float]) -> np.ndarray:
    """c3 along sqrt(p) psi1 - e^{i phi} sqrt(1-p) psi2; rows (p, c3)."""
    ps = np.asarray(grid, dtype=float)
    amp1 = np.sqrt(ps)[:, None] * mix.psi1.amplitudes[None, :]
    amp2 = np.sqrt(1.0 - ps)[:, None] * mix.psi2.amplitudes[None, :]
    amps = amp1 - np.exp(1j * phi) * amp2
    return np.column_stack([ps, c3_many(amps)])


def _linearized_value(geom: SpanGeometry, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if geom.identically_zero:
        return np.zeros_like(p)
    if geom.interval is None:
        return p * geom.c3_psi1 + (1.0 - p) * geom.c3_psi2
    lo, hi = geom.interval.p_low, geom.interval.p_high
    out = np.zeros_like(p)
    if lo > 0.0:
        left = p < lo
        out = np.where(left, geom.c3_psi2 * (lo - p) / lo, out)
    if hi < 1.0:
        right = p > hi
        out = np.where(right, geom.c3_psi1 * (p - hi) / (1.0 - hi), out)
    return out


def linearized_upper_bound(
    mix: RankTwoMixture, geometry: Optional[SpanGeometry] = None
) -> BoundCurve:
    """Piecewise-linear bound through the pure ends and the zero interval.

    Knots: (0, c3(psi2)), (p_low, 0), (p_high, 0), (1, c3(psi1)); without an
    axis interval the curve is the single chord between the pure ends, and an
    identically vanishing pencil gives the flat zero curve.
    """
    geom = geometry if geometry is not None else span_geometry(mix)
    if geom.identically_zero:
        return BoundCurve(
            np.array([[0.0, 0.0], [1.0, 0.0]]), ("zero-interval", "zero-interval")
        )
    entries = [(0.0, geom.c3_psi2, "endpoint"), (1.0, geom.c3_psi1, "endpoint")]
    if geom.interval is not None:
        entries.insert(1, (geom.interval.p_low, 0.0, "zero-interval"))
        entries.insert(2, (geom.interval.p_high, 0.0, "zero-interval"))
    entries.sort(key=lambda e: e[0])
    knots, prov = [], []
    for p, v, label in entries:
        if knots and abs(p - knots[-1][0]) <= 1e-15:
            if v < knots[-1][1]:
                knots[-1] = (p, v)
                prov[-1] = label
            continue
        knots.append((p, v))
        prov.append(label)
    return BoundCurve(np.array(knots), tuple(prov))


def _conjugate_pairs(vertices: np.ndarray):
    pairs = []
    k = vertices.shape[0]
    for i in range(k):
        if vertices[i, 1] <= 1e-9:
            continue
        mirror = vertices[i] * np.array([1.0, -1.0, 1.0])
        for j in range(k):
            if j != i and np.linalg.norm(vertices[j] - mirror) <= 1e-8:
                pairs.append((i, j))
                break
    return pairs


def default_anchors(
    mix: RankTwoMixture, geometry: Optional[SpanGeometry] = None
) -> tuple:
    """Anchor family: vertices, conjugate-pair mixtures, axis interval points,
    and a barycentric grid over every triangle face."""
    geom = geometry if geometry is not None else span_geometry(mix)
    if geom.polytope is None:
        return ()
    poly = geom.polytope
    v = poly.vertices
    vertex_c3 = np.array([c3(s) for s in poly.states])

    candidates = []

    def add(point, construction, face, weights):
        w = np.asarray(weights, dtype=float)
        cert = float(w @ vertex_c3[list(face)])
        candidates.append(Anchor(point, construction, face, w, cert))

    for i in range(poly.n_vertices):
        add(v[i], "vertex", (i,), [1.0])
    for i, j in _conjugate_pairs(v):
        add(0.5 * (v[i] + v[j]), "pair-mixture", (i, j), [0.5, 0.5])
    if geom.interval is not None:
        for p, wit in (
            (geom.interval.p_low, geom.interval.witness_low),
            (geom.interval.p_high, geom.interval.witness_high),
        ):
            add(axis_point(p), "axis-interval-point", wit.face, wit.weights)
    for face in poly.faces:
        if len(face) != 3:
            continue
        sub = v[list(face)]
        for a in range(5):
            for b in range(5 - a):
                c = 4 - a - b
                w = np.array([a, b, c], dtype=float) / 4.0
                add(w @ sub, "face-grid", face, w)

    seen = {}
    for anchor in candidates:
        key = tuple(np.round(anchor.point, 12))
        if key not in seen:
            seen[key] = anchor
    return tuple(seen.values())


def _pivot_candidates(mix: RankTwoMixture, ps: np.ndarray, anchors: tuple):
    """Candidate bound lam * c3(boundary) per (grid point, anchor)."""
    pts = np.array([a.point for a in anchors])
    targets = np.column_stack(
        [np.zeros_like(ps), np.zeros_like(ps), 2.0 * ps - 1.0]
    )
    n_p, n_a = ps.shape[0], pts.shape[0]
    d = targets[:, None, :] - pts[None, :, :]
    dd = np.sum(d * d, axis=2)
    c = np.sum(pts[None, :, :] * d, axis=2)
    disc = c * c + (1.0 - np.sum(pts * pts, axis=1))[None, :] * dd
    denom = np.sqrt(np.clip(disc, 0.0, None)) - c
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.where((dd > 0) & (denom > 0), dd / denom, np.nan)
        boundary = targets[:, None, :] + d * (1.0 / lam - 1.0)[:, :, None]
    p_b = np.clip(0.5 * (1.0 + boundary[:, :, 2]), 0.0, 1.0)
    phase = np.arctan2(boundary[:, :, 1], boundary[:, :, 0])
    amps = (
        np.sqrt(p_b)[:, :, None] * mix.psi1.amplitudes[None, None, :]
        + (np.exp(1j * phase) * np.sqrt(1.0 - p_b))[:, :, None]
        * mix.psi2.amplitudes[None, None, :]
    )
    vals = c3_many(amps.reshape(n_p * n_a, 8)).reshape(n_p, n_a)
    lam = np.minimum(lam, 1.0)
    cand = np.where(np.isfinite(lam), lam * vals, np.inf)
    return cand, lam, boundary


def pivot_upper_bound(
    mix: RankTwoMixture,
    p: float,
    anchors: Optional[tuple] = None,
    geometry: Optional[SpanGeometry] = None,
) -> float:
    """Best anchor-ray bound at p, never above the linearized bound.

    Zero inside the axis interval; with an empty anchor set the linearized
    value is returned unchanged.
    """
    geom = geometry if geometry is not None else span_geometry(mix)
    lin = float(_linearized_value(geom, float(p)))
    if geom.identically_zero:
        return 0.0
    if geom.interval is not None and geom.interval.p_low <= p <= geom.interval.p_high:
        return 0.0
    if anchors is None:
        anchors = default_anchors(mix, geom)
    if len(anchors) == 0:
        return lin
    cand = _pivot_candidates(mix, np.array([float(p)]), anchors)[0]
    return float(min(lin, np.min(cand[0])))


def convex_envelope(samples: Sequence) -> BoundCurve:
    """Greatest convex minorant of sampled (p, value) points.

    Piecewise linear with knots at the lower convex hull vertices of the
    sample set; needs at least two samples.
    """
    pts = np.asarray(samples, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise ValueError("need at least two (p, value) samples")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    keep = np.ones(pts.shape[0], dtype=bool)
    keep[1:] = np.diff(pts[:, 0]) > 0
    pts = pts[keep]
    if pts.shape[0] < 2:
        raise ValueError("samples collapse to a single abscissa")
    hull = []
    for q in pts:
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (a[0] - o[0]) * (q[1] - o[1]) - (a[1] - o[1]) * (q[0] - o[0])
            if cross <= 0.0:
                hull.pop()
            else:
                break
        hull.append(q)
    knots = np.array(hull)
    prov = []
    for idx in range(knots.shape[0]):
        if idx == 0 or idx == knots.shape[0] - 1:
            prov.append("endpoint")
        elif abs(knots[idx, 1]) <= 1e-12:
            prov.append("zero-interval")
        else:
            prov.append("pivot")
    return BoundCurve(knots, tuple(prov))


@dataclass(frozen=True, eq=False)
class BoundReport:
    """Grid evaluation of the linearized, pivot, and envelope bounds.

    ``achieving`` labels which family realizes the reported bound at each
    grid point; ``p_left``/``p_right`` are the envelope knots adjacent to
    the zero interval (where the envelope departs from the straight chords).
    """

    mix: RankTwoMixture
    geometry: SpanGeometry
    anchors: tuple
    grid: np.ndarray
    linearized: np.ndarray
    pivot: np.ndarray
    envelope: np.ndarray
    linearized_curve: BoundCurve
    envelope_curve: BoundCurve
    achieving: tuple
    p_left: Optional[float]
    p_right: Optional[float]

    def __post_init__(self):
        for name in ("grid", "linearized", "pivot", "envelope"):
            a = np.asarray(getattr(self, name), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def identically_zero(self) -> bool:
        return self.geometry.identically_zero

    @property
    def interval(self) -> Optional[AxisInterval]:
        return self.geometry.interval

    def rows(self):
        """(p, linearized, pivot, envelope, achieving) per grid point."""
        for i in range(self.grid.shape[0]):
            yield (
                float(self.grid[i]),
                float(self.linearized[i]),
                float(self.pivot[i]),
                float(self.envelope[i]),
                self.achieving[i],
            )

    def _interval_decomposition(self, p: float):
        geom = self.geometry
        interval, poly = geom.interval, geom.polytope
        lo, hi = interval.p_low, interval.p_high
        if hi - lo <= 1e-15:
            wit = interval.witness_low
            states = tuple(poly.states[i] for i in wit.face)
            return np.asarray(wit.weights, dtype=float), states
        mu = (hi - p) / (hi - lo)
        weights, states = [], []
        for scale, wit in ((mu, interval.witness_low), (1.0 - mu, interval.witness_high)):
            for idx, w in zip(wit.face, wit.weights):
                if scale * w > 1e-15:
                    weights.append(scale * w)
                    states.append(poly.states[idx])
        return np.array(weights), tuple(states)

    def _knot_certificate(self, p: float):
        geom = self.geometry
        interval = geom.interval
        if interval is not None and interval.p_low - 1e-12 <= p <= interval.p_high + 1e-12:
            return self._interval_decomposition(min(max(p, interval.p_low), interval.p_high))
        if p <= 1e-12:
            return np.array([1.0]), (self.mix.psi2,)
        if p >= 1.0 - 1e-12:
            return np.array([1.0]), (self.mix.psi1,)
        lin = float(_linearized_value(geom, p))
        cand, lam, boundary = _pivot_candidates(self.mix, np.array([p]), self.anchors)
        best = int(np.argmin(cand[0]))
        if np.min(cand[0]) < lin - 1e-15:
            anchor = self.anchors[best]
            lam_b = float(lam[0, best])
            bstate = state_from_bloch(self.mix, boundary[0, best])
            weights = [lam_b] + [(1.0 - lam_b) * w for w in anchor.weights]
            states = (bstate,) + tuple(
                geom.polytope.states[i] for i in anchor.face
            )
            return np.array(weights), states
        if interval is None:
            return np.array([p, 1.0 - p]), (self.mix.psi1, self.mix.psi2)
        if p > interval.p_high:
            theta = (p - interval.p_high) / (1.0 - interval.p_high)
            w_in, s_in = self._interval_decomposition(interval.p_high)
            pure = self.mix.psi1
        else:
            theta = (interval.p_low - p) / interval.p_low
            w_in, s_in = self._interval_decomposition(interval.p_low)
            pure = self.mix.psi2
        return (
            np.concatenate([[theta], (1.0 - theta) * w_in]),
            (pure,) + s_in,
        )

    def decomposition_at(self, p: float):
        """Explicit decomposition (weights, states) achieving the envelope at p.

        The weighted c3 average of the returned states equals the envelope
        value and the weighted projector sum reconstructs rho(p).
        """
        p = min(max(float(p), 0.0), 1.0)
        geom = self.geometry
        if geom.identically_zero:
            return np.array([p, 1.0 - p]), (self.mix.psi1, self.mix.psi2)
        interval = geom.interval
        if interval is not None and interval.p_low - 1e-12 <= p <= interval.p_high + 1e-12:
            return self._interval_decomposition(min(max(p, interval.p_low), interval.p_high))
        xs = self.envelope_curve.knots[:, 0]
        j = int(np.searchsorted(xs, p, side="right"))
        j = min(max(j, 1), xs.shape[0] - 1)
        left, right = float(xs[j - 1]), float(xs[j])
        theta = 1.0 if right <= left else (right - p) / (right - left)
        w_l, s_l = self._knot_certificate(left)
        w_r, s_r = self._knot_certificate(right)
        weights = np.concatenate([theta * w_l, (1.0 - theta) * w_r])
        states = s_l + s_r
        keep = weights > 1e-15
        return weights[keep], tuple(s for s, k in zip(states, keep) if k)


def upper_bound_report(
    mix: RankTwoMixture,
    grid_size: int = GRID_SIZE_DEFAULT,
    anchors: Optional[tuple] = None,
) -> BoundReport:
    """Evaluate all three bounds on a uniform grid (plus the interval knots)."""
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    geom = span_geometry(mix)
    grid = np.linspace(0.0, 1.0, grid_size)
    if geom.interval is not None:
        grid = np.unique(
            np.concatenate([grid, [geom.interval.p_low, geom.interval.p_high]])
        )
    lin_curve = linearized_upper_bound(mix, geom)
    lin_vals = _linearized_value(geom, grid)
    if geom.identically_zero:
        zeros = np.zeros_like(grid)
        env_curve = BoundCurve(
            np.array([[0.0, 0.0], [1.0, 0.0]]), ("zero-interval", "zero-interval")
        )
        return BoundReport(
            mix, geom, (), grid, zeros, zeros.copy(), zeros.copy(), lin_curve,
            env_curve, tuple(["zero-interval"] * grid.shape[0]), None, None,
        )
    anchor_set = default_anchors(mix, geom) if anchors is None else tuple(anchors)
    if len(anchor_set) == 0:
        pivot_vals = lin_vals.copy()
    else:
        cand = _pivot_candidates(mix, grid, anchor_set)[0]
        pivot_vals = np.minimum(lin_vals, np.min(cand, axis=1))
    if geom.interval is not None:
        inside = (grid >= geom.interval.p_low - 1e-12) & (
            grid <= geom.interval.p_high + 1e-12
        )
        pivot_vals = np.where(inside, 0.0, pivot_vals)
    env_curve = convex_envelope(np.column_stack([grid, pivot_vals]))
    env_vals = env_curve(grid)
    p_left = p_right = None
    if geom.interval is not None:
        xs = env_curve.knots[:, 0]
        after = xs[xs > geom.interval.p_high + 1e-9]
        before = xs[xs < geom.interval.p_low - 1e-9]
        p_right = float(after[0]) if after.size else None
        p_left = float(before[-1]) if before.size else None
    achieving = []
    for i in range(grid.shape[0]):
        if geom.interval is not None and (
            geom.interval.p_low - 1e-12 <= grid[i] <= geom.interval.p_high + 1e-12
        ):
            achieving.append("zero-interval")
        elif env_vals[i] < lin_vals[i] - 1e-12:
            achieving.append("pivot")
        else:
            achieving.append("linearized")
    return BoundReport(
        mix, geom, anchor_set, grid, lin_vals, pivot_vals, env_vals,
        lin_curve, env_curve, tuple(achieving), p_left, p_right,
    )
