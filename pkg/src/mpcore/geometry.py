"""Closed polyhedra over the rationals and the operations the value-set
machinery needs: LP over a polyhedron, downward convex hulls (membership and
facets), complements of half-spaces, lifting, projection and intersection of
unions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from .lp import LPResult, OPTIMAL, UNBOUNDED, solve_lp

Vector = tuple[Fraction, ...]

#: default refusal threshold for facet enumeration
MAX_FACET_DIM = 8


class ResourceError(RuntimeError):
    """A configured budget or size cap was exceeded; no answer is given."""


def vec(values: Iterable) -> Vector:
    return tuple(Fraction(v) for v in values)


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    return Fraction(text)


def parse_vector(text: str) -> Vector:
    return tuple(parse_rational(t) for t in text.split(","))


def fmt_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def fmt_vector(v: Sequence[Fraction]) -> str:
    return ",".join(fmt_rational(q) for q in v)


def primitive(values: Sequence[Fraction]) -> tuple[int, ...]:
    """Positive rescaling of a rational vector to coprime integers."""
    den = reduce(lcm, (Fraction(v).denominator for v in values), 1)
    ints = [int(Fraction(v) * den) for v in values]
    g = reduce(gcd, (abs(i) for i in ints), 0)
    if g > 1:
        ints = [i // g for i in ints]
    return tuple(ints)


@dataclass(frozen=True)
class HalfSpace:
    """``normal · x <= bound``."""

    normal: Vector
    bound: Fraction

    def sort_key(self):
        # sparse constraints first, then by leading coordinates
        return (sum(1 for a in self.normal if a), tuple(-a for a in self.normal), self.bound)

    def __lt__(self, other: "HalfSpace") -> bool:
        return self.sort_key() < other.sort_key()

    def __post_init__(self):
        if not any(self.normal):
            raise ValueError("half-space normal must be non-zero")

    @classmethod
    def make(cls, normal, bound) -> "HalfSpace":
        return cls(vec(normal), Fraction(bound))

    @property
    def dim(self) -> int:
        return len(self.normal)

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.normal, x) if a), Fraction(0))

    def contains(self, x: Sequence[Fraction]) -> bool:
        return self.value(x) <= self.bound

    def normalized(self) -> "HalfSpace":
        ints = primitive((*self.normal, self.bound))
        return HalfSpace(vec(ints[:-1]), Fraction(ints[-1]))

    def __str__(self) -> str:
        terms = []
        for i, a in enumerate(self.normal):
            if not a:
                continue
            coef = "" if a == 1 else "-" if a == -1 else f"{a}*"
            terms.append(f"{coef}x{i + 1}")
        return " + ".join(terms).replace("+ -", "- ") + f" <= {self.bound}"


def complement_halfspace(h: HalfSpace) -> HalfSpace:
    """The closed opposite side ``normal · x >= bound``, in <= form."""
    return HalfSpace(tuple(-a for a in h.normal), -h.bound)


@dataclass(frozen=True)
class Polyhedron:
    dim: int
    ineqs: tuple[HalfSpace, ...] = ()
    eqs: tuple[tuple[Vector, Fraction], ...] = ()
    # set when a normalisation step found 0 <= negative
    trivially_empty: bool = False

    @classmethod
    def make(cls, dim: int, ineqs: Iterable = (), eqs: Iterable = ()) -> "Polyhedron":
        hs = []
        empty = False
        for h in ineqs:
            if not isinstance(h, HalfSpace):
                a, b = h
                a, b = vec(a), Fraction(b)
                if not any(a):
                    empty |= b < 0
                    continue
                h = HalfSpace(a, b)
            if h.dim != dim:
                raise ValueError("dimension mismatch")
            hs.append(h)
        es = []
        for a, b in eqs:
            a, b = vec(a), Fraction(b)
            if len(a) != dim:
                raise ValueError("dimension mismatch")
            if not any(a):
                empty |= b != 0
                continue
            es.append((a, b))
        return cls(dim, tuple(hs), tuple(es), empty)

    @classmethod
    def universe(cls, dim: int) -> "Polyhedron":
        return cls(dim)

    def contains(self, x: Sequence[Fraction]) -> bool:
        if self.trivially_empty:
            return False
        if not all(h.contains(x) for h in self.ineqs):
            return False
        return all(sum(a * v for a, v in zip(n, x)) == b for n, b in self.eqs)

    def intersect(self, other: "Polyhedron") -> "Polyhedron":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return Polyhedron(self.dim, self.ineqs + other.ineqs, self.eqs + other.eqs,
                          self.trivially_empty or other.trivially_empty)

    def add(self, *hs: HalfSpace) -> "Polyhedron":
        return Polyhedron(self.dim, self.ineqs + tuple(hs), self.eqs, self.trivially_empty)

    def lp_rows(self):
        A = [h.normal for h in self.ineqs]
        b = [h.bound for h in self.ineqs]
        Ae = [a for a, _ in self.eqs]
        be = [v for _, v in self.eqs]
        return A, b, Ae, be

    def is_empty(self) -> bool:
        return not lp_solve(None, self).feasible

    def normalized(self) -> "Polyhedron":
        """Primitive integer constraints, duplicates removed, sorted."""
        hs = sorted({h.normalized() for h in self.ineqs})
        es = set()
        for a, b in self.eqs:
            ints = primitive((*a, b))
            if next(v for v in ints if v) < 0:
                ints = tuple(-v for v in ints)
            es.add((vec(ints[:-1]), Fraction(ints[-1])))
        return Polyhedron(self.dim, tuple(hs), tuple(sorted(es)), self.trivially_empty)

    def key(self):
        p = self.normalized()
        return (p.ineqs, p.eqs, p.trivially_empty)

    def __str__(self) -> str:
        parts = [str(h) for h in self.ineqs]
        for a, b in self.eqs:
            parts.append(str(HalfSpace(a, b)).replace("<=", "="))
        return "{" + ", ".join(parts) + "}"


@dataclass(frozen=True)
class PolyUnion:
    dim: int
    parts: tuple[Polyhedron, ...] = field(default_factory=tuple)

    def contains(self, x: Sequence[Fraction]) -> bool:
        return any(p.contains(x) for p in self.parts)

    def is_empty(self) -> bool:
        return all(p.is_empty() for p in self.parts)

    def normalized(self) -> "PolyUnion":
        seen = {}
        for p in self.parts:
            if p.trivially_empty or p.is_empty():
                continue
            q = p.normalized()
            seen.setdefault(q.key(), q)
        return PolyUnion(self.dim, tuple(seen[k] for k in sorted(seen)))


def lp_solve(objective: Sequence | None, poly: Polyhedron) -> LPResult:
    """Maximise ``objective`` over ``poly`` (any feasible point if None)."""
    if poly.trivially_empty:
        return LPResult("infeasible")
    A, b, Ae, be = poly.lp_rows()
    return solve_lp(objective, A, b, Ae, be, nvars=poly.dim)


def contained_in(p: Polyhedron, q: Polyhedron) -> bool:
    """Exact test of ``p ⊆ q``."""
    if p.trivially_empty or p.is_empty():
        return True
    for h in q.ineqs:
        r = lp_solve(h.normal, p)
        if r.status == UNBOUNDED or r.value > h.bound:
            return False
    for a, b in q.eqs:
        for s in (1, -1):
            r = lp_solve(tuple(s * v for v in a), p)
            if r.status == UNBOUNDED or r.value > s * b:
                return False
    return True


# --- downward convex hulls -------------------------------------------------

def _check_points(points: Sequence[Sequence[Fraction]]) -> list[Vector]:
    if not points:
        raise ValueError("empty point list")
    pts = [vec(p) for p in points]
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise ValueError("dimension mismatch")
    return pts


def maximal_points(points: Sequence[Vector]) -> list[Vector]:
    """Points not weakly dominated by another point; sorted, deduplicated."""
    pts = sorted(set(points), reverse=True)
    out: list[Vector] = []
    for p in pts:
        if not any(all(a >= b for a, b in zip(q, p)) for q in out):
            out.append(p)
    return sorted(out)


def down_conv_margin(points: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Fraction:
    """Largest t with ``x + t·1`` in the downward convex hull of ``points``."""
    pts = _check_points(points)
    x = vec(x)
    d = len(x)
    if len(pts[0]) != d:
        raise ValueError("dimension mismatch")
    k = len(pts)
    # variables: lambda_1..lambda_k >= 0, t free; x_i + t <= sum lambda_p p_i
    A = []
    b = []
    for i in range(d):
        A.append([-p[i] for p in pts] + [Fraction(1)])
        b.append(-x[i])
    res = solve_lp([0] * k + [1], A, b, [[1] * k + [0]], [1], [True] * k + [False])
    return res.value


def down_conv_membership(points: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> bool:
    """Is ``x`` below some convex combination of ``points``?"""
    return down_conv_margin(points, x) >= 0


def hrep_down_conv(points: Sequence[Sequence[Fraction]], max_dim: int = MAX_FACET_DIM) -> Polyhedron:
    """Facets of the downward convex hull, by double description.

    Valid inequalities ``a·x <= b`` form the pointed cone
    ``{a >= 0, b - a·p >= 0 for all p}``; its extreme rays with ``a != 0``
    are exactly the facets.
    """
    pts = _check_points(points)
    d = len(pts[0])
    if d > max_dim:
        raise ResourceError(f"facet enumeration refused in dimension {d} (cap {max_dim})")
    pts = maximal_points(pts)
    if len(pts) == 1:
        p = pts[0]
        hs = [HalfSpace(tuple(Fraction(int(i == j)) for j in range(d)), p[i]) for i in range(d)]
        return Polyhedron(d, tuple(sorted(h.normalized() for h in hs)))
    p0 = pts[0]
    # constraint ids: 0..d-1 are a_j >= 0, d+k is the k-th point
    def g(ray, k):
        p = pts[k]
        return ray[d] - sum(a * v for a, v in zip(ray[:d], p) if a)

    rays: list[tuple[tuple[Fraction, ...], frozenset]] = []
    for j in range(d):
        r = tuple(Fraction(int(i == j)) for i in range(d)) + (p0[j],)
        zeros = frozenset(i for i in range(d) if i != j) | {d}
        rays.append((r, zeros))
    rays.append((tuple([Fraction(0)] * d) + (Fraction(1),), frozenset(range(d))))

    for k in range(1, len(pts)):
        cid = d + k
        vals = [g(r, k) for r, _ in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        new = [(rays[i][0], rays[i][1] | {cid}) for i in zer]
        new += [rays[i] for i in pos]
        for i in pos:
            for j in neg:
                common = rays[i][1] & rays[j][1]
                if any(common <= rays[h][1] for h in range(len(rays)) if h != i and h != j):
                    continue
                vi, vj = vals[i], vals[j]
                r = tuple(vi * b - vj * a for a, b in zip(rays[i][0], rays[j][0]))
                r = vec(primitive(r))
                new.append((r, common | {cid}))
        rays = new

    hs = set()
    for r, _ in rays:
        if any(r[:d]):
            hs.add(HalfSpace(r[:d], r[d]).normalized())
    return Polyhedron(d, tuple(sorted(hs)))


# --- lifting and projection ------------------------------------------------

def inclusion_map(poly: Polyhedron, coords: Sequence[int], n: int) -> Polyhedron:
    """Lift a polyhedron over coordinates ``coords`` (0-based) into R^n."""
    if len(coords) != poly.dim:
        raise ValueError("coordinate list does not match polyhedron dimension")
    if any(not 0 <= c < n for c in coords) or len(set(coords)) != len(coords):
        raise IndexError("coordinate out of range")

    def lift(a):
        out = [Fraction(0)] * n
        for c, v in zip(coords, a):
            out[c] = v
        return tuple(out)

    return Polyhedron(
        n,
        tuple(HalfSpace(lift(h.normal), h.bound) for h in poly.ineqs),
        tuple((lift(a), b) for a, b in poly.eqs),
        poly.trivially_empty,
    )


def lift_halfspace(h: HalfSpace, coords: Sequence[int], n: int) -> HalfSpace:
    out = [Fraction(0)] * n
    for c, v in zip(coords, h.normal):
        out[c] = v
    return HalfSpace(tuple(out), h.bound)


def remove_redundant(poly: Polyhedron) -> Polyhedron:
    """Drop inequalities implied by the others (exact LP test)."""
    if poly.trivially_empty:
        return poly
    poly = poly.normalized()
    if poly.is_empty():
        return Polyhedron(poly.dim, (), (), True)
    keep = list(poly.ineqs)
    i = 0
    while i < len(keep):
        h = keep[i]
        rest = Polyhedron(poly.dim, tuple(keep[:i] + keep[i + 1:]), poly.eqs)
        r = lp_solve(h.normal, rest)
        if r.status == OPTIMAL and r.value <= h.bound:
            keep.pop(i)
        else:
            i += 1
    return Polyhedron(poly.dim, tuple(keep), poly.eqs)


def project(poly: Polyhedron, coords: Sequence[int]) -> Polyhedron:
    """Fourier-Motzkin elimination of every coordinate not in ``coords``.

    The result lives in R^len(coords), in the order given.
    """
    coords = list(coords)
    if not coords:
        raise ValueError("projection onto an empty coordinate set")
    if poly.trivially_empty:
        return Polyhedron(len(coords), (), (), True)
    rows = [(list(h.normal), h.bound) for h in poly.ineqs]
    for a, b in poly.eqs:
        rows.append((list(a), b))
        rows.append(([-v for v in a], -b))
    for e in range(poly.dim):
        if e in coords:
            continue
        pos = [r for r in rows if r[0][e] > 0]
        neg = [r for r in rows if r[0][e] < 0]
        rows = [r for r in rows if r[0][e] == 0]
        for ap, bp in pos:
            for an, bn in neg:
                s, t = -an[e], ap[e]
                a = [s * u + t * v for u, v in zip(ap, an)]
                a[e] = Fraction(0)
                rows.append((a, s * bp + t * bn))
        rows = _dedupe_rows(rows, poly.dim)
        if rows is None:
            return Polyhedron(len(coords), (), (), True)
    out = Polyhedron.make(len(coords), [([a[c] for c in coords], b) for a, b in rows])
    return remove_redundant(out)


def _dedupe_rows(rows, dim):
    seen = {}
    for a, b in rows:
        if not any(a):
            if b < 0:
                return None
            continue
        h = HalfSpace(vec(a), b).normalized()
        key = h.normal
        if key not in seen or h.bound < seen[key]:
            seen[key] = h.bound
    return [(list(k), v) for k, v in seen.items()]


# --- unions ----------------------------------------------------------------

def distribute(unions: Sequence[PolyUnion], prune_contained: bool = True) -> PolyUnion:
    """Intersection of unions, as one union (intersection distributed over union)."""
    if not unions:
        raise ValueError("no unions to intersect")
    dim = unions[0].dim
    if any(u.dim != dim for u in unions):
        raise ValueError("dimension mismatch")
    current = [Polyhedron.universe(dim)]
    for u in unions:
        nxt = {}
        for p in current:
            for q in u.parts:
                r = p.intersect(q)
                if r.trivially_empty or r.is_empty():
                    continue
                r = remove_redundant(r)
                nxt.setdefault(r.key(), r)
        current = [nxt[k] for k in sorted(nxt)]
        if prune_contained:
            current = _prune_contained(current)
        if not current:
            break
    return PolyUnion(dim, tuple(current))


def _prune_contained(parts: list[Polyhedron]) -> list[Polyhedron]:
    out = []
    for i, p in enumerate(parts):
        if any(j != i and contained_in(p, q) and not (j > i and contained_in(q, p))
               for j, q in enumerate(parts)):
            continue
        out.append(p)
    return out
