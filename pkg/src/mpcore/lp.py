"""Exact rational linear programming.

Two-phase primal simplex on a dense tableau with Bland's lowest-index rule,
so every run is reproducible and cannot cycle. Arithmetic is done in
``gmpy2.mpq``; inputs and outputs are ``fractions.Fraction``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
OPTIMAL = "optimal"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None
    # multipliers for (ub rows..., eq rows...) certifying optimality
    dual: tuple[Fraction, ...] | None = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


class LPStats:
    """Process-wide counter of solved programs (reported by the CLI)."""

    solved = 0


def _q(v) -> mpq:
    return v if isinstance(v, type(mpq())) else mpq(v)


def _frac(v: mpq) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


class _Tableau:
    __slots__ = ("rows", "basis", "ncols")

    def __init__(self, rows, basis, ncols):
        self.rows = rows
        self.basis = basis
        self.ncols = ncols

    def pivot(self, r: int, c: int, objs) -> None:
        rows = self.rows
        prow = rows[r]
        inv = 1 / prow[c]
        if inv != 1:
            prow = [v * inv for v in prow]
            rows[r] = prow
        nz = [k for k, v in enumerate(prow) if v]
        for i, row in enumerate(rows):
            if i == r:
                continue
            f = row[c]
            if f:
                for k in nz:
                    row[k] -= f * prow[k]
        for obj in objs:
            f = obj[c]
            if f:
                for k in nz:
                    obj[k] -= f * prow[k]
        self.basis[r] = c

    def run(self, obj, allowed: int, extra_objs=()) -> bool:
        """Maximise; obj holds reduced costs (last entry = -value). False if unbounded."""
        rows, basis = self.rows, self.basis
        objs = (obj, *extra_objs)
        while True:
            enter = -1
            for j in range(allowed):
                if obj[j] > 0:
                    enter = j
                    break
            if enter < 0:
                return True
            best = -1
            best_ratio = None
            for i, row in enumerate(rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    if (best < 0 or ratio < best_ratio
                            or (ratio == best_ratio and basis[i] < basis[best])):
                        best, best_ratio = i, ratio
            if best < 0:
                return False
            self.pivot(best, enter, objs)


def solve_lp(
    c: Sequence | None,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    nonneg: Sequence[bool] | None = None,
    nvars: int | None = None,
) -> LPResult:
    """Maximise ``c·x`` s.t. ``A_ub x <= b_ub`` and ``A_eq x = b_eq``.

    ``nonneg[j]`` marks variable j as constrained to be >= 0; other variables
    are free. With ``c=None`` any feasible point is returned (value 0).
    """
    LPStats.solved += 1
    if nvars is None:
        if c is not None:
            nvars = len(c)
        elif A_ub:
            nvars = len(A_ub[0])
        elif A_eq:
            nvars = len(A_eq[0])
        else:
            nvars = 0
    if nonneg is None:
        nonneg = [False] * nvars
    if len(nonneg) != nvars:
        raise ValueError("nonneg mask has wrong length")
    for row in (*A_ub, *A_eq):
        if len(row) != nvars:
            raise ValueError("constraint row has wrong length")
    if len(A_ub) != len(b_ub) or len(A_eq) != len(b_eq):
        raise ValueError("constraint/rhs length mismatch")

    # structural columns: x_j (or x_j^+), then x_j^- for free variables
    colmap: list[tuple[int, int]] = []  # per variable: (pos col, neg col or -1)
    ncols = 0
    for j in range(nvars):
        colmap.append((ncols, -1))
        ncols += 1
    for j in range(nvars):
        if not nonneg[j]:
            colmap[j] = (colmap[j][0], ncols)
            ncols += 1
    nstruct = ncols
    m_ub, m_eq = len(A_ub), len(A_eq)
    m = m_ub + m_eq
    nslack = m_ub
    # every row also owns an identity column (slack or artificial), used to
    # read off B^-1 for the dual certificate
    slack0 = nstruct
    art0 = nstruct + nslack
    total = art0 + m

    rows = []
    basis = []
    signs = []
    artificial_rows = []
    for i in range(m):
        src = A_ub[i] if i < m_ub else A_eq[i - m_ub]
        rhs = _q(b_ub[i] if i < m_ub else b_eq[i - m_ub])
        row = [mpq(0)] * (total + 1)
        for j, v in enumerate(src):
            if v:
                v = _q(v)
                p, n = colmap[j]
                row[p] = v
                if n >= 0:
                    row[n] = -v
        if i < m_ub:
            row[slack0 + i] = mpq(1)
        sign = 1
        if rhs < 0:
            sign = -1
            row = [-v for v in row]
            rhs = -rhs
        row[art0 + i] = mpq(1)
        row[-1] = rhs
        signs.append(sign)
        rows.append(row)
        if i < m_ub and sign == 1:
            basis.append(slack0 + i)
        else:
            basis.append(art0 + i)
            artificial_rows.append(i)
    tab = _Tableau(rows, basis, total)

    # phase 1: maximise -sum(artificials in basis)
    if artificial_rows:
        obj1 = [mpq(0)] * (total + 1)
        for i in artificial_rows:
            for k, v in enumerate(rows[i]):
                if v:
                    obj1[k] += v
        for i in range(m):
            obj1[art0 + i] = mpq(0)
        tab.run(obj1, art0)
        if obj1[-1] != 0:
            return LPResult(INFEASIBLE)
        # drive remaining artificials out of the basis
        for i in range(m):
            if basis[i] >= art0:
                row = rows[i]
                for j in range(art0):
                    if row[j]:
                        tab.pivot(i, j, (obj1,))
                        break

    # phase 2
    cq = [mpq(0)] * nvars if c is None else [_q(v) for v in c]
    obj = [mpq(0)] * (total + 1)
    for j in range(nvars):
        p, n = colmap[j]
        obj[p] = cq[j]
        if n >= 0:
            obj[n] = -cq[j]
    for i in range(m):
        b = basis[i]
        cb = obj[b] if b < art0 else mpq(0)
        if cb:
            row = rows[i]
            for k, v in enumerate(row):
                if v:
                    obj[k] -= cb * v
    # basic columns must have zero reduced cost
    for i in range(m):
        obj[basis[i]] = mpq(0)
    if not tab.run(obj, art0):
        return LPResult(UNBOUNDED)

    colval = [mpq(0)] * total
    for i in range(m):
        colval[basis[i]] = rows[i][-1]
    point = []
    for j in range(nvars):
        p, n = colmap[j]
        v = colval[p] - (colval[n] if n >= 0 else 0)
        point.append(_frac(v))
    value = sum((cq[j] * _q(point[j]) for j in range(nvars)), mpq(0))
    # y_i = -(reduced cost of the identity column of row i), undo row sign
    dual = tuple(_frac(-obj[art0 + i] * signs[i]) for i in range(m))
    return LPResult(OPTIMAL, _frac(value), tuple(point), dual)


def check_certificate(c, A_ub, b_ub, A_eq, b_eq, nonneg, res: LPResult) -> bool:
    """Verify primal feasibility, dual feasibility and equal objective values."""
    if res.status != OPTIMAL:
        return False
    x = res.point
    n = len(x)
    for row, b in zip(A_ub, b_ub):
        if sum(Fraction(a) * v for a, v in zip(row, x)) > b:
            return False
    for row, b in zip(A_eq, b_eq):
        if sum(Fraction(a) * v for a, v in zip(row, x)) != b:
            return False
    for j in range(n):
        if nonneg[j] and x[j] < 0:
            return False
    y = res.dual
    m_ub = len(A_ub)
    if any(v < 0 for v in y[:m_ub]):
        return False
    rows = [*A_ub, *A_eq]
    cc = [Fraction(0)] * n if c is None else [Fraction(v) for v in c]
    for j in range(n):
        s = sum((Fraction(rows[i][j]) * y[i] for i in range(len(rows))), Fraction(0))
        if nonneg[j]:
            if s < cc[j]:
                return False
        elif s != cc[j]:
            return False
    dual_obj = sum((Fraction(b) * yi for b, yi in zip([*b_ub, *b_eq], y)), Fraction(0))
    return dual_obj == res.value
