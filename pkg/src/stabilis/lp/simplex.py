"""Exact rational primal simplex.

Two-phase tableau method; pricing by largest reduced cost with a fallback
to Bland's rule whenever degenerate pivots stall.  Arithmetic inside the
tableau uses GMP rationals; inputs and outputs are ``Fraction``.  Rows are stored sparsely as
dicts so the wide, mostly-zero programs produced by lift-and-project
relaxations stay manageable.  A light presolve fixes variables that some
single-variable row forces to zero and drops rows that are empty or repeat
an earlier row; neither step changes the feasible region.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from gmpy2 import mpq

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_RELATIONS = ("<=", ">=", "=")
STALL_LIMIT = 50


@dataclass(frozen=True)
class Constraint:
    coeffs: Mapping[Hashable, Fraction]
    relation: str
    rhs: Fraction


@dataclass
class LinearProgram:
    """``maximize`` or ``minimize`` a linear objective over bounded variables.

    Bounds default to ``[0, None]`` (no upper bound).  Lower bounds must be
    finite.
    """

    variables: list[Hashable]
    objective: dict[Hashable, Fraction]
    sense: str = "max"
    constraints: list[Constraint] = field(default_factory=list)
    bounds: dict[Hashable, tuple[Fraction, Fraction | None]] = field(default_factory=dict)

    def add(self, coeffs: Mapping[Hashable, object], relation: str, rhs) -> None:
        if relation not in _RELATIONS:
            raise ValueError(f"bad relation {relation!r}")
        clean = {v: Fraction(c) for v, c in coeffs.items() if c != 0}
        self.constraints.append(Constraint(clean, relation, Fraction(rhs)))

    def bound(self, var: Hashable) -> tuple[Fraction, Fraction | None]:
        lo, hi = self.bounds.get(var, (Fraction(0), None))
        return Fraction(lo), None if hi is None else Fraction(hi)

    def dump(self) -> str:
        """Plain-text rendering, handy when debugging a model."""
        def term(c, v):
            return f"{'+' if c >= 0 else '-'} {abs(c)} {v}"
        lines = [f"{self.sense} " + " ".join(term(c, v) for v, c in self.objective.items())]
        for con in self.constraints:
            lines.append(" ".join(term(c, v) for v, c in con.coeffs.items()) + f" {con.relation} {con.rhs}")
        for v in self.variables:
            lo, hi = self.bound(v)
            lines.append(f"bound {v} [{lo}, {'inf' if hi is None else hi}]")
        return "\n".join(lines)


@dataclass(frozen=True)
class LPSolution:
    status: str
    value: Fraction | None = None
    assignment: Mapping[Hashable, Fraction] = field(default_factory=dict)

    def __getitem__(self, var: Hashable) -> Fraction:
        return self.assignment[var]


def _fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class _Infeasible(Exception):
    pass


def _presolve(lp: LinearProgram):
    """Shift bounds, fix forced zeros, drop empty and repeated rows.

    Returns (free variable order, fixed values, rows, shift) where every row is
    (coeff dict over shifted free variables, relation, rhs).
    """
    shift: dict[Hashable, Fraction] = {}
    rows: list[tuple[dict, str, Fraction]] = []
    for v in lp.variables:
        lo, hi = lp.bound(v)
        shift[v] = lo
        if hi is not None:
            if hi < lo:
                raise _Infeasible
            rows.append(({v: Fraction(1)}, "<=", hi - lo))
    known = set(lp.variables)
    for con in lp.constraints:
        extra = set(con.coeffs) - known
        if extra:
            raise ValueError(f"constraint uses undeclared variables {sorted(map(str, extra))}")
        rhs = con.rhs - sum((c * shift[v] for v, c in con.coeffs.items()), Fraction(0))
        rows.append((dict(con.coeffs), con.relation, rhs))

    fixed: dict[Hashable, Fraction] = {}
    changed = True
    while changed:
        changed = False
        for coeffs, rel, rhs in rows:
            live = {v: c for v, c in coeffs.items() if v not in fixed}
            if len(live) != 1:
                continue
            (v, c), = live.items()
            r = rhs - sum((coeffs[u] * fixed[u] for u in coeffs if u in fixed), Fraction(0))
            # shifted variables are >= 0; look for rows pinning v to zero
            if (rel == "<=" and c > 0 and r <= 0) or (rel == ">=" and c < 0 and r >= 0) or (rel == "=" and r == 0):
                if (rel == "<=" and r < 0) or (rel == ">=" and r > 0):
                    raise _Infeasible
                fixed[v] = Fraction(0)
                changed = True

    seen: dict[tuple, int] = {}
    out: list[tuple[dict, str, Fraction]] = []
    for coeffs, rel, rhs in rows:
        live = {v: c for v, c in coeffs.items() if v not in fixed}
        r = rhs - sum((coeffs[u] * fixed[u] for u in coeffs if u in fixed), Fraction(0))
        if not live:
            if (rel == "<=" and r < 0) or (rel == ">=" and r > 0) or (rel == "=" and r != 0):
                raise _Infeasible
            continue
        key = (rel, tuple(sorted(live.items(), key=lambda kv: repr(kv[0]))))
        if key in seen:
            i = seen[key]
            prev = out[i][2]
            if rel == "<=":
                out[i] = (out[i][0], rel, min(prev, r))
            elif rel == ">=":
                out[i] = (out[i][0], rel, max(prev, r))
            elif prev != r:
                raise _Infeasible
            continue
        seen[key] = len(out)
        out.append((live, rel, r))
    free = [v for v in lp.variables if v not in fixed]
    return free, fixed, out, shift


class _Tableau:
    def __init__(self, nrows: int):
        self.rows: list[dict[int, mpq]] = [dict() for _ in range(nrows)]
        self.rhs: list = [mpq(0)] * nrows
        self.basis: list[int] = [-1] * nrows
        self.obj: dict[int, mpq] = {}
        self.z = mpq(0)

    def set_objective(self, costs: Mapping[int, Fraction]) -> None:
        obj = {j: mpq(c) for j, c in costs.items() if c != 0}
        z = mpq(0)
        for i, b in enumerate(self.basis):
            cb = obj.get(b)
            if cb:
                for j, a in self.rows[i].items():
                    nv = obj.get(j, 0) - cb * a
                    if nv:
                        obj[j] = nv
                    else:
                        obj.pop(j, None)
                z += cb * self.rhs[i]
        self.obj, self.z = obj, z

    def pivot(self, r: int, e: int) -> None:
        row = self.rows[r]
        p = row[e]
        if p != 1:
            row = {j: a / p for j, a in row.items()}
            self.rows[r] = row
            self.rhs[r] /= p
        b = self.rhs[r]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other.get(e)
            if f is None:
                continue
            for j, a in row.items():
                nv = other.get(j, 0) - f * a
                if nv:
                    other[j] = nv
                else:
                    del other[j]
            self.rhs[i] -= f * b
        f = self.obj.get(e)
        if f is not None:
            for j, a in row.items():
                nv = self.obj.get(j, 0) - f * a
                if nv:
                    self.obj[j] = nv
                else:
                    self.obj.pop(j, None)
            self.z += f * b
        self.basis[r] = e

    def run(self, allowed: int | None = None) -> bool:
        """Maximise the current objective; False if unbounded.

        ``allowed`` restricts entering columns to indices below it.  Pricing is
        Dantzig's largest reduced cost; after a stall of degenerate pivots it
        drops to Bland's smallest-index rule until the objective moves again,
        which rules out cycling.
        """
        stall = 0
        while True:
            bland = stall >= STALL_LIMIT
            enter, top = None, 0
            for j, c in self.obj.items():
                if c > 0 and (allowed is None or j < allowed):
                    if bland:
                        if enter is None or j < enter:
                            enter = j
                    elif c > top or (c == top and j < enter):
                        enter, top = j, c
            if enter is None:
                return True
            leave, best = None, None
            for i, row in enumerate(self.rows):
                a = row.get(enter)
                if a is not None and a > 0:
                    ratio = self.rhs[i] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        leave, best = i, ratio
            if leave is None:
                return False
            stall = stall + 1 if best == 0 else 0
            self.pivot(leave, enter)


def simplex_solve(lp: LinearProgram) -> LPSolution:
    if lp.sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    try:
        free, fixed, rows, shift = _presolve(lp)
    except _Infeasible:
        return LPSolution(INFEASIBLE)

    sign = 1 if lp.sense == "max" else -1
    col = {v: i for i, v in enumerate(free)}
    nstruct = len(free)
    m = len(rows)
    tab = _Tableau(m)
    next_col = nstruct
    artificials: list[int] = []
    for i, (coeffs, rel, rhs) in enumerate(rows):
        row = {col[v]: mpq(c) for v, c in coeffs.items()}
        rhs = mpq(rhs)
        if rhs < 0:
            row = {j: -a for j, a in row.items()}
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        if rel == "<=":
            row[next_col] = mpq(1)
            tab.basis[i] = next_col
            next_col += 1
        elif rel == ">=":
            row[next_col] = mpq(-1)
            next_col += 1
        tab.rows[i] = row
        tab.rhs[i] = rhs
    first_art = next_col
    for i in range(m):
        if tab.basis[i] < 0:
            # rows without a usable slack get an artificial column
            tab.rows[i][next_col] = mpq(1)
            tab.basis[i] = next_col
            artificials.append(next_col)
            next_col += 1

    if artificials:
        tab.set_objective({a: mpq(-1) for a in artificials})
        tab.run()
        if tab.z < 0:
            return LPSolution(INFEASIBLE)
        # drive zero-level artificials out of the basis
        drop = []
        for i, b in enumerate(tab.basis):
            if b < first_art:
                continue
            enter = min((j for j in tab.rows[i] if j < first_art), default=None)
            if enter is None:
                drop.append(i)
            else:
                tab.pivot(i, enter)
        for i in reversed(drop):
            del tab.rows[i], tab.rhs[i], tab.basis[i]
        for row in tab.rows:
            for a in artificials:
                row.pop(a, None)

    costs = {col[v]: sign * mpq(c) for v, c in lp.objective.items() if v in col}
    tab.set_objective(costs)
    if not tab.run(allowed=first_art):
        return LPSolution(UNBOUNDED)

    values = {j: Fraction(0) for j in range(nstruct)}
    for i, b in enumerate(tab.basis):
        if b < nstruct:
            values[b] = _fraction(tab.rhs[i])
    assignment: dict[Hashable, Fraction] = {}
    for v in lp.variables:
        base = fixed.get(v, values[col[v]] if v in col else Fraction(0))
        assignment[v] = base + shift[v]
    value = sum((Fraction(c) * assignment[v] for v, c in lp.objective.items()), Fraction(0))
    return LPSolution(OPTIMAL, value, assignment)


def _violates(con: Constraint, x: Mapping[Hashable, Fraction]) -> bool:
    lhs = sum((c * x[v] for v, c in con.coeffs.items()), Fraction(0))
    if con.relation == "<=":
        return lhs > con.rhs
    if con.relation == ">=":
        return lhs < con.rhs
    return lhs != con.rhs


def solve_with_row_generation(lp: LinearProgram, seed_length: int = 3) -> LPSolution:
    """Solve ``lp`` starting from its short rows and adding violated rows.

    Every round adds all rows the current optimum violates.  An optimum of a
    row subset that satisfies every row is an optimal vertex of the full
    program, so the answer is exact; the gain is that long, rarely binding
    rows never densify the tableau.
    """
    active = [i for i, con in enumerate(lp.constraints) if len(con.coeffs) <= seed_length]
    if len(active) == len(lp.constraints):
        return simplex_solve(lp)
    while True:
        sub = LinearProgram(lp.variables, lp.objective, lp.sense,
                            [lp.constraints[i] for i in active], lp.bounds)
        sol = simplex_solve(sub)
        if sol.status == INFEASIBLE:
            return sol
        if sol.status == UNBOUNDED:
            return simplex_solve(lp)
        chosen = set(active)
        missing = [i for i, con in enumerate(lp.constraints)
                   if i not in chosen and _violates(con, sol.assignment)]
        if not missing:
            return sol
        active = sorted(chosen.union(missing))


def check_feasible(lp: LinearProgram, assignment: Mapping[Hashable, Fraction]) -> bool:
    """Exact feasibility test of an assignment (used by tests and assertions)."""
    for v in lp.variables:
        lo, hi = lp.bound(v)
        x = assignment[v]
        if x < lo or (hi is not None and x > hi):
            return False
    return not any(_violates(con, assignment) for con in lp.constraints)


def solve(variables: Sequence[Hashable], objective, constraints, sense="max", bounds=None) -> LPSolution:
    """Small functional wrapper: constraints given as (coeffs, relation, rhs)."""
    lp = LinearProgram(list(variables), {v: Fraction(c) for v, c in objective.items()}, sense)
    for coeffs, rel, rhs in constraints:
        lp.add(coeffs, rel, rhs)
    if bounds:
        lp.bounds.update(bounds)
    return simplex_solve(lp)
