"""The three distortion invariants, computed exactly on enumerated balls.

* delta(n)  = max |h|_Y over subgroup members with |h|_X <= n.
* nabla(n)  = min |h|_Y over subgroup members with |h|_X > n.
* mu(m, n)  = max word length over the alphabet Y_m = H intersect Ball_X(m)
  of subgroup members with |h|_X <= n.

mu is computed by shortest signed-coin BFS inside the subgroup's lattice
coordinates when H is free abelian, and by generic closure BFS over ambient
canonical elements otherwise.  The closure route doubles as an independent
oracle for the lattice route.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .balls import BallCapExceeded, BallIndex, iter_spheres, subgroup_points
from .flags import EXACT, LOWER_BOUND, Flagged
from .groups import MarkedSubgroup

DEFAULT_SEARCH_CAP = 2_000_000


class MuUndefinedError(ValueError):
    """Y_m contains only the identity, so |h|_{Y_m} is undefined."""


class InsufficientDataError(ValueError):
    pass


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def intrinsic_lengths(
    sub: MarkedSubgroup,
    elements: Sequence,
    ball: Optional[BallIndex] = None,
    node_cap: int = DEFAULT_SEARCH_CAP,
) -> tuple[dict, bool]:
    """Map each ambient member to |h|_Y.  Returns (lengths, complete).

    Uses the closed-form oracle when available, the ambient ball when the
    subgroup is the whole group, and a lazy BFS of the intrinsic model
    otherwise (complete=False when the cap interrupts the search).
    """
    if sub.intrinsic_length is not None:
        return (
            {sub.ambient.key(g): sub.intrinsic_length(sub.unembed(g)) for g in elements},
            True,
        )
    if sub.whole:
        if ball is None:
            raise ValueError("whole-subgroup intrinsic lengths need the ambient ball")
        out = {}
        for g in elements:
            L = ball.length(g)
            if L is None:
                raise ValueError("element outside the ambient ball")
            out[sub.ambient.key(g)] = L
        return out, True
    # generic: enumerate the intrinsic Cayley graph sphere by sphere
    needed = {sub.intrinsic.key(sub.unembed(g)) for g in elements}
    found: dict = {}
    total = 0
    try:
        for r, sphere in enumerate(iter_spheres(sub.intrinsic, node_cap)):
            for h in sphere:
                k = sub.intrinsic.key(h)
                if k in needed and k not in found:
                    found[k] = r
            total += len(sphere)
            if len(found) == len(needed):
                break
            if total > node_cap:
                break
    except BallCapExceeded:
        pass
    lengths = {}
    for g in elements:
        k_int = sub.intrinsic.key(sub.unembed(g))
        if k_int in found:
            lengths[sub.ambient.key(g)] = found[k_int]
    return lengths, len(lengths) == len(elements)


def delta(ball: BallIndex, sub: MarkedSubgroup, n: int, node_cap: int = DEFAULT_SEARCH_CAP) -> Flagged:
    """Exact Delta(n) with a witness element realizing the max."""
    if n > ball.radius:
        raise ValueError(f"n={n} exceeds ball radius {ball.radius}")
    pts = subgroup_points(ball, sub, radius=n)
    elements = pts.elements()
    lengths, complete = intrinsic_lengths(sub, elements, ball=ball, node_cap=node_cap)
    best, witness = 0, ball.model.identity
    for g in elements:
        L = lengths.get(ball.model.key(g))
        if L is not None and (L > best or (L == best and ball.model.key(g) < ball.model.key(witness))):
            best, witness = L, g
    flag = EXACT if complete else LOWER_BOUND
    return Flagged(best, flag, witness)


def nabla(
    ball: BallIndex,
    sub: MarkedSubgroup,
    n: int,
    node_cap: int = DEFAULT_SEARCH_CAP,
) -> Flagged:
    """Exact nabla(n): first Y-sphere containing an element with |h|_X > n.

    |h|_X > n is certified either by an in-ball length above n or by absence
    from the ball (length > radius >= n).
    """
    if n > ball.radius:
        raise ValueError(f"n={n} exceeds ball radius {ball.radius}; cannot certify |h|_X > n")
    if sub.whole:
        if n + 1 > ball.radius:
            return Flagged(ball.radius + 1, LOWER_BOUND, None)
        sphere = ball.spheres[n + 1]
        return Flagged(n + 1, EXACT, sphere[0] if sphere else None)
    total = 0
    r = 0
    try:
        for r, sphere in enumerate(iter_spheres(sub.intrinsic, node_cap)):
            if r == 0:
                continue
            for h in sphere:
                g = sub.embed(h)
                L = ball.length(g)
                if L is None or L > n:
                    return Flagged(r, EXACT, g)
            total += len(sphere)
            if total > node_cap:
                return Flagged(r + 1, LOWER_BOUND, None)
    except BallCapExceeded:
        return Flagged(r + 1, LOWER_BOUND, None)
    raise RuntimeError("intrinsic model exhausted; subgroup appears finite")


def _coin_bfs(
    coins: list[tuple],
    targets: list[tuple],
    node_cap: int = DEFAULT_SEARCH_CAP,
) -> tuple[dict, bool]:
    """Shortest signed-coin representation lengths on a Z^d lattice.

    BFS from the origin restricted to a window box; by the Steinitz
    rearrangement bound, partial sums of an optimal representation can be
    reordered to stay within (dim * max coin) of the segment to the target,
    so the window loses nothing.
    """
    dim = len(targets[0]) if targets else len(coins[0])
    margin = []
    for c in range(dim):
        m = max(abs(v[c]) for v in coins)
        margin.append((dim + 1) * m)
    lo = [min(0, min(t[c] for t in targets)) - margin[c] for c in range(dim)]
    hi = [max(0, max(t[c] for t in targets)) + margin[c] for c in range(dim)]

    origin = (0,) * dim
    todo = set(targets)
    found: dict = {}
    dist = {origin: 0}
    if origin in todo:
        found[origin] = 0
        todo.discard(origin)
    frontier = [origin]
    d = 0
    while frontier and todo:
        nxt = []
        for v in frontier:
            for c in coins:
                w = tuple(a + b for a, b in zip(v, c))
                if w in dist:
                    continue
                if any(w[i] < lo[i] or w[i] > hi[i] for i in range(dim)):
                    continue
                dist[w] = d + 1
                nxt.append(w)
                if w in todo:
                    found[w] = d + 1
                    todo.discard(w)
        if len(dist) > node_cap:
            return found, False
        frontier = nxt
        d += 1
    return found, not todo


def _closure_bfs(model, coins: list, target_keys: set, node_cap: int) -> tuple[dict, bool]:
    """Shortest product length over an ambient alphabet, by BFS on canonical forms."""
    found: dict = {}
    dist = {model.key(model.identity): 0}
    todo = set(target_keys)
    k0 = model.key(model.identity)
    if k0 in todo:
        found[k0] = 0
        todo.discard(k0)
    frontier = [model.identity]
    d = 0
    while frontier and todo:
        nxt = []
        for g in frontier:
            for c in coins:
                h = model.multiply(g, c)
                k = model.key(h)
                if k in dist:
                    continue
                dist[k] = d + 1
                nxt.append(h)
                if k in todo:
                    found[k] = d + 1
                    todo.discard(k)
        if len(dist) > node_cap:
            return found, False
        frontier = nxt
        d += 1
    return found, not todo


def _mu_from_lengths(ball, targets, lengths: dict, complete: bool, key_fn) -> Flagged:
    best, witness = 0, None
    for g, _ in targets.points:
        L = lengths.get(key_fn(g))
        if L is not None and L > best:
            best, witness = L, g
    return Flagged(best, EXACT if complete else LOWER_BOUND, witness)


def mu(
    ball: BallIndex,
    sub: MarkedSubgroup,
    m: int,
    n: int,
    node_cap: int = DEFAULT_SEARCH_CAP,
) -> Flagged:
    """Exact mu(m, n) by coin BFS in lattice coordinates (abelian H) or by
    generic closure BFS (everything else)."""
    if m < 1 or n < 1:
        raise ValueError("mu needs m, n >= 1")
    if max(m, n) > ball.radius:
        raise ValueError(f"grid point ({m},{n}) exceeds ball radius {ball.radius}")
    alphabet = [g for g, r in subgroup_points(ball, sub, radius=m).points if r > 0]
    if not alphabet:
        raise MuUndefinedError(f"H intersect Ball_X({m}) is trivial")
    targets = subgroup_points(ball, sub, radius=n)
    if sub.lattice_rank is not None:
        coins = [sub.unembed(g) for g in alphabet]
        vecs = [sub.unembed(g) for g in targets.elements()]
        lengths, complete = _coin_bfs(coins, vecs, node_cap)
        return _mu_from_lengths(ball, targets, lengths, complete, key_fn=sub.unembed)
    target_keys = {ball.model.key(g) for g in targets.elements()}
    lengths, complete = _closure_bfs(ball.model, alphabet, target_keys, node_cap)
    return _mu_from_lengths(ball, targets, lengths, complete, key_fn=ball.model.key)


def mu_closure(
    ball: BallIndex,
    sub: MarkedSubgroup,
    m: int,
    n: int,
    node_cap: int = DEFAULT_SEARCH_CAP,
) -> Flagged:
    """Independent mu oracle: always the generic ambient closure BFS."""
    if m < 1 or n < 1:
        raise ValueError("mu needs m, n >= 1")
    alphabet = [g for g, r in subgroup_points(ball, sub, radius=m).points if r > 0]
    if not alphabet:
        raise MuUndefinedError(f"H intersect Ball_X({m}) is trivial")
    targets = subgroup_points(ball, sub, radius=n)
    target_keys = {ball.model.key(g) for g in targets.elements()}
    lengths, complete = _closure_bfs(ball.model, alphabet, target_keys, node_cap)
    return _mu_from_lengths(ball, targets, lengths, complete, key_fn=ball.model.key)


@dataclass
class DistortionRow:
    n: int
    delta: Flagged
    nabla: Flagged


@dataclass
class DistortionTable:
    group: str
    subgroup: str
    rows: list[DistortionRow]

    def delta_at(self, n: int) -> Flagged:
        return self.rows[n - 1].delta

    def nabla_at(self, n: int) -> Flagged:
        return self.rows[n - 1].nabla

    def validate_monotone(self) -> None:
        for prev, cur in zip(self.rows, self.rows[1:]):
            if prev.delta.is_exact and cur.delta.is_exact and cur.delta.value < prev.delta.value:
                raise AssertionError(f"Delta not non-decreasing at n={cur.n}")
            if prev.nabla.is_exact and cur.nabla.is_exact and cur.nabla.value < prev.nabla.value:
                raise AssertionError(f"nabla not non-decreasing at n={cur.n}")


def distortion_table(ball: BallIndex, sub: MarkedSubgroup, n_max: int) -> DistortionTable:
    rows = [DistortionRow(n, delta(ball, sub, n), nabla(ball, sub, n)) for n in range(1, n_max + 1)]
    table = DistortionTable(ball.model.name, sub.name, rows)
    table.validate_monotone()
    return table


@dataclass
class MuTable:
    group: str
    subgroup: str
    ms: list[int]
    ns: list[int]
    cells: dict  # (m, n) -> Flagged

    def at(self, m: int, n: int) -> Flagged:
        return self.cells[(m, n)]

    def validate_monotone(self) -> None:
        for (m, n), cell in self.cells.items():
            if not cell.is_exact:
                continue
            up = self.cells.get((m, n + 1))
            if up is not None and up.is_exact and up.value < cell.value:
                raise AssertionError(f"mu decreasing in n at ({m},{n})")
            right = self.cells.get((m + 1, n))
            if right is not None and right.is_exact and right.value > cell.value:
                raise AssertionError(f"mu increasing in m at ({m},{n})")


def mu_table(ball: BallIndex, sub: MarkedSubgroup, ms: Iterable[int], ns: Iterable[int]) -> MuTable:
    ms, ns = sorted(set(ms)), sorted(set(ns))
    cells = {(m, n): mu(ball, sub, m, n) for m in ms for n in ns}
    table = MuTable(ball.model.name, sub.name, ms, ns, cells)
    table.validate_monotone()
    return table


@dataclass
class SandwichRow:
    m: int
    n: int
    lower: int
    mu: int
    upper: Optional[int]  # None when nabla(m) < 2 (bound not applicable)
    ok: bool


@dataclass
class SandwichReport:
    rows: list[SandwichRow]
    skipped: list[tuple[int, int, str]]

    @property
    def all_ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def violations(self) -> list[SandwichRow]:
        return [r for r in self.rows if not r.ok]


def check_sandwich(table: DistortionTable, mu_tbl: MuTable) -> SandwichReport:
    """Pointwise check of ceil(D(n)/D(m)) <= mu(m,n) <= ceil(D(n)/(nabla(m)-1))."""
    rows, skipped = [], []
    max_n = len(table.rows)
    for (m, n), cell in sorted(mu_tbl.cells.items()):
        if m > max_n or n > max_n:
            skipped.append((m, n, "outside distortion table"))
            continue
        dm, dn, nm = table.delta_at(m), table.delta_at(n), table.nabla_at(m)
        if not (dm.is_exact and dn.is_exact and nm.is_exact and cell.is_exact):
            skipped.append((m, n, "inexact entry"))
            continue
        if dm.value == 0:
            skipped.append((m, n, "Delta(m)=0 (trivial intersection)"))
            continue
        lower = _ceil_div(dn.value, dm.value)
        ok = lower <= cell.value
        upper = None
        if nm.value >= 2:
            upper = _ceil_div(dn.value, nm.value - 1)
            ok = ok and cell.value <= upper
        rows.append(SandwichRow(m, n, lower, cell.value, upper, ok))
    return SandwichReport(rows, skipped)


@dataclass
class RatioProbe:
    c: int
    rows: list[tuple[int, Flagged]]
    max_value: int
    min_value: int
    constant: bool
    nondecreasing: bool
    strictly_increasing: bool


def mu_ratio_probe(ball: BallIndex, sub: MarkedSubgroup, c: int, i_values: Iterable[int]) -> RatioProbe:
    """The diagonal slice i -> mu(i, c*i) with a monotone-trend summary."""
    i_values = sorted(set(i_values))
    if not i_values:
        raise ValueError("empty i range")
    if c * max(i_values) > ball.radius:
        raise ValueError(f"c*i = {c * max(i_values)} exceeds ball radius {ball.radius}")
    rows = [(i, mu(ball, sub, i, c * i)) for i in i_values]
    vals = [f.value for _, f in rows]
    return RatioProbe(
        c=c,
        rows=rows,
        max_value=max(vals),
        min_value=min(vals),
        constant=len(set(vals)) == 1,
        nondecreasing=all(a <= b for a, b in zip(vals, vals[1:])),
        strictly_increasing=all(a < b for a, b in zip(vals, vals[1:])),
    )


@dataclass
class FitReport:
    """Least-squares growth classification.  Heuristic only: asymptotic
    equivalence classes are not decidable from finitely many exact values."""

    n_points: int
    loglog_slope: float
    loglog_max_residual: float
    semilog_slope: float
    semilog_base: float
    semilog_max_residual: float
    note: str = "heuristic fit; finite data cannot decide asymptotic class"


def fit_report(pairs: Sequence[tuple[int, int]]) -> FitReport:
    """Fit log v against log n (polynomial degree) and against n (exponential base)."""
    pts = [(n, v) for n, v in pairs if n >= 1 and v >= 1]
    if len(pts) < 4:
        raise InsufficientDataError("need at least 4 exact entries to fit")
    xs = [math.log(n) for n, _ in pts]
    ys = [math.log(v) for _, v in pts]
    ll = statistics.linear_regression(xs, ys)
    ll_res = max(abs(y - (ll.slope * x + ll.intercept)) for x, y in zip(xs, ys))
    ns = [float(n) for n, _ in pts]
    sl = statistics.linear_regression(ns, ys)
    sl_res = max(abs(y - (sl.slope * x + sl.intercept)) for x, y in zip(ns, ys))
    return FitReport(
        n_points=len(pts),
        loglog_slope=ll.slope,
        loglog_max_residual=ll_res,
        semilog_slope=sl.slope,
        semilog_base=math.exp(sl.slope),
        semilog_max_residual=sl_res,
    )
