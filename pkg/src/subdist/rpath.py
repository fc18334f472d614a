"""r-paths, r-connectedness and the two-variable invariant nu on finite
metric spaces, including subgroup metrics induced from an ambient ball.

An induced space is truncated: its points are the subgroup members of
ambient length <= truncation + slack, with the slack shell present so that
short detours through slightly longer members are still seen.  A shortest
r-path value is reported exact when some optimum avoids the shell, and
upper-bound-uncertain when every optimum touches it (a larger enumeration
could then only shorten it further).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .balls import BallIndex
from .flags import EXACT, UPPER_UNCERTAIN
from .groups import MarkedSubgroup

Distance = Union[int, Fraction]


@dataclass
class FiniteMetricSpace:
    """Finite pointed metric space with an exact distance matrix.

    ``matrix[i][j]`` is the exact distance, or None for a certified
    "greater than cert_radius" outcome (induced spaces only).
    """

    points: list
    base: int
    matrix: list[list[Optional[Distance]]]
    core: list[bool]
    cert_radius: Optional[Distance] = None
    provenance: str = "standalone"
    describe_point: Callable = staticmethod(repr)

    def __post_init__(self):
        if not (0 <= self.base < len(self.points)):
            raise ValueError("basepoint must be one of the points")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def has_shell(self) -> bool:
        return not all(self.core)

    def index_of(self, point) -> int:
        return self.points.index(point)

    def dist(self, i: int, j: int) -> Optional[Distance]:
        return self.matrix[i][j]

    def base_distance(self, i: int) -> Optional[Distance]:
        return self.matrix[self.base][i]


def space_from_points(points: Sequence, metric: Callable, base: int = 0, provenance: str = "standalone") -> FiniteMetricSpace:
    pts = list(points)
    matrix = [[metric(p, q) for q in pts] for p in pts]
    for i in range(len(pts)):
        if matrix[i][i] != 0:
            raise ValueError("metric has nonzero self-distance")
        for j in range(len(pts)):
            if matrix[i][j] != matrix[j][i]:
                raise ValueError("metric is not symmetric")
            if i != j and matrix[i][j] == 0:
                raise ValueError("metric vanishes off the diagonal")
    return FiniteMetricSpace(pts, base, matrix, [True] * len(pts), None, provenance)


def segment_space(n: int) -> FiniteMetricSpace:
    """The integer segment {0, ..., n} with |i - j|; a geodesic toy space."""
    return space_from_points(list(range(n + 1)), lambda p, q: abs(p - q), base=0,
                             provenance=f"segment:{n}")


def induced_space(
    ball: BallIndex,
    sub: MarkedSubgroup,
    truncation: int,
    slack: int = 0,
) -> FiniteMetricSpace:
    """Subgroup members within truncation (+ slack shell), with d(h,k) = |h^-1 k|_X.

    Pairwise distances are exact whenever the quotient lies in the ball and
    otherwise recorded as certified "> ball radius" (None).
    """
    if truncation + slack > ball.radius:
        raise ValueError(
            f"truncation {truncation} + slack {slack} exceeds ball radius {ball.radius}"
        )
    from .balls import subgroup_points

    pts = subgroup_points(ball, sub, radius=truncation + slack)
    elements = pts.elements()
    model = ball.model
    n = len(elements)
    inverses = [model.invert(g) for g in elements]
    matrix: list[list[Optional[int]]] = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            matrix[i][j] = ball.length(model.multiply(inverses[i], elements[j]))
    core = [ball.length(g) <= truncation for g in elements]
    base = elements.index(model.identity)
    return FiniteMetricSpace(
        points=elements,
        base=base,
        matrix=matrix,
        core=core,
        cert_radius=ball.radius,
        provenance=f"induced:{model.name}/{sub.name}@{truncation}+{slack}",
        describe_point=model.describe,
    )


@dataclass
class RPathResult:
    value: Optional[int]  # None = unreachable by any r-path in this space
    flag: str = EXACT

    @property
    def reachable(self) -> bool:
        return self.value is not None


def _threshold_bfs(space: FiniteMetricSpace, r: Distance, allowed: Sequence[bool]) -> list[Optional[int]]:
    n = len(space)
    dist: list[Optional[int]] = [None] * n
    if not allowed[space.base]:
        raise ValueError("basepoint excluded from threshold graph")
    dist[space.base] = 0
    frontier = [space.base]
    d = 0
    while frontier:
        nxt = []
        for i in frontier:
            row = space.matrix[i]
            for j in range(n):
                if dist[j] is None and allowed[j]:
                    dij = row[j]
                    if dij is not None and dij <= r:
                        dist[j] = d + 1
                        nxt.append(j)
        frontier = nxt
        d += 1
    return dist


def _check_r_certified(space: FiniteMetricSpace, r: Distance) -> None:
    if space.cert_radius is not None and r > space.cert_radius:
        raise ValueError(
            f"threshold {r} exceeds the certified distance range {space.cert_radius}; "
            "flagged pairs could not be classified"
        )


def rpath_length(space: FiniteMetricSpace, r: Distance, point) -> RPathResult:
    """Length of the shortest r-path from the basepoint, with exactness flag."""
    if r <= 0:
        raise ValueError("r must be positive")
    _check_r_certified(space, r)
    idx = space.index_of(point)
    full = _threshold_bfs(space, r, [True] * len(space))
    value = full[idx]
    if value is None:
        return RPathResult(None, EXACT)
    if not space.has_shell:
        return RPathResult(value, EXACT)
    core_dist = _threshold_bfs(space, r, space.core) if space.core[idx] else [None] * len(space)
    flag = EXACT if core_dist[idx] == value else UPPER_UNCERTAIN
    return RPathResult(value, flag)


@dataclass
class ConnectivityResult:
    connected: bool
    components: int


def is_r_connected(space: FiniteMetricSpace, r: Distance) -> ConnectivityResult:
    """Whether every point admits an r-path from the basepoint."""
    if r <= 0:
        raise ValueError("r must be positive")
    _check_r_certified(space, r)
    n = len(space)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            dij = space.matrix[i][j]
            if dij is not None and dij <= r:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    roots = {find(i) for i in range(n)}
    return ConnectivityResult(connected=len(roots) == 1, components=len(roots))


@dataclass
class NuResult:
    value: int
    flag: str
    unreachable: tuple = ()

    @property
    def is_exact(self) -> bool:
        return self.flag == EXACT and not self.unreachable


def nu(space: FiniteMetricSpace, m: Distance, n: Distance) -> NuResult:
    """max |t|_m over core points with d(base, t) <= n.

    Unreachable targets are listed rather than guessed (the space may be too
    coarse for the requested threshold m).
    """
    if m <= 0:
        raise ValueError("m must be positive")
    _check_r_certified(space, m)
    targets = []
    for i in range(len(space)):
        if not space.core[i]:
            continue
        d0 = space.base_distance(i)
        if d0 is not None and d0 <= n:
            targets.append(i)
    if not targets:
        return NuResult(0, EXACT)
    full = _threshold_bfs(space, m, [True] * len(space))
    core_dist = _threshold_bfs(space, m, space.core) if space.has_shell else full
    unreachable = tuple(space.points[i] for i in targets if full[i] is None)
    reachable = [i for i in targets if full[i] is not None]
    if not reachable:
        return NuResult(0, "partial", unreachable)
    best_exact = 0
    best_any = 0
    for i in reachable:
        v = full[i]
        best_any = max(best_any, v)
        if core_dist[i] == v:
            best_exact = max(best_exact, v)
    if unreachable:
        return NuResult(best_any, "partial", unreachable)
    flag = EXACT if best_exact == best_any else UPPER_UNCERTAIN
    return NuResult(best_any, flag)
