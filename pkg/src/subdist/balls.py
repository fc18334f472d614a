"""Exact Cayley-graph balls: enumeration, word length, induced queries.

A ball is enumerated by breadth-first search over canonical forms, so sizes
and lengths are exact (deduplication happens on elements, not words).  "Not
in the ball" is a first-class outcome: it certifies |g|_X > radius.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Optional

from .flags import EXACT, LOWER_BOUND, UPPER_UNCERTAIN
from .groups import Element, GroupModel, MarkedSubgroup

DEFAULT_NODE_CAP = 5_000_000


class BallCapExceeded(RuntimeError):
    """Raised when BFS would exceed the node cap; carries partial sphere sizes."""

    def __init__(self, node_cap: int, sphere_sizes: list[int]):
        self.node_cap = node_cap
        self.sphere_sizes = sphere_sizes
        super().__init__(
            f"ball enumeration exceeded node cap {node_cap} "
            f"(sphere sizes so far: {sphere_sizes}); retry with a smaller radius"
        )


def iter_spheres(model: GroupModel, node_cap: int = DEFAULT_NODE_CAP) -> Iterator[list[Element]]:
    """Yield spheres of increasing radius, each sorted by canonical key."""
    seen = {model.key(model.identity)}
    sphere = [model.identity]
    total = 1
    gens = model.symmetric_generators()
    yield sphere
    while sphere:
        nxt = {}
        for g in sphere:
            for _, s in gens:
                h = model.multiply(g, s)
                k = model.key(h)
                if k not in seen and k not in nxt:
                    nxt[k] = h
        total += len(nxt)
        if total > node_cap:
            sizes = []  # reconstructed by caller; keep the failure cheap
            raise BallCapExceeded(node_cap, sizes)
        sphere = [nxt[k] for k in sorted(nxt)]
        seen.update(nxt)
        yield sphere


class BallIndex:
    """All elements of word length <= radius, with exact lengths."""

    def __init__(self, model: GroupModel, radius: int, spheres: list[list[Element]]):
        self.model = model
        self.radius = radius
        self.spheres = spheres
        self.lengths: dict[Any, int] = {}
        for r, sp in enumerate(spheres):
            for g in sp:
                self.lengths[model.key(g)] = r

    def length(self, g: Element) -> Optional[int]:
        """Exact |g|_X, or None meaning certified |g|_X > radius."""
        return self.lengths.get(self.model.key(g))

    def __contains__(self, g: Element) -> bool:
        return self.model.key(g) in self.lengths

    def size(self) -> int:
        return len(self.lengths)

    def sphere_sizes(self) -> list[int]:
        return [len(sp) for sp in self.spheres]

    def elements(self) -> Iterator[tuple[Element, int]]:
        for r, sp in enumerate(self.spheres):
            for g in sp:
                yield g, r


def enumerate_ball(model: GroupModel, radius: int, node_cap: int = DEFAULT_NODE_CAP) -> BallIndex:
    """BFS the ball of the given radius; raises BallCapExceeded past the cap."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    spheres: list[list[Element]] = []
    try:
        for r, sp in enumerate(iter_spheres(model, node_cap)):
            spheres.append(sp)
            if r == radius:
                break
    except BallCapExceeded as exc:
        raise BallCapExceeded(node_cap, [len(s) for s in spheres]) from None
    return BallIndex(model, radius, spheres)


def word_length(ball: BallIndex, g: Element) -> Optional[int]:
    """Exact word length if g is in the ball, else None (certified > radius)."""
    return ball.length(g)


@dataclass
class SubgroupPointSet:
    """Subgroup members inside a ball, with their ambient lengths."""

    sub: MarkedSubgroup
    radius: int
    points: list[tuple[Element, int]]  # sorted by (length, key)

    def elements(self) -> list[Element]:
        return [g for g, _ in self.points]

    def __len__(self) -> int:
        return len(self.points)


def subgroup_points(ball: BallIndex, sub: MarkedSubgroup, radius: Optional[int] = None) -> SubgroupPointSet:
    """All ball elements passing the membership predicate, up to radius."""
    if sub.ambient is not ball.model:
        raise ValueError("ball was built on a different model than the subgroup's ambient")
    r_max = ball.radius if radius is None else radius
    if r_max > ball.radius:
        raise ValueError(f"requested radius {r_max} exceeds ball radius {ball.radius}")
    pts = []
    for r in range(r_max + 1):
        if r >= len(ball.spheres):
            break
        for g in ball.spheres[r]:
            if sub.contains(g):
                pts.append((g, r))
    return SubgroupPointSet(sub=sub, radius=r_max, points=pts)


class DistanceField:
    """Multi-source BFS distances to a target set, computed inside a ball.

    A value d for element v is exact when |v|_X + d <= radius: any shorter
    path would have stayed inside the ball and been found.  Unreached
    elements get the certified lower bound radius - |v|_X + 1.
    """

    def __init__(self, ball: BallIndex, dist: dict):
        self.ball = ball
        self.dist = dist

    def distance(self, g: Element) -> Optional[int]:
        return self.dist.get(self.ball.model.key(g))

    def flag(self, g: Element) -> str:
        d = self.distance(g)
        if d is None:
            return LOWER_BOUND
        glen = self.ball.length(g)
        if glen is not None and glen + d <= self.ball.radius:
            return EXACT
        return UPPER_UNCERTAIN

    def lower_bound(self, g: Element) -> int:
        """Certified lower bound on the true distance for unreached elements."""
        glen = self.ball.length(g)
        if glen is None:
            raise ValueError("element not in ball")
        return self.ball.radius - glen + 1


def distance_to_subset(ball: BallIndex, targets: Iterable[Element]) -> DistanceField:
    """BFS distances from every ball element to the nearest target."""
    model = ball.model
    gens = model.symmetric_generators()
    dist: dict[Any, int] = {}
    frontier = []
    for g in targets:
        k = model.key(g)
        if k in ball.lengths and k not in dist:
            dist[k] = 0
            frontier.append(g)
    if not dist:
        raise ValueError("empty target set")
    d = 0
    while frontier:
        nxt = []
        for g in frontier:
            for _, s in gens:
                h = model.multiply(g, s)
                k = model.key(h)
                if k in ball.lengths and k not in dist:
                    dist[k] = d + 1
                    nxt.append(h)
        frontier = nxt
        d += 1
    return DistanceField(ball, dist)


def closure_lengths(model: GroupModel, max_len: int) -> dict:
    """Independent word-length oracle: multiply out every word up to max_len
    and deduplicate, keeping the shortest word per element.

    Exponential in max_len (all generator tuples are enumerated); used to
    cross-check BFS at small radii.
    """
    import itertools

    gens = [s for _, s in model.symmetric_generators()]
    lengths = {model.key(model.identity): 0}
    for length in range(1, max_len + 1):
        for word in itertools.product(gens, repeat=length):
            g = model.identity
            for s in word:
                g = model.multiply(g, s)
            lengths.setdefault(model.key(g), length)
    return lengths
