"""Exact canonical-form models of finitely generated groups.

Each element is a small hashable tuple in a unique normal form, so the word
problem is solved by normalization plus tuple equality.  Models are immutable
after construction and every operation is a pure function, which makes them
safe to share across threads.

Built-in models:

* ``free-abelian:n``  -- integer vectors.
* ``free:k``          -- freely reduced words over k letters.
* ``heisenberg``      -- upper triangular 3x3 integer matrices with unit
  diagonal, stored as the three free entries ``(a, b, c)`` of
  ``[[1, a, b], [0, 1, c], [0, 0, 1]]``.  Generators x, y, z where z spans
  the center.
* ``bs1p:p``          -- the solvable Baumslag-Solitar group BS(1,p) realized
  faithfully by affine maps ``x -> p^k x + t`` with ``t`` in Z[1/p]; payload
  ``(k, num, e)`` encodes ``t = num / p^e`` with ``p`` never dividing ``num``
  unless ``num == 0``.  Generators a: x -> x+1 and b: x -> x/p, so that
  ``b^-1 a b = a^p``.
* ``product(G, H)``   -- component-wise pairs; generator names are relabeled
  alphabetically (left factor first).

Word-length conventions are symmetric: generating sets are closed under
formal inverses, and an inverse generator is named by the upper-case letter.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional

Element = Any


class UnknownGroupError(ValueError):
    pass


class UnknownSubgroupError(ValueError):
    pass


class GroupModel:
    """Base class for exact group arithmetic on canonical payloads."""

    name: str = "group"

    def multiply(self, g: Element, h: Element) -> Element:
        raise NotImplementedError

    def invert(self, g: Element) -> Element:
        raise NotImplementedError

    @property
    def identity(self) -> Element:
        raise NotImplementedError

    def generators(self) -> list[tuple[str, Element]]:
        """Positive generators as (name, element) pairs."""
        raise NotImplementedError

    def key(self, g: Element) -> Any:
        """Canonical hashable key; payloads are already canonical."""
        return g

    def describe(self, g: Element) -> str:
        return repr(g)

    def symmetric_generators(self) -> list[tuple[str, Element]]:
        """Generators and their formal inverses (upper-case names), deduplicated."""
        cached = getattr(self, "_sym_gens", None)
        if cached is not None:
            return cached
        out = list(self.generators())
        seen = {self.key(el) for _, el in out}
        for name, el in self.generators():
            inv = self.invert(el)
            k = self.key(inv)
            if k not in seen:
                out.append((name.upper(), inv))
                seen.add(k)
        self._sym_gens = out
        return out

    def power(self, g: Element, n: int) -> Element:
        if n < 0:
            return self.power(self.invert(g), -n)
        acc, base = self.identity, g
        while n:
            if n & 1:
                acc = self.multiply(acc, base)
            base = self.multiply(base, base)
            n >>= 1
        return acc

    def evaluate_word(self, word: Iterable[str]) -> Element:
        """Multiply out a word given as generator names, e.g. "xyXY"."""
        table = dict(self.symmetric_generators())
        g = self.identity
        for letter in word:
            try:
                g = self.multiply(g, table[letter])
            except KeyError:
                raise ValueError(f"unknown generator letter {letter!r} in {self.name}")
        return g


class FreeAbelianModel(GroupModel):
    """Z^n with the standard basis; payload is the integer vector."""

    def __init__(self, rank: int, gen_names: Optional[list[str]] = None, name: str = ""):
        if rank < 1:
            raise UnknownGroupError(f"free-abelian rank must be >= 1, got {rank}")
        if rank > 26:
            raise UnknownGroupError("free-abelian rank > 26 not supported (generator naming)")
        self.rank = rank
        self.name = name or f"free-abelian:{rank}"
        self._gen_names = gen_names or list(string.ascii_lowercase[:rank])
        self._identity = (0,) * rank

    @property
    def identity(self):
        return self._identity

    def multiply(self, g, h):
        return tuple(x + y for x, y in zip(g, h))

    def invert(self, g):
        return tuple(-x for x in g)

    def generators(self):
        out = []
        for i, nm in enumerate(self._gen_names):
            vec = [0] * self.rank
            vec[i] = 1
            out.append((nm, tuple(vec)))
        return out

    def describe(self, g):
        return "(" + ",".join(str(x) for x in g) + ")"


class FreeGroupModel(GroupModel):
    """Free group on k letters; payload is the freely reduced word.

    Letters are encoded as nonzero ints: +i for the i-th generator, -i for
    its inverse.  Multiplication concatenates and cancels.
    """

    def __init__(self, rank: int, name: str = ""):
        if rank < 1:
            raise UnknownGroupError(f"free rank must be >= 1, got {rank}")
        if rank > 26:
            raise UnknownGroupError("free rank > 26 not supported (generator naming)")
        self.rank = rank
        self.name = name or f"free:{rank}"

    @property
    def identity(self):
        return ()

    def multiply(self, g, h):
        out = list(g)
        for s in h:
            if out and out[-1] == -s:
                out.pop()
            else:
                out.append(s)
        return tuple(out)

    def invert(self, g):
        return tuple(-s for s in reversed(g))

    def generators(self):
        return [(string.ascii_lowercase[i], (i + 1,)) for i in range(self.rank)]

    def describe(self, g):
        if not g:
            return "e"
        letters = string.ascii_lowercase
        return "".join(letters[s - 1] if s > 0 else letters[-s - 1].upper() for s in g)


class HeisenbergModel(GroupModel):
    """Discrete Heisenberg group as unit upper triangular integer matrices."""

    name = "heisenberg"

    @property
    def identity(self):
        return (0, 0, 0)

    def multiply(self, g, h):
        a1, b1, c1 = g
        a2, b2, c2 = h
        return (a1 + a2, b1 + b2 + a1 * c2, c1 + c2)

    def invert(self, g):
        a, b, c = g
        return (-a, a * c - b, -c)

    def generators(self):
        return [("x", (1, 0, 0)), ("y", (0, 0, 1)), ("z", (0, 1, 0))]

    def describe(self, g):
        return f"[a={g[0]} b={g[1]} c={g[2]}]"


class BaumslagSolitarModel(GroupModel):
    """BS(1,p) = <a, b | b^-1 a b = a^p> as affine maps x -> p^k x + num/p^e."""

    def __init__(self, p: int):
        if p < 2:
            raise UnknownGroupError(f"bs1p parameter must be >= 2, got {p}")
        self.p = p
        self.name = f"bs1p:{p}"

    @property
    def identity(self):
        return (0, 0, 0)

    def _normal(self, k: int, num: int, e: int):
        if num == 0:
            return (k, 0, 0)
        p = self.p
        if e < 0:
            num *= p ** (-e)
            e = 0
        while e > 0 and num % p == 0:
            num //= p
            e -= 1
        return (k, num, e)

    def multiply(self, g, h):
        # (g*h)(x) = g(h(x)); translation becomes t1 + p^k1 * t2.
        k1, n1, e1 = g
        k2, n2, e2 = h
        p = self.p
        f2 = e2 - k1
        ee = max(e1, f2, 0)
        num = n1 * p ** (ee - e1) + n2 * p ** (ee - f2)
        return self._normal(k1 + k2, num, ee)

    def invert(self, g):
        k, num, e = g
        return self._normal(-k, -num, e + k)

    def generators(self):
        return [("a", (0, 1, 0)), ("b", (-1, 0, 0))]

    def describe(self, g):
        k, num, e = g
        t = str(num) if e == 0 else f"{num}/{self.p}^{e}"
        return f"aff(k={k},t={t})"


class ProductModel(GroupModel):
    """Direct product; payload is the pair of factor payloads."""

    def __init__(self, left: GroupModel, right: GroupModel):
        self.left = left
        self.right = right
        self.name = f"product({left.name}, {right.name})"
        n_gens = len(left.generators()) + len(right.generators())
        if n_gens > 26:
            raise UnknownGroupError("product has too many generators to relabel")
        self._identity = (left.identity, right.identity)

    @property
    def identity(self):
        return self._identity

    def multiply(self, g, h):
        return (self.left.multiply(g[0], h[0]), self.right.multiply(g[1], h[1]))

    def invert(self, g):
        return (self.left.invert(g[0]), self.right.invert(g[1]))

    def generators(self):
        # Relabel alphabetically so e.g. Z x BS(1,2) gets X = {a, b, c}.
        out = []
        letters = string.ascii_lowercase
        i = 0
        for _, el in self.left.generators():
            out.append((letters[i], (el, self.right.identity)))
            i += 1
        for _, el in self.right.generators():
            out.append((letters[i], (self.left.identity, el)))
            i += 1
        return out

    def describe(self, g):
        return f"({self.left.describe(g[0])}|{self.right.describe(g[1])})"


def direct_product(g1: GroupModel, g2: GroupModel) -> ProductModel:
    return ProductModel(g1, g2)


def builtin(name: str, *params: int) -> GroupModel:
    """Construct a built-in model by name with integer parameters."""
    if name == "free-abelian":
        if len(params) != 1:
            raise UnknownGroupError("free-abelian needs exactly one parameter (rank)")
        return FreeAbelianModel(params[0])
    if name == "free":
        if len(params) != 1:
            raise UnknownGroupError("free needs exactly one parameter (rank)")
        return FreeGroupModel(params[0])
    if name == "heisenberg":
        if params:
            raise UnknownGroupError("heisenberg takes no parameters")
        return HeisenbergModel()
    if name == "bs1p":
        if len(params) != 1:
            raise UnknownGroupError("bs1p needs exactly one parameter (p)")
        return BaumslagSolitarModel(params[0])
    raise UnknownGroupError(f"unknown group name {name!r}")


def _split_top_level(s: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def resolve_group(identifier: str) -> GroupModel:
    """Parse a group identifier string, e.g. "bs1p:2" or
    "product(free-abelian:1, bs1p:2)"."""
    ident = identifier.strip()
    if ident.startswith("product(") and ident.endswith(")"):
        inner = ident[len("product(") : -1]
        parts = _split_top_level(inner)
        if len(parts) != 2:
            raise UnknownGroupError(f"product needs two factors: {identifier!r}")
        return ProductModel(resolve_group(parts[0]), resolve_group(parts[1]))
    if ":" in ident:
        name, _, rest = ident.partition(":")
        try:
            params = tuple(int(x) for x in rest.split(":"))
        except ValueError:
            raise UnknownGroupError(f"bad parameters in {identifier!r}")
        return builtin(name.strip(), *params)
    return builtin(ident)


@dataclass(frozen=True)
class MarkedSubgroup:
    """A subgroup with its own intrinsic model and exact membership test.

    ``intrinsic`` carries the generating set Y; ``embed`` maps intrinsic
    elements into the ambient group, ``unembed`` is its inverse on members.
    ``intrinsic_length`` is an optional closed-form |.|_Y oracle.
    """

    name: str
    ambient: GroupModel
    intrinsic: GroupModel
    embed_fn: Callable[[Element], Element]
    contains_fn: Callable[[Element], bool]
    unembed_fn: Callable[[Element], Element]
    intrinsic_length: Optional[Callable[[Element], int]] = None
    whole: bool = False

    def embed(self, h: Element) -> Element:
        return self.embed_fn(h)

    def contains(self, g: Element) -> bool:
        return self.contains_fn(g)

    def unembed(self, g: Element) -> Element:
        return self.unembed_fn(g)

    @property
    def lattice_rank(self) -> Optional[int]:
        """Rank if the intrinsic model is a free-abelian lattice, else None."""
        if isinstance(self.intrinsic, FreeAbelianModel):
            return self.intrinsic.rank
        return None

    def describe(self, g: Element) -> str:
        return self.ambient.describe(g)


def _l1(v) -> int:
    return sum(abs(x) for x in v)


def marked_subgroup(name: str, ambient: GroupModel) -> MarkedSubgroup:
    """Construct a supported (ambient, subgroup) pair by identifier."""
    ident = lambda x: x  # noqa: E731
    if name == "whole":
        return MarkedSubgroup(
            name="whole", ambient=ambient, intrinsic=ambient,
            embed_fn=ident, contains_fn=lambda g: True, unembed_fn=ident,
            intrinsic_length=None, whole=True,
        )

    if name == "gen-a" and isinstance(ambient, FreeAbelianModel):
        rank = ambient.rank
        intr = FreeAbelianModel(1, gen_names=["a"], name="Z<a>")

        def embed(h):
            return (h[0],) + (0,) * (rank - 1)

        return MarkedSubgroup(
            name="gen-a", ambient=ambient, intrinsic=intr,
            embed_fn=embed,
            contains_fn=lambda g: all(x == 0 for x in g[1:]),
            unembed_fn=lambda g: (g[0],),
            intrinsic_length=_l1,
        )

    if name == "gen-a" and isinstance(ambient, BaumslagSolitarModel):
        intr = FreeAbelianModel(1, gen_names=["a"], name="Z<a>")
        return MarkedSubgroup(
            name="gen-a", ambient=ambient, intrinsic=intr,
            embed_fn=lambda h: (0, h[0], 0),
            contains_fn=lambda g: g[0] == 0 and g[2] == 0,
            unembed_fn=lambda g: (g[1],),
            intrinsic_length=_l1,
        )

    if name == "center" and isinstance(ambient, HeisenbergModel):
        intr = FreeAbelianModel(1, gen_names=["z"], name="Z<z>")
        return MarkedSubgroup(
            name="center", ambient=ambient, intrinsic=intr,
            embed_fn=lambda h: (0, h[0], 0),
            contains_fn=lambda g: g[0] == 0 and g[2] == 0,
            unembed_fn=lambda g: (g[1],),
            intrinsic_length=_l1,
        )

    if name == "diagonal" and isinstance(ambient, FreeAbelianModel) and ambient.rank == 2:
        intr = FreeAbelianModel(1, gen_names=["d"], name="Z<(1,1)>")
        return MarkedSubgroup(
            name="diagonal", ambient=ambient, intrinsic=intr,
            embed_fn=lambda h: (h[0], h[0]),
            contains_fn=lambda g: g[0] == g[1],
            unembed_fn=lambda g: (g[0],),
            intrinsic_length=_l1,
        )

    if name == "product-left" and isinstance(ambient, ProductModel):
        left, right = ambient.left, ambient.right
        length = _l1 if isinstance(left, FreeAbelianModel) else None
        return MarkedSubgroup(
            name="product-left", ambient=ambient, intrinsic=left,
            embed_fn=lambda h: (h, right.identity),
            contains_fn=lambda g: g[1] == right.identity,
            unembed_fn=lambda g: g[0],
            intrinsic_length=length,
        )

    if (
        name == "gen-ab"
        and isinstance(ambient, ProductModel)
        and isinstance(ambient.left, FreeAbelianModel)
        and ambient.left.rank == 1
        and isinstance(ambient.right, BaumslagSolitarModel)
    ):
        intr = FreeAbelianModel(2, gen_names=["a", "b"], name="ZxZ<a,b>")
        return MarkedSubgroup(
            name="gen-ab", ambient=ambient, intrinsic=intr,
            embed_fn=lambda h: ((h[0],), (0, h[1], 0)),
            contains_fn=lambda g: g[1][0] == 0 and g[1][2] == 0,
            unembed_fn=lambda g: (g[0][0], g[1][1]),
            intrinsic_length=_l1,
        )

    raise UnknownSubgroupError(f"unsupported subgroup {name!r} of {ambient.name}")
