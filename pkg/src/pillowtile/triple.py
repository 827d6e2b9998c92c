"""Permutation triples up to simultaneous conjugation.

A surface tiled by pillowcase squares is encoded by an ordered triple
(a, b, c) of permutations of common degree, considered up to conjugating all
three coordinates by the same element; the fourth monodromy element is
d = (abc)^-1, so that abcd = 1.  The cover is connected exactly when
<a, b, c> is transitive.

Canonical forms
---------------
``canonicalize`` relabels the points of a transitive triple by breadth-first
discovery order starting at a base point, exploring neighbours in the fixed
generator order (a, b, c, a^-1, b^-1, c^-1), and returns the lexicographically
least of the n relabelled image tables.  Relabelling realises a simultaneous
conjugation, and conversely any conjugation permutes the n candidate tables,
so two transitive triples produce equal keys exactly when they are
simultaneously conjugate.  The generator exploration order is part of the
on-disk key format; changing it requires a format-version bump.

Everything here is pure and immutable; ``canonicalize`` is reentrant and safe
for parallel use.
"""
from __future__ import annotations

from dataclasses import dataclass

from .perm import (
    DegreeMismatch,
    ParseError,
    Permutation,
    compose,
    conjugate,
    cycle_count,
    cycle_type,
    format_cycles,
    inverse_images,
    parse_cycles,
)

__all__ = [
    "CanonicalKey",
    "CoverTopology",
    "NotTransitive",
    "PtsTriple",
    "canonicalize",
    "conjugate_all",
    "format_triple",
    "fourth_element",
    "is_connected",
    "parse_triple",
    "topology",
]


class NotTransitive(ValueError):
    """Raised when an operation requires a connected cover (transitive triple)."""


@dataclass(frozen=True, slots=True)
class PtsTriple:
    """Ordered triple (a, b, c) of permutations of common degree."""

    a: Permutation
    b: Permutation
    c: Permutation

    def __post_init__(self) -> None:
        if not (self.a.degree == self.b.degree == self.c.degree):
            raise DegreeMismatch(
                "triple coordinates have degrees "
                f"{self.a.degree}, {self.b.degree}, {self.c.degree}"
            )

    @property
    def degree(self) -> int:
        return self.a.degree

    @property
    def perms(self) -> tuple[Permutation, Permutation, Permutation]:
        return (self.a, self.b, self.c)

    def __str__(self) -> str:
        return format_triple(self)


@dataclass(frozen=True, slots=True, order=True)
class CanonicalKey:
    """Relabelled image tables of a transitive triple; the dedup key for
    simultaneous-conjugation classes.  Total order is lexicographic on
    (degree, images)."""

    degree: int
    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.images) != 3 * self.degree:
            raise ValueError(
                f"expected {3 * self.degree} images, got {len(self.images)}"
            )

    def to_triple(self) -> PtsTriple:
        n = self.degree
        return PtsTriple(
            Permutation(self.images[:n]),
            Permutation(self.images[n : 2 * n]),
            Permutation(self.images[2 * n :]),
        )

    def to_text(self) -> str:
        return f"{self.degree}: " + " ".join(str(v + 1) for v in self.images)

    @classmethod
    def from_text(cls, text: str) -> "CanonicalKey":
        head, sep, rest = text.partition(":")
        if not sep:
            raise ParseError(f"missing degree prefix in key {text!r}")
        try:
            degree = int(head.strip())
            images = tuple(int(t) - 1 for t in rest.split())
        except ValueError as exc:
            raise ParseError(f"bad canonical key {text!r}") from exc
        if len(images) != 3 * degree:
            raise ParseError(
                f"expected {3 * degree} images in key, got {len(images)}"
            )
        return cls(degree, images)


@dataclass(frozen=True, slots=True)
class CoverTopology:
    """Genus and singularity data of the cover.

    ``orders`` lists one integer per cycle of a, b, c and d: a cycle of
    length L sitting over a pole contributes L - 2.  Length-1 cycles give
    poles (order -1) and length-2 cycles give order-0 marked points, which
    are kept in the multiset (they are removable; ``removable_count`` says
    how many there are) so the stratum label stays unambiguous.
    """

    genus: int
    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        if sum(self.orders) != 4 * self.genus - 4:
            raise ValueError(
                f"order sum {sum(self.orders)} != 4*genus-4 = {4 * self.genus - 4}"
            )

    @property
    def removable_count(self) -> int:
        return sum(1 for o in self.orders if o == 0)


def fourth_element(t: PtsTriple) -> Permutation:
    """d = (abc)^-1, the monodromy around the fourth pole; abcd = 1."""
    return compose(compose(t.a, t.b), t.c).inverse()


def is_connected(t: PtsTriple) -> bool:
    """True iff <a, b, c> is transitive (the cover is one surface)."""
    n = t.degree
    seen = bytearray(n)
    seen[0] = 1
    stack = [0]
    count = 1
    tables = (t.a.image, t.b.image, t.c.image)
    while stack:
        x = stack.pop()
        for tab in tables:
            y = tab[x]
            if not seen[y]:
                seen[y] = 1
                count += 1
                stack.append(y)
    return count == n


def conjugate_all(t: PtsTriple, g: Permutation) -> PtsTriple:
    """Simultaneous conjugation (g^-1 a g, g^-1 b g, g^-1 c g)."""
    return PtsTriple(conjugate(t.a, g), conjugate(t.b, g), conjugate(t.c, g))


def canonicalize(t: PtsTriple) -> CanonicalKey:
    """Least BFS-relabelled form of a transitive triple over all base points.

    Cost is O(6 n^2) table operations: each of the n base points triggers one
    BFS touching every point once per generator direction, plus an O(n)
    relabelling of the three tables.
    """
    n = t.degree
    imgs = (t.a.image, t.b.image, t.c.image)
    tables = imgs + tuple(inverse_images(im) for im in imgs)
    best: tuple[int, ...] | None = None
    for base in range(n):
        # BFS discovery order; labels[x] is the new name of old point x.
        labels = [-1] * n
        labels[base] = 0
        order = [base]
        i = 0
        while i < len(order):
            x = order[i]
            for tab in tables:
                y = tab[x]
                if labels[y] < 0:
                    labels[y] = len(order)
                    order.append(y)
            i += 1
        if len(order) < n:
            raise NotTransitive(
                f"triple is not transitive (orbit of point 1 has size {len(order)})"
            )
        flat = [0] * (3 * n)
        offset = 0
        for im in imgs:
            for x in range(n):
                flat[offset + labels[x]] = labels[im[x]]
            offset += n
        cand = tuple(flat)
        if best is None or cand < best:
            best = cand
    assert best is not None
    return CanonicalKey(n, best)


def topology(t: PtsTriple) -> CoverTopology:
    """Genus and singularity orders of the connected cover.

    Euler characteristic bookkeeping for a degree-n cover of the sphere
    branched over four points: 2 - 2g = t(a) + t(b) + t(c) + t(d) - 2n where
    t counts disjoint cycles.
    """
    if not is_connected(t):
        raise NotTransitive("topology requires a connected cover")
    n = t.degree
    four = (t.a, t.b, t.c, fourth_element(t))
    total = sum(cycle_count(p) for p in four)
    two_minus_2g = total - 2 * n
    genus2 = 2 - two_minus_2g
    assert genus2 % 2 == 0 and genus2 >= 0, (n, total)
    orders = sorted(
        (ln - 2 for p in four for ln in cycle_type(p)),
        reverse=True,
    )
    return CoverTopology(genus=genus2 // 2, orders=tuple(orders))


def parse_triple(text: str) -> PtsTriple:
    """Parse "n: (cycles); (cycles); (cycles)"."""
    head, sep, rest = text.partition(":")
    if not sep:
        raise ParseError(f"missing degree prefix in triple {text!r}")
    try:
        degree = int(head.strip())
    except ValueError as exc:
        raise ParseError(f"bad degree in triple {text!r}") from exc
    parts = rest.split(";")
    if len(parts) != 3:
        raise ParseError(
            f"expected three ';'-separated permutations, got {len(parts)}"
        )
    a, b, c = (parse_cycles(part, degree) for part in parts)
    return PtsTriple(a, b, c)


def format_triple(t: PtsTriple) -> str:
    return f"{t.degree}: " + "; ".join(format_cycles(p) for p in t.perms)
