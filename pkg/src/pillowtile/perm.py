"""Exact arithmetic for permutations of {1..n}.

A permutation is an immutable value wrapping a 0-based image table; point i
maps to ``image[i]``.  Points are 1-based in every text format and 0-based
everywhere else, with the conversion happening only at the parse/format
boundary.

Composition is right-to-left: ``compose(p, q)`` maps x to p(q(x)), so
``compose(p, q)`` realises the product written "pq".  This convention is
pinned by ``tests`` against known cycle data and must not be changed.

Low-level helpers operating on raw image tuples (``compose_images``,
``inverse_images``, ...) are exposed for hot loops; the ``Permutation``
methods delegate to them.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

__all__ = [
    "DegreeMismatch",
    "ParseError",
    "Permutation",
    "commutator",
    "compose",
    "compose_images",
    "conjugate",
    "cycle_count",
    "cycle_type",
    "cycles_of_image",
    "format_cycles",
    "format_one_line",
    "from_cycle_word",
    "identity",
    "inverse",
    "inverse_images",
    "is_full_cycle",
    "parse_cycles",
    "parse_one_line",
    "sign",
]


class DegreeMismatch(ValueError):
    """Raised when an operation mixes permutations of different degrees."""


class ParseError(ValueError):
    """Raised for malformed permutation or triple text."""


_FULL_SETS: dict[int, frozenset[int]] = {}


def _full_set(n: int) -> frozenset[int]:
    s = _FULL_SETS.get(n)
    if s is None:
        s = _FULL_SETS[n] = frozenset(range(n))
    return s


# ---------------------------------------------------------------------------
# raw image-table helpers (0-based)


def compose_images(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """Image table of the product pq, i.e. x -> p(q(x))."""
    return tuple(p[x] for x in q)


def inverse_images(p: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def cycles_of_image(p: Sequence[int]) -> list[list[int]]:
    """Disjoint cycles (0-based, fixed points included), each starting at its
    least element, ordered by least element."""
    n = len(p)
    seen = [False] * n
    out = []
    for i in range(n):
        if seen[i]:
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            seen[j] = True
            cyc.append(j)
            j = p[j]
        out.append(cyc)
    return out


def _cycle_lengths(p: Sequence[int]) -> list[int]:
    n = len(p)
    seen = [False] * n
    out = []
    for i in range(n):
        if seen[i]:
            continue
        ln = 0
        j = i
        while not seen[j]:
            seen[j] = True
            ln += 1
            j = p[j]
        out.append(ln)
    return out


def _is_full_cycle_image(p: Sequence[int]) -> bool:
    n = len(p)
    ln = 1
    j = p[0]
    while j != 0:
        j = p[j]
        ln += 1
        if ln > n:  # pragma: no cover - impossible for a bijection
            return False
    return ln == n


# ---------------------------------------------------------------------------
# the value type


@dataclass(frozen=True, slots=True)
class Permutation:
    """A bijection of {1..n} stored as a 0-based image table.

    Degree is carried explicitly by the table length, and fixed points are
    always represented, so (1 2) in Sym(5) and (1 2) in Sym(3) are distinct
    values.  Instances are immutable and safe to share across threads.
    """

    image: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.image)
        if n == 0:
            raise ValueError("degree must be at least 1")
        if set(self.image) != _full_set(n):
            raise ValueError(f"not a bijection of 0..{n - 1}: {self.image!r}")

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @property
    def degree(self) -> int:
        return len(self.image)

    def apply(self, point: int) -> int:
        """Image of a 1-based point, 1-based."""
        if not 1 <= point <= len(self.image):
            raise ValueError(f"point {point} out of range 1..{len(self.image)}")
        return self.image[point - 1] + 1

    def inverse(self) -> "Permutation":
        return Permutation(inverse_images(self.image))

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.image))

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = tuple(range(len(self.image)))
        base = self.image
        while k:
            if k & 1:
                result = compose_images(base, result)
            base = compose_images(base, base)
            k >>= 1
        return Permutation(result)

    def order(self) -> int:
        """Multiplicative order (lcm of cycle lengths)."""
        from math import lcm

        return lcm(*_cycle_lengths(self.image))

    def __str__(self) -> str:
        return format_cycles(self)

    def __repr__(self) -> str:
        return f"Permutation.of({self.degree}, {format_cycles(self)!r})"

    @classmethod
    def of(cls, degree: int, text: str) -> "Permutation":
        """Shorthand for :func:`parse_cycles`."""
        return parse_cycles(text, degree)


def identity(degree: int) -> Permutation:
    return Permutation.identity(degree)


def from_cycle_word(degree: int, points: Iterable[int]) -> Permutation:
    """Single cycle from a 1-based point list; remaining points fixed."""
    word = [p - 1 for p in points]
    img = list(range(degree))
    for i, x in enumerate(word):
        if not 0 <= x < degree:
            raise ValueError(f"point {x + 1} out of range 1..{degree}")
        img[x] = word[(i + 1) % len(word)]
    return Permutation(tuple(img))


# ---------------------------------------------------------------------------
# operations


def _require_equal_degrees(p: Permutation, q: Permutation) -> None:
    if len(p.image) != len(q.image):
        raise DegreeMismatch(
            f"degree mismatch: {len(p.image)} vs {len(q.image)}"
        )


def compose(p: Permutation, q: Permutation) -> Permutation:
    """The product pq: apply q first, then p."""
    _require_equal_degrees(p, q)
    return Permutation(compose_images(p.image, q.image))


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def conjugate(p: Permutation, g: Permutation) -> Permutation:
    """The conjugate g^-1 p g; preserves cycle type."""
    _require_equal_degrees(p, g)
    gi = inverse_images(g.image)
    pi = p.image
    gg = g.image
    return Permutation(tuple(gi[pi[gg[x]]] for x in range(len(gg))))


def commutator(p: Permutation, q: Permutation) -> Permutation:
    """[p, q] = p^-1 q^-1 p q; the identity exactly when p and q commute."""
    _require_equal_degrees(p, q)
    pi = inverse_images(p.image)
    qi = inverse_images(q.image)
    return Permutation(
        compose_images(compose_images(pi, qi), compose_images(p.image, q.image))
    )


def cycle_type(p: Permutation) -> tuple[int, ...]:
    """Cycle lengths in decreasing order, fixed points included as 1s."""
    return tuple(sorted(_cycle_lengths(p.image), reverse=True))


def cycle_count(p: Permutation) -> int:
    """Number of disjoint cycles, fixed points included."""
    return len(_cycle_lengths(p.image))


def sign(p: Permutation) -> int:
    """(-1)^(degree - cycle_count)."""
    return 1 if (len(p.image) - cycle_count(p)) % 2 == 0 else -1


def is_full_cycle(p: Permutation) -> bool:
    """True iff p is a single cycle through all n points."""
    return _is_full_cycle_image(p.image)


# ---------------------------------------------------------------------------
# text formats

_CYCLE_RE = re.compile(r"\(\s*((?:\d+(?:[\s,]+\d+)*)?)\s*\)")


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse disjoint-cycle notation such as "(1 2 3)(4 5)".

    Omitted points are fixed; "()" is the identity.  Cycles may be separated
    by whitespace; points may be separated by spaces or commas.
    """
    if degree < 1:
        raise ParseError(f"degree must be at least 1, got {degree}")
    stripped = text.strip()
    if not stripped:
        raise ParseError("empty permutation text")
    img = list(range(degree))
    used: set[int] = set()
    pos = 0
    saw_cycle = False
    while pos < len(stripped):
        if stripped[pos].isspace():
            pos += 1
            continue
        m = _CYCLE_RE.match(stripped, pos)
        if m is None:
            raise ParseError(f"malformed cycle text at {stripped[pos:]!r}")
        saw_cycle = True
        body = m.group(1)
        if body:
            points = [int(tok) for tok in re.split(r"[\s,]+", body)]
            for pt in points:
                if not 1 <= pt <= degree:
                    raise ParseError(
                        f"point {pt} out of range 1..{degree} in {text!r}"
                    )
                if pt - 1 in used:
                    raise ParseError(f"repeated point {pt} in {text!r}")
                used.add(pt - 1)
            if len(points) > 1:
                w = [pt - 1 for pt in points]
                for i, x in enumerate(w):
                    img[x] = w[(i + 1) % len(w)]
        pos = m.end()
    if not saw_cycle:
        raise ParseError(f"no cycles found in {text!r}")
    return Permutation(tuple(img))


def format_cycles(p: Permutation) -> str:
    """Canonical disjoint-cycle text: each cycle starts at its least element,
    cycles are ordered by least element, fixed points are omitted, and the
    identity prints as "()"."""
    parts = [
        "(" + " ".join(str(x + 1) for x in cyc) + ")"
        for cyc in cycles_of_image(p.image)
        if len(cyc) > 1
    ]
    return "".join(parts) if parts else "()"


def parse_one_line(text: str) -> Permutation:
    """Parse the one-line image format "n: i1 i2 ... in" (1-based images)."""
    head, sep, rest = text.partition(":")
    if not sep:
        raise ParseError(f"missing degree prefix in {text!r}")
    try:
        degree = int(head.strip())
    except ValueError as exc:
        raise ParseError(f"bad degree in {text!r}") from exc
    toks = rest.split()
    if len(toks) != degree:
        raise ParseError(
            f"expected {degree} images, got {len(toks)} in {text!r}"
        )
    try:
        images = tuple(int(t) - 1 for t in toks)
    except ValueError as exc:
        raise ParseError(f"bad image value in {text!r}") from exc
    if any(not 0 <= v < degree for v in images) or len(set(images)) != degree:
        raise ParseError(f"images are not a bijection of 1..{degree}: {text!r}")
    return Permutation(images)


def format_one_line(p: Permutation) -> str:
    return f"{p.degree}: " + " ".join(str(v + 1) for v in p.image)
