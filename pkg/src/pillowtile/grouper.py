"""Monodromy-group analysis: order, block systems, primitivity, naming.

The order of <gens> is computed with a deterministic stabilizer chain (no
randomisation; base points are chosen as the least moved point at each
level), so reports are reproducible.  Python integers make the order exact at
any size.  Degrees are small by design (censuses stop well below 16), so no
chain compression is attempted.

The alternating-group shortcut ("a primitive group of degree n containing a
prime-length cycle that fixes at least 3 points must contain the alternating
group") is used only as a sound accelerator; naming always rests on the
computed order.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

from .perm import (
    Permutation,
    compose,
    compose_images,
    cycle_type,
    identity,
    inverse_images,
    is_full_cycle,
    sign,
)
from .triple import NotTransitive

__all__ = [
    "DEFAULT_SEED",
    "GroupKind",
    "GroupReport",
    "JordanVerdict",
    "StabilizerChain",
    "block_systems",
    "group_order",
    "identify",
    "jordan_alternating_test",
]

DEFAULT_SEED = 1729


# ---------------------------------------------------------------------------
# stabilizer chain


class StabilizerChain:
    """Deterministic base-and-strong-generating-set representation of a
    permutation group given by generators.

    ``_added[i]`` holds the strong generators first attached at level i; the
    generating set actually used at level i is the union of ``_added[j]`` for
    j >= i, since a generator attached deeper fixes a longer base prefix.
    Verification sweeps bottom-up and re-descends whenever a Schreier
    generator fails to sift, which is the classic deterministic algorithm.
    """

    def __init__(self, generators: Sequence[Permutation]) -> None:
        if not generators:
            raise ValueError("at least one generator is required")
        degrees = {g.degree for g in generators}
        if len(degrees) != 1:
            raise ValueError(f"generators have mixed degrees {sorted(degrees)}")
        self.degree = degrees.pop()
        self._identity = tuple(range(self.degree))
        self._bases: list[int] = []
        self._added: list[list[tuple[int, ...]]] = []
        self._transversals: list[dict[int, tuple[int, ...]]] = []
        seeds = [g.image for g in generators if g.image != self._identity]
        if seeds:
            base = min(
                i for g in seeds for i, v in enumerate(g) if v != i
            )
            self._bases.append(base)
            self._added.append(seeds)
            self._transversals.append({})
            self._build(0)

    def _gens_at(self, index: int) -> list[tuple[int, ...]]:
        return [g for lst in self._added[index:] for g in lst]

    def _sift(self, img: tuple[int, ...], start: int) -> tuple[int, ...]:
        for i in range(start, len(self._bases)):
            gamma = img[self._bases[i]]
            rep = self._transversals[i].get(gamma)
            if rep is None:
                return img
            img = compose_images(inverse_images(rep), img)
        return img

    def _build(self, start: int) -> None:
        i = start
        while i >= 0:
            gens = self._gens_at(i)
            base = self._bases[i]
            trans = {base: self._identity}
            queue = [base]
            qi = 0
            while qi < len(queue):
                gamma = queue[qi]
                qi += 1
                u = trans[gamma]
                for s in gens:
                    delta = s[gamma]
                    if delta not in trans:
                        trans[delta] = compose_images(s, u)
                        queue.append(delta)
            self._transversals[i] = trans
            new_gen = None
            for gamma in sorted(trans):
                u = trans[gamma]
                for s in gens:
                    carrier = trans[s[gamma]]
                    schreier = compose_images(
                        inverse_images(carrier), compose_images(s, u)
                    )
                    if schreier == self._identity:
                        continue
                    residue = self._sift(schreier, i + 1)
                    if residue != self._identity:
                        new_gen = residue
                        break
                if new_gen is not None:
                    break
            if new_gen is None:
                i -= 1
                continue
            j = i + 1
            if j == len(self._bases):
                self._bases.append(
                    next(k for k, v in enumerate(new_gen) if v != k)
                )
                self._added.append([])
                self._transversals.append({})
            self._added[j].append(new_gen)
            i = j

    def order(self) -> int:
        n = 1
        for trans in self._transversals:
            n *= len(trans)
        return n

    def contains(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            return False
        return self._sift(p.image, 0) == self._identity

    def elements(self) -> Iterator[Permutation]:
        """Every group element, as products of transversal representatives.
        Only sensible for small orders."""

        def rec(index: int, img: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
            if index < 0:
                yield img
                return
            for rep in self._transversals[index].values():
                yield from rec(index - 1, compose_images(rep, img))

        if not self._bases:
            yield Permutation(self._identity)
            return
        for img in rec(len(self._bases) - 1, self._identity):
            yield Permutation(img)


def group_order(gens: Sequence[Permutation]) -> int:
    """Exact order of the group generated by ``gens``."""
    return StabilizerChain(gens).order()


# ---------------------------------------------------------------------------
# transitivity and block systems


def _orbit_of_zero(gens: Sequence[Permutation]) -> set[int]:
    seen = {0}
    stack = [0]
    tables = [g.image for g in gens]
    while stack:
        x = stack.pop()
        for tab in tables:
            y = tab[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def is_transitive(gens: Sequence[Permutation]) -> bool:
    return len(_orbit_of_zero(gens)) == gens[0].degree


def _minimal_block_partition(
    gens: Sequence[Permutation], alpha: int, beta: int
) -> tuple[tuple[int, ...], ...]:
    """Finest invariant partition in which alpha and beta share a block
    (classic union-find block algorithm)."""
    n = gens[0].degree
    parent = list(range(n))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    ra, rb = find(alpha), find(beta)
    parent[rb] = ra
    queue = [rb]
    tables = [g.image for g in gens]
    while queue:
        gamma = queue.pop()
        rep = find(gamma)
        for tab in tables:
            x, y = find(tab[gamma]), find(tab[rep])
            if x != y:
                parent[y] = x
                queue.append(y)
    blocks: dict[int, list[int]] = {}
    for x in range(n):
        blocks.setdefault(find(x), []).append(x)
    return tuple(
        tuple(sorted(block)) for block in sorted(blocks.values(), key=min)
    )


def block_systems(
    gens: Sequence[Permutation],
) -> list[tuple[tuple[int, ...], ...]]:
    """Deduplicated nontrivial minimal block systems (0-based partitions),
    one candidate per pair {1, p}.  Empty exactly when the transitive group
    is primitive."""
    if not is_transitive(gens):
        raise NotTransitive("block systems are defined for transitive groups")
    n = gens[0].degree
    seen: set[tuple[tuple[int, ...], ...]] = set()
    systems = []
    for beta in range(1, n):
        part = _minimal_block_partition(gens, 0, beta)
        if len(part) == 1 or part in seen:
            continue
        seen.add(part)
        if __debug__:
            _assert_invariant_partition(gens, part)
        systems.append(part)
    systems.sort(key=lambda part: (len(part), part))
    return systems


def _assert_invariant_partition(
    gens: Sequence[Permutation], part: tuple[tuple[int, ...], ...]
) -> None:
    block_of = {}
    for bi, block in enumerate(part):
        for x in block:
            block_of[x] = bi
    for g in gens:
        for block in part:
            images = {block_of[g.image[x]] for x in block}
            assert len(images) == 1, (part, str(g))


# ---------------------------------------------------------------------------
# alternating-group shortcut


class JordanVerdict(Enum):
    CONTAINS_ALTERNATING = "contains-alternating"
    INCONCLUSIVE = "inconclusive"


def _prime_cycle_witness(p: Permutation) -> Permutation | None:
    """A power of p that is a single prime-length cycle fixing >= 3 points,
    if one exists."""
    n = p.degree
    lengths = cycle_type(p)
    for ln in sorted(set(lengths)):
        if ln < 2 or lengths.count(ln) != 1 or n - ln < 3:
            continue
        if any(ln % d == 0 for d in range(2, ln)):
            continue  # not prime
        k = math.lcm(*(x for x in lengths if x != ln)) if len(lengths) > 1 else 1
        if k % ln == 0:
            continue
        return p**k
    return None


def jordan_alternating_test(
    gens: Sequence[Permutation],
    seed: int = DEFAULT_SEED,
    random_tries: int = 200,
) -> JordanVerdict:
    """One-sided alternating-membership test.

    CONTAINS_ALTERNATING is returned only when the group is primitive and a
    group element that is a single prime-length cycle with at least three
    fixed points has actually been constructed; INCONCLUSIVE otherwise.
    Candidate elements are generators, their powers, commutators of
    generator pairs, then seeded random products.
    """
    if not is_transitive(gens):
        raise NotTransitive("the alternating-group test needs transitivity")
    if block_systems(gens):
        return JordanVerdict.INCONCLUSIVE

    def candidates() -> Iterator[Permutation]:
        for g in gens:
            yield g
            order = g.order()
            for k in range(2, min(order, 12)):
                yield g**k
        for i, g in enumerate(gens):
            for j, h in enumerate(gens):
                if i == j:
                    continue
                for ge in (g, g**2):
                    for he in (h, h**2):
                        gi = ge.inverse()
                        hi = he.inverse()
                        yield compose(compose(gi, hi), compose(ge, he))
        rng = random.Random(seed)
        n = gens[0].degree
        for _ in range(random_tries):
            word_len = rng.randrange(2, 12)
            prod = identity(n)
            for _ in range(word_len):
                prod = compose(prod, rng.choice(gens))
            yield prod

    for cand in candidates():
        witness = _prime_cycle_witness(cand)
        if witness is not None:
            return JordanVerdict.CONTAINS_ALTERNATING
    return JordanVerdict.INCONCLUSIVE


# ---------------------------------------------------------------------------
# naming


class GroupKind(str, Enum):
    CYCLIC = "cyclic"
    DIHEDRAL = "dihedral"
    ALTERNATING = "alternating"
    SYMMETRIC = "symmetric"
    OTHER = "other"


@dataclass(frozen=True, slots=True)
class GroupReport:
    """Transitivity, primitivity, exact order and a name for <gens>.

    The four named families are reported only for transitive groups; every
    other case is Other(order, primitivity).  ``minimal_block_systems`` uses
    1-based points.
    """

    degree: int
    transitive: bool
    primitive: bool
    minimal_block_systems: tuple[tuple[tuple[int, ...], ...], ...]
    order: int
    kind: GroupKind
    name: str

    def to_json_dict(self) -> dict:
        return {
            "degree": self.degree,
            "transitive": self.transitive,
            "primitive": self.primitive,
            "minimal_block_systems": [
                [list(block) for block in part]
                for part in self.minimal_block_systems
            ],
            "order": self.order,
            "kind": self.kind.value,
            "name": self.name,
        }


def _is_cyclic_regular(chain: StabilizerChain, n: int) -> bool:
    # order == n assumed; cyclic iff some element has full order
    return any(is_full_cycle(e) for e in chain.elements())


def _is_dihedral(chain: StabilizerChain, n: int) -> bool:
    # order == 2n assumed
    elements = list(chain.elements())
    rotations = [e for e in elements if e.order() == n]
    if not rotations:
        return False
    r = rotations[0]
    power_set = {(r**k).image for k in range(n)}
    ri = r.inverse()
    for s in elements:
        if s.image in power_set:
            continue
        if (s * s).is_identity() and compose(compose(s, r), s) == ri:
            return True
    return False


def identify(
    gens: Sequence[Permutation], seed: int = DEFAULT_SEED
) -> GroupReport:
    """Full report on <gens>; the name is decided by the exact order.

    When the order equals that of the alternating group and the report names
    it, the one-sided alternating test is run as a cross-check: it may stay
    inconclusive, but it must never contradict the order.
    """
    n = gens[0].degree
    chain = StabilizerChain(gens)
    order = chain.order()
    transitive = is_transitive(gens)
    if transitive:
        systems = tuple(block_systems(gens))
        primitive = not systems
    else:
        systems = ()
        primitive = False

    kind = GroupKind.OTHER
    name = f"Other(order={order}, {'primitive' if primitive else 'imprimitive'})"
    half = math.factorial(n) // 2
    if transitive:
        if order == n and _is_cyclic_regular(chain, n):
            kind, name = GroupKind.CYCLIC, f"Cyclic({n})"
        elif n >= 3 and order == 2 * n and _is_dihedral(chain, n):
            kind, name = GroupKind.DIHEDRAL, f"Dihedral({n})"
        elif order == half and all(sign(g) == 1 for g in gens):
            kind, name = GroupKind.ALTERNATING, f"Alternating({n})"
        elif order == math.factorial(n):
            kind, name = GroupKind.SYMMETRIC, f"Symmetric({n})"

    if kind is GroupKind.ALTERNATING and primitive:
        verdict = jordan_alternating_test(gens, seed=seed)
        if verdict is JordanVerdict.CONTAINS_ALTERNATING:
            assert order in (half, math.factorial(n))

    return GroupReport(
        degree=n,
        transitive=transitive,
        primitive=primitive,
        minimal_block_systems=tuple(
            tuple(tuple(x + 1 for x in block) for block in part)
            for part in systems
        ),
        order=order,
        kind=kind,
        name=name,
    )
