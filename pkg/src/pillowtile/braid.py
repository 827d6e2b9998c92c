"""The braid action on triples and single-cylinder certification.

The two generator moves and their inverses act on triples by

    s1:      (a, b, c) -> (b, b^-1 a b, c)
    s2:      (a, b, c) -> (a, c, c^-1 b c)
    s1^-1:   (a, b, c) -> (a b a^-1, a, c)
    s2^-1:   (a, b, c) -> (a, b c b^-1, b)

and satisfy the braid relation s1 s2 s1 = s2 s1 s2.  All four moves preserve
the product abc and commute with simultaneous conjugation, so the action
descends to canonical keys.

A triple describes a single-cylinder surface exactly when, for EVERY braid
word w, the tuple (a', b', c') = w . (a, b, c) has a'b' a full n-cycle.  The
braid group is infinite, but the condition only depends on the conjugation
class of the image tuple, and the four moves act by bijections on the finite
set of classes.  The set of classes reachable from the input is therefore
exactly the breadth-first closure computed here, and checking the product
condition once per visited class covers every group element.

The orbit walker is deterministic: frontiers are expanded in sorted key
order and the recorded word per key is the lexicographically least among the
shortest (letter order s1 < s1^-1 < s2 < s2^-1).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum

from .perm import ParseError, Permutation, compose, conjugate, is_full_cycle
from .triple import CanonicalKey, PtsTriple, canonicalize, format_triple

__all__ = [
    "BraidLetter",
    "BraidWord",
    "CertifyMode",
    "CylinderCertificate",
    "DEFAULT_ORBIT_CAP",
    "OrbitScan",
    "OrbitTooLarge",
    "Verdict",
    "apply_letter",
    "apply_sigma1",
    "apply_sigma1_inv",
    "apply_sigma2",
    "apply_sigma2_inv",
    "apply_word",
    "braid_orbit",
    "certify_one_cylinder",
    "inverse_word",
    "orbit_scan",
    "pairwise_products_full_cycles",
    "word_from_text",
    "word_to_text",
]

DEFAULT_ORBIT_CAP = 10**8


class OrbitTooLarge(RuntimeError):
    """Raised when an orbit walk exceeds its key budget."""


class BraidLetter(IntEnum):
    S1 = 0
    S1_INV = 1
    S2 = 2
    S2_INV = 3

    def inverse(self) -> "BraidLetter":
        return BraidLetter(self.value ^ 1)


BraidWord = tuple[BraidLetter, ...]

_LETTER_TEXT = {
    BraidLetter.S1: "s1",
    BraidLetter.S1_INV: "S1",
    BraidLetter.S2: "s2",
    BraidLetter.S2_INV: "S2",
}
_TEXT_LETTER = {v: k for k, v in _LETTER_TEXT.items()}


def word_to_text(word: BraidWord) -> str:
    """Serialise a braid word; capitals are inverse letters, "" is empty."""
    return "".join(_LETTER_TEXT[let] for let in word)


def word_from_text(text: str) -> BraidWord:
    stripped = text.strip()
    if len(stripped) % 2 != 0:
        raise ParseError(f"braid word has odd length: {text!r}")
    letters = []
    for i in range(0, len(stripped), 2):
        tok = stripped[i : i + 2]
        if tok not in _TEXT_LETTER:
            raise ParseError(f"bad braid letter {tok!r} in {text!r}")
        letters.append(_TEXT_LETTER[tok])
    return tuple(letters)


def inverse_word(word: BraidWord) -> BraidWord:
    return tuple(let.inverse() for let in reversed(word))


def apply_sigma1(t: PtsTriple) -> PtsTriple:
    return PtsTriple(t.b, conjugate(t.a, t.b), t.c)


def apply_sigma2(t: PtsTriple) -> PtsTriple:
    return PtsTriple(t.a, t.c, conjugate(t.b, t.c))


def apply_sigma1_inv(t: PtsTriple) -> PtsTriple:
    return PtsTriple(compose(compose(t.a, t.b), t.a.inverse()), t.a, t.c)


def apply_sigma2_inv(t: PtsTriple) -> PtsTriple:
    return PtsTriple(t.a, compose(compose(t.b, t.c), t.b.inverse()), t.b)


_LETTER_FUNCS = (apply_sigma1, apply_sigma1_inv, apply_sigma2, apply_sigma2_inv)


def apply_letter(t: PtsTriple, letter: BraidLetter) -> PtsTriple:
    return _LETTER_FUNCS[letter.value](t)


def apply_word(t: PtsTriple, word: BraidWord) -> PtsTriple:
    for letter in word:
        t = _LETTER_FUNCS[letter.value](t)
    return t


def pairwise_products_full_cycles(t: PtsTriple) -> bool:
    """True iff ab, bc and ac are all full cycles; a cheap necessary
    condition for the single-cylinder property."""
    return (
        is_full_cycle(compose(t.a, t.b))
        and is_full_cycle(compose(t.b, t.c))
        and is_full_cycle(compose(t.a, t.c))
    )


# ---------------------------------------------------------------------------
# orbit enumeration


@dataclass(frozen=True, slots=True)
class OrbitScan:
    """Result of one breadth-first orbit walk over canonical keys.

    ``words`` maps every visited key to its shortest discovered word.  When
    the walk stopped at a key whose a'b' product is not a full cycle,
    ``failure_key``/``failure_word`` name it and ``words`` covers only the
    keys visited up to that point (all genuinely in the orbit).
    """

    words: dict[CanonicalKey, BraidWord]
    failure_key: CanonicalKey | None
    failure_word: BraidWord | None

    @property
    def complete(self) -> bool:
        return self.failure_key is None


def _key_product_ok(key: CanonicalKey) -> bool:
    n = key.degree
    a = key.images[:n]
    b = key.images[n : 2 * n]
    # inline is_full_cycle(compose(a, b)) on raw tables
    ln = 1
    j = a[b[0]]
    while j != 0:
        j = a[b[j]]
        ln += 1
    return ln == n


def orbit_scan(
    t: PtsTriple,
    *,
    max_keys: int = DEFAULT_ORBIT_CAP,
    stop_on_product_failure: bool = False,
) -> OrbitScan:
    """Breadth-first closure of canonicalize(t) under the four moves.

    Deterministic: each frontier is processed in sorted key order, and a key
    reached several times at the same depth keeps the least word.
    """
    start = canonicalize(t)
    words: dict[CanonicalKey, BraidWord] = {start: ()}
    if stop_on_product_failure and not _key_product_ok(start):
        return OrbitScan(words, start, ())
    frontier: dict[CanonicalKey, BraidWord] = {start: ()}
    while frontier:
        nxt: dict[CanonicalKey, BraidWord] = {}
        for key in sorted(frontier):
            word = frontier[key]
            trip = key.to_triple()
            for letter in BraidLetter:
                new_key = canonicalize(_LETTER_FUNCS[letter.value](trip))
                if new_key in words:
                    continue
                cand = word + (letter,)
                old = nxt.get(new_key)
                if old is None:
                    if len(words) + len(nxt) >= max_keys:
                        raise OrbitTooLarge(
                            f"orbit exceeds the cap of {max_keys} keys"
                        )
                    nxt[new_key] = cand
                elif cand < old:
                    nxt[new_key] = cand
        for key in sorted(nxt):
            words[key] = nxt[key]
            if stop_on_product_failure and not _key_product_ok(key):
                return OrbitScan(words, key, nxt[key])
        frontier = nxt
    return OrbitScan(words, None, None)


def braid_orbit(
    t: PtsTriple, *, max_keys: int = DEFAULT_ORBIT_CAP
) -> dict[CanonicalKey, BraidWord]:
    """All canonical keys in the braid orbit of t, each with a shortest word."""
    return orbit_scan(t, max_keys=max_keys).words


# ---------------------------------------------------------------------------
# certification


class Verdict(str, Enum):
    ONE_CYLINDER = "one-cylinder"
    NOT_ONE_CYLINDER = "not-one-cylinder"
    UNDECIDED = "undecided"


class CertifyMode(str, Enum):
    AUTO = "auto"
    STRUCTURAL = "structural"
    EXHAUSTIVE = "exhaustive"


@dataclass(frozen=True, slots=True)
class CylinderCertificate:
    """Verdict on the single-cylinder property of one triple.

    Positive verdicts carry the deciding route in ``reason`` ("structural"
    or "exhaustive") and, for exhaustive decisions, the orbit size.  Negative
    verdicts carry a witness word and the triple it produces, whose first
    two coordinates multiply to a non-full-cycle; replaying the word on the
    input reproduces the witness exactly.
    """

    triple: PtsTriple
    verdict: Verdict
    mode: CertifyMode
    reason: str | None = None
    orbit_size: int | None = None
    witness_word: BraidWord | None = None
    witness_triple: PtsTriple | None = None

    def to_json_dict(self) -> dict:
        doc: dict = {
            "schema": "pillowtile.cert.v1",
            "degree": self.triple.degree,
            "triple": format_triple(self.triple),
            "verdict": self.verdict.value,
            "mode": self.mode.value,
        }
        if self.reason is not None:
            doc["reason"] = self.reason
        if self.orbit_size is not None:
            doc["orbit_size"] = self.orbit_size
        if self.witness_word is not None:
            doc["witness_word"] = word_to_text(self.witness_word)
        if self.witness_triple is not None:
            doc["witness_triple"] = format_triple(self.witness_triple)
        return doc


def _structural_positive(t: PtsTriple) -> bool:
    """Sufficient conditions under which every orbit member passes.

    Full-cycle triples with product 1: the moves replace coordinates by
    conjugates, so every orbit member is again three full cycles with
    a'b'c' = 1, hence a'b' = c'^-1 is a full cycle.

    One identity coordinate, the other two full cycles with full-cycle
    ordered product: the product abc is move-invariant and conjugacy classes
    of the coordinate multiset are preserved, so every member keeps one
    identity coordinate, two full cycles, and abc a full cycle; whichever
    position the identity sits in, a'b' is either abc or a lone full-cycle
    coordinate.
    """
    n = t.degree
    a, b, c = t.perms
    abc = compose(compose(a, b), c)
    if is_full_cycle(a) and is_full_cycle(b) and is_full_cycle(c):
        if abc.is_identity():
            return True
    idents = [p.is_identity() for p in t.perms]
    if sum(idents) == 1:
        others = [p for p in t.perms if not p.is_identity()]
        if all(is_full_cycle(p) for p in others) and is_full_cycle(abc):
            return True
    return False


def certify_one_cylinder(
    t: PtsTriple,
    mode: CertifyMode = CertifyMode.AUTO,
    *,
    max_keys: int = DEFAULT_ORBIT_CAP,
) -> CylinderCertificate:
    """Certify or refute the single-cylinder property.

    Exhaustive mode walks the whole braid orbit and checks a'b' on every
    member, returning the first failing key's word as a witness.  Structural
    mode applies the two sufficient closure conditions and returns UNDECIDED
    when neither holds.  Auto tries structural first.
    """
    from .triple import NotTransitive, is_connected

    if not is_connected(t):
        raise NotTransitive("certification requires a connected cover")

    if mode in (CertifyMode.STRUCTURAL, CertifyMode.AUTO):
        if _structural_positive(t):
            return CylinderCertificate(
                t, Verdict.ONE_CYLINDER, mode, reason="structural"
            )
        if mode is CertifyMode.STRUCTURAL:
            return CylinderCertificate(t, Verdict.UNDECIDED, mode)

    scan = orbit_scan(t, max_keys=max_keys, stop_on_product_failure=True)
    if scan.complete:
        return CylinderCertificate(
            t,
            Verdict.ONE_CYLINDER,
            mode,
            reason="exhaustive",
            orbit_size=len(scan.words),
        )
    assert scan.failure_word is not None
    witness = apply_word(t, scan.failure_word)
    return CylinderCertificate(
        t,
        Verdict.NOT_ONE_CYLINDER,
        mode,
        witness_word=scan.failure_word,
        witness_triple=witness,
    )
