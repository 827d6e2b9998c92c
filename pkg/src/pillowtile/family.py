"""The explicit counterexample family and the even-degree obstruction.

For odd n >= 5 the builder produces the triple

    a = (1 2 ... n),   b = a^-1 z,   c = z^-1,

where z is the zigzag full cycle (1, n, 2, n-1, 3, n-2, ...) ending at
floor(n/2) + 1.  By construction ab = z exactly and abc = 1, and the builder
asserts that b is itself a full cycle.  All three coordinates being full
cycles with product 1, the triple is structurally single-cylinder, and the
group it generates is non-cyclic: conjugating b^2 by a moves it, the witness
being a 3-cycle supported on {2, n, floor(n/2) + 1}.

For even n no single-cylinder cover exists at all: cycle counts satisfy
t(pq) = t(p) + t(q) - n (mod 2), two of t(a), t(b), t(c) share parity by
pigeonhole, and the product of that pair then has even cycle count, so it
cannot be a full cycle (whose count is 1).  ``even_degree_impossible``
instantiates this argument and backs it with a machine scan at small n.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

from .braid import (
    CertifyMode,
    CylinderCertificate,
    Verdict,
    certify_one_cylinder,
    pairwise_products_full_cycles,
)
from .grouper import DEFAULT_SEED, GroupKind, GroupReport, identify
from .perm import (
    Permutation,
    commutator,
    compose,
    compose_images,
    from_cycle_word,
    identity,
    inverse_images,
    is_full_cycle,
    sign,
)
from .triple import PtsTriple, format_triple

__all__ = [
    "FamilyInstance",
    "FamilyVariant",
    "ImpossibilityReport",
    "InvalidFamilyInput",
    "PreconditionFailed",
    "UnsupportedDegree",
    "VerificationReport",
    "build_family",
    "build_identity_variant",
    "even_degree_impossible",
    "same_sign_check",
    "verify_counterexample",
    "zigzag_cycle",
]

DEFAULT_EXHAUSTIVE_CAP = 9
DEFAULT_EVEN_SCAN_CAP = 6


class UnsupportedDegree(ValueError):
    """Raised for degrees the requested construction does not cover."""


class InvalidFamilyInput(ValueError):
    """Raised when identity-variant ingredients violate the preconditions."""


class PreconditionFailed(ValueError):
    """Raised when a checked precondition does not hold."""


class FamilyVariant(str, Enum):
    THREE_N_CYCLES = "three-n-cycles"
    IDENTITY_VARIANT = "identity-variant"


@dataclass(frozen=True, slots=True)
class FamilyInstance:
    n: int
    m: int
    triple: PtsTriple
    variant: FamilyVariant


def zigzag_cycle(n: int) -> Permutation:
    """The full cycle (1, n, 2, n-1, 3, n-2, ...); for odd n it ends at
    floor(n/2) + 1."""
    word = []
    lo, hi = 1, n
    for k in range(n):
        if k % 2 == 0:
            word.append(lo)
            lo += 1
        else:
            word.append(hi)
            hi -= 1
    return from_cycle_word(n, word)


def build_family(n: int) -> FamilyInstance:
    """Non-cyclic single-cylinder triple of full cycles, odd n >= 5."""
    if n % 2 == 0:
        raise UnsupportedDegree(
            f"no single-cylinder cover exists at even degree {n}"
        )
    if n < 5:
        raise UnsupportedDegree(f"the full-cycle family needs n >= 5, got {n}")
    a = from_cycle_word(n, range(1, n + 1))
    z = zigzag_cycle(n)
    b = compose(a.inverse(), z)
    c = z.inverse()
    assert compose(a, b) == z
    assert is_full_cycle(b), f"derived b is not a full cycle at n={n}"
    assert compose(compose(a, b), c).is_identity()
    if n == 5:
        assert b == from_cycle_word(5, (1, 4, 2, 3, 5))
    return FamilyInstance(
        n=n, m=n // 2, triple=PtsTriple(a, b, c), variant=FamilyVariant.THREE_N_CYCLES
    )


def build_identity_variant(
    n: int, u: Permutation, v: Permutation
) -> FamilyInstance:
    """Triple (u, v, id) with u, v and uv all full cycles, odd n >= 3."""
    if n % 2 == 0 or n < 3:
        raise UnsupportedDegree(
            f"the identity variant needs odd n >= 3, got {n}"
        )
    if u.degree != n or v.degree != n:
        raise InvalidFamilyInput(
            f"u and v must have degree {n}, got {u.degree} and {v.degree}"
        )
    if not (is_full_cycle(u) and is_full_cycle(v)):
        raise InvalidFamilyInput("u and v must be full cycles")
    if not is_full_cycle(compose(u, v)):
        raise InvalidFamilyInput("the product uv must be a full cycle")
    return FamilyInstance(
        n=n,
        m=n // 2,
        triple=PtsTriple(u, v, identity(n)),
        variant=FamilyVariant.IDENTITY_VARIANT,
    )


def family_commutator_witness(f: FamilyInstance) -> Permutation:
    """The 3-cycle (2, n, m+1) showing the full-cycle family is non-abelian.

    With p = a and q = b^2, the bracket realisation p q p^-1 q^-1 (which is
    commutator(q, p) in this library's [p,q] = p^-1 q^-1 p q convention)
    equals the directed cycle (2, n, floor(n/2)+1) for every odd n >= 7.
    """
    a, b, _ = f.triple.perms
    return commutator(compose(b, b), a)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True, slots=True)
class VerificationReport:
    """Did the instance certify as a non-cyclic single-cylinder cover?"""

    degree: int
    triple: PtsTriple
    variant: FamilyVariant | None
    one_cylinder: bool
    certificate: CylinderCertificate
    exhaustive_checked: bool
    exhaustive_orbit_size: int | None
    exhaustive_agrees: bool | None
    non_cyclic: bool
    commutator_nontrivial: bool
    group: GroupReport
    passed: bool
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "schema": "pillowtile.verify.v1",
            "degree": self.degree,
            "triple": format_triple(self.triple),
            "variant": self.variant.value if self.variant else None,
            "one_cylinder": self.one_cylinder,
            "certificate": self.certificate.to_json_dict(),
            "exhaustive_checked": self.exhaustive_checked,
            "exhaustive_orbit_size": self.exhaustive_orbit_size,
            "exhaustive_agrees": self.exhaustive_agrees,
            "non_cyclic": self.non_cyclic,
            "commutator_nontrivial": self.commutator_nontrivial,
            "group": self.group.to_json_dict(),
            "passed": self.passed,
            "seed": self.seed,
        }


def verify_counterexample(
    f: FamilyInstance | PtsTriple,
    *,
    exhaustive_cap: int = DEFAULT_EXHAUSTIVE_CAP,
    seed: int = DEFAULT_SEED,
) -> VerificationReport:
    """Check the three counterexample properties of an instance (or any
    triple): single-cylinder, non-cyclic monodromy, and name the group.

    The single-cylinder certificate is structural where possible; for
    degrees up to ``exhaustive_cap`` the full braid orbit is also enumerated
    and must agree.
    """
    if isinstance(f, FamilyInstance):
        triple, variant = f.triple, f.variant
    else:
        triple, variant = f, None
    cert = certify_one_cylinder(triple, CertifyMode.AUTO)
    one_cyl = cert.verdict is Verdict.ONE_CYLINDER

    exhaustive_checked = False
    exhaustive_orbit_size = None
    exhaustive_agrees = None
    if triple.degree <= exhaustive_cap:
        full = certify_one_cylinder(triple, CertifyMode.EXHAUSTIVE)
        exhaustive_checked = True
        exhaustive_orbit_size = full.orbit_size
        exhaustive_agrees = (full.verdict is Verdict.ONE_CYLINDER) == one_cyl

    group = identify(list(triple.perms), seed=seed)
    non_cyclic = group.kind is not GroupKind.CYCLIC
    a, b, c = triple.perms
    commutator_nontrivial = any(
        not commutator(p, q).is_identity()
        for p, q in ((a, b), (b, c), (a, c))
    )
    passed = (
        one_cyl
        and non_cyclic
        and (exhaustive_agrees is not False)
    )
    return VerificationReport(
        degree=triple.degree,
        triple=triple,
        variant=variant,
        one_cylinder=one_cyl,
        certificate=cert,
        exhaustive_checked=exhaustive_checked,
        exhaustive_orbit_size=exhaustive_orbit_size,
        exhaustive_agrees=exhaustive_agrees,
        non_cyclic=non_cyclic,
        commutator_nontrivial=commutator_nontrivial,
        group=group,
        passed=passed,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# even degrees


@dataclass(frozen=True, slots=True)
class ImpossibilityReport:
    """Why no single-cylinder cover exists at an even degree, with an
    optional machine scan confirming zero survivors of the pairwise
    full-cycle filter."""

    degree: int
    parity_argument: tuple[str, ...]
    scan_performed: bool
    scan_strategy: str | None
    triples_checked: int
    survivors: int
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "schema": "pillowtile.even.v1",
            "degree": self.degree,
            "parity_argument": list(self.parity_argument),
            "scan_performed": self.scan_performed,
            "scan_strategy": self.scan_strategy,
            "triples_checked": self.triples_checked,
            "survivors": self.survivors,
            "passed": self.passed,
        }


def _parity_argument(n: int) -> tuple[str, ...]:
    return (
        f"for any permutations p, q of degree {n}: "
        f"t(pq) = t(p) + t(q) - {n} (mod 2), where t counts disjoint cycles",
        "the three cycle counts t(a), t(b), t(c) take at most two parities, "
        "so some two of them agree (pigeonhole)",
        f"since {n} is even, the product of that pair has even cycle count",
        "a full cycle has cycle count 1, which is odd, so ab, bc, ac cannot "
        "all be full cycles, and a single-cylinder cover needs exactly that",
    )


def _full_cycle_images(n: int) -> list[tuple[int, ...]]:
    cycles = []
    for rest in itertools.permutations(range(1, n)):
        img = [0] * n
        word = (0,) + rest
        for i in range(n):
            img[word[i]] = word[(i + 1) % n]
        cycles.append(tuple(img))
    return cycles


def _is_full_cycle_image(p: tuple[int, ...]) -> bool:
    n = len(p)
    ln = 1
    j = p[0]
    while j != 0:
        j = p[j]
        ln += 1
    return ln == n


def even_degree_impossible(
    n: int, *, exhaustive_cap: int = DEFAULT_EVEN_SCAN_CAP
) -> ImpossibilityReport:
    """Instantiate the parity obstruction at even n; for n up to the cap,
    also scan for survivors of the pairwise full-cycle filter.

    Up to degree 4 the scan walks all of Sym(n)^3 directly.  Beyond that it
    normalises ab to the reference full cycle (every triple whose ab is a
    full cycle is simultaneously conjugate to one of these, and the filter
    is conjugation-invariant), which leaves an (a, ac)-indexed scan.
    """
    if n % 2 != 0 or n < 2:
        raise UnsupportedDegree(f"expected even n >= 2, got {n}")
    parity = _parity_argument(n)
    if n > exhaustive_cap:
        return ImpossibilityReport(
            degree=n,
            parity_argument=parity,
            scan_performed=False,
            scan_strategy=None,
            triples_checked=0,
            survivors=0,
            passed=True,
        )

    survivors = 0
    checked = 0
    if n <= 4:
        strategy = "raw"
        perms = [tuple(p) for p in itertools.permutations(range(n))]
        for a in perms:
            for b in perms:
                ab = compose_images(a, b)
                for c in perms:
                    checked += 1
                    if (
                        _is_full_cycle_image(ab)
                        and _is_full_cycle_image(compose_images(b, c))
                        and _is_full_cycle_image(compose_images(a, c))
                    ):
                        survivors += 1
    else:
        strategy = "product-normalized"
        ref = tuple((i + 1) % n for i in range(n))  # (1 2 ... n)
        cycles = _full_cycle_images(n)
        for a in itertools.permutations(range(n)):
            ai = inverse_images(a)
            b = compose_images(ai, ref)  # ab is the reference cycle
            for z in cycles:
                c = compose_images(ai, z)  # ac = z, a full cycle
                checked += 1
                if _is_full_cycle_image(compose_images(b, c)):
                    survivors += 1
    return ImpossibilityReport(
        degree=n,
        parity_argument=parity,
        scan_performed=True,
        scan_strategy=strategy,
        triples_checked=checked,
        survivors=survivors,
        passed=survivors == 0,
    )


def same_sign_check(t: PtsTriple) -> bool:
    """All three coordinates share one sign.

    Preconditions (checked): odd degree, and ab, bc, ac all full cycles.
    Under them the equality of signs is forced, so a False return would
    falsify the parity bookkeeping; callers treat it as an invariant.
    """
    if t.degree % 2 == 0:
        raise PreconditionFailed("same-sign check applies to odd degrees")
    if not pairwise_products_full_cycles(t):
        raise PreconditionFailed(
            "same-sign check needs ab, bc, ac to be full cycles"
        )
    return sign(t.a) == sign(t.b) == sign(t.c)
