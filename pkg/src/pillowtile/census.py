"""Exhaustive census of single-cylinder covers at small degree.

Search space reduction: any triple whose product ab is a full cycle is
simultaneously conjugate to one with ab equal to the reference cycle
(1 2 ... n), so candidates are enumerated as (a, z) pairs with b = a^-1 ref
and c = a^-1 z for z a full cycle (making ac = z by construction); the
remaining filter is bc being a full cycle.  Residual conjugation freedom
(the centraliser of the reference cycle and coincidences beyond it) is spent
two ways: a ranges over representatives under conjugation by powers of the
reference cycle (a pure speed-up), and surviving candidates are deduplicated
by canonical key (the correctness mechanism).

Each surviving candidate class is certified by walking its full braid orbit;
passing orbits become census rows, one row per orbit, keyed by the least
canonical key in the orbit.  Candidates whose keys were already visited by
an earlier orbit walk (passing or failing) are skipped: the single-cylinder
property is orbit-invariant, so a key inherits its orbit's verdict.

Partitions, workers, checkpoints: the candidate stream partitions by the
a-coordinate; partition scans are pure, so they may run on worker processes
and are merged in partition order, keeping output byte-identical for any
worker count.  A checkpoint file records the completed partitions plus the
row keys found so far; resuming re-derives the rows from their keys.
"""
from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterator, Sequence

from .braid import OrbitTooLarge, orbit_scan
from .grouper import DEFAULT_SEED, GroupKind, GroupReport, identify
from .perm import Permutation, compose_images, cycle_type, inverse_images
from .triple import (
    CanonicalKey,
    CoverTopology,
    PtsTriple,
    canonicalize,
    fourth_element,
    topology,
)

__all__ = [
    "BudgetExceeded",
    "CensusResult",
    "CensusRow",
    "CensusSummary",
    "DEFAULT_DEGREE_CAP",
    "census_summary",
    "enumerate_candidates",
    "run_census",
]

DEFAULT_DEGREE_CAP = 7
_CHECKPOINT_SCHEMA = "pillowtile.census.checkpoint.v1"


class BudgetExceeded(RuntimeError):
    """Raised when a census or candidate walk exceeds its budget.

    ``partial`` carries the rows completed so far (flagged incomplete), or
    None when nothing was produced.
    """

    def __init__(self, message: str, partial: "CensusResult | None" = None):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True, slots=True)
class CensusRow:
    """One braid orbit of single-cylinder triples (one Teichmueller curve)."""

    key: CanonicalKey
    cycle_types: tuple[tuple[int, ...], ...]  # of a, b, c, d
    orbit_size: int
    group: GroupReport
    topology: CoverTopology
    is_cyclic_cover: bool

    def to_json_dict(self) -> dict:
        return {
            "key": self.key.to_text(),
            "cycle_types": [list(ct) for ct in self.cycle_types],
            "orbit_size": self.orbit_size,
            "group": self.group.to_json_dict(),
            "genus": self.topology.genus,
            "orders": list(self.topology.orders),
            "is_cyclic_cover": self.is_cyclic_cover,
        }

    def to_tsv_line(self) -> str:
        types = "|".join(
            "+".join(str(x) for x in ct) for ct in self.cycle_types
        )
        orders = ",".join(str(o) for o in self.topology.orders)
        return "\t".join(
            (
                self.key.to_text(),
                types,
                str(self.orbit_size),
                self.group.name,
                str(self.group.order),
                str(self.topology.genus),
                orders,
                "true" if self.is_cyclic_cover else "false",
            )
        )


_TSV_HEADER = "\t".join(
    (
        "key",
        "cycle_types(a|b|c|d)",
        "orbit_size",
        "group",
        "order",
        "genus",
        "orders",
        "cyclic",
    )
)


@dataclass(frozen=True, slots=True)
class CensusResult:
    degree: int
    complete: bool
    rows: tuple[CensusRow, ...]
    seed: int
    keys_visited: int

    def to_json_dict(self) -> dict:
        return {
            "schema": "pillowtile.census.v1",
            "degree": self.degree,
            "complete": self.complete,
            "seed": self.seed,
            "rows": [row.to_json_dict() for row in self.rows],
        }

    def to_tsv(self) -> str:
        lines = [_TSV_HEADER]
        lines.extend(row.to_tsv_line() for row in self.rows)
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, slots=True)
class CensusSummary:
    """Histogram of monodromy groups over census rows."""

    histogram: tuple[tuple[str, int], ...]
    same_sign_rate: float | None
    min_orbit_size: int | None
    max_orbit_size: int | None

    def to_json_dict(self) -> dict:
        return {
            "histogram": {name: count for name, count in self.histogram},
            "same_sign_rate": self.same_sign_rate,
            "min_orbit_size": self.min_orbit_size,
            "max_orbit_size": self.max_orbit_size,
        }


# ---------------------------------------------------------------------------
# candidate enumeration


@lru_cache(maxsize=8)
def _reference_cycle(n: int) -> tuple[int, ...]:
    return tuple((i + 1) % n for i in range(n))


@lru_cache(maxsize=8)
def _full_cycle_images(n: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for rest in itertools.permutations(range(1, n)):
        img = [0] * n
        word = (0,) + rest
        for i in range(n):
            img[word[i]] = word[(i + 1) % n]
        out.append(tuple(img))
    return tuple(out)


def _is_full_cycle_image(p: Sequence[int]) -> bool:
    n = len(p)
    ln = 1
    j = p[0]
    while j != 0:
        j = p[j]
        ln += 1
    return ln == n


def _rep_a_list(n: int) -> list[tuple[int, ...]]:
    """Least representatives of Sym(n) under conjugation by powers of the
    reference cycle, in sorted order."""
    ref = _reference_cycle(n)
    ref_inv = inverse_images(ref)
    reps = []
    for a in itertools.permutations(range(n)):
        t = a
        least = a
        for _ in range(n - 1):
            t = tuple(ref_inv[t[ref[x]]] for x in range(n))
            if t < least:
                least = t
                break  # a conjugate is smaller, a is not the representative
        if least == a:
            reps.append(a)
    return reps


def _scan_partition(n: int, a: tuple[int, ...]) -> list[CanonicalKey]:
    """Surviving candidate keys for one a-coordinate, sorted and unique.

    With b = a^-1 ref and c = a^-1 z, the products ab and ac are full cycles
    by construction; the filter checks bc.  At odd n the same-sign condition
    holds automatically here: b and c are a^-1 times even full cycles, so
    all three coordinates share the sign of a.
    """
    ref = _reference_cycle(n)
    ai = inverse_images(a)
    b = compose_images(ai, ref)
    keys = set()
    for z in _full_cycle_images(n):
        c = compose_images(ai, z)
        if not _is_full_cycle_image(compose_images(b, c)):
            continue
        triple = PtsTriple(Permutation(a), Permutation(b), Permutation(c))
        keys.add(canonicalize(triple))
    return sorted(keys)


def _scan_partition_task(args: tuple[int, tuple[int, ...]]) -> list[CanonicalKey]:
    return _scan_partition(*args)


def enumerate_candidates(
    n: int, *, degree_cap: int = DEFAULT_DEGREE_CAP
) -> Iterator[PtsTriple]:
    """One canonical representative per conjugation class of connected
    triples passing the pruning chain (ab, bc, ac full cycles; same-sign at
    odd degree)."""
    if n < 2:
        raise ValueError(f"census degrees start at 2, got {n}")
    if n > degree_cap:
        raise BudgetExceeded(
            f"degree {n} exceeds the candidate cap {degree_cap}; "
            "raise degree_cap explicitly to proceed"
        )
    seen: set[CanonicalKey] = set()
    for a in _rep_a_list(n):
        for key in _scan_partition(n, a):
            if key not in seen:
                seen.add(key)
                yield key.to_triple()


# ---------------------------------------------------------------------------
# the census pipeline


def _build_row(
    least_key: CanonicalKey, orbit_size: int, seed: int
) -> CensusRow:
    triple = least_key.to_triple()
    group = identify(list(triple.perms), seed=seed)
    four = triple.perms + (fourth_element(triple),)
    return CensusRow(
        key=least_key,
        cycle_types=tuple(cycle_type(p) for p in four),
        orbit_size=orbit_size,
        group=group,
        topology=topology(triple),
        is_cyclic_cover=group.kind is GroupKind.CYCLIC,
    )


def _load_checkpoint(path: Path, degree: int) -> tuple[set[int], list[str]]:
    doc = json.loads(path.read_text())
    if doc.get("schema") != _CHECKPOINT_SCHEMA:
        raise ValueError(f"unrecognised checkpoint schema in {path}")
    if doc.get("degree") != degree:
        raise ValueError(
            f"checkpoint degree {doc.get('degree')} does not match {degree}"
        )
    return set(doc["processed"]), list(doc["row_keys"])


def _write_checkpoint(
    path: Path, degree: int, processed: set[int], row_keys: list[str]
) -> None:
    doc = {
        "schema": _CHECKPOINT_SCHEMA,
        "degree": degree,
        "processed": sorted(processed),
        "row_keys": sorted(row_keys),
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def run_census(
    n: int,
    *,
    budget: int | None = None,
    workers: int = 1,
    seed: int = DEFAULT_SEED,
    resume_path: str | Path | None = None,
) -> CensusResult:
    """Classify every single-cylinder cover of degree n up to conjugation.

    ``budget`` caps the total number of canonical keys visited across all
    orbit walks; exceeding it raises :class:`BudgetExceeded` carrying the
    rows found so far, flagged incomplete.  Degrees above
    ``DEFAULT_DEGREE_CAP`` require an explicit budget.  Results are
    byte-identical for any worker count.
    """
    if n < 2:
        raise ValueError(f"census degrees start at 2, got {n}")
    if n > DEFAULT_DEGREE_CAP and budget is None:
        raise BudgetExceeded(
            f"degree {n} censuses need an explicit budget "
            f"(the guaranteed range ends at {DEFAULT_DEGREE_CAP})"
        )

    reps = _rep_a_list(n)
    processed: set[int] = set()
    restored_row_keys: list[str] = []
    path = Path(resume_path) if resume_path is not None else None
    if path is not None and path.exists():
        processed, restored_row_keys = _load_checkpoint(path, n)

    keys_visited = 0
    seen: set[CanonicalKey] = set()
    rows: dict[CanonicalKey, CensusRow] = {}

    def remaining() -> int | None:
        return None if budget is None else budget - keys_visited

    for key_text in restored_row_keys:
        key = CanonicalKey.from_text(key_text)
        scan = orbit_scan(key.to_triple(), stop_on_product_failure=True)
        assert scan.complete, f"checkpointed row {key_text} fails certification"
        least = min(scan.words)
        rows[least] = _build_row(least, len(scan.words), seed)
        seen.update(scan.words)

    pending = [i for i in range(len(reps)) if i not in processed]

    def partial_result() -> CensusResult:
        ordered = tuple(rows[k] for k in sorted(rows))
        return CensusResult(
            degree=n,
            complete=False,
            rows=ordered,
            seed=seed,
            keys_visited=keys_visited,
        )

    def scans() -> Iterator[tuple[int, list[CanonicalKey]]]:
        if workers <= 1 or len(pending) <= 1:
            for i in pending:
                yield i, _scan_partition(n, reps[i])
        else:
            tasks = [(n, reps[i]) for i in pending]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                chunk = max(1, len(tasks) // (workers * 4))
                for i, keys in zip(
                    pending, pool.map(_scan_partition_task, tasks, chunksize=chunk)
                ):
                    yield i, keys

    for i, keys in scans():
        for key in keys:
            if key in seen:
                continue
            cap = remaining()
            if cap is not None and cap <= 0:
                raise BudgetExceeded(
                    f"census budget of {budget} keys exhausted", partial_result()
                )
            try:
                scan = orbit_scan(
                    key.to_triple(),
                    max_keys=cap if cap is not None else 10**8,
                    stop_on_product_failure=True,
                )
            except OrbitTooLarge:
                raise BudgetExceeded(
                    f"census budget of {budget} keys exhausted mid-orbit",
                    partial_result(),
                ) from None
            keys_visited += len(scan.words)
            seen.update(scan.words)
            if scan.complete:
                least = min(scan.words)
                rows[least] = _build_row(least, len(scan.words), seed)
        processed.add(i)
        if path is not None:
            _write_checkpoint(
                path, n, processed, [k.to_text() for k in rows]
            )

    ordered = tuple(rows[k] for k in sorted(rows))
    return CensusResult(
        degree=n,
        complete=True,
        rows=ordered,
        seed=seed,
        keys_visited=keys_visited,
    )


def census_summary(rows: Sequence[CensusRow]) -> CensusSummary:
    """Group-name histogram, same-sign pass rate and orbit-size range."""
    from .family import PreconditionFailed, same_sign_check

    counts: dict[str, int] = {}
    for row in rows:
        counts[row.group.name] = counts.get(row.group.name, 0) + 1
    histogram = tuple(sorted(counts.items()))
    if rows:
        passing = 0
        for row in rows:
            try:
                if same_sign_check(row.key.to_triple()):
                    passing += 1
            except PreconditionFailed:
                pass
        rate = passing / len(rows)
        sizes = [row.orbit_size for row in rows]
        return CensusSummary(histogram, rate, min(sizes), max(sizes))
    return CensusSummary(histogram, None, None, None)
