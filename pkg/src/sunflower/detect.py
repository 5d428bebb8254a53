"""Certified sunflower detection for set and vector families.

A t-sunflower is a t-tuple of distinct sets whose pairwise intersections
all equal the common intersection (the kernel).  Pairwise disjoint sets
form a sunflower with empty kernel.  For vectors, three distinct vectors
form a sunflower when every coordinate is all-equal or all-distinct across
the triple; the failure mode is a coordinate where exactly two agree.

Searches scan index combinations in lexicographic order, so the witness
returned is always the lexicographically smallest one.  The bitmask path
in find_sunflower_sets_fast exists only for triples and is checked against
the definitional path property-wise in the test suite.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .errors import BadArity, TooLarge
from .model import SetFamily, SunflowerWitness, VectorFamily

# Cap for t >= 4 scans: C(64, 4) is ~600k combinations, still desk scale.
GENERAL_T_MEMBER_CAP = 64


def kernel_of(sets: Sequence[frozenset]) -> frozenset:
    if not sets:
        raise BadArity("kernel of zero sets is undefined")
    out = set(sets[0])
    for s in sets[1:]:
        out &= s
    return frozenset(out)


def is_sunflower_sets(sets: Sequence[frozenset]) -> bool:
    """Definitional check: every pairwise intersection equals the kernel."""
    if len(sets) < 2:
        raise BadArity("a sunflower needs at least two sets")
    sets = [frozenset(s) for s in sets]
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            if sets[i] == sets[j]:
                raise BadArity("sunflower petals must be distinct sets")
    kernel = kernel_of(sets)
    return all(
        sets[i] & sets[j] == kernel
        for i in range(len(sets))
        for j in range(i + 1, len(sets))
    )


def find_sunflower_sets(family: SetFamily, t: int = 3) -> SunflowerWitness | None:
    """First t-sunflower in index-lexicographic order, or None.

    For t >= 4 the scan refuses families above GENERAL_T_MEMBER_CAP members;
    the combination count grows too fast to pretend otherwise.
    """
    if t < 2:
        raise BadArity("sunflowers have at least two petals")
    if t >= 4 and len(family) > GENERAL_T_MEMBER_CAP:
        raise TooLarge(
            f"t={t} scan capped at {GENERAL_T_MEMBER_CAP} members, got {len(family)}"
        )
    members = family.members
    for idx in combinations(range(len(members)), t):
        chosen = [members[i] for i in idx]
        kernel = kernel_of(chosen)
        if all(
            chosen[a] & chosen[b] == kernel
            for a in range(t)
            for b in range(a + 1, t)
        ):
            return SunflowerWitness(idx, kernel=kernel)
    return None


def find_sunflower_sets_fast(family: SetFamily, t: int = 3) -> SunflowerWitness | None:
    """Bitmask scan for 3-sunflowers; agrees with find_sunflower_sets(family, 3).

    Members become machine integers, and (A, B, C) is a sunflower iff
    C & (A | B) == A & B together with the two symmetric conditions; the
    scan order makes the first hit lexicographically smallest.
    """
    if t != 3:
        raise BadArity("the fast path handles only t = 3")
    masks = [_mask(mem) for mem in family.members]
    count = len(masks)
    for i in range(count):
        mi = masks[i]
        for j in range(i + 1, count):
            mj = masks[j]
            kij = mi & mj
            union = mi | mj
            for l in range(j + 1, count):
                ml = masks[l]
                # kernel of the triple is k = mi & mj & ml; the triple is a
                # sunflower iff all three pairwise intersections equal k,
                # which for l > j collapses to the two tests below.
                if ml & union == kij:
                    kernel = frozenset(
                        e for e in family.members[i] if e in family.members[j]
                    )
                    return SunflowerWitness((i, j, l), kernel=kernel)
    return None


def _mask(mem: frozenset[int]) -> int:
    out = 0
    for e in mem:
        out |= 1 << e
    return out


def witness_holds(family: SetFamily, witness: SunflowerWitness, t: int | None = None) -> bool:
    """Re-check a set witness against its family."""
    if t is not None and len(witness.indices) != t:
        return False
    try:
        chosen = [family.members[i] for i in witness.indices]
    except IndexError:
        return False
    if len(chosen) < 2:
        return False
    if not is_sunflower_sets(chosen):
        return False
    return witness.kernel is None or witness.kernel == kernel_of(chosen)


def coordinate_classes(x: Sequence[int], y: Sequence[int], z: Sequence[int]) -> tuple[str, ...]:
    """Per-coordinate tag: 'all-equal', 'all-distinct', or 'two-equal'."""
    tags = []
    for a, b, c in zip(x, y, z):
        distinct = len({a, b, c})
        if distinct == 1:
            tags.append("all-equal")
        elif distinct == 3:
            tags.append("all-distinct")
        else:
            tags.append("two-equal")
    return tuple(tags)


def is_sunflower_vectors(
    x: Sequence[int], y: Sequence[int], z: Sequence[int]
) -> bool:
    """True when no coordinate has exactly two of the three values equal."""
    x, y, z = tuple(x), tuple(y), tuple(z)
    if len(x) != len(y) or len(y) != len(z):
        raise BadArity("vectors must share one arity")
    if x == y or y == z or x == z:
        raise BadArity("vector sunflower members must be distinct")
    return all(len({a, b, c}) != 2 for a, b, c in zip(x, y, z))


def find_sunflower_vectors(family: VectorFamily) -> SunflowerWitness | None:
    """First vector 3-sunflower in index-lexicographic order, or None."""
    members = family.members
    for i, j, l in combinations(range(len(members)), 3):
        if is_sunflower_vectors(members[i], members[j], members[l]):
            return SunflowerWitness(
                (i, j, l),
                coordinate_classes=coordinate_classes(members[i], members[j], members[l]),
            )
    return None


def is_ap_triple(x: Sequence[int], y: Sequence[int], z: Sequence[int], moduli) -> bool:
    """Arithmetic progression per coordinate: x_i + z_i = 2 y_i (mod D_i)."""
    return all((a + c - 2 * b) % d == 0 for a, b, c, d in zip(x, y, z, moduli))


def find_ap_triple(family: VectorFamily) -> tuple[int, int, int] | None:
    """First index triple (i, j, l), i < j < l, forming a coordinatewise AP.

    Members are tested in index order, with the j-th member as the middle
    term; the reversed reading (l, j, i) is the same progression, so each
    unordered triple is tested with its index-middle member as the middle.
    """
    members = family.members
    moduli = tuple(family.moduli)
    for i, j, l in combinations(range(len(members)), 3):
        if is_ap_triple(members[i], members[j], members[l], moduli):
            return (i, j, l)
    return None
