"""Desk-scale probes of two open questions about sunflower-free k-uniform
families: how large the union of members can get (conjecturally at most a
constant times k^2), and how few members suffice to cover that union
(conjecturally at most 2k).

Nothing here asserts either conjecture.  Reports carry the extremal union
size, the implied constant union/k^2, and the exact minimum cover count,
leaving pass/fail meaningful only for the 2k cover form.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb
from typing import Mapping, Sequence

from .detect import find_sunflower_sets_fast
from .errors import DomainError, SunflowerError, TooLarge
from .model import EXACT_INT, SetFamily
from .search import DEFAULT_NODE_BUDGET, DEFAULT_POINT_CEILING, UniformInstance, _Workspace

COVER_MEMBER_CEILING = 30


@dataclass(frozen=True)
class ConjectureReport:
    """Extremal union size and minimum cover for one (k, m) cell."""

    k: int
    m: int
    max_union: int
    witness: tuple[tuple[int, ...], ...]
    implied_d: float
    cover_count: int | None
    cover_members: tuple[int, ...] | None
    cover_pass: bool | None
    optimal: bool
    nodes_explored: int
    elapsed: float

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "m": self.m,
            "max_union": self.max_union,
            "exactness": EXACT_INT,
            "witness": [list(p) for p in self.witness],
            "family_size": len(self.witness),
            "implied_d": self.implied_d,
            "cover_count": self.cover_count,
            "cover_members": None
            if self.cover_members is None
            else list(self.cover_members),
            "cover_pass": self.cover_pass,
            "two_k": 2 * self.k,
            "optimal": self.optimal,
            "nodes_explored": self.nodes_explored,
        }

    def to_csv_row(self) -> str:
        return ",".join(
            str(x)
            for x in (
                self.k,
                self.m,
                self.max_union,
                len(self.witness),
                repr(self.implied_d),
                "" if self.cover_count is None else self.cover_count,
                "" if self.cover_pass is None else self.cover_pass,
                2 * self.k,
                self.optimal,
                self.nodes_explored,
            )
        )


CSV_HEADER = "k,m,max_union,family_size,implied_d,cover_count,cover_pass,two_k,optimal,nodes"


class _UnionBudget(Exception):
    pass


def max_union(
    k: int,
    m: int,
    max_nodes: int = DEFAULT_NODE_BUDGET,
    time_limit: float | None = None,
    point_ceiling: int = DEFAULT_POINT_CEILING,
    cover_ceiling: int = COVER_MEMBER_CEILING,
) -> ConjectureReport:
    """Maximize the union size over sunflower-free k-uniform families on [m].

    Branch and bound over the k-subsets in lexicographic order; the pruning
    potential is the union of the chosen members with everything still
    admissible.  The witness is the lexicographically first family attaining
    the maximum, re-verified sunflower-free before reporting.
    """
    if comb(m, k) > point_ceiling:
        raise TooLarge(f"C({m},{k}) exceeds the point ceiling {point_ceiling}")
    started = time.perf_counter()
    ws = _Workspace(UniformInstance(k, m))
    masks = [_elem_mask(p) for p in ws.points]
    deadline = None if time_limit is None else time.monotonic() + time_limit

    state = {"nodes": 0, "best": -1, "witness": []}

    def expand(chosen: list[int], chosen_union: int, cands: int) -> None:
        while True:
            state["nodes"] += 1
            if state["nodes"] > max_nodes:
                raise _UnionBudget
            if deadline is not None and state["nodes"] % 4096 == 0:
                if time.monotonic() > deadline:
                    raise _UnionBudget
            if chosen_union.bit_count() > state["best"]:
                state["best"] = chosen_union.bit_count()
                state["witness"] = list(chosen)
            if cands == 0:
                return
            potential = chosen_union
            rest = cands
            while rest:
                potential |= masks[(rest & -rest).bit_length() - 1]
                rest &= rest - 1
            if potential.bit_count() <= state["best"]:
                return
            p = (cands & -cands).bit_length() - 1
            cands &= cands - 1
            narrowed = cands
            for a in chosen:
                narrowed &= ~ws.pair_mask(a, p)
            chosen.append(p)
            expand(chosen, chosen_union | masks[p], narrowed)
            chosen.pop()

    optimal = True
    try:
        expand([], 0, ws.full_mask)
    except _UnionBudget:
        optimal = False

    witness = tuple(ws.points[i] for i in state["witness"])
    family = SetFamily(tuple(frozenset(p) for p in witness))
    if find_sunflower_sets_fast(family) is not None:
        raise SunflowerError("internal error: union witness contains a sunflower")

    cover_n: int | None
    cover_members: tuple[int, ...] | None
    try:
        cover_n, cover_members = cover_count(family, ceiling=cover_ceiling)
        cover_pass = cover_n <= 2 * k
    except TooLarge:
        cover_n, cover_members, cover_pass = None, None, None

    return ConjectureReport(
        k=k,
        m=m,
        max_union=max(state["best"], 0),
        witness=witness,
        implied_d=max(state["best"], 0) / (k * k),
        cover_count=cover_n,
        cover_members=cover_members,
        cover_pass=cover_pass,
        optimal=optimal,
        nodes_explored=state["nodes"],
        elapsed=time.perf_counter() - started,
    )


def _elem_mask(point: tuple[int, ...]) -> int:
    out = 0
    for e in point:
        out |= 1 << e
    return out


def cover_count(f: SetFamily, ceiling: int = COVER_MEMBER_CEILING) -> tuple[int, tuple[int, ...]]:
    """Exact minimum number of members whose union is the whole union.

    Branch and bound on the lowest uncovered element: each step branches
    over the members containing it, in index order.  The empty union needs
    zero members.
    """
    if len(f) > ceiling:
        raise TooLarge(f"exact cover capped at {ceiling} members, got {len(f)}")
    universe = sorted(f.universe)
    if not universe:
        return 0, ()
    full = 0
    pos = {e: i for i, e in enumerate(universe)}
    masks = []
    for mem in f.members:
        mask = 0
        for e in mem:
            mask |= 1 << pos[e]
        masks.append(mask)
    full = (1 << len(universe)) - 1
    containing: list[list[int]] = [[] for _ in universe]
    for mi, mask in enumerate(masks):
        rest = mask
        while rest:
            containing[(rest & -rest).bit_length() - 1].append(mi)
            rest &= rest - 1
    max_size = max((m.bit_count() for m in masks), default=0)

    best: dict = {"count": len(f) + 1, "members": ()}

    def expand(covered: int, chosen: list[int]) -> None:
        if covered == full:
            if len(chosen) < best["count"]:
                best["count"] = len(chosen)
                best["members"] = tuple(chosen)
            return
        remaining = full & ~covered
        need = -(-remaining.bit_count() // max_size)
        if len(chosen) + need >= best["count"]:
            return
        e = (remaining & -remaining).bit_length() - 1
        for mi in containing[e]:
            chosen.append(mi)
            expand(covered | masks[mi], chosen)
            chosen.pop()

    expand(0, [])
    return best["count"], best["members"]


def conjecture_scan(
    ks: Sequence[int],
    ms: Sequence[int],
    max_nodes: int = DEFAULT_NODE_BUDGET,
    time_limit: float | None = None,
    threads: int = 1,
) -> list[ConjectureReport]:
    """One report per (k, m) cell, k-major order; rows run independently."""
    cells = []
    for k in ks:
        for m in ms:
            if k < 1 or m < 1:
                raise DomainError("k and m must be at least 1")
            if k <= m:
                cells.append((k, m))

    def row(cell: tuple[int, int]) -> ConjectureReport:
        return max_union(cell[0], cell[1], max_nodes=max_nodes, time_limit=time_limit)

    if threads > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(row, cells))
    return [row(cell) for cell in cells]


def scan_to_csv(reports: Sequence[ConjectureReport]) -> str:
    lines = [CSV_HEADER]
    lines.extend(r.to_csv_row() for r in reports)
    return "\n".join(lines) + "\n"
