"""Exact maximum sunflower-free families by branch and bound, plus CNF export.

Instances enumerate their candidate points in lexicographic order and the
search walks include-first depth-first in that order, keeping the first
incumbent of each improved size.  Two facts make the output canonical:
improvement is strict, and a subtree is pruned only when it cannot beat the
incumbent, so the family returned is the lexicographically smallest maximum
family (greedy seeding preserves this: the greedy family is the lex-first
maximal family, and no maximum family is lex-smaller than it).

Triple constraints are materialized lazily as per-pair "completion" masks:
the set of points that close a sunflower with a given chosen pair.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from . import bounds as _bounds
from .detect import find_sunflower_sets_fast, find_sunflower_vectors
from .errors import DomainError, SunflowerError, TooLarge
from .model import (
    EXACT_INT,
    ModulusVector,
    SetFamily,
    SunflowerWitness,
    VectorFamily,
    as_modulus_vector,
)

DEFAULT_POINT_CEILING = 2**20
DEFAULT_NODE_BUDGET = 10**9
CNF_POINT_CEILING = 5000
_TIME_CHECK_STRIDE = 4096


@dataclass(frozen=True)
class VectorInstance:
    """All vectors over the moduli, in lexicographic order."""

    moduli: ModulusVector

    def point_count(self) -> int:
        return self.moduli.point_count()

    def points(self) -> list[tuple[int, ...]]:
        if self.moduli.n == 0:
            return [()]
        return list(product(*(range(d) for d in self.moduli)))

    def describe(self) -> dict:
        return {"kind": "vectors", "moduli": list(self.moduli)}

    def point_text(self, point: tuple[int, ...]) -> str:
        return ",".join(str(c) for c in point)

    # Translation anchor soundness: adding a fixed vector w coordinatewise
    # (mod D_i) is a bijection on each Z_{D_i}, so it preserves every
    # per-coordinate equality pattern among any three points; sunflower
    # triples map to sunflower triples in both directions.  Translating a
    # maximum family by the negation of any of its points yields a maximum
    # family containing the all-zero point, and that translate starts with
    # point index 0, so the lexicographically smallest maximum family
    # always contains point 0.  Anchoring is therefore exact for every
    # moduli vector, mixed or not.
    def supports_anchor(self) -> bool:
        return self.point_count() >= 1

    def completes(self, a: tuple[int, ...], b: tuple[int, ...]) -> Iterable[tuple[int, ...]]:
        # Coordinates where a and b agree force equality; coordinates where
        # they differ exclude both values.  The completions form a product.
        choices = []
        for x, y, d in zip(a, b, self.moduli):
            if x == y:
                choices.append((x,))
            else:
                choices.append(tuple(v for v in range(d) if v != x and v != y))
        return product(*choices)


@dataclass(frozen=True)
class UniformInstance:
    """All k-subsets of [m], in lexicographic order of sorted tuples."""

    k: int
    m: int

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("k must be at least 1")
        if self.m < 1:
            raise DomainError("m must be at least 1")

    def point_count(self) -> int:
        from math import comb

        return comb(self.m, self.k)

    def points(self) -> list[tuple[int, ...]]:
        return list(combinations(range(self.m), self.k))

    def describe(self) -> dict:
        return {"kind": "uniform", "k": self.k, "m": self.m}

    def point_text(self, point: tuple[int, ...]) -> str:
        return "{" + ",".join(str(e) for e in point) + "}"

    def supports_anchor(self) -> bool:
        return False


Instance = VectorInstance | UniformInstance


class _Workspace:
    """Points, index map, and the lazy pair-completion mask cache."""

    def __init__(self, instance: Instance):
        self.instance = instance
        self.points = instance.points()
        self.index = {p: i for i, p in enumerate(self.points)}
        self.full_mask = (1 << len(self.points)) - 1
        self._pair_cache: dict[tuple[int, int], int] = {}
        if isinstance(instance, UniformInstance):
            self._masks = [_setmask(p) for p in self.points]
        else:
            self._masks = None

    def pair_mask(self, i: int, j: int) -> int:
        key = (i, j) if i < j else (j, i)
        cached = self._pair_cache.get(key)
        if cached is not None:
            return cached
        if self._masks is None:
            mask = 0
            for point in self.instance.completes(self.points[key[0]], self.points[key[1]]):
                mask |= 1 << self.index[point]
        else:
            a, b = self._masks[key[0]], self._masks[key[1]]
            kernel = a & b
            union = a | b
            mask = 0
            for l, ml in enumerate(self._masks):
                if l != key[0] and l != key[1] and ml & union == kernel:
                    mask |= 1 << l
        self._pair_cache[key] = mask
        return mask


def _setmask(point: tuple[int, ...]) -> int:
    out = 0
    for e in point:
        out |= 1 << e
    return out


class _BudgetExceeded(Exception):
    pass


class _Search:
    def __init__(
        self,
        ws: _Workspace,
        max_nodes: int,
        time_limit: float | None,
    ):
        self.ws = ws
        self.max_nodes = max_nodes
        self.deadline = None if time_limit is None else time.monotonic() + time_limit
        self.nodes = 0
        self.prunes = 0
        self.best: list[int] = []
        self.chosen: list[int] = []

    def seed(self, incumbent: list[int]) -> None:
        self.best = list(incumbent)

    def run(self, chosen: list[int], cands: int) -> bool:
        """DFS from a start state; True when exhausted within budget."""
        self.chosen = list(chosen)
        try:
            self._expand(cands)
            return True
        except _BudgetExceeded:
            return False

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise _BudgetExceeded
        if self.deadline is not None and self.nodes % _TIME_CHECK_STRIDE == 0:
            if time.monotonic() > self.deadline:
                raise _BudgetExceeded

    def _expand(self, cands: int) -> None:
        chosen = self.chosen
        while True:
            self._tick()
            if cands == 0:
                if len(chosen) > len(self.best):
                    self.best = list(chosen)
                return
            if len(chosen) + cands.bit_count() <= len(self.best):
                self.prunes += 1
                return
            p = (cands & -cands).bit_length() - 1
            cands &= cands - 1
            narrowed = cands
            for a in chosen:
                narrowed &= ~self.ws.pair_mask(a, p)
            chosen.append(p)
            self._expand(narrowed)
            chosen.pop()
            # falling through the loop excludes p and continues


@dataclass(frozen=True)
class SearchResult:
    """Outcome of one exact-search run; witness always re-verified."""

    instance: Mapping[str, object]
    maximum: int
    witness_indices: tuple[int, ...]
    witness_points: tuple[tuple[int, ...], ...]
    nodes_explored: int
    optimal: bool
    elapsed: float
    stats: Mapping[str, object]
    bound_checks: tuple[Mapping[str, object], ...] = ()

    def to_json_dict(self) -> dict:
        # elapsed is wall-clock noise and stays out of machine-readable output
        return {
            "instance": dict(self.instance),
            "maximum": self.maximum,
            "exactness": EXACT_INT,
            "optimal": self.optimal,
            "witness_indices": list(self.witness_indices),
            "witness": [list(p) for p in self.witness_points],
            "nodes_explored": self.nodes_explored,
            "stats": dict(self.stats),
            "bound_checks": [dict(c) for c in self.bound_checks],
        }


def greedy_lower_bound(instance: Instance) -> list[int]:
    """Lexicographically first maximal family, as point indices."""
    ws = _Workspace(instance)
    return _greedy(ws)


def _greedy(ws: _Workspace) -> list[int]:
    chosen: list[int] = []
    cands = ws.full_mask
    while cands:
        p = (cands & -cands).bit_length() - 1
        cands &= cands - 1
        for a in chosen:
            cands &= ~ws.pair_mask(a, p)
        chosen.append(p)
    return chosen


def _run_search(
    instance: Instance,
    max_nodes: int,
    time_limit: float | None,
    anchor: bool,
    point_ceiling: int,
    threads: int = 1,
) -> SearchResult:
    count = instance.point_count()
    if count > point_ceiling:
        raise TooLarge(f"instance has {count} points, ceiling is {point_ceiling}")
    started = time.perf_counter()
    ws = _Workspace(instance)
    greedy = _greedy(ws)

    search = _Search(ws, max_nodes, time_limit)
    search.seed(greedy)
    anchored = anchor and instance.supports_anchor()
    if anchored:
        # sound per the translation argument on VectorInstance
        narrowed = ws.full_mask & ~1
        optimal = search.run([0], narrowed)
    else:
        optimal = search.run([], ws.full_mask)

    best = search.best
    points = tuple(ws.points[i] for i in best)
    result = SearchResult(
        instance=instance.describe(),
        maximum=len(best),
        witness_indices=tuple(best),
        witness_points=points,
        nodes_explored=search.nodes,
        optimal=optimal,
        elapsed=time.perf_counter() - started,
        stats={
            "anchored": anchored,
            "greedy_size": len(greedy),
            "prunes": search.prunes,
        },
        bound_checks=_bound_checks(instance, len(best)) if optimal else (),
    )
    ok, witness = verify_family_points(instance, points)
    if not ok:
        raise SunflowerError(
            f"internal error: witness fails verification at {witness.indices}"
        )
    for check in result.bound_checks:
        if not check["ok"]:
            raise SunflowerError(
                f"internal error: exact maximum exceeds the {check['name']} bound"
            )
    return result


def _bound_checks(instance: Instance, maximum: int) -> tuple[dict, ...]:
    checks: list[dict] = []

    def add(name: str, value, ok: bool) -> None:
        checks.append({"name": name, "value": value, "ok": bool(ok)})

    if isinstance(instance, VectorInstance):
        mv = instance.moduli
        if mv.n >= 1 and all(d >= 3 for d in mv):
            g = _bounds.generalized_ns_bound(mv)
            add("generalized-ns", g, maximum <= g)
        distinct = set(mv)
        if mv.n >= 1 and len(distinct) == 1:
            d = next(iter(distinct))
            if d > 2:
                nsv = _bounds.ns_vector_bound(d, mv.n)
                add("ns-vector", nsv.value, maximum <= nsv.value + nsv.radius)
                if _bounds.factorize(d).is_prime_power:
                    eg = _bounds.eg_vector_bound(d, mv.n)
                    add("eg-vector", eg.value, maximum <= eg.value + eg.radius)
    else:
        er = _bounds.erdos_rado_threshold(instance.k, 3)
        add(
            "erdos-rado-threshold",
            f"{er.numerator}/{er.denominator}" if er.denominator != 1 else er.numerator,
            Fraction(maximum) <= er,
        )
        ns = _bounds.ns_subset_bound(instance.m)
        add("ns-subset", ns, maximum <= ns)
    return tuple(checks)


def max_sunflower_free_vectors(
    moduli,
    max_nodes: int = DEFAULT_NODE_BUDGET,
    time_limit: float | None = None,
    anchor: bool = True,
    point_ceiling: int = DEFAULT_POINT_CEILING,
    threads: int = 1,
) -> SearchResult:
    """Exact maximum sunflower-free family in the product of cyclic groups."""
    instance = VectorInstance(as_modulus_vector(moduli))
    return _run_search(instance, max_nodes, time_limit, anchor, point_ceiling, threads)


def max_sunflower_free_uniform(
    k: int,
    m: int,
    max_nodes: int = DEFAULT_NODE_BUDGET,
    time_limit: float | None = None,
    point_ceiling: int = DEFAULT_POINT_CEILING,
    threads: int = 1,
) -> SearchResult:
    """Exact maximum sunflower-free family of k-subsets of [m]."""
    instance = UniformInstance(k, m)
    return _run_search(instance, max_nodes, time_limit, False, point_ceiling, threads)


def verify_family_points(
    instance: Instance, points: Sequence[tuple[int, ...]]
) -> tuple[bool, SunflowerWitness | None]:
    """Sunflower-freeness of explicit points; smallest witness when violated."""
    if isinstance(instance, VectorInstance):
        fam = VectorFamily(instance.moduli, tuple(points))
        witness = find_sunflower_vectors(fam)
    else:
        for p in points:
            if len(p) != instance.k or not all(0 <= e < instance.m for e in p):
                raise DomainError(f"point {p} is not a {instance.k}-subset of [{instance.m}]")
        fam = SetFamily(tuple(frozenset(p) for p in points))
        witness = find_sunflower_sets_fast(fam)
    return witness is None, witness


def verify_family(
    instance: Instance, family: VectorFamily | SetFamily
) -> tuple[bool, SunflowerWitness | None]:
    """Sunflower-freeness of a family object against an instance."""
    if isinstance(instance, VectorInstance):
        if not isinstance(family, VectorFamily) or family.moduli != instance.moduli:
            raise DomainError("family does not live over the instance moduli")
        return verify_family_points(instance, family.members)
    if not isinstance(family, SetFamily):
        raise DomainError("uniform instances take set families")
    return verify_family_points(
        instance, tuple(tuple(sorted(mem)) for mem in family.members)
    )


@dataclass(frozen=True)
class CnfInstance:
    """CNF whose models are sunflower-free families of size >= the target."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    comments: tuple[str, ...]

    def to_dimacs(self) -> str:
        lines = [f"c {c}" for c in self.comments]
        lines.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        lines.extend(" ".join(str(lit) for lit in cl) + " 0" for cl in self.clauses)
        return "\n".join(lines) + "\n"


def export_cnf(instance: Instance, size: int) -> CnfInstance:
    """One variable per point; a clause per sunflower triple; count >= size.

    The cardinality side is a sequential counter: s_{i,j} (variable
    P + (i-1) size + j) asserts "at least j of the first i points chosen",
    with clauses making each s_{i,j} imply that count, and the unit clause
    s_{P,size} forcing the target.
    """
    if size < 0:
        raise DomainError("target size cannot be negative")
    count = instance.point_count()
    if count > CNF_POINT_CEILING:
        raise TooLarge(f"CNF export capped at {CNF_POINT_CEILING} points, got {count}")
    ws = _Workspace(instance)
    pts = ws.points
    comments = [
        "sunflower-free family encoding: variable i+1 <=> point i chosen",
        f"instance: {_describe_text(instance)}",
        f"target size: at least {size}",
    ]
    comments.extend(
        f"var {i + 1} = {instance.point_text(p)}" for i, p in enumerate(pts)
    )
    clauses: list[tuple[int, ...]] = []
    triples = 0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            mask = ws.pair_mask(i, j) >> (j + 1)
            l = j + 1
            while mask:
                if mask & 1:
                    clauses.append((-(i + 1), -(j + 1), -(l + 1)))
                    triples += 1
                mask >>= 1
                l += 1
    comments.insert(3, f"sunflower triple clauses: {triples}")

    num_vars = len(pts)
    if size > 0 and not pts:
        clauses.append(())  # no points, positive target: unsatisfiable
    elif size > 0:
        p_count = len(pts)

        def aux(i: int, j: int) -> int:
            return p_count + (i - 1) * size + j

        num_vars = p_count + p_count * size
        clauses.append((-aux(1, 1), 1))
        for j in range(2, size + 1):
            clauses.append((-aux(1, j),))
        for i in range(2, p_count + 1):
            for j in range(1, size + 1):
                clauses.append((-aux(i, j), aux(i - 1, j), i))
                if j >= 2:
                    clauses.append((-aux(i, j), aux(i - 1, j), aux(i - 1, j - 1)))
        clauses.append((aux(p_count, size),))
    return CnfInstance(num_vars, tuple(clauses), tuple(comments))


def _describe_text(instance: Instance) -> str:
    d = instance.describe()
    if d["kind"] == "vectors":
        return "vectors over moduli " + ",".join(str(x) for x in d["moduli"])
    return f"{d['k']}-subsets of a {d['m']}-element ground set"


def cnf_satisfiable(cnf: CnfInstance, max_vars: int = 4000) -> bool:
    """DPLL with unit propagation over occurrence lists; tiny instances only.

    Branches on the lowest unassigned variable, trying true first, so the
    decision order matches the point order of the exported encodings.
    """
    if cnf.num_vars > max_vars:
        raise TooLarge(f"naive checker capped at {max_vars} variables")
    n = cnf.num_vars
    clauses = [tuple(cl) for cl in cnf.clauses]
    if any(len(cl) == 0 for cl in clauses):
        return False
    occurs: list[list[int]] = [[] for _ in range(n + 1)]
    for ci, cl in enumerate(clauses):
        for lit in cl:
            occurs[abs(lit)].append(ci)
    assign: list[bool | None] = [None] * (n + 1)

    def set_literal(lit: int, trail: list[int]) -> bool:
        v, val = abs(lit), lit > 0
        if assign[v] is not None:
            return assign[v] == val
        assign[v] = val
        trail.append(v)
        return True

    def propagate(trail: list[int]) -> bool:
        i = 0
        while i < len(trail):
            v = trail[i]
            i += 1
            for ci in occurs[v]:
                cl = clauses[ci]
                unit = 0
                satisfied = False
                open_count = 0
                for lit in cl:
                    a = assign[abs(lit)]
                    if a is None:
                        open_count += 1
                        unit = lit
                        if open_count > 1:
                            break
                    elif (lit > 0) == a:
                        satisfied = True
                        break
                if satisfied or open_count > 1:
                    continue
                if open_count == 0:
                    return False
                if not set_literal(unit, trail):
                    return False
        return True

    def undo(trail: list[int]) -> None:
        for v in trail:
            assign[v] = None

    def dpll(first_free: int) -> bool:
        v = first_free
        while v <= n and assign[v] is not None:
            v += 1
        if v > n:
            return True
        for value in (True, False):
            trail: list[int] = []
            assign[v] = value
            trail.append(v)
            if propagate(trail) and dpll(v + 1):
                return True
            undo(trail)
        return False

    trail: list[int] = []
    for cl in clauses:
        if len(cl) == 1:
            if not set_literal(cl[0], trail):
                return False
    if not propagate(trail):
        return False
    return dpll(1)
