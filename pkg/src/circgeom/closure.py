"""Finite closure systems on small ground sets.

Subsets are ``int`` bitmasks indexed by position in the ground set.  A
:class:`ClosedFamily` is the alignment (family of closed sets) of a closure
system; the closure of ``Y`` is the intersection of all members containing it.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

MAX_GROUND = 16

CLOSURE_OPERATOR = "closure-operator"
ALIGNMENT = "alignment"
CONVEX_GEOMETRY = "convex-geometry"
ANTI_EXCHANGE = "anti-exchange"
AXIOM_MODES = (CLOSURE_OPERATOR, ALIGNMENT, CONVEX_GEOMETRY, ANTI_EXCHANGE)

N_CAROUSEL = "n-carousel"
WEAK_N_CAROUSEL = "weak-n-carousel"
WEAK_2X3 = "weak-2x3"
_RULE_ALIASES = {"n": N_CAROUSEL, "weak-n": WEAK_N_CAROUSEL}


class InputError(ValueError):
    """Malformed ground sets, families or element references."""


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def _family_key(mask: int) -> tuple[int, int]:
    return (popcount(mask), mask)


@dataclass(frozen=True)
class GroundSet:
    elements: tuple[str, ...]

    def __post_init__(self) -> None:
        if not 1 <= len(self.elements) <= MAX_GROUND:
            raise InputError(f"ground set size must be in 1..{MAX_GROUND}, got {len(self.elements)}")
        if len(set(self.elements)) != len(self.elements):
            raise InputError("ground set names must be distinct")

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def full(self) -> int:
        return (1 << len(self.elements)) - 1

    @cached_property
    def _index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.elements)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise InputError(f"unknown element {name!r}") from None

    def mask(self, names: Iterable[str]) -> int:
        m = 0
        for name in names:
            m |= 1 << self.index(name)
        return m

    def names(self, mask: int) -> tuple[str, ...]:
        if mask & ~self.full:
            raise InputError(f"mask {mask:#x} references elements outside the ground set")
        return tuple(e for i, e in enumerate(self.elements) if mask >> i & 1)

    def label(self, mask: int) -> str:
        """Compact name of a subset, e.g. ``{a0,a1,x}``."""
        return "{" + ",".join(self.names(mask)) + "}"


def as_ground(ground: GroundSet | Sequence[str]) -> GroundSet:
    return ground if isinstance(ground, GroundSet) else GroundSet(tuple(ground))


@dataclass(frozen=True)
class Implication:
    lhs: int
    rhs: int


@dataclass(frozen=True)
class ClosedFamily:
    """A ground set with its family of closed sets, sorted by (size, mask)."""

    ground: GroundSet
    sets: tuple[int, ...]

    @classmethod
    def from_masks(cls, ground: GroundSet | Sequence[str], masks: Iterable[int]) -> ClosedFamily:
        ground = as_ground(ground)
        uniq = set(masks)
        for m in uniq:
            if m < 0 or m & ~ground.full:
                raise InputError(f"set {m:#x} is not a subset of the ground set")
        return cls(ground, tuple(sorted(uniq, key=_family_key)))

    @classmethod
    def from_names(cls, ground: GroundSet | Sequence[str], sets: Iterable[Iterable[str]]) -> ClosedFamily:
        ground = as_ground(ground)
        return cls.from_masks(ground, (ground.mask(s) for s in sets))

    def __len__(self) -> int:
        return len(self.sets)

    def __contains__(self, mask: int) -> bool:
        return mask in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(self.sets)

    @cached_property
    def members(self) -> frozenset[int]:
        return frozenset(self.sets)

    @property
    def n(self) -> int:
        return len(self.ground)

    @property
    def full(self) -> int:
        return self.ground.full

    @cached_property
    def closure_table(self) -> tuple[int, ...]:
        # phi(Y) = Y for members, else the intersection of phi(Y + a) over a not in Y
        full = self.full
        members = self.members
        table = [0] * (full + 1)
        for m in range(full, -1, -1):
            if m in members:
                table[m] = m
                continue
            acc = full
            rest = full & ~m
            while rest:
                low = rest & -rest
                acc &= table[m | low]
                rest ^= low
            table[m] = acc
        return tuple(table)

    def closure(self, y: int) -> int:
        if y < 0 or y & ~self.full:
            raise InputError(f"set {y:#x} references unknown elements")
        return self.closure_table[y]

    def closure_of(self, names: Iterable[str]) -> tuple[str, ...]:
        return self.ground.names(self.closure(self.ground.mask(names)))

    def join(self, a: int, b: int) -> int:
        """Lattice join inside the family: the closure of the union."""
        return self.closure(a | b)

    def upper_covers(self, m: int) -> list[int]:
        above = [s for s in self.sets if s != m and s & m == m]
        return [s for s in above if not any(t != s and t & s == t for t in above)]

    def named_sets(self) -> list[list[str]]:
        return [list(self.ground.names(m)) for m in self.sets]


# a closure system is represented by its alignment
FiniteClosureSystem = ClosedFamily


def closure(system: ClosedFamily, y: int) -> int:
    return system.closure(y)


def powerset(ground: GroundSet | Sequence[str]) -> ClosedFamily:
    ground = as_ground(ground)
    return ClosedFamily.from_masks(ground, range(ground.full + 1))


@dataclass(frozen=True)
class AxiomReport:
    mode: str
    ok: bool
    violation: dict | None = None

    def to_json(self) -> dict:
        return {"mode": self.mode, "ok": self.ok, "violation": self.violation}


def _check_closure_operator(f: ClosedFamily) -> dict | None:
    g = f.ground
    phi = f.closure_table
    for y in range(f.full + 1):
        c = phi[y]
        if c & y != y:
            return {"axiom": "extensive", "Y": g.names(y)}
        if phi[c] != c:
            return {"axiom": "idempotent", "Y": g.names(y)}
        rest = f.full & ~y
        while rest:
            low = rest & -rest
            if phi[y | low] & c != c:
                return {"axiom": "monotone", "Y": g.names(y), "Z": g.names(y | low)}
            rest ^= low
    return None


def _check_alignment(f: ClosedFamily) -> dict | None:
    g = f.ground
    if f.full not in f.members:
        return {"axiom": "ground set is closed", "missing": g.names(f.full)}
    for i, a in enumerate(f.sets):
        for b in f.sets[i + 1:]:
            if a & b not in f.members:
                return {"axiom": "intersection", "Y": g.names(a), "Z": g.names(b), "missing": g.names(a & b)}
    return None


def _check_convex_geometry(f: ClosedFamily) -> dict | None:
    bad = _check_alignment(f)
    if bad:
        return bad
    g = f.ground
    if 0 not in f.members:
        return {"axiom": "empty set is closed"}
    for y in f.sets:
        if y == f.full:
            continue
        if not any((y | 1 << i) in f.members for i in range(f.n) if not y >> i & 1):
            return {"axiom": "one-point extension", "Y": g.names(y)}
    return None


def _check_anti_exchange(f: ClosedFamily) -> dict | None:
    g = f.ground
    for y in f.sets:
        outside = [i for i in range(f.n) if not y >> i & 1]
        for x, z in itertools.permutations(outside, 2):
            if f.closure(y | 1 << x) >> z & 1 and f.closure(y | 1 << z) >> x & 1:
                return {"axiom": "anti-exchange", "Y": g.names(y), "x": g.elements[x], "z": g.elements[z]}
    return None


_CHECKS = {
    CLOSURE_OPERATOR: _check_closure_operator,
    ALIGNMENT: _check_alignment,
    CONVEX_GEOMETRY: _check_convex_geometry,
    ANTI_EXCHANGE: _check_anti_exchange,
}


def verify_axioms(family: ClosedFamily, mode: str) -> AxiomReport:
    try:
        check = _CHECKS[mode]
    except KeyError:
        raise InputError(f"unknown axiom mode {mode!r}") from None
    violation = check(family)
    return AxiomReport(mode, violation is None, violation)


def is_convex_geometry(family: ClosedFamily) -> bool:
    return _check_convex_geometry(family) is None


def forward_chain(y: int, imps: Sequence[Implication]) -> int:
    """Close ``y`` under the implications by repeated firing."""
    changed = True
    while changed:
        changed = False
        for imp in imps:
            if imp.lhs & y == imp.lhs and imp.rhs & ~y:
                y |= imp.rhs
                changed = True
    return y


def closure_from_implications(ground: GroundSet | Sequence[str], imps: Sequence[Implication]) -> ClosedFamily:
    ground = as_ground(ground)
    for imp in imps:
        if (imp.lhs | imp.rhs) & ~ground.full:
            raise InputError("implication references elements outside the ground set")
    closed = [
        s for s in range(ground.full + 1)
        if all(imp.lhs & s != imp.lhs or imp.rhs & s == imp.rhs for imp in imps)
    ]
    return ClosedFamily.from_masks(ground, closed)


def implication(ground: GroundSet, lhs: Iterable[str], rhs: Iterable[str]) -> Implication:
    return Implication(ground.mask(lhs), ground.mask(rhs))


def join_alignments(f1: ClosedFamily, f2: ClosedFamily) -> ClosedFamily:
    """Smallest alignment containing both families: all pairwise intersections."""
    if f1.ground != f2.ground:
        raise InputError("join of alignments on different ground sets")
    return ClosedFamily.from_masks(f1.ground, (u & v for u in f1.sets for v in f2.sets))


def union_join(f1: ClosedFamily, f2: ClosedFamily) -> ClosedFamily:
    """All unions U | V; kept for comparison with :func:`join_alignments`."""
    if f1.ground != f2.ground:
        raise InputError("join of families on different ground sets")
    return ClosedFamily.from_masks(f1.ground, (u | v for u in f1.sets for v in f2.sets))


def monotone_alignment(order: Sequence[str], ground: GroundSet | Sequence[str] | None = None) -> ClosedFamily:
    """Prefixes of ``order``, including the empty prefix."""
    ground = as_ground(order if ground is None else ground)
    if sorted(order) != sorted(ground.elements):
        raise InputError("order must be a permutation of the ground set")
    prefixes = [0]
    for name in order:
        prefixes.append(prefixes[-1] | 1 << ground.index(name))
    return ClosedFamily.from_masks(ground, prefixes)


def join_all(families: Sequence[ClosedFamily]) -> ClosedFamily:
    out = families[0]
    for f in families[1:]:
        out = join_alignments(out, f)
    return out


# -- convex dimension ---------------------------------------------------------

@dataclass(frozen=True)
class ConvexDimensionResult:
    """Outcome of the chain-cover search.

    ``k`` is ``None`` when no realization with at most ``k_max`` chains exists
    (``exhaustive_below`` then certifies the lower bound) or when the time
    budget ran out first (``complete`` is False and ``refuted_up_to`` names
    the largest fully refuted ``k``).
    """

    k: int | None
    chains: tuple[tuple[str, ...], ...]
    exhaustive_below: bool
    refuted_up_to: int
    complete: bool = True
    nodes: int = 0
    meet_irreducibles: tuple[tuple[str, ...], ...] = ()

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "chains": [list(c) for c in self.chains],
            "exhaustive_below": self.exhaustive_below,
            "refuted_up_to": self.refuted_up_to,
            "complete": self.complete,
            "nodes": self.nodes,
            "meet_irreducibles": [list(m) for m in self.meet_irreducibles],
        }


def maximal_chains(f: ClosedFamily) -> list[tuple[int, ...]]:
    """Orders (as index tuples) all of whose prefixes are closed."""
    out: list[tuple[int, ...]] = []

    def walk(m: int, path: list[int]) -> None:
        if m == f.full:
            out.append(tuple(path))
            return
        for i in range(f.n):
            if not m >> i & 1 and (m | 1 << i) in f.members:
                path.append(i)
                walk(m | 1 << i, path)
                path.pop()

    walk(0, [])
    return out


def meet_irreducibles(f: ClosedFamily) -> list[int]:
    return [m for m in f.sets if m != f.full and len(f.upper_covers(m)) == 1]


class _Budget(Exception):
    pass


def convex_dimension(g: ClosedFamily, k_max: int, budget_seconds: float | None = None) -> ConvexDimensionResult:
    """Smallest number of maximal chains whose alignment join equals ``g``.

    The join of chains equals ``g`` exactly when every meet-irreducible member
    occurs as a prefix of some chain, so the search branches on the first
    uncovered irreducible.  Every accepted set of chains is re-joined and
    compared with ``g`` before it is returned.
    """
    if k_max < 1:
        raise InputError("k_max must be positive")
    if g.n > 8:
        raise InputError("convex_dimension supports ground sets of at most 8 elements")
    if not is_convex_geometry(g):
        raise InputError("family is not a convex geometry")

    chains = maximal_chains(g)
    irr = meet_irreducibles(g)
    irr_bit = {m: 1 << j for j, m in enumerate(irr)}
    all_irr = (1 << len(irr)) - 1

    def cover_of(order: tuple[int, ...]) -> int:
        cov, m = irr_bit.get(0, 0), 0
        for i in order:
            m |= 1 << i
            cov |= irr_bit.get(m, 0)
        return cov

    # one representative per cover mask, dominated masks dropped
    by_cover: dict[int, tuple[int, ...]] = {}
    for c in chains:
        by_cover.setdefault(cover_of(c), c)
    covers = sorted(by_cover, key=lambda c: (-popcount(c), c))
    covers = [c for c in covers if not any(d != c and d & c == c for d in covers)]

    deadline = None if budget_seconds is None else time.monotonic() + budget_seconds
    nodes = 0

    def search(uncovered: int, depth_left: int, picked: list[int]) -> list[int] | None:
        nonlocal nodes
        nodes += 1
        if deadline is not None and time.monotonic() > deadline:
            raise _Budget
        if not uncovered:
            return list(picked)
        if depth_left == 0:
            return None
        low = uncovered & -uncovered
        for c in covers:
            if c & low:
                picked.append(c)
                found = search(uncovered & ~c, depth_left - 1, picked)
                picked.pop()
                if found is not None:
                    return found
        return None

    names = g.ground.elements
    irr_names = tuple(g.ground.names(m) for m in irr)
    refuted = 0
    for k in range(1, k_max + 1):
        try:
            found = search(all_irr, k, [])
        except _Budget:
            return ConvexDimensionResult(None, (), refuted == k - 1, refuted, False, nodes, irr_names)
        if found is None:
            refuted = k
            continue
        picked = [by_cover[c] for c in found]
        orders = tuple(tuple(names[i] for i in order) for order in picked)
        joined = join_all([monotone_alignment(o, g.ground) for o in orders])
        if joined.members != g.members:
            raise AssertionError("chain cover does not reproduce the family")
        return ConvexDimensionResult(k, orders, refuted == k - 1, refuted, True, nodes, irr_names)
    return ConvexDimensionResult(None, (), True, refuted, True, nodes, irr_names)


# -- carousel rules -----------------------------------------------------------

@dataclass(frozen=True)
class CarouselVerdict:
    """Result of a carousel rule check.

    ``witness`` describes one non-trivial instance and the tuple that covers it
    when the rule holds; ``counterexample`` lists every candidate closure of
    the first failing instance otherwise.
    """

    rule: str
    holds: bool
    witness: dict | None = None
    counterexample: dict | None = None
    instances: int = 0

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "holds": self.holds,
            "witness": self.witness,
            "counterexample": self.counterexample,
            "instances": self.instances,
        }


def _subsets_of_size(mask: int, k: int) -> list[int]:
    bits = [1 << i for i in range(mask.bit_length()) if mask >> i & 1]
    return [sum(c) for c in itertools.combinations(bits, k)]


def normalize_rule(rule: str) -> str:
    rule = _RULE_ALIASES.get(rule, rule)
    if rule not in (N_CAROUSEL, WEAK_N_CAROUSEL, WEAK_2X3):
        raise InputError(f"unknown carousel rule {rule!r}")
    return rule


def carousel_check(g: ClosedFamily, rule: str, n: int = 2) -> CarouselVerdict:
    """Exhaustively test a carousel rule over every x, y and S.

    Closures grow with the tuple, so only tuples of exactly ``min(n, |S|)``
    elements of ``S`` need checking.
    """
    rule = normalize_rule(rule)
    if rule == WEAK_2X3:
        n = 2
    if n < 1:
        raise InputError("carousel rules need n >= 1")
    gs = g.ground
    phi = g.closure
    witness = None
    instances = 0
    for s in range(g.full + 1):
        size = popcount(s)
        if rule == WEAK_2X3 and size != 3:
            continue
        if size == 0:
            continue
        closed = phi(s)
        elems = [i for i in range(g.n) if closed >> i & 1]
        tuples = _subsets_of_size(s, min(n, size))
        if rule == N_CAROUSEL:
            pairs = list(itertools.permutations(elems, 2))
        else:
            pairs = list(itertools.combinations(elems, 2))
        for x, y in pairs:
            instances += 1
            bx, by = 1 << x, 1 << y
            cover = None
            for t in tuples:
                if phi(t | by) & bx:
                    cover = (t, "x")
                    break
                if rule != N_CAROUSEL and phi(t | bx) & by:
                    cover = (t, "y")
                    break
            label = {"x": gs.elements[x], "y": gs.elements[y], "S": list(gs.names(s))}
            if cover is None:
                label["closures"] = {
                    ",".join(gs.names(t)): {
                        "with_y": list(gs.names(phi(t | by))),
                        "with_x": list(gs.names(phi(t | bx))),
                    }
                    for t in tuples
                }
                return CarouselVerdict(rule, False, None, label, instances)
            if witness is None and not (s & (bx | by)):
                t, who = cover
                label["tuple"] = list(gs.names(t))
                label["member"] = label[who]
                witness = label
    return CarouselVerdict(rule, True, witness, None, instances)


# -- enumeration ----------------------------------------------------------------

DEFAULT_NAMES = ("a", "b", "c", "d")


def enumerate_convex_geometries(n: int) -> Iterator[ClosedFamily]:
    """All convex geometries on ``n <= 4`` labelled elements, in a fixed order."""
    if not 1 <= n <= 4:
        raise InputError("enumeration supports 1 <= n <= 4")
    ground = GroundSet(DEFAULT_NAMES[:n])
    full = ground.full
    middle = list(range(1, full))
    for choice in range(1 << len(middle)):
        sets = [0, full] + [m for j, m in enumerate(middle) if choice >> j & 1]
        member = set(sets)
        if any(a & b not in member for a in sets for b in sets):
            continue
        if all(
            m == full or any((m | 1 << i) in member for i in range(n) if not m >> i & 1)
            for m in sets
        ):
            yield ClosedFamily.from_masks(ground, sets)


def count_convex_geometries_by_anti_exchange(n: int) -> int:
    """Independent count: intersection-closed families with phi(empty) = empty
    and the anti-exchange property, using the definitional closure."""
    if not 1 <= n <= 4:
        raise InputError("enumeration supports 1 <= n <= 4")
    full = (1 << n) - 1
    middle = list(range(0, full))
    count = 0
    for choice in range(1 << len(middle)):
        sets = [full] + [m for j, m in enumerate(middle) if choice >> j & 1]
        member = set(sets)
        if any(a & b not in member for a in sets for b in sets):
            continue

        def phi(y: int) -> int:
            acc = full
            for z in sets:
                if z & y == y:
                    acc &= z
            return acc

        if phi(0) != 0:
            continue
        ok = True
        for y in sets:
            outside = [i for i in range(n) if not y >> i & 1]
            for x, z in itertools.permutations(outside, 2):
                if phi(y | 1 << x) >> z & 1 and phi(y | 1 << z) >> x & 1:
                    ok = False
                    break
            if not ok:
                break
        count += ok
    return count


# -- embeddings -----------------------------------------------------------------

FOUND = "found"
ABSENT = "absent"
BUDGET = "budget-exhausted"


@dataclass(frozen=True)
class EmbeddingResult:
    status: str
    mapping: dict[int, int] | None = None
    ground_map: dict[str, str] | None = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.status == FOUND

    def to_json(self, f1: ClosedFamily | None = None, f2: ClosedFamily | None = None) -> dict:
        out: dict = {"status": self.status, "nodes": self.nodes, "ground_map": self.ground_map}
        if self.mapping is not None and f1 is not None and f2 is not None:
            out["mapping"] = [[list(f1.ground.names(a)), list(f2.ground.names(b))] for a, b in sorted(self.mapping.items())]
        return out


def _heights(f: ClosedFamily) -> dict[int, int]:
    height: dict[int, int] = {}
    for m in f.sets:
        below = [height[s] for s in height if s != m and s & m == s]
        height[m] = 1 + max(below) if below else 0
    return height


def embedding_search(f1: ClosedFamily, f2: ClosedFamily, mode: str = "weak", budget: int = 1_000_000) -> EmbeddingResult:
    """Backtracking search for a meet- and join-preserving injection F1 -> F2.

    ``strong`` mode asks for a bijection.  Returns ``absent`` only when the
    search space was exhausted; ``budget-exhausted`` otherwise.
    """
    if mode not in ("weak", "strong"):
        raise InputError(f"unknown embedding mode {mode!r}")
    if len(f2) > 64:
        raise InputError("embedding search supports families of at most 64 sets")
    if len(f1) > len(f2) or (mode == "strong" and len(f1) != len(f2)):
        return EmbeddingResult(ABSENT)

    a_sets, b_sets = list(f1.sets), list(f2.sets)
    na, nb = len(a_sets), len(b_sets)
    idx_a = {m: i for i, m in enumerate(a_sets)}
    idx_b = {m: i for i, m in enumerate(b_sets)}
    le_a = [[(a_sets[i] & a_sets[j]) == a_sets[i] for j in range(na)] for i in range(na)]
    le_b = [[(b_sets[i] & b_sets[j]) == b_sets[i] for j in range(nb)] for i in range(nb)]
    meet_a = [[idx_a[a_sets[i] & a_sets[j]] for j in range(na)] for i in range(na)]
    join_a = [[idx_a[f1.join(a_sets[i], a_sets[j])] for j in range(na)] for i in range(na)]
    meet_b = [[idx_b.get(b_sets[i] & b_sets[j], -1) for j in range(nb)] for i in range(nb)]
    join_b = [[idx_b[f2.join(b_sets[i], b_sets[j])] for j in range(nb)] for i in range(nb)]
    down_a = [sum(row) for row in zip(*le_a)]
    up_a = [sum(row) for row in le_a]
    down_b = [sum(row) for row in zip(*le_b)]
    up_b = [sum(row) for row in le_b]
    if mode == "strong":
        ha, hb = _heights(f1), _heights(f2)
        ha_i = [ha[m] for m in a_sets]
        hb_i = [hb[m] for m in b_sets]

    def compatible(i: int, j: int) -> bool:
        if mode == "strong":
            return ha_i[i] == hb_i[j] and down_a[i] == down_b[j] and up_a[i] == up_b[j]
        return down_a[i] <= down_b[j] and up_a[i] <= up_b[j]

    candidates = []
    for i in range(na):
        cand = [j for j in range(nb) if compatible(i, j)]
        # try the identical set first so G -> G yields the identity
        same = idx_b.get(a_sets[i])
        if same is not None and same in cand:
            cand.remove(same)
            cand.insert(0, same)
        candidates.append(cand)

    image = [-1] * na
    used = [False] * nb
    nodes = 0

    def consistent(i: int) -> bool:
        fi = image[i]
        for k in range(na):
            fk = image[k]
            if fk < 0:
                continue
            if le_a[i][k] != le_b[fi][fk] or le_a[k][i] != le_b[fk][fi]:
                return False
            m = image[meet_a[i][k]]
            if m >= 0 and meet_b[fi][fk] != m:
                return False
            jn = image[join_a[i][k]]
            if jn >= 0 and join_b[fi][fk] != jn:
                return False
        # i itself may be the meet or join of two mapped sets
        for k in range(na):
            fk = image[k]
            if fk < 0:
                continue
            for l in range(k, na):
                fl = image[l]
                if fl < 0:
                    continue
                if meet_a[k][l] == i and meet_b[fk][fl] != fi:
                    return False
                if join_a[k][l] == i and join_b[fk][fl] != fi:
                    return False
        return True

    def walk(i: int) -> bool:
        nonlocal nodes
        if i == na:
            return True
        for j in candidates[i]:
            if used[j]:
                continue
            nodes += 1
            if nodes > budget:
                raise _Budget
            image[i], used[j] = j, True
            if consistent(i) and walk(i + 1):
                return True
            image[i], used[j] = -1, False
        return False

    try:
        ok = walk(0)
    except _Budget:
        return EmbeddingResult(BUDGET, nodes=nodes)
    if not ok:
        return EmbeddingResult(ABSENT, nodes=nodes)
    mapping = {a_sets[i]: b_sets[image[i]] for i in range(na)}
    ground_map = None
    if mode == "strong":
        ground_map = {}
        for x in range(f1.n):
            target = mapping[f1.closure(1 << x)]
            ys = [y for y in range(f2.n) if f2.closure(1 << y) == target]
            if len(ys) == 1:
                ground_map[f1.ground.elements[x]] = f2.ground.elements[ys[0]]
    return EmbeddingResult(FOUND, mapping, ground_map, nodes)


def check_embedding(f1: ClosedFamily, f2: ClosedFamily, mapping: dict[int, int]) -> bool:
    """Re-verify injectivity and both preservation laws of a map F1 -> F2."""
    if set(mapping) != f1.members or len(set(mapping.values())) != len(mapping):
        return False
    if not set(mapping.values()) <= f2.members:
        return False
    for a in f1.sets:
        for b in f1.sets:
            if mapping[a & b] != mapping[a] & mapping[b]:
                return False
            if mapping[f1.join(a, b)] != f2.join(mapping[a], mapping[b]):
                return False
    return True


# -- the five-element counterexample ------------------------------------------

COUNTEREXAMPLE_GROUND = ("a0", "a1", "a2", "x", "y")


def counterexample_geometries() -> tuple[ClosedFamily, ClosedFamily]:
    """Return ``(G', G)``: the affine geometry and its extension by two sets."""
    ground = GroundSet(COUNTEREXAMPLE_GROUND)
    removed_g = [("a0", "a1", "a2"), ("a0", "a1", "a2", "x"), ("a0", "a1", "a2", "y")]
    removed_gp = removed_g + [("a0", "a2", "x"), ("a0", "a1", "y")]
    drop_g = {ground.mask(s) for s in removed_g}
    drop_gp = {ground.mask(s) for s in removed_gp}
    g = ClosedFamily.from_masks(ground, (m for m in range(ground.full + 1) if m not in drop_g))
    gp = ClosedFamily.from_masks(ground, (m for m in range(ground.full + 1) if m not in drop_gp))
    return gp, g
