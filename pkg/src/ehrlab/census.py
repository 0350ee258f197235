"""Canonical types of trees and unicyclic components, and completion vectors.

A tree type of depth class m and cutoff k records, per child type, how many
principal branches carry it, with counts capped at k.  Types are interned in
a TypeTable, so equality is identity and recursive comparisons are O(1).
A cycle type is the dihedral-minimal word of hanging-tree types around the
cycle.  The total order on tree types is (depth of first appearance, then
canonical serialization), which is deterministic across runs.
"""

from __future__ import annotations

import re
import threading
from collections import Counter
from typing import Iterable, Sequence

from .graphs import Graph, RootedTreeView, UnicyclicView, decompose, unicyclic_view, UNICYCLIC

DEFAULT_ENUM_BOUND = 10 ** 6


class EnumerationTooLarge(RuntimeError):
    """A type-family enumeration would exceed the configured size bound."""


class TreeType:
    """Interned (m, k)-type; payload maps child types to capped branch counts."""

    __slots__ = ("id", "payload", "depth_class", "serial", "key")

    def __init__(self, id_: int, payload: tuple[tuple["TreeType", int], ...]):
        self.id = id_
        self.payload = payload
        self.depth_class = 1 + max(c.depth_class for c, _ in payload) if payload else 0
        if payload:
            inner = ",".join(f"{cnt}×{child.serial}" for child, cnt in payload)
            self.serial = f"({inner})"
        else:
            self.serial = "()"
        self.key = (self.depth_class, self.serial)

    def __repr__(self) -> str:
        return f"TreeType#{self.id}{self.serial}"


class CycleType:
    """Interned (s, m, k)-type: a dihedral-canonical word of tree types."""

    __slots__ = ("id", "word", "depth_class", "serial")

    def __init__(self, id_: int, word: tuple[TreeType, ...]):
        self.id = id_
        self.word = word
        self.depth_class = max(t.depth_class for t in word)
        self.serial = "[" + ",".join(t.serial for t in word) + "]"

    @property
    def s(self) -> int:
        return len(self.word)

    def __repr__(self) -> str:
        return f"CycleType#{self.id}{self.serial}"


class TypeTable:
    """Intern store for tree and cycle types at a fixed cutoff k."""

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("cutoff k must be >= 1")
        self.k = k
        self._lock = threading.Lock()
        self._trees: dict[tuple, TreeType] = {}
        self._cycles: dict[tuple, CycleType] = {}
        self.root_type = self.intern_tree(())

    def intern_tree(self, payload: Iterable[tuple[TreeType, int]]) -> TreeType:
        payload = tuple(sorted(payload, key=lambda item: item[0].key))
        for child, cnt in payload:
            if not (1 <= cnt <= self.k):
                raise ValueError(f"payload count {cnt} outside 1..{self.k}")
        ids = tuple((child.id, cnt) for child, cnt in payload)
        with self._lock:
            existing = self._trees.get(ids)
            if existing is not None:
                return existing
            t = TreeType(len(self._trees), payload)
            self._trees[ids] = t
            return t

    def intern_cycle(self, word: Sequence[TreeType]) -> CycleType:
        canonical = dihedral_minimum(tuple(word), key=lambda t: t.key)
        ids = tuple(t.id for t in canonical)
        with self._lock:
            existing = self._cycles.get(ids)
            if existing is not None:
                return existing
            c = CycleType(len(self._cycles), canonical)
            self._cycles[ids] = c
            return c

    def order_rank(self, t: TreeType):
        """Sortable rank realizing the total order on tree types."""
        return t.key


def _least_rotation(seq: Sequence) -> int:
    """Booth's algorithm: start index of the lexicographically least rotation."""
    s = tuple(seq) + tuple(seq)
    f = [-1] * len(s)
    kk = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = f[j - kk - 1]
        while i != -1 and sj != s[kk + i + 1]:
            if sj < s[kk + i + 1]:
                kk = j - i - 1
            i = f[i]
        if sj != s[kk + i + 1]:
            if sj < s[kk]:
                kk = j
            f[j - kk] = -1
        else:
            f[j - kk] = i + 1
    return kk


def dihedral_minimum(word: Sequence, key=None) -> tuple:
    """Minimum of a word over all 2s rotations and reflections, lexicographically.

    Runs Booth's least-rotation algorithm on the word and on its reversal;
    the reflections of a cyclic word are exactly the rotations of its reversal.
    """
    w = tuple(word)
    if not w:
        return w
    keys = w if key is None else tuple(key(x) for x in w)
    s = len(w)
    r1 = _least_rotation(keys)
    fwd = w[r1:] + w[:r1]
    fwd_keys = keys[r1:] + keys[:r1]
    rev = w[::-1]
    rev_keys = keys[::-1]
    r2 = _least_rotation(rev_keys)
    bwd = rev[r2:] + rev[:r2]
    bwd_keys = rev_keys[r2:] + rev_keys[:r2]
    return fwd if fwd_keys <= bwd_keys else bwd


def tree_type(t: RootedTreeView, m: int, k: int, table: TypeTable) -> TreeType:
    """The (m, k)-type of a rooted tree (deeper vertices are ignored)."""
    if k != table.k:
        raise ValueError(f"table has cutoff {table.k}, requested {k}")
    memo: dict[tuple[int, int], TreeType] = {}

    def walk(v: int, rem: int) -> TreeType:
        if rem == 0 or not t.children[v]:
            return table.root_type
        cached = memo.get((v, rem))
        if cached is not None:
            return cached
        counts: Counter[TreeType] = Counter(walk(c, rem - 1) for c in t.children[v])
        payload = tuple((child, min(cnt, k)) for child, cnt in counts.items())
        result = table.intern_tree(payload)
        memo[(v, rem)] = result
        return result

    return walk(t.root, m)


def cycle_type(u: UnicyclicView, m: int, k: int, table: TypeTable) -> CycleType:
    """The (s, m, k)-type of a unicyclic component."""
    word = tuple(tree_type(u.trees[c], m, k, table) for c in u.cycle)
    return table.intern_cycle(word)


def cycle_type_with_enumeration(u: UnicyclicView, m: int, k: int,
                                table: TypeTable) -> tuple[CycleType, tuple[int, ...]]:
    """Cycle type plus a cycle-vertex enumeration realizing the canonical word.

    The returned vertex order lists the cycle consecutively so that the
    hanging-tree types along it spell the canonical word.
    """
    word = tuple(tree_type(u.trees[c], m, k, table) for c in u.cycle)
    gamma = table.intern_cycle(word)
    target = tuple(t.id for t in gamma.word)
    verts = u.cycle
    s = len(verts)
    ids = tuple(t.id for t in word)
    for r in range(s):
        if tuple(ids[(r + i) % s] for i in range(s)) == target:
            return gamma, tuple(verts[(r + i) % s] for i in range(s))
    for r in range(s):
        if tuple(ids[(r - i) % s] for i in range(s)) == target:
            return gamma, tuple(verts[(r - i) % s] for i in range(s))
    raise AssertionError("canonical word not found among dihedral images")


def project_tree_type(t: TreeType, m: int, k: int, table: TypeTable) -> TreeType:
    """The (m, k)-type of any tree realizing t (coarsening to depth m)."""
    if t.depth_class <= m:
        return t
    if m == 0:
        return table.root_type
    counts: Counter[TreeType] = Counter()
    for child, cnt in t.payload:
        counts[project_tree_type(child, m - 1, k, table)] += cnt
    payload = tuple((child, min(cnt, k)) for child, cnt in counts.items())
    return table.intern_tree(payload)


def project_cycle_type(c: CycleType, m: int, k: int, table: TypeTable) -> CycleType:
    """Coarsen a cycle type to depth m."""
    if c.depth_class <= m:
        return c
    word = tuple(project_tree_type(t, m, k, table) for t in c.word)
    return table.intern_cycle(word)


def count_tree_types(m: int, k: int) -> int:
    """|Sigma_{m,k}| by the recurrence; raises if it exceeds the guard bound."""
    size = 1
    for _ in range(m):
        if size * _log2_kp1(k) > 64:  # (k+1)**size would overflow any sane bound
            raise EnumerationTooLarge(f"|Sigma_{m},{k}| is astronomically large")
        size = (k + 1) ** size
        if size > DEFAULT_ENUM_BOUND ** 2:
            raise EnumerationTooLarge(f"|Sigma_{m},{k}| = {size} exceeds guard")
    return size


def _log2_kp1(k: int) -> float:
    import math
    return math.log2(k + 1)


def enumerate_tree_types(m: int, k: int, table: TypeTable,
                         bound: int = DEFAULT_ENUM_BOUND) -> list[TreeType]:
    """All of Sigma_{m,k}, sorted by the total order."""
    size = count_tree_types(m, k)
    if size > bound:
        raise EnumerationTooLarge(f"|Sigma_{m},{k}| = {size} > bound {bound}")
    level = [table.root_type]
    for _ in range(m):
        prev = level
        level = []
        # every function prev -> {0..k} is a realizable payload
        stack: list[tuple[int, list[tuple[TreeType, int]]]] = [(0, [])]
        while stack:
            idx, acc = stack.pop()
            if idx == len(prev):
                level.append(table.intern_tree(tuple(acc)))
                continue
            for cnt in range(k + 1):
                nxt = acc if cnt == 0 else acc + [(prev[idx], cnt)]
                stack.append((idx + 1, nxt))
        level.sort(key=lambda t: t.key)
    return level


def enumerate_cycle_types(s: int, m: int, k: int, table: TypeTable,
                          bound: int = DEFAULT_ENUM_BOUND) -> list[CycleType]:
    """All of Gamma_{s,m,k}, via canonicalizing every word over Sigma_{m,k}."""
    sigma = enumerate_tree_types(m, k, table, bound)
    if len(sigma) ** s > bound:
        raise EnumerationTooLarge(
            f"|Sigma|^s = {len(sigma)}^{s} exceeds bound {bound}")
    seen: dict[int, CycleType] = {}
    word = [sigma[0]] * s
    idx = [0] * s

    def rec(pos: int):
        if pos == s:
            c = table.intern_cycle(tuple(word))
            seen[c.id] = c
            return
        for t in sigma:
            word[pos] = t
            rec(pos + 1)

    rec(0)
    return sorted(seen.values(), key=lambda c: tuple(t.key for t in c.word))


def sup_set(gamma: CycleType, m: int, k: int, table: TypeTable,
            bound: int = DEFAULT_ENUM_BOUND) -> list[CycleType]:
    """Depth-(m+1) refinements of gamma: types projecting onto it at depth m."""
    if gamma.depth_class > m:
        raise ValueError(f"type has depth class {gamma.depth_class}, not in Gamma at m={m}")
    finer = enumerate_cycle_types(gamma.s, m + 1, k, table, bound)
    return [c for c in finer if project_cycle_type(c, m, k, table) is gamma]


class CompletionVector:
    """Capped counts of short unicyclic components per (depth level, cycle type)."""

    def __init__(self, k: int, M1: int, M2: int,
                 counts: dict[tuple[int, CycleType], int]):
        self.k = k
        self.M1 = M1
        self.M2 = M2
        clean: dict[tuple[int, CycleType], int] = {}
        for (m, gamma), n in counts.items():
            if n == 0:
                continue
            if not (0 <= n <= k):
                raise ValueError(f"count {n} outside 0..{k}")
            if not (3 <= gamma.s <= M1):
                raise ValueError(f"cycle length {gamma.s} outside 3..{M1}")
            if not (gamma.depth_class <= m <= M2):
                raise ValueError(f"level {m} invalid for depth class {gamma.depth_class}")
            clean[(m, gamma)] = n
        self.counts = clean

    def get(self, m: int, gamma: CycleType) -> int:
        return self.counts.get((m, gamma), 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CompletionVector):
            return NotImplemented
        return (self.k, self.M1, self.M2) == (other.k, other.M1, other.M2) and {
            (m, g.serial): n for (m, g), n in self.counts.items()
        } == {(m, g.serial): n for (m, g), n in other.counts.items()}

    def __hash__(self):
        return hash((self.k, self.M1, self.M2,
                     frozenset(((m, g.serial), n) for (m, g), n in self.counts.items())))

    def to_jsonable(self) -> dict:
        entries = [
            {"s": gamma.s, "m": m, "type": gamma.serial, "n": n}
            for (m, gamma), n in self.counts.items()
        ]
        entries.sort(key=lambda e: (e["s"], e["m"], e["type"]))
        return {"k": self.k, "M1": self.M1, "M2": self.M2, "counts": entries}

    @classmethod
    def from_jsonable(cls, data: dict, table: TypeTable) -> "CompletionVector":
        counts: dict[tuple[int, CycleType], int] = {}
        for entry in data["counts"]:
            gamma = parse_cycle_serial(entry["type"], table)
            if gamma.s != entry["s"]:
                raise ValueError(f"entry s={entry['s']} does not match word length {gamma.s}")
            counts[(entry["m"], gamma)] = entry["n"]
        return cls(data["k"], data["M1"], data["M2"], counts)


class ConsistencyReport:
    """Outcome of the refinement-sum check on a completion vector."""

    def __init__(self, violations: list[tuple[int, CycleType, int, int]]):
        self.violations = violations

    @property
    def ok(self) -> bool:
        return not self.violations

    def __repr__(self) -> str:
        return f"ConsistencyReport(ok={self.ok}, violations={len(self.violations)})"


def raw_type_counts(g: Graph, k: int, M1: int, M2: int,
                    table: TypeTable) -> dict[tuple[int, CycleType], int]:
    """Uncapped per-(m, type) counts of short unicyclic components."""
    counts: dict[tuple[int, CycleType], int] = {}
    for comp in decompose(g):
        if comp.kind != UNICYCLIC or len(comp.cycle) > M1:
            continue
        view = unicyclic_view(g, comp)
        stable_from = min(view.max_depth, M2)
        gamma = None
        for m in range(stable_from + 1):
            gamma = cycle_type(view, m, k, table)
            counts[(m, gamma)] = counts.get((m, gamma), 0) + 1
        for m in range(stable_from + 1, M2 + 1):
            counts[(m, gamma)] = counts.get((m, gamma), 0) + 1
    return counts


def completion_vector(g: Graph, k: int, M1: int, M2: int,
                      table: TypeTable) -> CompletionVector:
    """Counts per (m, cycle type) truncated at the cutoff."""
    raw = raw_type_counts(g, k, M1, M2, table)
    return CompletionVector(k, M1, M2, {key: min(n, k) for key, n in raw.items()})


def check_consistency(v: CompletionVector, table: TypeTable) -> ConsistencyReport:
    """Verify n_gamma = (sum over refinements) ^ k between adjacent levels.

    Avoids enumerating type families: a level-m count can only disagree with
    the capped sum of the level-(m+1) counts projecting onto it, and all the
    nonzero entries are in the vector already.
    """
    k = v.k
    violations: list[tuple[int, CycleType, int, int]] = []
    by_level: dict[int, dict[CycleType, int]] = {}
    for (m, gamma), n in v.counts.items():
        by_level.setdefault(m, {})[gamma] = n
    for m in range(v.M2):
        sums: dict[CycleType, int] = {}
        for gamma, n in by_level.get(m + 1, {}).items():
            coarse = project_cycle_type(gamma, m, k, table)
            sums[coarse] = sums.get(coarse, 0) + n
        inspect = set(sums) | set(by_level.get(m, {}))
        for gamma in inspect:
            expected = min(sums.get(gamma, 0), k)
            actual = by_level.get(m, {}).get(gamma, 0)
            if actual != expected:
                violations.append((m, gamma, expected, actual))
    violations.sort(key=lambda item: (item[0], item[1].serial))
    return ConsistencyReport(violations)


# -- canonical serialization parsing ---------------------------------------

_COUNT_RE = re.compile(r"\d+")


def parse_tree_serial(text: str, table: TypeTable) -> TreeType:
    """Re-intern a tree type from its canonical serialization."""
    pos = 0

    def parse() -> TreeType:
        nonlocal pos
        if text[pos] != "(":
            raise ValueError(f"expected '(' at {pos} in {text!r}")
        pos += 1
        payload = []
        while text[pos] != ")":
            mcount = _COUNT_RE.match(text, pos)
            if not mcount:
                raise ValueError(f"expected count at {pos} in {text!r}")
            cnt = int(mcount.group())
            pos = mcount.end()
            if text[pos] != "×":
                raise ValueError(f"expected '×' at {pos} in {text!r}")
            pos += 1
            payload.append((parse(), cnt))
            if text[pos] == ",":
                pos += 1
        pos += 1
        return table.intern_tree(tuple(payload))

    result = parse()
    if pos != len(text):
        raise ValueError(f"trailing characters after {pos} in {text!r}")
    return result


def parse_cycle_serial(text: str, table: TypeTable) -> CycleType:
    """Re-intern a cycle type from its canonical serialization."""
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"bad cycle serialization {text!r}")
    inner = text[1:-1]
    word = []
    depth = 0
    start = 0
    for i, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            word.append(parse_tree_serial(inner[start:i], table))
            start = i + 1
    word.append(parse_tree_serial(inner[start:], table))
    return table.intern_cycle(tuple(word))
