"""Finite groups stored as explicit multiplication tables.

Every group used in the package is small (order <= 64), so all structure
(center, commutator subgroup, abelianization, one-dimensional characters,
isomorphism) is computed by exhaustive search over the table.
"""
from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import UnknownGroupName

__all__ = [
    "FiniteGroup",
    "Subgroup",
    "Character",
    "close_under",
    "group_from_elements",
    "group_from_presentation",
    "todd_coxeter",
    "direct_product",
    "semidirect_product",
    "build_named_group",
    "NAMED_GROUPS",
    "center",
    "derived_subgroup",
    "subgroup_generated",
    "abelianization",
    "characters",
    "character_by_kernel",
    "generating_set",
    "is_isomorphic",
    "find_isomorphism",
    "group_to_json",
    "group_from_json",
]


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its multiplication table.

    ``table[a, b]`` is the index of the product ``a*b``.
    """

    table: np.ndarray
    identity: int
    labels: tuple[str, ...]
    name: str = ""

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        t.setflags(write=False)
        object.__setattr__(self, "table", t)
        if len(self.labels) != t.shape[0]:
            raise ValueError("one label per element required")

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def word(self, *elems: int) -> int:
        out = self.identity
        for e in elems:
            out = int(self.table[out, e])
        return out

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = self.identity
        for _ in range(k):
            out = int(self.table[out, a])
        return out

    def inv(self, a: int) -> int:
        return int(np.flatnonzero(self.table[a] == self.identity)[0])

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = int(self.table[x, a])
            k += 1
        return k

    def commutator(self, a: int, b: int) -> int:
        return self.word(a, b, self.inv(a), self.inv(b))

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def exponent(self) -> int:
        return int(np.lcm.reduce([self.element_order(a) for a in self.elements]))

    def order_profile(self) -> tuple[int, ...]:
        return tuple(sorted(self.element_order(a) for a in self.elements))

    def check(self) -> None:
        """Raise ``ValueError`` unless the table defines a group."""
        t, n, e = self.table, self.order, self.identity
        full = np.arange(n)
        for k in range(n):
            if not (np.array_equal(np.sort(t[k]), full) and np.array_equal(np.sort(t[:, k]), full)):
                raise ValueError(f"table is not a Latin square at index {k}")
        if not (np.array_equal(t[e], full) and np.array_equal(t[:, e], full)):
            raise ValueError("identity element does not act trivially")
        # (ab)c == a(bc) for all triples, vectorised over c
        left = t[t[:, :, None], np.arange(n)[None, None, :]]
        right = t[np.arange(n)[:, None, None], t[None, :, :]]
        if not np.array_equal(left, right):
            raise ValueError("multiplication is not associative")


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: frozenset[int]

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, a):
        return a in self.members

    def __len__(self):
        return len(self.members)

    def labels(self) -> list[str]:
        return [self.parent.labels[a] for a in sorted(self.members)]

    def is_subgroup(self) -> bool:
        G = self.parent
        if G.identity not in self.members:
            return False
        return all(G.mul(a, b) in self.members and G.inv(a) in self.members
                   for a in self.members for b in self.members)

    def as_group(self) -> FiniteGroup:
        elems = sorted(self.members)
        pos = {a: i for i, a in enumerate(elems)}
        table = [[pos[self.parent.mul(a, b)] for b in elems] for a in elems]
        return FiniteGroup(np.array(table), pos[self.parent.identity],
                           tuple(self.parent.labels[a] for a in elems))


@dataclass(frozen=True, eq=False)
class Character:
    """A one-dimensional unitary representation ``values[g] = chi(g)``."""

    group: FiniteGroup
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __call__(self, g: int) -> complex:
        return complex(self.values[g])

    def __mul__(self, other: "Character") -> "Character":
        return Character(self.group, self.values * other.values)

    def conj(self) -> "Character":
        return Character(self.group, self.values.conj())

    def is_trivial(self, tol=1e-12) -> bool:
        return bool(np.allclose(self.values, 1.0, atol=tol))

    def homomorphism_residual(self) -> float:
        t = self.group.table
        return float(np.max(np.abs(self.values[:, None] * self.values[None, :] - self.values[t])))

    def same_as(self, other: "Character", tol=1e-9) -> bool:
        return bool(np.allclose(self.values, other.values, atol=tol))


# ---------------------------------------------------------------------------
# construction


def close_under(generators: Sequence, mul: Callable, key: Callable[[object], Hashable],
                identity, max_order: int = 4096):
    """Breadth-first closure of ``generators`` under right multiplication.

    Returns ``(elements, words)`` where ``words[k]`` is a shortest tuple of
    generator indices whose ordered product is ``elements[k]``.
    """
    elements, words = [identity], [()]
    seen = {key(identity): 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for gi, g in enumerate(generators):
            x = mul(elements[i], g)
            k = key(x)
            if k not in seen:
                seen[k] = len(elements)
                elements.append(x)
                words.append(words[i] + (gi,))
                queue.append(len(elements) - 1)
                if len(elements) > max_order:
                    raise ValueError(f"closure exceeds {max_order} elements")
    return elements, words


def _word_label(word: Sequence[int], names: Sequence[str]) -> str:
    if not word:
        return "e"
    parts = []
    for g, run in itertools.groupby(word):
        k = len(list(run))
        parts.append(names[g] if k == 1 else f"{names[g]}^{k}")
    return "".join(parts)


def group_from_elements(generators: Sequence, mul: Callable, key: Callable, identity,
                        names: Sequence[str] | None = None, name: str = ""):
    """Build a :class:`FiniteGroup` from concrete generators.

    Returns ``(group, elements)`` so callers keep the concrete realisation
    (matrices, permutations, tuples...) aligned with the table indices.
    """
    elements, words = close_under(generators, mul, key, identity)
    names = names or [chr(ord("a") + i) for i in range(len(generators))]
    index = {key(x): i for i, x in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            table[i, j] = index[key(mul(x, y))]
    labels = tuple(_word_label(w, names) for w in words)
    return FiniteGroup(table, 0, labels, name), elements


def todd_coxeter(n_gens: int, relators: Iterable[Sequence[int]], max_cosets: int = 20000):
    """Enumerate cosets of the trivial subgroup of a finitely presented group.

    Letters are encoded as ``2*i`` for generator ``i`` and ``2*i+1`` for its
    inverse.  Uses the HLT strategy with coincidence processing.  Returns a
    list of permutations (one per generator) of the coset indices, i.e. the
    right regular action.  Raises ``ValueError`` if ``max_cosets`` is hit,
    which is what happens for presentations of infinite groups.
    """
    relators = [list(r) for r in relators if len(r)]
    ncols = 2 * n_gens
    inv = [x ^ 1 for x in range(ncols)]
    table: list[list[int | None]] = [[None] * ncols]
    parent = [0]

    def rep(c):
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def merge(a, b, queue):
        a, b = rep(a), rep(b)
        if a == b:
            return
        lo, hi = min(a, b), max(a, b)
        parent[hi] = lo
        queue.append(hi)

    def coincidence(a, b):
        queue: list[int] = []
        merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(ncols):
                f = table[e][x]
                if f is None:
                    continue
                table[f][inv[x]] = None
                e1, f1 = rep(e), rep(f)
                if table[e1][x] is not None:
                    merge(f1, table[e1][x], queue)
                elif table[f1][inv[x]] is not None:
                    merge(e1, table[f1][inv[x]], queue)
                else:
                    table[e1][x] = f1
                    table[f1][inv[x]] = e1

    def define(c, x):
        if len(table) >= max_cosets:
            raise ValueError(f"coset enumeration exceeded {max_cosets} cosets")
        d = len(table)
        table.append([None] * ncols)
        parent.append(d)
        table[c][x] = d
        table[d][inv[x]] = c

    def scan_and_fill(c, w):
        f = b = c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] is not None:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][inv[w[j]]] is not None:
                b = table[b][inv[w[j]]]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][inv[w[i]]] = f
                return
            define(f, w[i])

    c = 0
    while c < len(table):
        for w in relators:
            if parent[c] != c:
                break
            scan_and_fill(c, w)
        if parent[c] == c:
            for x in range(ncols):
                if table[c][x] is None:
                    define(c, x)
        c += 1

    live = [k for k in range(len(table)) if parent[k] == k]
    pos = {k: i for i, k in enumerate(live)}
    return [tuple(pos[rep(table[k][2 * g])] for k in live) for g in range(n_gens)]


def _parse_word(word: str, names: Sequence[str]) -> list[int]:
    """Parse e.g. ``"a^4"``, ``"abab"``, ``"b a^-1"`` into letters."""
    letters = []
    tokens = word.replace(" ", "")
    i = 0
    while i < len(tokens):
        ch = tokens[i]
        if ch not in names:
            raise ValueError(f"unknown generator {ch!r} in {word!r}")
        g = names.index(ch)
        i += 1
        power = 1
        if i < len(tokens) and tokens[i] == "^":
            j = i + 1
            while j < len(tokens) and (tokens[j].isdigit() or tokens[j] == "-"):
                j += 1
            power = int(tokens[i + 1:j])
            i = j
        letter = 2 * g if power > 0 else 2 * g + 1
        letters.extend([letter] * abs(power))
    return letters


def group_from_presentation(names: Sequence[str], relators: Sequence[str], name: str = "",
                            max_cosets: int = 20000) -> FiniteGroup:
    """Finite group from generators and relators given as words equal to 1.

    >>> G = group_from_presentation("ab", ["a^4", "b^2", "abab^-1a^-1b^-1a^-1b^-1"])
    """
    rels = [_parse_word(r, names) for r in relators]
    perms = todd_coxeter(len(names), rels, max_cosets=max_cosets)
    n = len(perms[0])
    ident = tuple(range(n))

    def compose(p, q):  # apply p then q (right action)
        return tuple(q[i] for i in p)

    G, _ = group_from_elements(perms, compose, lambda p: p, ident, names, name)
    return G


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str = "") -> FiniteGroup:
    nG, nH = G.order, H.order
    idx = lambda a, b: a * nH + b  # noqa: E731
    table = np.empty((nG * nH, nG * nH), dtype=np.int64)
    for a1, b1, a2, b2 in itertools.product(range(nG), range(nH), range(nG), range(nH)):
        table[idx(a1, b1), idx(a2, b2)] = idx(G.mul(a1, a2), H.mul(b1, b2))
    labels = tuple(f"({x},{y})" for x in G.labels for y in H.labels)
    return FiniteGroup(table, idx(G.identity, H.identity), labels, name)


def semidirect_product(N: FiniteGroup, H: FiniteGroup, action: Callable[[int, int], int],
                       name: str = "") -> FiniteGroup:
    """``N ⋊ H`` with ``(n1,h1)(n2,h2) = (n1 * act(h1, n2), h1 h2)``.

    ``action(h, n)`` must be an automorphism of N for each h, and a
    homomorphism H -> Aut(N).
    """
    nN, nH = N.order, H.order
    idx = lambda n, h: n * nH + h  # noqa: E731
    table = np.empty((nN * nH, nN * nH), dtype=np.int64)
    for n1, h1, n2, h2 in itertools.product(range(nN), range(nH), range(nN), range(nH)):
        table[idx(n1, h1), idx(n2, h2)] = idx(N.mul(n1, action(h1, n2)), H.mul(h1, h2))
    labels = tuple(f"({x},{y})" for x in N.labels for y in H.labels)
    return FiniteGroup(table, idx(N.identity, H.identity), labels, name)


def _cyclic(n: int, gen: str = "a", name: str = "") -> FiniteGroup:
    table = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    labels = tuple("e" if k == 0 else (gen if k == 1 else f"{gen}^{k}") for k in range(n))
    return FiniteGroup(table, 0, labels, name or f"Z{n}")


def _klein() -> FiniteGroup:
    # e, x, y, z with xy = z etc.; bit encoding x=01, z=10, y=11 so y = x*z
    bits = {"e": 0, "x": 1, "z": 2, "y": 3}
    labels = ("e", "x", "y", "z")
    code = [bits[l] for l in labels]
    back = {c: i for i, c in enumerate(code)}
    table = np.array([[back[code[i] ^ code[j]] for j in range(4)] for i in range(4)])
    return FiniteGroup(table, 0, labels, "Z2xZ2")


# Presentation of D2 ⋊ Z4 on alpha (order 4) and beta (order 2).  The last
# two relators say (alpha beta)^4 = 1 and (alpha beta)^2 = (beta alpha)^2;
# without the first of them the group has order 32.
D2_SEMIDIRECT_Z4_PRESENTATION = ("ab", ("a^4", "b^2", "abababab", "ababa^-1b^-1a^-1b^-1"))


def _d2_semidirect_z4() -> FiniteGroup:
    names, rels = D2_SEMIDIRECT_Z4_PRESENTATION
    G = group_from_presentation(names, rels, name="D2_semidirect_Z4")
    return FiniteGroup(G.table, G.identity,
                       tuple(l.replace("a", "α").replace("b", "β") for l in G.labels), G.name)


NAMED_GROUPS: dict[str, Callable[[], FiniteGroup]] = {
    "Z2": lambda: _cyclic(2),
    "Z4": lambda: _cyclic(4),
    "Z2xZ2": _klein,
    "Z2xZ2_x_Z2xZ2": lambda: direct_product(_klein(), _klein(), "Z2xZ2_x_Z2xZ2"),
    "D2_semidirect_Z4": _d2_semidirect_z4,
}


def build_named_group(name: str) -> FiniteGroup:
    """One of ``Z2, Z4, Z2xZ2, Z2xZ2_x_Z2xZ2, D2_semidirect_Z4``."""
    try:
        builder = NAMED_GROUPS[name]
    except KeyError:
        raise UnknownGroupName(name) from None
    G = builder()
    G.check()
    return G


# ---------------------------------------------------------------------------
# structure


def subgroup_generated(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    members = {G.identity}
    frontier = [G.identity]
    gens = list(gens)
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                b = G.mul(a, g)
                if b not in members:
                    members.add(b)
                    new.append(b)
        frontier = new
    return Subgroup(G, frozenset(members))


def center(G: FiniteGroup) -> Subgroup:
    t = G.table
    return Subgroup(G, frozenset(a for a in G.elements if np.array_equal(t[a], t[:, a])))


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    comms = {G.commutator(a, b) for a in G.elements for b in G.elements}
    return subgroup_generated(G, comms)


def abelianization(G: FiniteGroup) -> tuple[FiniteGroup, np.ndarray]:
    """Quotient ``G/[G,G]`` and the quotient map as an index array."""
    D = derived_subgroup(G)
    qmap = -np.ones(G.order, dtype=np.int64)
    reps = []
    for a in G.elements:
        if qmap[a] >= 0:
            continue
        for d in D.members:
            qmap[G.mul(a, d)] = len(reps)
        reps.append(a)
    n = len(reps)
    table = np.array([[qmap[G.mul(reps[i], reps[j])] for j in range(n)] for i in range(n)])
    labels = tuple(f"[{G.labels[r]}]" for r in reps)
    A = FiniteGroup(table, int(qmap[G.identity]), labels, f"{G.name}_ab" if G.name else "")
    return A, qmap


def generating_set(G: FiniteGroup) -> list[int]:
    """A small generating set, chosen greedily by decreasing element order."""
    gens: list[int] = []
    current = subgroup_generated(G, [])
    for a in sorted(G.elements, key=lambda x: (-G.element_order(x), x)):
        if a not in current.members:
            gens.append(a)
            current = subgroup_generated(G, gens)
            if current.order == G.order:
                break
    return gens


def _root(k: int, n: int) -> complex:
    z = np.exp(2j * np.pi * k / n)
    # exact zeros for the real or imaginary part where they should vanish
    return complex(round(z.real, 15) + 0.0, round(z.imag, 15) + 0.0)


def _abelian_characters(A: FiniteGroup) -> list[np.ndarray]:
    gens = generating_set(A)
    orders = [A.element_order(g) for g in gens]
    elems, words = close_under(gens, A.mul, lambda x: x, A.identity)
    out: list[np.ndarray] = []
    for ks in itertools.product(*[range(n) for n in orders]):
        gen_vals = [_root(k, n) for k, n in zip(ks, orders)]
        vals = np.empty(A.order, dtype=complex)
        for x, w in zip(elems, words):
            vals[x] = np.prod([gen_vals[g] for g in w]) if w else 1.0
        if np.max(np.abs(vals[:, None] * vals[None, :] - vals[A.table])) < 1e-9:
            if not any(np.allclose(vals, o) for o in out):
                out.append(vals)
    return out


def characters(G: FiniteGroup) -> list[Character]:
    """All one-dimensional characters of G, lifted from its abelianization.

    The trivial character comes first.
    """
    A, qmap = abelianization(G)
    chars = []
    for k, vals in enumerate(_abelian_characters(A)):
        chars.append(Character(G, vals[qmap], label=f"chi{k}"))
    chars.sort(key=lambda c: not c.is_trivial())
    # name characters by their kernel when it is {e, m} (Klein-type labelling)
    for i, c in enumerate(chars):
        kernel = [a for a in G.elements if abs(c(a) - 1) < 1e-9]
        if c.is_trivial():
            label = "chi_1"
        elif len(kernel) == 2:
            label = f"chi_{G.labels[[a for a in kernel if a != G.identity][0]]}"
        else:
            label = f"chi{i}"
        chars[i] = Character(G, c.values, label)
    return chars


def character_by_kernel(G: FiniteGroup, element_label: str) -> Character:
    """The Klein-type character equal to 1 exactly on ``{e, m}``."""
    for c in characters(G):
        if c.label == f"chi_{element_label}":
            return c
    raise KeyError(element_label)


# ---------------------------------------------------------------------------
# isomorphism


def _extend(G: FiniteGroup, H: FiniteGroup, gens: Sequence[int], images: Sequence[int]):
    """Extend a generator assignment to a map on <gens>; None if inconsistent."""
    phi = {G.identity: H.identity}
    queue = deque([G.identity])
    while queue:
        a = queue.popleft()
        for g, h in zip(gens, images):
            b = G.mul(a, g)
            img = H.mul(phi[a], h)
            if b in phi:
                if phi[b] != img:
                    return None
            else:
                phi[b] = img
                queue.append(b)
    return phi


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> dict[int, int] | None:
    """An isomorphism ``G -> H`` as a dict, found by backtracking over the
    images of a small generating set of G, or ``None``."""
    if G.order != H.order or G.order_profile() != H.order_profile():
        return None
    if G.is_abelian() != H.is_abelian():
        return None
    gens = generating_set(G)
    by_order: dict[int, list[int]] = {}
    for b in H.elements:
        by_order.setdefault(H.element_order(b), []).append(b)
    cands = [by_order.get(G.element_order(g), []) for g in gens]

    def search(k, images):
        phi = _extend(G, H, gens[:k], images)
        if phi is None or len(set(phi.values())) != len(phi):
            return None
        if k == len(gens):
            if len(phi) != G.order:
                return None
            ok = all(phi[G.mul(a, b)] == H.mul(phi[a], phi[b]) for a in G.elements for b in G.elements)
            return phi if ok else None
        for c in cands[k]:
            if c in phi.values():
                continue
            res = search(k + 1, images + [c])
            if res is not None:
                return res
        return None

    return search(0, [])


def is_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    if G.order > 64 or H.order > 64:
        raise ValueError("isomorphism search is limited to order <= 64")
    return find_isomorphism(G, H) is not None


# ---------------------------------------------------------------------------
# serialisation


def group_to_json(G: FiniteGroup) -> dict:
    return {"name": G.name, "order": G.order, "identity": G.identity,
            "labels": list(G.labels), "table": G.table.tolist()}


def group_from_json(doc: dict | str) -> FiniteGroup:
    if isinstance(doc, str):
        doc = json.loads(doc)
    G = FiniteGroup(np.array(doc["table"]), int(doc.get("identity", 0)),
                    tuple(doc["labels"]), doc.get("name", ""))
    if G.order != doc["order"]:
        raise ValueError("order does not match table")
    G.check()
    return G
