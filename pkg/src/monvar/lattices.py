"""Finite lattices from Hasse data, with brute-force special-element predicates.

Nine element properties are checked by evaluating their defining
universally-quantified formulas over all pairs; the dual properties
(costandard, codistributive, upper-modular) reuse the primal code on the
order dual, so each formula is transcribed exactly once.
"""

from __future__ import annotations

import json
from enum import Enum
from functools import cache

import numpy as np

__all__ = [
    "LatticeError",
    "FiniteLattice",
    "ElementProperty",
    "PROPERTY_IMPLICATIONS",
    "build_lattice",
    "has_property",
    "elements_with",
    "is_sublattice",
    "check_implications",
    "search_element_counterexample",
    "lattice_from_json",
    "load_lattice_file",
    "chain",
    "m3",
    "n5",
    "boolean_cube",
    "with_new_top",
    "with_new_bottom",
    "product",
    "builtin_catalog",
]


class LatticeError(ValueError):
    pass


class ElementProperty(Enum):
    NEUTRAL = "neutral"
    STANDARD = "standard"
    COSTANDARD = "costandard"
    DISTRIBUTIVE = "distributive"
    CODISTRIBUTIVE = "codistributive"
    MODULAR = "modular"
    LOWER_MODULAR = "lower-modular"
    UPPER_MODULAR = "upper-modular"
    CANCELLABLE = "cancellable"


# Element-wise implications that hold in every lattice.
PROPERTY_IMPLICATIONS: tuple[tuple[ElementProperty, ElementProperty], ...] = (
    (ElementProperty.NEUTRAL, ElementProperty.STANDARD),
    (ElementProperty.NEUTRAL, ElementProperty.COSTANDARD),
    (ElementProperty.STANDARD, ElementProperty.CANCELLABLE),
    (ElementProperty.COSTANDARD, ElementProperty.CANCELLABLE),
    (ElementProperty.CANCELLABLE, ElementProperty.MODULAR),
    (ElementProperty.STANDARD, ElementProperty.DISTRIBUTIVE),
    (ElementProperty.COSTANDARD, ElementProperty.CODISTRIBUTIVE),
    (ElementProperty.DISTRIBUTIVE, ElementProperty.LOWER_MODULAR),
    (ElementProperty.CODISTRIBUTIVE, ElementProperty.UPPER_MODULAR),
)

_DUAL_OF = {
    ElementProperty.COSTANDARD: ElementProperty.STANDARD,
    ElementProperty.CODISTRIBUTIVE: ElementProperty.DISTRIBUTIVE,
    ElementProperty.UPPER_MODULAR: ElementProperty.LOWER_MODULAR,
}


class FiniteLattice:
    """An explicit finite lattice: labels, order matrix, meet/join tables."""

    def __init__(self, labels: tuple[str, ...], order: np.ndarray, name: str = ""):
        self.labels = tuple(labels)
        self.name = name or ",".join(self.labels)
        self.index = {label: k for k, label in enumerate(self.labels)}
        if len(self.index) != len(self.labels):
            raise LatticeError("duplicate element labels")
        if not self.labels:
            raise LatticeError("a lattice needs at least one element")
        self.order = order
        n = len(self.labels)
        meet_table = np.empty((n, n), dtype=np.int64)
        join_table = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(a, n):
                join_table[a, b] = join_table[b, a] = self._bound(a, b, lower=False)
                meet_table[a, b] = meet_table[b, a] = self._bound(a, b, lower=True)
        self.meet_table = meet_table
        self.join_table = join_table
        self._dual: FiniteLattice | None = None
        self._props: dict[ElementProperty, np.ndarray] = {}

    def _bound(self, a: int, b: int, lower: bool) -> int:
        if lower:
            commons = self.order[:, a] & self.order[:, b]
            best = [k for k in np.flatnonzero(commons) if self.order[commons, k].all()]
        else:
            commons = self.order[a, :] & self.order[b, :]
            best = [k for k in np.flatnonzero(commons) if self.order[k, commons].all()]
        if len(best) != 1:
            kind = "greatest lower" if lower else "least upper"
            raise LatticeError(f"no {kind} bound of {{{self.labels[a]}, {self.labels[b]}}}")
        return best[0]

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"FiniteLattice({self.name!r}, {len(self)} elements)"

    def _check(self, label: str) -> int:
        if label not in self.index:
            raise LatticeError(f"unknown element {label!r} in lattice {self.name}")
        return self.index[label]

    def le(self, a: str, b: str) -> bool:
        return bool(self.order[self._check(a), self._check(b)])

    def meet(self, a: str, b: str) -> str:
        return self.labels[self.meet_table[self._check(a), self._check(b)]]

    def join(self, a: str, b: str) -> str:
        return self.labels[self.join_table[self._check(a), self._check(b)]]

    @property
    def bottom(self) -> str:
        return self.labels[int(np.flatnonzero(self.order.all(axis=1))[0])]

    @property
    def top(self) -> str:
        return self.labels[int(np.flatnonzero(self.order.all(axis=0))[0])]

    def covers(self) -> list[tuple[str, str]]:
        """Cover pairs (lower, upper) recovered from the order."""
        n = len(self)
        strict = self.order & ~np.eye(n, dtype=bool)
        through = strict @ strict
        out = []
        for a in range(n):
            for b in range(n):
                if strict[a, b] and not through[a, b]:
                    out.append((self.labels[a], self.labels[b]))
        return out

    def dual(self) -> "FiniteLattice":
        if self._dual is None:
            flipped = FiniteLattice(self.labels, self.order.T.copy(), name=f"{self.name}^op")
            flipped._dual = self
            self._dual = flipped
        return self._dual

    def _property_vector(self, prop: ElementProperty) -> np.ndarray:
        cached = self._props.get(prop)
        if cached is not None:
            return cached
        if prop in _DUAL_OF:
            vector = self.dual()._property_vector(_DUAL_OF[prop])
        else:
            vector = np.array([_primal_check(self, x, prop) for x in range(len(self))], dtype=bool)
        self._props[prop] = vector
        return vector


def _primal_check(L: FiniteLattice, x: int, prop: ElementProperty) -> bool:
    n = len(L)
    M, J, leq = L.meet_table, L.join_table, L.order
    jx = J[x]
    mx = M[x]
    if prop is ElementProperty.NEUTRAL:
        lhs = M[M[jx[:, None], J], jx[None, :]]
        rhs = J[J[mx[:, None], M], mx[None, :]]
        return bool((lhs == rhs).all())
    if prop is ElementProperty.STANDARD:
        lhs = M[jx]
        rhs = J[mx[None, :], M]
        return bool((lhs == rhs).all())
    if prop is ElementProperty.DISTRIBUTIVE:
        lhs = jx[M]
        rhs = M[jx[:, None], jx[None, :]]
        return bool((lhs == rhs).all())
    if prop is ElementProperty.MODULAR:
        lhs = M[jx]
        rhs = J[np.arange(n)[:, None], mx[None, :]]
        return bool(((lhs == rhs) | ~leq).all())
    if prop is ElementProperty.LOWER_MODULAR:
        lhs = jx[M]
        rhs = M[np.arange(n)[:, None], jx[None, :]]
        return bool(((lhs == rhs) | ~leq[x][:, None]).all())
    if prop is ElementProperty.CANCELLABLE:
        fingerprints = jx.astype(np.int64) * n + mx
        return int(np.unique(fingerprints).size) == n
    raise AssertionError(f"{prop} is not a primal property")


def build_lattice(elements, covers, name: str = "") -> FiniteLattice:
    """Validate Hasse data (elements plus cover pairs) into a lattice.

    The order is the reflexive-transitive closure of the covers; cycles,
    duplicate labels, unknown labels, and missing or ambiguous bounds are
    all rejected.
    """
    labels = tuple(elements)
    if len(set(labels)) != len(labels):
        raise LatticeError("duplicate element labels")
    index = {label: k for k, label in enumerate(labels)}
    n = len(labels)
    adjacency = np.zeros((n, n), dtype=bool)
    for lo, hi in covers:
        if lo not in index or hi not in index:
            raise LatticeError(f"cover ({lo!r}, {hi!r}) mentions an unknown element")
        if lo == hi:
            raise LatticeError(f"cover ({lo!r}, {hi!r}) is reflexive")
        adjacency[index[lo], index[hi]] = True
    reach = adjacency.copy()
    while True:
        expanded = reach | (reach @ reach)
        if (expanded == reach).all():
            break
        reach = expanded
    if reach.diagonal().any():
        raise LatticeError("cover relation has a cycle")
    order = reach | np.eye(n, dtype=bool)
    return FiniteLattice(labels, order, name=name)


def has_property(L: FiniteLattice, x: str, p: ElementProperty) -> bool:
    """Brute-force evaluation of the defining formula of p at element x."""
    return bool(L._property_vector(p)[L._check(x)])


def elements_with(L: FiniteLattice, p: ElementProperty) -> set[str]:
    vector = L._property_vector(p)
    return {L.labels[k] for k in np.flatnonzero(vector)}


def is_sublattice(L: FiniteLattice, subset) -> bool:
    members = set(subset)
    for label in members:
        L._check(label)
    for a in members:
        for b in members:
            if L.meet(a, b) not in members or L.join(a, b) not in members:
                return False
    return True


def check_implications(L: FiniteLattice) -> list[str]:
    """Violations of the standard implication chain between the nine
    properties, elementwise; a correct implementation returns []."""
    violations = []
    for weak, strong in PROPERTY_IMPLICATIONS:
        have = L._property_vector(weak)
        need = L._property_vector(strong)
        for k in np.flatnonzero(have & ~need):
            violations.append(
                f"{L.name}: element {L.labels[k]} is {weak.value} but not {strong.value}"
            )
    return violations


def search_element_counterexample(catalog, has: ElementProperty, lacks: ElementProperty):
    """First (lattice, element) in catalog order having one property and
    lacking the other, or None."""
    for L in catalog:
        have = L._property_vector(has)
        missing = ~L._property_vector(lacks)
        hits = np.flatnonzero(have & missing)
        if hits.size:
            return L, L.labels[int(hits[0])]
    return None


def lattice_from_json(text: str, name: str = "") -> FiniteLattice:
    """Lattice file format: {"elements": [labels], "covers": [[lower, upper], ...]}."""
    data = json.loads(text)
    if not isinstance(data, dict) or "elements" not in data or "covers" not in data:
        raise LatticeError("lattice JSON needs 'elements' and 'covers' fields")
    covers = [tuple(pair) for pair in data["covers"]]
    for pair in covers:
        if len(pair) != 2:
            raise LatticeError(f"bad cover pair {pair!r}")
    return build_lattice(data["elements"], covers, name=name)


def load_lattice_file(path: str) -> FiniteLattice:
    with open(path, "r", encoding="utf-8") as fh:
        return lattice_from_json(fh.read(), name=path)


# Built-in catalog.


def chain(k: int, name: str = "") -> FiniteLattice:
    labels = [str(i) for i in range(k)]
    covers = [(str(i), str(i + 1)) for i in range(k - 1)]
    return build_lattice(labels, covers, name=name or f"C{k}")


def m3() -> FiniteLattice:
    return build_lattice(
        ["0", "p", "q", "r", "1"],
        [("0", "p"), ("0", "q"), ("0", "r"), ("p", "1"), ("q", "1"), ("r", "1")],
        name="M3",
    )


def n5() -> FiniteLattice:
    return build_lattice(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")],
        name="N5",
    )


def boolean_cube(d: int) -> FiniteLattice:
    labels = [format(k, f"0{d}b") for k in range(2**d)]
    covers = []
    for label in labels:
        for bit in range(d):
            if label[bit] == "0":
                upper = label[:bit] + "1" + label[bit + 1 :]
                covers.append((label, upper))
    return build_lattice(labels, covers, name=f"B{d}")


def with_new_top(L: FiniteLattice, name: str = "") -> FiniteLattice:
    top = "T*"
    labels = L.labels + (top,)
    covers = L.covers() + [(L.top, top)]
    return build_lattice(labels, covers, name=name or f"{L.name}+top")


def with_new_bottom(L: FiniteLattice, name: str = "") -> FiniteLattice:
    bottom = "B*"
    labels = (bottom,) + L.labels
    covers = L.covers() + [(bottom, L.bottom)]
    return build_lattice(labels, covers, name=name or f"{L.name}+bot")


def product(A: FiniteLattice, B: FiniteLattice, name: str = "") -> FiniteLattice:
    labels = tuple(f"({a},{b})" for a in A.labels for b in B.labels)
    order = np.kron(A.order.astype(np.int8), B.order.astype(np.int8)).astype(bool)
    return FiniteLattice(labels, order, name=name or f"{A.name}x{B.name}")


@cache
def builtin_catalog() -> tuple[FiniteLattice, ...]:
    """Chains up to six elements, M3, N5, boolean cubes B2/B3, M3 and N5
    with a fresh top or bottom adjoined, and direct products of pairs of
    these with at most 36 elements."""
    singles: list[FiniteLattice] = [chain(k) for k in range(1, 7)]
    singles += [m3(), n5(), boolean_cube(2), boolean_cube(3)]
    singles += [with_new_top(m3()), with_new_bottom(m3()), with_new_top(n5()), with_new_bottom(n5())]
    factors = [L for L in singles if len(L) >= 2]
    catalog = list(singles)
    for i, A in enumerate(factors):
        for B in factors[i:]:
            if len(A) * len(B) <= 36:
                catalog.append(product(A, B))
    return tuple(catalog)
