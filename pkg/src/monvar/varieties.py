"""Varieties as queryable handles.

A handle is a built-in benchmark variety with an exact word-problem decider,
a finitely presented variety answered by bounded derivation search, or a
meet/join composite.  Query verdicts are three-valued: No answers are only
ever produced from exact evidence, and Unknown records whether bounds or
composition is the obstacle.

Built-in deciders and their canonical invariants:

  T    trivial monoids          every identity holds
  SL   semilattice monoids      u = v  iff  content(u) = content(v)
  C    var{x^2 = x^3, xy = yx}  u = v  iff  c_normal_form(u) = c_normal_form(v)
  LRB  var{xy = xyx}            u = v  iff  ini(u) = ini(v)
  RRB  var{xy = yxy}            u = v  iff  fin(u) = fin(v)
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum

from .rewriting import (
    Identity,
    Presentation,
    SearchBounds,
    default_bounds,
    derive,
    enumerate_class,
    isoterm_exact,
)
from .words import Variable, Word, content, fin, ini

__all__ = [
    "BuiltinKind",
    "Builtin",
    "Presented",
    "Meet",
    "Join",
    "VarietyHandle",
    "Verdict",
    "T",
    "SL",
    "C",
    "LRB",
    "RRB",
    "MON",
    "reference_presentation",
    "c_normal_form",
    "satisfies",
    "isoterm_for",
    "completely_regular_witness",
    "combinatorial_witness",
    "parse_variety",
]


class BuiltinKind(Enum):
    T = "T"
    SL = "SL"
    C = "C"
    LRB = "LRB"
    RRB = "RRB"


@dataclass(frozen=True)
class Builtin:
    kind: BuiltinKind


@dataclass(frozen=True)
class Presented:
    presentation: Presentation


@dataclass(frozen=True)
class Meet:
    parts: tuple["VarietyHandle", ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("meet of an empty list")


@dataclass(frozen=True)
class Join:
    parts: tuple["VarietyHandle", ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("join of an empty list")


VarietyHandle = Builtin | Presented | Meet | Join

T = Builtin(BuiltinKind.T)
SL = Builtin(BuiltinKind.SL)
C = Builtin(BuiltinKind.C)
LRB = Builtin(BuiltinKind.LRB)
RRB = Builtin(BuiltinKind.RRB)
MON = Presented(Presentation())

_REFERENCE = {
    BuiltinKind.SL: Presentation.of("x^2 = x", "xy = yx"),
    BuiltinKind.C: Presentation.of("x^2 = x^3", "xy = yx"),
    BuiltinKind.LRB: Presentation.of("xy = xyx"),
    BuiltinKind.RRB: Presentation.of("xy = yxy"),
}


def reference_presentation(kind: BuiltinKind) -> Presentation | None:
    """The defining identities of a built-in variety.

    T has none usable here: its defining identity x = y is not
    content-balanced, so its decider is axiomatic (everything holds).
    """
    return _REFERENCE.get(kind)


class Verdict(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN_BOUNDS = "unknown (bounds)"
    UNKNOWN_COMPOSITION = "unknown (composition)"

    @property
    def is_yes(self) -> bool:
        return self is Verdict.YES

    @property
    def is_no(self) -> bool:
        return self is Verdict.NO

    @property
    def is_unknown(self) -> bool:
        return self in (Verdict.UNKNOWN_BOUNDS, Verdict.UNKNOWN_COMPOSITION)

    def __str__(self) -> str:
        return {
            Verdict.YES: "Yes",
            Verdict.NO: "No",
            Verdict.UNKNOWN_BOUNDS: "Unknown (bounds)",
            Verdict.UNKNOWN_COMPOSITION: "Unknown (composition)",
        }[self]


def c_normal_form(w: Word) -> Word:
    """Normal form for C: variables in token order, exponents capped at two.

    Two words are C-equivalent exactly when their normal forms coincide,
    since commutativity sorts letters and x^2 = x^3 collapses every
    occurrence count of at least two.
    """
    counts: dict[Variable, int] = {}
    for letter in w.letters:
        counts[letter] = counts.get(letter, 0) + 1
    out: list[Variable] = []
    for letter in sorted(counts):
        out.extend([letter] * min(counts[letter], 2))
    return Word(out)


def _builtin_satisfies(kind: BuiltinKind, identity: Identity) -> bool:
    u, v = identity.lhs, identity.rhs
    if kind is BuiltinKind.T:
        return True
    if kind is BuiltinKind.SL:
        return content(u) == content(v)
    if kind is BuiltinKind.C:
        return c_normal_form(u) == c_normal_form(v)
    if kind is BuiltinKind.LRB:
        return ini(u) == ini(v)
    if kind is BuiltinKind.RRB:
        return fin(u) == fin(v)
    raise AssertionError(kind)


def _builtin_isoterm(kind: BuiltinKind, w: Word) -> bool:
    # Singleton classes under the canonical invariants:
    #   T collapses everything, so no word is an isoterm.
    #   SL: the class of w is every word with the same content, singleton
    #       only for the empty word.
    #   C: any letter occurring twice pumps, and two once-occurring letters
    #       commute, so only words of length <= 1 have singleton classes.
    #   LRB: every word shares its class with ini(w) and with padded
    #       variants, singleton only for the empty word; RRB dually.
    if kind is BuiltinKind.T:
        return False
    if kind is BuiltinKind.SL:
        return len(w) == 0
    if kind is BuiltinKind.C:
        return len(w) <= 1
    if kind in (BuiltinKind.LRB, BuiltinKind.RRB):
        return len(w) == 0
    raise AssertionError(kind)


def satisfies(handle: VarietyHandle, identity: Identity, bounds: SearchBounds | None = None) -> Verdict:
    """Whether the variety satisfies the identity.

    Built-ins answer exactly.  Presented handles answer Yes on a successful
    bounded derivation and Unknown otherwise, never No.  A join satisfies
    exactly the identities all its components satisfy; a meet satisfies at
    least the identities of each component and everything derivable from the
    union of component presentations.
    """
    if isinstance(handle, Builtin):
        return Verdict.YES if _builtin_satisfies(handle.kind, identity) else Verdict.NO
    if isinstance(handle, Presented):
        cert = derive(handle.presentation, identity.lhs, identity.rhs, bounds)
        return Verdict.YES if cert is not None else Verdict.UNKNOWN_BOUNDS
    if isinstance(handle, Join):
        answers = [satisfies(part, identity, bounds) for part in handle.parts]
        if any(a.is_no for a in answers):
            return Verdict.NO
        if all(a.is_yes for a in answers):
            return Verdict.YES
        return Verdict.UNKNOWN_COMPOSITION
    if isinstance(handle, Meet):
        answers = [satisfies(part, identity, bounds) for part in handle.parts]
        if any(a.is_yes for a in answers):
            return Verdict.YES
        if all(isinstance(part, Presented) for part in handle.parts):
            union = Presentation(tuple(i for part in handle.parts for i in part.presentation.identities))
            cert = derive(union, identity.lhs, identity.rhs, bounds)
            return Verdict.YES if cert is not None else Verdict.UNKNOWN_BOUNDS
        return Verdict.UNKNOWN_COMPOSITION
    raise TypeError(f"not a variety handle: {handle!r}")


def isoterm_for(handle: VarietyHandle, w: Word, bounds: SearchBounds | None = None) -> Verdict:
    """Whether the class of w under the variety's fully invariant congruence
    is the singleton {w}.

    The class under a meet contains the class under each component, and the
    congruence generated by the component congruences cannot move a word all
    of whose component classes are singletons, so a meet answers Yes exactly
    when every component does.  The class under a join is the intersection
    of the component classes, so a finite complete class from one presented
    component, filtered by the other components' satisfaction answers,
    decides the join.
    """
    if isinstance(handle, Builtin):
        return Verdict.YES if _builtin_isoterm(handle.kind, w) else Verdict.NO
    if isinstance(handle, Presented):
        return Verdict.YES if isoterm_exact(w, handle.presentation) else Verdict.NO
    if isinstance(handle, Meet):
        answers = [isoterm_for(part, w, bounds) for part in handle.parts]
        if any(a.is_no for a in answers):
            return Verdict.NO
        if all(a.is_yes for a in answers):
            return Verdict.YES
        return Verdict.UNKNOWN_COMPOSITION
    if isinstance(handle, Join):
        for index, part in enumerate(handle.parts):
            if not isinstance(part, Presented):
                continue
            enumeration = enumerate_class(w, part.presentation, bounds)
            if not enumeration.complete:
                continue
            others = [p for k, p in enumerate(handle.parts) if k != index]
            undecided = False
            for other_word in sorted(enumeration.words, key=lambda x: x.key):
                if other_word == w:
                    continue
                answers = [satisfies(other, Identity(w, other_word), bounds) for other in others]
                if any(a.is_no for a in answers):
                    continue
                if all(a.is_yes for a in answers):
                    return Verdict.NO
                undecided = True
            return Verdict.UNKNOWN_COMPOSITION if undecided else Verdict.YES
        return Verdict.UNKNOWN_COMPOSITION
    raise TypeError(f"not a variety handle: {handle!r}")


def completely_regular_witness(sigma: Presentation, n_max: int, bounds: SearchBounds | None = None) -> int | None:
    """Least n <= n_max with x = x^(1+n) derivable from sigma, if any.

    A variety is completely regular exactly when it satisfies such an
    identity for some n >= 1.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    x = Word((Variable("x"),))
    for n in range(1, n_max + 1):
        target = x ** (1 + n)
        cert = derive(sigma, x, target, bounds or default_bounds(sigma, x, target))
        if cert is not None:
            return n
    return None


def combinatorial_witness(sigma: Presentation, n_max: int, bounds: SearchBounds | None = None) -> int | None:
    """Least n <= n_max with x^n = x^(n+1) derivable from sigma, if any.

    A variety is combinatorial (all its groups are trivial) exactly when it
    satisfies such an identity for some n >= 1.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    x = Word((Variable("x"),))
    for n in range(1, n_max + 1):
        lhs, rhs = x**n, x ** (n + 1)
        cert = derive(sigma, lhs, rhs, bounds or default_bounds(sigma, lhs, rhs))
        if cert is not None:
            return n
    return None


_BUILTIN_NAMES = {
    "T": T,
    "SL": SL,
    "C": C,
    "LRB": LRB,
    "RRB": RRB,
    "MON": MON,
}


def parse_variety(text: str, base_dir: str | None = None) -> VarietyHandle:
    """Parse a handle expression: builtin names, '@file' presentation
    references, and meet(...)/join(...) composition."""
    expr = text.strip()
    handle, rest = _parse_expr(expr, base_dir)
    if rest.strip():
        raise ValueError(f"trailing input in variety expression: {rest!r}")
    return handle


def _parse_expr(s: str, base_dir: str | None) -> tuple[VarietyHandle, str]:
    s = s.lstrip()
    for combiner, cls in (("meet(", Meet), ("join(", Join)):
        if s.startswith(combiner):
            rest = s[len(combiner) :]
            parts = []
            while True:
                part, rest = _parse_expr(rest, base_dir)
                parts.append(part)
                rest = rest.lstrip()
                if rest.startswith(","):
                    rest = rest[1:]
                    continue
                if rest.startswith(")"):
                    return cls(tuple(parts)), rest[1:]
                raise ValueError(f"expected ',' or ')' in variety expression near {rest!r}")
    if s.startswith("@"):
        stop = len(s)
        for k, ch in enumerate(s):
            if ch in ",)":
                stop = k
                break
        path = s[1:stop].strip()
        if not path:
            raise ValueError("empty file reference in variety expression")
        if base_dir is not None and not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        with open(path, "r", encoding="utf-8") as fh:
            return Presented(Presentation.parse(fh.read())), s[stop:]
    stop = len(s)
    for k, ch in enumerate(s):
        if ch in ",)":
            stop = k
            break
    name = s[:stop].strip()
    if name in _BUILTIN_NAMES:
        return _BUILTIN_NAMES[name], s[stop:]
    raise ValueError(f"unknown variety name {name!r} (expected one of {sorted(_BUILTIN_NAMES)}, '@file', meet(...), join(...))")
