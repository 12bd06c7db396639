"""Command-line interface.

Exit codes: derive exits 0 on Proved, 1 on NotFoundWithinBounds, 2 on error;
verify exits 0 when every requested scenario reports PASS or
PASS_WITH_ASSUMPTIONS; all other commands exit 0 on success, 2 on error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .lattices import (
    ElementProperty,
    LatticeError,
    check_implications,
    elements_with,
    has_property,
    load_lattice_file,
)
from .rewriting import (
    ContentUnbalancedError,
    Presentation,
    SearchBounds,
    default_bounds,
    derive,
    enumerate_class,
    format_certificate,
)
from .scenarios import SCENARIO_NAMES, run_scenario
from .varieties import parse_variety, satisfies, isoterm_for
from .rewriting import Identity
from .words import WordSyntaxError, format_word, parse_word


def _add_bounds_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--max-len", type=int, default=None, help="cap on intermediate word length")
    sub.add_argument("--max-depth", type=int, default=None, help="cap on derivation length")
    sub.add_argument("--max-states", type=int, default=None, help="cap on visited words")


def _bounds_from_args(args, sigma: Presentation, *words):
    bounds = default_bounds(sigma, *words)
    overrides = {}
    if args.max_len is not None:
        overrides["max_word_length"] = args.max_len
    if args.max_depth is not None:
        overrides["max_depth"] = args.max_depth
    if args.max_states is not None:
        overrides["max_states"] = args.max_states
    return dataclasses.replace(bounds, **overrides) if overrides else bounds


def _optional_bounds(args, *words):
    """Bounds for variety queries: None (per-handle defaults) unless flags given."""
    if args.max_len is None and args.max_depth is None and args.max_states is None:
        return None
    longest = max([1] + [len(w) for w in words])
    return SearchBounds(
        max_word_length=args.max_len if args.max_len is not None else 2 * longest,
        max_depth=args.max_depth if args.max_depth is not None else 10,
        max_states=args.max_states if args.max_states is not None else 1_000_000,
    )


def _load_system(path: str) -> Presentation:
    with open(path, "r", encoding="utf-8") as fh:
        return Presentation.parse(fh.read())


def _cmd_derive(args) -> int:
    sigma = _load_system(args.system)
    lhs, rhs = parse_word(args.lhs), parse_word(args.rhs)
    bounds = _bounds_from_args(args, sigma, lhs, rhs)
    cert = derive(sigma, lhs, rhs, bounds)
    if cert is None:
        print("NotFoundWithinBounds")
        return 1
    print(f"Proved ({len(cert)} steps)")
    print("system:")
    for index, ident in enumerate(sigma.identities):
        print(f"  [{index}] {ident}")
    print("certificate:")
    print(format_certificate(cert), end="")
    print("replay:")
    chain = cert.words(sigma)
    print(f"  {format_word(chain[0])}")
    for word in chain[1:]:
        print(f"  -> {format_word(word)}")
    return 0


def _cmd_class(args) -> int:
    sigma = _load_system(args.system)
    word = parse_word(args.word)
    bounds = _bounds_from_args(args, sigma, word)
    enumeration = enumerate_class(word, sigma, bounds)
    status = "Complete" if enumeration.complete else "CapExceeded (partial)"
    print(f"{status}: {len(enumeration.words)} words")
    for member in sorted(enumeration.words, key=lambda w: w.key):
        print(f"  {format_word(member)}")
    return 0


def _cmd_isoterm(args) -> int:
    handle = parse_variety(args.variety)
    word = parse_word(args.word)
    print(isoterm_for(handle, word, _optional_bounds(args, word)))
    return 0


def _cmd_satisfies(args) -> int:
    handle = parse_variety(args.variety)
    identity = Identity(parse_word(args.lhs), parse_word(args.rhs))
    print(satisfies(handle, identity, _optional_bounds(args, identity.lhs, identity.rhs)))
    return 0


def _cmd_lattice(args) -> int:
    lattice = load_lattice_file(args.file)
    if args.element is not None or args.property is not None:
        if args.element is None or args.property is None:
            raise ValueError("--element and --property must be given together")
        prop = ElementProperty(args.property)
        print("true" if has_property(lattice, args.element, prop) else "false")
        return 0
    if args.implications:
        violations = check_implications(lattice)
        if violations:
            for line in violations:
                print(line)
            return 0
        print("no violations")
        return 0
    # default: the property table
    props = list(ElementProperty)
    truth = {p: elements_with(lattice, p) for p in props}
    if args.csv:
        for label in lattice.labels:
            for p in props:
                print(f"{label},{p.value},{str(label in truth[p]).lower()}")
        return 0
    width = max(len(label) for label in lattice.labels) + 2
    header = "element".ljust(width) + " ".join(p.value for p in props)
    print(header)
    for label in lattice.labels:
        cells = []
        for p in props:
            mark = "yes" if label in truth[p] else "no"
            cells.append(mark.ljust(len(p.value)))
        print(label.ljust(width) + " ".join(cells))
    return 0


def _cmd_verify(args) -> int:
    names = [args.scenario] if args.scenario else list(SCENARIO_NAMES)
    rendered = []
    all_ok = True
    for name in names:
        report = run_scenario(name)
        text = report.render()
        rendered.append(text)
        print(text)
        if report.status not in ("PASS", "PASS_WITH_ASSUMPTIONS"):
            all_ok = False
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write("\n".join(rendered))
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="monvar",
        description="equational reasoning over monoid varieties",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", help="search for a derivation of an identity from a system")
    p.add_argument("--system", required=True, help="identity-system file")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    _add_bounds_flags(p)
    p.set_defaults(func=_cmd_derive)

    p = sub.add_parser("class", help="enumerate the congruence class of a word")
    p.add_argument("--system", required=True)
    p.add_argument("--word", required=True)
    _add_bounds_flags(p)
    p.set_defaults(func=_cmd_class)

    p = sub.add_parser("isoterm", help="is the word an isoterm for the variety?")
    p.add_argument("--variety", required=True, help="T|SL|C|LRB|RRB|MON, @file, meet(...), join(...)")
    p.add_argument("--word", required=True)
    _add_bounds_flags(p)
    p.set_defaults(func=_cmd_isoterm)

    p = sub.add_parser("satisfies", help="does the variety satisfy the identity?")
    p.add_argument("--variety", required=True)
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    _add_bounds_flags(p)
    p.set_defaults(func=_cmd_satisfies)

    p = sub.add_parser("lattice", help="query a finite lattice file")
    p.add_argument("--file", required=True)
    p.add_argument("--element", default=None)
    p.add_argument("--property", default=None, choices=[e.value for e in ElementProperty])
    p.add_argument("--table", action="store_true", help="print the full property table (default)")
    p.add_argument("--csv", action="store_true", help="machine-readable rows element,property,boolean")
    p.add_argument("--implications", action="store_true")
    p.set_defaults(func=_cmd_lattice)

    p = sub.add_parser("verify", help="run the verification scenarios")
    p.add_argument("scenario", nargs="?", choices=list(SCENARIO_NAMES), default=None)
    p.add_argument("--report", default=None, help="also write the reports to this path")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (WordSyntaxError, ContentUnbalancedError, LatticeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
