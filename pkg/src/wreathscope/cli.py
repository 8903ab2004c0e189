"""Command-line front end; all numbers come from the library modules."""

from __future__ import annotations

import argparse
import json
import re
import sys

from .groups import (
    Coeff,
    Group,
    OrderBoundError,
    PolyParseError,
    Subgroup,
    parse_element,
    parse_poly,
    subgroup_closure,
)
from .metrics import (
    GenSet,
    StateLimitError,
    WindowError,
    bfs_word_length,
    delta_four_point,
    word_length_with_plan,
)
from .structures import (
    build_b_poset,
    compare_empirical,
    compare_exact,
    poset_to_dot,
    poset_to_json,
    qp_count,
)
from .confining import (
    SATURATION_CAP,
    QSpec,
    QSpecError,
    check_confining,
    mirror_qspec,
    recover_subgroup,
    validate_equivalence,
)

EXIT_OK = 0
EXIT_BAD_GROUP = 2
EXIT_PARSE = 3
EXIT_WINDOW = 4
EXIT_INCONCLUSIVE = 5


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _group(name: str) -> Group:
    try:
        return Group.from_name(name)
    except (ValueError, OrderBoundError) as exc:
        raise CliError(str(exc), EXIT_BAD_GROUP)


def _parse_coeff(text: str, group: Group) -> Coeff:
    text = text.strip()
    try:
        if text.startswith("("):
            coeff = tuple(int(p) for p in text.strip("()").split(","))
        else:
            coeff = (int(text),)
    except ValueError:
        raise CliError(f"cannot parse coefficient {text!r}", EXIT_PARSE)
    if len(coeff) != group.rank:
        raise CliError(f"coefficient {text} has wrong rank for {group.name}", EXIT_PARSE)
    return group.check_coeff(coeff)


def _parse_subgroup(text: str, group: Group) -> Subgroup:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise CliError(f"subgroup syntax is {{g1,g2,...}}, got {text!r}", EXIT_PARSE)
    body = text[1:-1].strip()
    if not body:
        return subgroup_closure(group, [])
    gens = [_parse_coeff(p, group) for p in re.findall(r"\([^)]*\)|[^,()]+", body) if p.strip()]
    return subgroup_closure(group, gens)


def _parse_structure(text: str, group: Group) -> GenSet:
    text = text.strip()
    if text == "standard":
        return GenSet.standard(group)
    if text == "lineal":
        return GenSet.lineal(group)
    if text == "trivial":
        return GenSet.trivial(group)
    m = re.match(r"^qp([+-]):(.*)$", text)
    if not m:
        raise CliError(
            f"unknown structure {text!r} (use standard | lineal | trivial | qp+:{{..}} | qp-:{{..}})",
            EXIT_PARSE,
        )
    sub = _parse_subgroup(m.group(2), group)
    return GenSet.qp_plus(sub) if m.group(1) == "+" else GenSet.qp_minus(sub)


def _parse_builtin(text: str, window: int) -> QSpec:
    text = text.strip()
    if text == "counterexample":
        return QSpec.counterexample(window=window)
    if text == "z8family":
        return QSpec.z8_example_family(window=window)
    m = re.match(r"^(qh-?|bplus|bminus|fullbase):([^:]+)(?::(.*))?$", text)
    if not m:
        raise CliError(f"unknown builtin {text!r}", EXIT_PARSE)
    kind, group_name, rest = m.groups()
    group = _group(group_name)
    if kind in ("bplus", "bminus", "fullbase"):
        return QSpec(kind, group)
    if rest is None:
        raise CliError("qh builtin needs a subgroup, e.g. qh:Z4:{2}", EXIT_PARSE)
    sub = _parse_subgroup(rest, group)
    return QSpec.qh(sub, side="minus" if kind == "qh-" else "plus")


def _load_qspec(args) -> QSpec:
    if args.builtin:
        return _parse_builtin(args.builtin, args.window)
    if not args.qspec:
        raise CliError("need --builtin NAME or --qspec FILE", EXIT_PARSE)
    try:
        with open(args.qspec) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot load QSpec: {exc}", EXIT_PARSE)
    return qspec_from_dict(data)


def qspec_from_dict(data: dict) -> QSpec:
    try:
        kind = data["kind"]
        group = _group(data["group"])
        params = data.get("params", {})
        if kind == "qh":
            sub = subgroup_closure(
                group, [_parse_coeff(g, group) for g in params.get("subgroup", [])]
            )
            return QSpec.qh(sub, side=params.get("side", "plus"))
        if kind in ("bplus", "bminus", "fullbase"):
            return QSpec(kind, group)
        if kind == "span_counterexample":
            return QSpec.counterexample(window=params.get("window", 8))
        if kind == "custom":
            seeds = tuple(parse_poly(s, group) for s in params.get("configs", []))
            return QSpec.custom(
                group,
                seeds,
                window=params.get("window", 8),
                shift_closed=params.get("shift_closed", True),
                sum_closed=params.get("sum_closed", True),
                bplus_closed=params.get("bplus_closed", True),
            )
        raise QSpecError(f"unknown kind {kind!r}")
    except (KeyError, QSpecError, PolyParseError, ValueError) as exc:
        raise CliError(f"malformed QSpec: {exc}", EXIT_PARSE)


def qspec_to_dict(q: QSpec) -> dict:
    params: dict = {}
    if q.kind == "qh":
        params = {
            "side": q.side,
            "subgroup": [q.group.format_coeff(c) for c in q.subgroup.minimal_generators()],
        }
    elif q.kind == "span_counterexample":
        params = {"window": q.window}
    elif q.kind == "custom":
        params = {
            "window": q.window,
            "configs": [str(s) for s in q.seeds],
            "shift_closed": q.shift_closed,
            "sum_closed": q.sum_closed,
            "bplus_closed": q.bplus_closed,
        }
    return {"kind": q.kind, "group": q.group.name, "params": params}


def _emit(data: dict) -> None:
    sys.stdout.write(json.dumps(data, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_poset(args) -> int:
    group = _group(args.group)
    poset = build_b_poset(group)
    counts = poset.kind_counts()
    if args.format == "dot":
        sys.stdout.write(poset_to_dot(poset))
    else:
        sys.stdout.write(poset_to_json(poset))
    print(
        f"nodes={len(poset.nodes)} "
        + " ".join(f"{k}={v}" for k, v in sorted(counts.items())),
        file=sys.stderr,
    )
    if group.is_cyclic and group.rank == 1:
        n = group.orders[0]
        expected = qp_count(n)
        status = "ok" if expected == counts.get("quasi-parabolic", 0) else "MISMATCH"
        print(f"qp-count cross-check: 2*(proper divisors of {n}) = {expected} [{status}]", file=sys.stderr)
    if not group.is_cyclic:
        print(
            "warning: B(G) is a proper subset of H(G wr Z) for this group; "
            "poset shown covers the guaranteed structures only",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_wordlen(args) -> int:
    group = _group(args.group)
    genset = _parse_structure(args.structure, group)
    try:
        element = parse_element(args.element, group)
    except PolyParseError as exc:
        raise CliError(f"cannot parse element: {exc}", EXIT_PARSE)
    length, plan = word_length_with_plan(element, genset)
    out = {
        "group": group.name,
        "structure": genset.label(),
        "element": str(element),
        "length": length,
        "plan": None
        if plan is None
        else {
            "visits": list(plan.visits),
            "bursts": [[plan.visits[i], str(cfg)] for i, cfg in plan.bursts],
            "cost": plan.cost,
        },
    }
    if args.oracle:
        try:
            oracle = bfs_word_length(element, genset, args.window, args.cursor_bound)
        except (WindowError, StateLimitError) as exc:
            raise CliError(str(exc), EXIT_WINDOW)
        out["oracle"] = {
            "window": args.window,
            "cursor_bound": args.cursor_bound,
            "length": oracle,
            "agrees": oracle == length,
        }
    _emit(out)
    return EXIT_OK


def cmd_compare(args) -> int:
    group = _group(args.group)
    x = _parse_structure(args.x, group)
    y = _parse_structure(args.y, group)
    poset = build_b_poset(group)

    # node ids in the poset use the same labels the structure parser accepts
    def node_id(gs: GenSet) -> str:
        return "elliptic" if gs.variant.value == "trivial" else gs.label()

    try:
        exact = compare_exact(poset, node_id(x), node_id(y)).value
    except KeyError:
        exact = None  # structure outside the guaranteed poset (e.g. standard)
    evidence = compare_empirical(x, y, window=args.window, depth=args.depth)
    _emit(
        {
            "group": group.name,
            "x": x.label(),
            "y": y.label(),
            "exact": exact,
            "scope": poset.scope_label,
            "empirical": {
                "window": evidence.window,
                "depth": evidence.depth,
                "sup_x_in_y": {
                    "bounded": evidence.sup_x_in_y.bounded,
                    "sup": evidence.sup_x_in_y.sup,
                    "sequence": list(evidence.sup_x_in_y.sequence),
                },
                "sup_y_in_x": {
                    "bounded": evidence.sup_y_in_x.bounded,
                    "sup": evidence.sup_y_in_x.sup,
                    "sequence": list(evidence.sup_y_in_x.sequence),
                },
            },
        }
    )
    return EXIT_OK


def cmd_confining(args) -> int:
    q = _load_qspec(args)
    if args.action == "check":
        report = check_confining(
            q,
            direction=args.direction,
            window=args.window,
            n0_max=args.n0_max,
            seed=args.seed,
        )
        _emit(report.to_dict())
        return EXIT_INCONCLUSIVE if report.verdict == "inconclusive" else EXIT_OK
    if args.action == "recover":
        work = mirror_qspec(q) if args.direction == "t^-1" else q
        result = recover_subgroup(
            work, window=args.window, depth=args.depth, iteration_cap=args.iter_cap
        )
        _emit(result.to_dict())
        return EXIT_OK
    # validate
    sub = _parse_subgroup(args.subgroup, q.group)
    report = validate_equivalence(q, sub, depth=args.depth or 20)
    _emit(report.to_dict())
    return EXIT_OK


def cmd_delta(args) -> int:
    group = _group(args.group)
    genset = _parse_structure(args.structure, group)
    try:
        radii = [int(r) for r in args.radii.split(",") if r.strip()]
    except ValueError:
        raise CliError(f"cannot parse radii {args.radii!r}", EXIT_PARSE)
    if not radii:
        raise CliError("no radii given", EXIT_PARSE)
    rows = []
    for r in radii:
        try:
            est = delta_four_point(genset, r, args.samples, seed=args.seed)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_WINDOW)
        rows.append({"radius": r, "delta": str(est.delta), "max_defect": est.max_defect})
    if args.format == "text":
        sys.stdout.write(f"{'radius':>8} {'delta':>8} {'defect':>8}\n")
        for row in rows:
            sys.stdout.write(f"{row['radius']:>8} {row['delta']:>8} {row['max_defect']:>8}\n")
    else:
        _emit(
            {
                "group": group.name,
                "structure": genset.label(),
                "samples": args.samples,
                "seed": args.seed,
                "estimator": "four-point (evidence only, not a certificate)",
                "results": rows,
            }
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wreathscope",
        description="Word metrics, confining subsets, and hyperbolic-structure posets "
        "for lamplighter-type wreath products.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("poset", help="emit the structure poset for a group")
    p.add_argument("group", help="coefficient group, e.g. Z12 or Z2xZ2")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("wordlen", help="exact word length with witness")
    p.add_argument("group")
    p.add_argument("structure", help="standard | lineal | trivial | qp+:{..} | qp-:{..}")
    p.add_argument("element", help="'t^m * poly', 't^m', or a polynomial; bare t^m is a pure shift")
    p.add_argument("--oracle", action="store_true", help="cross-check against the BFS oracle")
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--cursor-bound", type=int, default=8, dest="cursor_bound")
    p.set_defaults(func=cmd_wordlen)

    p = sub.add_parser("compare", help="compare two structures exactly and empirically")
    p.add_argument("group")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--window", type=int, default=3)
    p.add_argument("--depth", type=int, default=20)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("confining", help="check/recover/validate a confining subset")
    p.add_argument("action", choices=("check", "recover", "validate"))
    p.add_argument("--builtin", help="qh:Z4:{2} | qh-:Z4:{2} | bplus:Z8 | bminus:Z8 | fullbase:Z3 | counterexample | z8family")
    p.add_argument("--qspec", help="path to a QSpec JSON file")
    p.add_argument("--direction", choices=("t", "t^-1"), default="t")
    p.add_argument("--window", type=int, default=8)
    p.add_argument("--n0-max", type=int, default=4, dest="n0_max")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--iter-cap", type=int, default=SATURATION_CAP, dest="iter_cap")
    p.add_argument("--subgroup", default="{}", help="subgroup for validate, e.g. {2}")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_confining)

    p = sub.add_parser("delta", help="four-point hyperbolicity estimates")
    p.add_argument("group")
    p.add_argument("structure")
    p.add_argument("--radii", default="6,10,14")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_delta)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (PolyParseError, QSpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (WindowError, StateLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_WINDOW
    except OrderBoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_GROUP


if __name__ == "__main__":
    sys.exit(main())
