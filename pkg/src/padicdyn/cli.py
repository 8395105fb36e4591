"""Command-line front end.

Every subcommand is a thin shell over the library: it parses the map,
runs one analysis, and prints either a text summary or JSON.  JSON is
deterministic (sorted keys, fixed indentation, seeded randomness) so
runs with the same arguments are byte-identical.  Integers that can
exceed native JSON precision (resultants, discriminants, determinants)
are emitted as strings, rationals as "num/den", and infinite valuations
as "inf".

Exit codes: 0 success, 1 failed example battery, 2 input error,
3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import InputError, PadicDynError, ResourceLimitError
from .finitefield import FIELD_SIZE_CAP
from .golden import battery_passed, run_battery
from .maps import (
    DEGREE_CAP,
    HEIGHT_CAP_BITS,
    ProjPointQ,
    normalize_integral,
    parse_map,
    reduce_map,
)
from .orbits import forward_orbit, moduli_search, orbital_report
from .padics import INFINITY
from .reduction import ClosedPoint, analyze_map, degree_one_check, postcritical_set
from .towers import (
    M_CAP,
    fiber_polynomial,
    fiber_report,
    frobenius_cycle_type,
    preimage_tree,
)

__all__ = ["main"]


# -- JSON value rendering ------------------------------------------------------

def _big(value) -> str | None:
    """Big integers and rationals as canonical strings."""
    if value is None:
        return None
    frac = Fraction(value)
    if frac.denominator == 1:
        return str(frac.numerator)
    return f"{frac.numerator}/{frac.denominator}"


def _val(v):
    """A valuation: plain int, or "inf" for the zero polynomial/point."""
    return "inf" if v == INFINITY else int(v)


def _residue(r) -> object:
    return "inf" if r is None else int(r)


def _point_label(q: ClosedPoint) -> str:
    """Residues for rational closed points, minimal polynomials otherwise."""
    if q.is_infinity:
        return "inf"
    if q.degree == 1:
        return str((-q.poly[0]) % q.p)
    return q.render()


def _pc_json(pc) -> dict | None:
    if pc is None:
        return None
    return {
        "points": [_point_label(q) for q in pc.sorted_points()],
        "everything": pc.everything,
        "stable_depth": pc.stable_depth,
        "critical_points": [
            _point_label(q) for q in sorted(pc.crit, key=lambda q: q.sort_key())
        ],
    }


def _locus_json(locus) -> list:
    return [_residue(r) for r in locus]


def _newton_json(newton):
    if newton is None:
        return None
    return [[_big(slope), length] for slope, length in newton]


def _fiber_json(rep) -> dict:
    return {
        "n": rep.n,
        "x": str(rep.x),
        "integral": rep.integral,
        "lc": _big(rep.lc),
        "lc_valuation": _val(rep.lc_valuation),
        "disc": _big(rep.disc),
        "disc_valuation": _val(rep.disc_valuation),
        "degree_full": rep.degree_full,
        "certificate": rep.certificate,
        "reduced_factor_degrees": (
            None
            if rep.reduced_factor_degrees is None
            else list(rep.reduced_factor_degrees)
        ),
        "newton_polygon": _newton_json(rep.newton),
    }


# -- subcommand payloads --------------------------------------------------------

def _cmd_analyze(args) -> tuple[dict, str, int]:
    model = parse_map(args.map, args.prime)
    rep = analyze_map(model, args.prime)
    sgr = rep.sgr
    payload = {
        "map": model.map_str(),
        "prime": args.prime,
        "sgr": {
            "degree": sgr.d,
            "resultant": _big(sgr.resultant),
            "res_valuation": sgr.res_valuation,
            "reduced_degree": sgr.reduced_degree,
            "reduced_map": rep.rmap.map_str(),
            "is_strict_good_reduction": sgr.is_strict_good_reduction,
            "inseparable_reduction": sgr.inseparable_reduction,
        },
        "pc": _pc_json(rep.pc),
        "locus": _locus_json(rep.locus),
        "condition2": {
            "holds": rep.condition2.holds,
            "separable": rep.condition2.separable,
            "reduced_degree_full": rep.condition2.reduced_degree_full,
            "witnesses": _locus_json(rep.condition2.witnesses),
            "violations": _locus_json(rep.condition2.violations),
        },
    }
    if model.d == 1:
        d1 = degree_one_check(model, args.prime)
        payload["sgr"]["det"] = _big(d1.det)
        payload["sgr"]["det_valuation"] = d1.det_valuation

    lines = [
        f"map: {model.map_str()}",
        f"prime: {args.prime}",
        f"degree: {sgr.d}   reduced degree: {sgr.reduced_degree}",
        f"resultant: {_big(sgr.resultant)} (valuation {sgr.res_valuation})",
        f"strict good reduction: {'yes' if sgr.is_strict_good_reduction else 'no'}",
        f"reduced map: {rep.rmap.map_str()}",
    ]
    if sgr.inseparable_reduction:
        lines.append("inseparable reduction (the reduced map is a p-th power composite)")
    if rep.pc is None:
        lines.append("postcritical set: undefined (constant reduction)")
    elif rep.pc.everything:
        lines.append("postcritical set: all of P^1")
    else:
        pts = " ".join(_point_label(q) for q in rep.pc.sorted_points()) or "(empty)"
        lines.append(f"postcritical set: {pts} (stable depth {rep.pc.stable_depth})")
    locus = " ".join(str(_residue(r)) for r in rep.locus) or "(empty)"
    lines.append(f"good residue locus: {locus}")
    lines.append(f"degree-d etale fibers over the locus: {'yes' if rep.condition2.holds else 'no'}")
    if rep.condition2.violations:
        bad = " ".join(str(_residue(r)) for r in rep.condition2.violations)
        lines.append(f"violating residues: {bad}")
    return payload, "\n".join(lines), 0


def _tree_json(tree) -> dict:
    return {
        "field_degree": tree.m,
        "level_sizes": list(tree.level_sizes),
        "levels": [[_residue(e) for e in level] for level in tree.levels],
        "parents": [list(row) for row in tree.parents],
        "frobenius": [list(row) for row in tree.frob],
        "cycle_types": [
            list(tree.cycle_type(n)) for n in range(1, len(tree.levels))
        ],
    }


def _cmd_tower(args) -> tuple[dict, str, int]:
    model = parse_map(args.map, args.prime)
    x = ProjPointQ.from_value(args.x)
    xbar = x.reduce(args.prime)
    levels = []
    for n in range(1, args.n + 1):
        rep = fiber_report(
            fiber_polynomial(model, n, x, args.prime, cap_degree=args.cap_degree)
        )
        entry = _fiber_json(rep)
        try:
            entry["cycle_type"] = list(
                frobenius_cycle_type(model, n, xbar, args.prime, cap_degree=args.cap_degree)
            )
        except InputError:
            entry["cycle_type"] = None
        levels.append(entry)

    warnings = []
    if not x.is_integral(args.prime):
        warnings.append("basepoint is not integral; its reduction is inf")
    rmap = reduce_map(normalize_integral(model, args.prime))
    if rmap.reduced_degree >= 1:
        pc = postcritical_set(rmap)
        if pc.contains_residue(xbar):
            warnings.append(
                "basepoint reduces into the postcritical set; no certificate is expected"
            )
    tree_payload = None
    tree_note = None
    try:
        tree = preimage_tree(
            model,
            args.n,
            xbar,
            args.prime,
            cap_field=args.cap_field,
            cap_degree=args.cap_degree,
            seed=args.seed,
        )
    except (InputError, ResourceLimitError) as exc:
        tree_note = str(exc)
    else:
        tree_payload = _tree_json(tree)

    payload = {
        "map": model.map_str(),
        "prime": args.prime,
        "towers": {
            "x": str(x),
            "reduction": _residue(xbar),
            "integral": x.is_integral(args.prime),
            "levels": levels,
            "warnings": warnings,
            "tree": tree_payload,
            "tree_note": tree_note,
        },
    }

    lines = [
        f"map: {model.map_str()}",
        f"prime: {args.prime}",
        f"x: {x} (reduction {_residue(xbar)}, {'integral' if x.is_integral(args.prime) else 'not integral'})",
        " n | lc_val | disc_val | certificate    | cycle type | factor degrees",
    ]
    for entry in levels:
        cyc = (
            ",".join(str(c) for c in entry["cycle_type"])
            if entry["cycle_type"]
            else "-"
        )
        fac = (
            ",".join(str(c) for c in entry["reduced_factor_degrees"])
            if entry["reduced_factor_degrees"]
            else "-"
        )
        lines.append(
            f" {entry['n']} | {entry['lc_valuation']:>6} | {entry['disc_valuation']!s:>8} "
            f"| {entry['certificate']:<14} | {cyc:<10} | {fac}"
        )
    for w in warnings:
        lines.append(f"warning: {w}")
    if tree_payload is not None:
        lines.append(
            f"reduced preimage tree over F_{args.prime}^{tree_payload['field_degree']}: "
            f"level sizes {','.join(str(s) for s in tree_payload['level_sizes'])}"
        )
    elif tree_note is not None:
        lines.append(f"no reduced preimage tree: {tree_note}")
    return payload, "\n".join(lines), 0


def _cmd_orbit(args) -> tuple[dict, str, int]:
    model = parse_map(args.map, args.prime)
    x = ProjPointQ.from_value(args.x)
    if args.n >= 1:
        rep = orbital_report(
            model,
            x,
            args.N,
            args.n,
            args.prime,
            cap_degree=args.cap_degree,
            cap_height_bits=args.cap_height,
        )
        profile = rep.profile
    else:
        rep = None
        profile = forward_orbit(
            model, x, args.N, args.prime, cap_height_bits=args.cap_height
        )

    orbit_payload = {
        "points": [str(pt) for pt in profile.points],
        "preperiod": profile.preperiod,
        "period": profile.period,
        "reductions": [_residue(r) for r in profile.reductions],
        "integral": list(profile.integral_flags),
        "in_postcritical_set": list(profile.in_pc_flags),
    }
    if rep is not None:
        orbit_payload["n_max"] = rep.n_max
        orbit_payload["basepoints"] = [
            {
                "index": bp.index,
                "point": str(bp.point),
                "levels": [_fiber_json(r) for r in bp.fiber_reports],
                "cycle_types": [
                    None if c is None else list(c) for c in bp.cycle_types
                ],
            }
            for bp in rep.basepoints
        ]
        orbit_payload["shifts"] = [
            {"index": s.index, "n": s.n, "ok": s.ok, "note": s.note}
            for s in rep.shifts
        ]
        orbit_payload["all_unramified_on_locus"] = rep.all_unramified_on_locus

    payload = {"map": model.map_str(), "prime": args.prime, "orbit": orbit_payload}

    lines = [f"map: {model.map_str()}", f"prime: {args.prime}"]
    lines.append("orbit: " + " -> ".join(str(pt) for pt in profile.points))
    if profile.period is not None:
        lines.append(f"cycle: preperiod {profile.preperiod}, period {profile.period}")
    else:
        lines.append(f"cycle: none within {args.N} steps")
    lines.append(
        "reductions: " + " ".join(str(_residue(r)) for r in profile.reductions)
    )
    if rep is not None:
        for bp in rep.basepoints:
            certs = " ".join(r.certificate for r in bp.fiber_reports)
            lines.append(f"x_{bp.index} = {bp.point}: {certs}")
        lines.append(
            "all basepoints off the postcritical set certified unramified: "
            + ("yes" if rep.all_unramified_on_locus else "no")
        )
    return payload, "\n".join(lines), 0


def _cmd_moduli(args) -> tuple[dict, str, int]:
    model = parse_map(args.map, args.prime)
    rep = moduli_search(model, args.prime)
    payload = {
        "map": model.map_str(),
        "prime": args.prime,
        "moduli": {
            "initial_valuation": rep.initial_valuation,
            "best_valuation": rep.best_valuation,
            "achieved_zero": rep.achieved_zero,
            "mobius": rep.best_mobius.formula(),
            "conjugate": rep.best_model.map_str(),
            "tried": rep.tried,
        },
    }
    lines = [
        f"map: {model.map_str()}",
        f"prime: {args.prime}",
        f"resultant valuation of the given model: {rep.initial_valuation}",
        f"best conjugate: M(z) = {rep.best_mobius.formula()} giving {rep.best_model.map_str()}",
        f"best resultant valuation: {rep.best_valuation}"
        + (" (good reduction witness)" if rep.achieved_zero else " (inconclusive)"),
    ]
    return payload, "\n".join(lines), 0


def _cmd_examples(args) -> tuple[dict, str, int]:
    checks = run_battery(args.prime)
    passed = battery_passed(checks)
    payload = {
        "prime": args.prime,
        "examples": [
            {"name": c.name, "ok": c.ok, "expected": c.expected, "got": c.got}
            for c in checks
        ],
        "passed": passed,
    }
    lines = []
    for c in checks:
        if c.ok:
            lines.append(f"PASS {c.name}")
        else:
            lines.append(f"FAIL {c.name} (expected {c.expected}, got {c.got})")
    lines.append(
        f"{sum(c.ok for c in checks)}/{len(checks)} worked-example checks passed"
    )
    return payload, "\n".join(lines), 0 if passed else 1


# -- argument parsing -----------------------------------------------------------

def _add_common(sub, *, needs_map=True):
    if needs_map:
        sub.add_argument("map", help="rational map in z, e.g. 'z^2+p' (p is the prime)")
    sub.add_argument("-p", "--prime", type=int, required=True, help="prime of the base field Q_p")
    sub.add_argument("--format", choices=("text", "json"), default="text")
    sub.add_argument("--seed", type=int, default=0, help="seed for factorization randomness")
    sub.add_argument("--cap-degree", type=int, default=DEGREE_CAP, help="max polynomial degree")
    sub.add_argument("--cap-field", type=int, default=FIELD_SIZE_CAP, help="max residue field size p^m")
    sub.add_argument("--cap-height", type=int, default=HEIGHT_CAP_BITS, help="max orbit coordinate size in bits")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padicdyn",
        description="reduction, postcritical sets and unramified preimage towers of rational maps over Q_p",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("analyze", help="strict good reduction, postcritical set, fiber criterion")
    _add_common(sub)

    sub = subs.add_parser("tower", help="fiber certificates and Frobenius data over one basepoint")
    _add_common(sub)
    sub.add_argument("-x", required=True, help="basepoint in P^1(Q): rational number or 'inf'")
    sub.add_argument("-n", type=int, default=2, help="tower depth")

    sub = subs.add_parser("orbit", help="forward orbit with per-basepoint tower reports")
    _add_common(sub)
    sub.add_argument("-x", required=True, help="starting point: rational number or 'inf'")
    sub.add_argument("-N", type=int, default=8, help="orbit length")
    sub.add_argument("-n", type=int, default=1, help="tower depth per basepoint (0 for none)")

    sub = subs.add_parser("moduli", help="search affine/inversion conjugates for a unit resultant")
    _add_common(sub)

    sub = subs.add_parser("examples", help="re-run the built-in worked examples at a chosen prime")
    _add_common(sub, needs_map=False)

    return parser


_DISPATCH = {
    "analyze": _cmd_analyze,
    "tower": _cmd_tower,
    "orbit": _cmd_orbit,
    "moduli": _cmd_moduli,
    "examples": _cmd_examples,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, text, code = _DISPATCH[args.command](args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except PadicDynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)
    return code
