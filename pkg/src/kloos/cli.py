"""Command line interface: exact number-theoretic tables as JSON/CSV/text.

Subcommands
-----------
field        construction summary for GF(3^r)
kloosterman  the full K(lambda; a) table plus SK/MK moment vectors
moments      SK and MK power moments only
constants    family constants (A, B, N) over valid (family, n)
weights      trace profile, dual weights, and weight prefix of one instance
group        brute-force enumerated matrix sets and their trace histograms
recursion    solved moment series: identity route vs printed route vs oracle
verify       every exact check for all valid instances; exit 1 on failure

Field elements print as comma-separated coefficient strings, constant term
first, matching the --modulus input convention.  Output is deterministic:
the same invocation yields byte-identical bytes.  Exit codes: 0 success,
1 verification failure, 2 usage or guard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .charsums import kloosterman_table, moment_series
from .codes import dual_weights, trace_profile, weight_distribution_prefix
from .constants import ALL_FAMILIES, CosetFamily, family_constants
from .field import Field, poly_str
from .groups import (
    double_coset,
    enumerate_o2_minus,
    enumerate_q,
    enumerate_so2_minus,
)
from .moments import (
    full_verification,
    sk_oracle_series,
    sk_via_pless,
    sk_via_printed_recursion,
)

FORMATS = ("json", "csv", "text")


def _parse_modulus(text: str | None) -> tuple[int, ...] | None:
    if text is None:
        return None
    try:
        return tuple(int(c) for c in text.split(","))
    except ValueError as exc:
        raise ValueError(f"cannot parse modulus {text!r}: expected comma-separated digits") from exc


def _coeff_key(field: Field, a: int) -> str:
    return ",".join(str(c) for c in field.coeffs(a))


def _build_field(args) -> Field:
    return Field(args.r, _parse_modulus(args.modulus))


def _default_jobs() -> int:
    env = os.environ.get("KLOOS_JOBS", "")
    if env.strip().isdigit() and int(env) >= 1:
        return int(env)
    return 1


# -- command payload builders ----------------------------------------------------


def cmd_field(args) -> tuple[dict, list[list], int]:
    field = _build_field(args)
    fibers = [0, 0, 0]
    for a in field.elements():
        fibers[field.trace(a)] += 1
    payload = {
        "r": field.r,
        "q": field.q,
        "modulus": list(field.modulus),
        "modulus_str": poly_str(field.modulus),
        "first_nonsquare": _coeff_key(field, field.first_nonsquare()),
        "trace_fibers": fibers,
        "num_squares": len(field.squares()),
    }
    rows = [["key", "value"]] + [[k, json.dumps(v) if isinstance(v, list) else v] for k, v in payload.items()]
    return payload, rows, 0


def cmd_kloosterman(args) -> tuple[dict, list[list], int]:
    field = _build_field(args)
    table = kloosterman_table(field)
    sk, mk = moment_series(field, args.hmax)
    payload = {
        "q": field.q,
        "modulus": list(field.modulus),
        "K": {_coeff_key(field, a): k for a, k in table.items()},
        "SK": sk[1:],
        "MK": mk[1:],
    }
    rows = [["a", "K"]] + [[_coeff_key(field, a), k] for a, k in table.items()]
    return payload, rows, 0


def cmd_moments(args) -> tuple[dict, list[list], int]:
    field = _build_field(args)
    sk, mk = moment_series(field, args.hmax)
    payload = {"q": field.q, "modulus": list(field.modulus), "SK": sk[1:], "MK": mk[1:]}
    rows = [["q", "h", "SK", "MK"]]
    for h in range(1, args.hmax + 1):
        rows.append([field.q, h, sk[h], mk[h]])
    return payload, rows, 0


def cmd_constants(args) -> tuple[dict, list[list], int]:
    q = 3**args.r
    families = [CosetFamily.parse(args.family)] if args.family else list(ALL_FAMILIES)
    entries = []
    for family in sorted(families, key=lambda f: f.label):
        ns = [args.n] if args.n is not None else family.valid_ns(args.nmax)
        for n in ns:
            if not family.valid_n(n):
                raise ValueError(f"n={n} is not valid for family {family.label}")
            consts = family_constants(family, n, q)
            entries.append(
                {"family": family.label, "n": n, "q": q, "A": consts.A, "B": consts.B, "N": consts.N}
            )
    payload = {"q": q, "constants": entries}
    rows = [["family", "n", "q", "A", "B", "N"]] + [
        [e["family"], e["n"], e["q"], e["A"], e["B"], e["N"]] for e in entries
    ]
    return payload, rows, 0


def cmd_weights(args) -> tuple[dict, list[list], int]:
    field = _build_field(args)
    family = CosetFamily.parse(args.family)
    profile = trace_profile(family, args.n, field)
    weights = dual_weights(profile)
    j_max = min(profile.length, args.jmax)
    prefix = weight_distribution_prefix(profile, j_max)
    payload = {
        "family": family.label,
        "n": args.n,
        "q": field.q,
        "N": profile.length,
        "profile": {_coeff_key(field, b): c for b, c in profile.as_dict().items()},
        "dual_weights": {_coeff_key(field, a): w for a, w in weights.items()},
        "C_prefix": prefix,
    }
    rows = [["section", "key", "value"]]
    rows += [["profile", _coeff_key(field, b), c] for b, c in profile.as_dict().items()]
    rows += [["dual_weight", _coeff_key(field, a), w] for a, w in weights.items()]
    rows += [["C", j, c] for j, c in enumerate(prefix)]
    return payload, rows, 0


def cmd_group(args) -> tuple[dict, list[list], int]:
    field = _build_field(args)
    if args.family:
        family = CosetFamily.parse(args.family)
        if args.n is None:
            raise ValueError("--family needs --n")
        gset = double_coset(field, family, args.n)
    elif args.set == "so2":
        gset = enumerate_so2_minus(field)
    elif args.set == "o2":
        gset = enumerate_o2_minus(field)
    elif args.set == "q":
        if args.n is None:
            raise ValueError("--set q needs --n")
        gset = enumerate_q(field, args.n)
    else:
        raise ValueError("group command needs --set or --family")
    histogram = gset.trace_histogram()
    payload = {
        "label": gset.label,
        "q": field.q,
        "eps": _coeff_key(field, gset.eps),
        "order": gset.order,
        "histogram": {_coeff_key(field, b): c for b, c in histogram.items()},
    }
    rows = [["beta", "count"]] + [[_coeff_key(field, b), c] for b, c in histogram.items()]
    return payload, rows, 0


def cmd_recursion(args) -> tuple[dict, list[list], int]:
    field = _build_field(args)
    family = CosetFamily.parse(args.family)
    steps = args.hmax // 2 if family.even_moments else args.hmax
    if steps < 1:
        raise ValueError(f"--hmax {args.hmax} leaves no solvable moment for {family.label}")
    derived = sk_via_pless(family, args.n, field, steps)
    printed, defects = sk_via_printed_recursion(family, args.n, field, steps)
    oracle = sk_oracle_series(family, args.n, field, steps)
    match = printed is not None and derived.values == printed.values == oracle.values
    payload = {
        "family": family.label,
        "n": args.n,
        "q": field.q,
        "orders": list(derived.orders),
        "SK": list(derived.values),
        "SK_printed": None if printed is None else list(printed.values),
        "SK_oracle": list(oracle.values),
        "printed_defects": defects,
        "match": match,
    }
    rows = [["h", "SK", "SK_printed", "SK_oracle"]]
    for idx, h in enumerate(derived.orders):
        rows.append(
            [
                h,
                derived.values[idx],
                "" if printed is None else printed.values[idx],
                oracle.values[idx],
            ]
        )
    return payload, rows, 0 if match else 1


def cmd_verify(args) -> tuple[dict, list[list], int]:
    field = _build_field(args)
    report = full_verification(field, args.nmax, args.hmax, jobs=args.jobs)
    rows = [["name", "status", "lhs", "rhs"]]
    for inst in report["instances"]:
        for chk in inst["checks"]:
            rows.append([chk["name"], chk["status"], json.dumps(chk["lhs"]), json.dumps(chk["rhs"])])
    return report, rows, 0 if report["passed"] else 1


# -- rendering --------------------------------------------------------------------


def _render_text(payload, indent: str = "") -> str:
    lines = []
    if isinstance(payload, dict):
        for k, v in payload.items():
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append(f"{indent}{k}:")
                lines.append(_render_text(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {_flat_str(v)}")
    elif isinstance(payload, list):
        for item in payload:
            if isinstance(item, (dict, list)):
                lines.append(_render_text(item, indent + "  "))
                lines.append("")
            else:
                lines.append(f"{indent}- {item}")
    else:
        lines.append(f"{indent}{payload}")
    return "\n".join(line for line in lines if line is not None)


def _is_flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    return False


def _flat_str(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(str(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {x}" for k, x in v.items()) + "}"
    return str(v)


def _emit(payload, rows, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=True))
        out.write("\n")
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerows(rows)
        out.write(buf.getvalue())
    else:
        out.write(_render_text(payload))
        out.write("\n")


# -- argument parsing ---------------------------------------------------------------


def _add_field_args(sub) -> None:
    sub.add_argument("--r", type=int, required=True, help="extension degree of GF(3^r)")
    sub.add_argument(
        "--modulus",
        type=str,
        default=None,
        help="modulus coefficients, constant term first, e.g. 1,0,1 for x^2+1",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kloos",
        description="Exact Kloosterman-sum moments from orthogonal coset codes over GF(3^r).",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--output", type=str, default=None, help="write to a file instead of stdout")
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("field", parents=[common], help="field construction summary")
    _add_field_args(s)
    s.set_defaults(handler=cmd_field)

    s = subs.add_parser("kloosterman", parents=[common], help="Kloosterman table and moments")
    _add_field_args(s)
    s.add_argument("--hmax", type=int, default=8)
    s.set_defaults(handler=cmd_kloosterman)

    s = subs.add_parser("moments", parents=[common], help="SK and MK power moments")
    _add_field_args(s)
    s.add_argument("--hmax", type=int, default=8)
    s.set_defaults(handler=cmd_moments)

    s = subs.add_parser("constants", parents=[common], help="family constants A, B, N")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--family", type=str, default=None, help="e.g. DC1+; all families if omitted")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--nmax", type=int, default=6)
    s.set_defaults(handler=cmd_constants)

    s = subs.add_parser("weights", parents=[common], help="profile, dual weights, weight prefix")
    _add_field_args(s)
    s.add_argument("--family", type=str, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--jmax", type=int, default=8)
    s.set_defaults(handler=cmd_weights)

    s = subs.add_parser("group", parents=[common], help="enumerated matrix sets and trace histograms")
    _add_field_args(s)
    s.add_argument("--set", choices=("so2", "o2", "q"), default=None)
    s.add_argument("--family", type=str, default=None, help="double coset at q=3, e.g. DC1+")
    s.add_argument("--n", type=int, default=None)
    s.set_defaults(handler=cmd_group)

    s = subs.add_parser("recursion", parents=[common], help="solved moment series, both routes vs oracle")
    _add_field_args(s)
    s.add_argument("--family", type=str, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--hmax", type=int, default=8)
    s.set_defaults(handler=cmd_recursion)

    s = subs.add_parser("verify", parents=[common], help="every exact check for all valid instances")
    _add_field_args(s)
    s.add_argument("--nmax", type=int, default=6)
    s.add_argument("--hmax", type=int, default=8)
    s.add_argument("--jobs", type=int, default=None, help="parallel workers (env KLOOS_JOBS)")
    s.set_defaults(handler=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", None) is None and args.command == "verify":
        args.jobs = _default_jobs()
    try:
        payload, rows, code = args.handler(args)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return 1
    if args.output:
        with open(args.output, "w") as handle:
            _emit(payload, rows, args.format, handle)
    else:
        _emit(payload, rows, args.format, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
