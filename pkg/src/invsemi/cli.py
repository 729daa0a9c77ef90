"""Command-line surface over the library.

Exit codes: 0 success, 1 verification failures, 2 bad arguments or domain
errors, 3 resource budget exceeded.  All output is deterministic for a given
command line; the verify report in particular is byte-identical across runs
with the same seed and bounds.
"""

from __future__ import annotations

import argparse
import json
import sys

from .core import (
    Context,
    classify,
    image_deficit,
    parse_transformation,
    parse_y,
)
from .errors import BudgetError, DimensionError, DomainError
from .extnat import (
    cover_is_valid,
    d_condition,
    j_condition,
    parse_profile,
    profile_of,
)
from .ideals import ideals_all, kernel
from .regularity import is_unit_regular
from .semigroup import (
    GreenOracle,
    RELATIONS,
    eggbox,
    eggbox_dot,
    eggbox_json,
    eggbox_text,
    enumerate_family,
    green_related,
    j_below_witness,
    l_below_witness,
    l_related,
    r_below_witness,
    r_related,
)
from .verify import VerifyConfig, exit_code_for, render_report_json, render_report_text, run_verify

ORACLE_CROSS_CHECK_LIMIT = 4  # n above this skips the exhaustive oracle in `green`


def _ctx_of(args) -> Context:
    return Context(args.n, parse_y(args.y))


def cmd_enum(args) -> int:
    ctx = _ctx_of(args)
    enum = enumerate_family(ctx, args.family)
    if args.format == "json":
        doc = {
            "n": ctx.n,
            "y": list(ctx.y_set),
            "family": enum.family,
            "count": len(enum.elements),
            "elements": [str(f) for f in enum.elements],
        }
        print(json.dumps(doc, indent=2))
    else:
        print(f"count={len(enum.elements)}")
        for f in enum.elements:
            print(str(f))
    return 0


def cmd_classify(args) -> int:
    ctx = _ctx_of(args)
    f = parse_transformation(args.f)
    flags = classify(ctx, f)
    doc: dict = {
        "f": str(f),
        "n": ctx.n,
        "y": list(ctx.y_set),
        "membership": {
            "tbar": flags.in_tbar,
            "omegabar": flags.in_omegabar,
            "sbar": flags.in_sbar,
            "fix": flags.in_fix,
            "unit": flags.is_unit_of_omegabar,
        },
        "profile": None,
        "image_deficit": None,
        "regularity": None,
        "reason": None,
    }
    if flags.in_omegabar:
        doc["profile"] = str(profile_of(ctx, f))
        doc["image_deficit"] = image_deficit(ctx, f)
        rep = is_unit_regular(ctx, f)
        doc["regularity"] = {
            "is_regular": rep.is_regular,
            "is_unit_regular": rep.is_unit_regular,
            "witness_pre_inverse": str(rep.witness_pre_inverse) if rep.witness_pre_inverse else None,
            "witness_unit": str(rep.witness_unit) if rep.witness_unit else None,
            "certifying_transversal": sorted(rep.certifying_transversal)
            if rep.certifying_transversal is not None
            else None,
        }
    else:
        doc["reason"] = "not a member: Y is not carried onto Y"
    if args.format == "text":
        for key in ("tbar", "omegabar", "sbar", "fix", "unit"):
            print(f"{key}={str(doc['membership'][key]).lower()}")
        if doc["reason"]:
            print(f"reason={doc['reason']}")
        else:
            print(f"profile={doc['profile']}")
            print(f"image_deficit={doc['image_deficit']}")
            reg = doc["regularity"]
            print(f"is_regular={str(reg['is_regular']).lower()}")
            print(f"is_unit_regular={str(reg['is_unit_regular']).lower()}")
    else:
        print(json.dumps(doc, indent=2))
    return 0


def cmd_green(args) -> int:
    ctx = _ctx_of(args)
    f = parse_transformation(args.f)
    g = parse_transformation(args.g)
    rel = args.rel
    related = green_related(ctx, rel, f, g)
    doc: dict = {
        "rel": rel,
        "f": str(f),
        "g": str(g),
        "related": related,
        "oracle": None,
        "witnesses": None,
    }
    if ctx.n <= ORACLE_CROSS_CHECK_LIMIT:
        oracle = GreenOracle(ctx)
        doc["oracle"] = oracle.related(rel, f, g)
    if args.witness:
        w: dict = {}
        if rel in ("L", "H"):
            a = l_below_witness(ctx, f, g)
            b = l_below_witness(ctx, g, f)
            w["l_f_below_g"] = str(a) if a else None
            w["l_g_below_f"] = str(b) if b else None
        if rel in ("R", "H"):
            a = r_below_witness(ctx, f, g)
            b = r_below_witness(ctx, g, f)
            w["r_f_below_g"] = str(a) if a else None
            w["r_g_below_f"] = str(b) if b else None
        if rel == "J":
            a = j_below_witness(ctx, f, g)
            b = j_below_witness(ctx, g, f)
            w["j_f_below_g"] = [str(a[0]), str(a[1])] if a else None
            w["j_g_below_f"] = [str(b[0]), str(b[1])] if b else None
        if rel == "D":
            middle = next(
                (
                    m
                    for m in enumerate_family(ctx).elements
                    if l_related(ctx, f, m) and r_related(ctx, m, g)
                ),
                None,
            )
            w["d_middle"] = str(middle) if middle else None
        doc["witnesses"] = w
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(f"related={str(related).lower()}")
        if doc["oracle"] is not None:
            print(f"oracle={str(doc['oracle']).lower()}")
            print(f"agree={str(doc['oracle'] == related).lower()}")
        if doc["witnesses"] is not None:
            for key, val in doc["witnesses"].items():
                print(f"{key}={val}")
    return 0


def cmd_eggbox(args) -> int:
    box = eggbox(_ctx_of(args))
    if args.format == "dot":
        sys.stdout.write(eggbox_dot(box))
    elif args.format == "json":
        print(json.dumps(eggbox_json(box), indent=2))
    else:
        sys.stdout.write(eggbox_text(box))
    return 0


def _ideal_doc(ctx: Context, ideal) -> dict:
    return {
        "size": len(ideal.members),
        "t": max((image_deficit(ctx, f) for f in ideal.members), default=None),
        "members": [str(f) for f in ideal.members],
        "warning": ideal.warning,
    }


def cmd_ideals(args) -> int:
    ctx = _ctx_of(args)
    found = ideals_all(ctx)
    doc = {
        "n": ctx.n,
        "y": list(ctx.y_set),
        "count": len(found),
        "ideals": [_ideal_doc(ctx, i) for i in found],
    }
    if args.format == "text":
        print(f"count={len(found)}")
        for i, ideal in enumerate(found):
            d = _ideal_doc(ctx, ideal)
            print(f"ideal {i}: size={d['size']} t={d['t']}")
            for m in d["members"]:
                print(f"  {m}")
    else:
        print(json.dumps(doc, indent=2))
    return 0


def cmd_kernel(args) -> int:
    ctx = _ctx_of(args)
    bottom = kernel(ctx)
    doc = {"n": ctx.n, "y": list(ctx.y_set), **_ideal_doc(ctx, bottom)}
    if args.format == "text":
        print(f"size={doc['size']} t={doc['t']}")
        for m in doc["members"]:
            print(f"  {m}")
    else:
        print(json.dumps(doc, indent=2))
    return 0


def cmd_profile(args) -> int:
    p = parse_profile(args.p)
    q = parse_profile(args.q)
    want_d = args.d or not (args.d or args.j)
    want_j = args.j or not (args.d or args.j)
    doc: dict = {"p": str(p), "q": str(q)}
    if want_d:
        m = d_condition(p, q)
        doc["d"] = None if m is None else {str(k): v for k, v in m.items()}
    if want_j:
        fwd = j_condition(p, q)
        bwd = j_condition(q, p)
        assert fwd is None or cover_is_valid(p, q, fwd)
        assert bwd is None or cover_is_valid(q, p, bwd)
        doc["pack_q_into_p"] = (
            None
            if fwd is None
            else {
                "blocks": [sorted(b) for b in fwd.blocks],
                "to_rest": sorted(fwd.to_rest),
                "rest_to_rest": fwd.rest_to_rest,
                "rest_to_block": fwd.rest_to_block,
            }
        )
        doc["pack_p_into_q"] = (
            None
            if bwd is None
            else {
                "blocks": [sorted(b) for b in bwd.blocks],
                "to_rest": sorted(bwd.to_rest),
                "rest_to_rest": bwd.rest_to_rest,
                "rest_to_block": bwd.rest_to_block,
            }
        )
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        if want_d:
            print(f"d={str(doc['d'] is not None).lower()}")
        if want_j:
            fwd_ok = doc["pack_q_into_p"] is not None
            bwd_ok = doc["pack_p_into_q"] is not None
            print(f"j_into_p={str(fwd_ok).lower()}")
            print(f"j_into_q={str(bwd_ok).lower()}")
            print(f"j={str(fwd_ok and bwd_ok).lower()}")
    return 0


def cmd_verify(args) -> int:
    cfg = VerifyConfig(
        max_n=args.max_n,
        sample_n5=args.sample_n5,
        seed=args.seed,
        jobs=args.jobs,
        report_path=args.out,
    )
    report = run_verify(cfg)
    if args.format == "text":
        sys.stdout.write(render_report_text(report))
    else:
        sys.stdout.write(render_report_json(report))
    return exit_code_for(report)


def _add_ctx_args(sp) -> None:
    sp.add_argument("--n", type=int, required=True, help="ambient set size")
    sp.add_argument("--y", type=str, required=True, help="distinguished subset, e.g. '0,1'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invsemi",
        description="transformations of a finite set that stabilize a distinguished subset",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("enum", help="list a family of maps")
    _add_ctx_args(sp)
    sp.add_argument("--family", choices=("tbar", "omegabar", "sbar", "fix"), default="omegabar")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_enum)

    sp = sub.add_parser("classify", help="membership, profile and regularity of one map")
    _add_ctx_args(sp)
    sp.add_argument("--f", type=str, required=True, help="map in bracket form, e.g. '[1 0 0]'")
    sp.add_argument("--format", choices=("json", "text"), default="json")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("green", help="test one Green relation between two members")
    _add_ctx_args(sp)
    sp.add_argument("--rel", choices=RELATIONS, required=True)
    sp.add_argument("--f", type=str, required=True)
    sp.add_argument("--g", type=str, required=True)
    sp.add_argument("--witness", action="store_true", help="emit divisibility witnesses")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_green)

    sp = sub.add_parser("eggbox", help="D-classes laid out as R-by-L grids")
    _add_ctx_args(sp)
    sp.add_argument("--format", choices=("text", "dot", "json"), default="text")
    sp.set_defaults(func=cmd_eggbox)

    sp = sub.add_parser("ideals", help="all two-sided ideals")
    _add_ctx_args(sp)
    sp.add_argument("--format", choices=("json", "text"), default="json")
    sp.set_defaults(func=cmd_ideals)

    sp = sub.add_parser("kernel", help="the least ideal")
    _add_ctx_args(sp)
    sp.add_argument("--format", choices=("json", "text"), default="json")
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("profile", help="compare two symbolic fiber profiles")
    sp.add_argument("p", type=str, help="profile literal, e.g. '[w 1 1]' or '[w]+rest1'")
    sp.add_argument("q", type=str)
    sp.add_argument("--d", action="store_true", help="only the bijection test")
    sp.add_argument("--j", action="store_true", help="only the packing tests")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("verify", help="run the self-verification suite")
    sp.add_argument("--max-n", type=int, default=4, dest="max_n")
    sp.add_argument("--sample-n5", action="store_true", dest="sample_n5")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", type=str, default=None, help="also write the JSON report here")
    sp.add_argument("--format", choices=("json", "text"), default="json")
    sp.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (DomainError, DimensionError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
