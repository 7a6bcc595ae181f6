"""Command line front end.

Every command reads JSON files, writes one JSON object to stdout and
returns exit code 0, whatever the mathematical outcome; exit code 1
means the input was unusable and 2 means an internal consistency check
failed.  Output bytes are deterministic for identical inputs.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import InternalCheckError, ParseError, ShapeError, UsageError
from .linalg import Matrix, field_from_name, field_name
from .hilbert import destabilizing_1ps, limit_at_zero, mu
from .stability import (
    DEFAULT_ENUM_BOUND,
    DEFAULT_PRIMES,
    enumerate_totally_isotropic,
    graded,
    s_equivalent,
    semistability_verdict,
)
from .dualnum import (
    fiber_structure_check,
    pfaffian,
    unramified_fixed_count,
)
from .serialize import (
    fiber_report_to_dict,
    graded_to_dict,
    module_to_dict,
    mu_to_json,
    parse_matrix_file,
    parse_module_file,
    subspace_to_lists,
    to_json,
    verdict_to_dict,
)


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad arguments, which is reserved
    # here for internal check failures; surface a UsageError instead
    def error(self, message):
        raise ParseError(message)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_module(args):
    mf = parse_module_file(_read(args.file))
    if args.field is not None:
        wanted = field_from_name(args.field)
        if wanted != mf.module.field:
            raise UsageError(
                f"file is over {field_name(mf.module.field)}, not {args.field}"
            )
    return mf


def _primes(args) -> tuple:
    if args.prime_list is None:
        return DEFAULT_PRIMES
    try:
        parsed = tuple(int(p) for p in args.prime_list.split(","))
    except ValueError as exc:
        raise UsageError(f"bad prime list {args.prime_list!r}") from exc
    if not parsed:
        raise UsageError("the prime list is empty")
    return parsed


def _cmd_check(args) -> dict:
    mf = _load_module(args)
    verdict = semistability_verdict(
        mf.module,
        strategy=args.strategy,
        enum_bound=args.enum_bound,
        primes=_primes(args),
    )
    return verdict_to_dict(verdict)


def _require_subgroup(mf, command: str):
    if mf.subgroup is None:
        raise UsageError(f"the {command} command needs a 'lambda' attachment")
    return mf.subgroup


def _cmd_weight(args) -> dict:
    mf = _load_module(args)
    if mf.subgroup is not None:
        lam = mf.subgroup
    elif mf.subspace is not None:
        # weight of the canonical destabilizer for an isotropic witness
        lam = destabilizing_1ps(mf.module, mf.subspace)
    else:
        raise UsageError("the weight command needs a 'lambda' or 'subspace' attachment")
    return {"mu": mu_to_json(mu(lam, mf.module))}


def _cmd_limit(args) -> dict:
    mf = _load_module(args)
    lam = _require_subgroup(mf, "limit")
    result = limit_at_zero(lam, mf.module)
    if result is None:
        return {"diverges": True}
    return module_to_dict(result)


def _cmd_gr(args) -> dict:
    mf = _load_module(args)
    return graded_to_dict(graded(mf.module, args.enum_bound, _primes(args)))


def _cmd_sequiv(args) -> dict:
    first = parse_module_file(_read(args.file))
    second = parse_module_file(_read(args.other))
    answer = s_equivalent(
        first.module, second.module, args.enum_bound, _primes(args)
    )
    return {"s_equivalent": answer}


def _standard_twist(field, r: int) -> Matrix:
    if r % 2 != 0:
        raise UsageError("the alternating case needs an even rank")
    grid = [[field.zero] * r for _ in range(r)]
    for i in range(0, r, 2):
        grid[i][i + 1] = field.one
        grid[i + 1][i] = field.neg(field.one)
    return Matrix(field, grid)


def _cmd_fiber(args) -> dict:
    field = field_from_name(args.field)
    if args.case == "unramified":
        count = unramified_fixed_count(field, args.rank, args.max_pairs)
        return {
            "case": "unramified",
            "r": args.rank,
            "field": field_name(field),
            "fixed_count": count,
        }
    twist = None
    if args.case == "alternating":
        if args.twist is not None:
            twist = parse_matrix_file(_read(args.twist))
            if twist.field != field:
                raise UsageError("twist matrix is over the wrong field")
        else:
            twist = _standard_twist(field, args.rank)
    report = fiber_structure_check(
        field, args.rank, args.case, m=twist, max_pairs=args.max_pairs
    )
    return fiber_report_to_dict(report)


def _cmd_pfaffian(args) -> dict:
    m = parse_matrix_file(_read(args.file))
    return {"pfaffian": m.field.format(pfaffian(m))}


def _cmd_enumerate(args) -> dict:
    mf = _load_module(args)
    subs = list(enumerate_totally_isotropic(mf.module, bound=args.enum_bound))
    return {
        "count": len(subs),
        "subspaces": [subspace_to_lists(v) for v in subs],
    }


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twistmod", description=__doc__)

    common = _Parser(add_help=False)
    common.add_argument(
        "--field",
        help="field tag (rational or fp:<p>); on file commands this is a cross-check",
    )
    common.add_argument(
        "--seed", type=int, help="seed for randomized operations (reserved)"
    )

    search = _Parser(add_help=False)
    search.add_argument(
        "--prime-list",
        help="comma-separated primes for heuristic reductions over the rationals",
    )
    search.add_argument(
        "--enum-bound",
        type=int,
        default=DEFAULT_ENUM_BOUND,
        help="largest dim H the subspace enumerations will accept",
    )

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common, search], help="semistability verdict")
    p.add_argument("file")
    p.add_argument(
        "--strategy",
        choices=["auto", "exhaustive", "heuristic"],
        default="auto",
    )
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser(
        "weight", parents=[common], help="weight of the attached subgroup"
    )
    p.add_argument("file")
    p.set_defaults(handler=_cmd_weight)

    p = sub.add_parser(
        "limit", parents=[common], help="limit module under the attached subgroup"
    )
    p.add_argument("file")
    p.set_defaults(handler=_cmd_limit)

    p = sub.add_parser("gr", parents=[common, search], help="graded module")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_gr)

    p = sub.add_parser(
        "sequiv", parents=[common, search], help="compare graded modules"
    )
    p.add_argument("file")
    p.add_argument("other")
    p.set_defaults(handler=_cmd_sequiv)

    p = sub.add_parser(
        "fiber", parents=[common], help="enumerate a fixed-set fiber"
    )
    p.add_argument("--case", required=True, choices=["plus", "alternating", "unramified"])
    p.add_argument("--rank", "-r", type=int, required=True)
    p.add_argument("--twist", help="matrix file for the alternating twist")
    p.add_argument("--max-pairs", type=int, default=1_000_000)
    p.set_defaults(handler=_cmd_fiber)

    p = sub.add_parser("pfaffian", parents=[common], help="pfaffian of a matrix file")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_pfaffian)

    p = sub.add_parser(
        "enumerate",
        parents=[common, search],
        help="list the totally isotropic subspaces",
    )
    p.add_argument("file")
    p.set_defaults(handler=_cmd_enumerate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "command", None) == "fiber" and args.field is None:
            raise UsageError("the fiber command needs --field")
        payload = args.handler(args)
    except InternalCheckError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 2
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(to_json(payload))
    return 0


if __name__ == "__main__":
    sys.exit(main())
