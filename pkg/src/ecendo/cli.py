"""Command-line front end (``ecendo``)."""

import argparse
import json
import math
import sys
from pathlib import Path

from . import corpus
from .analysis import analyze_run, parse_boxes
from .cm_order import CMOrder, IdealHNF
from .endo import determine_end_ring
from .errors import (
    EcendoError,
    InvalidConfiguration,
    ScaleLimit,
    Supersingular,
    UncertifiedRing,
)
from .formats import (
    dump_curve,
    load_config,
    load_curve,
    tau_from_list,
    write_json,
    write_stream,
)
from .generator import GeneratorState
from .search import WANTS, search

EXIT_OK, EXIT_IO, EXIT_SCOPE, EXIT_PRECONDITION, EXIT_VERIFY = 0, 1, 2, 3, 4


class VerificationFailure(EcendoError):
    pass


def _exit_code(exc):
    if isinstance(exc, VerificationFailure):
        return EXIT_VERIFY
    if isinstance(exc, (Supersingular, UncertifiedRing, ScaleLimit)):
        return EXIT_SCOPE
    if isinstance(exc, OSError):
        return EXIT_IO
    return EXIT_PRECONDITION


# -- commands -----------------------------------------------------------------------


def cmd_curve_info(args):
    curve = load_curve(args.curve, write_back=args.write_back)
    ring = determine_end_ring(curve, args.budget)
    print(f"#E={curve.n_points}, t={curve.t}, D_K={curve.D_K}, v={curve.v}, u={ring.u}")
    print(f"field: {curve.field!r}")
    print("ordinary: yes")
    if ring.certified:
        print(f"End(E): order of conductor {ring.u}, D_E={ring.order.D}")
    else:
        lo, hi = ring.u_range
        print(f"End(E): uncertified, conductor between {lo} and {hi}")
    print(f"Frobenius: {ring.c0} + {ring.w}*w")
    return EXIT_OK


def cmd_search(args):
    found = search(
        args.ell, args.want, args.q_max, q_min=args.q_min, limit=args.limit,
        sample=args.sample, seed=args.seed,
    )
    rows = [c.to_dict() for c in found]
    print(json.dumps(rows, sort_keys=True))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for i, cand in enumerate(found):
            name = f"cand{i:03d}"
            (out / f"{name}.curve").write_text(dump_curve(cand.curve))
            d = cand.to_dict()
            (out / f"{name}.ini").write_text(
                "[run]\n"
                f"curve = {name}.curve\n"
                f"point = {json.dumps(d['P'])}\n"
                f"tau = {json.dumps(d['tau'])}\n"
                "observable = x\n"
                f"stream = {name}.csv\n"
                f"report = {name}.json\n"
            )
    return EXIT_OK


def _resolve_point(G, spec, ring):
    F = G.field
    if isinstance(spec, str):
        key = spec.split(":", 1)[1]
        if not key.startswith("order="):
            raise InvalidConfiguration(f"unknown point search {spec!r}")
        want = key.split("=", 1)[1]
        pts = [P for P in G.points() if P.x is not None]
        if want == "max":
            top = max(G.point_order(P) for P in pts)
            return next(P for P in pts if G.point_order(P) == top)
        ell = int(want)
        for P in pts:
            if G.point_order(P) == ell:
                return P
        raise InvalidConfiguration(f"no rational point of order {ell}")
    x, y = ([v] if isinstance(v, int) else v for v in spec)
    pad = lambda v: list(v) + [0] * (F.k - len(v))  # noqa: E731
    return G.point(F.from_digits(pad(x)), F.from_digits(pad(y)))


def _prepare(args):
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if getattr(args, "nu", None):
        cfg.nu = tuple(int(v) for v in args.nu.split(","))
    if getattr(args, "boxes", None):
        cfg.boxes = args.boxes
    curve = load_curve(cfg.curve_path())
    ring = determine_end_ring(curve, args.budget)
    G = curve.group(1)
    try:
        P = _resolve_point(G, cfg.point, ring)
    except ValueError as exc:
        raise InvalidConfiguration(str(exc)) from None
    tau = tau_from_list(ring, cfg.tau)
    state = GeneratorState(ring, P, tau)
    out = Path(args.out) if args.out else cfg.base
    out.mkdir(parents=True, exist_ok=True)
    return cfg, state, out


def cmd_generate(args):
    cfg, state, out = _prepare(args)
    f = cfg.observable_fn()
    f.check(state.curve.p)
    length = cfg.length or state.T
    chash = cfg.hash()
    write_stream(out / cfg.stream, state.clone(), f, length, chash)
    print(f"T={state.T} length={length} ann={state.ann.ideal!r} config_hash={chash}")
    return EXIT_OK


def cmd_analyze(args):
    cfg, state, out = _prepare(args)
    f = cfg.observable_fn()
    f.check(state.curve.p)
    chash = cfg.hash()
    boxes = parse_boxes(cfg.boxes)
    reports = analyze_run(state, f, j=cfg.j, nus=cfg.nu, boxes=boxes, seed=cfg.seed)
    data = {
        "config_hash": chash,
        "seed": cfg.seed,
        "T": state.T,
        "reports": [r.to_dict() for r in reports],
    }
    write_json(out / cfg.report, data)
    for r in reports:
        flag = " vacuous" if r.vacuous else ""
        print(f"{r.quantity} nu={r.params['nu']} measured={r.measured:.6g} "
              f"bound={r.bound:.6g} ratio={r.ratio:.4g}{flag}")
    return EXIT_OK


def _check_ideal_fixture(path):
    """Lines 'D_K u s b c' naming ideals; each must be a valid HNF ideal of the order."""
    failures, count = [], 0
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        try:
            D_K, u, s, b, c = (int(v) for v in line)
        except ValueError:
            raise InvalidConfiguration(f"{path}:{lineno}: expected 'D_K u s b c'") from None
        count += 1
        O = CMOrder(D_K, u)
        try:
            a = IdealHNF(O, s, b, c)
        except ValueError as exc:
            failures.append(f"{path}:{lineno}: {exc}")
            continue
        # an invertible ideal times its conjugate is generated by its norm
        conj = O.ideal((a.s, 0), O.element(a.b, a.c).conj())
        if math.gcd(a.norm, O.u) == 1 and (a * conj) != O.ideal((a.norm, 0)):
            failures.append(f"{path}:{lineno}: a * conj(a) != (n(a))")
    return count, failures


def cmd_verify(args):
    failures = []
    count = 0
    if args.fixture:
        n, bad = _check_ideal_fixture(args.fixture)
        count += n
        failures += bad
    if args.suite in ("lemmas", "all"):
        reports, skipped = corpus.run_lemma_corpus(args.budget)
        count += len(reports)
        for r in reports:
            if args.verbose or not r.passed:
                print(r.line())
            if r.exact and not r.passed:
                failures.append(r.line())
        for lemma, why in skipped:
            print(f"SKIP {lemma}: {why}")
    if args.suite == "all":
        instances = corpus.generator_instances(per_curve=1)
        if args.budget is not None:
            instances = instances[: max(0, args.budget - count)]
        for spec, state in instances:
            count += 1
            T_res = state.ring.order.residue_order(state.alpha, state.ann.ideal)
            T_pts = state.ring.point_period(state.alpha, state.P, state.ann.norm, W=state.ann.W)
            if T_res != T_pts:
                failures.append(f"period mismatch on {spec}: {T_res} vs {T_pts}")
    if count == 0:
        print("warning: 0 instances checked")
    for line in failures:
        print(f"FAIL {line}")
    print(f"{count} instances, {len(failures)} failures")
    if failures:
        raise VerificationFailure(f"{len(failures)} identities failed")
    return EXIT_OK


# -- parser -------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ecendo", description="Endomorphism generators on ordinary elliptic curves."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    field_budget = argparse.ArgumentParser(add_help=False)
    field_budget.add_argument(
        "--budget", type=int, default=10**7, help="largest field that may be enumerated"
    )
    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("curve-info", parents=[field_budget], help="summarise a curve file")
    p.add_argument("curve", nargs="?")
    p.add_argument("--curve", dest="curve_flag")
    p.add_argument("--write-back", action="store_true", help="store t, D_K, v in the file")
    p.set_defaults(func=cmd_curve_info)

    p = sub.add_parser("search", parents=[seeded], help="find curves, points and tau")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--want", choices=WANTS, required=True)
    p.add_argument("--q-max", type=int, default=200)
    p.add_argument("--q-min", type=int, default=2)
    p.add_argument("--limit", type=int, default=10)
    p.add_argument("--sample", type=int, default=None, help="curves sampled per field")
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)

    for name, func, text in (
        ("generate", cmd_generate, "write the output stream as CSV"),
        ("analyze", cmd_analyze, "write measured quantities and bounds as JSON"),
    ):
        p = sub.add_parser(name, parents=[field_budget, seeded], help=text)
        p.add_argument("--config", required=True)
        p.add_argument("--out")
        p.add_argument("--nu", help="comma-separated list, e.g. 1,2,3")
        p.add_argument("--boxes", help="all or sample:N")
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="run the lemma identity corpus")
    p.add_argument("--suite", choices=("lemmas", "all"), default="lemmas")
    p.add_argument("--budget", type=int, default=None, help="cap on the number of instances")
    p.add_argument("--fixture", help="file of 'D_K u s b c' ideals to validate")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "search" and args.seed is None:
        args.seed = 0
    if args.command == "curve-info":
        args.curve = args.curve_flag or args.curve
        if not args.curve:
            parser.error("curve-info needs a curve file")
    try:
        return args.func(args)
    except (EcendoError, ValueError, OSError) as exc:
        code = _exit_code(exc)
        if isinstance(exc, Supersingular):
            msg = "supersingular: out of scope"
        elif isinstance(exc, OSError):
            msg = f"cannot read {exc.filename or exc}: {exc.strerror or exc}"
        else:
            msg = str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return code


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
