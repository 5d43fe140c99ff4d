"""Command-line front end: generate, measure, dualize, verify, profile.

Exit codes: 0 when every requested check passes, 1 when a verification
report contains a failing row, 2 for usage or solver/configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from . import bodies, harness, radii, sphere_quad
from .config import DEFAULT_CONFIG
from .errors import LambdahullError

_THEOREMS = ("a", "b", "c", "linhart", "duality", "lemma-m", "lemma-1", "af")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, default=2, help="ambient dimension")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0,
                   help="curvature parameter; all balls have radius 1/lambda")
    p.add_argument("--seed", type=int, default=0, help="master RNG seed")
    p.add_argument("--samples", type=int, default=None,
                   help="quadrature/sample budget override")
    p.add_argument("--tol", type=float, default=None,
                   help="solver tolerance override")
    p.add_argument("--out", type=str, default=None,
                   help="write the result to this path instead of stdout")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lambdahull",
        description="intersections of congruent balls: generators, "
                    "measurements, and inequality campaigns")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random tangent polytope")
    _add_common(g)
    g.add_argument("--inradius", type=float, default=0.3)
    g.add_argument("--contacts", type=int, default=4,
                   help="number of inball touching points")
    g.add_argument("--group", choices=("cyclic", "antipodal-pair"),
                   default=None, help="generate a symmetric body instead")
    g.add_argument("--order", type=int, default=3,
                   help="cyclic group order (with --group)")

    m = sub.add_parser("measure", help="V_1, inradius, circumradius of a body")
    _add_common(m)
    m.add_argument("--body", type=str, required=True,
                   help="path to a body JSON document")

    d = sub.add_parser("dual", help="dual-body radii and width identities")
    _add_common(d)
    d.add_argument("--body", type=str, required=True)

    v = sub.add_parser("verify", help="run a verification campaign")
    _add_common(v)
    v.add_argument("--theorem", choices=_THEOREMS, required=True)
    v.add_argument("--inradius", type=float, default=0.3)
    v.add_argument("--circumradius", type=float, default=None,
                   help="target circumradius (defaults to 0.5/lambda)")
    v.add_argument("--trials", type=int, default=None)
    v.add_argument("--format", choices=("json", "csv"), default="json")

    pr = sub.add_parser("profile", help="lens support profile and deficit")
    _add_common(pr)
    pr.add_argument("--inradius", type=float, default=0.3)
    pr.add_argument("--points", type=int, default=65)
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_body(path: str):
    with open(path, encoding="utf-8") as fh:
        return bodies.from_json(fh.read())


def _cmd_gen(args, cfg) -> int:
    if args.group is not None:
        axis = harness._sample_sphere(harness._philox(args.seed, 3), 1,
                                      args.dim)[0]
        order = 2 if args.group == "antipodal-pair" else args.order
        spec = harness.SymmetryGroupSpec(args.group, axis, order=order)
        body = harness.gen_symmetric_polytope(args.dim, args.lam,
                                              args.inradius, spec, order,
                                              args.seed, cfg)
    else:
        body = harness.gen_random_polytope(args.dim, args.lam, args.inradius,
                                           args.contacts, args.seed, cfg)
    _emit(bodies.to_json(body) + "\n", args.out)
    return 0


def _cmd_measure(args, cfg) -> int:
    body = _load_body(args.body)
    count = args.samples or 200_000
    rule = sphere_quad.sample_directions(body.dim, "symmetrized", count,
                                         seed=args.seed)
    v1, err = sphere_quad.intrinsic_v1(body, rule, cfg)
    ib = radii.inradius(bodies.as_ballpoly(body), cfg)
    cr = radii.circumradius(body, cfg)
    doc = {"n": body.dim, "lambda": body.lam, "V_1": v1, "V_1_stderr": err,
           "r": ib.radius, "R": cr.radius, "samples": count,
           "seed": args.seed}
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_dual(args, cfg) -> int:
    body = _load_body(args.body)
    n, lam = body.dim, body.lam
    count = args.samples or 200_000
    view = harness.dual_view(body, cfg)
    ib = radii.inradius(bodies.as_ballpoly(body), cfg)
    cr = radii.circumradius(view, cfg)
    r1 = sphere_quad.sample_directions(n, "symmetrized", count, seed=args.seed)
    r2 = sphere_quad.sample_directions(n, "symmetrized", count,
                                       seed=args.seed + 1)
    v1, e1 = sphere_quad.intrinsic_v1(body, r1, cfg)
    v1d, e2 = sphere_quad.intrinsic_v1(view, r2, cfg)
    wconst = harness.width_constant(n, lam)
    doc = {
        "n": n, "lambda": lam,
        "r": ib.radius, "R_dual": cr.radius,
        "radius_identity_residual": ib.radius + cr.radius - 1.0 / lam,
        "V_1": v1, "V_1_stderr": e1,
        "V_1_dual": v1d, "V_1_dual_stderr": e2,
        "width_constant": wconst,
        "width_identity_residual": v1 + v1d - wconst,
        "samples": count, "seed": args.seed,
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_verify(args, cfg) -> int:
    n, lam, seed = args.dim, args.lam, args.seed
    r = args.inradius
    R = args.circumradius if args.circumradius is not None else 0.5 / lam
    quad = args.samples or 200_000
    th = args.theorem
    if th == "a":
        rep = harness.verify_thm_a(n, lam, r, trials=args.trials or 100,
                                   seed=seed, cfg=cfg, quad_count=quad)
    elif th == "b":
        rep = harness.verify_thm_b(n, lam, R, trials=args.trials or 100,
                                   seed=seed, cfg=cfg, quad_count=quad)
    elif th == "linhart":
        rep = harness.verify_linhart(n, lam, R, trials=args.trials or 100,
                                     seed=seed, cfg=cfg, quad_count=quad)
    elif th == "c":
        rep = harness.verify_thm_c(n, lam, r, trials=args.trials or 20,
                                   seed=seed, cfg=cfg, quad_count=quad)
    elif th == "lemma-1":
        rep = harness.verify_lemma1(n, lam, r, trials=args.trials or 20,
                                    seed=seed, cfg=cfg)
    elif th == "duality":
        rep = harness.verify_duality(trials=args.trials or 50, seed=seed,
                                     cfg=cfg)
    elif th == "lemma-m":
        rep = harness.verify_lemma_m(trials=args.trials or 50, seed=seed,
                                     cfg=cfg)
    else:
        rep = harness.verify_af(trials=args.trials or 20, seed=seed, cfg=cfg)
    text = rep.to_json() if args.format == "json" else rep.to_csv()
    _emit(text, args.out)
    s = rep.summary
    print(f"theorem {rep.theorem}: rows={s['rows']} pass={s['pass']} "
          f"warn={s['warn']} fail={s['fail']} "
          f"min_margin={s['min_margin']:.3e} "
          f"wall={rep.timestamp['wall_s']}s", file=sys.stderr)
    return 0 if rep.passed else 1


def _cmd_profile(args, cfg) -> int:
    prof = sphere_quad.lens_profile(args.dim, args.lam, args.inradius)
    theta = np.linspace(0.0, np.pi / 2.0, args.points)
    doc = {
        "n": args.dim, "lambda": args.lam, "inradius": args.inradius,
        "switch_angle": prof.switch_angle,
        "hemisphere_mean": prof.hemisphere_mean,
        "theta": [float(t) for t in theta],
        "support": [float(prof.support_at(t)) for t in theta],
        "deficit": [float(sphere_quad.eval_R(prof, t)) for t in theta],
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed the usage schema
        return 2 if exc.code not in (0, None) else 0
    cfg = DEFAULT_CONFIG if args.tol is None else replace(DEFAULT_CONFIG,
                                                          tol=args.tol)
    handler = {"gen": _cmd_gen, "measure": _cmd_measure, "dual": _cmd_dual,
               "verify": _cmd_verify, "profile": _cmd_profile}[args.command]
    try:
        return handler(args, cfg)
    except (LambdahullError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main(argv=None) -> int:
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(cli_main())
