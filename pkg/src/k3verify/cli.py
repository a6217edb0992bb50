"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import delsarte, replay
from .ellfib import FibrationError, degeneration_scan, fiber_configuration, trivial_lattice
from .exactnum import Fq, factorize
from .lattices import (
    LatticeError,
    canonical_expr,
    discriminant_form,
    lattice_make,
    mirror_check,
    nikulin_triple,
)
from .registry import (
    Registry,
    RegistryError,
    computed_specs,
    default_registry_path,
    match_fibers,
    parse_lambda,
    parse_registry,
)


class UsageError(Exception):
    pass


class Result:
    def __init__(self, command: str, inputs: dict):
        self.command = command
        self.inputs = inputs
        self.results: dict = {}
        self.checks: list[dict] = []
        self.text: list[str] = []
        self.quiet = False

    def check(self, name: str, expected, actual) -> bool:
        c = replay.Check(name, expected, actual)
        self.checks.append(c.as_dict())
        return c.ok

    def extend(self, report: replay.Report) -> None:
        self.checks.extend(c.as_dict() for c in report.checks)

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def as_json(self) -> str:
        obj = {"command": self.command, "inputs": self.inputs,
               "results": self.results, "checks": self.checks}
        return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=True)

    def as_text(self) -> str:
        lines = list(self.text)
        for c in [] if self.quiet else self.checks:
            mark = "ok" if c["pass"] else "FAIL"
            lines.append(f"[{mark}] {c['name']}: expected {c['expected']}, got {c['actual']}")
        if self.checks:
            n_ok = sum(c["pass"] for c in self.checks)
            lines.append(f"{n_ok}/{len(self.checks)} checks passed")
        return "\n".join(lines)


# --- helpers -------------------------------------------------------------

def _field(q: int) -> Fq:
    if q < 2:
        raise UsageError(f"q = {q} is not a prime power")
    f = factorize(q)
    if len(f) != 1:
        raise UsageError(f"q = {q} is not a prime power")
    (p, r), = f.items()
    return Fq(p, r)


def _registry(args) -> Registry:
    return parse_registry(args.registry or default_registry_path())


def _record(args, name: str):
    try:
        return _registry(args).get(name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc


def _lambda(text: str | None, rec):
    if text is None:
        return None
    return parse_lambda(text, rec.field)


def _fiber_rows(C) -> list[dict]:
    return [
        {"type": f.kind, "place": f.place_str(), "degree": f.degree,
         "vals": [str(v) for v in f.vals], "components": f.components,
         "euler": f.euler, "dynkin": f.dynkin}
        for f in C.fibers
    ]


def _lattice_summary(expr: str) -> dict:
    L = lattice_make(expr)
    F = discriminant_form(L)
    out = {
        "expr": canonical_expr(expr), "rank": L.rank, "det": L.det,
        "signature": list(L.signature), "even": L.is_even(),
        "invariant_factors": list(F.invariant_factors), "l": F.length,
    }
    if L.is_even() and (F.order == 1 or F.is_p_elementary(2)):
        nt = nikulin_triple(L)
        out["delta"] = nt.delta
        out["triple"] = list(nt.triple())
    return out


def _cover_for(rec) -> delsarte.ExponentCover:
    if rec.cover is None:
        raise UsageError(f"surface {rec.name!r} has no Fermat cover")
    n = rec.cover[0]
    W = rec.model()
    for c in delsarte.COVERS.values():
        if c.n == n and c.weierstrass().coeffs == W.coeffs:
            return c
    raise UsageError(f"no built-in cover of degree {n} matches {rec.name!r}")


# --- commands --------------------------------------------------------------

def cmd_lattice_info(args) -> Result:
    res = Result("lattice info", {"expr": args.expr})
    info = _lattice_summary(args.expr)
    res.results = info
    res.text.append(
        f"{info['expr']}: rank {info['rank']}, det {info['det']}, signature {tuple(info['signature'])}, "
        f"A_L = {info['invariant_factors'] or 'trivial'}, l = {info['l']}"
        + (f", delta = {info['delta']}" if "delta" in info else "")
    )
    return res


def cmd_lattice_table1(args) -> Result:
    res = Result("lattice table1", {})
    rep = replay.verify_lattice_table()
    res.results = {"rows": [{"m": m, "triple": list(t), "lattice": e} for m, t, e in replay.LATTICE_TABLE]}
    res.extend(rep)
    return res


def cmd_lattice_mirror(args) -> Result:
    res = Result("lattice mirror", {"t": args.t_expr, "ns_mirror": args.ns_expr})
    ok = mirror_check(args.t_expr, args.ns_expr)
    res.results = {"mirror": ok}
    res.check(f"{args.t_expr} = U + {args.ns_expr}", True, ok)
    return res


def cmd_surface_analyze(args) -> Result:
    rec = _record(args, args.name)
    lam = _lambda(args.lam, rec)
    res = Result("surface analyze", {"name": rec.name, "lambda": args.lam})
    W = rec.model(lam)
    C = fiber_configuration(W)
    L = trivial_lattice(C)
    res.results = {
        "lambda": None if W.param is None else str(W.param),
        "twist_degree": W.twist_degree,
        "fibers": _fiber_rows(C),
        "summary": C.summary(),
        "total_euler": C.total_euler,
        "trivial_lattice": L.expr,
        "trivial_rank": L.rank,
        "registry_form": [str(s) for s in computed_specs(C)],
    }
    res.text.append(f"{rec.name} (lambda = {W.param}): {C.summary()}, e = {C.total_euler}, "
                    f"trivial lattice {L.expr}")
    res.check("Euler number", 12 * W.twist_degree, C.total_euler)
    if lam is None or lam == rec.lam:
        res.check("fibres match registry", [], match_fibers(rec.fibers, C))
    return res


def cmd_surface_scan(args) -> Result:
    rec = _record(args, args.name)
    lams = [parse_lambda(v, rec.field) for v in args.lambdas.split(",") if v.strip()]
    res = Result("surface scan", {"name": rec.name, "lambdas": args.lambdas})
    generic = fiber_configuration(rec.model()).type_counts()
    entries = degeneration_scan(rec.model, lams, generic=generic, threads=args.threads)
    rows = []
    for e in entries:
        rows.append({"lambda": str(e.param), "summary": e.config.summary(),
                     "total_euler": e.config.total_euler, "changed": e.changed, "error": e.error})
        flag = " *" if e.changed else ""
        res.text.append(f"lambda = {e.param}: {e.error or e.config.summary()}{flag}")
    res.results = {"generic": fiber_configuration(rec.model()).summary(), "scan": rows}
    return res


def _check_congruence(n: int, F: Fq) -> None:
    if (F.q - 1) % n or n % F.p == 0:
        raise UsageError(f"need q = 1 mod n and p not dividing n (n={n}, q={F.q})")


def cmd_zeta_fermat(args) -> Result:
    F = _field(args.q)
    _check_congruence(args.n, F)
    res = Result("zeta fermat", {"n": args.n, "q": args.q})
    count = delsarte.fermat_count(args.n, F, threads=args.threads)
    H = delsarte.jacobi_histogram(F, args.n, threads=args.threads)
    chars = delsarte.char_group(args.n)
    s = delsarte.orbit_sum(F, chars, H)
    pred = 1 + F.q + F.q**2 + s
    res.results = {"count": count, "jacobi_sum_total": s, "prediction": pred,
                   "characters": len(chars)}
    res.text.append(f"#S_{args.n}(F_{F.q}) = {count}; 1 + q + q^2 + sum j = {pred}")
    res.check("brute force = Weil prediction", pred, count)
    norms = all(
        delsarte.jacobi_from_histogram(H, a) * delsarte.jacobi_from_histogram(H, a).complex_conjugate()
        == delsarte.CycInt.from_int(args.n, F.q**2)
        for a in chars
    )
    res.check("|j(alpha)|^2 = q^2 for all alpha", True, norms)
    return res


def cmd_zeta_k3(args) -> Result:
    rec = _record(args, args.name)
    cover = _cover_for(rec)
    F = _field(args.q) if args.q else Fq(cover.smallest_q)
    _check_congruence(cover.n, F)
    res = Result("zeta k3", {"name": rec.name, "q": F.q})
    rep = delsarte.zeta_k3(cover, F, threads=args.threads)
    Z = rep.zeta
    res.results = {
        "n": Z.n, "rho": Z.rho, "P": list(Z.P),
        "characters": [list(c.triple) for c in Z.chars],
        "trace": Z.trace, "count": rep.count, "prediction": Z.predicted_count(),
    }
    res.text.append(f"{rec.name}: n = {Z.n}, q = {F.q}, rho = {Z.rho}, orbit of {cover.orbit_rep}")
    res.text.append("P(T) = " + " ".join(f"{c:+d}T^{i}" for i, c in enumerate(Z.P) if c))
    res.check("deg P", 22, Z.degree())
    res.check("point count = 1 + q^2 + trace", Z.predicted_count(), rep.count)
    return res


def cmd_count_fermat(args) -> Result:
    F = _field(args.q)
    res = Result("count fermat", {"n": args.n, "q": args.q})
    count = delsarte.fermat_count(args.n, F, threads=args.threads)
    res.results = {"count": count}
    res.text.append(f"#S_{args.n}(F_{F.q}) = {count}")
    return res


def cmd_count_surface(args) -> Result:
    rec = _record(args, args.name)
    F = _field(args.q)
    res = Result("count surface", {"name": rec.name, "q": F.q})
    count = delsarte.surface_count(rec.model(), None, F, threads=args.threads)
    res.results = {"count": count}
    res.text.append(f"#{rec.name}(F_{F.q}) = {count}")
    return res


def cmd_replay_hurwitz(args) -> Result:
    res = Result("replay hurwitz", {"genus": args.genus, "degree": args.degree, "ram": args.ram})
    try:
        h = replay.hurwitz_feasible(args.genus, args.degree, args.ram)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    res.results = {"feasible": h.feasible, "quotient_genus": h.quotient_genus}
    res.text.append(str(h))
    return res


def cmd_verify_all(args) -> Result:
    res = Result("verify all", {"registry": args.registry or "default"})
    reports = replay.acceptance_reports(_registry(args), threads=args.threads)
    for rep in reports:
        res.extend(rep)
        res.text.append(f"{rep.title}: {'ok' if rep.ok else 'FAIL'} ({len(rep.checks)} checks)")
        if args.verbose or not rep.ok:
            res.text.extend("  " + line for line in rep.lines() if args.verbose or line.startswith("[FAIL"))
    res.results = {"sections": [{"title": r.title, "checks": len(r.checks), "pass": r.ok}
                                for r in reports]}
    res.quiet = True
    return res


# --- parser ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # subcommands repeat the flags with suppressed defaults so they do not
    # overwrite values given before the subcommand
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    g = _Parser(add_help=False)
    g.add_argument("--registry", default=d(None), help="surface registry file (default: shipped registry)")
    g.add_argument("--json", action="store_true", default=d(False), help="emit one JSON object")
    g.add_argument("--threads", type=int, default=d(1), help="threads for counting kernels")
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    p = _Parser(prog="k3verify", description="Exact verification of K3 lattice, fibration and zeta data.",
                parents=[_global_flags(suppress=False)])
    sub = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    lat = sub.add_parser("lattice", parents=[common]).add_subparsers(dest="action", required=True)
    x = lat.add_parser("info", parents=[common])
    x.add_argument("expr")
    x.set_defaults(fn=cmd_lattice_info)
    lat.add_parser("table1", parents=[common]).set_defaults(fn=cmd_lattice_table1)
    x = lat.add_parser("mirror", parents=[common])
    x.add_argument("t_expr")
    x.add_argument("ns_expr")
    x.set_defaults(fn=cmd_lattice_mirror)

    srf = sub.add_parser("surface", parents=[common]).add_subparsers(dest="action", required=True)
    x = srf.add_parser("analyze", parents=[common])
    x.add_argument("name")
    x.add_argument("--lambda", dest="lam")
    x.set_defaults(fn=cmd_surface_analyze)
    x = srf.add_parser("scan", parents=[common])
    x.add_argument("name")
    x.add_argument("--lambdas", required=True)
    x.set_defaults(fn=cmd_surface_scan)

    zeta = sub.add_parser("zeta", parents=[common]).add_subparsers(dest="action", required=True)
    x = zeta.add_parser("fermat", parents=[common])
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--q", type=int, required=True)
    x.set_defaults(fn=cmd_zeta_fermat)
    x = zeta.add_parser("k3", parents=[common])
    x.add_argument("name")
    x.add_argument("--q", type=int)
    x.set_defaults(fn=cmd_zeta_k3)

    cnt = sub.add_parser("count", parents=[common]).add_subparsers(dest="action", required=True)
    x = cnt.add_parser("fermat", parents=[common])
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--q", type=int, required=True)
    x.set_defaults(fn=cmd_count_fermat)
    x = cnt.add_parser("surface", parents=[common])
    x.add_argument("name")
    x.add_argument("--q", type=int, required=True)
    x.set_defaults(fn=cmd_count_surface)

    rp = sub.add_parser("replay", parents=[common]).add_subparsers(dest="action", required=True)
    x = rp.add_parser("hurwitz", parents=[common])
    x.add_argument("--genus", type=int, required=True)
    x.add_argument("--degree", type=int, required=True)
    x.add_argument("--ram", type=int, required=True)
    x.set_defaults(fn=cmd_replay_hurwitz)

    vf = sub.add_parser("verify", parents=[common]).add_subparsers(dest="action", required=True)
    x = vf.add_parser("all", parents=[common])
    x.add_argument("--verbose", action="store_true", help="list every check")
    x.set_defaults(fn=cmd_verify_all)
    return p


def dispatch(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        res = args.fn(args)
    except UsageError as exc:
        print(f"k3verify: error: {exc}", file=sys.stderr)
        return 2
    except (RegistryError, LatticeError, FibrationError, delsarte.DelsarteError, OSError) as exc:
        print(f"k3verify: error: {exc}", file=sys.stderr)
        return 2
    print(res.as_json() if args.json else res.as_text(), file=out)
    return 0 if res.ok else 1


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
