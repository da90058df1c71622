"""Command-line interface: ``singpencil {solve,nrank,gen-kcf,poly2,double-eig,tzeros}``.

Exit codes: 0 when the rank diagnosis is consistent, 2 for a likely
underestimated normal rank, 3 for a possible overestimate and 1 on any
input or numerical error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from . import applications as apps
from .classify import ClassifierConfig, classify_spectrum
from .kcf import KcfSpec, generate
from .matio import matrix_from_json, read_json, read_matrix, read_pencil, write_json, write_pencil
from .nrank import Verdict, diagnose_rank, estimate_normal_rank
from .pencil import to_tall
from .report import build_report, render
from .solvers import DegenerateSelection, Method, SolverConfig, solve, untranspose

EXIT_OK, EXIT_ERROR, EXIT_UNDER, EXIT_OVER = 0, 1, 2, 3
_EXIT = {Verdict.CONSISTENT: EXIT_OK, Verdict.LIKELY_UNDERESTIMATE: EXIT_UNDER,
         Verdict.POSSIBLE_OVERESTIMATE: EXIT_OVER}


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1; exit code 2 is reserved for the rank diagnosis
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    raw = os.environ.get("SINGPENCIL_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise CliError(f"SINGPENCIL_SEED must be an integer, got {raw!r}") from None


def _nrank_arg(text: str):
    if text == "auto":
        return None
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer or 'auto'") from None
    if v < 0:
        raise argparse.ArgumentTypeError("normal rank must be nonnegative")
    return v


def _add_solver_opts(sp, method=True):
    if method:
        sp.add_argument("--method", default="project", choices=[m.value for m in Method])
    sp.add_argument("--delta", type=float, default=SolverConfig.delta)
    sp.add_argument("--delta1", type=float, default=ClassifierConfig.delta1)
    sp.add_argument("--delta2", type=float, default=ClassifierConfig.delta2)
    sp.add_argument("--xi1", type=float, default=ClassifierConfig.xi1)
    sp.add_argument("--xi2", type=float, default=ClassifierConfig.xi2)
    sp.add_argument("--tau", type=float, default=SolverConfig.tau)
    sp.add_argument("--seed", type=int, default=None,
                    help="RNG seed (default: $SINGPENCIL_SEED or 0)")
    sp.add_argument("--format", default="json", choices=["json", "table", "csv"])


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="singpencil",
                 description="Regular eigenvalues of singular matrix pencils.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="eigenvalues of A - lambda B from Matrix Market files")
    sp.add_argument("A")
    sp.add_argument("B")
    sp.add_argument("--nrank", type=_nrank_arg, default=None, metavar="N|auto")
    sp.add_argument("--trials", type=int, default=3)
    sp.add_argument("--expected-regular", type=int, default=None,
                    help="known size of the regular part, sharpens the overestimate check")
    sp.add_argument("--keep-vectors", action="store_true",
                    help="include right/left eigenvectors in JSON output")
    sp.add_argument("--timings", action="store_true",
                    help="record wall-clock timings (makes output non-reproducible)")
    _add_solver_opts(sp)

    sp = sub.add_parser("nrank", help="estimate the normal rank")
    sp.add_argument("A")
    sp.add_argument("B")
    sp.add_argument("--trials", type=int, default=3)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--format", default="text", choices=["text", "json"])

    sp = sub.add_parser("gen-kcf", help="random pencil with a prescribed Kronecker structure")
    sp.add_argument("spec", help="JSON file with keys right, left, jordan, infinite")
    sp.add_argument("-o", "--out", required=True)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--complex", action="store_true", help="complex equivalence transforms")

    sp = sub.add_parser("poly2", help="roots of two bivariate polynomials")
    sp.add_argument("rep", help="JSON with matrices A1..C2 or coefficient lists p1, p2")
    sp.add_argument("--nrank", type=_nrank_arg, default=None, metavar="N|auto")
    _add_solver_opts(sp, method=False)

    sp = sub.add_parser("double-eig", help="lambda where A + lambda B has a double eigenvalue")
    sp.add_argument("A")
    sp.add_argument("B")
    _add_solver_opts(sp, method=False)

    sp = sub.add_parser("tzeros", help="transmission zeros of (A, B, C, D)")
    sp.add_argument("system", help="JSON with matrices A, B, C, D")
    sp.add_argument("--nrank", type=_nrank_arg, default=None, metavar="N|auto")
    _add_solver_opts(sp, method=False)
    return ap


def _configs(args, method: str = "project") -> tuple[SolverConfig, ClassifierConfig]:
    seed = args.seed if args.seed is not None else _default_seed()
    cfg = SolverConfig(delta=args.delta, tau=args.tau, method=getattr(args, "method", method),
                       seed=seed, keep_vectors=getattr(args, "keep_vectors", False))
    ccfg = ClassifierConfig(args.delta1, args.delta2, args.xi1, args.xi2)
    return cfg, ccfg


def _config_echo(cfg: SolverConfig, ccfg: ClassifierConfig, **extra) -> dict:
    out = {"delta": cfg.delta, "tau": cfg.tau, "seed": cfg.seed, "delta1": ccfg.delta1,
           "delta2": ccfg.delta2, "xi1": ccfg.xi1, "xi2": ccfg.xi2}
    out.update(extra)
    return out


def _complex_list(values) -> list[dict]:
    return [{"re": float(np.real(z)), "im": float(np.imag(z))} for z in values]


def cmd_solve(args, out) -> int:
    cfg, ccfg = _configs(args)
    t = {}
    t0 = time.perf_counter()
    pencil = read_pencil(args.A, args.B)
    tall, transposed = to_tall(pencil)
    t["load"] = 1e3 * (time.perf_counter() - t0)
    rng = cfg.rng()
    t0 = time.perf_counter()
    if args.nrank is None:
        nrank = estimate_normal_rank(tall, trials=args.trials, rng=rng).nrank
        source = "estimated"
    else:
        nrank = args.nrank
        source = "override"
    t["nrank"] = 1e3 * (time.perf_counter() - t0)
    if nrank > tall.m:
        raise CliError(f"normal rank {nrank} exceeds min(n, m) = {tall.m}")
    k = tall.n - nrank
    t0 = time.perf_counter()
    fallback = False
    try:
        spectrum = solve(tall, k, cfg, rng)
    except DegenerateSelection:
        # row/column selection hit a singular subpencil; use random frames instead
        print("singpencil solve: selected subpencil is singular, using project",
              file=sys.stderr)
        spectrum = solve(tall, k, replace(cfg, method=Method.PROJECT), rng)
        fallback = True
    t["solve"] = 1e3 * (time.perf_counter() - t0)
    if transposed:
        spectrum = untranspose(spectrum)
    t0 = time.perf_counter()
    split = classify_spectrum(spectrum, ccfg)
    diagnosis = diagnose_rank(spectrum, expected_regular=args.expected_regular)
    t["classify"] = 1e3 * (time.perf_counter() - t0)
    report = build_report(spectrum, split, diagnosis, source,
                          timings_ms=t if args.timings else None,
                          config=_config_echo(cfg, ccfg, nrank=nrank, trials=args.trials,
                                              fallback=fallback),
                          keep_vectors=args.keep_vectors)
    out.write(render(report, args.format))
    return _EXIT[diagnosis.verdict]


def cmd_nrank(args, out) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    est = estimate_normal_rank(read_pencil(args.A, args.B), trials=args.trials,
                               rng=np.random.default_rng(seed))
    if args.format == "json":
        out.write(json.dumps({"nrank": est.nrank, "trials": est.trials,
                              "per_trial_ranks": est.per_trial_ranks}) + "\n")
    else:
        out.write(f"{est.nrank}\n")
    return EXIT_OK


def cmd_gen_kcf(args, out) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        spec = KcfSpec.from_dict(read_json(args.spec))
    except (KeyError, TypeError) as exc:
        raise CliError(f"invalid KCF spec: {exc}") from exc
    if spec.n_rows == 0 or spec.n_cols == 0:
        raise CliError("KCF spec describes an empty pencil")
    g = generate(spec, np.random.default_rng(seed), complex_transforms=args.complex)
    outdir = Path(args.out)
    write_pencil(outdir, g.pencil)
    truth = {
        "spec": spec.to_dict(),
        "nrank": g.nrank,
        "shape": [spec.n_rows, spec.n_cols],
        "true_eigenvalues": [
            {"re": None if v.is_infinite else float(v.value.real),
             "im": None if v.is_infinite else float(v.value.imag),
             "infinite": bool(v.is_infinite), "multiplicity": int(mult)}
            for v, mult in g.true_eigenvalues
        ],
        "seed": seed,
    }
    write_json(outdir / "truth.json", truth)
    out.write(f"wrote {outdir / 'A.mtx'}, {outdir / 'B.mtx'}, {outdir / 'truth.json'}\n")
    return EXIT_OK


def load_rep(path) -> apps.DeterminantalRep:
    """Rep JSON holds either matrices ``A1..C2`` or ``p1``/``p2`` as ``[[i, j, c], ...]``."""
    d = read_json(path)
    if "p1" in d and "p2" in d:
        polys = []
        for key in ("p1", "p2"):
            coeffs = {}
            for item in d[key]:
                i, j, c = item[0], item[1], item[2]
                coeffs[(int(i), int(j))] = complex(*c) if isinstance(c, list) else float(c)
            polys.append(coeffs)
        return apps.uniform_rep(*polys, degree=d.get("degree"))
    return apps.DeterminantalRep.from_dict(d)


def _write_values(out, fmt: str, header: dict, pairs: list[tuple[str, list]]):
    """``pairs`` maps a column name to a list of complex values of equal length."""
    if fmt == "json":
        body = dict(header)
        body.update({name: _complex_list(vals) for name, vals in pairs})
        out.write(json.dumps(body, indent=2, allow_nan=False) + "\n")
        return
    names = [name for name, _ in pairs]
    rows = list(zip(*(vals for _, vals in pairs)))
    if fmt == "csv":
        out.write(",".join(f"{n}_re,{n}_im" for n in names) + "\n")
        for r in rows:
            out.write(",".join(f"{repr(float(np.real(z)))},{repr(float(np.imag(z)))}"
                               for z in r) + "\n")
        return
    for r in rows:
        out.write("  ".join(f"{n} = {_fmt_complex(z)}" for n, z in zip(names, r)) + "\n")


def _fmt_complex(z) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.10g}"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.10g} {sign} {abs(z.imag):.10g}i"


def cmd_poly2(args, out) -> int:
    cfg, ccfg = _configs(args)
    rep = load_rep(args.rep)
    roots = apps.solve_bivariate_lambda(rep, cfg, ccfg, nrank=args.nrank)
    roots.sort(key=lambda r: (round(r.lam.real, 8), round(r.lam.imag, 8)))
    if args.format == "json":
        body = {"count": len(roots), "roots": [
            {"lambda": {"re": r.lam.real, "im": r.lam.imag},
             "mu": {"re": r.mu.real, "im": r.mu.imag},
             "residuals": list(r.residuals)} for r in roots]}
        out.write(json.dumps(body, indent=2, allow_nan=False) + "\n")
    else:
        _write_values(out, args.format, {},
                      [("lambda", [r.lam for r in roots]), ("mu", [r.mu for r in roots])])
    return EXIT_OK


def _sorted_complex(values) -> list[complex]:
    return sorted((complex(v) for v in values), key=lambda z: (z.real, z.imag))


def cmd_double_eig(args, out) -> int:
    cfg, ccfg = _configs(args)
    A, B = read_matrix(args.A), read_matrix(args.B)
    lams = _sorted_complex(apps.find_double_eigs(A, B, cfg, ccfg))
    _write_values(out, args.format, {"count": len(lams)}, [("lambda", lams)])
    return EXIT_OK


def cmd_tzeros(args, out) -> int:
    cfg, ccfg = _configs(args)
    d = read_json(args.system)
    try:
        mats = [matrix_from_json(d[key]) for key in ("A", "B", "C")]
    except KeyError as exc:
        raise CliError(f"system file lacks matrix {exc}") from exc
    if "D" in d:
        D = matrix_from_json(d["D"])
    else:
        D = np.zeros((mats[2].shape[0], mats[1].shape[1]))
    zeros = _sorted_complex(apps.transmission_zeros(*mats, D, cfg, ccfg, nrank=args.nrank))
    if args.format == "table":
        out.write(", ".join(_fmt_complex(z) for z in zeros) + "\n")
    else:
        _write_values(out, args.format, {"count": len(zeros)}, [("zeros", zeros)])
    return EXIT_OK


_COMMANDS = {
    "solve": cmd_solve,
    "nrank": cmd_nrank,
    "gen-kcf": cmd_gen_kcf,
    "poly2": cmd_poly2,
    "double-eig": cmd_double_eig,
    "tzeros": cmd_tzeros,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        with threadpool_limits(limits=1):
            return _COMMANDS[args.command](args, out)
    except (CliError, ValueError, OSError, RuntimeError, KeyError) as exc:
        print(f"singpencil {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
