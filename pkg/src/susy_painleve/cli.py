"""Batch command-line interface.

Subcommands: susy (partner potentials), p4 / p5 (Painleve solutions with
residual certification), cs (coherent states).  Every emitted file starts
with a header block recording the full input configuration; exit codes
are 0 success, 2 singular/degenerate input, 3 usage error, 4 residual
above tolerance.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import painleve4, painleve5, susy
from .coherent import (
    CoherentStateSpec,
    SpectrumSpec,
    build_cs,
    cs_displacement_iso_diagnosis,
    measure_moment_check,
    reproducing_kernel,
)
from .errors import (
    AnnihilatedSeed,
    CoefficientPole,
    DegenerateDenominator,
    DivergentSeriesError,
    DomainError,
    ExcludedEnergy,
    ForbiddenW0,
    NegativeParameter,
    NonLadderedChain,
    PoleError,
    SingularPoint,
    SingularTransform,
)
from .schrodinger import SeedSolution, SusyChain, SystemSpec, ladder_chain

EXIT_OK = 0
EXIT_SINGULAR = 2
EXIT_USAGE = 3
EXIT_VERIFY = 4

_SINGULAR_ERRORS = (
    SingularTransform,
    AnnihilatedSeed,
    ExcludedEnergy,
    ForbiddenW0,
    NegativeParameter,
    DegenerateDenominator,
    NonLadderedChain,
    PoleError,
    SingularPoint,
    CoefficientPole,
    DivergentSeriesError,
    DomainError,
)


@dataclass
class RunConfig:
    """Tolerances, grids and output knobs shared by all subcommands."""

    series_tol: float = 1e-14
    residual_tol: float = 1e-8
    quadrature_tol: float = 1e-10
    grid_ho: str = "-5:5:501"
    grid_radial: str = "0.1:16:321"
    out_format: str = "csv"
    threads: int = 1

    def validate(self):
        if min(self.series_tol, self.residual_tol, self.quadrature_tol) <= 0:
            raise DomainError("tolerances must be positive")
        if self.threads < 1:
            raise DomainError("parallelism degree must be >= 1")


def parse_complex(text):
    """Parse the shell-safe a+bi form (also plain reals and 'i')."""
    s = text.strip().replace(" ", "")
    s = re.sub(r"(?<![0-9.eE+-])i\b", "1i", s)  # bare i -> 1i
    s = re.sub(r"([+-])i\b", r"\g<1>1i", s)
    s = s.replace("i", "j")
    try:
        return complex(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse complex value {text!r}") from exc


def format_complex(z):
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def parse_grid(text):
    """'a:b:n' -> n uniformly spaced points from a to b."""
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"grid must be a:b:n, got {text!r}") from exc
    if n < 2:
        raise argparse.ArgumentTypeError("grid needs at least 2 points")
    return np.linspace(lo, hi, n)


def parse_range(text):
    try:
        lo, hi = text.split(":")
        return range(int(lo), int(hi) + 1)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"range must be a:b, got {text!r}") from exc


def load_config(path):
    cfg = RunConfig()
    if path is None:
        cfg.threads = int(os.environ.get("SUSY_PAINLEVE_THREADS", cfg.threads))
        return cfg
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if not hasattr(cfg, key):
                raise DomainError(f"unknown config key {key!r}")
            current = getattr(cfg, key)
            if isinstance(current, float):
                setattr(cfg, key, float(value))
            elif isinstance(current, int):
                setattr(cfg, key, int(value))
            else:
                setattr(cfg, key, value)
    cfg.threads = int(os.environ.get("SUSY_PAINLEVE_THREADS", cfg.threads))
    cfg.validate()
    return cfg


def parallel_map(fn, xs, threads):
    """Grid evaluation, parallel across points, results in input order."""
    if threads <= 1:
        return [fn(x) for x in xs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, xs))


def write_table(path, header, columns, rows, out_format):
    """CSV with a '# key=value' header block, or the JSON mirror."""
    lines = []
    if out_format == "json":
        payload = {"config": header, "columns": columns, "rows": [list(r) for r in rows]}
        text = json.dumps(payload, indent=1)
    else:
        for key, value in header.items():
            lines.append(f"# {key}={value}")
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(repr(float(v)) for v in row))
        text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _header(cfg, **kw):
    head = {
        "series_tol": cfg.series_tol,
        "residual_tol": cfg.residual_tol,
        "quadrature_tol": cfg.quadrature_tol,
    }
    head.update(kw)
    return head


def _build_system(args):
    if args.system in ("ho", "harmonic"):
        return SystemSpec("harmonic")
    if args.system in ("radial", "ro"):
        return SystemSpec("radial", j=args.j)
    if args.system == "free":
        return SystemSpec("free")
    if args.system == "inverted":
        return SystemSpec("inverted")
    raise DomainError(f"unknown system {args.system!r}")


def _seed_from(system, eps, nu, lam):
    if lam is not None:
        return SeedSolution(system, eps, mix=lam)
    if nu is not None:
        return SeedSolution(system, eps, nu=nu)
    return SeedSolution(system, eps)


def cmd_susy(args, cfg):
    system = _build_system(args)
    grid = args.grid if args.grid is not None else parse_grid(
        cfg.grid_radial if system.kind == "radial" else "-5:5:501"
    )
    if system.kind == "inverted":
        pp, _tmap = susy.inverted_complex_susy(args.eps, window=(grid[0], grid[-1]))
        vals = parallel_map(pp.potential, grid, cfg.threads)
        rows = [(x, np.real(v), np.imag(v)) for x, v in zip(grid, vals)]
        head = _header(cfg, command="susy", system="inverted", eps=format_complex(args.eps),
                       singularities=list(pp.singularities))
        write_table(args.out, head, ["x", "re_V2", "im_V2"], rows, args.format or cfg.out_format)
        return EXIT_OK
    if args.confluent_diff:
        seed = _seed_from(system, args.eps, args.nu, getattr(args, "lam", None))
        D = args.D if args.D is not None else susy.free_particle_confluent_D(args.eps, args.x0)
        pp = susy.confluent_differential(seed, D, window=(grid[0], grid[-1]))
        vals = parallel_map(pp.potential, grid, cfg.threads)
        rows = [(x, np.real(v), np.imag(v)) for x, v in zip(grid, vals)]
        head = _header(cfg, command="susy", mode="confluent_differential",
                       eps=format_complex(args.eps), D=D, x0=args.x0)
        write_table(args.out, head, ["x", "re_V", "im_V"], rows, args.format or cfg.out_format)
        return EXIT_OK
    if args.confluent:
        if args.seed_state is not None:
            seed = susy.ho_eigenstate(args.seed_state)
        else:
            seed = _seed_from(system, args.eps, args.nu, getattr(args, "lam", None))
        pp = susy.second_order_confluent(seed, args.w0, args.x0, window=(grid[0], grid[-1]))
        vals = parallel_map(pp.potential, grid, cfg.threads)
        rows = [(x, np.real(v), np.imag(v)) for x, v in zip(grid, vals)]
        head = _header(cfg, command="susy", mode="confluent_integral", w0=args.w0, x0=args.x0)
        write_table(args.out, head, ["x", "re_V", "im_V"], rows, args.format or cfg.out_format)
        return EXIT_OK
    seeds = []
    eps_list = [args.eps1, args.eps2, args.eps3]
    nu_list = [args.nu1 if args.nu1 is not None else args.nu, args.nu2, args.nu3]
    lam_list = [args.lam, args.lam2, args.lam3]
    for eps, nu, lam in zip(eps_list, nu_list, lam_list):
        if eps is None:
            continue
        seeds.append(_seed_from(system, eps, nu, lam))
    if not seeds:
        raise DomainError("give at least --eps1")
    if len(seeds) == 1 and args.k > 1:
        chain = ladder_chain(seeds[0], args.k)
    elif len(seeds) == 1:
        chain = SusyChain(members=seeds, laddered=True)
    else:
        chain = SusyChain.from_seeds(seeds)
    pp = susy.kth_order_wronskian(chain, window=(grid[0], grid[-1]))
    vals = parallel_map(pp.potential, grid, cfg.threads)
    new_state = susy.transformed_state(chain, ("new", chain.k))
    psis = parallel_map(lambda x: new_state.jet(x)[0], grid, cfg.threads)
    rows = [
        (x, np.real(v), np.imag(v), np.real(p), np.imag(p))
        for x, v, p in zip(grid, vals, psis)
    ]
    head = _header(
        cfg, command="susy", system=args.system, k=chain.k,
        energies=";".join(format_complex(e) for e in chain.energies),
        laddered=chain.laddered, singularities=list(pp.singularities),
    )
    write_table(args.out, head, ["x", "re_V", "im_V", "re_psi_new", "im_psi_new"],
                rows, args.format or cfg.out_format)
    return EXIT_OK


def cmd_p4(args, cfg):
    tol = args.tol if args.tol is not None else cfg.residual_tol
    if args.verify_only:
        if not args.g_rational:
            raise DomainError("--verify-only requires --g-rational")
        grid = np.linspace(-5, 5, 101)
        res = painleve4.residual_p4_of_g(lambda x: (-2.0 * x, -2.0, 0.0), 0.0, -2.0, grid)
        print(f"builtin rational oracle g=-2x at (a,b)=(0,-2): residual {res:.3e}")
        return EXIT_OK if res <= 1e-13 else EXIT_VERIFY
    system = SystemSpec("harmonic")
    lam = args.lam
    if lam is None and args.kappa is not None:
        lam = complex(args.lam_real or 0.0, args.kappa)
    seed = _seed_from(system, args.eps1, args.nu, lam)
    if getattr(seed, "is_complex", False) and not args.allow_complex:
        raise DomainError("complex seed requires --allow-complex")
    chain = ladder_chain(seed, args.k)
    grid = args.grid if args.grid is not None else parse_grid("-5:5:501")
    sol = painleve4.build_g(chain, args.family, window=(grid[0], grid[-1]),
                            check=not args.allow_complex)
    res = painleve4.residual_p4(sol, grid)
    vals = parallel_map(lambda x: sol.g_jet(x)[0], grid, cfg.threads)
    rows = [(x, np.real(g), np.imag(g)) for x, g in zip(grid, vals)]
    head = _header(
        cfg, command="p4", k=args.k, eps1=format_complex(args.eps1),
        family=args.family, a=str(sol.a), b=str(sol.b),
        hierarchy=sol.hierarchy, max_residual=res, tol=tol,
    )
    write_table(args.out, head, ["x", "re_g", "im_g"], rows, args.format or cfg.out_format)
    return EXIT_OK if res <= tol else EXIT_VERIFY


def cmd_p5(args, cfg):
    tol = args.tol if args.tol is not None else 1e-6
    system = SystemSpec("radial", j=args.j)
    lam = args.lam
    seed = _seed_from(system, args.eps1, args.nu, lam)
    if getattr(seed, "is_complex", False) and not args.allow_complex:
        raise DomainError("complex seed requires --allow-complex")
    chain = ladder_chain(seed, args.k)
    zgrid = args.zgrid if args.zgrid is not None else parse_grid("0.1:16:321")
    sol = painleve5.build_w(chain, args.family, check=not args.allow_complex)
    res = painleve5.residual_p5(sol, zgrid)
    vals = parallel_map(lambda z: sol.w_jet(z)[0], zgrid, cfg.threads)
    rows = [(z, np.real(w), np.imag(w)) for z, w in zip(zgrid, vals)]
    a, b, c, d = sol.params
    head = _header(
        cfg, command="p5", j=args.j, k=args.k, eps1=format_complex(args.eps1),
        family=args.family, a=str(a), b=str(b), c=str(c), d=str(d),
        hierarchy=sol.hierarchy, max_residual=res, tol=tol,
    )
    write_table(args.out, head, ["z", "re_w", "im_w"], rows, args.format or cfg.out_format)
    return EXIT_OK if res <= tol else EXIT_VERIFY


def cmd_cs(args, cfg):
    spectrum = SpectrumSpec(epsilon0=args.eps0, k=args.k, E0=args.e0)
    if args.moment_check is not None:
        lhs, rhs = measure_moment_check(args.moment_check, args.n, spectrum)
        rel = abs(lhs - float(rhs)) / max(1e-300, abs(float(rhs)))
        print(f"moment n={args.n} subspace={args.moment_check}: "
              f"lhs={lhs!r} rhs={float(rhs)!r} rel={rel:.3e}")
        return EXIT_OK
    if args.subspace == "iso" and args.method == "displacement":
        report = cs_displacement_iso_diagnosis(args.z, spectrum)
        print(f"divergent={report.divergent} optimal_terms={report.terms_used} "
              f"partial_sum={format_complex(report.partial_sum)} "
              f"growth_onset_n={report.growth_index}")
        return EXIT_OK
    spec = CoherentStateSpec(args.subspace, args.method, args.z, spectrum)
    state = build_cs(spec)
    probs = state.probabilities()
    idx = args.probabilities if args.probabilities is not None else range(len(state.coeffs))
    rows = []
    for n in idx:
        if n >= len(state.coeffs):
            break
        c = state.coeffs[n]
        rows.append((n, np.real(c), np.imag(c), probs[n]))
    head = _header(
        cfg, command="cs", subspace=args.subspace, method=args.method,
        z=format_complex(args.z), eps0=args.eps0, k=args.k, E0=args.e0,
        norm=state.norm(),
    )
    if args.kernel_with is not None:
        head["kernel"] = format_complex(
            reproducing_kernel(args.subspace, args.method, args.z, args.kernel_with, spectrum)
        )
    write_table(args.out, head, ["n", "re_c", "im_c", "p"], rows, args.format or cfg.out_format)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="susy-painleve", description=__doc__)
    parser.add_argument("--config", default=None, help="key=value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("susy", help="SUSY partner potentials")
    p.add_argument("--system", required=True,
                   choices=["ho", "harmonic", "radial", "ro", "free", "inverted"])
    p.add_argument("--j", type=float, default=0.0)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--eps", type=parse_complex, default=None)
    p.add_argument("--eps1", type=parse_complex, default=None)
    p.add_argument("--eps2", type=parse_complex, default=None)
    p.add_argument("--eps3", type=parse_complex, default=None)
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--nu1", type=float, default=None)
    p.add_argument("--nu2", type=float, default=None)
    p.add_argument("--nu3", type=float, default=None)
    p.add_argument("--lam", type=parse_complex, default=None)
    p.add_argument("--lam2", type=parse_complex, default=None)
    p.add_argument("--lam3", type=parse_complex, default=None)
    p.add_argument("--confluent", action="store_true")
    p.add_argument("--confluent-diff", dest="confluent_diff", action="store_true")
    p.add_argument("--seed-state", dest="seed_state", type=int, default=None)
    p.add_argument("--w0", type=float, default=None)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--D", type=float, default=None)
    p.add_argument("--grid", type=parse_grid, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default=None)
    p.set_defaults(func=cmd_susy)

    p = sub.add_parser("p4", help="Painleve IV solutions")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--eps1", type=parse_complex, default=0.0)
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--lam", type=parse_complex, default=None)
    p.add_argument("--lam-real", dest="lam_real", type=float, default=None)
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--family", choices=["i", "ii", "iii"], default="i")
    p.add_argument("--grid", type=parse_grid, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--allow-complex", dest="allow_complex", action="store_true")
    p.add_argument("--verify-only", dest="verify_only", action="store_true")
    p.add_argument("--g-rational", dest="g_rational", action="store_true")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default=None)
    p.set_defaults(func=cmd_p4)

    p = sub.add_parser("p5", help="Painleve V solutions")
    p.add_argument("--j", type=float, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--eps1", type=parse_complex, required=True)
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--lam", type=parse_complex, default=None)
    p.add_argument("--family", type=int, default=1, choices=[1, 2, 3, 4, 5, 6])
    p.add_argument("--zgrid", type=parse_grid, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--allow-complex", dest="allow_complex", action="store_true")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default=None)
    p.set_defaults(func=cmd_p5)

    p = sub.add_parser("cs", help="Painleve IV coherent states")
    p.add_argument("--subspace", choices=["iso", "new"], default="iso")
    p.add_argument("--method", choices=["annihilation", "displacement", "linearized"],
                   default="annihilation")
    p.add_argument("--z", type=parse_complex, default=0.0)
    p.add_argument("--eps0", type=float, default=-2.5)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--e0", type=float, default=0.5)
    p.add_argument("--probabilities", type=parse_range, default=None)
    p.add_argument("--kernel-with", dest="kernel_with", type=parse_complex, default=None)
    p.add_argument("--moment-check", dest="moment_check", default=None,
                   choices=["iso_annihilation", "new_displacement", "new_linearized"])
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default=None)
    p.set_defaults(func=cmd_cs)
    return parser


_DASH_VALUE_FLAGS = {
    "--grid", "--zgrid", "--eps", "--eps1", "--eps2", "--eps3",
    "--lam", "--lam2", "--lam3", "--z", "--kernel-with", "--w0", "--D",
    "--x0", "--eps0",
}


def _merge_dash_values(argv):
    """Join '--flag -value' into '--flag=-value' so argparse accepts
    grids and complex numbers with leading minus signs."""
    out = []
    skip = False
    for i, tok in enumerate(argv):
        if skip:
            skip = False
            continue
        if tok in _DASH_VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            skip = True
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_dash_values(list(argv)))
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except _SINGULAR_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR


if __name__ == "__main__":
    sys.exit(main())
