"""Command line front end.

Exit status is 0 on success, 1 for usage errors (bad flags, malformed
expressions, unreadable files) and 2 for numerical or domain errors. Every
error is a single line on stderr starting with ``error:``.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import math
import os
import re
import sys
from pathlib import Path
from typing import Callable, Sequence, TextIO

import numpy as np

from fraccore import matrixop, operators as ops, pde, specfun
from fraccore.errors import FracError
from fraccore.expr import ExprSyntaxError, eval_expression, parse_expression
from fraccore.grid import Grid1D, SampledFunction, make_uniform_grid, read_csv, write_csv

__all__ = ["main", "run_cli"]

TOL_ENV = "FRACCORE_TOL"


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


# {{{ argument helpers


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _grid(text: str) -> Grid1D:
    parts = text.split(",")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except (ValueError, IndexError):
        raise argparse.ArgumentTypeError(f"expected a,b,n, got {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected a,b,n, got {text!r}")
    return make_uniform_grid(a, b, n)


def _horizon(text: str) -> Grid1D:
    parts = text.split(",")
    try:
        t, n = float(parts[0]), int(parts[1])
    except (ValueError, IndexError):
        raise argparse.ArgumentTypeError(f"expected T,n, got {text!r}") from None
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected T,n, got {text!r}")
    return make_uniform_grid(0.0, t, n)


def _series(args: argparse.Namespace) -> specfun.SeriesConfig:
    tol = getattr(args, "tol", None)
    if tol is None:
        env = os.environ.get(TOL_ENV)
        if env:
            try:
                tol = float(env)
            except ValueError:
                raise UsageError(f"{TOL_ENV} must be a number, got {env!r}") from None
    if tol is None:
        return specfun.DEFAULT_SERIES
    if not (math.isfinite(tol) and tol > 0):
        raise UsageError(f"series tolerance must be a positive number, got {tol!r}")
    return specfun.SeriesConfig(tol=tol)


def _sample_expr(text: str, grid: Grid1D) -> SampledFunction:
    e = parse_expression(text)
    return SampledFunction(grid, eval_expression(e, grid.nodes))


def _input_function(args: argparse.Namespace) -> SampledFunction:
    if args.input is not None:
        if args.expr is not None or args.grid is not None:
            raise UsageError("--input excludes --expr and --grid")
        try:
            return read_csv(args.input)
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    if args.expr is None:
        raise UsageError("one of --expr or --input is required")
    if args.grid is None:
        raise UsageError("--expr needs --grid a,b,n")
    return _sample_expr(args.expr, args.grid)


def _emit(text: str, args: argparse.Namespace, out: TextIO) -> None:
    if getattr(args, "output", None):
        try:
            Path(args.output).write_text(text, encoding="utf-8", newline="\n")
        except OSError as exc:
            raise UsageError(f"cannot write {args.output}: {exc.strerror}") from None
    else:
        out.write(text)


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--expr", help="expression in x, sampled on --grid")
    p.add_argument("--grid", type=_grid, help="a,b,n: n intervals on [a, b]")
    p.add_argument("--input", help="x,value CSV instead of --expr")
    p.add_argument("--output", "-o", help="write CSV here instead of stdout")


# }}}


# {{{ commands

DERIV_OPS = (
    "rl", "caputo", "caputo-diffusive", "gl", "marchaud", "riesz", "riesz-feller", "weyl",
    "erdelyi-kober", "caputo-fabrizio", "gc", "grl", "tempered", "conformable", "hausdorff", "jumarie",
)
INTEG_OPS = ("rl", "gl", "tempered", "erdelyi-kober", "riesz")


def _deriv(f: SampledFunction, args: argparse.Namespace) -> SampledFunction:
    a, side, op = args.alpha, args.side, args.op
    table: dict[str, Callable[[], SampledFunction]] = {
        "rl": lambda: ops.rl_derivative(f, a, side),
        "caputo": lambda: ops.caputo_derivative(f, a),
        "caputo-diffusive": lambda: ops.caputo_diffusive(f, a, args.quad_nodes),
        "gl": lambda: ops.gl_derivative(f, a, side, args.memory),
        "marchaud": lambda: ops.marchaud_derivative(f, a, side, args.eps),
        "riesz": lambda: ops.riesz_apply(f, a, "derivative", args.extension),
        "riesz-feller": lambda: ops.riesz_feller_derivative(f, ops.FellerParams(a, args.theta)),
        "weyl": lambda: ops.weyl_derivative(f, a, side),
        "erdelyi-kober": lambda: ops.erdelyi_kober(f, ops.EKParams(args.gamma, a, args.eta), "derivative"),
        "caputo-fabrizio": lambda: ops.caputo_fabrizio(f, a),
        "gc": lambda: ops.general_kernel_derivative(f, a, _kernel(args), "GC"),
        "grl": lambda: ops.general_kernel_derivative(f, a, _kernel(args), "GRL"),
        "tempered": lambda: ops.tempered_apply(f, ops.TemperedParams(a, args.lam), args.tempered_mode, side),
        "conformable": lambda: ops.conformable_derivative(f, a, args.variant),
        "hausdorff": lambda: ops.hausdorff_fractal_derivative(f, a),
        "jumarie": lambda: ops.jumarie_derivative(f, a),
    }
    return table[op]()


def _kernel(args: argparse.Namespace) -> ops.KernelSpec:
    return ops.KernelSpec(args.kernel, beta_s=args.beta_s)


def cmd_deriv(args: argparse.Namespace, out: TextIO) -> None:
    _emit(write_csv(_deriv(_input_function(args), args)), args, out)


def cmd_integ(args: argparse.Namespace, out: TextIO) -> None:
    f = _input_function(args)
    a, side = args.alpha, args.side
    if args.op == "rl":
        g = ops.rl_integral(f, a, side)
    elif args.op == "gl":
        g = ops.gl_integral(f, a, side)
    elif args.op == "tempered":
        g = ops.tempered_apply(f, ops.TemperedParams(a, args.lam), "integ", side)
    elif args.op == "erdelyi-kober":
        g = ops.erdelyi_kober(f, ops.EKParams(args.gamma, a, args.eta), "integral")
    else:
        g = ops.riesz_apply(f, a, "potential")
    _emit(write_csv(g), args, out)


def cmd_mlf(args: argparse.Namespace, out: TextIO) -> None:
    p = specfun.MLParams(args.alpha, args.beta, args.gamma)
    cfg = _series(args)
    if args.gamma != 1.0:
        v = specfun.prabhakar_ml(p, args.x, cfg)
    else:
        v = specfun.mittag_leffler(p, args.x, cfg)
    out.write(f"{v!r}\n")


def cmd_wright(args: argparse.Namespace, out: TextIO) -> None:
    cfg = _series(args)
    if args.aux is not None:
        if args.nu is None:
            raise UsageError("--aux needs --nu")
        v = specfun.wright_auxiliary(args.nu, args.z, args.aux, cfg)
    else:
        if args.lam is None or args.mu is None:
            raise UsageError("wright needs --lam and --mu (or --aux with --nu)")
        v = specfun.wright(args.lam, args.mu, args.z, cfg)
    out.write(f"{v!r}\n")


def cmd_weights(args: argparse.Namespace, out: TextIO) -> None:
    if args.kind == "gl":
        w = specfun.gl_weights(args.alpha, args.n)
    else:
        w = specfun.gl_integral_weights(args.alpha, args.n)
    buf = io.StringIO()
    buf.write("k,weight\n")
    for k, wk in enumerate(w):
        buf.write(f"{k},{float(wk)!r}\n")
    _emit(buf.getvalue(), args, out)


def cmd_strip_solve(args: argparse.Namespace, out: TextIO) -> None:
    if args.grid is None:
        raise UsageError("strip-solve needs --grid a,b,n")
    forcing = _sample_expr(args.forcing, args.grid)
    y = matrixop.solve_linear_fde(args.alpha, args.lam, forcing, args.y0)
    _emit(write_csv(y), args, out)


def _diffusion_problem(args: argparse.Namespace, beta: float) -> pde.DiffusionProblem:
    xg = args.xgrid
    if args.u0 == "delta":
        u0 = pde.delta_initial(xg)
    else:
        u0 = _sample_expr(args.u0, xg)
    return pde.DiffusionProblem(beta, xg, args.tgrid, u0, form=args.form, grading=args.grading)


def _emit_solution(p: pde.DiffusionProblem, u: np.ndarray, args: argparse.Namespace, out: TextIO) -> None:
    if args.stride < 1:
        raise UsageError(f"--stride must be >= 1, got {args.stride}")
    t = p.times()
    keep = np.arange(0, t.size, args.stride)
    if keep[-1] != t.size - 1:
        keep = np.append(keep, t.size - 1)
    _emit(pde.write_solution_csv(t[keep], p.x_grid, u[keep]), args, out)


def cmd_solve_diffusion(args: argparse.Namespace, out: TextIO) -> None:
    p = _diffusion_problem(args, args.beta)
    _emit_solution(p, pde.solve_time_fractional_diffusion(p), args, out)


def cmd_solve_distributed(args: argparse.Namespace, out: TextIO) -> None:
    if args.uniform is not None:
        if args.nodes is not None or args.weights is not None:
            raise UsageError("--uniform excludes --nodes and --weights")
        spec = pde.uniform_order_density(args.uniform)
    else:
        if args.nodes is None or args.weights is None:
            raise UsageError("solve-distributed needs --nodes and --weights, or --uniform N")
        spec = pde.DistributedOrderSpec(args.nodes, args.weights)
    p = _diffusion_problem(args, 1.0)
    _emit_solution(p, pde.solve_distributed_order_diffusion(spec, p), args, out)


def _read_solution(path: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].replace(" ", "") != "t,x,u":
        raise UsageError(f"{path}: expected header 't,x,u'")
    try:
        data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    except ValueError:
        raise UsageError(f"{path}: not a number") from None
    if data.ndim != 2 or data.shape[1] != 3:
        raise UsageError(f"{path}: expected three columns")
    return data[:, 0], data[:, 1], data[:, 2]


def cmd_moments(args: argparse.Namespace, out: TextIO) -> None:
    t, x, u = _read_solution(args.input)
    times, first = np.unique(t, return_index=True)
    nx = int(np.count_nonzero(t == t[0]))
    if t.size != times.size * nx:
        raise UsageError(f"{args.input}: rows are not a full time x space table")
    grid = Grid1D(float(x[0]), float(x[nx - 1]), nx - 1)
    buf = io.StringIO()
    buf.write("t,mass,first,second\n")
    for tk, i in zip(times, first):
        row = SampledFunction(grid, u[i : i + nx])
        mass = math.fsum(row.values) * grid.h
        buf.write(f"{float(tk)!r},{mass!r},{pde.first_moment(row)!r},{pde.second_moment(row)!r}\n")
    _emit(buf.getvalue(), args, out)


# }}}


# {{{ parser


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="fraccore", description="Fractional calculus operators and solvers.")
    parser.add_argument("--tol", type=float, default=None,
                        help=f"series tolerance (default from ${TOL_ENV}, else 1e-14)")
    sub = parser.add_subparsers(dest="command", parser_class=_ArgumentParser, required=True)

    p = sub.add_parser("deriv", help="fractional derivative of a sampled function")
    _add_input(p)
    p.add_argument("--op", choices=DERIV_OPS, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--side", choices=("left", "right"), default="left")
    p.add_argument("--theta", type=float, default=0.0, help="riesz-feller skewness")
    p.add_argument("--lam", type=float, default=0.0, help="tempering rate")
    p.add_argument("--tempered-mode", choices=("deriv", "rl_deriv"), default="deriv")
    p.add_argument("--gamma", type=float, default=0.0, help="erdelyi-kober gamma")
    p.add_argument("--eta", type=float, default=1.0, help="erdelyi-kober eta")
    p.add_argument("--kernel", choices=ops.kernels.KINDS[:-1], default="caputo_fabrizio_exp")
    p.add_argument("--beta-s", type=float, default=None, help="stretched_exp exponent")
    p.add_argument("--memory", type=int, default=None, help="gl short-memory length in nodes")
    p.add_argument("--eps", type=float, default=None, help="marchaud near-field radius")
    p.add_argument("--extension", choices=("zero", "periodic"), default="zero")
    p.add_argument("--quad-nodes", type=int, default=64)
    p.add_argument("--variant", choices=("khalil", "katugampola"), default="khalil")
    p.set_defaults(func=cmd_deriv)

    p = sub.add_parser("integ", help="fractional integral of a sampled function")
    _add_input(p)
    p.add_argument("--op", choices=INTEG_OPS, default="rl")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--side", choices=("left", "right"), default="left")
    p.add_argument("--lam", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--eta", type=float, default=1.0)
    p.set_defaults(func=cmd_integ)

    p = sub.add_parser("mlf", help="Mittag-Leffler function")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=1.0, help="three-parameter (Prabhakar) gamma")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_mlf)

    p = sub.add_parser("wright", help="Wright function or its auxiliary M/F functions")
    p.add_argument("--lam", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--aux", choices=("M", "F"))
    p.add_argument("--nu", type=float)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_wright)

    p = sub.add_parser("weights", help="Grunwald-Letnikov weights")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=("gl", "integral"), default="gl")
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("strip-solve", help="solve D^alpha y = lam y + F, y(a) = y0")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--y0", type=float, required=True)
    p.add_argument("--forcing", default="0", help="expression for F")
    p.add_argument("--grid", type=_grid)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_strip_solve)

    for name, helptext, func in (
        ("solve-diffusion", "time-fractional diffusion", cmd_solve_diffusion),
        ("solve-distributed", "distributed-order diffusion", cmd_solve_distributed),
    ):
        p = sub.add_parser(name, help=helptext)
        if name == "solve-diffusion":
            p.add_argument("--beta", type=float, required=True)
            p.add_argument("--form", choices=("caputo", "rl"), default="caputo")
        else:
            p.add_argument("--nodes", type=_floats)
            p.add_argument("--weights", type=_floats)
            p.add_argument("--uniform", type=int, help="Gauss-Legendre nodes for b = 1")
            p.set_defaults(form="caputo")
        p.add_argument("--xgrid", type=_grid, required=True)
        p.add_argument("--tgrid", type=_horizon, required=True, help="T,n")
        p.add_argument("--grading", type=float, default=1.0)
        p.add_argument("--u0", default="delta", help="expression in x, or 'delta'")
        p.add_argument("--stride", type=int, default=1, help="write every k-th time level")
        p.add_argument("--output", "-o")
        p.set_defaults(func=func)

    p = sub.add_parser("moments", help="mass and moments of a t,x,u solution file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_moments)
    return parser


# }}}


_NUMERIC = re.compile(r"^-(\d|\.\d)[\d.eE+\-,]*$")
# options whose value is an expression and may start with a minus sign
_EXPR_OPTIONS = ("--expr", "--forcing", "--u0")


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    """Turn ``--grid -1,1,64`` into ``--grid=-1,1,64`` so argparse sees a value."""
    out: list[str] = []
    for tok in argv:
        prev = out[-1] if out else ""
        glue = prev.startswith("--") and "=" not in prev and tok.startswith("-")
        if glue and (_NUMERIC.match(tok) or prev in _EXPR_OPTIONS):
            out[-1] = f"{prev}={tok}"
        else:
            out.append(tok)
    return out


def run_cli(argv: Sequence[str], stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    out = sys.stdout if stdout is None else stdout
    err = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        try:
            with contextlib.redirect_stdout(out):
                args = parser.parse_args(_glue_negative_values(argv))
        except SystemExit as exc:
            # --help
            return int(exc.code or 0)
        args.func(args, out)
    except (UsageError, ExprSyntaxError) as exc:
        err.write(f"error: {exc}\n")
        return 1
    except (FracError, ValueError, ArithmeticError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    return run_cli(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
