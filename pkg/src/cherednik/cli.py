"""Command-line interface.

Every output starts with a header that echoes the run configuration,
including a canonical ``argv``; running ``cherednik <argv>`` again reproduces
the file byte for byte.

Exit codes: 0 success, 1 failed verification, 2 domain error, 3 budget
exceeded, 4 convergence or evaluation failure.
"""

import argparse
import io
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import BoundViolation, BudgetError, ConvergenceError, DomainError, EvaluationError
from .measures import plancherel_density, weight_A, weight_B
from .modspace import ModRules, mod_norm_1d, mod_norm_2d
from .quadrature import SCHEMES, build_rule
from .sampled import dumps_json, read_csv, write_csv
from .specfun import JCParams, jacobi_phi, opdam_G
from .translation import kernel_K_array
from .transform import oc_transform
from .ucp import classify_regime, cowling_price_certify, hardy_extremal_check, morgan_threshold
from .windowed import GaussianKernel, default_window, sandwich_ratio, window_context, wo_transform

OUTPUT_DIR_ENV = "CHEREDNIK_OUTPUT_DIR"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_DOMAIN = 2
EXIT_BUDGET = 3
EXIT_CONVERGENCE = 4


@dataclass
class Table:
    """Plain table with fixed column names (the CLI's generic output)."""

    names: tuple
    rows: list
    meta: dict = field(default_factory=dict)

    def columns(self):
        return self.names, self.rows

    def to_dict(self):
        return {
            "kind": "table",
            "meta": self.meta,
            "columns": list(self.names),
            "rows": [[_plain(v) for v in r] for r in self.rows],
        }


def _plain(v):
    if isinstance(v, (np.generic,)):
        return v.item()
    return v


@dataclass
class RunConfig:
    command: str
    argv: list
    params: dict
    rules: dict
    window: str
    fmt: str
    out: str
    seed: int
    args: dict

    def header(self):
        return {
            "program": "cherednik",
            "version": __version__,
            "command": self.command,
            "argv": self.argv,
            "params": self.params,
            "rules": self.rules,
            "window": self.window,
            "format": self.fmt,
            "seed": self.seed,
            "args": self.args,
        }


# -- builtin functions -------------------------------------------------------


def _bump(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1
    out[inside] = np.exp(-1.0 / (1.0 - x[inside] ** 2))
    return out


BUILTINS = {
    "gaussian": lambda x: np.exp(-np.asarray(x, float) ** 2),
    "gaussian2": lambda x: np.exp(-2.0 * np.asarray(x, float) ** 2),
    "xgaussian": lambda x: np.asarray(x, float) * np.exp(-np.asarray(x, float) ** 2),
    "bump": _bump,
}


def _csv_function(path):
    _, cols = read_csv(path)
    if "grid" not in cols or "re" not in cols:
        raise DomainError(f"{path}: CSV needs columns grid, re[, im]")
    grid = cols["grid"]
    vals = cols["re"] + 1j * cols.get("im", np.zeros_like(grid))

    def f(x):
        x = np.asarray(x, float)
        re = np.interp(x, grid, vals.real, left=0.0, right=0.0)
        im = np.interp(x, grid, vals.imag, left=0.0, right=0.0)
        return re + 1j * im

    return f


def resolve_function(name, p, t=None, ctx=None):
    """Builtin by name (``gaussian``, ``gaussian2``, ``xgaussian``, ``bump``,
    ``E_t``) or a CSV file written by this program."""
    if name in BUILTINS:
        return BUILTINS[name]
    if name == "E_t":
        if t is None:
            raise DomainError("E_t needs --t")
        return GaussianKernel(p, t, ctx=ctx)
    if os.path.exists(name):
        return _csv_function(name)
    raise DomainError(f"unknown function {name!r}; builtins are {sorted(BUILTINS) + ['E_t']}")


# -- argument helpers ----------------------------------------------------------


def parse_grid(spec):
    """``a:b:n`` (inclusive linspace) or a comma-separated list."""
    spec = str(spec)
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise DomainError(f"grid spec {spec!r} must be start:stop:count")
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
        if n < 1:
            raise DomainError("grid count must be positive")
        return np.linspace(a, b, n)
    return np.array([float(v) for v in spec.split(",") if v.strip()], dtype=float)


def _params(ns):
    return JCParams(ns.alpha, ns.beta)


def _rule(ns, default_radius, default_ppu):
    radius = ns.radius if ns.radius is not None else default_radius
    ppu = ns.ppu if ns.ppu is not None else default_ppu
    return build_rule(radius, ppu, ns.scheme)


def _common_parent():
    parent = argparse.ArgumentParser(add_help=False)
    g = parent.add_argument_group("common")
    g.add_argument("--alpha", type=float, default=1.0, help="alpha parameter (default 1)")
    g.add_argument("--beta", type=float, default=0.5, help="beta parameter (default 0.5)")
    _output_args(g)
    g.add_argument("--radius", type=float, default=None, help="truncation radius of the x rule")
    g.add_argument("--ppu", type=int, default=None, help="quadrature points per unit")
    g.add_argument("--scheme", choices=SCHEMES, default="gauss_legendre_composite")
    return parent


def _output_args(g):
    g.add_argument("--out", default=None, help=f"output file ('-' for stdout; default ${OUTPUT_DIR_ENV} or stdout)")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    g.add_argument("--seed", type=int, default=0, help="seed for randomised checks")


def build_parser():
    common = _common_parent()
    ap = argparse.ArgumentParser(prog="cherednik", description="Jacobi-Cherednik harmonic analysis toolkit")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", parents=[common], help="evaluate special functions and weights")
    ev.add_argument("subject", choices=("G", "phi", "A", "B", "density", "kernel"))
    ev.add_argument("--lambda", dest="lam", default="1", help="lambda values (list or a:b:n)")
    ev.add_argument("--lambda-imag", type=float, default=0.0, help="imaginary part added to every lambda")
    ev.add_argument("--x", default="0", help="x values")
    ev.add_argument("--y", default="1", help="y values (kernel)")
    ev.add_argument("--z", default="1", help="z values (kernel)")

    tr = sub.add_parser("transform", parents=[common], help="Opdam-Cherednik transform of a function")
    tr.add_argument("--f", default="gaussian")
    tr.add_argument("--t", type=float, default=None)
    tr.add_argument("--lambda", dest="lam", default="-10:10:40")

    wt = sub.add_parser("wtransform", parents=[common], help="windowed transform on a grid")
    wt.add_argument("--f", default="E_t")
    wt.add_argument("--t", type=float, default=0.5)
    wt.add_argument("--x", default="-1:1:5")
    wt.add_argument("--xi", default="-1:1:5")
    wt.add_argument("--method", choices=("spectral", "direct"), default="spectral")

    ke = sub.add_parser("kernel", parents=[common], help="Gaussian kernel E_t and its sandwich ratio")
    ke.add_argument("--t", type=float, default=0.5)
    ke.add_argument("--x", default="-3:3:61")

    no = sub.add_parser("norm", parents=[common], help="weighted modulation-space norm")
    no.add_argument("--f", default="gaussian")
    no.add_argument("--t", type=float, default=None)
    no.add_argument("--p", dest="p_exp", type=float, default=2.0)
    no.add_argument("--q", dest="q_exp", type=float, default=2.0)
    no.add_argument("--m", type=float, default=1.0, help="constant weight (>= 1)")
    no.add_argument("--dim", type=int, choices=(1, 2), default=1)
    no.add_argument("--nodes", type=int, default=None, help="nodes per time-frequency axis")
    no.add_argument("--no-separable", dest="separable", action="store_false",
                    help="dim 2: use the full 4-d grid instead of the product fast path")

    uc = sub.add_parser("ucp", help="uncertainty-principle harness")
    usub = uc.add_subparsers(dest="theorem", required=True)
    cp = usub.add_parser("cowling-price", parents=[common])
    cp.add_argument("--a", type=float, required=True)
    cp.add_argument("--b", type=float, required=True)
    cp.add_argument("--f", default=None, help="certify this function (omit to classify only)")
    cp.add_argument("--t", type=float, default=None)
    cp.add_argument("--p", dest="p_exp", type=float, default=2.0)
    cp.add_argument("--q", dest="q_exp", type=float, default=2.0)
    mo = usub.add_parser("morgan")
    mo.add_argument("--a", type=float, required=True)
    mo.add_argument("--b", type=float, required=True)
    mo.add_argument("--alpha", type=float, required=True, help="Morgan exponent (> 2)")
    mo.add_argument("--beta", type=float, default=None, help="conjugate exponent (default alpha/(alpha-1))")
    _output_args(mo)
    ha = usub.add_parser("hardy", parents=[common])
    ha.add_argument("--a", type=float, default=0.5)
    ha.add_argument("--grid", default="-1:1:5")

    ve = sub.add_parser("verify", parents=[common], help="fast property checks")
    ve.add_argument("--samples", type=int, default=20)
    return ap


# -- commands ------------------------------------------------------------------


def cmd_eval(ns, p):
    lam = parse_grid(ns.lam) + 1j * ns.lambda_imag
    x = parse_grid(ns.x)
    s = ns.subject
    if s in ("G", "phi"):
        fn = opdam_G if s == "G" else jacobi_phi
        L, X = np.meshgrid(lam, x, indexing="ij")
        vals = np.asarray(fn(p, L, X), dtype=complex)
        rows = [(l.real, l.imag, xx, v.real, v.imag) for l, xx, v in zip(L.ravel(), X.ravel(), vals.ravel())]
        return Table(("lambda_re", "lambda_im", "x", "re", "im"), rows)
    if s in ("A", "B"):
        fn = weight_A if s == "A" else weight_B
        vals = np.atleast_1d(fn(p, x))
        return Table(("x", "value"), list(zip(x, vals)))
    if s == "density":
        lam_r = lam.real
        d = plancherel_density(p, lam_r)
        raw, ab = np.atleast_1d(d.raw), np.atleast_1d(d.abs)
        return Table(("lambda", "raw_re", "raw_im", "abs"), list(zip(lam_r, raw.real, raw.imag, ab)))
    y, z = parse_grid(ns.y), parse_grid(ns.z)
    X, Y, Z = np.meshgrid(x, y, z, indexing="ij")
    vals = kernel_K_array(p, X, Y, Z)
    return Table(("x", "y", "z", "value"), list(zip(X.ravel(), Y.ravel(), Z.ravel(), vals.ravel())))


def cmd_transform(ns, p):
    f = resolve_function(ns.f, p, ns.t)
    lam = parse_grid(ns.lam)
    rule = _rule(ns, 8.0, 24)
    out = oc_transform(f, p, lam, rule)
    out.meta = {}
    return out, {"rule_x": rule.describe()}


def cmd_wtransform(ns, p):
    ctx = window_context(p, default_window)
    f = resolve_function(ns.f, p, ns.t, ctx)
    x, xi = parse_grid(ns.x), parse_grid(ns.xi)
    W = wo_transform(p, f, default_window, x, xi, ctx=ctx, method=ns.method)
    W.meta = {}
    return W, {"windowed_rules": ctx.rules.describe()}


def cmd_kernel(ns, p):
    ctx = window_context(p, default_window)
    E = GaussianKernel(p, ns.t, ctx=ctx)
    x = parse_grid(ns.x)
    vals = E(x)
    ratio = sandwich_ratio(p, x, vals, ns.t)
    return Table(("x", "value", "sandwich_ratio"), list(zip(x, vals, ratio))), {"windowed_rules": ctx.rules.describe()}


def cmd_norm(ns, p):
    f = resolve_function(ns.f, p, ns.t)
    radius = ns.radius if ns.radius is not None else (6.0 if ns.dim == 1 else 4.0)
    nodes = ns.nodes if ns.nodes is not None else (48 if ns.dim == 1 else 40)
    rules = ModRules(radius=radius, nodes=nodes)
    if ns.dim == 1:
        rec = mod_norm_1d(f, ns.p_exp, ns.q_exp, ns.m, p, rules, record=True)
    else:
        F = (f, f) if ns.separable else (lambda t1, t2: f(t1) * f(t2))
        rec = mod_norm_2d(F, ns.p_exp, ns.q_exp, ns.m, p, rules, record=True)
    d = rec.to_dict()
    row = (d["value"], ns.p_exp, ns.q_exp, radius, nodes, int(any(d["tail_flags"].values())))
    return Table(("value", "p", "q", "radius", "nodes", "tail_flag"), [row], meta=d), {"mod_rules": rules.describe()}


def cmd_ucp(ns, p):
    if ns.theorem == "morgan":
        beta = ns.beta if ns.beta is not None else ns.alpha / (ns.alpha - 1.0)
        lhs, rhs, van = morgan_threshold(ns.a, ns.b, ns.alpha, beta)
        return Table(("a", "b", "alpha_exp", "beta_exp", "lhs", "rhs", "vanishing"),
                     [(ns.a, ns.b, ns.alpha, beta, lhs, rhs, int(van))]), {}
    if ns.theorem == "hardy":
        rep = hardy_extremal_check(p, default_window, ns.a, grid=parse_grid(ns.grid))
        regime = classify_regime(ns.a, 1.0 / (4 * ns.a), "hardy")
        return Table(("a", "t", "regime", "residual"), [(ns.a, rep.t, regime, rep.residual)], meta=rep.to_dict()), {}
    ab = ns.a * ns.b
    regime = classify_regime(ns.a, ns.b, "cowling-price")
    cmp = ">=" if ab >= 0.25 else "<"
    if ns.f is None:
        return Table(("a", "b", "ab", "comparison", "regime"), [(ns.a, ns.b, ab, f"{cmp} 1/4", regime)]), {}
    ctx = window_context(p, default_window)
    f = resolve_function(ns.f, p, ns.t, ctx)
    rep = cowling_price_certify(p, f, default_window, ns.a, ns.b, ns.p_exp, ns.q_exp)
    row = (ns.a, ns.b, ab, f"{cmp} 1/4", regime, rep.x_norm, rep.tf_norm,
           int(rep.growth_flags["x"]), int(rep.growth_flags["tf"]))
    names = ("a", "b", "ab", "comparison", "regime", "x_norm", "tf_norm", "x_growing", "tf_growing")
    return Table(names, [row], meta=rep.to_dict()), {}


def cmd_verify(ns, p):
    """Fast checks: normalisation, eigen-equation, kernel symmetry, Morgan, density bounds."""
    from .specfun import cherednik_apply

    rng = np.random.default_rng(ns.seed)
    rows = []
    lam_set = [0.5, 1.0, 2.0, 4.0, 1j * p.rho]
    err = max(abs(complex(opdam_G(p, l, 0.0)) - 1.0) for l in lam_set)
    rows.append(("normalisation G(0)=1", err, 1e-10, int(err <= 1e-10)))
    xs = np.linspace(0.2, 2.0, 10)
    res = 0.0
    for l in (0.5, 1.0, 2.0):
        for x in xs:
            tg = cherednik_apply(p, lambda s, l=l: opdam_G(p, l, s), x)
            res = max(res, abs(tg - 1j * l * complex(opdam_G(p, l, x))))
    rows.append(("eigen-equation residual", res, 1e-6, int(res <= 1e-6)))
    if p.alpha > p.beta > -0.5:
        a = rng.uniform(0.2, 2.0, ns.samples)
        b = rng.uniform(0.2, 2.0, ns.samples)
        c = np.abs(a - b) + rng.uniform(0.05, 0.95, ns.samples) * (a + b - np.abs(a - b))
        k = kernel_K_array(p, a, b, c)
        sym = float(np.max(np.abs(k - kernel_K_array(p, b, a, c)) / np.abs(k)))
        rows.append(("kernel symmetry x<->y", sym, 1e-8, int(sym <= 1e-8)))
    lhs, rhs, _ = morgan_threshold(1.0, 1.0, 4.0, 4.0 / 3.0)
    mexp = abs(lhs - 4 ** 0.25 * (4 / 3) ** 0.75) + abs(rhs - 0.5 ** 0.75)
    rows.append(("morgan arithmetic", mexp, 1e-12, int(mexp <= 1e-12)))
    lam = np.linspace(1.0, 20.0, 200)
    ratio = plancherel_density(p, lam).abs / lam ** (2 * p.alpha + 1)
    rows.append(("density ratio min > 0", float(ratio.min()), 0.0, int(ratio.min() > 0)))
    return Table(("check", "value", "tolerance", "passed"), rows), {}


COMMANDS = {
    "eval": cmd_eval,
    "transform": cmd_transform,
    "wtransform": cmd_wtransform,
    "kernel": cmd_kernel,
    "norm": cmd_norm,
    "ucp": cmd_ucp,
    "verify": cmd_verify,
}


def _canonical_argv(ns, argv):
    # drop output location so the echoed command reproduces the same content
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a == "--out":
            skip = True
            continue
        if a.startswith("--out="):
            continue
        out.append(a)
    return out


def _destination(ns):
    if ns.out is not None:
        return ns.out
    env = os.environ.get(OUTPUT_DIR_ENV)
    if env:
        name = ns.command + (f"-{ns.theorem}" if ns.command == "ucp" else "")
        if ns.command == "eval":
            name += f"-{ns.subject}"
        return str(Path(env) / f"{name}.{ns.format}")
    return "-"


def _emit(obj, header, fmt, dest):
    buf = io.StringIO()
    if fmt == "csv":
        write_csv(obj, buf, header)
    else:
        buf.write(dumps_json(obj, header))
        buf.write("\n")
    text = buf.getvalue()
    if dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).parent.mkdir(parents=True, exist_ok=True)
        with open(dest, "w", newline="") as fh:
            fh.write(text)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        if ns.command == "ucp" and ns.theorem == "morgan":
            p = None
            params = {}
        else:
            p = _params(ns)
            params = p.as_dict()
        result = COMMANDS[ns.command](ns, p)
        obj, extra = result if isinstance(result, tuple) else (result, {})
        args = {k: v for k, v in sorted(vars(ns).items()) if k not in ("out", "format", "seed", "alpha", "beta")}
        cfg = RunConfig(
            command=ns.command,
            argv=_canonical_argv(ns, argv),
            params=params,
            rules=extra,
            window="gaussian exp(-x^2)",
            fmt=ns.format,
            out=_destination(ns),
            seed=ns.seed,
            args=args,
        )
        _emit(obj, cfg.header(), ns.format, cfg.out)
        if ns.command == "verify" and not all(r[-1] for r in obj.rows):
            return EXIT_FAILED
        return EXIT_OK
    except (DomainError, BoundViolation) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ConvergenceError, EvaluationError) as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
