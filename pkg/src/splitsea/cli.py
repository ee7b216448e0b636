"""Command line interface: desk-scale studies behind one ``splitsea`` binary.

Conventions: CSV rows are written with repr-roundtrip floats so re-reading
them reproduces values bit for bit; ``--json`` summaries go to stdout; exit
code 2 flags configuration errors, 3 numerical failures (the failing error
class name is printed on stderr).  A flat key=value config file can seed any
long option; explicit flags win.  SPLITSEA_THREADS or --threads sizes the
worker pool used by grid studies (reductions stay deterministic).
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import os
import sys

import numpy as np

from . import airy as airy_mod
from . import edge as edge_mod
from . import kernel as kernel_mod
from . import sampler as sampler_mod
from . import unitary as unitary_mod
from .schur import brute_cdf_first_part, total_weight
from .errors import SplitSeaError
from .potential import (HoppingCoefficients, edge_profile, global_extrema,
                        limit_density, limit_shape)
from .svgplot import Panel, render_panels


def _parse_gammas(text):
    try:
        vals = tuple(float(v) for v in text.split(",") if v.strip() != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad gamma list {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("empty gamma list")
    return vals


def _parse_range(text):
    """a:b or a:b:step."""
    parts = text.split(":")
    if len(parts) == 2:
        return float(parts[0]), float(parts[1]), None
    if len(parts) == 3:
        return float(parts[0]), float(parts[1]), float(parts[2])
    raise argparse.ArgumentTypeError(f"bad range {text!r}; expected a:b[:step]")


def _csv_out(rows, header, out=None):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(v) if isinstance(v, float) else str(v)
                              for v in row))
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def read_csv(path):
    """Reader matching the writer above: floats parsed back via float()."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = []
        for line in fh:
            vals = []
            for tok in line.strip().split(","):
                try:
                    vals.append(float(tok))
                except ValueError:
                    vals.append(tok)
            rows.append(vals)
    return header, rows


def _pool_map(fn, items, threads):
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _cmd_analyze(args):
    coeffs = HoppingCoefficients(args.gamma)
    profile = edge_profile(coeffs)
    report = {
        "b": profile.b,
        "b_tilde": profile.b_tilde,
        "maximizers": [{"chi_b": mx.chi_b, "m": mx.m, "d": mx.d}
                       for mx in profile.maximizers],
        "n_cuts": profile.n_cuts,
    }
    json.dump(report, sys.stdout, indent=2 if args.json else None)
    sys.stdout.write("\n")
    return 0


def _cmd_density(args):
    coeffs = HoppingCoefficients(args.gamma)
    xs = np.linspace(args.xmin, args.xmax, args.steps)
    rows = [(float(x), limit_density(coeffs, x), limit_shape(coeffs, x))
            for x in xs]
    _csv_out(rows, ["x", "rho", "Omega"], args.out)
    return 0


def _cmd_kernel(args):
    coeffs = HoppingCoefficients(args.gamma, theta=args.theta)
    band = kernel_mod.coefficient_band(coeffs)
    value = kernel_mod.kernel_eval(band, args.k, args.l)
    oracle = kernel_mod.kernel_eval_quadrature(coeffs, args.k, args.l)
    json.dump({"value": value, "oracle_value": oracle,
               "diff": value - oracle}, sys.stdout)
    sys.stdout.write("\n")
    return 0


def _cmd_kernel_profile(args):
    coeffs = HoppingCoefficients(args.gamma, theta=args.theta)
    band = kernel_mod.coefficient_band(coeffs)
    lo, hi, _ = _parse_range(args.window)
    ks = np.arange(math.floor(lo), math.ceil(hi) + 1) + 0.5
    rows = [(float(k), kernel_mod.kernel_eval(band, k, k)) for k in ks]
    _csv_out(rows, ["k", "Kkk"], args.out)
    return 0


def _cmd_oracle(args):
    if args.what != "cdf":
        raise argparse.ArgumentTypeError("supported oracle: cdf")
    coeffs = HoppingCoefficients(args.gamma, theta=args.theta)
    value = brute_cdf_first_part(coeffs, args.ell, args.cap)
    residual = 1.0 - total_weight(coeffs, args.cap)
    json.dump({"value": value, "cap": args.cap,
               "residual_bound": residual}, sys.stdout)
    sys.stdout.write("\n")
    return 0


def _cmd_airy(args):
    lo, hi, step = _parse_range(args.s)
    step = step or 0.1
    ss = np.arange(lo, hi + 0.5 * step, step)
    rows = [(float(s), airy_mod.limiting_cdf(args.m, args.power, float(s)))
            for s in ss]
    _csv_out(rows, ["s", "F"], args.out)
    return 0


def _cmd_cdf(args):
    coeffs = HoppingCoefficients(args.gamma, theta=args.theta)
    lo, hi, _ = _parse_range(args.ell_range)
    table = edge_mod.cdf_table(coeffs, int(lo), int(hi))
    rows = [(ell, p, table.s_of_ell(ell)) for ell, p in table.rows]
    _csv_out(rows, ["ell", "p", "s"], args.out)
    return 0


def _cmd_converge(args):
    thetas = [float(t) for t in args.thetas.split(",")]
    power = None if args.power == "auto" else int(args.power)
    s_grid = np.linspace(-6.0, 4.0, 101)

    def one(theta):
        return edge_mod.scaled_convergence_study(
            args.gamma, [theta], s_grid=s_grid, n_cuts=power)[0]

    reports = _pool_map(one, thetas, resolved_threads(args))
    summary = {str(r["theta"]): r["sup_distance"] for r in reports}
    if args.out:
        rows = []
        for r in reports:
            for s in s_grid:
                rows.append((r["theta"], float(s), r["table"].cdf_at(float(s))))
        _csv_out(rows, ["theta", "s", "cdf"], args.out)
    if args.svg:
        m = reports[0]["m"]
        pw = reports[0]["power"]
        panel = Panel(title=f"scaled edge CDFs vs limit (power {pw})")
        for r in reports:
            panel.add(s_grid, [r["table"].cdf_at(float(s)) for s in s_grid],
                      label=f"theta={r['theta']:g}")
        panel.add(s_grid, [airy_mod.limiting_cdf(m, pw, float(s))
                           for s in s_grid], label="limit")
        render_panels([panel], args.svg)
    json.dump({"sup_distance": summary}, sys.stdout)
    sys.stdout.write("\n")
    return 0


def _cmd_sample(args):
    coeffs = HoppingCoefficients(args.gamma, theta=args.theta)
    profile = edge_profile(coeffs)
    mx = profile.principal
    scale = (mx.d * coeffs.theta) ** (1.0 / (2 * mx.m + 1))
    report = sampler_mod.empirical_edge_law(
        coeffs, args.n, args.seed,
        exact_cdf_fn=lambda ell: edge_mod.exact_cdf(coeffs, ell),
        limit_cdf_fn=lambda s: airy_mod.limiting_cdf(mx.m, profile.n_cuts, s))
    if args.out:
        _csv_out([(float(k),) for k in report.k_max], ["k_max"], args.out)
    json.dump({"ks_exact": report.ks_exact, "ks_limit": report.ks_limit,
               "n": report.n_samples, "seed": report.seed,
               "scale": scale}, sys.stdout)
    sys.stdout.write("\n")
    return 0


def _cmd_unitary_density(args):
    alphas = np.linspace(-math.pi, math.pi, args.steps)
    rho = unitary_mod.eigen_density_supercritical(args.gamma, args.x, alphas)
    _csv_out(list(zip(map(float, alphas), map(float, rho))),
             ["alpha", "rho"], args.out)
    return 0


def _cmd_unitary_mc(args):
    res = unitary_mod.metropolis_chain(args.gamma, args.theta, args.ell,
                                       args.sweeps, args.seed)
    hist, edges = unitary_mod.angle_histogram(res.samples, bins=args.bins)
    centers = 0.5 * (edges[1:] + edges[:-1])
    if args.out:
        _csv_out(list(zip(map(float, centers), map(float, hist))),
                 ["alpha", "density"], args.out)
    profile = edge_profile(HoppingCoefficients(args.gamma))
    dip_ratio = float("nan")
    interior = [mx for mx in profile.maximizers if mx.interior]
    if interior:
        chi_b = interior[0].chi_b
        dip = hist[np.argmin(np.abs(centers - (math.pi - chi_b)))]
        mid = hist[np.argmin(np.abs(centers))]
        dip_ratio = float(dip / mid) if mid > 0 else float("inf")
    json.dump({"acceptance_rate": res.acceptance_rate,
               "dip_ratio": dip_ratio,
               "proposal_sigma": res.proposal_sigma}, sys.stdout)
    sys.stdout.write("\n")
    return 0


def _cmd_figures(args):
    gam = (1.0, args.gamma2)
    coeffs = HoppingCoefficients(gam)
    b, b_tilde = global_extrema(coeffs)
    outdir = args.out_dir
    os.makedirs(outdir, exist_ok=True)
    tag = f"g2_{args.gamma2:+.4f}".replace("+", "p").replace("-", "m").replace(".", "_")

    phis = np.linspace(-math.pi, math.pi, 601)
    from .potential import eval_dispersion
    d_rows = [(float(p), eval_dispersion(coeffs, float(p))) for p in phis]
    xs = np.linspace(-b_tilde - 0.4, b + 0.4, 401)
    rho_rows = [(float(x), limit_density(coeffs, float(x))) for x in xs]
    alphas = np.linspace(-math.pi, math.pi, 601)
    ev = unitary_mod.eigen_density_supercritical(gam, b, alphas)
    ev_rows = list(zip(map(float, alphas), map(float, ev)))

    paths = {
        "dispersion": os.path.join(outdir, f"figure_{tag}_dispersion.csv"),
        "density": os.path.join(outdir, f"figure_{tag}_density.csv"),
        "eigen_density": os.path.join(outdir, f"figure_{tag}_eigendensity.csv"),
    }
    _csv_out(d_rows, ["phi", "D"], paths["dispersion"])
    _csv_out(rho_rows, ["x", "rho"], paths["density"])
    _csv_out(ev_rows, ["alpha", "rho"], paths["eigen_density"])
    svg = os.path.join(outdir, f"figure_{tag}.svg")
    render_panels([
        Panel(title=f"dispersion, gamma2={args.gamma2:g}").add(
            *zip(*d_rows)),
        Panel(title="limit density").add(*zip(*rho_rows)),
        Panel(title="eigenvalue density at the critical coupling").add(
            *zip(*ev_rows)),
    ], svg)
    json.dump({"csv": list(paths.values()), "svg": svg}, sys.stdout)
    sys.stdout.write("\n")
    return 0


def _add_common(sub, theta=False):
    sub.add_argument("--gamma", type=_parse_gammas, required=True,
                     help="comma-separated hopping weights gamma_1,gamma_2,...")
    if theta:
        sub.add_argument("--theta", type=float, required=True)
    sub.add_argument("--out", default=None, help="CSV output path (default stdout)")


def resolved_threads(args):
    """Pool size: SPLITSEA_THREADS overrides the flag, which defaults to all cores."""
    env = os.environ.get("SPLITSEA_THREADS")
    if env is not None:
        return max(1, int(env))
    if getattr(args, "threads", None):
        return max(1, args.threads)
    return os.cpu_count() or 1


def build_parser():
    ap = argparse.ArgumentParser(prog="splitsea", description=__doc__)
    ap.add_argument("--config", default=None,
                    help="flat key=value file seeding long options")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None,
                        help="worker pool size (SPLITSEA_THREADS overrides)")
    subparsers = ap.add_subparsers(dest="command", required=True)

    class _Sub:
        def add_parser(self, name, **kw):
            return subparsers.add_parser(name, parents=[common], **kw)

    sp = _Sub()

    s = sp.add_parser("analyze", help="edge profile and regime report")
    s.add_argument("--gamma", type=_parse_gammas, required=True)
    s.add_argument("--json", action="store_true", help="pretty-print JSON")
    s.set_defaults(fn=_cmd_analyze)

    s = sp.add_parser("density", help="limit density and limit shape CSV")
    _add_common(s)
    s.add_argument("--xmin", type=float, required=True)
    s.add_argument("--xmax", type=float, required=True)
    s.add_argument("--steps", type=int, default=200)
    s.set_defaults(fn=_cmd_density)

    s = sp.add_parser("kernel", help="one kernel entry vs its contour oracle")
    _add_common(s, theta=True)
    s.add_argument("--k", type=float, required=True)
    s.add_argument("--l", type=float, required=True)
    s.set_defaults(fn=_cmd_kernel)

    s = sp.add_parser("kernel-profile", help="kernel diagonal over a window")
    _add_common(s, theta=True)
    s.add_argument("--window", required=True, help="a:b site range")
    s.set_defaults(fn=_cmd_kernel_profile)

    s = sp.add_parser("oracle", help="brute-force Schur-sum oracles")
    s.add_argument("what", choices=["cdf"])
    _add_common(s, theta=True)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--cap", type=int, default=20)
    s.set_defaults(fn=_cmd_oracle)

    s = sp.add_parser("airy", help="limiting edge law F_{2m+1}^power on a grid")
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--power", type=int, default=1)
    s.add_argument("--s", required=True, help="lo:hi[:step] grid of s values")
    s.add_argument("--out", default=None)
    s.set_defaults(fn=_cmd_airy)

    s = sp.add_parser("cdf", help="exact lattice CDF of the rightmost particle")
    _add_common(s, theta=True)
    s.add_argument("--ell-range", required=True, help="a:b inclusive")
    s.set_defaults(fn=_cmd_cdf)

    s = sp.add_parser("converge", help="scaled CDF vs limiting law study")
    _add_common(s)
    s.add_argument("--thetas", required=True, help="comma separated couplings")
    s.add_argument("--power", default="auto")
    s.add_argument("--svg", default=None)
    s.set_defaults(fn=_cmd_converge)

    s = sp.add_parser("sample", help="determinantal sampling of k_max")
    _add_common(s, theta=True)
    s.add_argument("-n", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(fn=_cmd_sample)

    s = sp.add_parser("unitary-density", help="supercritical eigenvalue density")
    s.add_argument("--gamma", type=_parse_gammas, required=True)
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--steps", type=int, default=401)
    s.add_argument("--out", default=None)
    s.set_defaults(fn=_cmd_unitary_density)

    s = sp.add_parser("unitary-mc", help="Metropolis chain over eigenvalue angles")
    _add_common(s, theta=True)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--sweeps", type=int, default=20000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--bins", type=int, default=64)
    s.set_defaults(fn=_cmd_unitary_mc)

    s = sp.add_parser("figures", help="dispersion/density/eigen-density artifacts")
    s.add_argument("--gamma2", type=float, required=True)
    s.add_argument("--out-dir", default=".")
    s.set_defaults(fn=_cmd_figures)
    return ap


def _apply_config(argv):
    """Inject key=value pairs from --config as defaults (flags override)."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    path = argv[idx + 1]
    injected = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, val = line.split("=", 1)
            flag = "--" + key.strip().replace("_", "-")
            if flag not in argv:
                injected += [flag, val.strip()]
    head = argv[:idx] + argv[idx + 2:]
    if not head:
        return injected
    return head[:1] + injected + head[1:]


def _merge_negative_values(argv):
    """Join ``--flag -2:4`` into ``--flag=-2:4`` so argparse accepts it."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (tok.startswith("--") and "=" not in tok and nxt
                and nxt.startswith("-") and len(nxt) > 1
                and (nxt[1].isdigit() or nxt[1] == ".")):
            out.append(f"{tok}={nxt}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config(argv)
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    argv = _merge_negative_values(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.fn(args)
    except SplitSeaError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
