"""Command-line interface for the walk samplers, baselines and validators."""

import argparse
import logging
import sys

import numpy as np

from . import hitting_laws
from .engine import StepCapExceeded
from .experiment import (
    ConfigError,
    ExperimentConfig,
    run_experiment,
    table_versus_dimension,
    table_versus_eps,
)
from .samplers import RngStream, sample_first_passage_psi
from .stats import ks_statistic

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_STEP_CAP = 3
EXIT_VALIDATE = 4


def _add_common(parser):
    parser.add_argument("--n", type=int, default=10_000, help="number of runs")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--eps", type=float, default=1e-3)
    parser.add_argument("--out-csv", default=None)
    parser.add_argument("--out-json", default=None)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="woms",
        description="First-passage-time sampling for Bessel and CIR processes "
        "by walks on moving spheres.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hit-level", help="level hitting (planar or radial walk)")
    p.add_argument("--algo", choices=["a1", "a2"], default="a2")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--level", type=float, default=1.0)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.9)
    _add_common(p)

    p = sub.add_parser("hit-curve", help="decreasing linear boundary level-slope*t")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--level", type=float, default=1.0)
    p.add_argument("--slope", type=float, default=0.1)
    p.add_argument("--x0", type=float, default=0.0)
    _add_common(p)

    p = sub.add_parser("hit-sqrt", help="square-root boundary sqrt(beta0-beta1*t)")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--beta0", type=float, default=1.0)
    p.add_argument("--beta1", type=float, default=0.5)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--kappa", type=float, default=0.9)
    _add_common(p)

    p = sub.add_parser("cir", help="CIR level hitting via the Bessel walk")
    p.add_argument("--a", type=float, required=True, dest="cir_a")
    p.add_argument("--b", type=float, required=True, dest="cir_b")
    p.add_argument("--c", type=float, required=True, dest="cir_c")
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--level", type=float, default=1.0)
    p.add_argument("--kappa", type=float, default=0.9)
    _add_common(p)

    p = sub.add_parser("baseline", help="Euler-scheme baselines")
    p.add_argument("--scheme", choices=["euler-bm", "euler-cir", "euler-bessel-curve"],
                   required=True)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--level", type=float, default=1.0)
    p.add_argument("--slope", type=float, default=0.0)
    p.add_argument("--beta0", type=float, default=1.0)
    p.add_argument("--beta1", type=float, default=0.5)
    p.add_argument("--a", type=float, default=2.0, dest="cir_a")
    p.add_argument("--b", type=float, default=0.5, dest="cir_b")
    p.add_argument("--c", type=float, default=2.0, dest="cir_c")
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--dt", type=float, default=1e-4)
    p.add_argument("--horizon", type=float, default=None)
    _add_common(p)

    p = sub.add_parser("validate", help="run the quick oracle suite")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("reproduce-tables", help="emit the two step-count tables")
    p.add_argument("--seed", type=int, default=20240801)
    p.add_argument("--n-eps", type=int, default=100_000,
                   help="runs per entry of the precision table")
    p.add_argument("--n-dim", type=int, default=50_000,
                   help="runs per entry of the dimension table")
    p.add_argument("--workers", type=int, default=1)
    return parser


def _config_from_args(args):
    fields = dict(
        n=args.n, seed=args.seed, workers=args.workers,
        out_csv=args.out_csv, out_json=args.out_json,
    )
    cmd = args.command
    if cmd == "hit-level":
        fields.update(algorithm=args.algo, dim=args.dim, level=args.level,
                      x0=args.x0, eps=args.eps, gamma=args.gamma)
    elif cmd == "hit-curve":
        fields.update(algorithm="a3", dim=args.dim, level=args.level,
                      slope=args.slope, x0=args.x0, eps=args.eps)
    elif cmd == "hit-sqrt":
        fields.update(algorithm="a4", dim=args.dim, beta0=args.beta0,
                      beta1=args.beta1, x0=args.x0, eps=args.eps, kappa=args.kappa)
    elif cmd == "cir":
        fields.update(algorithm="cir", cir_a=args.cir_a, cir_b=args.cir_b,
                      cir_c=args.cir_c, x0=args.x0, level=args.level,
                      eps=args.eps, kappa=args.kappa)
    elif cmd == "baseline":
        fields.update(algorithm=args.scheme, dim=args.dim, level=args.level,
                      slope=args.slope, beta0=args.beta0, beta1=args.beta1,
                      cir_a=args.cir_a, cir_b=args.cir_b, cir_c=args.cir_c,
                      x0=args.x0, dt=args.dt, horizon=args.horizon, eps=args.eps)
    return ExperimentConfig(**fields)


def _cmd_experiment(args):
    config = _config_from_args(args)
    report, _ = run_experiment(config)
    print(f"n={report.n} censored={report.n_censored}")
    print(f"mean_time={report.mean_time:.6g} stderr_time={report.stderr_time:.3g}")
    print(f"mean_steps={report.mean_steps:.6g} stderr_steps={report.stderr_steps:.3g}")
    return EXIT_OK


def _cmd_validate(args):
    """Condensed oracle suite: exact-sampler law, density mass, Laplace oracle."""
    failures = []
    rng = RngStream(args.seed, 0)

    for nu, a in [(0.0, 1.0), (2.0, 5.0)]:
        draws = sample_first_passage_psi(a, nu, rng, size=20_000)
        stat, pval = ks_statistic(
            draws, cdf=lambda t, nu=nu, a=a: hitting_laws.cdf_family1(a, nu, t)
        )
        ok = pval > 1e-3
        print(f"sampler-vs-cdf nu={nu} a={a}: KS={stat:.4f} p={pval:.4f} "
              f"{'PASS' if ok else 'FAIL'}")
        if not ok:
            failures.append("sampler-vs-cdf")

    from scipy.integrate import quad
    from .boundaries import t_max
    for nu, a in [(0.0, 1.0), (2.0, 5.0)]:
        mass, _ = quad(lambda t: hitting_laws.density_family1(a, nu, t),
                       0.0, t_max(a, nu), epsabs=1e-10, limit=200)
        ok = abs(mass - 1.0) < 1e-8
        print(f"density-mass nu={nu} a={a}: mass={mass:.12f} "
              f"{'PASS' if ok else 'FAIL'}")
        if not ok:
            failures.append("density-mass")

    cfg = ExperimentConfig(algorithm="a2", n=20_000, seed=args.seed, dim=2,
                           level=1.0, eps=1e-4, gamma=0.9)
    _, rows = run_experiment(cfg)
    times = np.array([r[0] for r in rows])
    est = float(np.exp(-times).mean())
    se = float(np.exp(-times).std(ddof=1) / np.sqrt(times.size))
    exact = hitting_laws.laplace_transform_level(1.0, 0.0, 1.0)
    ok = abs(est - exact) <= 3.0 * se + 0.01
    print(f"laplace-oracle: est={est:.5f} exact={exact:.5f} "
          f"{'PASS' if ok else 'FAIL'}")
    if not ok:
        failures.append("laplace-oracle")

    if failures:
        print(f"FAILED: {', '.join(sorted(set(failures)))}")
        return EXIT_VALIDATE
    print("all oracle checks passed")
    return EXIT_OK


def _cmd_reproduce_tables(args):
    eps_grid, means = table_versus_eps(n=args.n_eps, seed=args.seed,
                                       workers=args.workers)
    print("# mean step count versus precision (level=2, dim=6, gamma=0.9)")
    print("eps,mean_steps")
    for eps, m in zip(eps_grid, means):
        print(f"{eps:g},{m:.5f}")
    nu_grid, means = table_versus_dimension(n=args.n_dim, seed=args.seed + 1000,
                                            workers=args.workers)
    print("# mean step count versus index (level=2, eps=1e-3, gamma=0.9)")
    print("nu,mean_steps")
    for nu, m in zip(nu_grid, means):
        print(f"{nu:g},{m:.5f}")
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING
    )
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "reproduce-tables":
            return _cmd_reproduce_tables(args)
        return _cmd_experiment(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, TypeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StepCapExceeded as exc:
        print(f"step cap exceeded: {exc}", file=sys.stderr)
        return EXIT_STEP_CAP


if __name__ == "__main__":
    sys.exit(main())
