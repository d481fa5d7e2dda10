"""Reproduce the standard experiment tables as CSV files.

Drives the installed command line interface, so every table here is
byte-identical to what `glfrac <verb> --out ...` would produce by hand.

Usage:
    python3 scripts/run_figures.py --outdir results/
"""

import argparse
from pathlib import Path

from glfrac.cli import main as cli_main

SCALAR_ALPHAS = ("0.25", "0.5", "0.75")
MATRIX_VARIANTS = ("full", "balanced", "equalized")


def run(args, out_path):
    rc = cli_main([*args, "--out", str(out_path)])
    if rc != 0:
        raise RuntimeError(f"command failed: {' '.join(args)}")
    print(f"wrote {out_path}")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", type=Path, default=Path("results"))
    opts = parser.parse_args(argv)
    opts.outdir.mkdir(parents=True, exist_ok=True)

    # scalar convergence at a fixed spectral point, one file per exponent
    for alpha in SCALAR_ALPHAS:
        run(
            ["scalar-error", "--alpha", alpha, "--lam", "10", "--nmax", "40"],
            opts.outdir / f"scalar_error_alpha_{alpha.replace('.', 'p')}.csv",
        )

    # operator norm error on a stiff diagonal spectrum, per truncation variant
    for variant in MATRIX_VARIANTS:
        run(
            [
                "matrix-error",
                "--alpha", "0.5",
                "--nmax", "60",
                "--op", "diagpow:100:8",
                "--variant", variant,
            ],
            opts.outdir / f"matrix_error_{variant}.csv",
        )

    # inversion-budget comparison against the sinc baseline
    run(
        [
            "compare",
            "--alpha", "0.5",
            "--spectrum", "diagpow:100:8",
            "--solves", "11,21,31,41,61,81",
        ],
        opts.outdir / "compare_budgets.csv",
    )

    # order selection across tolerances
    for tol in ("1e-2", "1e-4", "1e-6", "1e-8"):
        run(
            ["select-n", "--alpha", "0.5", "--tol", tol],
            opts.outdir / f"select_n_tol_{tol.replace('-', 'm')}.csv",
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
