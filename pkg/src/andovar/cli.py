"""Command-line surface.

Exit codes: 0 success, 1 usage or parse error, 2 validation failure,
3 numeric failure.  The ANDOVAR_THREADS environment variable caps BLAS
parallelism (via threadpoolctl when available); all library-level grid
reductions are order-fixed and sequential, so outputs are reproducible for
a fixed seed regardless of the cap.
"""

from __future__ import annotations

import contextlib
import os
import sys

import click
import numpy as np

from . import matrix_core as mc
from . import serialize
from .colligation import build_colligation
from .dilation import (
    build_dilation,
    compression_residuals,
    intertwining_residuals,
    minimality_defect,
    mpsi_isometry_residual,
)
from .errors import (
    AndovarError,
    InputError,
    NumericError,
    PurityError,
    ValidationError,
)
from .pair_analysis import (
    GENERATOR_KINDS,
    ContractionPair,
    Tolerances,
    defect,
    generate_pair,
    validate_pair,
)
from .transfer import adjoint_transfer, boundary_scan, canonical_split
from .variety import boundary_samples, sample_to_csv, sample_to_svg
from .vn import (
    DEFAULT_N_THETA,
    DEFAULT_TORUS_GRID,
    BivariatePolynomial,
    vn_report,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3


def _thread_limiter():
    """Context manager honoring ANDOVAR_THREADS when threadpoolctl exists."""
    raw = os.environ.get("ANDOVAR_THREADS")
    if not raw:
        return contextlib.nullcontext()
    try:
        cap = max(1, int(raw))
    except ValueError:
        raise InputError(f"ANDOVAR_THREADS must be a positive integer, got {raw!r}")
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        return contextlib.nullcontext()
    return threadpool_limits(limits=cap)


def _tolerances(ctx_params: dict) -> Tolerances:
    overrides = {}
    for key, field in (("tol_commute", "commute"), ("tol_contract", "contract"),
                       ("tol_pure", "pure"), ("rank_tol", "rank"),
                       ("tol_trunc", "trunc")):
        value = ctx_params.get(key)
        if value is None:
            continue
        if value < 0:
            raise click.UsageError(f"--{key.replace('_', '-')} must be >= 0")
        overrides[field] = value
    tol = Tolerances(**overrides)
    if ctx_params.get("strict"):
        tol = tol.halved()
    return tol


def _tol_options(fn):
    for decorator in reversed((
        click.option("--tol-commute", type=float, default=None,
                     help="Commutation tolerance (default 1e-10 * dim)."),
        click.option("--tol-contract", type=float, default=None,
                     help="Contractivity tolerance (default 1e-10)."),
        click.option("--tol-pure", type=float, default=None,
                     help="Purity margin on the spectral radius (default 1e-8)."),
        click.option("--rank-tol", type=float, default=None,
                     help="Defect rank threshold (default 1e-10)."),
        click.option("--tol-trunc", type=float, default=None,
                     help="Hardy-space truncation tail target (default 1e-9)."),
        click.option("--strict", is_flag=True, help="Halve every tolerance."),
    )):
        fn = decorator(fn)
    return fn


def _require_pure_t1(pair: ContractionPair, tol: Tolerances):
    rho = mc.spectral_radius(pair.T1)
    if rho >= 1.0 - tol.pure:
        raise PurityError(
            "this command requires a pure T1 (spectral radius < 1)",
            spectral_radius=rho,
        )


def _read_pair(path: str, tol: Tolerances) -> ContractionPair:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            T1, T2 = serialize.pair_from_json(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read pair file {path}: {exc}") from exc
    return ContractionPair.create(T1, T2, tol)


def _write_output(text: str, output: str | None):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@click.group()
def cli():
    """Dilation, inner-multiplier and variety computations for commuting
    contractive matrix pairs."""


@cli.command()
@click.argument("pair_file", type=click.Path())
@_tol_options
def check(pair_file, **params):
    """Validate a pair file; print the analysis report as JSON."""
    tol = _tolerances(params)
    try:
        with open(pair_file, "r", encoding="utf-8") as fh:
            T1, T2 = serialize.pair_from_json(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read pair file {pair_file}: {exc}") from exc
    report = validate_pair(T1, T2, tol)
    click.echo(serialize.dumps(report.to_dict()), nl=False)


@cli.command()
@click.argument("pair_file", type=click.Path())
@click.option("--output", "-o", type=click.Path(), default=None)
@_tol_options
def colligation(pair_file, output, **params):
    """Build the canonical unitary colligation; emit blocks and bases."""
    tol = _tolerances(params)
    pair = _read_pair(pair_file, tol)
    d1 = defect(pair.T1, tol.rank)
    d2 = defect(pair.T2, tol.rank)
    coll = build_colligation(pair, d1, d2)
    payload = coll.to_dict()
    payload["unitarity_residual"] = coll.unitarity_residual()
    _write_output(serialize.dumps(payload), output)


@cli.command()
@click.argument("pair_file", type=click.Path())
@click.option("--theta-samples", type=int, default=DEFAULT_N_THETA, show_default=True)
@click.option("--output", "-o", type=click.Path(), default=None,
              help="Destination (stdout if omitted).")
@click.option("--format", "fmt", type=click.Choice(["csv", "svg"]), default="csv",
              show_default=True, help="Output format.")
@_tol_options
def variety(pair_file, theta_samples, output, fmt, **params):
    """Sample the variety boundary; write CSV or a static scatter SVG."""
    tol = _tolerances(params)
    pair = _read_pair(pair_file, tol)
    _require_pure_t1(pair, tol)
    d1 = defect(pair.T1, tol.rank)
    d2 = defect(pair.T2, tol.rank)
    coll = build_colligation(pair, d1, d2)
    split = canonical_split(mc.adjoint(coll.A), tol_pure=tol.pure)
    sample = boundary_samples(coll, split, theta_samples)
    render = sample_to_csv if fmt == "csv" else sample_to_svg
    _write_output(render(sample), output)
    n_v0 = sum(1 for k in sample.kinds if k == "V0")
    n_v1 = len(sample.kinds) - n_v0
    max_res = max(sample.residuals) if sample.residuals else 0.0
    click.echo(
        f"# V0 points: {n_v0}, V1 points: {n_v1}, skipped thetas: "
        f"{len(sample.skipped_thetas)}, max membership residual: {max_res:.3e}",
        err=True,
    )


@cli.command()
@click.argument("pair_file", type=click.Path())
@click.argument("poly_file", type=click.Path())
@click.option("--theta-samples", type=int, default=DEFAULT_N_THETA, show_default=True)
@click.option("--torus-grid", type=int, default=DEFAULT_TORUS_GRID, show_default=True)
@click.option("--output", "-o", type=click.Path(), default=None)
@_tol_options
def vn(pair_file, poly_file, theta_samples, torus_grid, output, **params):
    """Certify the norm chain for a polynomial; emit the report as JSON."""
    tol = _tolerances(params)
    pair = _read_pair(pair_file, tol)
    try:
        with open(poly_file, "r", encoding="utf-8") as fh:
            coeffs = serialize.poly_from_json(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read polynomial file {poly_file}: {exc}") from exc
    p = BivariatePolynomial(coeffs)
    report = vn_report(pair, p, n_theta=theta_samples, torus_grid=torus_grid)
    _write_output(serialize.dumps(report.to_dict()), output)


@cli.command()
@click.argument("pair_file", type=click.Path())
@click.option("--truncation", default="auto", show_default=True,
              help="Truncation degree: 'auto' or an explicit integer.")
@click.option("--dump", type=click.Path(), default=None,
              help="Write Pi/Mz/MPsi matrices as JSON for debugging.")
@_tol_options
def dilate(pair_file, truncation, dump, **params):
    """Build the truncated dilation; print residuals and bounds as JSON."""
    tol = _tolerances(params)
    pair = _read_pair(pair_file, tol)
    d1 = defect(pair.T1, tol.rank)
    d2 = defect(pair.T2, tol.rank)
    coll = build_colligation(pair, d1, d2)
    if truncation == "auto":
        N = None
    else:
        try:
            N = int(truncation)
        except ValueError:
            raise click.UsageError("--truncation must be 'auto' or an integer")
    dil = build_dilation(pair, coll, d1, N=N, tol_trunc=tol.trunc, tol_pure=tol.pure)
    inter = intertwining_residuals(dil, pair)
    comp = compression_residuals(dil, pair)
    iso = mpsi_isometry_residual(dil, coll)
    payload = {
        "N": dil.N,
        "rows": dil.rows,
        "tail_bound": dil.tail_bound,
        "isometry_defect": mc.operator_norm(
            mc.adjoint(dil.Pi) @ dil.Pi - np.eye(dil.n)),
        "res_z": inter.res_z,
        "res_psi": inter.res_psi,
        "bound_z": inter.bound_z,
        "bound_psi": inter.bound_psi,
        "compression_t1": comp.res_t1,
        "compression_t2": comp.res_t2,
        "minimality_defect": minimality_defect(dil),
        "mpsi_isometry_raw": iso.raw,
        "mpsi_isometry_restricted": iso.restricted,
        "q_eff": iso.q_eff,
    }
    click.echo(serialize.dumps(payload), nl=False)
    if dump:
        matrices = {
            "Pi": serialize.matrix_to_nested(dil.Pi),
            "Mz": serialize.matrix_to_nested(dil.Mz),
            "MPsi": serialize.matrix_to_nested(dil.MPsi),
        }
        with open(dump, "w", encoding="utf-8") as fh:
            fh.write(serialize.dumps(matrices))


@cli.command()
@click.argument("kind", type=click.Choice(GENERATOR_KINDS))
@click.option("--dim", type=int, default=4, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--radius", type=float, default=0.9, show_default=True,
              help="Norm bound keeping the pair strictly contractive.")
@click.option("--output", "-o", type=click.Path(), default=None)
def gen(kind, dim, seed, radius, output):
    """Generate an exactly-commuting contractive test pair."""
    T1, T2 = generate_pair(kind, dim, seed, radius=radius)
    _write_output(serialize.pair_to_json(T1, T2), output)


@cli.command()
@click.argument("name", type=click.Choice(["shift"]))
@click.option("--m", "m", type=int, default=2, show_default=True,
              help="Fiber dimension of the zero pair.")
def demo(name, m):
    """Canned end-to-end scenario on the pair of zero matrices on C^m.

    The colligation is [[0, W], [I, 0]] with the convention W = I, the
    multiplier is z -> z W*, and the variety is the diagonal z2 = z1.
    """
    if m < 1:
        raise click.UsageError("--m must be >= 1")
    Z = np.zeros((m, m), complex)
    pair = ContractionPair.create(Z, Z)
    d1 = defect(pair.T1)
    d2 = defect(pair.T2)
    coll = build_colligation(pair, d1, d2)
    split = canonical_split(mc.adjoint(coll.A))
    psi = adjoint_transfer(coll)
    sample = boundary_samples(coll, split, 90)
    max_diag_dev = max(abs(z2 - z1) for z1, z2 in sample.points)
    p = BivariatePolynomial(np.array([[0, -1], [1, 0]], complex))  # z1 - z2
    report = vn_report(pair, p, coll=coll, split=split)
    scan = boundary_scan(psi, 90)
    payload = {
        "m": m,
        "colligation": {
            "A_norm": mc.operator_norm(coll.A),
            "B_equals_identity": bool(mc.operator_norm(coll.B - np.eye(m)) < 1e-12),
            "C_equals_identity": bool(mc.operator_norm(coll.C - np.eye(m)) < 1e-12),
            "D_norm": mc.operator_norm(coll.D),
        },
        "psi_symbol": "z * W^* with W = I",
        "variety": "diagonal z2 = z1",
        "max_diagonal_deviation": max_diag_dev,
        "boundary_unitarity_deviation": scan.max_deviation(),
        "vn": report.to_dict(),
    }
    click.echo(serialize.dumps(payload), nl=False)


def main(argv=None) -> int:
    try:
        with _thread_limiter():
            cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.UsageError as exc:
        exc.show()
        return EXIT_USAGE
    except click.Abort:
        return EXIT_USAGE
    except InputError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    except ValidationError as exc:
        click.echo(serialize.dumps({
            "error": str(exc),
            "details": {k: _plain(v) for k, v in exc.details.items()},
        }), nl=False)
        return EXIT_VALIDATION
    except NumericError as exc:
        click.echo(f"numeric failure: {exc}", err=True)
        return EXIT_NUMERIC
    except AndovarError as exc:
        click.echo(f"failure: {exc}", err=True)
        return EXIT_NUMERIC
    return EXIT_OK


def _plain(v):
    if isinstance(v, (np.floating, np.integer)):
        return float(v)
    if isinstance(v, tuple):
        return list(v)
    return v


def entry():  # console-script target
    sys.exit(main())


if __name__ == "__main__":
    entry()
