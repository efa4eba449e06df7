"""
g2nu Command Line

Entry point for validating orbifold specs, analysing their singular sets,
computing eta and nu invariants, running the Maslov cross-check and the
oracle sweeps, and printing the summary report.

Reports go to stdout; logs and structured error records go to stderr.
"""

import functools
import json
import logging
import sys
from collections.abc import Callable
from typing import Any

import click

from g2nu.config import Settings, get_settings, validate_required_settings
from g2nu.core.errors import EXIT_ORACLE, G2NuError, NotApplicable, OracleFailure
from g2nu.models import OrbifoldSpec
from g2nu.services.catalog import BUILTIN_NAMES, builtin_examples, load_spec, validate_spec
from g2nu.services.group import fixed_point_set
from g2nu.services.maslov import tcs_cross_check
from g2nu.services.nu import analyze_spec, compute_nu, eta_values
from g2nu.services.oracle import run_oracle_suite
from g2nu.services.report import REPORT_FORMATS, build_rows, render
from g2nu.utils.rationals import format_rational

logger = logging.getLogger(__name__)

MASLOV_DEFAULTS = ("ex07", "ex08", "ex09", "ex11", "ex13")


# ============================================================================
# Plumbing
# ============================================================================

def _configure_logging(settings: Settings) -> None:
    logging.basicConfig(
        level=settings.log_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def _run_settings(ctx: click.Context, **overrides: Any) -> Settings:
    """Settings for this run with CLI overrides; the cached singleton is left alone."""
    settings: Settings = ctx.obj["settings"]
    update = {key: value for key, value in overrides.items() if value is not None}
    return settings.model_copy(update=update) if update else settings


def handle_errors(command: Callable) -> Callable:
    """Turn library errors into one JSON record on stderr and the family's exit code."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except G2NuError as exc:
            level = logging.ERROR if isinstance(exc, OracleFailure) else logging.WARNING
            logger.log(level, "command_failed", extra={"event": "command_failed",
                                                       "code": exc.code})
            click.echo(json.dumps(exc.to_record()), err=True)
            sys.exit(exc.exit_code)

    return wrapper


def _spec_option(command: Callable) -> Callable:
    return click.option("--ell-parity", type=click.Choice(["even", "odd"]), default=None,
                        help="Resolution variant for Examples 1-6")(command)


def _load(ctx: click.Context, ref: str, ell_parity: str | None) -> tuple[OrbifoldSpec, Settings]:
    settings = _run_settings(ctx, ELL_PARITY=ell_parity)
    return load_spec(ref, settings.ELL_PARITY, settings), settings


# ============================================================================
# Commands
# ============================================================================

@click.group()
@click.option("--log-level", default=None, help="Override G2NU_LOG_LEVEL")
@click.option("--precision", type=click.IntRange(min=15), default=None,
              help="mpmath working precision in decimal digits")
@click.pass_context
def cli(ctx: click.Context, log_level: str | None, precision: int | None) -> None:
    """Exact nu-invariants of flat G2-orbifolds T^7/Gamma."""
    validate_required_settings()
    settings = get_settings()
    update: dict[str, Any] = {}
    if log_level:
        update["LOG_LEVEL"] = log_level.upper()
    if precision:
        update["PRECISION_DIGITS"] = precision
    settings = settings.model_copy(update=update) if update else settings
    _configure_logging(settings)
    ctx.obj = {"settings": settings}


@cli.command()
@click.argument("spec_ref")
@_spec_option
@click.pass_context
@handle_errors
def validate(ctx: click.Context, spec_ref: str, ell_parity: str | None) -> None:
    """Check the invariants of a spec file or built-in example."""
    spec, settings = _load(ctx, spec_ref, ell_parity)
    for line in validate_spec(spec, settings):
        click.echo(f"ok  {line}")
    click.echo(f"{spec.name}: valid")


@cli.command()
@click.argument("spec_ref")
@_spec_option
@click.pass_context
@handle_errors
def analyze(ctx: click.Context, spec_ref: str, ell_parity: str | None) -> None:
    """Group order, fixed points, singular locus and hypothesis verdict."""
    spec, settings = _load(ctx, spec_ref, ell_parity)
    analysis = analyze_spec(spec, settings)
    click.echo(f"{spec.name}: |Gamma| = {analysis.group.order}, b1 = {analysis.b1}")
    for g in analysis.group.elements[1:]:
        fixed = fixed_point_set(g)
        text = "free" if fixed.empty else f"{fixed.component_count} x T^{fixed.dimension}"
        click.echo(f"  {g.label}: {text}")
    for i, comp in enumerate(analysis.components):
        click.echo(f"  component {i}: T^{comp.representative_fix_dim}, orbit {comp.orbit_size}, "
                   f"|B| = {comp.normalizer_quotient_order}, A = {comp.transversal_group_tag}"
                   + (", half screw" if comp.half_screw else ""))
    click.echo(f"hypothesis: {analysis.verdict.level.value}")
    for note in analysis.verdict.witness_notes:
        click.echo(f"  - {note}")


@cli.command()
@click.argument("spec_ref")
@_spec_option
@click.pass_context
@handle_errors
def eta(ctx: click.Context, spec_ref: str, ell_parity: str | None) -> None:
    """Signature and Dirac eta invariants with provenance."""
    spec, settings = _load(ctx, spec_ref, ell_parity)
    eta_b, eta_d = eta_values(analyze_spec(spec, settings), settings)
    for name, value in (("eta(B)", eta_b), ("eta(D)", eta_d)):
        click.echo(f"{name} = {format_rational(value.exact)}  "  # type: ignore[arg-type]
                   f"[{value.provenance.value}, {value.tier.value}, numeric {value.numeric:.12g}]")


@cli.command()
@click.argument("spec_ref")
@_spec_option
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
@handle_errors
def nu(ctx: click.Context, spec_ref: str, ell_parity: str | None, fmt: str) -> None:
    """The nu-invariant and its derivation."""
    spec, settings = _load(ctx, spec_ref, ell_parity)
    result = compute_nu(spec, settings)
    if fmt == "json":
        click.echo(result.model_dump_json())
        return
    click.echo(result.headline)
    for line in result.derivation_log:
        click.echo(f"  {line}")


@cli.command()
@click.argument("spec_refs", nargs=-1)
@click.pass_context
@handle_errors
def maslov(ctx: click.Context, spec_refs: tuple[str, ...]) -> None:
    """Maslov indices of the gluing Lagrangians against the eta invariants."""
    settings = _run_settings(ctx)
    mismatches = []
    for ref in spec_refs or MASLOV_DEFAULTS:
        spec = load_spec(ref, settings.ELL_PARITY, settings)
        try:
            report = tcs_cross_check(spec, settings)
        except NotApplicable as exc:
            click.echo(f"{spec.name}: skipped ({exc.message})")
            continue
        dirac = ("integer" if report.dirac_agrees_integer
                 else "mod Z" if report.dirac_agrees_mod_z else "MISMATCH")
        click.echo(f"{spec.name}: m(H3) = {format_rational(report.signature_maslov.exact)} "  # type: ignore[arg-type]
                   f"vs eta(B) = {format_rational(report.eta_sign.exact)} "  # type: ignore[arg-type]
                   f"[{'ok' if report.signature_agrees else 'MISMATCH'}]; "
                   f"m(S) = {format_rational(report.dirac_maslov.exact)} "  # type: ignore[arg-type]
                   f"vs eta(D) = {format_rational(report.eta_dirac.exact)} [{dirac}]")  # type: ignore[arg-type]
        for line in report.swap_check:
            click.echo(f"  {line}")
        if not (report.signature_agrees and report.dirac_agrees_mod_z):
            mismatches.append(spec.name)
    if mismatches:
        raise OracleFailure("Maslov cross-check failed", examples=",".join(mismatches))


@cli.command()
@click.argument("spec_refs", nargs=-1)
@click.option("--shells", type=click.IntRange(min=1), default=None, help="Dual shells per element")
@click.pass_context
@handle_errors
def oracle(ctx: click.Context, spec_refs: tuple[str, ...], shells: int | None) -> None:
    """Numeric verification sweeps."""
    settings = _run_settings(ctx, ORACLE_SHELLS=shells)
    refs = spec_refs or BUILTIN_NAMES
    specs = [load_spec(ref, settings.ELL_PARITY, settings) for ref in refs]
    reports = run_oracle_suite(specs, settings.ORACLE_SHELLS, settings)
    for report in reports:
        status = "pass" if report.passed else "FAIL"
        click.echo(f"{status}  {report.check_name}: {report.instances} instances, "
                   f"max deviation {report.max_abs_deviation:.3e} (tolerance {report.tolerance:g})")
    failed = [r.check_name for r in reports if not r.passed]
    if failed:
        raise OracleFailure(f"{len(failed)} oracle check(s) failed", checks=",".join(failed))


@cli.command()
@click.option("--format", "fmt", type=click.Choice(REPORT_FORMATS), default="md")
@_spec_option
@click.pass_context
@handle_errors
def report(ctx: click.Context, fmt: str, ell_parity: str | None) -> None:
    """All built-in examples as one table."""
    settings = _run_settings(ctx, ELL_PARITY=ell_parity)
    specs = builtin_examples(settings.ELL_PARITY)
    rows = build_rows(specs, settings)
    click.echo(render(rows, fmt, {s.name: s.resolution.pi1 for s in specs}), nl=False)
    if not all(r.checks_passed for r in rows):
        sys.exit(EXIT_ORACLE)


if __name__ == "__main__":
    cli()
