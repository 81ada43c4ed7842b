"""Command-line surface.

Exit codes: 0 success, 1 verification failure, 2 parse or usage error,
3 resource limit, 4 internal invariant breach.  Errors go to stderr with
a machine-parseable prefix: error[CODE]: message.  JSON output is
deterministic: fixed key order, canonical term order, two-space indent.
"""

from __future__ import annotations

import json
import sys

import click

from .chain import stabilization
from .diffop import DiffOp
from .errors import FrobgenError, ParseError
from .frobdecomp import decompose
from .generation import (
    FactoredOperator,
    LocalizationElement,
    apply_to_localization,
    example_quadric_witness,
    frobenius_descent,
    generator_witness,
    power_witness,
    verify_certificate,
)
from .poly import Limits, MonomialOrder, PolyRing


def emit_json(obj):
    click.echo(json.dumps(obj, indent=2))


def fail(exc: FrobgenError):
    click.echo(f"error[{exc.code}]: {exc}", err=True)
    sys.exit(exc.exit_status)


def json_flag(fn):
    return click.option(
        "--json", "local_json", is_flag=True, help="emit JSON instead of text"
    )(fn)


class Settings:
    def __init__(self, p, d, order, as_json, max_exponent, max_terms):
        self.as_json = as_json
        self.ring = PolyRing(
            p,
            d,
            MonomialOrder.from_name(order),
            Limits(max_exponent=max_exponent, max_terms=max_terms),
        )

    def poly(self, text):
        return self.ring.parse(text)


@click.group()
@click.option("--prime", "-p", type=int, required=True, help="prime modulus p")
@click.option("--vars", "-d", "nvars", type=int, required=True, help="number of variables")
@click.option(
    "--order",
    type=click.Choice(["grevlex", "lex"]),
    default="grevlex",
    show_default=True,
    help="monomial order",
)
@click.option("--json", "as_json", is_flag=True, help="emit JSON instead of text")
@click.option("--max-exponent", type=int, default=4096, show_default=True,
              help="abort when any exponent would exceed this cap")
@click.option("--max-terms", type=int, default=5_000_000, show_default=True,
              help="abort when any polynomial would exceed this many terms")
@click.pass_context
def main(ctx, prime, nvars, order, as_json, max_exponent, max_terms):
    """Exact differential-operator witnesses for 1/f over F_p."""
    try:
        ctx.obj = Settings(prime, nvars, order, as_json, max_exponent, max_terms)
    except FrobgenError as exc:
        fail(exc)


@main.command("decompose")
@click.option("-f", "poly_text", required=True, help="polynomial over F_p")
@click.option("-n", "level", type=int, required=True, help="decomposition level")
@json_flag
@click.pass_obj
def cmd_decompose(cfg: Settings, poly_text, level, local_json):
    """Digits of f with respect to the p^n-th powers of the variables."""
    try:
        f = cfg.poly(poly_text)
        dec = decompose(f, level)
        if cfg.as_json or local_json:
            emit_json(dec.to_json())
        else:
            click.echo(f"f = {f}")
            click.echo(f"level n = {level} (p^n = {cfg.ring.p ** level})")
            for alpha in dec.sorted_keys():
                click.echo(f"  alpha = {tuple(alpha)}: root = {dec.parts[alpha]}")
    except FrobgenError as exc:
        fail(exc)


@main.command("chain")
@click.option("-f", "poly_text", required=True, help="polynomial over F_p")
@click.option("--max-level", type=int, default=5, show_default=True)
@json_flag
@click.pass_obj
def cmd_chain(cfg: Settings, poly_text, max_level, local_json):
    """Descending root-ideal chain and its stabilization level."""
    try:
        f = cfg.poly(poly_text)
        result = stabilization(f, max_level)
        if cfg.as_json or local_json:
            emit_json(result.to_json())
        else:
            click.echo(f"f = {f}")
            for lv in result.levels:
                gens = ", ".join(str(g) for g in lv.ideal.generators)
                click.echo(f"  n = {lv.n}: we_dim = {lv.we_dim}, ideal = ({gens})")
            click.echo(f"stabilizes at s = {result.s}")
    except FrobgenError as exc:
        fail(exc)


@main.command("witness")
@click.option("-f", "poly_text", required=True, help="polynomial over F_p")
@click.option("--max-level", type=int, default=5, show_default=True)
@click.option("--expand", is_flag=True, help="expand the operator to a single normal form")
@click.option("-o", "out_path", type=click.Path(dir_okay=False), default=None,
              help="also write the certificate JSON to this file")
@json_flag
@click.pass_obj
def cmd_witness(cfg: Settings, poly_text, max_level, expand, out_path, local_json):
    """Certificate for an operator Q with Q(1/f) = 1/f^p."""
    try:
        f = cfg.poly(poly_text)
        cert = frobenius_descent(f, max_level=max_level, expand=expand)
        data = cert.to_json()
        if out_path:
            with open(out_path, "w") as fh:
                json.dump(data, fh, indent=2)
                fh.write("\n")
        if cfg.as_json or local_json:
            emit_json(data)
        else:
            click.echo(f"f = {f}")
            click.echo(f"s = {cert.s} (operator level bound)")
            if isinstance(cert.operator, FactoredOperator):
                click.echo(f"Q = sum of {len(cert.operator.parts)} factored parts:")
                for alpha, h, op in cert.operator.parts:
                    click.echo(f"  ({h}) o [{op}]")
            else:
                click.echo(f"Q = {cert.operator}")
            for entry in cert.transcript:
                click.echo(f"  check {entry['check']}: {'ok' if entry['ok'] else 'FAILED'}")
            click.echo("verified: true")
    except FrobgenError as exc:
        fail(exc)


@main.command("power-witness")
@click.option("-f", "poly_text", required=True, help="polynomial over F_p")
@click.option("-e", "exponent", type=int, required=True, help="target power 1/f^(p^e)")
@click.option("--max-level", type=int, default=5, show_default=True)
@json_flag
@click.pass_obj
def cmd_power_witness(cfg: Settings, poly_text, exponent, max_level, local_json):
    """Operator mapping 1/f to 1/f^(p^e)."""
    try:
        f = cfg.poly(poly_text)
        op = power_witness(f, exponent, max_level)
        if cfg.as_json or local_json:
            emit_json({"e": exponent, "operator": op.to_json(), "verified": True})
        else:
            click.echo(f"P = {op}")
            click.echo(f"verified: P(1/f) = 1/f^{cfg.ring.p}^{exponent}")
    except FrobgenError as exc:
        fail(exc)


@main.command("gen-witness")
@click.option("-f", "poly_text", required=True, help="polynomial over F_p")
@click.option("-k", "power", type=int, required=True, help="target power 1/f^k")
@click.option("--max-level", type=int, default=5, show_default=True)
@json_flag
@click.pass_obj
def cmd_gen_witness(cfg: Settings, poly_text, power, max_level, local_json):
    """Operator mapping 1/f to 1/f^k."""
    try:
        f = cfg.poly(poly_text)
        op = generator_witness(f, power, max_level)
        if cfg.as_json or local_json:
            emit_json({"k": power, "operator": op.to_json(), "verified": True})
        else:
            click.echo(f"P = {op}")
            click.echo(f"verified: P(1/f) = 1/f^{power}")
    except FrobgenError as exc:
        fail(exc)


@main.command("verify")
@click.option("-c", "cert_path", type=click.Path(exists=True, dir_okay=False), required=True)
@json_flag
@click.pass_obj
def cmd_verify(cfg: Settings, cert_path, local_json):
    """Re-run every transcript check of a certificate from its JSON alone."""
    try:
        with open(cert_path) as fh:
            data = json.load(fh)
        ok, transcript = verify_certificate(data, limits=cfg.ring.limits)
        if cfg.as_json or local_json:
            emit_json({"verified": ok, "transcript": transcript})
        else:
            for entry in transcript:
                click.echo(f"check {entry['check']}: {'ok' if entry['ok'] else 'FAILED'}")
            click.echo(f"verified: {'true' if ok else 'false'}")
        sys.exit(0 if ok else 1)
    except FrobgenError as exc:
        fail(exc)
    except (KeyError, TypeError, ValueError) as exc:
        fail(ParseError(f"malformed certificate: {exc!r}"))


@main.command("apply")
@click.option("--op", "op_path", type=click.Path(exists=True, dir_okay=False), required=True,
              help="operator JSON file")
@click.option("--num", "num_text", required=True, help="numerator polynomial")
@click.option("--denom-level", type=int, required=True, help="denominator is f^(p^t)")
@click.option("-f", "poly_text", required=True, help="localized polynomial f")
@json_flag
@click.pass_obj
def cmd_apply(cfg: Settings, op_path, num_text, denom_level, poly_text, local_json):
    """Apply an operator to the element num / f^(p^t)."""
    try:
        with open(op_path) as fh:
            data = json.load(fh)
        if "factored" in data:
            op = FactoredOperator.from_json(cfg.ring, data)
        else:
            op = DiffOp.from_json(cfg.ring, data)
        f = cfg.poly(poly_text)
        u = LocalizationElement(f, cfg.poly(num_text), denom_level)
        out = apply_to_localization(op, u)
        if cfg.as_json or local_json:
            emit_json(out.to_json())
        else:
            click.echo(str(out))
    except FrobgenError as exc:
        fail(exc)
    except (KeyError, TypeError, ValueError) as exc:
        fail(ParseError(f"malformed operator JSON: {exc!r}"))


@main.command("example-quadric")
@json_flag
@click.pass_obj
def cmd_example_quadric(cfg: Settings, local_json):
    """Closed-form single-term operator for x1^2+x2^2+x3^2+x4^2 (odd p, d=4)."""
    try:
        alpha, a, op = example_quadric_witness(cfg.ring)
        if cfg.as_json or local_json:
            emit_json({"alpha": list(alpha), "a": a, "operator": op.to_json()})
        else:
            click.echo(f"alpha = {tuple(alpha)}")
            click.echo(f"a = {a}")
            click.echo(f"Q = {op}")
            click.echo(f"verified: Q(1/f) = 1/f^{cfg.ring.p}")
    except FrobgenError as exc:
        fail(exc)


@main.command("report")
@click.option("-f", "poly_text", required=True, help="polynomial over F_p")
@click.option("--max-level", type=int, default=5, show_default=True)
@click.option("--out-dir", type=click.Path(file_okay=False), default="frobgen-report",
              show_default=True)
@json_flag
@click.pass_obj
def cmd_report(cfg: Settings, poly_text, max_level, out_dir, local_json):
    """Write chain diagnostics as CSV plus a rendered figure."""
    from .report import write_report

    try:
        f = cfg.poly(poly_text)
        result = stabilization(f, max_level)
        csv_path, png_path = write_report(result, out_dir)
        if cfg.as_json or local_json:
            emit_json({"s": result.s, "csv": csv_path, "figure": png_path})
        else:
            click.echo(f"stabilizes at s = {result.s}")
            click.echo(f"wrote {csv_path}")
            click.echo(f"wrote {png_path}")
    except FrobgenError as exc:
        fail(exc)


if __name__ == "__main__":
    main()
