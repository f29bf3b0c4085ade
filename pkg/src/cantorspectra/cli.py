"""Command-line entry point wiring the library together.

Subcommands: dimension, spectrum scan, spectrum surgery-check, sumset, and
demo main-theorem.  Outputs are deterministic for a fixed configuration and
seed; every numeric in JSON output carries either an exact tag or an
explicit enclosure.  Computational refusals (a failed thickness hypothesis,
a demo stage failure) exit 0 with a structured report; usage errors exit 2.
"""

from __future__ import annotations

import ast
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import __version__
from .cantor import CantorPresentation, preset as cantor_preset
from .dimension import dimension_bounds
from .errors import CoverBlowupError, InputError
from .horseshoe import demo_main, demo_refusal, main_theorem_demo
from .spectra import (
    CFObservable,
    TableObservable,
    random_identity_suite,
    spectrum_scan,
)
from .surd import SurdSum
from .sumsets import (
    CertificateRefusal,
    certify_interval,
    measure_upper_bound,
    sum_cover,
)
from .svgplot import convergence_figure, cover_figure, spectrum_rug
from .symbolic import TransitionMatrix


def _out_dir() -> Path:
    return Path(os.environ.get("CANTORSPECTRA_OUT", "."))


def _write(path: str, content: str) -> None:
    p = _out_dir() / path
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(content)
    click.echo(f"wrote {p}")


def _load_presentation(preset_name, file_path) -> CantorPresentation:
    if (preset_name is None) == (file_path is None):
        raise click.UsageError("give exactly one of --preset or a JSON file")
    if preset_name is not None:
        try:
            return cantor_preset(preset_name)
        except InputError as exc:
            raise click.UsageError(str(exc))
    return CantorPresentation.from_json(json.loads(Path(file_path).read_text()))


def _eval_exact(text: str) -> SurdSum:
    """Evaluate a tiny arithmetic expression (sqrt, + - * /, numbers) into
    an exact value; float literals are taken at their exact binary value."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                return a / b
            raise click.UsageError("unsupported operator")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        if isinstance(node, ast.Call) and getattr(node.func, "id", "") == "sqrt":
            arg = ev(node.args[0])
            return SurdSum.sqrt(arg.as_fraction())
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return SurdSum.rational(Fraction(node.value))
        raise click.UsageError(f"cannot evaluate {ast.dump(node)}")

    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except SyntaxError as exc:
        raise click.UsageError(f"bad expression {text!r}: {exc}")


@click.group()
@click.version_option(version=__version__, prog_name="cantorspectra")
def main() -> None:
    """Cantor sets, dimension bounds, Markov/Lagrange spectra, sumset
    certificates."""


# ---------------------------------------------------------------------------
# dimension
# ---------------------------------------------------------------------------


@main.command()
@click.option("--preset", "preset_name", help="c2..c9 | kalpha:<fraction> | middle-third")
@click.option("--presentation", "file_path", type=click.Path(exists=True),
              help="presentation JSON file")
@click.option("--depth", default=6, show_default=True)
@click.option("--constant-c", default="1", show_default=True,
              help="constant C of the upper pressure equation")
@click.option("--tol", default=1e-12, show_default=True)
@click.option("--out", default="bounds.json", show_default=True)
@click.option("--svg", default=None, help="write a convergence figure")
def dimension(preset_name, file_path, depth, constant_c, tol, out, svg):
    """Pressure-equation dimension bounds for a Cantor presentation."""
    K = _load_presentation(preset_name, file_path)
    if depth < 1:
        raise click.UsageError("depth must be >= 1")
    rows = []
    for n in range(1, depth + 1):
        rows.append(dimension_bounds(K, n, Fraction(constant_c), tol))
    doc = {
        "presentation": K.name or "custom",
        "depth": depth,
        "bounds": rows[-1].to_json(),
        "history": [
            {"depth": b.depth, "alpha_n": b.alpha_n, "beta_n": b.beta_n,
             "gap_bound": b.gap_bound}
            for b in rows
        ],
    }
    _write(out, json.dumps(doc, indent=1, sort_keys=True) + "\n")
    if svg:
        _write(svg, convergence_figure(
            [b.depth for b in rows], [b.alpha_n for b in rows],
            [b.beta_n for b in rows],
        ))


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------


@main.group()
def spectrum() -> None:
    """Markov/Lagrange spectrum computations."""


def _full_digit_shift(name: str) -> tuple[TransitionMatrix, int]:
    if not name.startswith("full"):
        raise click.UsageError("spectrum presets are full2, full3, full4, ...")
    n = int(name[4:])
    if n < 1:
        raise click.UsageError("alphabet size must be >= 1")
    return TransitionMatrix.full_shift(n), 1


@spectrum.command()
@click.option("--preset", "preset_name", default=None,
              help="fullN: digit alphabet {1..N}")
@click.option("--sft", "sft_path", type=click.Path(exists=True),
              help="transition matrix JSON")
@click.option("--observable", default="cf", show_default=True,
              type=click.Choice(["cf", "coord"]))
@click.option("--max-period", default=6, show_default=True)
@click.option("--out", default="samples.csv", show_default=True)
@click.option("--json", "json_out", default=None)
@click.option("--svg", default=None)
def scan(preset_name, sft_path, observable, max_period, out, json_out, svg):
    """Markov values of all periodic orbits up to a period bound."""
    if (preset_name is None) == (sft_path is None):
        raise click.UsageError("give exactly one of --preset or --sft")
    if preset_name:
        matrix, offset = _full_digit_shift(preset_name)
    else:
        matrix = TransitionMatrix.from_json(json.loads(Path(sft_path).read_text()))
        offset = 1
    if observable == "cf":
        f = CFObservable(digit_offset=offset)
    else:
        f = TableObservable.coordinate(matrix.n)
    result = spectrum_scan(f, matrix, max_period)
    _write(out, result.to_csv())
    if json_out:
        doc = {
            "max_period": max_period,
            "observable": observable,
            "count": len(result.samples),
            "samples": [s.to_json() for s in result.samples],
            "gaps": [float(g) for g in result.gaps],
        }
        _write(json_out, json.dumps(doc, indent=1, sort_keys=True) + "\n")
    if svg:
        _write(svg, spectrum_rug([float(v) for v in result.values],
                                 f"markov values, period <= {max_period}"))
    click.echo(f"{len(result.samples)} distinct values; "
               f"min {float(result.values[0]):.9f} max {float(result.values[-1]):.9f}")


@spectrum.command("surgery-check")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="JSON: {\"seed\": int, \"instances\": int}")
@click.option("--seed", default=0, show_default=True)
@click.option("--instances", default=100, show_default=True)
@click.option("--out", default="surgery-report.json", show_default=True)
def surgery_check(config_path, seed, instances, out):
    """Randomized verification of the splice sup/limsup identities."""
    if config_path:
        cfg = json.loads(Path(config_path).read_text())
        seed = cfg.get("seed", seed)
        instances = cfg.get("instances", instances)
    report = random_identity_suite(seed, instances)
    doc = {"seed": seed, **report.to_json()}
    _write(out, json.dumps(doc, indent=1, sort_keys=True) + "\n")
    click.echo(("PASS" if report.all_pass else "FAIL") +
               f": {instances} instances, seed {seed}")
    if not report.all_pass:
        sys.exit(1)


# ---------------------------------------------------------------------------
# sumset
# ---------------------------------------------------------------------------


@main.command()
@click.option("--preset", "preset_name", default=None,
              help="use the same preset for both sides")
@click.option("--left", "left_path", type=click.Path(exists=True), default=None)
@click.option("--right", "right_path", type=click.Path(exists=True), default=None)
@click.option("--op", default="plus", show_default=True,
              type=click.Choice(["plus", "minus"]))
@click.option("--depth", default=5, show_default=True)
@click.option("--certify", "certify_range", default=None,
              help='"auto" or "<exact lo>,<exact hi>" (sqrt() allowed)')
@click.option("--out-prefix", default="sumset", show_default=True)
def sumset(preset_name, left_path, right_path, op, depth, certify_range, out_prefix):
    """Covers and interval certificates for K + K' or K - K'."""
    if preset_name:
        K = cantor_preset(preset_name)
        K2 = cantor_preset(preset_name)
    else:
        if not (left_path and right_path):
            raise click.UsageError("give --preset or both --left and --right")
        K = CantorPresentation.from_json(json.loads(Path(left_path).read_text()))
        K2 = CantorPresentation.from_json(json.loads(Path(right_path).read_text()))
    coeff = (1, 1) if op == "plus" else (1, -1)
    try:
        cover = sum_cover(K, K2, depth, coeff)
    except CoverBlowupError as exc:
        raise click.ClickException(str(exc))
    _write(f"{out_prefix}-cover.csv", cover.union.to_csv())
    doc = {
        "op": op,
        "depth": depth,
        "materialized_depth": cover.materialized_depth,
        "measure_upper_bound": {
            "exact": str(measure_upper_bound(cover)),
            "value": float(measure_upper_bound(cover)),
        },
        "components": len(cover.union),
        "geometric_from": cover.geometric_from,
    }
    certificate_doc = None
    if certify_range:
        if certify_range == "auto":
            hull = cover.union.hull
            width = hull[1] - hull[0]
            lo = SurdSum.rational(hull[0] + width / 1000)
            hi = SurdSum.rational(hull[1] - width / 1000)
        else:
            parts = certify_range.split(",")
            if len(parts) != 2:
                raise click.UsageError("--certify wants 'lo,hi' or 'auto'")
            lo, hi = _eval_exact(parts[0]), _eval_exact(parts[1])
        result = certify_interval(K, K2, (lo, hi), depth, op)
        certificate_doc = result.to_json()
        if isinstance(result, CertificateRefusal):
            click.echo(f"refusal: {result.reason}")
        else:
            click.echo("certified interval "
                       f"[{float(result.lo):.9f}, {float(result.hi):.9f}]")
    doc["certificate"] = certificate_doc
    _write(f"{out_prefix}-report.json", json.dumps(doc, indent=1, sort_keys=True) + "\n")
    rows = [("left cover", K.cover_union(min(depth, 6))),
            ("right cover", K2.cover_union(min(depth, 6))),
            (f"{op} cover", cover.union)]
    highlight = None
    if certificate_doc and not certificate_doc.get("refused"):
        highlight = tuple(certificate_doc["certified_interval"])
    _write(f"{out_prefix}.svg", cover_figure(rows, highlight))


# ---------------------------------------------------------------------------
# demo
# ---------------------------------------------------------------------------


@main.group()
def demo() -> None:
    """End-to-end demonstrations."""


@demo.command("main-theorem")
@click.option("--config", "config_name", default="builtin-main", show_default=True,
              type=click.Choice(["builtin-main", "builtin-refusal"]))
@click.option("--out", default="demo-report.json", show_default=True)
def demo_main_theorem(config_name, out):
    """Run the interior-interval pipeline on a shipped configuration."""
    H, fmap, config = demo_main() if config_name == "builtin-main" else demo_refusal()
    report = main_theorem_demo(H, fmap, config)
    doc = {"config": config_name, "parameters": config.to_json(),
           **report.to_json()}
    _write(out, json.dumps(doc, indent=1, sort_keys=True) + "\n")
    if report.succeeded:
        click.echo(f"certified interval {report.certified_interval} "
                   f"(length {report.certified_length:.6g}) inside the "
                   "Markov/Lagrange spectrum approximations")
    else:
        click.echo(f"pipeline stopped: {report.refusal}")


if __name__ == "__main__":
    main()
