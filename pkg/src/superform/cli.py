"""Batch command-line interface.

    superform <command> --scene <file> [options]

Commands: integrate, integrate-boundary, check-stokes, check-green,
balance, ma, mixed-ma, corner-locus, smooth-ma, positivity.

Reports are deterministic JSON (sorted keys, rationals as "p/q");
exit codes: 0 success, 1 parse/validation failure, 2 check failure.
With --fig-out a matplotlib rendering of the result is written next to
the report.
"""

import argparse
import sys

from .errors import SuperformError, UnknownCommand, ValidationError
from .forms import Polynomial, PositivityKind, check_positivity
from .integration import (
    green_residual,
    integrate_boundary,
    integrate_top,
    stokes_residual,
)
from .monge_ampere import corner_locus, lse_ma_quadrature, ma_measure, mixed_ma
from .scene import (
    dump_report,
    format_scalar,
    format_vector,
    load_scene,
    measure_to_report,
    save_result,
)

COMMANDS = (
    "integrate",
    "integrate-boundary",
    "check-stokes",
    "check-green",
    "balance",
    "ma",
    "mixed-ma",
    "corner-locus",
    "smooth-ma",
    "positivity",
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CHECK_FAILED = 2


def _need(scene, table, name, what):
    if name is None:
        raise ValidationError("missing --%s" % what)
    if name not in table:
        raise ValidationError("scene defines no %s named %r" % (what, name))
    return table[name]


def _per_cell_report(scene, result):
    return {scene.label_of(i): format_scalar(v)
            for i, v in result.per_cell.items()}


def _per_face_report(result):
    return {"face%d" % i: format_scalar(v) for i, v in result.per_cell.items()}


def run(command, scene, options=None):
    """Execute one CLI command against a loaded scene.

    Returns (report dict, exit code); thin wrapper over the library,
    so reported values equal direct library calls.
    """
    opts = dict(options or {})
    if command not in COMMANDS:
        raise UnknownCommand("unknown command %r" % command)
    report = {"command": command}
    code = EXIT_OK

    if command == "integrate":
        form = _need(scene, scene.forms, opts.get("form"), "form")
        res = integrate_top(form, scene.require_calibration())
        report["form"] = opts.get("form")
        report["value"] = format_scalar(res.value)
        report["per_cell"] = _per_cell_report(scene, res)

    elif command == "integrate-boundary":
        form = _need(scene, scene.forms, opts.get("form"), "form")
        res = integrate_boundary(form, scene.require_calibration())
        report["form"] = opts.get("form")
        report["value"] = format_scalar(res.value)
        report["per_face"] = _per_face_report(res)

    elif command == "check-stokes":
        form = _need(scene, scene.forms, opts.get("form"), "form")
        residual = stokes_residual(form, scene.require_calibration())
        report["form"] = opts.get("form")
        report["residual"] = format_scalar(residual)
        report["pass"] = residual == 0
        code = EXIT_OK if residual == 0 else EXIT_CHECK_FAILED

    elif command == "check-green":
        alpha = _need(scene, scene.forms, opts.get("alpha"), "alpha")
        beta = _need(scene, scene.forms, opts.get("beta"), "beta")
        residual = green_residual(alpha, beta, scene.require_calibration())
        report["alpha"] = opts.get("alpha")
        report["beta"] = opts.get("beta")
        report["residual"] = format_scalar(residual)
        report["pass"] = residual == 0
        code = EXIT_OK if residual == 0 else EXIT_CHECK_FAILED

    elif command == "balance":
        from .calibration import discordance
        cal = scene.require_calibration()
        cx = cal.complex
        bad = []
        for i in cx.cells_of_dim(cal.n - 1):
            if len(cx.parents_of(i)) < 2:
                continue
            disc = discordance(cal, i)
            if not disc.is_zero():
                bad.append({
                    "face": "face%d" % i,
                    "vertices": [format_vector(v) for v in cx.cells[i].vertices],
                    "multivector": format_vector(disc.effective_multivector()),
                })
        report["unbalanced_faces"] = bad
        report["pass"] = not bad
        code = EXIT_OK if not bad else EXIT_CHECK_FAILED

    elif command == "ma":
        poly = _need(scene, scene.polynomials, opts.get("poly"), "poly")
        measure = ma_measure(poly)
        report["poly"] = opts.get("poly")
        report["atoms"] = measure_to_report(measure)
        report["total_mass"] = format_scalar(measure.total_mass())

    elif command == "mixed-ma":
        names = opts.get("polys") or ([opts["poly"]] if opts.get("poly") else None)
        if not names:
            raise ValidationError("missing --poly (repeat it n times)")
        polys = [_need(scene, scene.polynomials, name, "poly") for name in names]
        measure = mixed_ma(polys)
        report["polys"] = list(names)
        report["atoms"] = measure_to_report(measure)
        report["total_mass"] = format_scalar(measure.total_mass())

    elif command == "corner-locus":
        poly = _need(scene, scene.polynomials, opts.get("poly"), "poly")
        surface = corner_locus(poly)
        cx = surface.complex
        cells = []
        for i in cx.maximal_cells:
            cell = cx.cells[i]
            cells.append({
                "vertices": [format_vector(v) for v in cell.vertices],
                "rays": [format_vector(r) for r in cell.rays],
                "weight": format_scalar(surface.weighted.weights[i]),
            })
        report["poly"] = opts.get("poly")
        report["cells"] = cells
        report["balanced"] = surface.is_balanced()

    elif command == "smooth-ma":
        poly = _need(scene, scene.polynomials, opts.get("poly"), "poly")
        params = scene.parameters
        eps = float(opts.get("eps") or params.get("eps", 0.05))
        grid = int(opts.get("grid") or params.get("grid", 200))
        box_name = opts.get("box") or params.get("box")
        box = _need(scene, scene.named_cells, box_name, "box")
        phi_name = opts.get("phi") or params.get("phi")
        if phi_name is not None:
            phi = _need(scene, scene.functions, phi_name, "phi")
        else:
            phi = Polynomial.constant(scene.ambient_dim, 1)
        estimate = lse_ma_quadrature(poly, phi, eps, box, grid)
        pairing = ma_measure(poly).pair_with(phi)
        report["poly"] = opts.get("poly")
        report["epsilon"] = eps
        report["grid"] = grid
        report["estimate"] = estimate
        report["atomic_pairing"] = format_scalar(pairing)
        report["abs_error"] = abs(estimate - float(pairing))

    elif command == "positivity":
        form = _need(scene, scene.forms, opts.get("form"), "form")
        kind = PositivityKind(opts.get("kind") or "positive")
        verdict = check_positivity(form, kind)
        report["form"] = opts.get("form")
        report["kind"] = kind.value
        report["positive"] = bool(verdict)
        code = EXIT_OK if verdict else EXIT_CHECK_FAILED

    return report, code


def build_parser():
    parser = argparse.ArgumentParser(
        prog="superform",
        description="Exact calculus on calibrated polyhedral complexes.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--scene", required=True, help="scene JSON file")
    parser.add_argument("--form", help="form name (integrate/check/positivity)")
    parser.add_argument("--alpha", help="first symmetric form (check-green)")
    parser.add_argument("--beta", help="second symmetric form (check-green)")
    parser.add_argument("--poly", action="append", default=None,
                        help="tropical polynomial name (repeatable for mixed-ma)")
    parser.add_argument("--phi", help="test function name (smooth-ma)")
    parser.add_argument("--eps", type=float, help="smoothing parameter")
    parser.add_argument("--grid", type=int, help="quadrature grid per axis")
    parser.add_argument("--box", help="named cell used as quadrature box")
    parser.add_argument("--kind", choices=[k.value for k in PositivityKind],
                        help="positivity notion to test")
    parser.add_argument("--out", help="write the JSON report to this file")
    parser.add_argument("--fig-out", dest="fig_out",
                        help="render a figure of the result to this file")
    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] not in COMMANDS and not argv[0].startswith("-"):
        sys.stderr.write("unknown command %r\n" % argv[0])
        return EXIT_INVALID
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        scene = load_scene(args.scene)
        options = {
            "form": args.form,
            "alpha": args.alpha,
            "beta": args.beta,
            "polys": args.poly,
            "poly": args.poly[0] if args.poly else None,
            "phi": args.phi,
            "eps": args.eps,
            "grid": args.grid,
            "box": args.box,
            "kind": args.kind,
        }
        report, code = run(args.command, scene, options)
    except SuperformError as exc:
        sys.stderr.write("%s: %s\n" % (type(exc).__name__, exc))
        return EXIT_INVALID
    text = dump_report(report)
    if args.out:
        save_result(report, args.out)
    else:
        sys.stdout.write(text)
    if args.fig_out:
        from . import figures
        figures.render_report(args.command, scene, report, args.fig_out,
                              options)
    return code


if __name__ == "__main__":
    sys.exit(main())
