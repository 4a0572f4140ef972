"""``bipmesh`` command line.

Exit status: 0 success / positive verdict, 1 valid run with a negative
verdict (not bipartite, bound violated, conformity violation), 2 input or
usage error.

Mesh arguments name a node/ele pair (``mesh`` or ``mesh.node`` reads
``mesh.node`` + ``mesh.ele``), a combined file containing a ``#ELE``
separator line, or ``-`` for combined text on standard input. Output paths
follow the same convention; ``-`` writes combined text to standard output.
"""

import argparse
import json
import os
import sys

from . import io as meshio
from .bipartite import (
    ElementColoring,
    adjacency_graph,
    characterization_check,
    connected_components,
    two_color,
)
from .errors import MeshError
from .mesh import check_conformity, euler_characteristic
from .quality import GLOSSARY, mesh_quality, verify_deterioration_bound, verify_shape_inequalities
from .refine import bipartite_refine, bipartite_then_red, red_refine_2d
from .samples import NAMES, sample_mesh

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2


class UsageError(Exception):
    pass


def _stem(path):
    for ext in (".node", ".ele"):
        if path.endswith(ext):
            return path[: -len(ext)]
    return path


def load_mesh(path, stdin=None):
    if path == "-":
        return meshio.read_combined((stdin or sys.stdin).read())
    if os.path.isfile(path) and not path.endswith((".node", ".ele")):
        with open(path) as f:
            text = f.read()
        if any(line.strip() == meshio.ELE_SEPARATOR for line in text.splitlines()):
            return meshio.read_combined(text)
    stem = _stem(path)
    with open(stem + ".node") as f:
        node = f.read()
    with open(stem + ".ele") as f:
        ele = f.read()
    return meshio.read_node_ele(node, ele)


def save_mesh(mesh, path, stdout=None):
    """Write ``mesh``; returns the list of files written (empty for stdout)."""
    if path == "-":
        (stdout or sys.stdout).write(meshio.write_combined(mesh))
        return []
    stem = _stem(path)
    node, ele = meshio.write_node_ele(mesh)
    _write(stem + ".node", node)
    _write(stem + ".ele", ele)
    return [stem + ".node", stem + ".ele"]


def _write(path, text):
    with open(path, "w", newline="\n") as f:
        f.write(text)


def _elements_word(mesh):
    return "triangles" if mesh.dim == 2 else "tetrahedra"


def _emit(args, payload, lines, out):
    if args.report == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write("\n".join(lines) + "\n")


def _hinge_json(mesh, hinge, count):
    if mesh.dim == 2:
        return {"vertex": hinge, "count": count}
    return {"edge": list(hinge), "count": count}


def cmd_check(args, out, err):
    mesh = load_mesh(args.mesh)
    graph = adjacency_graph(mesh)
    comps = connected_components(graph)
    n_comp = max(comps) + 1 if comps else 0
    chi = euler_characteristic(mesh)
    conformity = check_conformity(mesh)
    coloring = two_color(graph)
    bip = isinstance(coloring, ElementColoring)
    charac = characterization_check(mesh, warn=False)

    coloring_json = {"bipartite": bip}
    if bip:
        u, w = coloring.classes()
        coloring_json["class_sizes"] = [len(u), len(w)]
    else:
        coloring_json["witness"] = list(coloring.cycle)
    payload = {
        "command": "check",
        "verdict": "bipartite" if bip else "not bipartite",
        "counts": {"dim": mesh.dim, "vertices": mesh.n_points, "elements": mesh.n_cells},
        "euler_characteristic": chi,
        "simply_connected_proxy": chi == 1,
        "connected": n_comp <= 1,
        "components": n_comp,
        "conformity": conformity.to_dict(),
        "coloring": coloring_json,
        "characterization": {
            "bipartite": charac.verdict,
            "status": charac.status,
            "offenders": [_hinge_json(mesh, h, c) for h, c in charac.offenders.items()],
        },
        "agree": bip == charac.verdict,
    }

    word = _elements_word(mesh)
    lines = [
        f"mesh: {mesh.dim}-D, {mesh.n_points} vertices, {mesh.n_cells} {word}",
        f"euler characteristic: {chi}" + ("" if chi == 1 else " (not simply connected)"),
        f"element graph: {n_comp} component(s)",
        "conformity: ok" if conformity.ok else f"conformity: {len(conformity.violations)} violation(s)",
    ]
    lines += [f"  {v.kind} {list(v.entity)}: {v.detail}" for v in conformity.violations]
    if bip:
        lines.append("bipartite (coloring): yes, classes of size %d and %d" % tuple(coloring_json["class_sizes"]))
    else:
        lines.append("bipartite (coloring): no, odd cycle " + "-".join(map(str, coloring.cycle)))
    lines.append(f"bipartite (even incidence): {'yes' if charac.verdict else 'no'} [{charac.status}]")
    hinge = "vertex" if mesh.dim == 2 else "edge"
    lines += [f"  {hinge} {h}: {c} {word}" for h, c in charac.offenders.items()]
    _emit(args, payload, lines, out)
    return EXIT_OK if bip and conformity.ok else EXIT_NEGATIVE


def cmd_color(args, out, err):
    mesh = load_mesh(args.mesh)
    coloring = two_color(adjacency_graph(mesh))
    if not isinstance(coloring, ElementColoring):
        err.write("not bipartite: odd cycle " + "-".join(map(str, coloring.cycle)) + "\n")
        return EXIT_NEGATIVE
    if args.output == "-":
        out.write(meshio.write_colors(coloring.color))
    elif args.output.endswith(".vtk"):
        _write(args.output, meshio.write_vtk(mesh, coloring=coloring))
    else:
        save_mesh(mesh, args.output)
        _write(_stem(args.output) + ".color", meshio.write_colors(coloring.color))
    return EXIT_OK


def cmd_refine(args, out, err):
    mesh = load_mesh(args.mesh)
    if args.levels < 1:
        raise UsageError("--levels must be at least 1")
    if args.scheme in ("red", "bipartite+red") and mesh.dim != 2:
        raise UsageError(f"--scheme {args.scheme} is only available for triangle meshes")
    if args.center != "barycenter" and mesh.dim != 2:
        raise UsageError("--center incenter is only available for triangle meshes")

    failed = 0
    if args.scheme == "red":
        refined, _ = red_refine_2d(mesh, args.levels)
    elif args.scheme == "bipartite+red":
        refined, _ = bipartite_then_red(mesh, args.levels, center=args.center)
    else:
        refined = mesh
        for _ in range(args.levels):
            if args.verify_bounds and refined.dim == 3:
                failed += sum(not verify_deterioration_bound(t).passed for t in refined.elements())
            refined, _ = bipartite_refine(refined, center=args.center)
    save_mesh(refined, args.output, stdout=out)
    msg = f"refined {mesh.n_cells} -> {refined.n_cells} {_elements_word(mesh)}"
    if args.center == "incenter":
        msg += " (incenter variant, experimental)"
    err.write(msg + "\n")
    if failed:
        err.write(f"deterioration bound failed for {failed} parent(s)\n")
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_quality(args, out, err):
    mesh = load_mesh(args.mesh)
    if args.verify_bounds and mesh.dim != 3:
        raise UsageError("--verify-bounds applies to tetrahedral meshes only")
    report = mesh_quality(mesh)
    payload = {"command": "quality", **report.to_dict(per_element=args.per_element)}
    word = _elements_word(mesh)
    lines = [
        f"mesh: {mesh.dim}-D, {mesh.n_cells} {word}",
        f"mesh size h: {report.h:.6g}",
        f"regularity zeta: {report.zeta:.6g}",
    ]
    if mesh.dim == 3:
        lines.append(f"min mean ratio eta: {report.eta_min:.6g}")
        lines.append(f"min radius ratio theta: {report.theta_min:.6g}")
    ok = True
    if args.verify_bounds:
        shape = [verify_shape_inequalities(t) for t in mesh.elements()]
        deter = [verify_deterioration_bound(t) for t in mesh.elements()]
        shape_fail = [k for k, b in enumerate(shape) if not b.passed]
        deter_fail = [k for k, b in enumerate(deter) if not b.passed]
        ok = not shape_fail and not deter_fail
        payload["bounds"] = {
            "passed": ok,
            "shape_inequalities": {
                "failed_elements": shape_fail,
                "min_slack": min(b.to_dict()["min_slack"] for b in shape),
            },
            "deterioration": {
                "failed_elements": deter_fail,
                "worst_ratio": max(b.worst_ratio for b in deter),
                "ratio_bound": GLOSSARY["mean_ratio_loss"],
            },
        }
        payload["glossary"] = GLOSSARY
        lines.append(f"shape inequalities: {'pass' if not shape_fail else f'FAIL on {len(shape_fail)} element(s)'}")
        lines.append(
            f"deterioration bound: {'pass' if not deter_fail else f'FAIL on {len(deter_fail)} element(s)'}"
            f" (worst eta_K/eta_L {payload['bounds']['deterioration']['worst_ratio']:.6g}"
            f" <= {GLOSSARY['mean_ratio_loss']:.6g})"
        )
    _emit(args, payload, lines, out)
    return EXIT_OK if ok else EXIT_NEGATIVE


def _parse_params(items):
    params = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects key=value, got {item!r}")
        try:
            params[key.strip()] = int(value)
        except ValueError:
            raise UsageError(f"--param {key} must be an integer, got {value!r}") from None
    return params


def cmd_sample(args, out, err):
    mesh = sample_mesh(args.name, **_parse_params(args.param))
    save_mesh(mesh, args.output, stdout=out)
    return EXIT_OK


def cmd_export(args, out, err):
    mesh = load_mesh(args.mesh)
    coloring = two_color(adjacency_graph(mesh))
    if not isinstance(coloring, ElementColoring) or args.no_color:
        coloring = None
    if args.format == "vtk":
        text = meshio.write_vtk(mesh, coloring=coloring, quality=mesh_quality(mesh))
    else:
        text = meshio.write_svg(mesh, coloring=coloring)
    if args.output == "-":
        out.write(text)
    else:
        _write(args.output, text)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="bipmesh", description="Bipartite triangle and tetrahedral meshes.")
    sub = p.add_subparsers(dest="command", required=True)

    def report_flag(sp):
        sp.add_argument("--report", choices=("text", "json"), default="text", help="report format")

    sp = sub.add_parser("check", help="conformity, Euler characteristic and both bipartiteness verdicts")
    sp.add_argument("mesh", nargs="?", default="-")
    report_flag(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("color", help="two-color the elements")
    sp.add_argument("mesh", nargs="?", default="-")
    sp.add_argument("-o", "--output", required=True, help="node/ele stem (+ .color sidecar), .vtk file, or -")
    sp.set_defaults(func=cmd_color)

    sp = sub.add_parser("refine", help="bipartite or red refinement")
    sp.add_argument("mesh", nargs="?", default="-")
    sp.add_argument("--scheme", choices=("bipartite", "red", "bipartite+red"), default="bipartite")
    sp.add_argument("--levels", type=int, default=1)
    sp.add_argument("--center", choices=("barycenter", "incenter"), default="barycenter",
                    help="interior point of 2-D bipartite gridding (incenter is experimental)")
    sp.add_argument("--verify-bounds", action="store_true",
                    help="check the mean-ratio deterioration bound on every refined tetrahedron")
    sp.add_argument("-o", "--output", default="-")
    sp.set_defaults(func=cmd_refine)

    sp = sub.add_parser("quality", help="shape quality report")
    sp.add_argument("mesh", nargs="?", default="-")
    sp.add_argument("--verify-bounds", action="store_true")
    sp.add_argument("--per-element", action="store_true")
    report_flag(sp)
    sp.set_defaults(func=cmd_quality)

    sp = sub.add_parser("sample", help="write a built-in sample mesh")
    sp.add_argument("name", choices=NAMES)
    sp.add_argument("--param", action="append", metavar="KEY=N")
    sp.add_argument("-o", "--output", default="-")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("export", help="VTK or SVG export")
    sp.add_argument("mesh", nargs="?", default="-")
    sp.add_argument("--format", choices=("vtk", "svg"), required=True)
    sp.add_argument("--no-color", action="store_true")
    sp.add_argument("-o", "--output", default="-")
    sp.set_defaults(func=cmd_export)
    return p


def run(argv=None, stdout=None, stderr=None):
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args, out, err)
    except (MeshError, UsageError, OSError, ValueError, TypeError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        err.write(f"bipmesh: error: {msg}\n")
        return EXIT_ERROR


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
