"""
hjelmslev command line

Generate seeds, construct 2-uniform Hjelmslev planes, transform and verify
them, all over the INC 1 / OA 1 / CHOICES 1 text formats. Summaries are
key=value lines on stdout; --verbose adds log output on stderr.

Typical pipeline:
  hjelmslev gen-pp --order 3 -o p3.inc
  hjelmslev gen-ap --projective p3.inc --line 0 -o a3.inc
  hjelmslev gen-oa --order 3 -o oa3.oa
  hjelmslev construct-ph --base p3.inc --affine a3.inc --oa oa3.oa --choices canonical -o h3.inc --emit-choices c3.ch
  hjelmslev verify --ph h3.inc

Exit codes: 0 success, 1 verification failure, 2 bad input.
"""

import argparse
import logging
import sys
from typing import List, Optional, Sequence

from ._choices import ConstructionChoices, canonical_choices, random_choices
from ._config import configure, get_settings
from ._errors import FormatError, HjelmslevError
from ._hjelmslev import HjelmslevPlane, construct_ah, construct_ph, extend_ah, truncate_ph
from ._incidence import IncidenceStructure, canonicalize
from ._io import read_artifact, write_artifact
from ._report import VerificationReport
from ._seeds import (
    AffinePlane,
    FieldSpec,
    OrthogonalArray,
    ProjectivePlane,
    affine_from_projective,
    complete_oa,
    oa_from_affine,
    projective_plane,
    validate_oa,
)
from ._types import Kind
from ._verify import fingerprint, restriction, verify_2_uniform, verify_ah, verify_ph

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BAD_INPUT = 2


def _summary(**fields) -> None:
    for key, value in fields.items():
        print(f"{key}={value}")


def _load(path: str, expected: type):
    obj = read_artifact(path)
    if not isinstance(obj, expected):
        raise FormatError(1, f"{path}: expected {expected.__name__}, found {type(obj).__name__}")
    return obj


def _structure_summary(structure: IncidenceStructure) -> None:
    _summary(points=structure.num_points, lines=structure.num_lines, digest=canonicalize(structure).digest)


def _plane_summary(plane: HjelmslevPlane) -> None:
    _summary(kind=plane.kind, t=plane.t, r=plane.r)
    _structure_summary(plane.structure)


def _choices_for(args: argparse.Namespace, base, neighbourhoods, oas) -> ConstructionChoices:
    if args.choices == "canonical":
        return canonical_choices(base, neighbourhoods, oas)
    if args.choices == "random":
        return random_choices(base, neighbourhoods, oas, args.seed if args.seed is not None else 0)
    return _load(args.choices, ConstructionChoices)


def _seeds(args: argparse.Namespace, base_type: type):
    structure = _load(args.base, IncidenceStructure)
    base = base_type.from_structure(structure)
    neighbourhoods = [AffinePlane.from_structure(_load(p, IncidenceStructure)) for p in args.affine]
    oas = [_load(p, OrthogonalArray) for p in args.oa]
    return base, neighbourhoods, oas, _choices_for(args, base, neighbourhoods, oas)


# -- commands -----------------------------------------------------------------


def cmd_gen_pp(args: argparse.Namespace) -> int:
    field = None
    if args.modulus:
        field = FieldSpec.for_order(args.order, [int(c) for c in args.modulus.split(",")])
    plane = projective_plane(args.order, field)
    write_artifact(args.output, plane)
    _summary(order=plane.order)
    _structure_summary(plane.structure)
    return EXIT_OK


def cmd_gen_ap(args: argparse.Namespace) -> int:
    if args.projective:
        projective = ProjectivePlane.from_structure(_load(args.projective, IncidenceStructure))
    else:
        projective = projective_plane(args.order)
    plane = affine_from_projective(projective, args.line)
    write_artifact(args.output, plane)
    _summary(order=plane.order, classes=len(plane.parallel_classes))
    _structure_summary(plane.structure)
    return EXIT_OK


def cmd_gen_oa(args: argparse.Namespace) -> int:
    m = args.order
    columns = args.columns if args.columns is not None else m + 1
    if not 1 <= columns <= m + 1:
        raise ValueError(f"--columns must lie in [1, {m + 1}], got {columns}")
    oa = oa_from_affine(affine_from_projective(projective_plane(m), 0)).take_columns(range(columns))
    write_artifact(args.output, oa)
    _summary(columns=oa.columns, symbols=oa.symbols)
    return EXIT_OK


def cmd_complete_oa(args: argparse.Namespace) -> int:
    oa = complete_oa(_load(args.input, OrthogonalArray))
    write_artifact(args.output, oa)
    _summary(columns=oa.columns, symbols=oa.symbols)
    return EXIT_OK


def _construct(args: argparse.Namespace, base_type: type, build) -> int:
    base, neighbourhoods, oas, choices = _seeds(args, base_type)
    plane = build(base, neighbourhoods, oas, choices)
    write_artifact(args.output, plane)
    if args.emit_choices:
        write_artifact(args.emit_choices, choices)
    _plane_summary(plane)
    _summary(choices=choices.digest)
    return EXIT_OK


def cmd_construct_ph(args: argparse.Namespace) -> int:
    return _construct(args, ProjectivePlane, construct_ph)


def cmd_construct_ah(args: argparse.Namespace) -> int:
    return _construct(args, AffinePlane, construct_ah)


def cmd_truncate(args: argparse.Namespace) -> int:
    plane = HjelmslevPlane.from_structure(_load(args.input, IncidenceStructure), Kind.PROJECTIVE)
    truncated = truncate_ph(plane, args.line_class)
    write_artifact(args.output, truncated)
    _plane_summary(truncated)
    return EXIT_OK


def cmd_extend(args: argparse.Namespace) -> int:
    base, neighbourhoods, oas, choices = _seeds(args, AffinePlane)
    plane = construct_ah(base, neighbourhoods, oas, choices)
    if args.plane:
        given = canonicalize(_load(args.plane, IncidenceStructure)).digest
        if given != canonicalize(plane.structure).digest:
            raise FormatError(0, f"{args.plane} is not the plane these seeds and choices construct")
    new = [AffinePlane.from_structure(_load(p, IncidenceStructure)) for p in args.new_affine]
    extended = extend_ah(plane, new, _load(args.infinity_oa, OrthogonalArray))
    write_artifact(args.output, extended)
    if args.emit_choices:
        write_artifact(args.emit_choices, extended.provenance.choices)
    _plane_summary(extended)
    _summary(infinity_class=len(extended.line_classes) - 1)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    structure = _load(args.input, IncidenceStructure)
    if args.ph:
        report = verify_ph(structure)
    elif args.ah:
        report = verify_ah(structure)
    else:
        report = verify_2_uniform(structure, args.kind)
    sys.stdout.write(report.to_text())
    if report.uniformity is not None:
        _summary(uniformity=report.uniformity)
    if args.output:
        write_artifact(args.output, report)
    return EXIT_OK if report else EXIT_FAILED


def cmd_restrict(args: argparse.Namespace) -> int:
    structure = _load(args.input, IncidenceStructure)
    r = restriction(structure, args.point, args.kind)
    _summary(
        center=r.center,
        points=len(r.points),
        lines=len(r.lines),
        multiplicities=",".join(str(x) for x in r.multiplicities),
    )
    if args.output:
        write_artifact(args.output, r.as_structure())
    return EXIT_OK


def cmd_fingerprint(args: argparse.Namespace) -> int:
    digests = []
    for path in args.inputs:
        fp = fingerprint(_load(path, IncidenceStructure))
        digests.append(fp.digest)
        _summary(file=path, fingerprint=fp.digest)
        if args.verbose:
            sys.stdout.write(fp.to_text())
    if len(digests) > 1:
        _summary(equal=str(len(set(digests)) == 1).lower())
    return EXIT_OK


def cmd_info(args: argparse.Namespace) -> int:
    obj = read_artifact(args.input)
    if isinstance(obj, IncidenceStructure):
        sizes = sorted(set(obj.line_sizes().tolist()))
        _summary(artifact="inc", line_sizes=",".join(str(s) for s in sizes))
        _structure_summary(obj)
    elif isinstance(obj, OrthogonalArray):
        _summary(artifact="oa", columns=obj.columns, symbols=obj.symbols, valid=str(validate_oa(obj).passed).lower())
    elif isinstance(obj, ConstructionChoices):
        _summary(artifact="choices", points=len(obj.point_classes), lines=len(obj.columns), digest=obj.digest)
        if obj.seed is not None:
            _summary(seed=obj.seed)
    elif isinstance(obj, VerificationReport):
        _summary(artifact="report", verdict=obj.verdict, violations=len(obj.violations))
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def _add_seed_arguments(s: argparse.ArgumentParser) -> None:
    s.add_argument("--base", required=True, help="Base plane (INC file).")
    s.add_argument("--affine", action="append", required=True, help="Neighbourhood affine plane; repeat per base point or give once.")
    s.add_argument("--oa", action="append", required=True, help="Orthogonal array; repeat per base line or give once.")
    s.add_argument("--choices", default="canonical", help="'canonical', 'random' or a CHOICES file.")
    s.add_argument("--seed", type=int, default=None, help="Seed for --choices random (default 0).")
    s.add_argument("--emit-choices", default=None, help="Write the choices ledger here.")


def build_cli() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hjelmslev", description="Construct and verify 2-uniform Hjelmslev planes.")
    p.add_argument("--threads", type=int, default=None, help="Worker threads (default: HJELMSLEV_THREADS or all cores).")
    p.add_argument("--verbose", action="store_true", help="Log progress to stderr.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("gen-pp", help="Generate PG(2,q).")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--modulus", default=None, help="Comma-separated modulus coefficients, highest degree first.")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_gen_pp)

    s = sub.add_parser("gen-ap", help="Affine plane by deleting a line of a projective plane.")
    source = s.add_mutually_exclusive_group(required=True)
    source.add_argument("--projective", help="Projective plane (INC file).")
    source.add_argument("--order", type=int, help="Use PG(2,q) of this order.")
    s.add_argument("--line", type=int, default=0, help="Line to delete (default 0).")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_gen_ap)

    s = sub.add_parser("gen-oa", help="OA(2,k,m) from the classical affine plane of order m.")
    s.add_argument("--order", type=int, required=True)
    s.add_argument("--columns", type=int, default=None, help="k, at most m+1 (default m+1).")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_gen_oa)

    s = sub.add_parser("complete-oa", help="Extend an OA(2,m,m) to an OA(2,m+1,m).")
    s.add_argument("input")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_complete_oa)

    s = sub.add_parser("construct-ph", help="Build a 2-uniform projective Hjelmslev plane.")
    _add_seed_arguments(s)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_construct_ph)

    s = sub.add_parser("construct-ah", help="Build a 2-uniform affine Hjelmslev plane.")
    _add_seed_arguments(s)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_construct_ah)

    s = sub.add_parser("truncate", help="Delete one line class of a projective Hjelmslev plane.")
    s.add_argument("input")
    s.add_argument("--line-class", type=int, required=True)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_truncate)

    s = sub.add_parser("extend", help="Extend an affine Hjelmslev plane, rebuilt from its seeds, to a projective one.")
    _add_seed_arguments(s)
    s.add_argument("--plane", default=None, help="The affine Hjelmslev plane, checked against the rebuilt one.")
    s.add_argument("--new-affine", action="append", required=True, help="Neighbourhood plane at infinity; repeat m+1 times or give once.")
    s.add_argument("--infinity-oa", required=True, help="OA(2,m+1,m) for the line at infinity.")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("verify", help="Check Hjelmslev plane axioms or 2-uniformity.")
    mode = s.add_mutually_exclusive_group(required=True)
    mode.add_argument("--ph", action="store_true")
    mode.add_argument("--ah", action="store_true")
    mode.add_argument("--uniform", action="store_true")
    s.add_argument("--kind", choices=Kind.ALL, default=None, help="Plane kind for --uniform (default: detected).")
    s.add_argument("input")
    s.add_argument("-o", "--output", default=None, help="Also write the report here.")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("restrict", help="Restrict a plane to the neighbourhood of a point.")
    s.add_argument("input")
    s.add_argument("--point", type=int, required=True)
    s.add_argument("--kind", choices=Kind.ALL, default=None, help="Plane kind (default: detected).")
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_restrict)

    s = sub.add_parser("fingerprint", help="Isomorphism-invariant digests (equal does not imply isomorphic).")
    s.add_argument("inputs", nargs="+")
    s.set_defaults(func=cmd_fingerprint)

    s = sub.add_parser("info", help="Describe any artifact file.")
    s.add_argument("input")
    s.set_defaults(func=cmd_info)

    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv: List[str] = list(argv) if argv is not None else sys.argv[1:]
    parser = build_cli()
    args = parser.parse_args(argv)

    try:
        level = logging.DEBUG if args.verbose else get_settings().log_level
        if args.threads is not None:
            if args.threads < 1:
                raise ValueError("--threads must be at least 1")
            configure(threads=args.threads)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        return args.func(args)
    except (HjelmslevError, ValueError, OSError) as e:
        logger.debug("command %s failed", args.cmd, exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
