"""``sposet`` command line.

Every subcommand prints one JSON document (``--pretty`` indents it).  Poset
arguments are file paths or names of bundled fixtures.  Vertex numbers on
the command line are 1-based.

Exit codes: 0 success; ``classify`` returns 0/1/2 for CM / Buchsbaum only /
neither; 3 for any error, reported on stdout as
``{"error": ..., "message": ...}``; 4 when ``ext --both``, ``structure-map
--verify`` or ``selftest`` finds a disagreement.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import product
from pathlib import Path
from typing import Any, Sequence

from . import __version__, corpus
from .cochains import reduced_cohomology, relative_cohomology
from .classify import classify
from .facering import ring_of
from .fileformat import load, to_json
from .formulas import ext_formula, lk_cost_check, local_cohomology, structure_maps, summand_faces
from .koszul import hom_complex, transported_mult_by_vertex
from .linalg import Field
from .poset import PosetError, SimplicialPoset, order_complex

EXIT_ERROR = 3
EXIT_MISMATCH = 4
_VECTOR_FLAGS = ("--alpha", "--delta")


class CliError(Exception):
    pass


def _dims(d: dict[int, int]) -> dict[str, int]:
    return {str(i): v for i, v in sorted(d.items())}


def _vector(text: str, n: int, flag: str) -> tuple[int, ...]:
    try:
        v = tuple(int(x) for x in text.split(",")) if text.strip() else ()
    except ValueError:
        raise CliError(f"{flag} expects comma-separated integers, got {text!r}") from None
    if len(v) != n:
        raise CliError(f"{flag} has {len(v)} entries but the poset has {n} vertices")
    return v


def _load(source: str) -> SimplicialPoset:
    path = Path(source)
    if path.exists():
        return load(path)
    if source in corpus.names():
        return corpus.get(source)
    raise CliError(f"{source!r} is neither a file nor a bundled fixture ({', '.join(corpus.names())})")


def _face(P: SimplicialPoset, label: str) -> int:
    try:
        return P.face(label)
    except KeyError:
        raise CliError(f"no face labelled {label!r}") from None


# -- subcommands ----------------------------------------------------------------


def cmd_validate(P: SimplicialPoset, args, field: Field) -> dict:
    return {"valid": True, "name": P.name, "n_vertices": P.n_vertices, "elements": len(P)}


def cmd_info(P: SimplicialPoset, args, field: Field) -> dict:
    from .classify import is_pure

    return {
        "name": P.name,
        "n_vertices": P.n_vertices,
        "dim": P.dim,
        "f_vector": list(P.f_vector),
        "pure": is_pure(P),
        "maximal_faces": [P.labels[y] for y in P.maximal_faces],
    }


def cmd_cohomology(P: SimplicialPoset, args, field: Field) -> dict:
    if args.relative:
        y = _face(P, args.relative)
        res = relative_cohomology(P, P.costar(y), field)
        return {"field": field.name, "relative_to_costar_of": args.relative, "cohomology": _dims(res.dims)}
    return {"field": field.name, "reduced_cohomology": _dims(reduced_cohomology(P, field).dims)}


def cmd_link(P: SimplicialPoset, args, field: Field) -> dict:
    return to_json(P.link(_face(P, args.face)))


def cmd_costar(P: SimplicialPoset, args, field: Field) -> dict:
    return to_json(P.costar(_face(P, args.face)).as_poset())


def cmd_order_complex(P: SimplicialPoset, args, field: Field) -> dict:
    return to_json(order_complex(P))


def cmd_hilbert(P: SimplicialPoset, args, field: Field) -> dict:
    delta = _vector(args.delta, P.n_vertices, "--delta")
    if min(delta, default=0) < 0:
        raise CliError("--delta must be non-negative")
    ring = ring_of(P)
    basis = ring.graded_piece_basis(delta)
    return {"delta": list(delta), "dim": len(basis), "basis": [ring.format_monomial(m) for m in basis]}


def cmd_mult(P: SimplicialPoset, args, field: Field) -> dict:
    ring = ring_of(P)
    elt = ring.parse(args.expr).reduce(field) if field.p else ring.parse(args.expr)
    return {"expr": args.expr, "field": field.name, "normal_form": ring.format(elt)}


def _ext_payload(P: SimplicialPoset, ell: int, alpha: tuple[int, ...], field: Field, mode: str) -> tuple[dict, bool]:
    out: dict[str, Any] = {"alpha": list(alpha), "ell": ell, "field": field.name}
    agree = True
    if mode in ("oracle", "both"):
        piece = hom_complex(P, ell, alpha)
        oracle = piece.dims(field)
        out["oracle"] = _dims(oracle)
        out["labels"] = [
            {"t": t, **piece.describe(f)} for t in piece.complex.degrees for f in piece.basis(t)
        ]
    if mode in ("formula", "both"):
        res = ext_formula(P, ell, alpha, field)
        out["formula"] = _dims(res.dims)
        out["summands"] = res.to_json(P)["summands"]
    if mode == "both":
        agree = out["oracle"] == out["formula"]
        out["agree"] = agree
    out["ext"] = out.get("formula", out.get("oracle"))
    return out, agree


def cmd_ext(P: SimplicialPoset, args, field: Field) -> tuple[dict, int]:
    alpha = _vector(args.alpha, P.n_vertices, "--alpha")
    if args.ell < 1:
        raise CliError("--ell must be at least 1")
    out, agree = _ext_payload(P, args.ell, alpha, field, args.mode)
    return out, 0 if agree else EXIT_MISMATCH


def cmd_localcoh(P: SimplicialPoset, args, field: Field) -> dict:
    alpha = _vector(args.alpha, P.n_vertices, "--alpha")
    out = local_cohomology(P, alpha, field).to_json(P)
    out["field"] = field.name
    return out


def cmd_structure_map(P: SimplicialPoset, args, field: Field) -> tuple[dict, int]:
    alpha = _vector(args.alpha, P.n_vertices, "--alpha")
    if not 1 <= args.j <= P.n_vertices:
        raise CliError(f"--j must lie in 1..{P.n_vertices}")
    j = args.j - 1
    gamma = tuple(a + (1 if i == j else 0) for i, a in enumerate(alpha))
    maps = structure_maps(P, alpha, j, field)
    out: dict[str, Any] = {
        "alpha": list(alpha),
        "j": args.j,
        "target_alpha": list(gamma),
        "field": field.name,
        "source_summands": [P.labels[w] for w in summand_faces(P, alpha)],
        "target_summands": [P.labels[w] for w in summand_faces(P, gamma)],
        "maps": {str(i): field.to_python(M) for i, M in maps.items()},
    }
    code = 0
    if args.verify:
        if any(a > 0 for a in alpha):
            out["verified"] = True
        else:
            ell = 1 + max([-a for a in alpha] + [0])
            oracle = transported_mult_by_vertex(P, ell, alpha, j, field)
            ok = all(
                field.equal(field.matrix(oracle[i]) if i in oracle else field.zeros(*M.shape), M) for i, M in maps.items()
            )
            out["verified"] = ok
            code = 0 if ok else EXIT_MISMATCH
    return out, code


def cmd_classify(P: SimplicialPoset, args, field: Field) -> tuple[dict, int]:
    report = classify(P, field)
    return report.to_json(), report.exit_code


def _selftest_fixture(name: str, max_ell: int) -> dict:
    P = corpus.get(name)
    out: dict[str, Any] = {"n_vertices": P.n_vertices, "fields": {}}
    for fname in ("Q", "GF(2)"):
        field = Field.parse(fname)
        checked = 0
        mismatches = []
        for ell in range(1, max_ell + 1):
            for alpha in product(range(-ell, ell + 1), repeat=P.n_vertices):
                checked += 1
                a = hom_complex(P, ell, alpha).dims(field)
                b = ext_formula(P, ell, alpha, field).dims
                if a != b:
                    mismatches.append({"ell": ell, "alpha": list(alpha), "oracle": _dims(a), "formula": _dims(b)})
        link_costar = all(lk_cost_check(P, y, field)[0] for y in range(1, len(P)))
        report = classify(P, field)
        out["fields"][fname] = {
            "ext_pieces": checked,
            "ext_mismatches": mismatches,
            "link_costar": link_costar,
            "classification": {k: report.to_json()[k] for k in ("pure", "cm", "buchsbaum")},
            "classification_consistent": report.consistent,
        }
    return out


def cmd_selftest(args, field: Field) -> tuple[dict, int]:
    names = corpus.small()
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_selftest_fixture, names, [args.max_ell] * len(names)))
    else:
        results = [_selftest_fixture(n, args.max_ell) for n in names]
    fixtures = dict(zip(names, results))
    ok = all(
        not f["ext_mismatches"] and f["link_costar"] and f["classification_consistent"]
        for r in results
        for f in r["fields"].values()
    )
    total = sum(f["ext_pieces"] for r in results for f in r["fields"].values())
    return {"version": __version__, "max_ell": args.max_ell, "ext_pieces": total, "ok": ok, "fixtures": fixtures}, (
        0 if ok else EXIT_MISMATCH
    )


# -- argument parsing --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=None, help="Q, GF(p) or a prime (default: $SPOSET_FIELD or Q)")
    common.add_argument("--pretty", action="store_true", help="indent the JSON output")
    common.add_argument("--output", "-o", default=None, help="write the JSON here instead of stdout")

    parser = argparse.ArgumentParser(prog="sposet", description="Simplicial posets, face rings and their local cohomology.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_: str, poset: bool = True) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_)
        if poset:
            p.add_argument("poset", help="poset file or bundled fixture name")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check the simplicial poset axioms")
    add("info", cmd_info, "f-vector, dimension, purity")
    add("cohomology", cmd_cohomology, "reduced or relative cohomology").add_argument(
        "--relative", metavar="FACE", help="relative to the costar of FACE"
    )
    add("link", cmd_link, "emit the link of a face as a poset file").add_argument("face")
    add("costar", cmd_costar, "emit the costar of a face as a poset file").add_argument("face")
    add("order-complex", cmd_order_complex, "emit the order complex")
    add("hilbert", cmd_hilbert, "standard monomial basis of a graded piece").add_argument(
        "--delta", required=True, help="comma-separated degree, e.g. 1,1,0"
    )
    add("mult", cmd_mult, "normal form of a face-ring expression").add_argument("expr")
    p = add("ext", cmd_ext, "graded piece of Ext(A/m_l, A_P)")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--alpha", required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--oracle", dest="mode", action="store_const", const="oracle")
    mode.add_argument("--formula", dest="mode", action="store_const", const="formula")
    mode.add_argument("--both", dest="mode", action="store_const", const="both")
    p.set_defaults(mode="both")
    add("localcoh", cmd_localcoh, "graded piece of local cohomology").add_argument("--alpha", required=True)
    p = add("structure-map", cmd_structure_map, "multiplication by a vertex on local cohomology")
    p.add_argument("--alpha", required=True)
    p.add_argument("--j", type=int, required=True, help="1-based vertex number")
    p.add_argument("--verify", action="store_true", help="compare with the Koszul computation")
    add("classify", cmd_classify, "Cohen-Macaulay / Buchsbaum test")
    p = add("selftest", cmd_selftest, "oracle-equivalence sweep over the bundled corpus", poset=False)
    p.add_argument("--max-ell", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1)
    return parser


def _join_vector_flags(argv: Sequence[str]) -> list[str]:
    """Let ``--alpha -1,-1`` through argparse, which would read ``-1,-1`` as a flag."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VECTOR_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def _emit(payload: dict, args) -> None:
    text = json.dumps(payload, indent=2 if getattr(args, "pretty", False) else None, ensure_ascii=False)
    if getattr(args, "output", None):
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(_join_vector_flags(argv))
    try:
        field = Field.parse(args.field or os.environ.get("SPOSET_FIELD", "Q"))
        if args.command == "selftest":
            result = args.func(args, field)
        else:
            result = args.func(_load(args.poset), args, field)
    except PosetError as exc:
        _emit(exc.to_json(), args)
        return EXIT_ERROR
    except (CliError, ValueError, KeyError, ArithmeticError, OSError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, args)
        return EXIT_ERROR
    payload, code = result if isinstance(result, tuple) else (result, 0)
    _emit(payload, args)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
