"""ringlab command line: generate algebra files, inspect them, run single
computations, and run the theorem audit.

Exit codes: 0 success / clean audit, 1 audit counterexample among
hypothesis-holding checks, 2 usage or parse failure, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io as rio
from .algebras import direct_sum, matrix_algebra, triangular_algebra, truncated_poly
from .audit import ALL_THEOREM_IDS, run_corpus_audit
from .corpus import CorpusEntry, default_corpus
from .errors import BudgetExceeded, Budgets
from .fields import is_prime
from .nilpotents import (
    commutators_in_n2span,
    fn2_span,
    inner_automorphisms,
    n2_span,
    nilpotent_span,
    zero_product_balanced,
)
from .samplers import SubspaceSampler, invariant_orbit_closure, lie_closure, submodule_closure
from .spectrum import (
    hypothesis_nonexceptional_cofinal,
    ideal_lattice,
    is_idempotent_ring,
    s4_span,
)
from .subspaces import (
    Subspace,
    bracket_space,
    center,
    commutator_subspace,
    derived_tower,
    ideal_closure,
    is_full,
    is_fully_noncentral,
    is_lie_ideal,
    is_rr_submodule,
    t_of,
    t_tower,
    whole_space,
)

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _fail(msg, code=EXIT_USAGE):
    print(f"error: {msg}", file=sys.stderr)
    return code


def _emit(payload, as_json):
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")


# ---------------------------------------------------------------------------
# gen


def cmd_gen(args):
    p = args.p
    if args.family in ("mat", "tri", "trunc"):
        if p is None or not is_prime(p):
            return _fail(f"--p must be a prime, got {p}")
        if args.n is None or args.n < 1:
            return _fail("--n must be a positive integer")
    try:
        if args.family == "mat":
            a = matrix_algebra(args.n, p)
        elif args.family == "tri":
            a = triangular_algebra(args.n, p)
        elif args.family == "trunc":
            a = truncated_poly(args.n, p)
        elif args.family == "dsum":
            if not args.inputs or len(args.inputs) != 2:
                return _fail("--family dsum needs --inputs A.alg.json B.alg.json")
            a1 = rio.load_algebra(args.inputs[0])
            a2 = rio.load_algebra(args.inputs[1])
            a = direct_sum(a1, a2)
        else:
            return _fail(f"unknown family {args.family!r}")
    except rio.ParseError as exc:
        return _fail(str(exc))
    except ValueError as exc:
        return _fail(str(exc))
    out = args.output or f"{a.aid.replace('/', '_').replace('(', '').replace(')', '')}.alg.json"
    rio.save_algebra(a, out)
    print(f"wrote {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# show


def cmd_show(args):
    try:
        a = rio.load_algebra(args.algebra)
    except rio.ParseError as exc:
        return _fail(str(exc))
    budgets = Budgets()
    comm = commutator_subspace(a)
    lines = {
        "id": a.aid,
        "p": a.p,
        "dim": a.dim,
        "unital": a.is_unital,
        "center_dim": center(a).dim,
        "commutator_dim": comm.dim,
        "idempotent": is_idempotent_ring(a),
        "s4_span_dim": s4_span(a).dim,
    }
    try:
        rep = ideal_lattice(a, budgets)
        primes = rep.primes()
        exc_count = len(rep.exceptional_primes())
        lines["ideals"] = len(rep.ideals)
        lines["primes"] = f"{len(primes)} ({exc_count} exceptional)"
        lines["lattice_complete"] = rep.lattice_complete
    except BudgetExceeded:
        lines["ideals"] = "skipped (budget)"
    _emit(lines, args.json)
    return EXIT_OK


# ---------------------------------------------------------------------------
# compute

SUBSPACE_OPS = {
    "t",
    "t-tower",
    "derived-tower",
    "ideal-closure",
    "full",
    "fully-noncentral",
    "lie-ideal",
    "submodule",
    "lie-closure",
    "submodule-closure",
    "invariant-closure",
}

KNOWN_OPS = SUBSPACE_OPS | {
    "center",
    "commutator",
    "primes",
    "exceptional",
    "hypothesis-ne-cofinal",
    "idempotent",
    "s4",
    "n2span",
    "nspan",
    "fn2span",
    "zpb",
    "comm-in-n2",
}


def _subspace_payload(v: Subspace):
    return {"dim": v.dim, "generators": v.generators()}


def _tower_payload(rec):
    return {
        "kind": rec.kind,
        "dims": rec.dims(),
        "stabilized_at": rec.stabilized_at,
        "stages": [s.generators() for s in rec.stages],
    }


def cmd_compute(args):
    if args.op not in KNOWN_OPS:
        return _fail(f"unknown op {args.op!r} (known: {', '.join(sorted(KNOWN_OPS))})")
    try:
        a = rio.load_algebra(args.algebra)
    except rio.ParseError as exc:
        return _fail(str(exc))
    v = None
    if args.op in SUBSPACE_OPS:
        if not args.subspace:
            return _fail(f"op {args.op!r} needs --subspace")
        try:
            v = rio.load_subspace(args.subspace, a)
        except rio.ParseError as exc:
            return _fail(str(exc))
    budget = args.budget
    budgets = Budgets() if budget is None else Budgets(elements=budget, pairs=budget)

    try:
        payload = _run_op(a, args.op, v, budgets)
    except BudgetExceeded as exc:
        payload = {"op": args.op, "exhaustive": False, "error": str(exc)}
        _emit(payload, args.json)
        return EXIT_BUDGET
    payload = {"op": args.op, **payload}
    _emit(payload, args.json)
    # budget-truncated scans return their sampled payload with exit 3
    return EXIT_BUDGET if payload.get("exhaustive") is False else EXIT_OK


def _run_op(a, op, v, budgets):
    if op == "center":
        return _subspace_payload(center(a))
    if op == "commutator":
        return _subspace_payload(commutator_subspace(a))
    if op == "t":
        return _subspace_payload(t_of(v))
    if op == "t-tower":
        return _tower_payload(t_tower(v))
    if op == "derived-tower":
        return _tower_payload(derived_tower(v))
    if op == "ideal-closure":
        return _subspace_payload(ideal_closure(v))
    if op == "full":
        return {"full": is_full(v)}
    if op == "fully-noncentral":
        return {"fully_noncentral": is_fully_noncentral(v)}
    if op == "lie-ideal":
        return {"lie_ideal": is_lie_ideal(v)}
    if op == "submodule":
        return {"rr_submodule": is_rr_submodule(v)}
    if op == "lie-closure":
        return _subspace_payload(lie_closure(v))
    if op == "submodule-closure":
        return _subspace_payload(submodule_closure(v))
    if op == "invariant-closure":
        auts = inner_automorphisms(a, budgets.elements)
        return _subspace_payload(invariant_orbit_closure(v, auts))
    if op == "primes":
        rep = ideal_lattice(a, budgets)
        return {
            "lattice_complete": rep.lattice_complete,
            "ideals": len(rep.ideals),
            "primes": [
                {"dim": r.dim, "exceptional": r.is_exceptional, "generators": r.subspace.generators()}
                for r in rep.primes()
            ],
        }
    if op == "exceptional":
        rep = ideal_lattice(a, budgets)
        return {
            "exceptional_primes": [
                {"dim": r.dim, "generators": r.subspace.generators()}
                for r in rep.exceptional_primes()
            ]
        }
    if op == "hypothesis-ne-cofinal":
        verdict, witness, details = hypothesis_nonexceptional_cofinal(a, budgets)
        out = {"nonexceptional_cofinal": verdict, **details}
        if witness is not None:
            out["witness_proper_ideal"] = witness.generators()
        return out
    if op == "idempotent":
        return {"idempotent": is_idempotent_ring(a)}
    if op == "s4":
        return _subspace_payload(s4_span(a))
    if op == "n2span":
        r = n2_span(a, budgets.elements)
        return {"exhaustive": r.exhaustive, **_subspace_payload(r.space)}
    if op == "nspan":
        r = nilpotent_span(a, budgets.elements)
        return {"exhaustive": r.exhaustive, **_subspace_payload(r.space)}
    if op == "fn2span":
        r = fn2_span(a, budgets.pairs)
        return {
            "exhaustive": r.exhaustive,
            **_subspace_payload(r.space),
            "witness_pairs": [
                {"y": [int(c) for c in y], "z": [int(c) for c in z]} for y, z in r.witnesses
            ],
        }
    if op == "zpb":
        r = zero_product_balanced(a, budgets.pairs)
        return {
            "zero_product_balanced": r.balanced,
            "defect_triples": [list(t) for t in r.defect_triples],
            "defect_basis": [[int(x) for x in row] for row in r.defect_basis],
        }
    if op == "comm-in-n2":
        return {"commutators_in_n2span": commutators_in_n2span(a, budgets.elements)}
    raise AssertionError(f"unhandled op {op}")


# ---------------------------------------------------------------------------
# audit


def _load_corpus_dir(path):
    entries = []
    directory = Path(path)
    alg_files = sorted(directory.glob("*.alg.json"))
    if not alg_files:
        raise rio.ParseError(f"no *.alg.json files in {directory}")
    algebras = {}
    for f in alg_files:
        a = rio.load_algebra(f)
        aid = a.aid or f.stem
        algebras[aid] = CorpusEntry(aid, a, {})
    # optional distinguished subspaces: <name>.sub.json with a matching algebra_id
    dist = {}
    for f in sorted(directory.glob("*.sub.json")):
        data = json.loads(f.read_text())
        target = data.get("algebra_id")
        if target in algebras:
            sub = rio.subspace_from_dict(data, algebras[target].algebra)
            dist.setdefault(target, {})[f.stem] = sub
    for aid, named in dist.items():
        entry = algebras[aid]
        algebras[aid] = CorpusEntry(aid, entry.algebra, named)
    return list(algebras.values())


def cmd_audit(args):
    if args.corpus == "default":
        corpus = default_corpus()
    else:
        try:
            corpus = _load_corpus_dir(args.corpus)
        except rio.ParseError as exc:
            return _fail(str(exc))
    theorem_ids = tuple(args.theorem) if args.theorem else ALL_THEOREM_IDS
    for tid in theorem_ids:
        if tid not in ALL_THEOREM_IDS:
            return _fail(f"unknown theorem id {tid!r} (known: {', '.join(ALL_THEOREM_IDS)})")
    sampler = SubspaceSampler(seed=args.seed, count=args.samples)
    budgets = Budgets(elements=args.budget_elems, pairs=args.budget_pairs)
    report = run_corpus_audit(corpus, theorem_ids, sampler, budgets)
    payload = report.to_json_dict()
    if args.output:
        rio.save_report(payload, args.output)
        print(f"wrote {args.output}")
    summary = payload["summary"]
    print(
        "audit: {checks} checks, {verified} verified, "
        "{counterexamples_hypothesis_holding} counterexamples (hypothesis holding), "
        "{hypothesis_failing} hypothesis-failing, {skipped} skipped".format(**summary)
    )
    bad = report.counterexamples()
    if bad:
        for v in bad[:10]:
            print(f"  counterexample: {v.theorem_id} on {v.algebra_id} sample {v.sample_index}")
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="ringlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an algebra file")
    gen.add_argument("--family", required=True, choices=["mat", "tri", "trunc", "dsum"])
    gen.add_argument("--n", type=int, help="size parameter (matrix size / truncation order)")
    gen.add_argument("--p", type=int, help="prime field characteristic")
    gen.add_argument("--inputs", nargs=2, metavar="FILE", help="summand files for dsum")
    gen.add_argument("-o", "--output", help="output file (default derived from the family)")
    gen.set_defaults(func=cmd_gen)

    show = sub.add_parser("show", help="print an algebra's invariant summary")
    show.add_argument("algebra", help="*.alg.json file")
    show.add_argument("--json", action="store_true")
    show.set_defaults(func=cmd_show)

    compute = sub.add_parser("compute", help="run a single named operation")
    compute.add_argument("--alg", dest="algebra", required=True)
    compute.add_argument("--op", required=True)
    compute.add_argument("--subspace", help="*.sub.json file for subspace-valued ops")
    compute.add_argument("--budget", type=int, help="override both enumeration budgets")
    compute.add_argument("--json", action="store_true")
    compute.set_defaults(func=cmd_compute)

    audit = sub.add_parser("audit", help="run the theorem audit over a corpus")
    audit.add_argument("--corpus", default="default", help="'default' or a directory of *.alg.json")
    audit.add_argument("--theorem", action="append", help="theorem id (repeatable; default all)")
    audit.add_argument("--samples", type=int, default=12)
    audit.add_argument("--seed", type=int, default=0)
    audit.add_argument("--budget-elems", type=int, default=Budgets().elements)
    audit.add_argument("--budget-pairs", type=int, default=Budgets().pairs)
    audit.add_argument("-o", "--output", help="write the JSON report here")
    audit.set_defaults(func=cmd_audit)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
