"""Command-line surface: the only module with I/O.

One run reads a problem document (file path or stdin), executes a single
command, and prints one JSON object to stdout.  Output is canonical
(sorted keys, fixed indent) so identical documents, flags and seeds give
byte-identical bytes.  Numbers computed exactly appear as ``p/q`` strings;
floating point values are tagged with their tolerance.  Exit codes: 0 on
success, 2 on precondition failure, 1 on internal error.
"""

import argparse
import json
import sys
from fractions import Fraction

from . import classes as classlab
from . import codes as codelib
from . import fibers as fiberlib
from .document import parse_document
from .errors import InfiniteFiber, ToolkitError, ValidationError
from .estimate import (
    EstimatorConfig,
    empirical_genericity,
    estimate_diagonal_mass,
)
from .groupcodes import (
    BernoulliMeasure,
    least_period,
    multiplicity_closed_form,
    sum_code_lifts,
)
from .shifts import entropy_bounds, entropy_enclosures_overlap

ENTROPY_TOL = 1e-9
FLOAT_TOL = 1e-9

COMMANDS = (
    "degree",
    "finite-to-one",
    "fiber",
    "lifts",
    "canonical-lift",
    "joining",
    "classes",
    "class-joining",
    "class-max",
    "closed-form",
    "estimate",
)


def _rat(q):
    return str(Fraction(q))


def _tagged(x, tol=FLOAT_TOL):
    return {"value": float(x), "abs_tol": tol}


def _enclosure(bounds):
    return {"lower": bounds[0], "upper": bounds[1]}


def _word(symbols):
    return [str(a) for a in symbols]


def _node(node):
    return [node[0], str(node[1])]


def _parse_y(doc, flags):
    word = flags.get("y")
    if not word:
        raise ValidationError("this command needs --y <cycle word>")
    try:
        return doc.code.image_periodic_point(word)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def _lift_rows(entries):
    return [
        {
            "orbit": _word(e.measure.cycle_word),
            "period": e.period,
            "multiplicity": e.multiplicity,
        }
        for e in entries
    ]


def _cmd_degree(doc, flags):
    try:
        cert = codelib.degree(doc.code, flags.get("cap"))
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    return (
        {
            "degree": cert.degree,
            "converged": cert.converged,
            "witness": _word(cert.witness),
            "coordinate": cert.coordinate,
            "length_bound": cert.length_bound,
        },
        {"degree_at_least_one": cert.degree >= 1},
    )


def _cmd_finite_to_one(doc, flags):
    answer = codelib.is_finite_to_one(doc.code)
    dom = entropy_bounds(doc.sft, ENTROPY_TOL)
    img = codelib.image_entropy_bounds(doc.code, ENTROPY_TOL)
    overlap = entropy_enclosures_overlap(dom, img, ENTROPY_TOL)
    return (
        {"finite_to_one": answer},
        {
            "domain_entropy": _enclosure(dom),
            "image_entropy": _enclosure(img),
            "entropy_enclosures_overlap": overlap,
            "entropy_cross_check": overlap == answer,
        },
    )


def _cmd_fiber(doc, flags):
    y = _parse_y(doc, flags)
    base = {"y": _word(y.word), "period": y.period}
    try:
        points = fiberlib.fiber_points(doc.code, y)
    except InfiniteFiber as exc:
        return (
            {**base, "finite": False, "branching_node": _node(exc.witness)},
            {},
        )
    return (
        {
            **base,
            "finite": True,
            "degree": len(points),
            "points": [_word(x.word) for x in points],
        },
        {"points_pairwise_distinct": len(set(points)) == len(points)},
    )


def _cmd_lifts(doc, flags):
    y = _parse_y(doc, flags)
    entries = fiberlib.ergodic_lifts(doc.code, y)
    d = fiberlib.degree_at(doc.code, y)
    mult_sum = sum(e.multiplicity for e in entries)
    period_sum = sum(e.period for e in entries)
    return (
        {
            "y": _word(y.word),
            "degree": d,
            "lifts": _lift_rows(entries),
            "multiplicity_sum": mult_sum,
        },
        {
            "degree_equals_multiplicity_sum": d == mult_sum,
            "period_bookkeeping": d * y.period == period_sum,
        },
    )


def _cmd_canonical_lift(doc, flags):
    y = _parse_y(doc, flags)
    mixture = fiberlib.canonical_lift(doc.code, y)
    return (
        {
            "y": _word(y.word),
            "components": [
                {"weight": _rat(w), "orbit": _word(m.cycle_word)}
                for w, m in mixture.components
            ],
        },
        {"weights_sum_to_one": sum(mixture.weights()) == 1},
    )


def _cmd_joining(doc, flags):
    y = _parse_y(doc, flags)
    try:
        joining = fiberlib.degree_joining(doc.code, y, flags.get("order"))
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    lifts = fiberlib.ergodic_lifts(doc.code, y)
    margin_multiset = sorted(m.sort_key() for m in joining.margins())
    lift_multiset = sorted(
        key for e in lifts for key in [e.measure.sort_key()] * e.multiplicity
    )
    return (
        {
            "y": _word(y.word),
            "arity": joining.arity,
            "period": joining.period,
            "cycle": [[str(a) for a in row] for row in joining.cycle],
            "margins": _lift_rows(joining.margin_entries()),
        },
        {
            "separating": joining.is_separating(),
            "margins_match_lifts_with_multiplicity": margin_multiset == lift_multiset,
        },
    )


def _cmd_classes(doc, flags):
    y = _parse_y(doc, flags)
    part = classlab.class_partition(doc.code, y)
    return (
        {
            "y": _word(y.word),
            "count": part.count,
            "classes": [[_node(n) for n in comp] for comp in part.classes],
        },
        {
            "classes_pairwise_disjoint": sum(len(c) for c in part.classes)
            == len({n for c in part.classes for n in c})
        },
    )


def _cmd_class_joining(doc, flags):
    y = _parse_y(doc, flags)
    joining = classlab.class_degree_joining(doc.code, y)
    mults = classlab.class_multiplicities(doc.code, y)
    return (
        {
            "y": _word(y.word),
            "arity": joining.arity,
            "period": joining.period,
            "cycle": [[str(a) for a in row] for row in joining.cycle],
            "representatives": [
                _word(x.word) for x in joining.coordinate_points
            ],
            "class_multiplicities": [[c, m] for c, m in mults],
        },
        {
            "multiplicities_sum_to_class_degree": sum(m for _, m in mults)
            == joining.arity
        },
    )


def _cmd_class_max(doc, flags):
    y = _parse_y(doc, flags)
    potential = None
    if flags.get("potential"):
        if doc.potential is None:
            raise ValidationError("--potential needs a potential section in the document")
        potential = classlab.LocallyConstantPotential(
            {a: float(q) for a, q in doc.potential.items()}
        )
    report = classlab.class_maximal(doc.code, y, potential)
    rows = []
    max_row_residual = 0.0
    max_stat_residual = 0.0
    for eq in report.per_class:
        nodes = eq.nodes
        for u in nodes:
            row = sum(eq.transitions.get((u, v), 0.0) for v in nodes)
            max_row_residual = max(max_row_residual, abs(row - 1.0))
        for v in nodes:
            inflow = sum(
                eq.stationary[u] * eq.transitions.get((u, v), 0.0) for u in nodes
            )
            max_stat_residual = max(
                max_stat_residual, abs(inflow - eq.stationary[v])
            )
        rows.append(
            {
                "index": eq.class_index,
                "nodes": [_node(n) for n in nodes],
                "value": _enclosure(eq.value),
                "entropy": _tagged(eq.entropy),
                "potential_mean": _tagged(eq.potential_mean),
                "stationary": [
                    {"node": _node(n), "probability": eq.stationary[n]}
                    for n in nodes
                ],
                "transitions": [
                    {
                        "from": _node(u),
                        "to": _node(v),
                        "probability": eq.transitions[(u, v)],
                    }
                    for u in nodes
                    for v in nodes
                    if (u, v) in eq.transitions
                ],
            }
        )
    return (
        {
            "y": _word(y.word),
            "count": report.count,
            "classes": rows,
            "maximizers": list(report.maximizers),
        },
        {
            "maximizers_at_most_count": len(report.maximizers) <= report.count,
            "row_sum_residual": _tagged(max_row_residual, 1e-12),
            "stationarity_residual": _tagged(max_stat_residual, 1e-12),
        },
    )


def _cmd_closed_form(doc, flags):
    family = flags.get("family")
    vector = flags.get("vector")
    if family is None or vector is None:
        raise ValidationError("closed-form needs --family and --vector")
    try:
        mu = BernoulliMeasure(tuple(vector))
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    n = mu.size
    if family == "difference":
        m, lifts = multiplicity_closed_form(mu)
        period = least_period(mu.probs)
        return (
            {
                "family": family,
                "N": n,
                "vector": [_rat(p) for p in mu.probs],
                "least_period": period,
                "multiplicity": m,
                "lift_count": len(lifts),
                "lifts": [[_rat(p) for p in lift.probs] for lift in lifts],
            },
            {
                "lift_count_times_multiplicity": len(lifts) * m == n,
                "lift_count_divides_alphabet": n % len(lifts) == 0,
            },
        )
    if family == "sum":
        report = sum_code_lifts(mu)
        return (
            {
                "family": family,
                "N": n,
                "vector": [_rat(p) for p in mu.probs],
                "window": report.window,
                "lifts": [
                    {"offset": d.offset, "multiplicity": m}
                    for d, m in report.lifts
                ],
                "multiplicities": list(report.multiplicities),
            },
            {"multiplicities_sum": sum(report.multiplicities) == n},
        )
    raise ValidationError(f"unknown family {family!r}")


def _estimate_measure(doc, flags):
    if doc is None:
        raise ValidationError("estimate needs a document with a difference family")
    if doc.family is None or doc.family[0] != "difference":
        raise ValidationError("estimate supports the built-in difference family only")
    if doc.bernoulli is None:
        raise ValidationError("estimate needs a bernoulli measure in the document")
    return doc.bernoulli


def _cmd_estimate(doc, flags):
    kind = flags.get("kind")
    if kind not in ("diagonal", "genericity"):
        raise ValidationError("estimate needs --kind diagonal|genericity")
    mu = _estimate_measure(doc, flags)
    try:
        cfg = EstimatorConfig(
            window=flags.get("window") or 10,
            samples=flags.get("samples") or 100_000,
            seed=flags.get("seed") or 0,
            family="difference",
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    if kind == "diagonal":
        report = estimate_diagonal_mass(mu, cfg)
        closed_m, _ = multiplicity_closed_form(mu)
        return (
            {
                "kind": kind,
                "estimate": report.estimate,
                "std_error": report.std_error,
                "samples": report.samples,
                "window": report.window,
                "seed": report.seed,
                "implied_multiplicity": report.implied_multiplicity,
            },
            {
                "estimate_in_unit_interval": 0.0 <= report.estimate <= 1.0,
                "implied_matches_closed_form": report.implied_multiplicity
                == closed_m,
            },
        )
    words = flags.get("words")
    if not words:
        raise ValidationError("estimate --kind genericity needs --words")
    parsed_words = []
    for token in words:
        try:
            parsed_words.append(tuple(int(ch) for ch in token))
        except ValueError as exc:
            raise ValidationError(f"bad word {token!r}: digits only") from exc
    try:
        report = empirical_genericity(mu, cfg, parsed_words)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    return (
        {
            "kind": kind,
            "samples": report.samples,
            "window": report.window,
            "seed": report.seed,
            "rows": [
                {
                    "shift": row.shift,
                    "word": "".join(str(v) for v in row.word),
                    "empirical": row.empirical,
                    "exact": row.exact,
                    "deviation": row.deviation,
                }
                for row in report.rows
            ],
            "max_deviation": report.max_deviation,
        },
        {"deviations_bounded_by_one": report.max_deviation <= 1.0},
    )


_HANDLERS = {
    "degree": _cmd_degree,
    "finite-to-one": _cmd_finite_to_one,
    "fiber": _cmd_fiber,
    "lifts": _cmd_lifts,
    "canonical-lift": _cmd_canonical_lift,
    "joining": _cmd_joining,
    "classes": _cmd_classes,
    "class-joining": _cmd_class_joining,
    "class-max": _cmd_class_max,
    "closed-form": _cmd_closed_form,
    "estimate": _cmd_estimate,
}

_NEED_DOCUMENT = set(COMMANDS) - {"closed-form"}


def run_command(command, doc, flags):
    """Execute one command against a parsed document; returns the report."""
    if command not in _HANDLERS:
        raise ValidationError(f"unknown command {command!r}")
    if command in _NEED_DOCUMENT and doc is None:
        raise ValidationError(f"command {command!r} needs a document")
    result, checks = _HANDLERS[command](doc, flags)
    report = {
        "command": command,
        "input": {
            "document": doc.canonical if doc is not None else None,
            "flags": _canonical_flags(flags),
        },
        "result": result,
        "checks": checks,
    }
    return report


def _canonical_flags(flags):
    out = {}
    for key, value in sorted(flags.items()):
        if value is None:
            continue
        if isinstance(value, tuple):
            value = list(value)
        if isinstance(value, list):
            out[key] = [str(v) if isinstance(v, Fraction) else v for v in value]
        elif isinstance(value, Fraction):
            out[key] = str(value)
        else:
            out[key] = value
    return out


def render_report(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _split_csv(text):
    return [part for part in text.split(",") if part != ""]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sftlab",
        description="Exact computations for 1-block factor codes on shifts of finite type.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, needs_doc=True):
        p = sub.add_parser(name)
        if needs_doc:
            p.add_argument(
                "document",
                nargs="?",
                help="path to a problem document, or - for stdin",
            )
        return p

    p = add("degree")
    p.add_argument("--cap", type=int, default=None, help="max image word length searched")
    add("finite-to-one")
    for name in ("fiber", "lifts", "canonical-lift", "classes"):
        p = add(name)
        p.add_argument("--y", required=True, help="image cycle word, comma separated")
    p = add("joining")
    p.add_argument("--y", required=True)
    p.add_argument("--order", default=None, help="fiber ordering, e.g. 2,0,1")
    p = add("class-joining")
    p.add_argument("--y", required=True)
    p = add("class-max")
    p.add_argument("--y", required=True)
    p.add_argument(
        "--potential",
        action="store_true",
        help="use the document's potential section (default: zero potential)",
    )
    p = add("closed-form", needs_doc=False)
    p.add_argument("--family", choices=("difference", "sum"), required=True)
    p.add_argument("--vector", required=True, help="probability vector, e.g. 1/3,2/3")
    p = add("estimate")
    p.add_argument("--kind", choices=("diagonal", "genericity"), required=True)
    p.add_argument("--window", type=int, default=10)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--words", default=None, help="comma separated words for genericity")
    return parser


def _flags_from_args(args):
    flags = {}
    for key in ("cap", "window", "samples", "seed", "kind", "family", "potential"):
        if hasattr(args, key):
            flags[key] = getattr(args, key)
    if getattr(args, "y", None) is not None:
        flags["y"] = _split_csv(args.y)
    if getattr(args, "order", None) is not None:
        try:
            flags["order"] = tuple(int(i) for i in _split_csv(args.order))
        except ValueError as exc:
            raise ValidationError("--order must be a comma separated permutation") from exc
    if getattr(args, "vector", None) is not None:
        from .document import parse_rational

        flags["vector"] = [
            parse_rational(tok, "--vector") for tok in _split_csv(args.vector)
        ]
    if getattr(args, "words", None) is not None:
        flags["words"] = _split_csv(args.words)
    return flags


def _load_document(args):
    path = getattr(args, "document", None)
    if path is None:
        return None
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise ValidationError(f"cannot read document: {exc}") from exc
    return parse_document(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        flags = _flags_from_args(args)
        doc = _load_document(args)
        report = run_command(args.command, doc, flags)
    except ToolkitError as exc:
        error = {"type": type(exc).__name__, "message": str(exc)}
        if getattr(exc, "line", None) is not None:
            error["line"] = exc.line
            error["column"] = exc.column
        sys.stderr.write(json.dumps({"error": error}, sort_keys=True) + "\n")
        return 2
    except Exception as exc:  # internal error
        sys.stderr.write(
            json.dumps(
                {"error": {"type": type(exc).__name__, "message": str(exc)}},
                sort_keys=True,
            )
            + "\n"
        )
        return 1
    sys.stdout.write(render_report(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
