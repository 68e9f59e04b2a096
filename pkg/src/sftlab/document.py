"""Problem documents: the strict, versioned input format of the CLI.

A document is a JSON object that either spells out a shift and a code

    {
      "version": 1,
      "sft": {"symbols": ["0", "1"], "transitions": [["0", "0"], ...]},
      "code": {"0": "0", "1": "1"},
      "measure": {"bernoulli": ["1/2", "1/2"]},      # optional
      "potential": {"0": "1/2", "1": "0"}            # optional
    }

or names a built-in family

    {"version": 1, "family": "difference", "N": 2, "measure": ...}

Unknown fields are rejected, all rationals are ``p/q`` strings, and the
canonical emission (sorted keys, sorted transitions, two-space indent) is
a fixed point of parse-emit.
"""

import json
import re
from dataclasses import dataclass
from fractions import Fraction

from .codes import BlockCode
from .errors import ParseError, ValidationError
from .groupcodes import BernoulliMeasure, difference_code, sum_code
from .shifts import PeriodicPoint, Sft

_RATIONAL = re.compile(r"^-?\d+(/[1-9]\d*)?$")
_TOP_KEYS = {"version", "sft", "code", "family", "N", "measure", "potential"}


@dataclass(frozen=True)
class ProblemDocument:
    version: int
    sft: Sft
    code: BlockCode
    family: tuple | None  # (kind, N) when built from an alias
    bernoulli: BernoulliMeasure | None
    periodic: PeriodicPoint | None  # a periodic point of the domain
    potential: dict | None  # symbol -> Fraction
    canonical: dict


def parse_rational(text, field):
    if not isinstance(text, str) or not _RATIONAL.match(text):
        raise ValidationError(f"{field}: expected a rational 'p/q' string, got {text!r}")
    return Fraction(text)


def _require_keys(obj, allowed, where):
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise ValidationError(f"{where}: unknown fields {unknown}")


def parse_document(text):
    """Strict parse of a problem document; errors carry line/column."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno
        ) from exc
    if not isinstance(raw, dict):
        raise ValidationError("document must be a JSON object")
    _require_keys(raw, _TOP_KEYS, "document")
    if raw.get("version") != 1:
        raise ValidationError("document must declare \"version\": 1")

    has_explicit = "sft" in raw or "code" in raw
    has_family = "family" in raw or "N" in raw
    if has_explicit and has_family:
        raise ValidationError("give either sft+code or family+N, not both")
    if has_explicit:
        sft, code, canonical_graph = _parse_explicit(raw)
        family = None
    elif has_family:
        sft, code, family, canonical_graph = _parse_family(raw)
    else:
        raise ValidationError("document needs sft+code or family+N")

    canonical = {"version": 1, **canonical_graph}
    bernoulli = None
    periodic = None
    if "measure" in raw:
        bernoulli, periodic, canon_measure = _parse_measure(raw["measure"], sft)
        canonical["measure"] = canon_measure
    potential = None
    if "potential" in raw:
        potential = _parse_potential(raw["potential"], sft)
        canonical["potential"] = {str(a): str(q) for a, q in sorted(
            potential.items(), key=lambda kv: sft.index(kv[0])
        )}
    return ProblemDocument(
        version=1,
        sft=sft,
        code=code,
        family=family,
        bernoulli=bernoulli,
        periodic=periodic,
        potential=potential,
        canonical=canonical,
    )


def _parse_explicit(raw):
    if "sft" not in raw or "code" not in raw:
        raise ValidationError("explicit documents need both sft and code")
    graph = raw["sft"]
    if not isinstance(graph, dict):
        raise ValidationError("sft: must be an object")
    _require_keys(graph, {"symbols", "transitions"}, "sft")
    symbols = graph.get("symbols")
    transitions = graph.get("transitions")
    if not isinstance(symbols, list) or not all(isinstance(s, str) for s in symbols):
        raise ValidationError("sft.symbols: must be a list of strings")
    if not isinstance(transitions, list):
        raise ValidationError("sft.transitions: must be a list of pairs")
    symbol_set = set(symbols)
    if len(symbol_set) != len(symbols):
        raise ValidationError("sft.symbols: identifiers must be unique")
    edges = []
    for item in transitions:
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(s, str) for s in item)
        ):
            raise ValidationError(f"sft.transitions: bad entry {item!r}")
        a, b = item
        if a not in symbol_set or b not in symbol_set:
            raise ValidationError(f"sft.transitions: unknown symbol in {item!r}")
        edges.append((a, b))
    try:
        sft = Sft(symbols, edges)
    except Exception as exc:
        raise ValidationError(str(exc)) from exc

    code_map = raw["code"]
    if not isinstance(code_map, dict) or not all(
        isinstance(v, str) for v in code_map.values()
    ):
        raise ValidationError("code: must map symbols to image symbol strings")
    try:
        code = BlockCode(sft, code_map)
    except Exception as exc:
        raise ValidationError(str(exc)) from exc

    index = sft.index
    canonical_graph = {
        "sft": {
            "symbols": list(symbols),
            "transitions": sorted(
                ([a, b] for a, b in set(edges)),
                key=lambda e: (index(e[0]), index(e[1])),
            ),
        },
        "code": {a: code_map[a] for a in symbols},
    }
    return sft, code, canonical_graph


def _parse_family(raw):
    if "family" not in raw or "N" not in raw:
        raise ValidationError("family documents need both family and N")
    kind = raw["family"]
    n = raw["N"]
    if kind not in ("difference", "sum"):
        raise ValidationError(f"family: unknown family {kind!r}")
    if not isinstance(n, int) or n < 2:
        raise ValidationError("N: must be an integer >= 2")
    code = difference_code(n) if kind == "difference" else sum_code(n)
    canonical_graph = {"family": kind, "N": n}
    return code.domain, code, (kind, n), canonical_graph


def _parse_measure(obj, sft):
    if not isinstance(obj, dict):
        raise ValidationError("measure: must be an object")
    _require_keys(obj, {"bernoulli", "periodic"}, "measure")
    if ("bernoulli" in obj) == ("periodic" in obj):
        raise ValidationError("measure: give exactly one of bernoulli or periodic")
    if "bernoulli" in obj:
        vec = obj["bernoulli"]
        if not isinstance(vec, list):
            raise ValidationError("measure.bernoulli: must be a list of rationals")
        probs = [parse_rational(x, "measure.bernoulli") for x in vec]
        try:
            mu = BernoulliMeasure(tuple(probs))
        except ValueError as exc:
            raise ValidationError(f"measure.bernoulli: {exc}") from exc
        return mu, None, {"bernoulli": [str(p) for p in mu.probs]}
    word = obj["periodic"]
    if not isinstance(word, list) or not all(isinstance(s, str) for s in word):
        raise ValidationError("measure.periodic: must be a list of symbols")
    try:
        point = PeriodicPoint.in_sft(sft, word)
    except ValueError as exc:
        raise ValidationError(f"measure.periodic: {exc}") from exc
    return None, point, {"periodic": list(point.canonical_word)}


def _parse_potential(obj, sft):
    if not isinstance(obj, dict):
        raise ValidationError("potential: must map symbols to rationals")
    out = {}
    for key, value in obj.items():
        if not sft.has_symbol(key):
            raise ValidationError(f"potential: unknown symbol {key!r}")
        out[key] = parse_rational(value, f"potential[{key!r}]")
    return out


def emit_document(doc):
    """Canonical byte form of a parsed document."""
    return json.dumps(doc.canonical, indent=2, sort_keys=True) + "\n"


def canonical_text(text):
    """Canonical byte form of raw document text."""
    return emit_document(parse_document(text))


def expand_family(doc):
    """Explicit sft+code dict equal to the family's generated presentation."""
    if doc.family is None:
        return dict(doc.canonical)
    sft = doc.sft
    code = doc.code
    index = sft.index
    out = {
        "version": 1,
        "sft": {
            "symbols": list(sft.symbols),
            "transitions": sorted(
                ([a, b] for a, b in sft.edges),
                key=lambda e: (index(e[0]), index(e[1])),
            ),
        },
        "code": {a: code(a) for a in sft.symbols},
    }
    for key in ("measure", "potential"):
        if key in doc.canonical:
            out[key] = doc.canonical[key]
    return out
