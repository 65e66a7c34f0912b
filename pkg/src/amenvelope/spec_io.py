"""Input documents and report serialization.

Input is one JSON document::

    {"semigroup": {"type": "cayley_table", "order": 3, "table": [[0, 1, 2], ...]},
     "generators": [1],
     "weights": {"kind": "explicit", "values": [1]},
     "phi": [[1, 2.0], [2, 3.5]]}

``generators`` may also be a rule name (``"default"``) or
``{"rule": "default", "count": 50}``; ``weights`` may be a list of weight
objects (the first is the main weight).  Optional ``element`` lists
``[key, coefficient]`` pairs of an algebra element, a coefficient being a
number or ``[re, im]``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .classify import ClassificationReport, ProbeResult
from .core import (
    ClosureResult,
    Element,
    GeneratorList,
    MultiplicationOracle,
    SemigroupError,
    SemigroupSpec,
    make_oracle,
)
from .length import LengthTable, WeightFunction
from .normspace import AlgebraElement, NormComparison
from .nuclearity import NuclearityReport


class ParseError(SemigroupError, ValueError):
    pass


class ValidationError(SemigroupError, ValueError):
    pass


@dataclass
class ParsedInput:
    spec: SemigroupSpec
    oracle: MultiplicationOracle = field(compare=False)
    generators: GeneratorList
    weights: list
    phi: dict | None = None
    element: AlgebraElement | None = None

    @property
    def weight(self) -> WeightFunction:
        return self.weights[0]

    def __iter__(self):
        return iter((self.spec, self.generators, self.weight, self.phi))


def _need(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise ValidationError(f"{where}: missing field {key!r}")
    return obj[key]


def _semigroup(doc) -> SemigroupSpec:
    if not isinstance(doc, dict):
        raise ValidationError("semigroup: expected an object")
    kind = doc.get("type", doc.get("kind"))
    if kind is None:
        raise ValidationError("semigroup: missing field 'type'")
    if kind == "cayley_table":
        table = _need(doc, "table", "semigroup")
        if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
            raise ValidationError("semigroup.table: expected a list of rows")
        spec = SemigroupSpec.cayley_table(table)
        if "order" in doc and doc["order"] != spec.order:
            raise ValidationError(f"semigroup.order: {doc['order']} does not match "
                                  f"{spec.order} table rows")
        return spec
    if kind == "transformations":
        return SemigroupSpec.transformations(_need(doc, "degree", "semigroup"),
                                             _need(doc, "generators", "semigroup"))
    if kind == "free":
        return SemigroupSpec.free(_need(doc, "rank", "semigroup"))
    if kind == "naturals_additive":
        return SemigroupSpec.naturals_additive()
    if kind == "left_zero":
        return SemigroupSpec.left_zero()
    raise ValidationError(f"semigroup.type: unknown kind {kind!r}")


def decode_key(oracle: MultiplicationOracle, value, where="element"):
    try:
        return oracle.validate(value)
    except SemigroupError as exc:
        raise ValidationError(f"{where}: {exc}") from None


def encode_key(key):
    if isinstance(key, tuple):
        return list(key)
    return key


def _generators(oracle, doc) -> GeneratorList:
    if doc is None or doc in ("default", "all"):
        return oracle.default_generators()
    if isinstance(doc, dict):
        rule = doc.get("rule", "default")
        if rule not in ("default", "all"):
            raise ValidationError(f"generators.rule: unknown rule {rule!r}")
        gens = oracle.default_generators()
        if "count" in doc:
            count = doc["count"]
            if not isinstance(count, int) or count < 1:
                raise ValidationError("generators.count: expected a positive integer")
            gens = gens.truncate(count)
        return gens
    if isinstance(doc, list):
        if not doc:
            raise ValidationError("generators: empty list")
        return GeneratorList([decode_key(oracle, k, f"generators[{i}]") for i, k in enumerate(doc)])
    raise ValidationError(f"generators: cannot interpret {doc!r}")


def _weight(doc, where="weights") -> WeightFunction:
    if not isinstance(doc, dict):
        raise ValidationError(f"{where}: expected an object")
    kind = doc.get("kind", "affine")
    try:
        if kind == "explicit":
            return WeightFunction.explicit(_need(doc, "values", where))
        if kind == "affine":
            return WeightFunction.affine(doc.get("a", 1), doc.get("b", 0))
        if kind == "staircase_of":
            return WeightFunction.staircase_of(_weight(_need(doc, "base", where), where + ".base"))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{where}: {exc}") from None
    raise ValidationError(f"{where}.kind: unknown kind {kind!r}")


def _coefficient(v, where):
    if isinstance(v, list) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    raise ValidationError(f"{where}: bad coefficient {v!r}")


def parse_spec(document) -> ParsedInput:
    """Validate a document (JSON text or already-decoded dict)."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(document, dict):
        raise ParseError("line 1: top level must be an object")
    unknown = set(document) - {"semigroup", "generators", "weights", "phi", "element"}
    if unknown:
        raise ValidationError(f"unknown top-level field(s) {sorted(unknown)}")
    spec = _semigroup(_need(document, "semigroup", "document"))
    try:
        oracle = make_oracle(spec)
    except SemigroupError as exc:
        raise ValidationError(f"semigroup: {exc}") from exc
    gens = _generators(oracle, document.get("generators"))
    wdoc = document.get("weights", {"kind": "affine", "a": 1, "b": 0})
    if isinstance(wdoc, list):
        if not wdoc:
            raise ValidationError("weights: empty list")
        weights = [_weight(w, f"weights[{i}]") for i, w in enumerate(wdoc)]
    else:
        weights = [_weight(wdoc)]
    phi = None
    if "phi" in document:
        phi = {}
        for i, pair in enumerate(document["phi"]):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ValidationError(f"phi[{i}]: expected [element, value]")
            value = pair[1]
            if isinstance(value, bool) or not isinstance(value, (int, float)) or value < 1:
                raise ValidationError(f"phi[{i}]: value must be a number >= 1")
            phi[decode_key(oracle, pair[0], f"phi[{i}]")] = value
    element = None
    if "element" in document:
        coeffs = {}
        for i, pair in enumerate(document["element"]):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ValidationError(f"element[{i}]: expected [element, coefficient]")
            k = decode_key(oracle, pair[0], f"element[{i}]")
            coeffs[k] = coeffs.get(k, 0j) + _coefficient(pair[1], f"element[{i}]")
        element = AlgebraElement(coeffs)
    return ParsedInput(spec, oracle, gens, weights, phi, element)


def _exact_num(v):
    if isinstance(v, Fraction):
        return str(v)
    return v


def weight_document(F: WeightFunction) -> dict:
    if F.kind == "explicit":
        return {"kind": "explicit", "values": [_exact_num(v) for v in F.values]}
    if F.kind == "affine":
        return {"kind": "affine", "a": _exact_num(F.a), "b": _exact_num(F.b)}
    return {"kind": "staircase_of", "base": weight_document(F.base)}


def spec_document(parsed: ParsedInput) -> dict:
    """Inverse of :func:`parse_spec`, at full precision."""
    spec = parsed.spec
    sg: dict = {"type": spec.kind}
    if spec.kind == "cayley_table":
        sg["order"] = spec.order
        sg["table"] = [list(r) for r in spec.table]
    elif spec.kind == "transformations":
        sg["degree"] = spec.degree
        sg["generators"] = [list(g) for g in spec.generators]
    elif spec.kind == "free":
        sg["rank"] = spec.rank
    doc: dict = {"semigroup": sg}
    gens = parsed.generators
    default = parsed.oracle.default_generators()
    if gens == default:
        doc["generators"] = "default"
    elif gens.rule_based:
        doc["generators"] = {"rule": "default", "count": gens.count}
    else:
        doc["generators"] = [encode_key(k) for k in gens.keys()]
    ws = [weight_document(w) for w in parsed.weights]
    doc["weights"] = ws[0] if len(ws) == 1 else ws
    if parsed.phi is not None:
        doc["phi"] = [[encode_key(k), v] for k, v in parsed.phi.items()]
    if parsed.element is not None:
        doc["element"] = [[encode_key(k), [v.real, v.imag]] for k, v in parsed.element.raw_items()]
    return doc


# --- reports -----------------------------------------------------------------

def fmt(x):
    """JSON-ready value with reals at 12 significant digits."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else fmt(float(x))
    if isinstance(x, complex):
        return [fmt(x.real), fmt(x.imag)]
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(f"{x:.12g}")
    if isinstance(x, Element):
        return encode_key(x.key)
    if isinstance(x, dict):
        return {str(k): fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [fmt(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


@dataclass
class Report:
    """A serializable command result: a JSON payload plus a CSV table."""

    command: str
    payload: dict
    header: list = field(default_factory=list)
    rows: list = field(default_factory=list)


def _entries(table: LengthTable):
    sk = table.oracle.sort_key
    items = sorted(table.items(), key=lambda kv: (kv[1].length, sk(kv[0])))
    return [(encode_key(k), e.length, list(e.witness)) for k, e in items]


def length_report(table: LengthTable, command: str = "length") -> Report:
    rows = _entries(table)
    payload = {
        "radius": table.radius,
        "complete_to_radius": table.complete_to_radius,
        "weight": weight_document(table.weight) if table.weight else None,
        "size": len(table),
        "entries": [{"element": k, "length": l, "witness": w} for k, l, w in rows],
    }
    return Report(command, payload, ["element", "length", "witness"],
                  [[json.dumps(k), l, " ".join(map(str, w))] for k, l, w in rows])


def closure_report(res: ClosureResult, command: str = "enumerate") -> Report:
    keys = [encode_key(e.key) for e in res.elements]
    payload = {"finite": res.finite, "order": res.order, "size": len(res),
               "budget": res.budget, "elements": keys}
    return Report(command, payload, ["element"], [[json.dumps(k)] for k in keys])


def nuclearity_payload(rep: NuclearityReport) -> Report:
    rows = [[r.n, r.count, r.bound, r.partial] for r in rep.rows]
    payload = {
        "F1": weight_document(rep.F1),
        "F2": weight_document(rep.F2),
        "radius": rep.radius,
        "complete": rep.complete,
        "census": [{"n": n, "count": c, "bound": b, "partial": p} for n, c, b, p in rows],
        "partial_nuclear_sum": rep.partial_nuclear_sum,
        "geometric_bound": rep.geometric_bound,
        "witnesses": [{"element": w.element, "defect": w.defect, "index_sum": w.index_sum,
                       "witness": list(w.witness), "dual_weight": w.dual_weight,
                       "primal_weight": w.primal_weight} for w in rep.witnesses],
        "violations": list(rep.violations),
        "note": "finite nuclearity witness on a ball; census counts are lower bounds",
    }
    return Report("nuclearity", payload, ["n", "count", "bound", "partial"], rows)


def comparison_payload(cmp: NormComparison | None):
    if cmp is None:
        return None
    return {"lower": cmp.lower, "upper": cmp.upper, "lower_at": cmp.lower_at,
            "upper_at": cmp.upper_at}


def probe_payload(p: ProbeResult) -> dict:
    return {"subset": [encode_key(e.key) for e in p.subset], "finite": p.outcome.finite,
            "size": len(p.outcome), "budget": p.outcome.budget}


def classification_payload(rep: ClassificationReport) -> Report:
    payload = {
        "verdict": rep.verdict,
        "label": rep.label,
        "order": rep.order,
        "finite_generating_set": rep.finite_generating_set,
        "global_closure": {"finite": rep.global_closure.finite, "size": len(rep.global_closure)},
        "growth": [{"radius": r, "ball_size": n} for r, n in rep.growth],
        "evidence": [probe_payload(p) for p in rep.evidence],
        "norm_equivalence": comparison_payload(rep.norm_equivalence),
        "seed": rep.seed,
        "budget": rep.budget,
        "notes": list(rep.notes),
        "disclaimer": rep.disclaimer,
    }
    rows = [[i, json.dumps(probe_payload(p)["subset"]), p.outcome.finite, len(p.outcome)]
            for i, p in enumerate(rep.evidence)]
    return Report("classify", payload, ["probe", "subset", "finite", "size"], rows)


def growth_payload(profile) -> Report:
    rows = [[r, n] for r, n in profile]
    return Report("growth", {"growth": [{"radius": r, "ball_size": n} for r, n in rows]},
                  ["radius", "ball_size"], rows)


def to_report(result: Any) -> Report:
    if isinstance(result, Report):
        return result
    if isinstance(result, NuclearityReport):
        return nuclearity_payload(result)
    if isinstance(result, LengthTable):
        return length_report(result)
    if isinstance(result, ClosureResult):
        return closure_report(result)
    if isinstance(result, ClassificationReport):
        return classification_payload(result)
    if isinstance(result, list) and all(isinstance(r, tuple) and len(r) == 2 for r in result):
        return growth_payload(result)
    raise TypeError(f"no report format for {type(result).__name__}")


def _csv_cell(v):
    v = fmt(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    return v


def emit_report(result: Any, fmt_name: str = "json") -> str:
    """Serialize deterministically: sorted keys, 12 significant digits."""
    rep = to_report(result)
    if fmt_name == "json":
        body = {"command": rep.command, **rep.payload}
        return json.dumps(fmt(body), sort_keys=True, indent=2) + "\n"
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(rep.header)
        for row in rep.rows:
            w.writerow([_csv_cell(v) for v in row])
        return buf.getvalue()
    raise ValueError(f"unknown output format {fmt_name!r}")
