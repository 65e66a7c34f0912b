"""Command line entry point: ``amenvelope COMMAND INPUT.json [options]``.

Exit codes: 0 success, 1 validation error, 2 budget exhausted where a
complete answer was required, 3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .classify import desk_classify, growth_profile, local_finiteness_probe, probe_pool, random_subsets
from .core import SemigroupError, closure
from .length import (
    NotLocallyFiniteEvidence,
    WeightFunction,
    dominating_weight,
    length_table,
    verify_domination,
)
from .normspace import NotComplete, comparison_constants, norm_of
from .nuclearity import InvariantViolation, nuclearity_report
from .spec_io import (
    Report,
    ValidationError,
    classification_payload,
    closure_report,
    comparison_payload,
    emit_report,
    encode_key,
    growth_payload,
    length_report,
    nuclearity_payload,
    parse_spec,
    probe_payload,
    weight_document,
)

log = logging.getLogger("amenvelope")

COMMANDS = ("enumerate", "length", "norm", "nuclearity", "local-finiteness",
            "dominating-weight", "norm-equivalence", "growth", "classify")

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_INVARIANT = 0, 1, 2, 3
OUTPUT_DIR_ENV = "AMENV_OUTPUT_DIR"


class BudgetExhausted(SemigroupError, RuntimeError):
    pass


@dataclass(frozen=True)
class RunConfig:
    input: str
    command: str
    radius: float = 10.0
    budget: int = 10_000
    depth: int = 10
    probes: int = 20
    base: float = math.e
    seed: int = 0
    format: str = "json"
    out: str | None = None

    def __post_init__(self):
        if not self.base > 1:
            raise ValidationError(f"--base must be > 1, got {self.base}")
        if self.budget < 1:
            raise ValidationError("--budget must be at least 1")
        if self.format not in ("json", "csv"):
            raise ValidationError(f"--format must be json or csv, got {self.format!r}")
        if self.radius < 0:
            raise ValidationError("--radius must be non-negative")


def _finite_seeds(parsed, budget):
    gens = parsed.generators
    return gens.keys() if gens.finite else gens.keys(upto=budget + 1)


def cmd_enumerate(parsed, cfg: RunConfig) -> Report:
    return closure_report(closure(parsed.oracle, _finite_seeds(parsed, cfg.budget), cfg.budget))


def cmd_length(parsed, cfg: RunConfig) -> Report:
    return length_report(length_table(parsed.oracle, parsed.generators, parsed.weight,
                                      cfg.radius, cfg.budget))


def cmd_norm(parsed, cfg: RunConfig) -> Report:
    table = length_table(parsed.oracle, parsed.generators, parsed.weight, cfg.radius, cfg.budget)
    sk = parsed.oracle.sort_key
    deltas = []
    for k, e in sorted(table.items(), key=lambda kv: (kv[1].length, sk(kv[0]))):
        deltas.append([encode_key(k), e.length, cfg.base ** float(e.length)])
    payload = {"base": cfg.base, "radius": cfg.radius,
               "complete_to_radius": table.complete_to_radius,
               "point_masses": [{"element": k, "length": l, "norm": n} for k, l, n in deltas]}
    if parsed.element is not None:
        payload["element_norm"] = norm_of(parsed.element, table, cfg.base)
    return Report("norm", payload, ["element", "length", "norm"],
                  [[k, l, n] for k, l, n in deltas])


def cmd_nuclearity(parsed, cfg: RunConfig) -> Report:
    rep = nuclearity_report(parsed.oracle, parsed.generators, parsed.weight, cfg.radius,
                            cfg.budget)
    if rep.violations:
        raise InvariantViolation("; ".join(rep.violations))
    return nuclearity_payload(rep)


def cmd_local_finiteness(parsed, cfg: RunConfig) -> Report:
    pool = probe_pool(parsed.oracle, parsed.generators, cfg.budget)
    results = local_finiteness_probe(parsed.oracle, random_subsets(pool, cfg.probes, cfg.seed),
                                     cfg.budget)
    payload = {"seed": cfg.seed, "budget": cfg.budget,
               "all_finite": all(p.finite for p in results),
               "probes": [probe_payload(p) for p in results]}
    rows = [[i, p["subset"], p["finite"], p["size"]] for i, p in enumerate(payload["probes"])]
    return Report("local-finiteness", payload, ["probe", "subset", "finite", "size"], rows)


def cmd_dominating_weight(parsed, cfg: RunConfig) -> Report:
    if parsed.phi is None:
        raise ValidationError("dominating-weight needs a 'phi' table in the input")
    F, thinned = dominating_weight(parsed.oracle, parsed.generators, parsed.phi, cfg.depth,
                                   cfg.budget)
    radius = max(F.values)
    table = length_table(parsed.oracle, thinned, F, radius, cfg.budget)
    bad = verify_domination(table, parsed.phi)
    if bad:
        raise InvariantViolation(f"{len(bad)} domination violation(s), first at {bad[0].s!r}")
    payload = {"depth": cfg.depth, "weight": weight_document(F),
               "thinned_generators": [encode_key(k) for k in thinned.keys()],
               "checked_elements": len(table), "violations": 0}
    rows = [[n, encode_key(thinned.key(n)), F(n)] for n in range(1, len(thinned) + 1)]
    return Report("dominating-weight", payload, ["n", "generator", "weight"], rows)


def cmd_norm_equivalence(parsed, cfg: RunConfig) -> Report:
    # One weight is compared with the trivial norm (F = 0), two with each other.
    if len(parsed.weights) > 1:
        F1, F2 = parsed.weights[0], parsed.weights[1]
    else:
        F1, F2 = WeightFunction.constant(0), parsed.weight
    t1 = length_table(parsed.oracle, parsed.generators, F1, math.inf, cfg.budget)
    t2 = length_table(parsed.oracle, parsed.generators, F2, math.inf, cfg.budget)
    if not (t1.complete_to_radius and t2.complete_to_radius):
        raise BudgetExhausted(f"the semigroup did not close within {cfg.budget} elements; "
                              "norm equivalence needs the whole (finite) semigroup")
    cmp = comparison_constants(t1, t2, cfg.base)
    payload = {"F1": weight_document(F1), "F2": weight_document(F2), "base": cfg.base,
               "size": len(t1), "comparison": comparison_payload(cmp)}
    sk = parsed.oracle.sort_key
    rows = [[encode_key(k), t1.length(k), t2.length(k)]
            for k in sorted(t1.keys(), key=sk)]
    return Report("norm-equivalence", payload, ["element", "length_F1", "length_F2"], rows)


def cmd_growth(parsed, cfg: RunConfig) -> Report:
    radii = list(range(1, int(math.floor(cfg.radius)) + 1))
    return growth_payload(growth_profile(parsed.oracle, parsed.generators, parsed.weight,
                                         radii, cfg.budget))


def cmd_classify(parsed, cfg: RunConfig) -> Report:
    return classification_payload(desk_classify(parsed.oracle, parsed.generators, cfg.budget,
                                                cfg.probes, cfg.seed))


HANDLERS = {
    "enumerate": cmd_enumerate,
    "length": cmd_length,
    "norm": cmd_norm,
    "nuclearity": cmd_nuclearity,
    "local-finiteness": cmd_local_finiteness,
    "dominating-weight": cmd_dominating_weight,
    "norm-equivalence": cmd_norm_equivalence,
    "growth": cmd_growth,
    "classify": cmd_classify,
}


def run(cfg: RunConfig) -> str:
    """Parse the input, run the command and return the serialized report."""
    text = Path(cfg.input).read_text() if cfg.input != "-" else sys.stdin.read()
    parsed = parse_spec(text)
    return emit_report(HANDLERS[cfg.command](parsed, cfg), cfg.format)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="amenvelope",
        description="Weighted word lengths, envelope norms and nuclearity witnesses "
                    "for countable semigroups")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", help="JSON input document, or - for stdin")
    p.add_argument("--radius", type=float, default=10.0)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--probes", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--base", type=float, default=math.e)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="output file (default stdout); relative paths "
                   f"are resolved against ${OUTPUT_DIR_ENV} when set")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _output_path(out: str) -> Path:
    path = Path(out)
    root = os.environ.get(OUTPUT_DIR_ENV)
    if root and not path.is_absolute():
        path = Path(root) / path
    return path


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = RunConfig(args.input, args.command, args.radius, args.budget, args.depth,
                        args.probes, args.base, args.seed, args.format, args.out)
        text = run(cfg)
    except InvariantViolation as exc:
        log.error("invariant violation: %s", exc)
        return EXIT_INVARIANT
    except (BudgetExhausted, NotLocallyFiniteEvidence, NotComplete) as exc:
        log.error("budget exhausted: %s", exc)
        return EXIT_BUDGET
    except (SemigroupError, ValueError, KeyError, OSError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_INVALID
    if cfg.out:
        try:
            path = _output_path(cfg.out)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
        except OSError as exc:
            log.error("cannot write output: %s", exc)
            return EXIT_INVALID
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
