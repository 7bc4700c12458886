"""
Executable evidence that the quantifier-free maximality test used by the
SMT encoding agrees with the definition of a trace.

Two routes, per model:

* exhaustively compare both predicates on every configuration;
* emit an SMT-LIB file asserting that the two formulations disagree on
  some configuration; an ``unsat`` answer certifies agreement.
"""

from __future__ import annotations

from dataclasses import dataclass

from .configurations import enumerate_configurations, is_maximal_conf_smt, is_trace
from .errors import TooLarge
from .les import EventId, LabelledEventStructure
from .smt import conj, configuration_clauses, declare_events, maximality_clauses, sel

EXHAUSTIVE_LIMIT = 16


@dataclass(frozen=True)
class EquivalenceResult:
    model: str
    passed: bool
    checked: int
    counterexample: frozenset[EventId] | None = None

    def __str__(self) -> str:
        if self.passed:
            return f"{self.model}: maximality equivalence holds on {self.checked} configurations"
        ce = "{" + ", ".join(e.local for e in sorted(self.counterexample)) + "}"
        return f"{self.model}: maximality equivalence FAILS on {ce}"


def check_maximality_equivalence(
    model: LabelledEventStructure, *, literal: bool = False, limit: int = EXHAUSTIVE_LIMIT
) -> EquivalenceResult:
    """Compare ``is_trace`` with ``is_maximal_conf_smt`` on every configuration.

    ``literal=True`` checks the unguarded variant instead, which is expected
    to fail. The counterexample is the first disagreeing configuration in
    qualified-id order.
    """
    if len(model.events) > limit:
        raise TooLarge(f"model {model.name} has {len(model.events)} events; exhaustive limit is {limit}")
    configs = enumerate_configurations(model)
    for c in configs:
        if is_trace(c, model) != is_maximal_conf_smt(c, model, literal=literal):
            return EquivalenceResult(model.name, False, len(configs), c)
    return EquivalenceResult(model.name, True, len(configs))


def definitional_maximality_clauses(model: LabelledEventStructure) -> list[str]:
    """For each unselected ``z``: adding ``z`` breaks conflict-freeness or
    downward closure, spelled out with full causality."""
    out = []
    for z in model.events:
        extends = conj(
            [f"(not {sel(y)})" for y in sorted(model.rivals(z))]
            + [sel(y) for y in sorted(model.ancestors(z))]
        )
        out.append(f"(=> (not {sel(z)}) (not {extends}))")
    return out


def emit_equivalence_smt(model: LabelledEventStructure, *, literal: bool = False) -> str:
    """SMT-LIB text that is unsat iff both maximality formulations agree on
    every configuration of ``model``."""
    lines = [f"; maximality cross-check for model {model.name}"]
    lines += declare_events(model.events)
    lines.append(f"(define-fun configuration () Bool {conj(configuration_clauses(model))})")
    lines.append(f"(define-fun maximality () Bool {conj(maximality_clauses(model, literal=literal))})")
    lines.append(f"(define-fun maximalityReference () Bool {conj(definitional_maximality_clauses(model))})")
    lines.append("(assert configuration)")
    lines.append(
        "(assert (or (and maximality (not maximalityReference)) (and (not maximality) maximalityReference)))"
    )
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


__all__ = [
    "EquivalenceResult",
    "check_maximality_equivalence",
    "emit_equivalence_smt",
    "definitional_maximality_clauses",
]
