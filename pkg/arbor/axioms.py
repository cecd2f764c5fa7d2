"""
Seeded property suite for the coordinate model. Every check samples random Nodes and counts the samples that violate
the law; a clean run is the evidence that the model satisfies the axioms it is supposed to satisfy.
"""
import logging
from collections.abc import Callable
from random import Random

from arbor.globals import GlobalSettings
from arbor.model import (
    Node,
    above,
    below,
    between,
    branch_off,
    c_by_witness_search,
    common_upper_bound,
    divergence,
    leq,
    leq_via_R,
    lt,
    nice_witness,
    not_b_by_witness_search,
    perp,
    random_node,
    refine_upper_bound,
    rel_B,
    rel_C,
    split_witness,
)

log = logging.getLogger(__name__)
log.setLevel(logging.INFO)


class PropertyResult:

    def __init__(self, name: str) -> None:
        self.name = name
        self.checked: int = 0
        self.violations: int = 0
        self.first_counterexample: tuple[Node, ...] | None = None

    def record(self, holds: bool, *nodes: Node) -> None:
        self.checked += 1
        if not holds:
            self.violations += 1
            if self.first_counterexample is None:
                self.first_counterexample = nodes

    def __str__(self) -> str:
        line = f"{self.name}: {self.checked} checked, {self.violations} violations"
        if self.first_counterexample:
            line += f" (first: {', '.join(str(x) for x in self.first_counterexample)})"
        return line


class AxiomReport:

    def __init__(self, samples: int, seed: int) -> None:
        self.samples = samples
        self.seed = seed
        self.results: dict[str, PropertyResult] = {}

    def get(self, name: str) -> PropertyResult:
        if name not in self.results:
            self.results[name] = PropertyResult(name)
        return self.results[name]

    def is_clean(self) -> bool:
        return all(x.violations == 0 for x in self.results.values())

    def __str__(self) -> str:
        header = f"axiom suite (samples={self.samples}, seed={self.seed}): {'OK' if self.is_clean() else 'FAILED'}"
        return "\n".join([header] + [str(x) for x in self.results.values()])


def _check_partial_order(report: AxiomReport, a: Node, b: Node, c: Node) -> None:
    report.get("reflexivity").record(leq(a, a), a)
    report.get("antisymmetry").record((not (leq(a, b) and leq(b, a))) or (a == b), a, b)
    report.get("transitivity").record((not (leq(a, b) and leq(b, c))) or leq(a, c), a, b, c)
    report.get("perp agrees with leq").record(perp(a, b) == (not leq(a, b) and not leq(b, a)), a, b)


def _check_semilinearity(report: AxiomReport, a: Node, b: Node, c: Node) -> None:
    # two points above a are comparable
    if leq(a, b) and leq(a, c):
        report.get("up-sets are chains").record(leq(b, c) or leq(c, b), a, b, c)
    bound = common_upper_bound((a, b, c))
    report.get("upward directed").record(leq(a, bound) and leq(b, bound) and leq(c, bound), a, b, c, bound)


def _check_witnesses(report: AxiomReport, a: Node, b: Node) -> None:
    report.get("unbounded").record(lt(a, above(a)) and lt(below(a), a), a)
    top = common_upper_bound((a, b))
    middle = between(a, top)
    report.get("dense").record(lt(a, middle) and lt(middle, top), a, top)
    lo = max((top.depth, *a.turns))
    other = branch_off(a, lo, a.depth)
    report.get("binary branching").record(perp(other, a) and lo < divergence(a, other) < a.depth, a, other)
    if perp(a, b):
        z = nice_witness(a, b)
        report.get("nice").record(lt(a, z) and perp(z, b), a, b, z)
        u = refine_upper_bound(a, b, top)
        report.get("without joins").record(lt(a, u) and lt(b, u) and lt(u, top), a, b, top)


def _check_three_incomparable(report: AxiomReport, a: Node, b: Node, c: Node) -> None:
    if not (perp(a, b) and perp(b, c) and perp(a, c)):
        return
    outsiders = [rel_C(a, b, c), rel_C(b, a, c), rel_C(c, a, b)]
    report.get("exactly one outsider").record(outsiders.count(True) == 1, a, b, c)
    u = split_witness(a, b, c)
    above_count = sum(lt(x, u) for x in (a, b, c))
    report.get("branching split").record(
        (above_count == 2) and any(perp(x, u) for x in (a, b, c)), a, b, c, u
    )


def _check_definitions(report: AxiomReport, a: Node, b: Node, c: Node) -> None:
    report.get("C closed form").record(rel_C(a, b, c) == c_by_witness_search(a, b, c), a, b, c)
    report.get("not B identity").record((not rel_B(a, b, c)) == not_b_by_witness_search(a, b, c), a, b, c)
    report.get("leq from R").record(leq(a, b) == leq_via_R(a, b), a, b)


CHECKS: tuple[Callable[..., None], ...] = (
    _check_partial_order,
    _check_semilinearity,
    _check_three_incomparable,
    _check_definitions,
)


def run_axiom_suite(samples: int | None = None, seed: int | None = None) -> AxiomReport:
    """ run every property on the given number of random triples """
    if samples is None:
        samples = GlobalSettings.get("axioms.samples")
    if seed is None:
        seed = GlobalSettings.get("axioms.seed")
    rng = Random(seed)
    report = AxiomReport(samples, seed)
    for index in range(samples):
        a, b, c = random_node(rng), random_node(rng), random_node(rng)
        # bias a third of the samples towards related triples
        if index % 3 == 1:
            b = above(a) if rng.random() < 0.5 else below(a)
        for check in CHECKS:
            check(report, a, b, c)
        _check_witnesses(report, a, b)
    log.info(f"axiom suite done: {'clean' if report.is_clean() else 'violations found'}")
    return report
