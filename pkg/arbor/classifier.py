"""
Sampled classification of relations defined by quantifier-free formulas.
A relation is tested against families of finite maps standing in for the automorphism groups of the candidate
structures; a violation is a re-checkable counterexample, preservation only means no sample broke it.
"""
import logging
from collections.abc import Callable, Iterator, Sequence
from enum import Enum
from fractions import Fraction
from itertools import chain, permutations, product
from random import Random

from arbor.engine import embed_structure, homogeneity_extend
from arbor.formulas import QfFormula
from arbor.globals import GlobalSettings
from arbor.model import ROOT, Node, random_nodes
from arbor.structures import age_representatives, check_bound, find_isomorphisms, induced_structure
from arbor.transformations import MappedSet, RerootSpec, flatten, leaf_reroot, project_to_chain, reroot

log = logging.getLogger(__name__)
log.setLevel(logging.INFO)

CAVEAT = "sampled verdict: violations are certain, preservation only means no sampled map broke the relation"
HEURISTIC = "heuristic label: combines sampled verdicts with sampled collapse tests"
DETERMINISTIC_SIZE = 4

Counterexample = tuple[tuple, tuple]


class FamilyEvidence:

    def __init__(self, family: str, checked: int, counterexample: Counterexample | None = None) -> None:
        self.family = family
        self.checked = checked
        self.counterexample = counterexample

    @property
    def preserved(self) -> bool:
        return self.counterexample is None

    def __str__(self) -> str:
        if self.preserved:
            return f"{self.family}: preserved on {self.checked} maps"
        source, image = self.counterexample
        return (
            f"{self.family}: violated after {self.checked} maps, "
            f"({', '.join(str(x) for x in source)}) -> ({', '.join(str(x) for x in image)})"
        )


def first_violation(
        predicate: Callable[..., bool],
        arity: int,
        source: Sequence,
        image: Sequence,
        one_way: bool = False,
        distinct: bool = False
) -> Counterexample | None:
    """
    The first tuple on which the map fails to carry the relation over, None if there is none.
    By default the relation and its complement must both be kept, one_way only asks that the relation is kept.
    distinct skips the tuples that repeat an argument.
    """
    for indices in product(range(len(source)), repeat=arity):
        if distinct and (len(set(indices)) != arity):
            continue
        before = predicate(*(source[i] for i in indices))
        after = predicate(*(image[i] for i in indices))
        if (before and not after) or ((not one_way) and (after and not before)):
            return tuple(source[i] for i in indices), tuple(image[i] for i in indices)
    return None


# generator families on Nodes

FAMILIES: dict[str, type["GeneratorFamily"]] = {}


class GeneratorFamily:
    """ a family of finite maps standing in for a group of automorphisms """
    name: str

    def __init_subclass__(cls, family: str, **kwargs) -> None:
        super().__init_subclass__(**kwargs)
        cls.name = family
        FAMILIES[family] = cls

    def __init__(self, structure_bound: int) -> None:
        self.structure_bound = structure_bound

    def representatives(self) -> Iterator[tuple[Node, ...]]:
        for size in range(1, min(DETERMINISTIC_SIZE, self.structure_bound) + 1):
            yield from age_representatives(size)

    def deterministic(self) -> Iterator[MappedSet]:
        raise NotImplementedError

    def random(self, rng: Random) -> MappedSet:
        raise NotImplementedError

    def maps(self, rng: Random, sample_size: int) -> Iterator[MappedSet]:
        return chain(self.deterministic(), (self.random(rng) for _ in range(sample_size)))

    def test(self, formula: QfFormula, rng: Random, sample_size: int) -> FamilyEvidence:
        checked = 0
        for mapped in self.maps(rng, sample_size):
            checked += 1
            counterexample = first_violation(formula, formula.arity, mapped.source, mapped.image)
            if counterexample is not None:
                return FamilyEvidence(self.name, checked, counterexample)
        return FamilyEvidence(self.name, checked)


class SymmetricFamily(GeneratorFamily, family="sym"):
    """ arbitrary bijections """

    def deterministic(self) -> Iterator[MappedSet]:
        for points in self.representatives():
            for permutation in permutations(range(len(points))):
                yield MappedSet(points, [points[i] for i in permutation])

    def random(self, rng: Random) -> MappedSet:
        size = rng.randint(1, self.structure_bound)
        source = random_nodes(rng, size)
        image = random_nodes(rng, size)
        size = min(len(source), len(image))
        rng.shuffle(image)
        return MappedSet(source[:size], image[:size])


class RerootFamily(GeneratorFamily, family="reroot"):
    """ rerootings with respect to a non-empty chain """

    def deterministic(self) -> Iterator[MappedSet]:
        for points in self.representatives():
            for pivot in points:
                yield reroot(points, RerootSpec(pivot=pivot))

    def random(self, rng: Random) -> MappedSet:
        points = random_nodes(rng, rng.randint(1, self.structure_bound))
        return reroot(points, RerootSpec(pivot=rng.choice(points)))


class PartialIsoFamily(GeneratorFamily, family="partial iso"):
    """ partial isomorphisms of the model, every relation of the signature is kept by them """

    def deterministic(self) -> Iterator[MappedSet]:
        for points in self.representatives():
            structure = induced_structure(points)
            for automorphism in find_isomorphisms(structure, structure):
                yield MappedSet(points, [points[i] for i in automorphism])

    def random(self, rng: Random) -> MappedSet:
        base = random_nodes(rng, rng.randint(1, max(1, self.structure_bound - 1)))
        copy = embed_structure(induced_structure(base))
        room = min(3, self.structure_bound - len(base))
        extra = [x for x in random_nodes(rng, rng.randint(0, max(0, room))) if x not in base]
        rho = homogeneity_extend(base, copy, extra)
        return MappedSet(rho.domain, rho.image)

    def test(self, formula: QfFormula, rng: Random, sample_size: int) -> FamilyEvidence:
        evidence = super().test(formula, rng, sample_size)
        if not evidence.preserved:
            log.warning(f"a partial isomorphism breaks '{formula}': {evidence}")
        return evidence


class VerdictClass(Enum):
    EQUALITY = "equality-class"
    B_CLASS = "B-class"
    ORDER_CLASS = "order-class"


class Verdict:

    def __init__(self, formula: QfFormula, label: VerdictClass, evidence: dict[str, FamilyEvidence]) -> None:
        self.formula = formula
        self.label = label
        self.evidence = evidence
        self.caveat = CAVEAT

    def __str__(self) -> str:
        lines = [f"{self.formula}: {self.label.value}"]
        lines.extend(f"  {x}" for x in self.evidence.values())
        lines.append(f"  ({self.caveat})")
        return "\n".join(lines)


def _settings(sample_size: int | None, structure_bound: int | None) -> tuple[int, int]:
    if sample_size is None:
        sample_size = GlobalSettings.get("classifier.sample size")
    if structure_bound is None:
        structure_bound = GlobalSettings.get("classifier.structure bound")
    check_bound("classifier structure bound", structure_bound, "bounds.isomorphism points")
    return sample_size, structure_bound


def classify(
        formula: QfFormula,
        seed: int,
        sample_size: int | None = None,
        structure_bound: int | None = None
) -> Verdict:
    """ equality-class if no bijection breaks the relation, B-class if no rerooting does, order-class otherwise """
    sample_size, structure_bound = _settings(sample_size, structure_bound)
    rng = Random(seed)
    evidence = {name: family(structure_bound).test(formula, rng, sample_size) for name, family in FAMILIES.items()}
    if evidence["sym"].preserved:
        label = VerdictClass.EQUALITY
    elif evidence["reroot"].preserved:
        label = VerdictClass.B_CLASS
    else:
        label = VerdictClass.ORDER_CLASS
    log.info(f"'{formula}' classified as {label.value}")
    return Verdict(formula, label, evidence)


# reducts of the rational order

class ChainClass(Enum):
    LINEAR = "linear"
    BETW = "Betw-class"
    CYC = "Cyc-class"
    SEP = "Sep-class"
    EQUALITY = "equality-class"


CHAIN_LABELS: dict[ChainClass, str] = {
    ChainClass.LINEAR: "(Q;<)",
    ChainClass.BETW: "(Q;Betw)",
    ChainClass.CYC: "(Q;Cyc)",
    ChainClass.SEP: "(Q;Sep)",
    ChainClass.EQUALITY: "(Q;≠)",
}


class ChainVerdict:

    def __init__(self, label: ChainClass, evidence: dict[str, FamilyEvidence]) -> None:
        self.label = label
        self.evidence = evidence
        self.caveat = CAVEAT

    def __str__(self) -> str:
        return "\n".join([self.label.value] + [f"  {x}" for x in self.evidence.values()] + [f"  ({self.caveat})"])


def _random_sample(rng: Random) -> list[Fraction]:
    size = rng.randint(2, 5)
    values = {Fraction(rng.randint(-30, 30), rng.choice((1, 2, 3, 5))) for _ in range(size)}
    return sorted(values)


def _chain_maps(family: str, sample: list[Fraction], rng: Random | None) -> Iterator[list[Fraction]]:
    """ images of the sorted sample under maps of the family, all of them when rng is None, one otherwise """
    m = len(sample)
    match family:
        case "monotone":
            if rng is None:
                yield [2 * x + 1 for x in sample]
            else:
                scale, shift = Fraction(rng.randint(1, 9), rng.randint(1, 9)), rng.randint(-9, 9)
                yield [scale * x + shift for x in sample]
        case "reversal":
            yield [-x for x in sample]
        case "rotation":
            shifts = range(1, m) if rng is None else [rng.randint(0, m - 1)]
            for shift in shifts:
                yield [sample[(i + shift) % m] for i in range(m)]
        case "permutations":
            if rng is None:
                for permutation in permutations(range(m)):
                    yield [sample[i] for i in permutation]
            else:
                image = list(sample)
                rng.shuffle(image)
                yield image


CHAIN_FAMILIES = ("monotone", "reversal", "rotation", "permutations")


def _chain_verdict(
        predicates: Sequence[tuple[Callable[..., bool], int]],
        seed: int,
        sample_size: int
) -> ChainVerdict:
    rng = Random(seed)
    evidence: dict[str, FamilyEvidence] = {}
    for family in CHAIN_FAMILIES:
        deterministic = (
            (sample, image)
            for m in range(1, DETERMINISTIC_SIZE + 1)
            for sample in [[Fraction(i) for i in range(m)]]
            for image in _chain_maps(family, sample, None)
        )
        sampled = (
            (sample, image)
            for sample in (_random_sample(rng) for _ in range(sample_size))
            for image in _chain_maps(family, sample, rng)
        )
        checked = 0
        counterexample = None
        for sample, image in chain(deterministic, sampled):
            checked += 1
            for predicate, arity in predicates:
                counterexample = first_violation(predicate, arity, sample, image)
                if counterexample is not None:
                    break
            if counterexample is not None:
                break
        evidence[family] = FamilyEvidence(family, checked, counterexample)
    if not evidence["monotone"].preserved:
        log.warning(f"an order preserving map breaks a chain relation: {evidence['monotone']}")
    rotation, reversal = evidence["rotation"].preserved, evidence["reversal"].preserved
    if evidence["permutations"].preserved:
        label = ChainClass.EQUALITY
    elif rotation and reversal:
        label = ChainClass.SEP
    elif rotation:
        label = ChainClass.CYC
    elif reversal:
        label = ChainClass.BETW
    else:
        label = ChainClass.LINEAR
    return ChainVerdict(label, evidence)


def chain_classify(formula: QfFormula, seed: int, sample_size: int | None = None) -> ChainVerdict:
    """ which reduct of (Q; <) the formula defines when read on a chain """
    sample_size, _ = _settings(sample_size, None)
    return _chain_verdict([(formula.evaluate_chain, formula.arity)], seed, sample_size)


# model-complete core hint

class CoreHint:

    def __init__(self, label: str, evidence: list[str]) -> None:
        self.label = label
        self.evidence = evidence
        self.note = HEURISTIC

    def __str__(self) -> str:
        return "\n".join([self.label] + [f"  {x}" for x in self.evidence] + [f"  ({self.note})"])


def _node_samples(rng: Random, sample_size: int, structure_bound: int) -> list[tuple[Node, ...]]:
    samples: list[tuple[Node, ...]] = []
    for size in range(1, min(DETERMINISTIC_SIZE, structure_bound) + 1):
        samples.extend(age_representatives(size))
    samples.extend(tuple(random_nodes(rng, rng.randint(1, structure_bound))) for _ in range(sample_size))
    return samples


def _collapse_violation(
        formulas: Sequence[QfFormula],
        samples: Sequence[tuple[Node, ...]],
        collapse: Callable[[Sequence[Node]], MappedSet],
        one_way: bool = True,
        distinct: bool = False
) -> Counterexample | None:
    for points in samples:
        mapped = collapse(points)
        for formula in formulas:
            counterexample = first_violation(formula, formula.arity, mapped.source, mapped.image, one_way, distinct)
            if counterexample is not None:
                return counterexample
    return None


def _constant_map_preserves(formula: QfFormula, samples: Sequence[tuple[Node, ...]]) -> bool:
    """ a constant map keeps a relation iff the relation is empty or holds on a constant tuple """
    if formula(*([ROOT] * formula.arity)):
        return True
    return not any(
        formula(*(points[i] for i in indices))
        for points in samples
        for indices in product(range(len(points)), repeat=formula.arity)
    )


def _leaf_reroot_flattened(points: Sequence[Node]) -> MappedSet:
    leaves = flatten(points).image
    return leaf_reroot(leaves, leaves[0])


def model_complete_core_hint(
        formulas: Sequence[QfFormula],
        seed: int,
        sample_size: int | None = None,
        structure_bound: int | None = None
) -> CoreHint:
    sample_size, structure_bound = _settings(sample_size, structure_bound)
    verdicts = [classify(x, seed, sample_size, structure_bound) for x in formulas]
    evidence = [f"{x.formula}: {x.label.value}" for x in verdicts]
    samples = _node_samples(Random(seed), sample_size, structure_bound)
    if all(x.label == VerdictClass.EQUALITY for x in verdicts):
        if all(_constant_map_preserves(x, samples) for x in formulas):
            return CoreHint("one-element", evidence + ["a constant map keeps every relation"])
        return CoreHint("(Q;≠)", evidence + ["a constant map breaks some relation"])
    thin = _collapse_violation(formulas, samples, project_to_chain)
    if thin is None:
        chain_verdict = _chain_verdict([(x.evaluate_chain, x.arity) for x in formulas], seed, sample_size)
        evidence.append("the projection to a chain keeps every relation")
        return CoreHint(CHAIN_LABELS[chain_verdict.label], evidence)
    evidence.append(f"the projection to a chain breaks {thin[0]} -> {thin[1]}")
    flat = _collapse_violation(formulas, samples, flatten)
    if flat is None:
        evidence.append("the flattening keeps every relation")
        # with a repeated argument D(x, y, u, u) is C(u, xy), so only distinct leaves are compared
        leaf = _collapse_violation(formulas, samples, _leaf_reroot_flattened, one_way=False, distinct=True)
        if leaf is None:
            return CoreHint("(L2;D)", evidence + ["rerooting the leaves at a leaf keeps every relation"])
        return CoreHint("(L2;C)", evidence + [f"rerooting the leaves at a leaf breaks {leaf[0]} -> {leaf[1]}"])
    evidence.append(f"the flattening breaks {flat[0]} -> {flat[1]}")
    if any(x.label == VerdictClass.ORDER_CLASS for x in verdicts):
        return CoreHint("(S2;<,⊥)", evidence)
    return CoreHint("(S2;B)", evidence)
