import json
import logging
from collections.abc import Sequence
from typing import Any

from arbor.axioms import run_axiom_suite
from arbor.behaviors import one_constant_checks, render_behavior_table, render_check_report
from arbor.classifier import chain_classify, classify, model_complete_core_hint
from arbor.csp import assignment_to_json, brute_force_oracle, parse_instance, solve
from arbor.engine import embed_structure
from arbor.formulas import NAMED_FORMULAS, QfFormula, named_formula
from arbor.globals import REDUCE_MODE_REGEX, YES_NO_REGEX
from arbor.model import RELATIONS, Node
from arbor.strings import Strings
from arbor.structures import FiniteStructure, convex_extensions, enumerate_age_structures, validate
from arbor.transformations import (
    MappingError,
    RerootSpec,
    find_flip,
    flatten,
    project_to_chain,
    reroot,
    verify_preserves,
)
from arbor.utils import read_json_file, read_text_file
from ui.interpreter import ERROR_EXIT_CODE, CLIInterpreter
from ui.utils import CommandContext, file_arg, integer_arg, node_arg, parse_node_argument, relation_arg
from ui.utils import InterpreterFunctionWrapper as IFW
from ui.utils import RegexWithErrorMessage as RWE

log = logging.getLogger(__name__)

UNSAT_EXIT_CODE = 1
FORMULA_SEPARATOR = ";"


def _dumps(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False)


def _read_nodes(path: str) -> list[Node]:
    data = read_json_file(path)
    if not isinstance(data, list):
        raise MappingError(Strings.expected_node_list.format(path=path))
    return [Node.create_from_json(x) for x in data]


def _read_structure(path: str) -> FiniteStructure:
    return FiniteStructure.create_from_json(read_json_file(path))


def _formula(text: str) -> QfFormula:
    """ a named formula (B, R, D, Betw, Cyc, Sep) or a formula written out """
    if text in NAMED_FORMULAS:
        return named_formula(text)
    return QfFormula(text)


def _seed(context: CommandContext) -> int:
    return int(context.get_flag("seed", "0"))


def _samples(context: CommandContext) -> int | None:
    samples = context.get_flag("samples")
    return int(samples) if samples is not None else None


def evaluate_relation(context: CommandContext, relation: str, *nodes: str) -> str:
    arity = RELATIONS[relation].arity
    if len(nodes) != arity:
        context.set_exit_code(ERROR_EXIT_CODE)
        return Strings.wrong_arity.format(relation=relation, arity=arity, passed=len(nodes))
    parsed = [parse_node_argument(x, f"node {i}", i + 1) for i, x in enumerate(nodes)]
    return Strings.true if RELATIONS[relation](*parsed) else Strings.false


def solve_instance(context: CommandContext, path: str) -> str:
    assignment = solve(parse_instance(read_text_file(path)))
    if assignment is None:
        context.set_exit_code(UNSAT_EXIT_CODE)
        return Strings.unsat
    return f"{Strings.sat}\n{_dumps(assignment_to_json(assignment))}"


def run_oracle(context: CommandContext, path: str) -> str:
    if brute_force_oracle(parse_instance(read_text_file(path))):
        return Strings.sat
    context.set_exit_code(UNSAT_EXIT_CODE)
    return Strings.unsat


def embed(context: CommandContext, path: str) -> str:
    structure = _read_structure(path)
    report = validate(structure)
    if not report.is_valid():
        context.set_exit_code(ERROR_EXIT_CODE)
        return str(report)
    return _dumps([x.to_json() for x in embed_structure(structure)])


def list_extensions(context: CommandContext, path: str) -> str:
    extensions = convex_extensions(_read_structure(path))
    return f"{Strings.extensions_count.format(count=len(extensions))}\n{_dumps([x.to_json() for x in extensions])}"


def enumerate_structures(context: CommandContext, n: str) -> str:
    structures = enumerate_age_structures(int(n), reduce=context.get_flag("reduce", "poset"))
    result = Strings.structures_count.format(count=len(structures))
    if context.get_flag("list", "no").startswith("y"):
        result += f"\n{_dumps([x.to_json() for x in structures])}"
    return result


def reroot_points(context: CommandContext, path: str) -> str:
    points = _read_nodes(path)
    pivot = parse_node_argument(context.require_flag("pivot"), "--pivot")
    mapped = reroot(points, RerootSpec(pivot=pivot))
    preserves = {relation: verify_preserves(mapped, relation)[0] for relation in ("B", "neq")}
    return _dumps({"map": mapped.to_json(), "preserves": preserves})


def flatten_points(context: CommandContext, path: str) -> str:
    return _dumps(flatten(_read_nodes(path)).to_json())


def project_points(context: CommandContext, path: str) -> str:
    return _dumps(project_to_chain(_read_nodes(path)).to_json())


def flip_points(context: CommandContext, path: str) -> str:
    flip = find_flip(_read_nodes(path))
    if flip is None:
        context.set_exit_code(UNSAT_EXIT_CODE)
        return _dumps(None)
    first, second, bijection = flip
    return _dumps({"pair": [first, second], "bijection": list(bijection)})


def classify_formula(context: CommandContext) -> str:
    formula = _formula(context.require_flag("formula"))
    return str(classify(formula, _seed(context), sample_size=_samples(context)))


def classify_on_chain(context: CommandContext) -> str:
    formula = _formula(context.require_flag("formula"))
    return str(chain_classify(formula, _seed(context), sample_size=_samples(context)))


def core_hint(context: CommandContext) -> str:
    texts = [x.strip() for x in context.require_flag("formulas").split(FORMULA_SEPARATOR) if x.strip()]
    formulas = [_formula(x) for x in texts]
    return str(model_complete_core_hint(formulas, _seed(context), sample_size=_samples(context)))


def behavior_table(context: CommandContext) -> str:
    return render_behavior_table(k=int(context.get_flag("points", "3")))


def run_checks(context: CommandContext) -> str:
    results = one_constant_checks()
    passed = sum(1 for x in results if x.passed)
    if passed != len(results):
        context.set_exit_code(UNSAT_EXIT_CODE)
    summary = Strings.checks_summary.format(passed=passed, total=len(results))
    return f"{render_check_report(results)}\n{summary}"


def run_axioms(context: CommandContext) -> str:
    seed = context.get_flag("seed")
    report = run_axiom_suite(_samples(context), int(seed) if seed is not None else None)
    if not report.is_clean():
        context.set_exit_code(UNSAT_EXIT_CODE)
    return str(report)


SEED_FLAG = integer_arg("seed")
SAMPLES_FLAG = integer_arg("samples")
FORMULA_FLAG = RWE("formula", None, None)

COMMANDS: dict[str, dict | IFW] = {
    "eval": IFW(
        [relation_arg("relation")], evaluate_relation, "Evaluates a relation on nodes given as JSON", optional_args=4
    ),
    "solve": IFW([file_arg("instance file")], solve_instance, "Solves a constraint instance, exit 1 if UNSAT"),
    "oracle": IFW([file_arg("instance file")], run_oracle, "Decides an instance on the finite structures of the age"),
    "embed": IFW([file_arg("structure file")], embed, "Embeds a finite structure into the model"),
    "extensions": IFW([file_arg("structure file")], list_extensions, "Lists the convex linear extensions"),
    "enumerate": IFW(
        [integer_arg("n")],
        enumerate_structures,
        "Counts (and lists) the structures of the age on n points",
        flags=[
            RWE("reduce", REDUCE_MODE_REGEX, Strings.reduce_mode_error),
            RWE("list", YES_NO_REGEX, Strings.yes_no_error)
        ]
    ),
    "reroot": IFW(
        [file_arg("nodes file")],
        reroot_points,
        "Reroots the nodes at the chain above a pivot",
        flags=[node_arg("pivot")]
    ),
    "flatten": IFW([file_arg("nodes file")], flatten_points, "Maps the nodes onto an antichain keeping R as C"),
    "project": IFW([file_arg("nodes file")], project_points, "Maps the nodes onto a chain"),
    "flip": IFW([file_arg("nodes file")], flip_points, "Finds two points of an antichain an automorphism swaps"),
    "classify": IFW(
        None,
        classify_formula,
        "Classifies a formula by the maps that keep it",
        flags=[FORMULA_FLAG, SEED_FLAG, SAMPLES_FLAG]
    ),
    "chain": IFW(
        None, classify_on_chain, "Classifies a formula read on a chain", flags=[FORMULA_FLAG, SEED_FLAG, SAMPLES_FLAG]
    ),
    "core": IFW(
        None,
        core_hint,
        "Guesses the model-complete core of formulas separated by ';'",
        flags=[RWE("formulas", None, None), SEED_FLAG, SAMPLES_FLAG]
    ),
    "behaviors": IFW(None, behavior_table, "Prints the behavior table", flags=[integer_arg("points")]),
    "checks": IFW(None, run_checks, "Runs the configuration checks around one constant"),
    "axioms": IFW(None, run_axioms, "Runs the seeded axiom suite", flags=[SEED_FLAG, SAMPLES_FLAG]),
}

INTERPRETER = CLIInterpreter(COMMANDS)


def run(argv: Sequence[str]) -> int:
    """ runs one command, prints its output and returns the exit code """
    context = CommandContext({"exit code": 0})
    try:
        output = INTERPRETER.execute(context, list(argv))
    except Exception as e:
        log.exception(f"error while running '{' '.join(argv)}': {e}")
        context.set_exit_code(ERROR_EXIT_CODE)
        output = Strings.error.format(message=e)
    print(output)
    return context.get_exit_code()
