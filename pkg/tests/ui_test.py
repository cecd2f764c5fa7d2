import io
import json
import tempfile
import unittest
from contextlib import redirect_stdout
from pathlib import Path

from ui.commands import INTERPRETER, run
from ui.utils import CommandContext, MissingFlagError, TooFewArgumentsError, split_flags

X = '{"turns": ["1/2"], "depth": "1"}'
Y = '{"turns": [], "depth": "1"}'
Z = '{"turns": ["1/4"], "depth": "1"}'


def run_captured(*argv: str) -> tuple[int, str]:
    buffer = io.StringIO()
    with redirect_stdout(buffer):
        code = run(list(argv))
    return code, buffer.getvalue().strip()


class TestUi(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.directory.cleanup()

    def write(self, name: str, content: str | list | dict) -> str:
        path = Path(self.directory.name) / name
        path.write_text(content if isinstance(content, str) else json.dumps(content))
        return str(path)

    def test_help(self):
        code, output = run_captured()
        self.assertEqual(code, 0)
        self.assertTrue(output.startswith("usage: arbor"))
        self.assertIn("classify", output)
        self.assertIn("conjunction := unary", output)
        self.assertIn("instance files", output)
        self.assertEqual(run_captured("--help")[1], output)

    def test_eval(self):
        self.assertEqual(run_captured("eval", "C", Z, X, Y), (0, "true"))
        self.assertEqual(run_captured("eval", "perp", X, Y), (0, "true"))
        self.assertEqual(run_captured("eval", "lt", X, Y), (0, "false"))

    def test_eval_errors(self):
        self.assertEqual(run_captured("eval", "C", Z, X)[0], 2)
        self.assertEqual(run_captured("eval", "S", X, Y)[0], 2)
        self.assertEqual(run_captured("eval", "lt", '{"turns": [], "depth": "1/2"}', Y)[0], 2)
        self.assertEqual(run_captured("eval", "lt", "{not json}", Y)[0], 2)
        self.assertEqual(run_captured("eval")[0], 2)

    def test_enumerate(self):
        self.assertEqual(run_captured("enumerate", "3"), (0, "6"))
        self.assertEqual(run_captured("enumerate", "3", "--reduce", "full"), (0, "4"))
        code, output = run_captured("enumerate", "2", "--list", "yes")
        self.assertEqual(code, 0)
        self.assertEqual(len(json.loads(output.split("\n", 1)[1])), 2)
        self.assertEqual(run_captured("enumerate", "3", "--reduce", "tree")[0], 2)
        self.assertEqual(run_captured("enumerate", "3", "--colour", "red")[0], 2)
        self.assertEqual(run_captured("enumerate", "3", "--reduce")[0], 2)

    def test_solve_and_oracle(self):
        unsat = self.write("unsat.txt", "x < y\ny < x\n")
        sat = self.write("sat.txt", "x || y\nC(z, x y)  # z leaves first\n")
        self.assertEqual(run_captured("solve", unsat), (1, "UNSAT"))
        self.assertEqual(run_captured("oracle", unsat), (1, "UNSAT"))
        code, output = run_captured("solve", sat)
        self.assertEqual(code, 0)
        self.assertTrue(output.startswith("SAT"))
        self.assertEqual(set(json.loads(output.split("\n", 1)[1])), {"x", "y", "z"})
        self.assertEqual(run_captured("oracle", sat), (0, "SAT"))

    def test_file_errors(self):
        code, output = run_captured("solve", str(Path(self.directory.name) / "missing.txt"))
        self.assertEqual(code, 2)
        self.assertTrue(output.startswith("error:"))
        self.assertEqual(run_captured("solve", self.write("bad.txt", "x ~ y"))[0], 2)
        self.assertEqual(run_captured("flatten", self.write("object.json", {"turns": []}))[0], 2)

    def test_structures(self):
        cherry = self.write("cherry.json", {"n": 3, "C": [[2, 0, 1]]})
        code, output = run_captured("embed", cherry)
        self.assertEqual(code, 0)
        self.assertEqual(len(json.loads(output)), 3)
        code, output = run_captured("extensions", cherry)
        self.assertEqual(code, 0)
        self.assertTrue(output.startswith("4 convex extensions"))
        wedge = self.write("wedge.json", {"n": 3, "leq": [[1, 1, 1], [0, 1, 0], [0, 0, 1]]})
        self.assertEqual(run_captured("embed", wedge)[0], 2)

    def test_transformations(self):
        nodes = (Y, '{"turns": [], "depth": "3"}', '{"turns": ["3/2"], "depth": "2"}')
        points = self.write("points.json", [json.loads(x) for x in nodes])
        code, output = run_captured("reroot", points, "--pivot", Y)
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(output)["preserves"], {"B": True, "neq": True})
        self.assertEqual(run_captured("reroot", points)[0], 2)
        self.assertEqual(run_captured("flatten", points)[0], 0)
        self.assertEqual(run_captured("project", points)[0], 0)
        antichain = self.write("antichain.json", [json.loads(x) for x in (Z, X, Y)])
        code, output = run_captured("flip", antichain)
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(output)["pair"], [1, 2])
        self.assertEqual(run_captured("flip", points)[0], 2)

    def test_classification_commands(self):
        code, output = run_captured("classify", "--formula", "x != y", "--samples", "5")
        self.assertEqual(code, 0)
        self.assertTrue(output.startswith("x != y: equality-class"))
        code, output = run_captured("chain", "--formula", "Betw", "--samples", "5", "--seed", "2")
        self.assertEqual(code, 0)
        self.assertTrue(output.startswith("Betw-class"))
        code, output = run_captured("core", "--formulas", "x != y", "--samples", "5")
        self.assertTrue(output.startswith("(Q;≠)"))
        self.assertEqual(run_captured("classify")[0], 2)
        self.assertEqual(run_captured("classify", "--formula", "x <")[0], 2)

    def test_behavior_commands(self):
        code, output = run_captured("behaviors")
        self.assertEqual(code, 0)
        self.assertEqual(output.count("survives"), 10)
        code, output = run_captured("checks")
        self.assertEqual(code, 0)
        self.assertTrue(output.endswith("7 of 7 checks passed"))
        code, output = run_captured("axioms", "--samples", "20", "--seed", "0")
        self.assertEqual(code, 0)
        self.assertTrue(output.startswith("axiom suite (samples=20, seed=0): OK"))

    def test_unknown_command(self):
        code, output = run_captured("frobnicate")
        self.assertEqual(code, 2)
        self.assertIn("frobnicate", output)

    def test_context_and_flags(self):
        context = CommandContext()
        self.assertEqual(context.get_exit_code(), 0)
        self.assertEqual(context.get_flag("seed", "0"), "0")
        with self.assertRaises(MissingFlagError):
            context.require_flag("seed")
        args, flags = split_flags(["a", "--seed", "3", "b"])
        self.assertEqual(args, ["a", "b"])
        self.assertEqual(flags, {"seed": "3"})
        with self.assertRaises(TooFewArgumentsError):
            split_flags(["--seed"])
        INTERPRETER.parse_command(context, ["enumerate", "2", "--reduce", "full"])
        self.assertEqual(context.get_flag("reduce"), "full")
