class Strings:
    """
    class that contains all the interface-related strings printed by the command line.
    """

    # verdicts
    sat = "SAT"
    unsat = "UNSAT"
    true = "true"
    false = "false"

    # argument validation
    obj_number_error = "{obj} must be a non-negative integer"
    relation_name_error = "relation must be one of eq, neq, leq, lt, gt, geq, perp, B, C, R, D"
    reduce_mode_error = "reduce mode must be 'poset' or 'full'"
    yes_no_error = "answer with 'yes' or 'no'"
    node_json_error = "a node is a JSON object like '{\"turns\": [\"1/2\"], \"depth\": \"1\"}'"
    wrong_arity = "relation {relation} takes {arity} nodes, {passed} were given"
    expected_node_list = "file {path} must contain a JSON list of nodes"

    # command output
    command_not_found = "command '{command}' invalid, did you mean '{suggestion}'? Type 'help' for a list of commands."
    help_header = "usage: arbor <command> [arguments] [--flag value]\n\ncommands:\n\n"
    help_grammar = (
        "\nformulas (--formula, --formulas separated by ';'):\n"
        "  formula     := conjunction ('|' conjunction)*\n"
        "  conjunction := unary ('&' unary)*\n"
        "  unary       := '!' unary | '(' formula ')' | atom\n"
        "  atom        := 'C' '(' var [','] var [','] var ')' | var op var   op in < <= > >= = != ||\n"
        "  or one of the named formulas B, R, D, Betw, Cyc, Sep\n"
        "\ninstance files (solve, oracle), one atom per line, '#' starts a comment:\n"
        "  atom        := var op var | B(x, y, z) | C(z, x y) | R(x, y, z) | D(x, y, u, v)   op in < <= > >= = != ||\n"
    )
    extensions_count = "{count} convex extensions"
    structures_count = "{count}"
    checks_summary = "{passed} of {total} checks passed"
    error = "error: {message}"
