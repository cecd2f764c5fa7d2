import logging
from functools import cache

from arbor.strings import Strings
from ui.utils import (
    ArgumentValidationError,
    CommandContext,
    MissingFlagError,
    TooFewArgumentsError,
    UnknownFlagError,
    split_flags,
)
from ui.utils import CommandParsingResult as CPS
from ui.utils import InterpreterFunctionWrapper as IFW

log = logging.getLogger(__name__)

ERROR_EXIT_CODE = 2


def command_not_found_error_function(context: CommandContext, command: str, suggestion: str) -> str:
    context.set_exit_code(ERROR_EXIT_CODE)
    return Strings.command_not_found.format(command=command, suggestion=suggestion)


def _help_dfs(dictionary: dict[str, dict | IFW], previous_command: str, formatting: str) -> str:
    result_string: str = ""
    for key, value in dictionary.items():
        command = f"{previous_command}{key} "
        if isinstance(value, dict):
            result_string += _help_dfs(value, command, formatting)
        else:
            result_string += formatting.format(c=command, a=value.generate_help_args_string(), d=value.description)
    return result_string


class CLIInterpreter:
    """ generic command line interpreter that can be used with any commands dictionary """

    def __init__(self, commands_dict: dict[str, dict | IFW], help_formatting: str = "  {c}{a}\n      {d}\n"):
        self.commands_dict = commands_dict
        self.help_formatting = help_formatting
        # automatically add the help command
        self.commands_dict["help"] = IFW(None, self.help_function, "Shows and describes all commands")

    @cache
    def __help(self, formatting: str) -> str:
        """ does the dfs & caches the result for later use """
        return Strings.help_header + _help_dfs(self.commands_dict, "", formatting) + Strings.help_grammar

    def help_function(self, context: CommandContext) -> str:
        return self.__help(self.help_formatting)

    def parse_command(self, context: CommandContext, tokens: list[str]) -> CPS:
        """ walks the commands dictionary with the leading tokens, stores the flags and returns what to execute """
        if (not tokens) or (tokens[0] == "--help"):
            tokens = ["help"] + tokens[1:]
        parser = self.commands_dict
        full_command: str = ""
        for index, command_token in enumerate(tokens):
            ctlw = command_token.lower()  # ctlw = command token lower
            if ctlw not in parser:
                break
            if isinstance(parser[ctlw], IFW):
                ifw: IFW = parser[ctlw]
                args, flags = split_flags(tokens[index + 1:])
                if ifw.required_args > len(args):
                    raise TooFewArgumentsError(full_command + command_token, ifw.required_args, len(args))
                ifw.store_flags(context, flags)
                return CPS(ifw, args)
            full_command = f"{full_command}{command_token} "
            parser = parser[ctlw]
        return CPS(command_not_found_error_function, [" ".join(tokens), f"{full_command}{list(parser.keys())[0]}"])

    def execute(self, context: CommandContext, tokens: list[str]) -> str:
        """ parses and runs the given tokens and returns the output, interpreter errors become exit code 2 """
        try:
            parsing_result = self.parse_command(context, tokens)
            return parsing_result.execute(context)
        except (ArgumentValidationError, TooFewArgumentsError, UnknownFlagError, MissingFlagError) as e:
            context.set_exit_code(ERROR_EXIT_CODE)
            return str(e)
