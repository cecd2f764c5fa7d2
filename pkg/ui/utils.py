import json
import re
from collections.abc import Callable
from typing import Any

from arbor.globals import NODE_JSON_REGEX, POSITIVE_INTEGER_REGEX, RELATION_NAME_REGEX
from arbor.model import InvalidNodeError, Node
from arbor.strings import Strings
from arbor.utils import PathDict

FLAG_PREFIX = "--"


class ArgumentValidationError(Exception):

    def __init__(self, argument: str, argument_name: str, index: int, error_message: str) -> None:
        if error_message:
            msg = f"'{argument}' is not a valid value for argument '{argument_name}' ({index}): {error_message}"
        else:
            msg = f"'{argument}' is not a valid value for argument '{argument_name}' ({index})"
        super().__init__(msg)


class TooFewArgumentsError(Exception):

    def __init__(self, command: str, required: int, passed: int) -> None:
        self.required = required
        self.passed = passed
        super().__init__(f"command {command} requires {required} arguments, but {passed} were given")


class UnknownFlagError(Exception):

    def __init__(self, flag: str, allowed: list[str]) -> None:
        self.flag = flag
        allowed_string = ", ".join(f"{FLAG_PREFIX}{x}" for x in allowed) or "none"
        super().__init__(f"unknown flag '{flag}', allowed flags: {allowed_string}")


class MissingFlagError(Exception):

    def __init__(self, flag: str) -> None:
        self.flag = flag
        super().__init__(f"flag '{FLAG_PREFIX}{flag}' is required")


class CommandParsingResult:

    def __init__(self, function: Callable, args: list[str] | None):
        self.function = function
        self.args = args

    def execute(self, context: "CommandContext") -> str:
        if self.args:
            return self.function(context, *self.args)
        return self.function(context)


class CommandContext:
    """
        A wrapper around a dictionary that supports getting/settings variables through path strings.
        Holds the parsed flags under 'flags' and the exit code of the command.
        The first argument of all command functions must be the context.
    """

    def __init__(self, dictionary: dict | None = None):
        self.__dictionary: PathDict = PathDict(dictionary) if dictionary else PathDict()
        if not self.__dictionary.has("exit code"):
            self.set("exit code", 0)

    def get(self, path: str, separator: str = ".") -> Any:
        return self.__dictionary.path_get(path, separator=separator)

    def set(self, path: str, value: Any, separator: str = "."):
        self.__dictionary.path_set(path, value, separator=separator)

    def has(self, path: str) -> bool:
        return self.__dictionary.has(path)

    def get_flag(self, name: str, default: str | None = None) -> str | None:
        """ the value given for a flag, default if it was not passed """
        if self.has(f"flags.{name}"):
            return self.get(f"flags.{name}")
        return default

    def require_flag(self, name: str) -> str:
        value = self.get_flag(name)
        if value is None:
            raise MissingFlagError(name)
        return value

    def set_exit_code(self, code: int):
        self.set("exit code", code)

    def get_exit_code(self) -> int:
        return self.get("exit code")

    def __str__(self):
        return str(self.__dictionary)


class RegexWithErrorMessage:
    """ convenience class that stores the regex to check + the error message to give the user if the regex isn't met """

    def __init__(self, arg_name: str, regex: str | None, error_message: str | None):
        self.argument_name = arg_name
        self.regex = regex
        self.error_message = error_message

    def check(self, string_to_check: str) -> bool:
        return re.match(self.regex, string_to_check, re.DOTALL) is not None


def integer_arg(arg_name: str) -> RegexWithErrorMessage:
    return RegexWithErrorMessage(arg_name, POSITIVE_INTEGER_REGEX, Strings.obj_number_error.format(obj=arg_name))


def relation_arg(arg_name: str) -> RegexWithErrorMessage:
    return RegexWithErrorMessage(arg_name, RELATION_NAME_REGEX, Strings.relation_name_error)


def node_arg(arg_name: str) -> RegexWithErrorMessage:
    return RegexWithErrorMessage(arg_name, NODE_JSON_REGEX, Strings.node_json_error)


def file_arg(arg_name: str) -> RegexWithErrorMessage:
    return RegexWithErrorMessage(arg_name, None, None)


def parse_node_argument(argument: str, argument_name: str = "node", index: int = 0) -> Node:
    """ a Node from its JSON text, every failure reported as an argument error """
    try:
        return Node.create_from_json(json.loads(argument))
    except (json.JSONDecodeError, InvalidNodeError) as e:
        raise ArgumentValidationError(argument, argument_name, index, str(e)) from e


def split_flags(tokens: list[str]) -> tuple[list[str], dict[str, str]]:
    """ separates the positional arguments from the '--name value' pairs """
    args: list[str] = []
    flags: dict[str, str] = {}
    index = 0
    while index < len(tokens):
        token = tokens[index]
        if token.startswith(FLAG_PREFIX) and (len(token) > len(FLAG_PREFIX)):
            name = token[len(FLAG_PREFIX):]
            if index + 1 >= len(tokens):
                raise TooFewArgumentsError(token, 1, 0)
            flags[name] = tokens[index + 1]
            index += 2
            continue
        args.append(token)
        index += 1
    return args, flags


class InterpreterFunctionWrapper:  # maybe import as IFW, this name is a tad too long
    """ wrapper around interpreter functions that automatically checks argument & flag validity """

    def __init__(
            self,
            args: list[RegexWithErrorMessage] | None,
            function: Callable[..., str],
            description: str,
            optional_args: int = 0,
            flags: list[RegexWithErrorMessage] | None = None
    ):
        self.required_args = len(args) if args else 0
        self.number_of_args = self.required_args + optional_args
        self.args_container: tuple[RegexWithErrorMessage, ...] | None = tuple(args) if args else None
        self.flags: dict[str, RegexWithErrorMessage] = {x.argument_name: x for x in flags} if flags else {}
        self.function = function
        self.description = description
        if self.number_of_args == 0:
            self.run = self.__call_no_args
        elif self.__are_all_arg_regexes_none():
            self.run = self.__call_with_args_no_check
        else:
            self.run = self.__call_with_args_and_check

    def __are_all_arg_regexes_none(self) -> bool:
        if not self.args_container:
            return True
        for arg in self.args_container:
            if arg.regex is not None:
                return False
        return True

    def generate_help_args_string(self) -> str:
        result: str = ""
        if self.args_container:
            for arg in self.args_container:
                result += f"[{arg.argument_name}] "
        if self.number_of_args > self.required_args:
            result += "... "
        for name in self.flags:
            result += f"[{FLAG_PREFIX}{name} value] "
        return result

    def __check_args(self, args):
        for (index, arg), arg_container in zip(enumerate(args), self.args_container, strict=False):
            if arg_container.regex and (not arg_container.check(arg)):
                raise ArgumentValidationError(arg, arg_container.argument_name, index, arg_container.error_message)

    def store_flags(self, context: CommandContext, flags: dict[str, str]):
        """ validates the flags and stores them as 'flags.<name>' in the context """
        for name, value in flags.items():
            if name not in self.flags:
                raise UnknownFlagError(f"{FLAG_PREFIX}{name}", list(self.flags))
            validator = self.flags[name]
            if validator.regex and (not validator.check(value)):
                raise ArgumentValidationError(value, f"{FLAG_PREFIX}{name}", 0, validator.error_message)
            context.set(f"flags.{name}", value)

    def __call_with_args_and_check(self, context: CommandContext, *args) -> str:
        """ call with args and check args validity """
        args = args[:self.number_of_args]  # clamp the args to the defined value
        self.__check_args(args)
        return self.function(context, *args)

    def __call_with_args_no_check(self, context: CommandContext, *args) -> str:
        """ call with args and DO NOT check args validity """
        args = args[:self.number_of_args]
        return self.function(context, *args)

    def __call_no_args(self, context: CommandContext, *args) -> str:
        """ call no args """
        return self.function(context)

    def __call__(self, context: CommandContext, *args) -> str:
        return self.run(context, *args)
