import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from arbor.globals import RATIONAL_REGEX


class RationalFormatError(Exception):

    def __init__(self, text: str) -> None:
        super().__init__(f"'{text}' is not a rational, expected 'p/q' or 'n'")


def read_text_file(path: str) -> str:
    return Path(path).read_text()


def read_json_file(path: str) -> Any:
    with open(path) as f:
        return json.load(f)


def parse_rational(text: str | int) -> Fraction:
    """ parses a reduced or unreduced 'p/q' string (or an integer) into an exact rational """
    if isinstance(text, int):
        return Fraction(text)
    if not RATIONAL_REGEX.match(text.strip()):
        raise RationalFormatError(text)
    return Fraction(text.strip())


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class PathDict:
    """A dictionary that can only set & get variables using string paths"""

    def __init__(self, dictionary: dict | None = None) -> None:
        self.__dictionary = dictionary or {}

    def path_get(self, path: str, separator: str = ".") -> Any:
        keys = path.split(separator)
        rv = self.__dictionary
        for key in keys:
            if (not isinstance(rv, dict)) or (key not in rv):
                raise KeyError(f"Could not find key '{key}' of path '{path}'")
            rv = rv[key]
        return rv

    def path_set(self, path: str, value: Any, separator: str = ".") -> None:
        keys = path.split(separator)
        last_key = keys[-1]
        keys = keys[:-1]
        container = self.__dictionary
        for key in keys:
            if key not in container:
                container[key] = {}
            container = container[key]
        container[last_key] = value

    def has(self, path: str, separator: str = ".") -> bool:
        try:
            self.path_get(path, separator)
            return True
        except KeyError:
            return False

    def __str__(self) -> str:
        return str(self.__dictionary)
