import json
import logging
import re
from abc import ABC
from pathlib import Path
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from typing import Self

log = logging.getLogger(__name__)

ROOT_DIRECTORY = Path(__file__).resolve().parent.parent

RATIONAL_REGEX = re.compile(r"^-?\d+(?:/[1-9]\d*)?$")
POSITIVE_INTEGER_REGEX = r"^[\d]+$"
RELATION_NAME_REGEX = r"^(?:eq|neq|leq|lt|gt|geq|perp|B|C|R|D)$"
REDUCE_MODE_REGEX = r"^(?:poset|full)$"
YES_NO_REGEX = r"^(?:yes|no|y|n)$"
NODE_JSON_REGEX = r"^\s*\{.*\}\s*$"


class __GenericGlobalSettings(ABC):
    """read only singleton that holds global variables"""

    _instance = None
    FILENAME: Path

    def __init__(self) -> None:
        raise RuntimeError("This class is a singleton, call get() instead.")

    @classmethod
    def __instance(cls) -> "Self":
        if cls._instance is None:
            log.info(f"Loading {cls.__name__} from {cls.FILENAME}")
            # deferred import, utils reads the regexes above
            from arbor.utils import PathDict

            cls._instance = cls.__new__(cls)
            with open(cls.FILENAME) as file:
                cls._instance.dictionary = PathDict(json.load(file))
        return cls._instance

    @classmethod
    def get(cls, path: str, separator: str = ".", default: Any = None) -> Any:
        try:
            return cls.__instance().dictionary.path_get(path, separator)
        except KeyError as e:
            if default is not None:
                return default
            raise e


class GlobalSettings(__GenericGlobalSettings):
    """Bounds, sample sizes & seeds used by every module when the caller doesn't override them"""

    FILENAME = ROOT_DIRECTORY / "settings.json"
