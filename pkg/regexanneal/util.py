# -*- coding: utf-8 -*-
"""General utility functions.

This file is part of RegexAnneal.

:copyright: 2024 by RegexAnneal Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import os
import platform
import sys
from configparser import ConfigParser
from typing import Dict, List, Optional, Sequence, Union, overload

import numpy as np
from typing_extensions import Literal

from . import logger

#: Locations of the user configuration files, in reading order.
USER_CONFIG_FILES = (
    os.path.join(sys.prefix, "share", "regexanneal", ".regexannealrc"),
    os.path.join(os.path.expanduser("~"), ".regexannealrc"),
)


def read_user_config(extra: Sequence[str] = ()) -> ConfigParser:
    """Read the user configuration files followed by the extra files.

    The configuration files are expected to be stored in one of the following
    location:

        <sys prefix>/share/regexanneal/.regexannealrc
        ~/.regexannealrc

    Example configuration file:

        [anneal]
        pool_capacity = 10
        total_iterations = 1000
        workers = 4

        [run]
        strategy = psaw-i

    Values read later override earlier ones.

    """
    config_parser = ConfigParser(interpolation=None)
    files = config_parser.read(list(USER_CONFIG_FILES))

    if not files:
        logger.debug("No user defined configuration files")
    else:
        logger.debug("User defined configuration files: %s" % files)

    for path in extra:
        with open(path, encoding="utf-8") as f:
            config_parser.read_file(f)
        logger.debug("Read configuration file %s", path)

    return config_parser


def derive_seeds(seed: int, count: int) -> List[int]:
    """Derive independent seeds for sub-tasks from a master seed.

    The derivation only depends on the master seed and on the position of the
    sub-task so results never depend on the order in which tasks complete.

    """
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(child.generate_state(1)[0]) for child in children]


SystemDetails = Dict[str, Union[str, Dict[str, str]]]

#: Sections of the report, each a title and its (label, key) rows.
_REPORT_LAYOUT = (
    ("Machine Details", (("Platform ID", "platform"), ("Processor", "processor"), ("CPUs", "cpus"))),
    (
        "Python",
        (
            ("Implementation", "implementation"),
            ("Executable", "executable"),
            ("Version", "python"),
            ("Compiler", "compiler"),
        ),
    ),
)


def _package_version(name: str) -> str:
    try:
        from importlib.metadata import version

        return version(name)
    except Exception:
        return "n/a"


def get_system_details() -> SystemDetails:
    """Describe the interpreter, the machine and the installed dependencies."""
    from . import __version__

    return {
        "platform": platform.platform(),
        "processor": platform.processor(),
        "cpus": str(os.cpu_count()),
        "implementation": platform.python_implementation(),
        "executable": sys.executable,
        "python": platform.python_version(),
        "compiler": platform.python_compiler(),
        "regexanneal": __version__,
        "dependencies": {"numpy": np.__version__, "prettytable": _package_version("prettytable")},
    }


def system_details_to_str(d: SystemDetails, indent: str = "") -> str:
    """Render the output of `get_system_details` as an indented report."""
    lines: List[str] = []
    for title, rows in _REPORT_LAYOUT:
        lines.append(title + ":")
        lines.extend("   %-16s%s" % (label + ":", d.get(key, "n/a")) for label, key in rows)
        lines.append("")
    lines.append("RegexAnneal Version: %s" % d.get("regexanneal", "n/a"))
    lines.append("")
    lines.append("Dependencies:")
    dependencies = d.get("dependencies", {})
    assert isinstance(dependencies, dict)
    lines.extend("   %-15s %s" % (name + ":", value) for name, value in dependencies.items())
    return "".join(indent + line + "\n" for line in lines)


@overload
def get_debug_info(to_screen: Literal[True] = True) -> None:
    pass


@overload
def get_debug_info(to_screen: Literal[False]) -> str:
    pass


def get_debug_info(to_screen: bool = True) -> Optional[str]:
    """Get the RegexAnneal debug information."""
    out = system_details_to_str(get_system_details())
    if not to_screen:
        return out
    print(out)
    return None
