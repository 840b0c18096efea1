# -*- coding: utf-8 -*-
"""Common code.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import hashlib
import logging
import pathlib
from collections import OrderedDict
from typing import Dict, Optional, Union

logger = logging.getLogger("supercone")
logger.addHandler(logging.NullHandler())

LOGGER = logging.LoggerAdapter(logger, {"package": "supercone"})  # type: ignore

#: Format used when logging to screen.
LOG_FORMAT = "%(asctime)s %(levelname)-8s %(name)s %(message)s"


_screen_handler: Optional[logging.Handler] = None


def log_to_screen(level: int = logging.DEBUG) -> None:
    """Log supercone messages to the standard error stream.

    Calling it again only changes the level.

    """
    global _screen_handler
    if _screen_handler is None:
        _screen_handler = logging.StreamHandler()
        _screen_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(_screen_handler)
    _screen_handler.setLevel(level)
    logger.setLevel(level)


def sha256_file(path: Union[str, pathlib.Path], chunk: int = 1 << 20) -> str:
    """Hex digest of the content of a file."""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(chunk), b""):
            digest.update(block)
    return digest.hexdigest()


def get_debug_info() -> Dict[str, str]:
    """Versions of supercone and of the numerical stack it runs on."""
    import numba
    import numpy
    import scipy

    from . import __version__

    d: Dict[str, str] = OrderedDict()
    d["supercone"] = "%s" % __version__
    d["numpy"] = numpy.__version__
    d["scipy"] = scipy.__version__
    d["numba"] = numba.__version__
    d["threads"] = "%d" % numba.get_num_threads()
    return d
