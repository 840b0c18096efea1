# -*- coding: utf-8 -*-
"""Structured text records: metrics, metadata sidecars and plans.

All of them are YAML documents. Floats are written with their shortest
round-tripping representation so that a file read back gives the same
values bit for bit.

:copyright: 2024 by supercone Authors, see AUTHORS for more details.
:license: MIT, see LICENSE for more details.

"""

import pathlib
from typing import Any, Iterable, List, Mapping, NamedTuple, Union

import yaml

from ..errors import FormatError

PathLike = Union[str, pathlib.Path]


class MetricRecord(NamedTuple):
    name: str
    value: float
    units: str


def write_yaml(path: PathLike, data: Mapping[str, Any]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(dict(data), f, sort_keys=False, default_flow_style=False)


def read_yaml(path: PathLike) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise FormatError("Cannot parse %s: %s" % (path, e)) from None


def write_metrics(path: PathLike, records: Iterable[MetricRecord]) -> None:
    write_yaml(path, {"metric": [dict(r._asdict()) for r in records]})


def read_metrics(path: PathLike) -> List[MetricRecord]:
    data = read_yaml(path)
    try:
        return [
            MetricRecord(str(r["name"]), float(r["value"]), str(r["units"]))
            for r in data["metric"]
        ]
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError("Invalid metrics file %s: %s" % (path, e)) from None
