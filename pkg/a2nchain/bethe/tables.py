"""Published Bethe-root tables, shipped as package data."""
import logging
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, List, Optional, Tuple

import yaml
from importlib_resources import files

from a2nchain.bethe import RootConfiguration
from a2nchain.errors import InvalidConfigurationError
from a2nchain.types import Algebra, BoundarySet, ModelParams

logger = logging.getLogger(__name__)

_NUMBER = r"[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?"
_PAIR = re.compile(rf"^({_NUMBER})\s*±\s*({_NUMBER})\s*i$")
_PI_LINE = re.compile(rf"^({_NUMBER})\s*\+\s*iπ$")
_IMAG = re.compile(rf"^({_NUMBER})\s*i$")
_REAL = re.compile(rf"^({_NUMBER})$")


def parse_roots(token: str) -> List[complex]:
    """One printed root token to one root, or two for a conjugate pair."""
    s = token.strip()
    if match := _PAIR.match(s):
        x, y = float(match.group(1)), float(match.group(2))
        return [complex(x, y), complex(x, -y)]
    if match := _PI_LINE.match(s):
        return [complex(float(match.group(1)), math.pi)]
    if match := _IMAG.match(s):
        return [complex(0.0, float(match.group(1)))]
    if match := _REAL.match(s):
        return [complex(float(match.group(1)), 0.0)]
    raise InvalidConfigurationError(f"cannot parse root token {token!r}")


@dataclass(frozen=True)
class TableRow:
    m: Tuple[int, ...]
    label: Tuple[int, ...]
    deg: int
    mult: int
    # None where no solution was printed
    solutions: Tuple[Optional[RootConfiguration], ...]

    def known(self) -> List[RootConfiguration]:
        return [s for s in self.solutions if s is not None]


@dataclass(frozen=True)
class SolutionTable:
    number: int
    algebra: Algebra
    boundary: BoundarySet
    n: int
    sites: int
    eta: complex
    rows: Tuple[TableRow, ...]

    def params(self) -> ModelParams:
        return ModelParams(n=self.n, N=self.sites, eta=self.eta, boundary=self.boundary)

    def row(self, m: Tuple[int, ...]) -> Optional[TableRow]:
        for row in self.rows:
            if row.m == tuple(m):
                return row
        return None


def _solution(raw: Optional[List[List[str]]], n: int) -> Optional[RootConfiguration]:
    if raw is None:
        return None
    if len(raw) != n:
        raise InvalidConfigurationError(f"solution {raw} does not have {n} levels")
    levels = []
    for level in raw:
        roots: List[complex] = []
        for token in level:
            roots.extend(parse_roots(str(token)))
        levels.append(tuple(roots))
    return RootConfiguration(tuple(levels))


def _table(raw: Dict[str, Any], eta: complex) -> SolutionTable:
    n = int(raw["n"])
    rows = []
    for r in raw["rows"]:
        solutions = tuple(_solution(s, n) for s in r["solutions"])
        m = tuple(int(x) for x in r["m"])
        for s in solutions:
            if s is not None and s.m != m:
                raise InvalidConfigurationError(
                    f"table {raw['table']}: solution with cardinalities {s.m} "
                    f"listed under m={m}"
                )
        rows.append(
            TableRow(
                m=m,
                label=tuple(int(a) for a in r["label"]),
                deg=int(r["deg"]),
                mult=int(r["mult"]),
                solutions=solutions,
            )
        )
    return SolutionTable(
        number=int(raw["table"]),
        algebra=Algebra(raw["algebra"]),
        boundary=BoundarySet(raw["boundary"]),
        n=n,
        sites=int(raw["sites"]),
        eta=eta,
        rows=tuple(rows),
    )


@lru_cache(maxsize=None)
def load_tables() -> Tuple[SolutionTable, ...]:
    text = files("a2nchain.data").joinpath("tables.yml").read_text(encoding="utf-8")
    doc = yaml.safe_load(text)
    eta = complex(*doc["eta"])
    tables = tuple(_table(t, eta) for t in doc["tables"])
    logger.debug(f"Loaded {len(tables)} solution tables")
    return tables


def find_table(p: ModelParams) -> Optional[SolutionTable]:
    """The published table for these parameters, if there is one."""
    for table in load_tables():
        if (
            table.n == p.n
            and table.sites == p.N
            and table.boundary == p.boundary
            and abs(table.eta - p.eta) < 1e-12
        ):
            return table
    return None


def table_seeds(p: ModelParams, m: Tuple[int, ...]) -> List[RootConfiguration]:
    table = find_table(p)
    if table is None:
        return []
    row = table.row(m)
    return row.known() if row is not None else []
