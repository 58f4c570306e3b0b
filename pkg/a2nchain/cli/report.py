"""JSON, CSV and plain-text renderings of the pipeline results."""
import csv
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import orjson as json

from a2nchain.bethe import BetheSolution, ProbeValue, RootConfiguration
from a2nchain.bethe.solver import SearchResult
from a2nchain.reps import Decomposition, IrrepLabel, weyl_dimension
from a2nchain.spectrum import SpectrumReport
from a2nchain.types import Algebra, ModelParams

OPTIONS = json.OPT_INDENT_2 | json.OPT_SORT_KEYS | json.OPT_SERIALIZE_NUMPY


def _default(obj: Any) -> Any:
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> bytes:
    return json.dumps(obj, default=_default, option=OPTIONS)


def loads(data: bytes) -> Any:
    return json.loads(data)


def _c(z: complex) -> List[float]:
    return [float(z.real), float(z.imag)]


def params_to_json(p: ModelParams) -> Dict[str, Any]:
    return {"n": p.n, "sites": p.N, "eta": _c(p.eta), "set": p.boundary.value}


def decomposition_to_json(d: Decomposition) -> List[Dict[str, Any]]:
    return [
        {
            "label": list(label.labels),
            "dimension": weyl_dimension(label),
            "multiplicity": c,
        }
        for label, c in d.items()
        if c
    ]


def decomposition_from_json(
    rows: Sequence[Dict[str, Any]], algebra: Algebra, n: int
) -> Decomposition:
    d = Decomposition(algebra, n)
    for row in rows:
        d.add(IrrepLabel(algebra, tuple(row["label"])), int(row["multiplicity"]))
    return d


def solution_to_json(s: BetheSolution) -> Dict[str, Any]:
    return {
        "m": list(s.m),
        "roots": [[_c(u) for u in level] for level in s.roots.levels],
        "residual": s.residual,
        "dynkin": list(s.dynkin.labels),
        "dimension": s.dimension,
        "energy": _c(s.energy),
        "probes": [{"point": _c(pv.point), "value": _c(pv.value)} for pv in s.probes],
        "iterations": s.iterations,
    }


def solution_from_json(doc: Dict[str, Any], algebra: Algebra) -> BetheSolution:
    return BetheSolution(
        roots=RootConfiguration(
            tuple(tuple(complex(*u) for u in level) for level in doc["roots"])
        ),
        residual=float(doc["residual"]),
        dynkin=IrrepLabel(algebra, tuple(doc["dynkin"])),
        dimension=int(doc["dimension"]),
        energy=complex(*doc["energy"]),
        probes=tuple(
            ProbeValue(point=complex(*pv["point"]), value=complex(*pv["value"]))
            for pv in doc["probes"]
        ),
        iterations=int(doc["iterations"]),
    )


def search_to_json(r: SearchResult) -> Dict[str, Any]:
    return {
        "m": list(r.m),
        "dynkin": list(r.dynkin.labels),
        "dimension": r.dimension,
        "expected": r.expected,
        "found": r.found,
        "incomplete": not r.complete,
        "seeds_tried": r.seeds_tried,
        "failures": dict(sorted(r.failures.items())),
        "rejected": r.rejected,
        "solutions": [solution_to_json(s) for s in r.solutions],
    }


def spectrum_to_json(report: SpectrumReport) -> Dict[str, Any]:
    clusters = []
    for c in report.clusters:
        clusters.append(
            {
                "index": c.index,
                "eigenvalue": _c(c.eigenvalue),
                "degeneracy": c.degeneracy,
                "weight_sectors": [
                    {"weight": [str(x) for x in w], "states": k}
                    for w, k in sorted(c.weight_sectors.items())
                ],
                "highest_weights": [
                    {"weight": [str(x) for x in w], "count": k}
                    for w, k in sorted(c.highest_weights.items())
                ],
                "highest_weight_count": c.highest_weight_count,
                "invariant_residual": c.invariant_residual,
                "matched_solutions": list(c.matched),
            }
        )

    def dec(d: Optional[Decomposition]) -> Optional[List[Dict[str, Any]]]:
        return decomposition_to_json(d) if d is not None else None

    return {
        "params": params_to_json(report.params),
        "algebra": report.algebra.value,
        "clusters": clusters,
        "total_degeneracy": report.total_degeneracy(),
        "ambiguities": list(report.ambiguities),
        "decomposition_observed": dec(report.decomposition_observed),
        "decomposition_predicted": dec(report.decomposition_predicted),
        "decomposition_bethe": dec(report.decomposition_bethe),
        "unmatched_clusters": list(report.unmatched_clusters),
        "unmatched_solutions": list(report.unmatched_solutions),
        "failures": list(report.failures),
        "reconciled": report.reconciled,
        "passed": report.passed,
    }


def _columns(rows: List[List[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.rjust(w) for cell, w in zip(r, widths)).rstrip() for r in rows
    )


def decomposition_table(d: Decomposition) -> str:
    rows = [["label", "dimension", "multiplicity"]]
    for label, c in d.items():
        if c:
            rows.append([str(label), str(weyl_dimension(label)), str(c)])
    return _columns(rows)


def _root(u: complex) -> str:
    sign = "+" if u.imag >= 0 else "-"
    return f"{u.real:.6g}{sign}{abs(u.imag):.6g}i"


def _roots(s: BetheSolution) -> str:
    return " | ".join(" ".join(_root(u) for u in level) for level in s.roots.levels)


def solution_table(results: Sequence[SearchResult]) -> str:
    """Rows in the order m..., a..., deg, mult, roots."""
    if not results:
        return ""
    n = len(results[0].m)
    header = (
        [f"m{i + 1}" for i in range(n)]
        + [f"a{i + 1}" for i in range(n)]
        + ["deg", "mult", "found", "roots", "energy"]
    )
    rows = [header]
    for r in results:
        prefix = [str(x) for x in r.m] + [str(a) for a in r.dynkin.labels]
        prefix += [str(r.dimension), str(r.expected), str(r.found)]
        if not r.solutions:
            rows.append(prefix + ["-", "-"])
        for s in r.solutions:
            e = s.energy
            rows.append(prefix + [_roots(s), f"{e.real:.8g}{e.imag:+.3g}i"])
    return _columns(rows)


def write_solution_csv(path: str, results: Sequence[SearchResult]) -> None:
    with open(path, "w", newline="") as file:
        writer = csv.writer(file)
        if not results:
            return
        n = len(results[0].m)
        writer.writerow(
            [f"m{i + 1}" for i in range(n)]
            + [f"a{i + 1}" for i in range(n)]
            + ["deg", "mult", "roots"]
        )
        for r in results:
            prefix = [*r.m, *r.dynkin.labels, r.dimension, r.expected]
            for s in r.solutions:
                writer.writerow(prefix + [_roots(s)])


def status_word(passed: bool) -> str:
    return "pass" if passed else "FAIL"
