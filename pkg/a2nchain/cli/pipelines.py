"""The work behind each command, kept apart from flag parsing."""
import logging
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from a2nchain.bethe import enumerate_admissible, expected_multiplicity
from a2nchain.bethe.solver import BetheSolver, SearchResult
from a2nchain.cli.report import params_to_json, spectrum_to_json
from a2nchain.config import Settings
from a2nchain.errors import DegenerateIdentityError
from a2nchain.linalg import frobenius, num_derivative, relative_residual
from a2nchain.model.chain import (
    boundary_term_check,
    chain_operators,
    hamiltonian,
    sklyanin_hamiltonian,
    transfer_matrix,
    transfer_symmetry_residual,
)
from a2nchain.model.k_matrix import (
    boundary_identity_fit,
    bybe_residual,
    dual_bybe_residual,
    v_sandwich_check,
)
from a2nchain.model.r_matrix import property_report, sample_points
from a2nchain.qgroup import (
    coassociativity_residuals,
    generators_for,
    ladder_agreement_residual,
    ladder_residual,
    nfold_coproduct,
    relation_report,
    root_relation_residual,
    symmetry_residual,
    u_commutation_residual,
)
from a2nchain.reps import Decomposition, tensor_power_decompose
from a2nchain.spectrum import SpectrumAnalyzer, SpectrumReport
from a2nchain.spectrum.analyzer import (
    cartan_eigen_check,
    check_prediction,
    cross_commutation_residual,
)
from a2nchain.types import Algebra, BoundarySet, ModelParams, Residual, ResidualReport
from a2nchain.types import collect, residual

logger = logging.getLogger(__name__)

EXACT_TOL = 1e-12
COMMUTATION_TOL = 1e-8
FINITE_DIFFERENCE_TOL = 1e-6
COASSOCIATIVITY_TOL = 1e-10
BOUNDARY_TERM_TOL = 1e-10
# Chain checks assemble t(u), so they use fewer points than the local ones.
MAX_CHAIN_POINTS = 5


def k_matrix_report(
    p: ModelParams, points: Sequence[Tuple[complex, complex]], tol: float
) -> ResidualReport:
    fits: List[float] = []
    for u, _ in points:
        try:
            fits.append(boundary_identity_fit(u, p)[1])
        except DegenerateIdentityError as e:
            logger.debug(f"Skipping boundary identity at u={u}: {e.message()}")
    residuals: List[Residual] = [
        residual("bybe", max(bybe_residual(u, v, p) for u, v in points), tol),
        residual("dual_bybe", max(dual_bybe_residual(u, v, p) for u, v in points), tol),
        residual("boundary_identity", max(fits, default=0.0), tol),
    ]
    if p.boundary == BoundarySet.II:
        residuals.extend(v_sandwich_check(p, tol)["residuals"])
    return collect(residuals)


def chain_report(
    p: ModelParams, points: Sequence[Tuple[complex, complex]], settings: Settings
) -> ResidualReport:
    cap = settings.max_assembly_dim
    H = hamiltonian(p)
    chain_points = points[:MAX_CHAIN_POINTS]

    def t(u: complex) -> np.ndarray:
        return transfer_matrix(u, p, cap=cap)

    transfers = [(t(u), t(v)) for u, v in chain_points]
    ops = chain_operators(p)
    t_prime = num_derivative(t, 0, settings.derivative_step)
    from_transfer = t_prime / ops.c1 + ops.c2 * np.eye(p.dim)

    shift = sklyanin_hamiltonian(p) - H
    offset = np.trace(shift) / p.dim
    identity_shift = frobenius(shift - offset * np.eye(p.dim)) / max(1.0, frobenius(H))

    residuals = [
        residual(
            "transfer_commutativity",
            max(cross_commutation_residual(a, b) for a, b in transfers),
            COMMUTATION_TOL,
        ),
        residual(
            "hamiltonian_transfer_commutation",
            max(cross_commutation_residual(H, a) for a, _ in transfers),
            COMMUTATION_TOL,
        ),
        residual(
            "transfer_symmetry",
            max(transfer_symmetry_residual(u, p) for u, _ in chain_points),
            settings.identity_tol,
        ),
        residual(
            "hamiltonian_from_transfer",
            relative_residual(H, from_transfer),
            FINITE_DIFFERENCE_TOL,
        ),
        residual("sklyanin_identity_shift", identity_shift, settings.identity_tol),
    ]
    if p.boundary == BoundarySet.I:
        off, spread = boundary_term_check(p)
        residuals.append(residual("boundary_term_off_diagonal", off, BOUNDARY_TERM_TOL))
        residuals.append(residual("boundary_term_spread", spread, BOUNDARY_TERM_TOL))
    return collect(residuals)


def qgroup_report(p: ModelParams, settings: Settings) -> ResidualReport:
    tol = settings.identity_tol
    g = generators_for(p, p.algebra)
    residuals: List[Residual] = [
        residual("root_relations", root_relation_residual(g), EXACT_TOL),
    ]
    if p.algebra == Algebra.C:
        residuals.append(residual("ladder", ladder_residual(g), EXACT_TOL))
        residuals.append(
            residual("u_commutation", u_commutation_residual(g), EXACT_TOL)
        )
    residuals.extend(relation_report(g, p, tol)["residuals"])
    for name, value in coassociativity_residuals(g, p).items():
        residuals.append(
            residual(f"coassociativity_{name}", value, COASSOCIATIVITY_TOL)
        )
    if p.algebra == Algebra.C:
        residuals.append(
            residual(
                "ladder_nesting_agreement",
                ladder_agreement_residual(g, p, p.N),
                COASSOCIATIVITY_TOL,
            )
        )
    cop = nfold_coproduct(g, p, p.N, cap=settings.max_eig_dim)
    symmetry = symmetry_residual(cop, hamiltonian(p))
    residuals.append(residual("hamiltonian_symmetry", symmetry, tol))
    return collect(residuals)


def verify_report(
    p: ModelParams, samples: int, seed: int, settings: Settings
) -> Dict[str, Any]:
    points = sample_points(samples, seed)
    suites: Dict[str, ResidualReport] = {
        "r_matrix": property_report(p, points, settings.identity_tol, seed),
        "k_matrix": k_matrix_report(p, points, settings.identity_tol),
        "chain": chain_report(p, points, settings),
        "qgroup": qgroup_report(p, settings),
    }
    passed = all(s["passed"] for s in suites.values())
    for name, suite in suites.items():
        for r in suite["residuals"]:
            if not r["passed"]:
                logger.warning(
                    f"{name}.{r['name']}: residual {r['residual']:.3e} "
                    f"exceeds {r['tolerance']:.1e}"
                )
    return {"params": params_to_json(p), "suites": suites, "passed": passed}


def predicted_decomposition(p: ModelParams, settings: Settings) -> Decomposition:
    return tensor_power_decompose(
        p, p.algebra, cap=settings.max_eig_dim, irrep_cap=settings.max_irrep_dim
    )


def spectrum_pipeline(
    analyzer: SpectrumAnalyzer, p: ModelParams, settings: Settings
) -> SpectrumReport:
    report = analyzer.analyze(p)
    predicted = predicted_decomposition(p, settings)
    check_prediction(report, predicted)
    return report


def bethe_pipeline(
    solver: BetheSolver,
    p: ModelParams,
    ms: Sequence[Sequence[int]],
    starts: int,
    seed: int,
    settings: Settings,
) -> List[SearchResult]:
    predicted = predicted_decomposition(p, settings)
    return [
        solver.completeness_search(
            m,
            p,
            starts,
            seed=seed,
            expected=expected_multiplicity(m, p, p.algebra, decomposition=predicted),
        )
        for m in ms
    ]


def completeness_cell(
    solver: BetheSolver,
    analyzer: SpectrumAnalyzer,
    p: ModelParams,
    starts: int,
    seed: int,
    settings: Settings,
) -> Dict[str, Any]:
    """Solve every admissible sector, reconcile with the spectrum and grade the cell.

    A cell is "complete" when everything is accounted for, "incomplete" when
    the only defect is a search shortfall, and "fail" otherwise.
    """
    spectrum = spectrum_pipeline(analyzer, p, settings)
    predicted = spectrum.decomposition_predicted
    assert predicted is not None
    accept = analyzer.solution_validator(spectrum)

    results = [
        solver.completeness_search(
            m,
            p,
            starts,
            seed=seed,
            expected=expected_multiplicity(m, p, p.algebra, decomposition=predicted),
            validator=accept,
        )
        for m in enumerate_admissible(p, p.algebra)
    ]
    solutions = [s for r in results for s in r.solutions]
    analyzer.reconcile(spectrum, solutions, predicted)
    cartan = cartan_eigen_check(spectrum)

    hard = (
        bool(spectrum.failures)
        or bool(spectrum.unmatched_solutions)
        or not all(c["passed"] for c in cartan)
        or any(r.found > r.expected for r in results)
    )
    shortfall = any(not r.complete for r in results)
    if hard:
        status = "fail"
    elif shortfall:
        status = "incomplete"
    else:
        status = "complete" if spectrum.passed else "fail"

    dimension_sum = predicted.total_dimension()
    logger.info(f"Completeness cell {p}: {status}")
    return {
        "params": params_to_json(p),
        "status": status,
        "dimension_sum": {
            "value": dimension_sum,
            "expected": p.dim,
            "passed": dimension_sum == p.dim,
        },
        "sectors": [
            {
                "m": list(r.m),
                "dynkin": list(r.dynkin.labels),
                "expected": r.expected,
                "found": r.found,
                "seeds_tried": r.seeds_tried,
            }
            for r in results
        ],
        "cartan_checks": cartan,
        "spectrum": spectrum_to_json(spectrum),
    }
