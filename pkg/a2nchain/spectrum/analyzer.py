"""Exact diagonalization of the chain, blocked by weight sector, and
reconciliation of the resulting clusters against Bethe solutions."""
import logging
from collections import defaultdict
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from overrides import override
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from typing_extensions import TypedDict

from a2nchain.bethe import BetheSolution, cartan_weights
from a2nchain.config import Component, Settings, System
from a2nchain.errors import (
    DimensionMismatchError,
    IdentityFailureError,
    InadmissibleConfigurationError,
    ResourceCapExceededError,
)
from a2nchain.linalg import commutator, eig, frobenius
from a2nchain.model.chain import hamiltonian, transfer_matrix
from a2nchain.qgroup import (
    CoproductSet,
    generators_for,
    highest_weight_vectors,
    nfold_coproduct,
)
from a2nchain.reps import Decomposition, Weight, weight_to_label, weyl_dimension
from a2nchain.spectrum import Ambiguity, Cluster, SpectrumReport
from a2nchain.types import Algebra, ModelParams, Operator
from a2nchain.utils.lru_cache import MemoCache

logger = logging.getLogger(__name__)

AMBIGUITY_FACTOR = 10.0


class CartanCheck(TypedDict):
    cluster: int
    m: List[int]
    expected: List[str]
    observed: List[List[str]]
    passed: bool


def _weight_key(values: Sequence[float]) -> Weight:
    return tuple(Fraction(int(round(2 * x)), 2) for x in values)


def _fmt(w: Weight) -> List[str]:
    return [str(x) for x in w]


def cross_commutation_residual(H: Operator, t: Operator) -> float:
    """||[H, t]|| / (||H|| ||t||)."""
    if H.shape != t.shape:
        raise DimensionMismatchError(f"cannot commute {H.shape} with {t.shape}")
    scale = frobenius(H) * frobenius(t)
    return frobenius(commutator(H, t)) / scale if scale else 0.0


def observed_decomposition(
    report: SpectrumReport,
    cop: CoproductSet,
    algebra: Algebra,
    rel_tol: float = 1e-7,
) -> Decomposition:
    """Irreducible content read off the spectrum alone.

    Each weight sector of a cluster contributes one irrep per vector in the
    joint kernel of the raising coproducts.
    """
    decomposition = Decomposition(algebra, report.params.n)
    for cluster in report.clusters:
        cluster.highest_weights = {}
        for w in sorted(cluster.sector_vectors):
            count = int(
                highest_weight_vectors(cop, cluster.sector_vectors[w], rel_tol).shape[1]
            )
            if count == 0:
                continue
            cluster.highest_weights[w] = count
            try:
                label = weight_to_label(w, algebra)
            except InadmissibleConfigurationError:
                report.failures.append(
                    f"cluster {cluster.index}: highest-weight vector of "
                    f"non-dominant weight {_fmt(w)}"
                )
                continue
            decomposition.add(label, count)
    return decomposition


def check_prediction(report: SpectrumReport, predicted: Decomposition) -> bool:
    """Record predicted on the report; a mismatch with the observed content is
    added to failures once."""
    report.decomposition_predicted = predicted
    observed = report.decomposition_observed
    if observed is None or observed == predicted:
        return True
    failure = f"spectrum shows {observed}, decomposition predicts {predicted}"
    if failure not in report.failures:
        report.failures.append(failure)
    return False


def cartan_eigen_check(report: SpectrumReport) -> List[CartanCheck]:
    """Every matched solution's Cartan weights must be the weight of a
    highest-weight vector in its cluster."""
    if not report.reconciled:
        raise ValueError("cartan_eigen_check needs a reconciled report")
    checks: List[CartanCheck] = []
    for cluster in report.clusters:
        for i in cluster.matched:
            solution = report.solutions[i]
            expected = cartan_weights(solution.m, report.params)
            checks.append(
                {
                    "cluster": cluster.index,
                    "m": list(solution.m),
                    "expected": _fmt(expected),
                    "observed": [_fmt(w) for w in sorted(cluster.highest_weights)],
                    "passed": expected in cluster.highest_weights,
                }
            )
    return checks


class SpectrumAnalyzer(Component):
    _settings: Settings
    _transfers: MemoCache[Tuple[ModelParams, complex], Operator]

    def __init__(self, system: System):
        super().__init__(system)
        self._settings = system.settings
        self._transfers = MemoCache(8)

    @override
    def reset_state(self) -> None:
        super().reset_state()
        self._transfers.clear()

    def coproducts(
        self, p: ModelParams, algebra: Optional[Algebra] = None
    ) -> CoproductSet:
        algebra = algebra or p.algebra
        return nfold_coproduct(
            generators_for(p, algebra), p, p.N, cap=self._settings.max_eig_dim
        )

    def transfer_at(self, p: ModelParams, u: complex) -> Operator:
        return self._transfers.get_or_compute(
            (p, complex(u)),
            lambda: transfer_matrix(u, p, cap=self._settings.max_assembly_dim),
        )

    def analyze(self, p: ModelParams) -> SpectrumReport:
        return self.sector_diagonalize(hamiltonian(p), p)

    def sector_diagonalize(
        self, H: Operator, p: ModelParams, algebra: Optional[Algebra] = None
    ) -> SpectrumReport:
        s = self._settings
        algebra = algebra or p.algebra
        if H.shape != (p.dim, p.dim):
            raise DimensionMismatchError(
                f"Hamiltonian has shape {H.shape}, chain needs {(p.dim, p.dim)}"
            )
        if p.dim > s.max_eig_dim:
            raise ResourceCapExceededError(
                f"diagonalization of dimension {p.dim} exceeds cap {s.max_eig_dim}"
            )

        cop = self.coproducts(p, algebra)
        worst = max(cross_commutation_residual(H, X) for X in cop.cartan)
        if worst > s.identity_tol:
            raise IdentityFailureError(
                f"H does not commute with the Cartan coproducts (residual {worst:.3e})"
            )

        diagonals = np.array([np.diag(X).real for X in cop.cartan])
        sectors: Dict[Weight, List[int]] = defaultdict(list)
        for a in range(p.dim):
            sectors[_weight_key(diagonals[:, a])].append(a)

        values: List[complex] = []
        owners: List[Weight] = []
        vectors: List[np.ndarray] = []
        for w in sorted(sectors):
            idx = sectors[w]
            vals, vecs = eig(H[np.ix_(idx, idx)], cap=s.max_eig_dim)
            for k in range(len(vals)):
                full = np.zeros(p.dim, dtype=np.complex128)
                full[idx] = vecs[:, k]
                values.append(complex(vals[k]))
                owners.append(w)
                vectors.append(full)
        logger.debug(f"Diagonalized {len(sectors)} weight sectors of {p}")

        clusters = self._cluster(np.array(values), owners, vectors, H)
        report = SpectrumReport(params=p, algebra=algebra, clusters=clusters)
        report.ambiguities = self._ambiguities(clusters)
        for c in clusters:
            if c.invariant_residual > s.invariant_subspace_tol:
                report.failures.append(
                    f"cluster {c.index}: invariant-subspace residual "
                    f"{c.invariant_residual:.3e}"
                )
        report.decomposition_observed = observed_decomposition(
            report, cop, algebra, s.kernel_rel_tol
        )
        for c in clusters:
            spanned = sum(
                count * weyl_dimension(weight_to_label(w, algebra))
                for w, count in c.highest_weights.items()
                if _dominant(w, algebra)
            )
            if spanned != c.degeneracy:
                report.failures.append(
                    f"cluster {c.index}: degeneracy {c.degeneracy} but its "
                    f"highest-weight vectors span {spanned} states"
                )
        if report.total_degeneracy() != p.dim:
            report.failures.append(
                f"degeneracies sum to {report.total_degeneracy()}, expected {p.dim}"
            )
        logger.info(
            f"{p}: {len(clusters)} clusters, observed {report.decomposition_observed}"
        )
        return report

    def _cluster(
        self,
        values: np.ndarray,
        owners: List[Weight],
        vectors: List[np.ndarray],
        H: Operator,
    ) -> List[Cluster]:
        tol = self._settings.cluster_tol
        scale = np.maximum(1.0, np.maximum.outer(np.abs(values), np.abs(values)))
        close = np.abs(values[:, None] - values[None, :]) < tol * scale
        count, labels = connected_components(csr_matrix(close), directed=False)

        groups: List[List[int]] = [[] for _ in range(count)]
        for i, label in enumerate(labels):
            groups[label].append(i)
        groups.sort(
            key=lambda g: (
                round(float(np.mean(values[g]).real), 9),
                round(float(np.mean(values[g]).imag), 9),
            )
        )

        h_scale = max(1.0, frobenius(H))
        clusters = []
        for index, members in enumerate(groups):
            by_sector: Dict[Weight, List[np.ndarray]] = defaultdict(list)
            for i in members:
                by_sector[owners[i]].append(vectors[i])
            sector_vectors = {w: np.column_stack(v) for w, v in by_sector.items()}
            V = np.column_stack([vectors[i] for i in members])
            HV = H @ V
            R = HV - V @ (np.linalg.pinv(V) @ HV)
            clusters.append(
                Cluster(
                    index=index,
                    eigenvalue=complex(np.mean(values[members])),
                    degeneracy=len(members),
                    weight_sectors={w: len(v) for w, v in sorted(by_sector.items())},
                    invariant_residual=frobenius(R) / h_scale,
                    sector_vectors=sector_vectors,
                )
            )
        return clusters

    def _ambiguities(self, clusters: List[Cluster]) -> List[Ambiguity]:
        limit = AMBIGUITY_FACTOR * self._settings.cluster_tol
        out: List[Ambiguity] = []
        for i, a in enumerate(clusters):
            for b in clusters[i + 1 :]:
                gap = abs(a.eigenvalue - b.eigenvalue)
                if gap < limit * max(1.0, abs(a.eigenvalue), abs(b.eigenvalue)):
                    out.append({"first": a.index, "second": b.index, "gap": gap})
                    logger.warning(
                        f"Clusters {a.index} and {b.index} are only {gap:.3e} apart"
                    )
        return out

    def _transfer_values(
        self, report: SpectrumReport, cluster: Cluster, u: complex
    ) -> np.ndarray:
        """Eigenvalues of t(u) restricted to the cluster's eigenspace."""
        u = complex(u)
        if u not in cluster.transfer_values:
            t = self.transfer_at(report.params, u)
            V = cluster.vectors()
            cluster.transfer_values[u] = scipy.linalg.eigvals(
                np.linalg.pinv(V) @ (t @ V)
            )
        return cluster.transfer_values[u]

    def _mismatch(
        self, report: SpectrumReport, cluster: Cluster, solution: BetheSolution
    ) -> float:
        worst = 0.0
        for probe in solution.probes:
            tv = self._transfer_values(report, cluster, probe.point)
            err = float(np.min(np.abs(tv - probe.value))) / max(abs(probe.value), 1e-12)
            worst = max(worst, err)
        return worst

    def best_cluster(
        self, report: SpectrumReport, solution: BetheSolution
    ) -> Tuple[Optional[Cluster], float]:
        best: Optional[Cluster] = None
        best_err = float("inf")
        for cluster in report.clusters:
            err = self._mismatch(report, cluster, solution)
            if err < best_err:
                best, best_err = cluster, err
        return best, best_err

    def solution_validator(
        self, report: SpectrumReport
    ) -> Callable[[BetheSolution], bool]:
        """Accepts a solution only if its eigenvalue appears in the spectrum."""

        def accept(solution: BetheSolution) -> bool:
            _, err = self.best_cluster(report, solution)
            return err < self._settings.match_tol

        return accept

    def reconcile(
        self,
        report: SpectrumReport,
        solutions: Sequence[BetheSolution],
        predicted: Decomposition,
    ) -> SpectrumReport:
        s = self._settings
        report.solutions = list(solutions)
        report.unmatched_clusters = []
        report.unmatched_solutions = []
        for cluster in report.clusters:
            cluster.matched = []

        for i, solution in enumerate(report.solutions):
            cluster, err = self.best_cluster(report, solution)
            if cluster is None or err >= s.match_tol:
                report.unmatched_solutions.append(i)
                logger.warning(
                    f"Solution m={solution.m} matches no cluster (relative error {err:.3e})"
                )
                continue
            cluster.matched.append(i)

        for cluster in report.clusters:
            if not cluster.matched:
                report.unmatched_clusters.append(cluster.index)
                continue
            matched = [report.solutions[i] for i in cluster.matched]
            spanned = sum(sol.dimension for sol in matched)
            if spanned != cluster.degeneracy:
                report.failures.append(
                    f"cluster {cluster.index}: degeneracy {cluster.degeneracy}, "
                    f"matched solutions have dimension {spanned}"
                )
            for sol in matched:
                gap = abs(sol.energy - cluster.eigenvalue)
                if gap >= s.match_tol * max(1.0, abs(cluster.eigenvalue)):
                    report.failures.append(
                        f"cluster {cluster.index}: Bethe energy of m={sol.m} "
                        f"is off by {gap:.3e}"
                    )
            if cluster.highest_weight_count != len(matched):
                report.failures.append(
                    f"cluster {cluster.index}: {cluster.highest_weight_count} "
                    f"highest-weight vectors for {len(matched)} solutions"
                )

        from_bethe = Decomposition(report.algebra, report.params.n)
        for sol in report.solutions:
            from_bethe.add(sol.dynkin)
        report.decomposition_bethe = from_bethe
        if from_bethe != predicted:
            logger.warning(
                f"Bethe solutions give {from_bethe}, decomposition predicts {predicted}"
            )
        check_prediction(report, predicted)
        report.reconciled = True

        if report.passed:
            logger.info(
                f"{report.params}: all {len(report.clusters)} clusters reconciled"
            )
        else:
            logger.warning(
                f"{report.params}: {len(report.unmatched_clusters)} unmatched clusters, "
                f"{len(report.unmatched_solutions)} unmatched solutions, "
                f"{len(report.failures)} failures"
            )
        return report


def _dominant(w: Weight, algebra: Algebra) -> bool:
    try:
        weight_to_label(w, algebra)
    except InadmissibleConfigurationError:
        return False
    return True
