from dataclasses import dataclass, field
from typing import List, Optional

from a2nchain.types import Algebra, Operator


@dataclass(frozen=True)
class GeneratorSet:
    """Single-site generators on the (2n+1)-dimensional space.

    For C_n, raising[n-1] is E_n^+ = e_{n,n+2} and extra_raising is E_0^+.
    """

    algebra: Algebra
    n: int
    cartan: List[Operator]
    raising: List[Operator]
    lowering: List[Operator]
    extra_raising: Optional[Operator] = None
    extra_lowering: Optional[Operator] = None


@dataclass(frozen=True)
class CoproductSet:
    site_count: int
    algebra: Algebra
    cartan: List[Operator]
    raising: List[Operator]
    lowering: List[Operator]
    extra_raising: Optional[Operator] = field(default=None)
    extra_lowering: Optional[Operator] = field(default=None)

    def generators(self) -> List[Operator]:
        gens = [*self.cartan, *self.raising, *self.lowering]
        if self.extra_raising is not None and self.extra_lowering is not None:
            gens += [self.extra_raising, self.extra_lowering]
        return gens


from a2nchain.qgroup.generators import (  # noqa: E402
    bn_generators,
    cn_generators,
    generators_for,
    ladder,
    ladder_residual,
    root_relation_residual,
    simple_roots,
    u_commutation_residual,
)
from a2nchain.qgroup.coproduct import (  # noqa: E402
    coassociativity_residuals,
    coproduct_two_site,
    ladder_agreement_residual,
    nfold_coproduct,
    relation_report,
)
from a2nchain.qgroup.symmetry import (  # noqa: E402
    highest_weight_count,
    highest_weight_vectors,
    symmetry_residual,
)

__all__ = [
    "GeneratorSet",
    "CoproductSet",
    "bn_generators",
    "cn_generators",
    "generators_for",
    "ladder",
    "ladder_residual",
    "root_relation_residual",
    "simple_roots",
    "u_commutation_residual",
    "coassociativity_residuals",
    "coproduct_two_site",
    "ladder_agreement_residual",
    "nfold_coproduct",
    "relation_report",
    "highest_weight_count",
    "highest_weight_vectors",
    "symmetry_residual",
]
