"""Shared numeric policy and result sentinels."""

from dataclasses import dataclass


@dataclass
class NumericPolicy:
    """Global tolerance record used by all validation code.

    construction_tol guards invariants checked when objects are built
    (normalization, hermiticity); derived_tol guards quantities produced
    by arithmetic on valid objects (traces, eigenvalues); null_space_rel
    scales the eigenvalue floor used when restricting to the support of a
    positive-semidefinite matrix.
    """

    construction_tol: float = 1e-12
    derived_tol: float = 1e-10
    null_space_rel: float = 1e-12


#: Mutable module-level policy; edit fields to relax/tighten everywhere at once.
POLICY = NumericPolicy()


class Divergent:
    """Sentinel for quantities that diverge to +infinity.

    Kept distinct from any float so a diverging Fisher-type integral can
    never silently contaminate downstream sums.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "divergent"


DIVERGENT = Divergent()


def is_divergent(x) -> bool:
    return isinstance(x, Divergent)
