import cmath

import numpy as np
import pytest

from caralab import (
    BoundaryPoint,
    Colligation,
    DiskPoint,
    GeneralizedRealization,
    OperatorPencil,
    validate_colligation,
    validate_positive_contraction,
)

TAU_11 = BoundaryPoint(1 + 0j, 1 + 0j)

#: boundary points used across tests: exact lattice points and irrational angles
TAUS = (
    TAU_11,
    BoundaryPoint(1 + 0j, -1 + 0j),
    BoundaryPoint(cmath.exp(1j * cmath.pi / 3), cmath.exp(-1j * cmath.pi / 5)),
)


def disk_point(rng: np.random.Generator) -> DiskPoint:
    r = np.sqrt(rng.uniform(0.0, 1.0, size=2))
    th = rng.uniform(0.0, 2.0 * np.pi, size=2)
    z = r * np.exp(1j * th)
    return DiskPoint(complex(z[0]), complex(z[1]))


def scalar_model(y: float = 0.5, tau: BoundaryPoint = TAU_11, block=None) -> GeneralizedRealization:
    """One-dimensional realization over Y = [[y]]; defaults to the swap colligation.

    ``block`` may be a raw matrix (validated) or a Colligation instance
    (taken as-is, for negative controls).
    """
    contraction = validate_positive_contraction([[y]])
    pencil = OperatorPencil(contraction, tau)
    if block is None:
        block = [[0, 1], [1, 0]]
    col = block if isinstance(block, Colligation) else validate_colligation(block)
    return GeneralizedRealization(pencil, col)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
