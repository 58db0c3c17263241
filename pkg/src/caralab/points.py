"""Points of the bidisk and its distinguished boundary, and directions into it."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import InadmissibleDirectionError

#: allowed deviation of a boundary coordinate from unit modulus
UNIMODULAR_TOL = 1e-12

# quarter turns have exact unit representations; snapping keeps ray
# geometry exact in floating point for the common test points
_QUARTER = {0: 1 + 0j, 1: 1j, 2: -1 + 0j, 3: -1j}


@dataclass(frozen=True)
class BoundaryPoint:
    """Point of the two-torus, stored as a pair of unimodular coordinates."""

    tau1: complex
    tau2: complex

    def __post_init__(self):
        for z in (self.tau1, self.tau2):
            if abs(abs(z) - 1.0) > UNIMODULAR_TOL:
                raise ValueError(f"boundary coordinate {z!r} is not unimodular")

    @classmethod
    def from_angles(cls, turns1: float, turns2: float) -> "BoundaryPoint":
        """Boundary point (e^{2 pi i t1}, e^{2 pi i t2}) with angles in turns."""

        def unit(turns: float) -> complex:
            quarters = 4.0 * (turns % 1.0)
            if quarters == int(quarters):
                return _QUARTER[int(quarters) % 4]
            return cmath.exp(2j * cmath.pi * turns)

        return cls(unit(turns1), unit(turns2))

    def __iter__(self) -> Iterator[complex]:
        yield self.tau1
        yield self.tau2

    def ray_point(self, t: float) -> "DiskPoint":
        """The point (1-t) * tau on the radial ray into the bidisk."""
        return DiskPoint((1.0 - t) * self.tau1, (1.0 - t) * self.tau2)

    def unit_extended(self) -> tuple[np.clongdouble, np.clongdouble]:
        """Coordinates re-projected onto the unit circle in extended precision."""
        out = []
        for z in (self.tau1, self.tau2):
            zx = np.clongdouble(z.real) + 1j * np.clongdouble(z.imag)
            out.append(zx / np.abs(zx))
        return out[0], out[1]


@dataclass(frozen=True)
class DiskPoint:
    """Point of the (closed) bidisk."""

    lam1: complex
    lam2: complex

    def __iter__(self) -> Iterator[complex]:
        yield self.lam1
        yield self.lam2

    @property
    def inf_norm(self) -> float:
        return max(abs(self.lam1), abs(self.lam2))

    def in_open_bidisk(self) -> bool:
        return self.inf_norm < 1.0

    def in_closed_bidisk(self, tol: float = UNIMODULAR_TOL) -> bool:
        return self.inf_norm <= 1.0 + tol


def as_pair(p) -> tuple[complex, complex]:
    """Coerce a 2-point (BoundaryPoint, DiskPoint, tuple, ...) to complex pair."""
    a, b = p
    return complex(a), complex(b)


def is_admissible_direction(tau, delta) -> bool:
    """True when the direction points into the bidisk at tau.

    The rotation-covariant condition Re(conj(tau_i) * delta_i) < 0 in both
    coordinates guarantees tau + t*delta lies in the open bidisk for small
    t > 0.
    """
    t1, t2 = as_pair(tau)
    d1, d2 = as_pair(delta)
    return (t1.conjugate() * d1).real < 0.0 and (t2.conjugate() * d2).real < 0.0


def require_admissible(tau, delta) -> None:
    if not is_admissible_direction(tau, delta):
        raise InadmissibleDirectionError(
            f"direction {tuple(as_pair(delta))!r} does not point into the bidisk at "
            f"{tuple(as_pair(tau))!r}"
        )


def direction_entry_time(tau, delta) -> float:
    """Largest t0 such that tau + t*delta stays in the open bidisk for 0 < t < t0."""
    require_admissible(tau, delta)
    t_max = math.inf
    for tz, dz in zip(as_pair(tau), as_pair(delta)):
        a = (tz.conjugate() * dz).real
        # |tau + t delta|^2 = |tau|^2 + 2 t a + t^2 |delta|^2 < 1
        t_max = min(t_max, -2.0 * a / abs(dz) ** 2)
    return t_max
