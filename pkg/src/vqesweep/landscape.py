"""Exact per-parameter energy landscapes and coordinate-descent sweeps.

For a generator with G^3 = G the energy along one parameter is exactly
E(theta) = A + B cos(theta) + C sin(theta) + D cos(2theta) + F sin(2theta),
so five samples on a uniform grid determine it, and four suffice whenever
the energy at the first grid point is already known. The global minimum
follows in closed form from the quartic in tan(theta/2), backstopped by a
dense verification grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .simulator import SELECTION, OPTIMIZATION, apply_generator_exponential, expectation

_GRID = np.linspace(-math.pi, math.pi, 10_000, endpoint=False)
_TIE_TOL = 1e-12


def canonical_angle(theta: float) -> float:
    """Wrap to [-pi, pi)."""
    return float((theta + math.pi) % (2.0 * math.pi) - math.pi)


@dataclass(frozen=True)
class TrigLandscape:
    a: float
    b: float
    c: float
    d: float
    f: float

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        return (
            self.a
            + self.b * np.cos(theta)
            + self.c * np.sin(theta)
            + self.d * np.cos(2.0 * theta)
            + self.f * np.sin(2.0 * theta)
        )

    def derivative(self, theta):
        theta = np.asarray(theta, dtype=float)
        return (
            -self.b * np.sin(theta)
            + self.c * np.cos(theta)
            - 2.0 * self.d * np.sin(2.0 * theta)
            + 2.0 * self.f * np.cos(2.0 * theta)
        )


def landscape_derivative_at_zero(l: TrigLandscape) -> float:
    return l.c + 2.0 * l.f


@dataclass
class AnsatzElement:
    generator: object
    theta: float = 0.0

    def __post_init__(self):
        self.theta = canonical_angle(self.theta)


def reconstruct_landscape(
    state_before,
    generator,
    h,
    e_at_zero=None,
    grid_offset=0.0,
    suffix=(),
    phase=SELECTION,
) -> TrigLandscape:
    """Sample E at theta_k = grid_offset + 2 pi k / 5 and invert exactly.

    `e_at_zero` is the known energy at the first grid point; when given only
    four new expectation values are measured. `suffix` holds (generator,
    theta) pairs applied after the free operator, for mid-circuit sweeps.
    """
    thetas = grid_offset + 2.0 * math.pi / 5.0 * np.arange(5)
    energies = np.empty(5)
    for k, theta_k in enumerate(thetas):
        if k == 0 and e_at_zero is not None:
            energies[0] = e_at_zero
            continue
        psi = apply_generator_exponential(state_before, generator, float(theta_k))
        for gen2, theta2 in suffix:
            psi = apply_generator_exponential(psi, gen2, theta2)
        energies[k] = expectation(psi, h, phase)

    # discrete Fourier inversion; exact on any uniform 5-point grid
    a = float(energies.mean())
    b = 0.4 * float(energies @ np.cos(thetas))
    c = 0.4 * float(energies @ np.sin(thetas))
    d = 0.4 * float(energies @ np.cos(2.0 * thetas))
    f = 0.4 * float(energies @ np.sin(2.0 * thetas))
    return TrigLandscape(a, b, c, d, f)


def minimize_landscape(l: TrigLandscape) -> tuple[float, float]:
    """Global minimum over [-pi, pi).

    Stationary points are the real roots of the quartic in t = tan(theta/2)
    from E'(theta) = 0, plus the theta = pi endpoint; a 10^4-point grid is
    kept as a candidate set so the result can never lose to it. Exact ties
    break toward the smallest |theta|, then the positive sign.
    """
    scale = max(abs(l.b), abs(l.c), abs(l.d), abs(l.f))
    if scale < 1e-15:
        return 0.0, l.a

    candidates = [0.0, math.pi - 1e-16, -math.pi]
    coeffs = np.array(
        [
            2.0 * l.f - l.c,
            8.0 * l.d - 2.0 * l.b,
            -12.0 * l.f,
            -2.0 * l.b - 8.0 * l.d,
            l.c + 2.0 * l.f,
        ]
    )
    lead = np.flatnonzero(np.abs(coeffs) > 1e-14 * scale)
    if lead.size:
        for root in np.roots(coeffs[lead[0]:]):
            if abs(root.imag) < 1e-8 * (1.0 + abs(root.real)):
                candidates.append(2.0 * math.atan(root.real))

    grid_vals = l(_GRID)
    candidates.append(float(_GRID[int(np.argmin(grid_vals))]))

    thetas = np.array([canonical_angle(t) for t in candidates])
    values = l(thetas)
    best = float(values.min())
    eligible = thetas[values <= best + _TIE_TOL]
    # smallest magnitude first, positive beating negative at equal magnitude
    order = np.lexsort((eligible < 0, np.abs(eligible)))
    theta_star = float(eligible[order[0]])
    return theta_star, float(l(theta_star))


def sweep_optimize(
    ansatz: list[AnsatzElement],
    h,
    reference,
    eps_conv: float = 1e-8,
    max_sweeps: int = 100,
    energy: float | None = None,
    trace=None,
    stage: str = "sweep",
):
    """Left-to-right coordinate descent, each parameter set to its exact
    1-D global optimum; stops when a full sweep improves the energy by less
    than eps_conv.

    Returns (ansatz, info) where info carries the final energy, sweep count,
    and convergence flag. The ansatz elements are updated in place.
    """
    counter = reference.counter
    if energy is None:
        state = reference
        for elem in ansatz:
            state = apply_generator_exponential(state, elem.generator, elem.theta)
        energy = expectation(state, h, OPTIMIZATION)
        if trace is not None:
            trace.record(counter.total, energy, OPTIMIZATION, stage, len(ansatz))

    converged = len(ansatz) == 0
    sweeps = 0
    for _ in range(max_sweeps):
        if converged:
            break
        sweeps += 1
        start_energy = energy
        prefix = reference
        for j, elem in enumerate(ansatz):
            suffix = [(e.generator, e.theta) for e in ansatz[j + 1:]]
            land = reconstruct_landscape(
                prefix,
                elem.generator,
                h,
                e_at_zero=energy,
                grid_offset=elem.theta,
                suffix=suffix,
                phase=OPTIMIZATION,
            )
            elem.theta, energy = minimize_landscape(land)
            prefix = apply_generator_exponential(prefix, elem.generator, elem.theta)
            if trace is not None:
                trace.record(counter.total, energy, OPTIMIZATION, stage, len(ansatz))
        if start_energy - energy < eps_conv:
            converged = True

    return ansatz, {"energy": energy, "sweeps": sweeps, "converged": converged}
