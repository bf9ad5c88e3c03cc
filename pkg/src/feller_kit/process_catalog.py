"""Catalog of benchmark processes with known regularity verdicts.

Four entries are genuinely regular. Two of them are finite-chain
generators (a two-state flip chain and a reflecting birth-death chain),
one is the same chain with uniform killing (sub-Markov but still
regular), and one is the heat semigroup on a truncated line, backed by
an explicit Gaussian kernel. The fifth entry is deterministic rightward
drift that freezes at the origin: its semigroup tears continuous
functions at 0, so every continuity-sensitive check must fail on it.

Each builder returns a CatalogEntry bundling the operator family with
its parameters and the expected battery verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .operators import Generator, KernelSemigroup, OperatorFamily
from .state_model import StateSpace

__all__ = [
    "CatalogEntry",
    "ENTRY_NAMES",
    "build_entry",
    "list_entries",
    "make_two_state",
    "make_birth_death",
    "make_killed_chain",
    "make_heat_kernel",
    "make_non_feller_drift",
]


@dataclass(frozen=True)
class CatalogEntry:
    """A named process, its parameters, and the verdict it should earn."""

    name: str
    parameters: dict
    expected_feller: bool
    family: OperatorFamily
    notes: str = ""


def make_two_state(a=1.0, b=1.0):
    """Two-state flip chain with rates a (0 -> 1) and b (1 -> 0)."""
    a = float(a)
    b = float(b)
    if a <= 0 or b <= 0:
        raise ValueError("flip rates must be positive")
    space = StateSpace.chain(2)
    q = np.array([[-a, a], [b, -b]])
    fam = OperatorFamily(space, generator=Generator(space, q), name="two-state")
    return CatalogEntry(
        name="two-state",
        parameters={"a": a, "b": b},
        expected_feller=True,
        family=fam,
        notes="conservative two-state flip chain; everything is exact",
    )


def _birth_death_matrix(n, birth, death):
    q = np.zeros((n, n))
    for i in range(n):
        if i + 1 < n:
            q[i, i + 1] = birth
        if i - 1 >= 0:
            q[i, i - 1] = death
        q[i, i] = -(q[i].sum())
    return q


def make_birth_death(n=50, birth=1.0, death=1.0):
    """Reflecting birth-death chain on {0, ..., n-1}."""
    n = int(n)
    birth = float(birth)
    death = float(death)
    if n < 2:
        raise ValueError("need at least two states")
    if birth <= 0 or death <= 0:
        raise ValueError("birth and death rates must be positive")
    space = StateSpace.chain(n)
    q = _birth_death_matrix(n, birth, death)
    fam = OperatorFamily(space, generator=Generator(space, q), name="birth-death")
    return CatalogEntry(
        name="birth-death",
        parameters={"n": n, "birth": birth, "death": death},
        expected_feller=True,
        family=fam,
        notes="conservative reflecting random walk",
    )


def make_killed_chain(n=50, kill_rate=0.3, birth=1.0, death=1.0):
    """Birth-death chain with uniform killing; sub-Markov but regular."""
    n = int(n)
    kill_rate = float(kill_rate)
    if kill_rate <= 0:
        raise ValueError("kill rate must be positive")
    q = _birth_death_matrix(n, float(birth), float(death))
    q -= kill_rate * np.eye(n)
    space = StateSpace.chain(n)
    fam = OperatorFamily(space, generator=Generator(space, q), name="killed-chain")
    return CatalogEntry(
        name="killed-chain",
        parameters={"n": n, "kill_rate": kill_rate, "birth": float(birth),
                    "death": float(death)},
        expected_feller=True,
        family=fam,
        notes="uniform killing makes mass decay but preserves regularity",
    )


class _HeatKernel:
    """Gaussian transition kernel on a uniform grid, trapezoid-weighted."""

    def __init__(self, space):
        self.space = space
        n = space.n
        h = space.spacing
        self.h = h
        self.weights = np.full(n, h)
        self.weights[0] = 0.5 * h
        self.weights[-1] = 0.5 * h
        self.dist = np.arange(n) * h

    def apply_block(self, t, F):
        kv = np.exp(-self.dist * self.dist / (2.0 * t)) / math.sqrt(
            2.0 * math.pi * t
        )
        if F.ndim == 1:
            return kernels.toeplitz_matvec(kv, self.weights * F)
        return kernels.toeplitz_matvec(kv, self.weights[:, None] * F)

    def half_laplacian(self, F):
        n = F.shape[0]
        out = np.zeros_like(F)
        out[1:-1] = F[:-2] - 2.0 * F[1:-1] + F[2:]
        out[0] = -2.0 * F[0] + F[1]
        out[-1] = F[-2] - 2.0 * F[-1]
        return out * (0.5 / (self.h * self.h))


def make_heat_kernel(L=10.0, h=0.05):
    """Heat semigroup on [-L, L], Gaussian kernel with zero extension.

    The grid resolves the kernel only for t well above h^2; below that
    floor the one-step Taylor action f + (t/2) f'' takes over. Resolvents
    come from Laplace quadrature in t.
    """
    space = StateSpace.interval(L, h)
    hk = _HeatKernel(space)
    # trapezoid aliasing error ~ 2 exp(-2 pi^2 t / h^2); 0.71 h^2 keeps it
    # below 1e-6
    floor = 0.71 * h * h
    kern = KernelSemigroup(
        space,
        hk.apply_block,
        small_time_action=hk.half_laplacian,
        time_floor=floor,
        kernel_tol=1e-2,
    )
    fam = OperatorFamily(space, kernel=kern, name="heat-kernel")
    return CatalogEntry(
        name="heat-kernel",
        parameters={"L": float(L), "h": float(h)},
        expected_feller=True,
        family=fam,
        notes="Gaussian kernel on a truncated line; edges lose mass",
    )


class _DriftKernel:
    """Rightward unit drift for x > 0, frozen for x <= 0.

    The semigroup is an exact index shift on lattice times. The resolvent
    is the exact Laplace transform of the piecewise-linear interpolant of
    the grid values, extended by zero beyond the right edge, so that the
    shift and the resolvent commute exactly.
    """

    def __init__(self, space):
        self.space = space
        self.h = space.spacing
        x = space.coordinates
        # last index with coordinate <= 0: those points never move
        self.i_frozen = int(np.searchsorted(x, 0.0, side="right")) - 1

    def apply_block(self, t, F):
        m = int(round(t / self.h))
        n = F.shape[0]
        out = np.array(F, dtype=float, copy=True)
        if m <= 0:
            return out
        pad_shape = (m,) if F.ndim == 1 else (m, F.shape[1])
        padded = np.concatenate([F, np.zeros(pad_shape)], axis=0)
        lo = self.i_frozen + 1
        out[lo:] = padded[lo + m : n + m]
        return out

    def resolvent_block(self, lam, F):
        lam = float(lam)
        h = self.h
        F = np.asarray(F, dtype=float)
        squeeze = F.ndim == 1
        G = F[:, None] if squeeze else F
        n = G.shape[0]
        rho = math.exp(-lam * h)
        cell_a = (1.0 - rho) / lam
        cell_b = (1.0 - (1.0 + lam * h) * rho) / (lam * lam * h)
        # per-cell contribution of the linear interpolant on [x_j, x_{j+1}]
        g = G[:-1] * (cell_a - cell_b) + G[1:] * cell_b
        s = np.zeros_like(G)
        for j in range(n - 2, -1, -1):
            s[j] = g[j] + rho * s[j + 1]
        out = np.empty_like(G)
        lo = self.i_frozen + 1
        out[:lo] = G[:lo] / lam
        out[lo:] = s[lo:]
        if n >= 3:
            d2 = G[2:] - 2.0 * G[1:-1] + G[:-2]
            err = float(np.max(np.abs(d2))) / 8.0
        else:
            err = 0.0
        return (out[:, 0] if squeeze else out), err


def make_non_feller_drift(L=10.0, h=0.05):
    """Deterministic drift with a freezing boundary at 0; not regular.

    Starting points just right of 0 move away while points at or below 0
    stay put, so U_t tears continuous functions at the origin and the
    continuity-sensitive checks must fail.
    """
    space = StateSpace.interval(L, h)
    dk = _DriftKernel(space)
    kern = KernelSemigroup(
        space,
        dk.apply_block,
        resolvent_block=dk.resolvent_block,
        lattice_dt=space.spacing,
        kernel_tol=1e-2,
    )
    fam = OperatorFamily(space, kernel=kern, name="non-feller-drift")
    return CatalogEntry(
        name="non-feller-drift",
        parameters={"L": float(L), "h": float(h)},
        expected_feller=False,
        family=fam,
        notes="exact shift kernel; discontinuity at 0 breaks continuity "
        "preservation",
    )


_BUILDERS = {
    "two-state": make_two_state,
    "birth-death": make_birth_death,
    "killed-chain": make_killed_chain,
    "heat-kernel": make_heat_kernel,
    "non-feller-drift": make_non_feller_drift,
}

_DEFAULTS = {
    "two-state": {"a": 1.0, "b": 1.0},
    "birth-death": {"n": 50, "birth": 1.0, "death": 1.0},
    "killed-chain": {"n": 50, "kill_rate": 0.3, "birth": 1.0, "death": 1.0},
    "heat-kernel": {"L": 10.0, "h": 0.05},
    "non-feller-drift": {"L": 10.0, "h": 0.05},
}

ENTRY_NAMES = tuple(_BUILDERS)


def build_entry(name, **overrides):
    """Construct a catalog entry by name, with optional parameter overrides."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        known = ", ".join(ENTRY_NAMES)
        raise ValueError(f"unknown process '{name}' (choose from: {known})")
    return builder(**overrides)


def list_entries():
    """Names, defaults, and expected verdicts for every catalog entry."""
    rows = []
    for name in ENTRY_NAMES:
        entry = _BUILDERS[name]()
        rows.append(
            {
                "name": name,
                "defaults": dict(_DEFAULTS[name]),
                "expected_feller": entry.expected_feller,
                "notes": entry.notes,
            }
        )
    return rows
