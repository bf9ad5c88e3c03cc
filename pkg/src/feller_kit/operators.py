"""Semigroups and resolvents on discretized state spaces.

Two backings are supported. A rate-matrix generator Q (off-diagonal >= 0,
row sums <= 0) yields U_t = e^{tQ} through scaling-and-squaring and exact
resolvents R_lambda = (lambda I - Q)^{-1} through LU solves. An explicit
transition kernel yields U_t by quadrature against the kernel and R_lambda
either by a closed form supplied with the kernel or by composite
Gauss-Legendre quadrature of the Laplace integral over t, with an explicit
tail bound.

Residual helpers measure the algebraic fingerprints: the semigroup law,
the resolvent identity, and semigroup/resolvent commutation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .state_model import GridFunction, StateSpace, sup_norm

__all__ = [
    "Generator",
    "KernelSemigroup",
    "OperatorFamily",
    "QuadratureResult",
    "expm",
    "semigroup_apply",
    "resolvent_apply_exact",
    "resolvent_apply_quadrature",
    "resolvent_identity_residual",
    "semigroup_law_residual",
    "commutation_residual",
]

# Degree-13 Pade numerator coefficients for the matrix exponential.
_PADE13_B = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
# 1-norm threshold below which the degree-13 approximant is accurate
# without scaling.
_PADE13_THETA = 5.371920351148152


def expm(a):
    """Matrix exponential by scaling-and-squaring with a degree-13 Pade kernel.

    The squaring count is chosen from the 1-norm of the input. Intended for
    the dense, modest-size matrices t*Q that arise here.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expm needs a square matrix")
    n = a.shape[0]
    nrm = float(np.linalg.norm(a, 1))
    s = 0
    if nrm > _PADE13_THETA:
        s = int(math.ceil(math.log2(nrm / _PADE13_THETA)))
    if s:
        a = a / (2.0**s)
    b = _PADE13_B
    ident = np.eye(n)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a2 @ a4
    u = a @ (
        a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
        + b[7] * a6
        + b[5] * a4
        + b[3] * a2
        + b[1] * ident
    )
    v = (
        a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
        + b[6] * a6
        + b[4] * a4
        + b[2] * a2
        + b[0] * ident
    )
    e = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        e = e @ e
    return e


class Generator:
    """Rate matrix backing: off-diagonal >= 0, row sums <= 0."""

    __slots__ = ("space", "q", "_norm_inf")

    def __init__(self, space, q):
        if not isinstance(space, StateSpace):
            raise TypeError("space must be a StateSpace")
        q = np.array(q, dtype=float)
        if q.shape != (space.n, space.n):
            raise ValueError("rate matrix shape does not match the space")
        if not np.all(np.isfinite(q)):
            raise ValueError("rate matrix entries must be finite")
        off = q - np.diag(np.diag(q))
        if np.min(off) < -1e-12:
            raise ValueError("off-diagonal rates must be nonnegative")
        rows = q.sum(axis=1)
        if np.max(rows) > 1e-9 * max(1.0, float(np.max(np.abs(q)))):
            raise ValueError("row sums must be nonpositive")
        q.setflags(write=False)
        self.space = space
        self.q = q
        self._norm_inf = float(np.max(np.sum(np.abs(q), axis=1))) if space.n else 0.0

    @property
    def norm_inf(self):
        return self._norm_inf


class KernelSemigroup:
    """Explicit transition-kernel backing.

    Parameters
    ----------
    space : StateSpace
    apply_block : callable(t, F) -> ndarray
        Kernel application for t >= time_floor. F is (n,) or (n, p).
    small_time_action : callable(F) -> ndarray, optional
        Generator action used for 0 < t < time_floor via
        U_t F ~= F + t * small_time_action(F).
    time_floor : float
        Threshold below which the kernel discretization is unreliable and
        the small-time expansion takes over. 0 disables the expansion.
    resolvent_block : callable(lam, F) -> (ndarray, float), optional
        Closed-form resolvent with an error estimate. When absent the
        resolvent comes from Laplace quadrature in t.
    lattice_dt : float, optional
        When set, t must be an integer multiple of this step (exact-shift
        kernels); other t values are rejected.
    kernel_tol : float
        Slack for sub-stochasticity and positivity lost to grid truncation.
    mixing_guess : float
        Relaxation-time guess entering the quadrature horizon.
    """

    __slots__ = (
        "space",
        "_apply_block",
        "small_time_action",
        "time_floor",
        "resolvent_block",
        "lattice_dt",
        "kernel_tol",
        "mixing_guess",
    )

    def __init__(
        self,
        space,
        apply_block,
        *,
        small_time_action=None,
        time_floor=0.0,
        resolvent_block=None,
        lattice_dt=None,
        kernel_tol=1e-2,
        mixing_guess=0.0,
    ):
        if not isinstance(space, StateSpace):
            raise TypeError("space must be a StateSpace")
        self.space = space
        self._apply_block = apply_block
        self.small_time_action = small_time_action
        self.time_floor = float(time_floor)
        self.resolvent_block = resolvent_block
        self.lattice_dt = lattice_dt
        self.kernel_tol = float(kernel_tol)
        self.mixing_guess = float(mixing_guess)

    def apply(self, t, F):
        """Apply U_t to a vector or block of grid values."""
        t = float(t)
        if t < 0:
            raise ValueError("time must be nonnegative")
        F = np.asarray(F, dtype=float)
        if t == 0.0:
            return F
        if self.lattice_dt is not None:
            steps = t / self.lattice_dt
            if abs(steps - round(steps)) > 1e-9 * max(1.0, abs(steps)):
                raise ValueError(
                    f"t={t:g} is not an integer multiple of the lattice step "
                    f"{self.lattice_dt:g}"
                )
        if t < self.time_floor:
            if self.small_time_action is None:
                raise ValueError(
                    f"t={t:g} is below the kernel resolution floor "
                    f"{self.time_floor:g}"
                )
            return F + t * self.small_time_action(F)
        return self._apply_block(t, F)


class OperatorFamily:
    """Uniform handle over a generator- or kernel-backed process."""

    __slots__ = ("space", "generator", "kernel", "name")

    def __init__(self, space, *, generator=None, kernel=None, name=""):
        if (generator is None) == (kernel is None):
            raise ValueError("exactly one backing (generator or kernel) required")
        if generator is not None and generator.space != space:
            raise ValueError("generator lives on a different space")
        if kernel is not None and kernel.space != space:
            raise ValueError("kernel lives on a different space")
        self.space = space
        self.generator = generator
        self.kernel = kernel
        self.name = name

    @property
    def has_exact_resolvent(self):
        return self.generator is not None

    @property
    def mixing_guess(self):
        return self.kernel.mixing_guess if self.kernel is not None else 0.0

    @property
    def lattice_dt(self):
        return self.kernel.lattice_dt if self.kernel is not None else None

    # --- block-level engine (ndarrays in, ndarrays out) ---

    def apply_semigroup(self, t, F):
        t = float(t)
        if t < 0:
            raise ValueError("time must be nonnegative")
        F = np.asarray(F, dtype=float)
        if t == 0.0:
            return F
        if self.generator is not None:
            return expm(t * self.generator.q) @ F
        return self.kernel.apply(t, F)

    def resolvent_exact_block(self, lam, F):
        lam = float(lam)
        if lam <= 0:
            raise ValueError("lambda must be positive")
        if self.generator is None:
            raise ValueError("exact resolvents require a generator backing")
        a = lam * np.eye(self.space.n) - self.generator.q
        return np.linalg.solve(a, np.asarray(F, dtype=float))

    def resolvent_block_with_error(self, lam, F):
        """Resolvent application plus an error estimate, best method first."""
        lam = float(lam)
        if lam <= 0:
            raise ValueError("lambda must be positive")
        F = np.asarray(F, dtype=float)
        if self.generator is not None:
            return self.resolvent_exact_block(lam, F), 0.0
        if self.kernel.resolvent_block is not None:
            return self.kernel.resolvent_block(lam, F)
        res = quadrature_resolvent_block(self, lam, F)
        return res[0], res[1]

    def resolvent_solve_dd(self, mu_h, mu_l, f, refine=2):
        """Resolvent solve at the double-double shift mu, refined in dd.

        Returns the solution as a dd pair. Generator backing only.
        """
        if self.generator is None:
            raise ValueError("dd-refined solves require a generator backing")
        q = self.generator.q
        a = mu_h * np.eye(self.space.n) - q
        xh = np.linalg.solve(a, np.asarray(f, dtype=float))
        xl = np.zeros_like(xh)
        for _ in range(refine):
            r = kernels.dd_shifted_residual(q, mu_h, mu_l, xh, xl, f)
            c = np.linalg.solve(a, r)
            xh, xl = kernels.dd_add(xh, xl, c, np.zeros_like(c))
        return xh, xl


@dataclass(frozen=True)
class QuadratureResult:
    """Laplace-quadrature resolvent value with its error accounting."""

    value: GridFunction
    error_estimate: float
    tail_bound: float
    nodes_used: int


def _gl_nodes(a, b, order):
    x, w = np.polynomial.legendre.leggauss(order)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return mid + half * x, half * w


def _panel_edges(t_lo, t_max, ratio=2.0):
    edges = [t_lo]
    while edges[-1] < t_max:
        edges.append(min(edges[-1] * ratio, t_max))
    return edges


def _quad_pass(fam, lam, F, edges, order, include_zero_panel):
    acc = np.zeros_like(F)
    nodes = 0
    if include_zero_panel:
        ts, ws = _gl_nodes(0.0, edges[0], order)
        for t, w in zip(ts, ws):
            acc = acc + (w * math.exp(-lam * t)) * fam.apply_semigroup(t, F)
        nodes += order
    for a, b in zip(edges[:-1], edges[1:]):
        ts, ws = _gl_nodes(a, b, order)
        for t, w in zip(ts, ws):
            acc = acc + (w * math.exp(-lam * t)) * fam.apply_semigroup(t, F)
        nodes += order
    return acc, nodes


def _floor_segment(kernel, lam, t0, F):
    """Closed-form integral of the small-time expansion over [0, t0]."""
    c0 = -math.expm1(-lam * t0) / lam  # int_0^{t0} e^{-lam s} ds
    acc = c0 * F
    rem = 0.0
    if kernel.small_time_action is not None:
        lf = kernel.small_time_action(F)
        # int_0^{t0} s e^{-lam s} ds
        c1 = (1.0 - (1.0 + lam * t0) * math.exp(-lam * t0)) / (lam * lam)
        acc = acc + c1 * lf
        llf = kernel.small_time_action(lf)
        rem = (t0**3 / 6.0) * float(np.max(np.abs(llf)))
    return acc, rem


def quadrature_resolvent_block(fam, lam, F, t_max=None, n_nodes=None):
    """Laplace-integral resolvent on a block, with error accounting.

    Returns (value_block, error_estimate, tail_bound, nodes_used). The
    error estimate combines a coarse-vs-fine Gauss-Legendre comparison,
    the truncation tail bound e^{-lam t_max} * ||F|| / lam, and the
    small-time floor remainder for kernel backings.
    """
    lam = float(lam)
    if lam <= 0:
        raise ValueError("lambda must be positive")
    F = np.asarray(F, dtype=float)
    norm_f = float(np.max(np.abs(F))) if F.size else 0.0
    if t_max is None:
        t_max = max(40.0 / lam, 10.0 * fam.mixing_guess)
    t_max = float(t_max)
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    kern = fam.kernel
    t_floor = kern.time_floor if kern is not None else 0.0
    tail = math.exp(-lam * t_max) * norm_f / lam

    if kern is not None and t_max <= t_floor:
        # the whole horizon sits below the kernel resolution floor
        acc, rem = _floor_segment(kern, lam, t_max, F)
        return acc, rem + tail, tail, 0

    if t_floor > 0.0:
        t_lo = t_floor
        include_zero_panel = False
    else:
        t_lo = t_max / 4096.0
        include_zero_panel = True
    edges = _panel_edges(t_lo, t_max)
    n_panels = len(edges) - 1 + (1 if include_zero_panel else 0)
    if n_nodes is None:
        order = 12
    else:
        n_nodes = int(n_nodes)
        if n_nodes < 8:
            raise ValueError("n_nodes must be at least 8")
        order = max(8, round(n_nodes / max(1, n_panels)))

    acc, nodes = _quad_pass(fam, lam, F, edges, order, include_zero_panel)
    coarse, _ = _quad_pass(
        fam, lam, F, edges, max(4, (2 * order) // 3), include_zero_panel
    )
    err = float(np.max(np.abs(acc - coarse))) + tail
    floor_rem = 0.0
    if not include_zero_panel:
        seg, floor_rem = _floor_segment(kern, lam, t_lo, F)
        acc = acc + seg
        err += floor_rem
    return acc, err, tail, nodes


# --- GridFunction-level operations ---


def _as_values(fam, f):
    if isinstance(f, GridFunction):
        if f.space != fam.space:
            raise ValueError("grid function lives on a different state space")
        return f.values
    v = np.asarray(f, dtype=float)
    if v.shape != (fam.space.n,):
        raise ValueError("value count does not match the state space")
    return v


def semigroup_apply(fam, t, f):
    """Apply U_t to f. t = 0 returns f unchanged (exact identity)."""
    if float(t) == 0.0 and isinstance(f, GridFunction):
        return f
    v = fam.apply_semigroup(t, _as_values(fam, f))
    return GridFunction(fam.space, v)


def resolvent_apply_exact(fam, lam, f):
    """Solve (lam I - Q) g = f. Generator backing only."""
    v = fam.resolvent_exact_block(lam, _as_values(fam, f))
    return GridFunction(fam.space, v)


def resolvent_apply_quadrature(fam, lam, f, t_max=None, n_nodes=None):
    """Resolvent by Laplace quadrature; works for either backing."""
    v, err, tail, nodes = quadrature_resolvent_block(
        fam, lam, _as_values(fam, f), t_max=t_max, n_nodes=n_nodes
    )
    return QuadratureResult(
        value=GridFunction(fam.space, v),
        error_estimate=err,
        tail_bound=tail,
        nodes_used=nodes,
    )


def resolvent_identity_residual(fam, lam, mu, f):
    """sup | (R_lam - R_mu) f - (mu - lam) R_lam R_mu f |."""
    lam = float(lam)
    mu = float(mu)
    if lam <= 0 or mu <= 0:
        raise ValueError("lambda and mu must be positive")
    v = _as_values(fam, f)
    r_mu, _ = fam.resolvent_block_with_error(mu, v)
    if lam == mu:
        r_lam = r_mu
    else:
        r_lam, _ = fam.resolvent_block_with_error(lam, v)
    nested, _ = fam.resolvent_block_with_error(lam, r_mu)
    return sup_norm((r_lam - r_mu) - (mu - lam) * nested)


def semigroup_law_residual(fam, t, s, f):
    """sup | U_{t+s} f - U_t U_s f |."""
    v = _as_values(fam, f)
    direct = fam.apply_semigroup(float(t) + float(s), v)
    composed = fam.apply_semigroup(t, fam.apply_semigroup(s, v))
    return sup_norm(direct - composed)


def commutation_residual(fam, t, lam, f):
    """sup | U_t R_lam f - R_lam U_t f |."""
    v = _as_values(fam, f)
    r, _ = fam.resolvent_block_with_error(lam, v)
    left = fam.apply_semigroup(t, r)
    ut, _ = fam.resolvent_block_with_error(lam, fam.apply_semigroup(t, v))
    return sup_norm(left - ut)
