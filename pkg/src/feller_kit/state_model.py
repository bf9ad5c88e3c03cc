"""Discretized state spaces, grid functions, and discrete C0 proxies.

A state space is a finite ordered set of states, optionally carrying real
coordinates on a uniform grid over a truncated interval [-L, L]. Functions
on it stand in for bounded measurable functions; "continuous and vanishing
at infinity" is operationalized for truncated grids as smallness on a
boundary band (decay) together with small adjacent increments (continuity).
Finite spaces without coordinates are compact, so every function on them
vanishes at infinity trivially.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "StateSpace",
    "GridFunction",
    "C0Verdict",
    "sup_norm",
    "c0_verdict",
]


class StateSpace:
    """Finite ordered state space, optionally with uniform real coordinates.

    Parameters
    ----------
    n_points : int
        Number of states, >= 1.
    coordinates : array_like, optional
        Strictly increasing, uniformly spaced real coordinates, one per
        state. Omit for abstract finite chains.
    boundary_band : int, optional
        Number of points at each end treated as "near infinity". Must
        satisfy 2 * boundary_band < n_points. Use 0 for genuinely compact
        (finite, coordinate-free) spaces.
    """

    __slots__ = ("_n", "_coords", "_band", "_spacing")

    def __init__(self, n_points, coordinates=None, boundary_band=0):
        n_points = int(n_points)
        if n_points < 1:
            raise ValueError("state space needs at least one point")
        boundary_band = int(boundary_band)
        if boundary_band < 0:
            raise ValueError("boundary_band must be >= 0")
        if 2 * boundary_band >= n_points:
            raise ValueError("boundary band covers the whole space")
        spacing = None
        coords = None
        if coordinates is not None:
            coords = np.asarray(coordinates, dtype=float)
            if coords.shape != (n_points,):
                raise ValueError("coordinate count does not match n_points")
            if n_points > 1:
                steps = np.diff(coords)
                if np.any(steps <= 0):
                    raise ValueError("coordinates must be strictly increasing")
                spacing = float(steps[0])
                # uniformity up to accumulated rounding of the grid builder
                if np.max(np.abs(steps - spacing)) > 1e-9 * max(1.0, abs(spacing)):
                    raise ValueError("coordinates must be uniformly spaced")
            coords.setflags(write=False)
        self._n = n_points
        self._coords = coords
        self._band = boundary_band
        self._spacing = spacing

    @classmethod
    def interval(cls, L, h, band_fraction=0.05):
        """Uniform grid on [-L, L] with spacing h and a 2*band_fraction band.

        The point count is 2*round(L/h) + 1, so 0 is always a gridpoint.
        """
        L = float(L)
        h = float(h)
        if L <= 0 or h <= 0:
            raise ValueError("L and h must be positive")
        half = int(round(L / h))
        if half < 1:
            raise ValueError("grid needs at least one cell per side")
        coords = np.arange(-half, half + 1, dtype=float) * h
        n = coords.size
        band = max(1, int(round(band_fraction * n)))
        out = cls(n, coordinates=coords, boundary_band=band)
        # the diff-derived spacing carries product rounding; h is exact
        out._spacing = h
        return out

    @classmethod
    def chain(cls, n_points):
        """Abstract finite chain, no coordinates, empty boundary band."""
        return cls(n_points, coordinates=None, boundary_band=0)

    @property
    def n(self):
        return self._n

    @property
    def coordinates(self):
        return self._coords

    @property
    def spacing(self):
        return self._spacing

    @property
    def boundary_band(self):
        return self._band

    @property
    def has_coordinates(self):
        return self._coords is not None

    def band_indices(self):
        """Indices of the boundary band (both ends), empty if band is 0."""
        b = self._band
        if b == 0:
            return np.empty(0, dtype=int)
        return np.concatenate([np.arange(b), np.arange(self._n - b, self._n)])

    def interior_slice(self):
        """Slice selecting the non-band interior."""
        b = self._band
        return slice(b, self._n - b) if b else slice(None)

    def summary(self):
        """Plain-dict summary for reports."""
        out = {"points": self._n, "boundary_band": self._band}
        if self._coords is not None:
            out["spacing"] = self._spacing
            out["x_min"] = float(self._coords[0])
            out["x_max"] = float(self._coords[-1])
        else:
            out["spacing"] = None
        return out

    def __eq__(self, other):
        if not isinstance(other, StateSpace):
            return NotImplemented
        if self._n != other._n or self._band != other._band:
            return False
        if (self._coords is None) != (other._coords is None):
            return False
        if self._coords is None:
            return True
        return bool(np.array_equal(self._coords, other._coords))

    def __repr__(self):
        if self._coords is None:
            return f"StateSpace(chain, n={self._n})"
        return (
            f"StateSpace(n={self._n}, h={self._spacing:g}, "
            f"band={self._band})"
        )


class GridFunction:
    """Real-valued function on a StateSpace.

    Values are stored as a read-only float64 vector; all entries must be
    finite.
    """

    __slots__ = ("space", "values")

    def __init__(self, space, values):
        if not isinstance(space, StateSpace):
            raise TypeError("space must be a StateSpace")
        v = np.array(values, dtype=float)
        if v.shape != (space.n,):
            raise ValueError("value count does not match the state space")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid function values must be finite")
        v.setflags(write=False)
        self.space = space
        self.values = v

    def with_values(self, values):
        """New GridFunction on the same space."""
        return GridFunction(self.space, values)

    def __repr__(self):
        return f"GridFunction(n={self.space.n}, sup={sup_norm(self):.6g})"


@dataclass(frozen=True)
class C0Verdict:
    """Discrete 'continuous and vanishing at infinity' verdict.

    decay_defect is max |f| over the boundary band; continuity_defect is the
    max adjacent increment over coordinate grids (0 for coordinate-free
    spaces). is_c0 holds iff both defects are within their tolerances.
    """

    is_c0: bool
    decay_defect: float
    continuity_defect: float


def sup_norm(f):
    """Sup norm of a GridFunction or plain vector. Zero for empty input."""
    v = f.values if isinstance(f, GridFunction) else np.asarray(f, dtype=float)
    if v.size == 0:
        return 0.0
    return float(np.max(np.abs(v)))


def c0_verdict(f, decay_tol, continuity_tol, space=None):
    """Evaluate the discrete C0 membership proxy for f.

    Parameters
    ----------
    f : GridFunction or array_like
        Function to test. Arrays require `space`.
    decay_tol, continuity_tol : float
        Positive tolerances for the two defects.
    space : StateSpace, optional
        Required when f is a bare vector; when f is a GridFunction and
        space is given, the two must match.

    Returns
    -------
    C0Verdict
    """
    if decay_tol <= 0 or continuity_tol <= 0:
        raise ValueError("tolerances must be positive")
    if isinstance(f, GridFunction):
        if space is not None and f.space != space:
            raise ValueError("grid function lives on a different state space")
        space = f.space
        v = f.values
    else:
        if space is None:
            raise ValueError("bare vectors need an explicit state space")
        v = np.asarray(f, dtype=float)
        if v.shape != (space.n,):
            raise ValueError("value count does not match the state space")
    band = space.band_indices()
    decay = float(np.max(np.abs(v[band]))) if band.size else 0.0
    if space.has_coordinates and space.n > 1:
        continuity = float(np.max(np.abs(np.diff(v))))
    else:
        continuity = 0.0
    ok = decay <= decay_tol and continuity <= continuity_tol
    return C0Verdict(is_c0=bool(ok), decay_defect=decay, continuity_defect=continuity)
