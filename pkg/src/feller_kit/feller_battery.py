"""Executable regularity battery for semigroup/resolvent pairs.

Sixteen checks probe a process from three angles: the semigroup axioms
(identity, contraction, positivity, the semigroup law, strong
continuity), the resolvent axioms (contraction scaling, the resolvent
identity, the approximation-of-identity limit), and the bridges between
them (six bundled preservation+limit verdicts that must agree, an
implication check, a uniform bound on U_t R_lam f - R_lam f,
semigroup/resolvent commutation, and a conditioning probe for the range
of (lam - Q)).

Every check quantifies over a fixed probe family: eight deterministic
shapes plus seeded random Fourier profiles. Checks that speak about
vanishing-at-infinity behavior only quantify over probes that pass the
decay/continuity screen; norm-level checks use all probes. On a finite
grid pointwise and sup-norm limits coincide, so the six bundled verdicts
differ only in which preservation half they pair with which limit half;
a split among them signals a numerical artifact, and the report flags
it.

Tolerances are derived from the backing: generator-backed processes are
held to near-machine accuracy, kernel-backed ones to explicit
discretization budgets (quadrature error estimates, a Lipschitz
estimate from the probes themselves, and the kernel's truncation
allowance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import expm, quadrature_resolvent_block
from .state_model import c0_verdict, sup_norm

__all__ = [
    "BatteryConfig",
    "CheckResult",
    "FellerReport",
    "CHECK_IDS",
    "make_probes",
    "run_battery",
]

CHECK_IDS = (
    "def1_a",
    "def1_b",
    "def1_c",
    "def2_a",
    "def2_b",
    "def2_c",
    "thm_a",
    "thm_b",
    "thm_c",
    "thm_d",
    "thm_e",
    "thm_f",
    "lemma3",
    "lemma4",
    "commutation",
    "density_rank",
)

_SEQ_REL = 1e-9
_SEQ_ABS = 1e-12


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one battery check."""

    id: str
    passed: bool
    max_defect: float
    tolerance: float
    witnesses: tuple


@dataclass(frozen=True)
class BatteryConfig:
    """Grids, screening thresholds, and probe seeding for one run."""

    t_grid: tuple = (1.0, 0.3, 0.1, 0.03, 0.01)
    lambda_grid: tuple = (1.0, 4.0, 16.0, 64.0, 256.0)
    decay_tol: float = 1e-3
    lip_scale: float = 1.0
    seed: int = 42
    n_random_probes: int = 20

    def __post_init__(self):
        ts = tuple(sorted((float(t) for t in self.t_grid), reverse=True))
        ls = tuple(sorted(float(x) for x in self.lambda_grid))
        if not ts or ts[-1] <= 0:
            raise ValueError("t_grid must contain positive times")
        if not ls or ls[0] <= 0:
            raise ValueError("lambda_grid must contain positive values")
        if self.decay_tol <= 0 or self.lip_scale <= 0:
            raise ValueError("decay_tol and lip_scale must be positive")
        if self.n_random_probes < 0:
            raise ValueError("n_random_probes must be nonnegative")
        object.__setattr__(self, "t_grid", ts)
        object.__setattr__(self, "lambda_grid", ls)


@dataclass(frozen=True)
class FellerReport:
    """Full battery outcome for one process."""

    process: str
    parameters: dict
    grid: dict
    config: dict
    checks: tuple
    equivalence_consistent: bool
    expected_feller: object
    verdict_matches_expected: object

    def check(self, check_id):
        for c in self.checks:
            if c.id == check_id:
                return c
        raise KeyError(check_id)


def _fourier_probe(rng, s_modes, c_modes):
    coef = rng.standard_normal((2, s_modes.shape[0]))
    ks = np.arange(1, s_modes.shape[0] + 1, dtype=float)
    f = (coef[0] / (ks * ks)) @ s_modes + (coef[1] / (ks * ks)) @ c_modes
    return f


def make_probes(space, seed=42, n_random=20):
    """Deterministic probe family: eight shapes plus seeded Fourier noise.

    Returns a list of (name, values) pairs. Coordinate spaces get probes
    built from the coordinates with a decay envelope; abstract chains get
    the same shapes in normalized index coordinates, with no envelope
    (finite chains are compact, nothing needs to vanish).
    """
    n = space.n
    rng = np.random.default_rng(seed)
    probes = []
    if space.has_coordinates:
        x = space.coordinates
        L = float(np.max(np.abs(x)))
        env = np.exp(-((x / (0.55 * L)) ** 8))
        sigma = L / 10.0
        c_step, w_step = 0.025, 0.08
        ks = np.arange(1, 7, dtype=float)
        s_modes = np.sin(np.outer(ks, np.pi * x / L)) * env
        c_modes = np.cos(np.outer(ks, np.pi * x / L)) * env
        probes.append(("constant", 0.8 * np.ones(n)))
        probes.append(("gaussian", np.exp(-(x * x) / (2 * sigma * sigma))))
        xc = x - L / 5.0
        probes.append(("gaussian-shifted", np.exp(-(xc * xc) / (2 * sigma * sigma))))
        probes.append(("tent", np.maximum(0.0, 1.0 - np.abs(x) / (0.4 * L))))
        bump = np.exp(-(((x - c_step) / (0.3 * L)) ** 2))
        # odd about c_step: keeps the image's steepest point pinned there
        step = -0.5 * np.tanh((x - c_step) / w_step)
        probes.append(("smoothed-step", bump * step))
        ind = np.zeros(n)
        ind[n // 2] = 1.0
        probes.append(("indicator", ind))
        probes.append(("sine-taper", np.sin(3 * np.pi * x / L) * env))
    else:
        u = (np.arange(n) + 0.5) / n
        xi = 2.0 * u - 1.0
        sigma = 0.5
        ks = np.arange(1, 7, dtype=float)
        s_modes = np.sin(np.outer(ks, np.pi * u))
        c_modes = np.cos(np.outer(ks, np.pi * u))
        probes.append(("constant", 0.8 * np.ones(n)))
        probes.append(("gaussian", np.exp(-(xi * xi) / (2 * sigma * sigma))))
        xc = xi - 0.35
        probes.append(("gaussian-shifted", np.exp(-(xc * xc) / (2 * sigma * sigma))))
        probes.append(("tent", np.maximum(0.0, 1.0 - np.abs(xi) / 0.8)))
        bump = np.exp(-(((xi - 0.025) / 0.6) ** 2))
        step = -0.5 * np.tanh((xi - 0.025) / 0.2)
        probes.append(("smoothed-step", bump * step))
        ind = np.zeros(n)
        ind[n // 2] = 1.0
        probes.append(("indicator", ind))
        probes.append(("sine-taper", np.sin(3 * np.pi * u)))

    lip = _fourier_probe(rng, s_modes, c_modes)
    peak = sup_norm(lip)
    if peak > 0:
        lip = lip * (0.9 / peak)
    probes.append(("lipschitz", lip))
    for i in range(n_random):
        f = _fourier_probe(rng, s_modes, c_modes)
        peak = sup_norm(f)
        if peak > 0:
            f = f * (0.9 / peak)
        probes.append((f"random-{i:02d}", f))
    return [(name, np.ascontiguousarray(v)) for name, v in probes]


def _top_witnesses(items, k=3):
    """items: iterable of (description, defect). Worst k, ties stable."""
    ordered = sorted(items, key=lambda p: -p[1])
    return tuple((d, float(v)) for d, v in ordered[:k])


def _seq_nonincreasing_excess(values):
    """Largest violation of 'each entry <= previous', with slack."""
    worst = 0.0
    where = -1
    for i in range(1, len(values)):
        allowed = values[i - 1] * (1.0 + _SEQ_REL) + _SEQ_ABS
        if values[i] - allowed > worst:
            worst = values[i] - allowed
            where = i
    return worst, where


class _Engine:
    """Memoized operator applications over the probe block."""

    def __init__(self, fam, probes, cfg):
        self.fam = fam
        self.cfg = cfg
        self.names = [p[0] for p in probes]
        self.F = np.column_stack([p[1] for p in probes])
        self.norms = np.max(np.abs(self.F), axis=0)
        self._expm_cache = {}
        self._u_cache = {}
        self._r_cache = {}

    def apply_u(self, t, block=None):
        t = float(t)
        if block is None:
            if t not in self._u_cache:
                self._u_cache[t] = self._apply(t, self.F)
            return self._u_cache[t]
        return self._apply(t, block)

    def _apply(self, t, block):
        if self.fam.generator is not None:
            if t == 0.0:
                return block
            if t not in self._expm_cache:
                self._expm_cache[t] = expm(t * self.fam.generator.q)
            return self._expm_cache[t] @ block
        return self.fam.kernel.apply(t, block)

    def resolvent(self, lam, block=None):
        """(values, error_estimate); the probe block is cached per lam."""
        lam = float(lam)
        if block is None:
            if lam not in self._r_cache:
                self._r_cache[lam] = self._resolve(lam, self.F)
            return self._r_cache[lam]
        return self._resolve(lam, block)

    def _resolve(self, lam, block):
        fam = self.fam
        if fam.generator is not None:
            return fam.resolvent_exact_block(lam, block), 0.0
        if fam.kernel.resolvent_block is not None:
            return fam.kernel.resolvent_block(lam, block)
        out, err, _tail, _nodes = quadrature_resolvent_block(fam, lam, block)
        return out, err


def _snap_times(t_grid, dt):
    """Round times to lattice multiples, drop duplicates, keep order."""
    if dt is None:
        return tuple(t_grid)
    out = []
    for t in t_grid:
        snapped = max(dt, round(t / dt) * dt)
        if not any(abs(snapped - s) < 1e-12 for s in out):
            out.append(snapped)
    return tuple(out)


def run_battery(entry, config=None):
    """Run all sixteen checks and assemble the report.

    `entry` is a CatalogEntry or a bare OperatorFamily (expected verdict
    unknown). The returned report is deterministic for a given entry and
    config: identical runs produce identical reports.
    """
    cfg = config if config is not None else BatteryConfig()
    if hasattr(entry, "family"):
        fam = entry.family
        process = entry.name
        parameters = dict(entry.parameters)
        expected = entry.expected_feller
    else:
        fam = entry
        process = fam.name or "custom"
        parameters = {}
        expected = None

    space = fam.space
    kern = fam.kernel
    t_grid = _snap_times(cfg.t_grid, fam.lattice_dt)
    lam_grid = cfg.lambda_grid

    probes = make_probes(space, seed=cfg.seed, n_random=cfg.n_random_probes)
    eng = _Engine(fam, probes, cfg)
    names, F, norms = eng.names, eng.F, eng.norms
    n_probes = F.shape[1]

    h = space.spacing if space.has_coordinates else 0.0
    cont_tol = 10.0 * h * cfg.lip_scale if space.has_coordinates else math.inf
    screen = [
        c0_verdict(F[:, j], cfg.decay_tol, cont_tol, space=space)
        for j in range(n_probes)
    ]
    admitted = [j for j in range(n_probes) if screen[j].is_c0]
    if space.has_coordinates and h > 0:
        lip_est = max(
            (screen[j].continuity_defect / h for j in admitted), default=0.0
        )
    else:
        lip_est = 0.0
    max_norm_adm = max((norms[j] for j in admitted), default=1.0)

    is_gen = fam.generator is not None
    q_norm = fam.generator.norm_inf if is_gen else 0.0
    kernel_tol = kern.kernel_tol if kern is not None else 0.0
    t_min = t_grid[-1]
    lam_max = lam_grid[-1]
    # norm-comparison region: kernel backings approximate the continuum
    # process only away from the truncation cut, so operator identities
    # are measured on the interior band
    region = space.interior_slice() if kern is not None else slice(None)

    checks = {}

    # --- def1_a: identity, contraction, positivity of U_t ---
    cand = []
    u0 = eng.apply_u(0.0)
    d0 = sup_norm(u0 - F)
    cand.append(("t=0 identity on all probes", d0))
    upos = {}
    for t in t_grid:
        ut = eng.apply_u(t)
        for j in range(n_probes):
            over = sup_norm(ut[:, j]) - norms[j]
            if over > 0:
                cand.append((f"contraction: probe={names[j]}, t={t:g}", over))
        upos[t] = eng.apply_u(t, np.abs(F))
        neg = -float(np.min(upos[t]))
        if neg > 0:
            jmin = int(np.argmin(np.min(upos[t], axis=0)))
            cand.append((f"positivity: probe=|{names[jmin]}|, t={t:g}", neg))
    tol = 1e-10 if is_gen else kernel_tol
    defect = max(v for _, v in cand) if cand else 0.0
    checks["def1_a"] = CheckResult(
        "def1_a", defect <= tol, defect, tol, _top_witnesses(cand)
    )

    # --- def1_b: semigroup law U_{t+s} = U_t U_s on the admitted class ---
    cand = []
    for i, t in enumerate(t_grid):
        for s in t_grid[i:]:
            direct = eng.apply_u(t + s)
            composed = eng.apply_u(t, eng.apply_u(s))
            diff = np.max(np.abs(direct - composed), axis=0)
            j = max(admitted, key=lambda jj: diff[jj])
            cand.append(
                (f"law: probe={names[j]}, t={t:g}, s={s:g}", float(diff[j]))
            )
    tol = 1e-10 if is_gen else kernel_tol
    defect = max(v for _, v in cand)
    checks["def1_b"] = CheckResult(
        "def1_b", defect <= tol, defect, tol, _top_witnesses(cand)
    )

    # --- def1_c: strong continuity ||U_t f - f|| -> 0 over admitted probes ---
    seq = []
    cand = []
    for t in t_grid:
        ut = eng.apply_u(t)
        diffs = [(j, sup_norm(ut[:, j] - F[:, j])) for j in admitted]
        worst_j, worst = max(diffs, key=lambda p: p[1])
        seq.append(worst)
        cand.append((f"probe={names[worst_j]}, t={t:g}", worst))
    if is_gen:
        tol = 1.5 * t_min * q_norm * max_norm_adm + 1e-12
    else:
        tol = 2.0 * math.sqrt(t_min) * lip_est + 1e-12
    excess, where = _seq_nonincreasing_excess(seq)
    if where >= 0:
        cand.append(
            (
                f"sequence increase between t={t_grid[where - 1]:g} "
                f"and t={t_grid[where]:g}",
                excess,
            )
        )
    defect = max(seq[-1], excess)
    checks["def1_c"] = CheckResult(
        "def1_c", defect <= tol, defect, tol, _top_witnesses(cand)
    )

    # --- def2_a: contraction and positivity of lam * R_lam ---
    cand = []
    lam_eps = {}
    for lam in lam_grid:
        r, eps = eng.resolvent(lam)
        lam_eps[lam] = eps
        for j in range(n_probes):
            over = lam * sup_norm(r[:, j]) - norms[j]
            if over > 0:
                cand.append((f"contraction: probe={names[j]}, lam={lam:g}", over))
        rpos, _ = eng.resolvent(lam, np.abs(F))
        neg = -float(np.min(rpos))
        if neg > 0:
            jmin = int(np.argmin(np.min(rpos, axis=0)))
            cand.append((f"positivity: probe=|{names[jmin]}|, lam={lam:g}", neg))
    if is_gen:
        tol = 1e-10
    else:
        tol = 2.0 * max(lam * lam_eps[lam] for lam in lam_grid) + 1e-8
    defect = max((v for _, v in cand), default=0.0)
    checks["def2_a"] = CheckResult(
        "def2_a", defect <= tol, defect, tol, _top_witnesses(cand) or
        (("no contraction or positivity overshoot", 0.0),)
    )

    # --- def2_b: resolvent identity over lambda pairs ---
    if is_gen:
        pairs = [
            (lam_grid[i], lam_grid[j])
            for i in range(len(lam_grid))
            for j in range(i, len(lam_grid))
        ]
    else:
        pairs = [(lam_grid[0], lam_grid[0])]
        pairs += list(zip(lam_grid[:-1], lam_grid[1:]))
        if len(lam_grid) > 2:
            pairs.append((lam_grid[0], lam_grid[-1]))
    cand = []
    tol = 1e-10
    worst_tol = 1e-10
    for lam, mu in pairs:
        r_lam, eps_lam = eng.resolvent(lam)
        r_mu, eps_mu = eng.resolvent(mu) if mu != lam else (r_lam, eps_lam)
        nested, eps_nested = eng.resolvent(lam, r_mu)
        resid = (r_lam - r_mu) - (mu - lam) * nested
        diff = np.max(np.abs(resid), axis=0)
        j = int(np.argmax(diff))
        cand.append(
            (f"identity: probe={names[j]}, lam={lam:g}, mu={mu:g}", float(diff[j]))
        )
        if not is_gen:
            gap = abs(mu - lam)
            pair_tol = 5.0 * (
                (1.0 + gap / lam) * eps_mu
                + (1.0 + gap / mu) * eps_lam
                + gap * eps_nested
            ) + 1e-8
            worst_tol = max(worst_tol, pair_tol)
    if not is_gen:
        tol = worst_tol
    defect = max(v for _, v in cand)
    checks["def2_b"] = CheckResult(
        "def2_b", defect <= tol, defect, tol, _top_witnesses(cand)
    )

    # --- def2_c: lam R_lam f -> f over admitted probes ---
    seq = []
    cand = []
    for lam in lam_grid:
        r, _ = eng.resolvent(lam)
        diffs = [(j, sup_norm(lam * r[:, j] - F[:, j])) for j in admitted]
        worst_j, worst = max(diffs, key=lambda p: p[1])
        seq.append(worst)
        cand.append((f"probe={names[worst_j]}, lam={lam:g}", worst))
    if is_gen:
        tol = 1.5 * q_norm * max_norm_adm / lam_max + 1e-12
    else:
        tol = 3.0 * lip_est * lip_est / lam_max + 1e-8
    excess, where = _seq_nonincreasing_excess(seq)
    if where >= 0:
        cand.append(
            (
                f"sequence increase between lam={lam_grid[where - 1]:g} "
                f"and lam={lam_grid[where]:g}",
                excess,
            )
        )
    defect = max(seq[-1], excess)
    checks["def2_c"] = CheckResult(
        "def2_c", defect <= tol, defect, tol, _top_witnesses(cand)
    )

    # --- preservation components for the bundled verdicts ---
    img_decay_tol = max(cfg.decay_tol, kernel_tol) if kern is not None else cfg.decay_tol

    def image_ratio(img):
        v = c0_verdict(img, img_decay_tol, cont_tol, space=space)
        parts = [v.decay_defect / img_decay_tol]
        if space.has_coordinates:
            parts.append(v.continuity_defect / cont_tol)
        return max(parts), v

    u_cand = []
    for t in t_grid:
        ut = eng.apply_u(t)
        for j in admitted:
            ratio, v = image_ratio(ut[:, j])
            if ratio > 0:
                kind = (
                    "continuity"
                    if space.has_coordinates
                    and v.continuity_defect / cont_tol >= v.decay_defect / img_decay_tol
                    else "decay"
                )
                u_cand.append(
                    (f"image U_t: probe={names[j]}, t={t:g}, {kind}", ratio)
                )
    u_pres_defect = max((v for _, v in u_cand), default=0.0)
    if not u_cand:
        u_cand = [("all semigroup images stay in the admitted class", 0.0)]

    r_cand = []
    for lam in lam_grid:
        r, _ = eng.resolvent(lam)
        for j in admitted:
            ratio, v = image_ratio(lam * r[:, j])
            if ratio > 0:
                kind = (
                    "continuity"
                    if space.has_coordinates
                    and v.continuity_defect / cont_tol >= v.decay_defect / img_decay_tol
                    else "decay"
                )
                r_cand.append(
                    (f"image R_lam: probe={names[j]}, lam={lam:g}, {kind}", ratio)
                )
    r_pres_defect = max((v for _, v in r_cand), default=0.0)
    if not r_cand:
        r_cand = [("all resolvent images stay in the admitted class", 0.0)]

    d1c = checks["def1_c"]
    d2c = checks["def2_c"]
    lim_t = (d1c.max_defect / d1c.tolerance, d1c.passed, d1c.witnesses)
    lim_y = (d2c.max_defect / d2c.tolerance, d2c.passed, d2c.witnesses)

    def bundle(check_id, pres_defect, pres_ok, pres_wit, limit):
        lim_ratio, lim_ok, lim_wit = limit
        items = list(pres_wit) + [
            (f"limit half: {d}", v) for d, v in lim_wit
        ]
        defect = max(pres_defect, lim_ratio)
        return CheckResult(
            check_id,
            bool(pres_ok and lim_ok),
            defect,
            1.0,
            _top_witnesses(items),
        )

    u_ok = u_pres_defect <= 1.0
    r_ok = r_pres_defect <= 1.0
    checks["thm_a"] = bundle("thm_a", u_pres_defect, u_ok, u_cand, lim_t)
    checks["thm_b"] = bundle("thm_b", r_pres_defect, r_ok, r_cand, lim_y)
    checks["thm_c"] = bundle("thm_c", u_pres_defect, u_ok, u_cand, lim_t)
    checks["thm_d"] = bundle("thm_d", u_pres_defect, u_ok, u_cand, lim_y)
    checks["thm_e"] = bundle("thm_e", r_pres_defect, r_ok, r_cand, lim_t)
    checks["thm_f"] = bundle("thm_f", r_pres_defect, r_ok, r_cand, lim_y)

    # --- lemma3: strong continuity forces the resolvent limit ---
    if d1c.passed:
        l3_defect = d2c.max_defect / d2c.tolerance
        l3_passed = d2c.passed
        l3_wit = d2c.witnesses
    else:
        l3_defect = 0.0
        l3_passed = True
        l3_wit = (("premise fails, implication holds vacuously", 0.0),)
    checks["lemma3"] = CheckResult("lemma3", l3_passed, l3_defect, 1.0, l3_wit)

    # --- lemma4: ||U_t R_lam f - R_lam f|| <= (2/lam)(1 - e^{-lam t})||f|| ---
    cand = []
    worst = -math.inf
    for lam in lam_grid:
        r, _ = eng.resolvent(lam)
        for t in t_grid:
            moved = eng.apply_u(t, r)
            lhs = np.max(np.abs(moved[region] - r[region]), axis=0)
            rhs = (2.0 / lam) * (-math.expm1(-lam * t)) * norms
            margin = lhs - rhs
            j = int(np.argmax(margin))
            cand.append(
                (
                    f"probe={names[j]}, lam={lam:g}, t={t:g}",
                    float(margin[j]),
                )
            )
            worst = max(worst, float(margin[j]))
    if is_gen:
        tol = 1e-12 * max(1.0, float(np.max(norms)))
    else:
        tol = 2.0 * max(lam_eps.values()) + 1e-8
    defect = max(0.0, worst)
    checks["lemma4"] = CheckResult(
        "lemma4", defect <= tol, defect, tol, _top_witnesses(cand)
    )

    # --- commutation: U_t R_lam = R_lam U_t on the admitted class ---
    cand = []
    if is_gen:
        comm_pairs = [(t, lam) for t in t_grid for lam in lam_grid]
    else:
        comm_pairs = list(zip(t_grid, lam_grid))
    tol = 1e-10
    worst_tol = 1e-10
    for t, lam in comm_pairs:
        r, eps_f = eng.resolvent(lam)
        left = eng.apply_u(t, r)
        right, eps_ut = eng.resolvent(lam, eng.apply_u(t))
        diff = np.max(np.abs(left[region] - right[region]), axis=0)
        j = max(admitted, key=lambda jj: diff[jj])
        cand.append((f"probe={names[j]}, t={t:g}, lam={lam:g}", float(diff[j])))
        if not is_gen:
            worst_tol = max(worst_tol, 5.0 * (eps_f + eps_ut) + 1e-8)
    if not is_gen:
        tol = worst_tol
    defect = max(v for _, v in cand)
    checks["commutation"] = CheckResult(
        "commutation", defect <= tol, defect, tol, _top_witnesses(cand)
    )

    # --- density_rank: conditioning of (lam_min - Q) on its range ---
    if is_gen:
        lam0 = lam_grid[0]
        a = lam0 * np.eye(space.n) - fam.generator.q
        kappa = float(
            np.linalg.norm(a, 1) * np.linalg.norm(np.linalg.inv(a), 1)
        )
        tol = 1e6
        checks["density_rank"] = CheckResult(
            "density_rank",
            kappa <= tol,
            kappa,
            tol,
            ((f"one-norm condition of (lam - Q) at lam={lam0:g}", kappa),),
        )
    else:
        checks["density_rank"] = CheckResult(
            "density_rank",
            True,
            0.0,
            1e6,
            (("kernel backing carries no rate matrix; range probe skipped", 0.0),),
        )

    thm_ids = ("thm_a", "thm_b", "thm_c", "thm_d", "thm_e", "thm_f")
    verdicts = [checks[c].passed for c in thm_ids]
    consistent = all(verdicts) or not any(verdicts)
    if expected is None:
        matches = None
    else:
        matches = bool(consistent and all(v == expected for v in verdicts))

    config_echo = {
        "t_grid": list(t_grid),
        "lambda_grid": list(lam_grid),
        "decay_tol": cfg.decay_tol,
        "lip_scale": cfg.lip_scale,
        "seed": cfg.seed,
        "n_random_probes": cfg.n_random_probes,
        "probes_admitted": len(admitted),
        "lip_estimate": lip_est,
    }
    grid = dict(space.summary())
    grid["backing"] = "generator" if is_gen else "kernel"

    return FellerReport(
        process=process,
        parameters=parameters,
        grid=grid,
        config=config_echo,
        checks=tuple(checks[c] for c in CHECK_IDS),
        equivalence_consistent=bool(consistent),
        expected_feller=expected,
        verdict_matches_expected=matches,
    )
