"""Generalized tripartite discord by maximizing G + F over two Bloch spheres.

    Q = 3 - S(ABC) + S(A) - max_{zA, zB} [G(zA) + F(zA, zB)]

with G = 1 - S(B|Pi^A) and F = 2 - S(C|Pi^AB). The maximization is a
deterministic hemisphere grid scan followed by a coordinate pattern search
on the four spherical angles.
"""

from dataclasses import dataclass, field

import numpy as np

from . import measure
from .measure import entropy_h
from .qmat import entropy_of_spectrum, eig_hermitian
from .states import ParamSet, build_state, require_valid

_CHUNK = 256
_N_STARTS = 4


@dataclass(frozen=True)
class OptimizerOptions:
    grid_theta: int = 64
    grid_phi: int = 32
    refine_tol: float = 1e-10
    max_refine_iters: int = 500
    weighting: str = "standard"

    def __post_init__(self):
        if self.grid_theta < 2 or self.grid_phi < 1 or self.max_refine_iters < 0:
            raise ValueError("grid sizes must be positive")
        if not self.refine_tol > 0:
            raise ValueError("refine_tol must be > 0")
        if self.weighting not in measure.WEIGHTINGS:
            raise ValueError(f"unknown weighting {self.weighting!r}")


@dataclass
class DiscordResult:
    q: float
    zA_opt: np.ndarray
    zB_opt: np.ndarray
    g_max: float
    f_max: float
    s_abc: float
    s_a: float
    method: str
    verify_delta: float | None = None
    case: str | None = None
    weighting: str = "standard"
    extra: dict = field(default_factory=dict)

    @property
    def verified(self):
        return None if self.verify_delta is None else self.verify_delta <= 1e-6

    def as_dict(self):
        return {
            "discord": self.q,
            "method": self.method,
            "case": self.case,
            "weighting": self.weighting,
            "zA": np.asarray(self.zA_opt).tolist(),
            "zB": np.asarray(self.zB_opt).tolist(),
            "G_max": self.g_max,
            "F_max": self.f_max,
            "S_ABC": self.s_abc,
            "S_A": self.s_a,
            "verify_delta": self.verify_delta,
            **self.extra,
        }


def sphere_point(theta, phi):
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def hemisphere_grid(n_theta, n_phi):
    """Angles and points of the upper-hemisphere grid, in lexicographic (theta, phi) order."""
    th = np.linspace(0.0, np.pi / 2, n_theta)
    ph = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(th, ph, indexing="ij")
    angles = np.stack([tt.ravel(), pp.ravel()], axis=-1)
    return angles, sphere_point(angles[:, 0], angles[:, 1])


def canonical(z):
    """Representative of {z, -z}: upper hemisphere, ties broken on x then y."""
    z = np.asarray(z, dtype=float)
    z = z / np.linalg.norm(z)
    for comp in z[::-1]:
        if abs(comp) > 1e-14:
            return z if comp > 0 else -z
    return z


def angular_distance(u, v):
    """Angle between two measurement axes (sign of either vector is irrelevant)."""
    c = abs(float(np.dot(canonical(u), canonical(v))))
    return float(np.arccos(min(1.0, c)))


def pattern_search(f, x0, step, tol, max_iters):
    """Maximize f by compass search with complete polling.

    ``f`` maps an (m, d) array of points to m values. Each iteration polls
    x +- step along every coordinate in one call, moves to the best improving
    point, and halves the step when none improves.
    """
    x = np.array(x0, dtype=float)
    d = len(x)
    fx = float(f(x[None, :])[0])
    dirs = np.concatenate([np.eye(d), -np.eye(d)])
    it = 0
    while step >= tol and it < max_iters:
        it += 1
        trials = x + step * dirs
        vals = f(trials)
        i = int(np.argmax(vals))
        if vals[i] > fx:
            x, fx = trials[i], float(vals[i])
        else:
            step *= 0.5
    return x, fx


def _pick_starts(values, angles_a, angles_b, nb, tol, sep):
    order = np.argsort(-values, kind="stable")
    best = values[order[0]]
    # lexicographically smallest grid index within tol of the max
    first = int(np.flatnonzero(values >= best - tol)[0])
    starts = [first]
    pts = [np.concatenate([angles_a[first // nb], angles_b[first % nb]])]
    for idx in order[: min(len(order), 4000)]:
        if len(starts) >= _N_STARTS:
            break
        cand = np.concatenate([angles_a[idx // nb], angles_b[idx % nb]])
        if all(np.max(np.abs(cand - q)) > sep for q in pts):
            starts.append(int(idx))
            pts.append(cand)
    return starts


def maximize_objective(p: ParamSet, opts: OptimizerOptions | None = None):
    """Return (zA, zB, max of G + F) over both Bloch spheres."""
    opts = opts or OptimizerOptions()
    require_valid(build_state(p), p)
    weighting = opts.weighting
    angles, pts = hemisphere_grid(opts.grid_theta, opts.grid_phi)
    n = len(pts)
    values = np.empty(n * n)
    for lo in range(0, n, _CHUNK):
        hi = min(n, lo + _CHUNK)
        block = measure.objective_table(p, pts[lo:hi], pts, weighting)
        values[lo * n : hi * n] = block.ravel()

    spacing = max(np.pi / 2 / (opts.grid_theta - 1), 2 * np.pi / opts.grid_phi)
    starts = _pick_starts(values, angles, angles, n, opts.refine_tol, 2.5 * spacing)

    def f(x):
        za = sphere_point(x[:, 0], x[:, 1])
        zb = sphere_point(x[:, 2], x[:, 3])
        return measure.objective_gf(p, za, zb, weighting)

    best_x, best_f = None, -np.inf
    for idx in starts:
        x0 = np.concatenate([angles[idx // n], angles[idx % n]])
        x, fx = pattern_search(f, x0, spacing, opts.refine_tol, opts.max_refine_iters)
        if fx > best_f + opts.refine_tol or best_x is None:
            best_x, best_f = x, fx
    za = canonical(sphere_point(best_x[0], best_x[1]))
    zb = canonical(sphere_point(best_x[2], best_x[3]))
    return za, zb, float(best_f)


def entropy_abc(p: ParamSet):
    return entropy_of_spectrum(eig_hermitian(build_state(p)))


def entropy_a(p: ParamSet):
    """S(A) = 1 - H(|a|): the reduced state of A has eigenvalues (1 +- |a|)/2."""
    return 1.0 - entropy_h(0.0, float(np.linalg.norm(p.a)))


def assemble(s_abc, s_a, gf):
    return 3.0 - s_abc + s_a - gf


def discord_numeric(p: ParamSet, opts: OptimizerOptions | None = None):
    """Discord of build_state(p) with the maximizing measurement found numerically."""
    opts = opts or OptimizerOptions()
    za, zb, gf = maximize_objective(p, opts)
    s_abc, s_a = entropy_abc(p), entropy_a(p)
    g = float(measure.objective_g(p, za))
    return DiscordResult(
        q=assemble(s_abc, s_a, gf),
        zA_opt=za,
        zB_opt=zb,
        g_max=g,
        f_max=gf - g,
        s_abc=s_abc,
        s_a=s_a,
        method="numeric",
        weighting=opts.weighting,
    )
