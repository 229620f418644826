"""Brute-force discord for arbitrary three-qubit (and two-qubit) density matrices.

Only raw projectors, partial traces and 2x2 spectra are used; nothing here
touches the Pauli-coefficient formulas, so agreement with them is evidence
rather than a tautology. The search is a hemisphere grid over every Bloch
vector followed by Nelder-Mead polishing of the best grid points.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .discord import DiscordResult
from .qmat import (
    I2,
    PAULI,
    InvalidStateError,
    check_hermitian,
    eig_hermitian,
    eigvalsh_2x2,
    entropy_of_spectrum,
    partial_trace,
    xlog2x,
)

_CHUNK = 48
_N_STARTS = 3
_NM_OPTIONS = {"xatol": 1e-11, "fatol": 1e-15, "maxiter": 4000, "maxfev": 8000}


@dataclass(frozen=True)
class OracleOptions:
    grid_theta: int = 48
    grid_phi: int = 24
    conditional_b: bool = False
    refine: bool = True
    weighting: str = "standard"

    def __post_init__(self):
        if self.grid_theta < 2 or self.grid_phi < 1:
            raise ValueError("grid sizes must be positive")
        if self.weighting not in ("standard", "unnormalized"):
            raise ValueError(f"unknown weighting {self.weighting!r}")


def _points(theta, phi):
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def _grid(n_theta, n_phi):
    th = np.linspace(0.0, np.pi / 2, n_theta)
    ph = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(th, ph, indexing="ij")
    ang = np.stack([tt.ravel(), pp.ravel()], axis=-1)
    return ang, _points(ang[:, 0], ang[:, 1])


def _projector_stack(z):
    """(N, 2, 2, 2) array: projector j = 0, 1 for every Bloch vector."""
    zs = np.einsum("ni,ijk->njk", z, np.stack(PAULI))
    return 0.5 * np.stack([I2 + zs, I2 - zs], axis=1)


def _weighted_entropy(blocks):
    """p * S(block / p) for unnormalized 2x2 blocks, p = trace."""
    lam = np.clip(eigvalsh_2x2(blocks), 0.0, None)
    p = lam.sum(axis=-1)
    return xlog2x(p) - xlog2x(lam).sum(axis=-1), p


def _valid(rho, dim):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} density matrix, got {rho.shape}")
    check_hermitian(rho)
    w = eig_hermitian(rho)
    if w[0] < -1e-10 or abs(np.trace(rho).real - 1) > 1e-12:
        raise InvalidStateError(float(w[0]))
    return rho


class _Tripartite:
    def __init__(self, rho, weighting):
        self.tensor = rho.reshape([2] * 6)
        self.weighting = weighting

    def after_a(self, za):
        """Unnormalized BC blocks (N, j, b, c, b', c') and the B-conditional entropy."""
        pa = _projector_stack(za)
        sig = np.einsum("njyx,xbcyde->njbcde", pa, self.tensor)
        b_red = np.einsum("njbcdc->njbd", sig)
        hb, pj = _weighted_entropy(b_red)
        return sig, hb.sum(axis=1), pj

    def c_terms(self, sig, pj, zb):
        """Per-A-outcome C entropies, shape (NA, 2, NB)."""
        pb = _projector_stack(zb)
        na, nb = sig.shape[0], pb.shape[0]
        # contract the B indices as one GEMM: (NB*2, yx) @ (yx, NA*2*c*d)
        lhs = pb.reshape(nb * 2, 4)
        rhs = sig.transpose(4, 2, 0, 1, 3, 5).reshape(4, na * 8)
        blocks = (lhs @ rhs).reshape(nb, 2, na, 2, 2, 2)
        hc, _ = _weighted_entropy(blocks)
        terms = hc.sum(axis=1).transpose(1, 2, 0)
        if self.weighting == "unnormalized":
            with np.errstate(divide="ignore", invalid="ignore"):
                terms = np.where(pj[..., None] > 1e-15, terms / pj[..., None], 0.0)
        return terms

    def total(self, za, zb0, zb1=None):
        sig, hb, pj = self.after_a(za[None])
        t0 = self.c_terms(sig, pj, zb0[None])[0, 0, 0]
        zb1 = zb0 if zb1 is None else zb1
        t1 = self.c_terms(sig, pj, zb1[None])[0, 1, 0]
        return float(hb[0]), float(t0 + t1)


def _angles_to_vectors(x):
    return [_points(x[i], x[i + 1]) for i in range(0, len(x), 2)]


def _nelder_mead(f, x0):
    res = minimize(f, x0, method="Nelder-Mead", options=_NM_OPTIONS)
    return res.x, float(res.fun)


def _distinct_best(values, n_best, key):
    order = np.argsort(values.ravel(), kind="stable")
    chosen, keys = [], []
    for idx in order[:2000]:
        k = key(idx)
        if all(np.max(np.abs(k - q)) > 0.2 for q in keys):
            chosen.append(int(idx))
            keys.append(k)
        if len(chosen) >= n_best:
            break
    return chosen


def oracle_discord(rho, opts: OracleOptions | None = None):
    """Tripartite discord min[S(B|Pi^A) + S(C|Pi^AB)] - S(ABC) + S(A) by brute force."""
    opts = opts or OracleOptions()
    rho = _valid(rho, 8)
    s_abc = entropy_of_spectrum(eig_hermitian(rho))
    s_a = entropy_of_spectrum(eig_hermitian(partial_trace(rho, "A")))
    model = _Tripartite(rho, opts.weighting)
    ang, pts = _grid(opts.grid_theta, opts.grid_phi)
    n = len(pts)

    hb_all = np.empty(n)
    if opts.conditional_b:
        best_c = np.empty((n, 2))
        arg_c = np.empty((n, 2), dtype=int)
    else:
        table = np.empty((n, n))
    for lo in range(0, n, _CHUNK):
        hi = min(n, lo + _CHUNK)
        sig, hb, pj = model.after_a(pts[lo:hi])
        hb_all[lo:hi] = hb
        terms = model.c_terms(sig, pj, pts)
        if opts.conditional_b:
            arg_c[lo:hi] = np.argmin(terms, axis=-1)
            best_c[lo:hi] = np.min(terms, axis=-1)
        else:
            table[lo:hi] = hb[:, None] + terms.sum(axis=1)

    if opts.conditional_b:
        totals = hb_all + best_c.sum(axis=1)
        starts = _distinct_best(totals, _N_STARTS, lambda i: ang[i])
        cands = [np.concatenate([ang[i], ang[arg_c[i, 0]], ang[arg_c[i, 1]]]) for i in starts]
        grid_vals = [totals[i] for i in starts]
    else:
        starts = _distinct_best(table, _N_STARTS, lambda i: np.concatenate([ang[i // n], ang[i % n]]))
        cands = [np.concatenate([ang[i // n], ang[i % n]]) for i in starts]
        grid_vals = [table.ravel()[i] for i in starts]

    def objective(x):
        zs = _angles_to_vectors(x)
        hb, hc = model.total(*zs)
        return hb + hc

    best_x, best_f = cands[0], grid_vals[0]
    for x0, f0 in zip(cands, grid_vals):
        x, fx = (_nelder_mead(objective, x0) if opts.refine else (x0, f0))
        if fx > f0:
            x, fx = x0, f0
        if fx < best_f:
            best_x, best_f = x, fx
    zs = _angles_to_vectors(best_x)
    s_b, s_c = model.total(*zs)
    extra = {"S_B_given_A": s_b, "S_C_given_AB": s_c}
    if opts.conditional_b:
        extra["zB_given_j"] = [zs[1].tolist(), zs[2].tolist()]
    return DiscordResult(
        q=s_b + s_c - (s_abc - s_a),
        zA_opt=zs[0],
        zB_opt=zs[1],
        g_max=1.0 - s_b,
        f_max=2.0 - s_c,
        s_abc=s_abc,
        s_a=s_a,
        method="oracle",
        weighting=opts.weighting,
        extra=extra,
    )


def bipartite_discord(rho4, opts: OracleOptions | None = None):
    """Two-qubit discord with a projective measurement on the first qubit."""
    opts = opts or OracleOptions()
    rho4 = _valid(rho4, 4)
    tensor = rho4.reshape(2, 2, 2, 2)
    s_ab = entropy_of_spectrum(eig_hermitian(rho4))
    s_first = entropy_of_spectrum(eig_hermitian(partial_trace(rho4, [0])))
    ang, pts = _grid(opts.grid_theta, opts.grid_phi)

    def cond(z):
        pa = _projector_stack(z)
        blocks = np.einsum("njyx,xcyd->njcd", pa, tensor)
        h, _ = _weighted_entropy(blocks)
        return h.sum(axis=1)

    vals = cond(pts)
    starts = _distinct_best(vals, _N_STARTS, lambda i: ang[i])
    best = float(vals[starts[0]])
    if opts.refine:
        for i in starts:
            _, fx = _nelder_mead(lambda x: float(cond(_points(x[0], x[1])[None])[0]), ang[i])
            best = min(best, fx)
    return best - (s_ab - s_first)
