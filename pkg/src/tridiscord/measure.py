"""Measurement-conditional entropies.

Two independent routes compute the conditional entropies S(B|Pi^A) and
S(C|Pi^AB) after a projective measurement on A followed by one on B:

* the analytic route evaluates closed expressions in the entropy function
  ``H_eps(x)`` directly from the Pauli coefficients and Bloch vectors; it is
  vectorized over arrays of Bloch vectors so the optimizer can scan grids;
* the matrix route builds projectors, applies them to the 8x8 density matrix
  and diagonalizes the post-measurement states.

A projective qubit measurement is named by a unit Bloch vector z with
projectors Pi_j = (I + (-1)^j z.sigma) / 2.

``weighting`` selects how the C-branch entropies are combined. ``"standard"``
is the usual conditional entropy sum_jk p_jk S(rho_jk). ``"unnormalized"`` drops the
probability of the A outcome, sum_j sum_k p_(k|j) S(rho_jk); this is the
expression the worked examples were evaluated with (range [0, 2]).
"""

from dataclasses import dataclass

import numpy as np

from .qmat import (
    I2,
    PAULI,
    entropy_of_spectrum,
    eig_hermitian,
    kron,
    partial_trace,
    xlog2x,
)
from .states import ParamSet

BLOCH_TOL = 1e-12
LOG_ARG_TOL = 1e-12
ZERO_PROB = 1e-15
WEIGHTINGS = ("standard", "unnormalized")


def as_bloch(z, normalize=False):
    """Return z as a float array of shape (..., 3) with unit rows."""
    z = np.asarray(z, dtype=float)
    if z.shape[-1] != 3:
        raise ValueError(f"Bloch vectors need 3 components, got shape {z.shape}")
    norm = np.linalg.norm(z, axis=-1)
    if normalize:
        if np.any(norm == 0):
            raise ValueError("cannot normalize a zero vector")
        return z / norm[..., None]
    if np.any(np.abs(norm**2 - 1.0) > BLOCH_TOL):
        raise ValueError(f"Bloch vector not of unit length (|z| = {norm})")
    return z


def bloch_from_unitary(t, y1, y2, y3):
    """Bloch vector of the measurement {V|j><j|V^dag} for V = tI + i sum y_k sigma_k."""
    return np.array(
        [
            2 * (-t * y2 + y1 * y3),
            2 * (t * y1 + y2 * y3),
            t * t + y3 * y3 - y1 * y1 - y2 * y2,
        ]
    )


def projectors(z):
    z = as_bloch(z)
    zs = sum(z[i] * PAULI[i] for i in range(3))
    return 0.5 * (I2 + zs), 0.5 * (I2 - zs)


def _check_weighting(weighting):
    if weighting not in WEIGHTINGS:
        raise ValueError(f"weighting must be one of {WEIGHTINGS}, got {weighting!r}")


def entropy_h(eps, x):
    """H_eps(x) = [(1+eps+x) log2(1+eps+x) + (1+eps-x) log2(1+eps-x)] / 2.

    Broadcasts over arrays. Log arguments down to -1e-12 are treated as 0.
    """
    eps = np.asarray(eps, dtype=float)
    x = np.asarray(x, dtype=float)
    lo = 1 + eps - np.abs(x)
    if np.any(lo < -LOG_ARG_TOL):
        raise ValueError(f"entropy_h log argument negative: min {np.min(lo):.3e}")
    out = 0.5 * (xlog2x(1 + eps + x) + xlog2x(1 + eps - x))
    return out if out.ndim else float(out)


def _dot(u, z):
    return np.einsum("i,...i->...", u, z)


def cond_entropy_b_given_a(p: ParamSet, zA):
    """S(B|Pi^A) in bits; broadcasts over zA of shape (..., 3)."""
    zA = as_bloch(zA)
    eps = _dot(p.a, zA)
    rz = p.r * zA
    amp_plus = np.linalg.norm(p.b + rz, axis=-1)
    amp_minus = np.linalg.norm(p.b - rz, axis=-1)
    return 1.0 - 0.5 * (
        entropy_h(eps, amp_plus) + entropy_h(-eps, amp_minus) - 2 * entropy_h(0.0, eps)
    )


def branch_parameters(p: ParamSet, zA, zB):
    """Return (alpha, beta, gamma, delta), each of shape (2, ...) over k = 0, 1.

    1 + alpha_k and 1 + beta_k are the (doubled) probabilities of outcome k
    given A outcome 0 and 1; gamma_k and delta_k are the Bloch lengths of the
    corresponding post-measurement states of C.
    """
    zA = as_bloch(zA)
    zB = as_bloch(zB)
    eps = _dot(p.a, zA)
    bz = _dot(p.b, zB)
    rzz = np.einsum("i,...i,...i->...", p.r, zA, zB)
    u = p.c + p.s * zA
    w = p.T * zA * zB
    vz = p.v * zB
    alpha = np.stack([eps + bz + rzz, eps - bz - rzz])
    beta = np.stack([-eps + bz - rzz, -eps - bz + rzz])
    gamma = np.stack(
        [np.linalg.norm(u + vz + w, axis=-1), np.linalg.norm(u - vz - w, axis=-1)]
    )
    delta = np.stack(
        [
            np.linalg.norm(-p.c + p.s * zA + w - vz, axis=-1),
            np.linalg.norm(-p.c + p.s * zA - w + vz, axis=-1),
        ]
    )
    return alpha, beta, gamma, delta


def _c_entropy_from_branches(eps, alpha, beta, gamma, delta, weighting):
    _check_weighting(weighting)
    bracket_0 = (
        entropy_h(alpha[0], gamma[0])
        + entropy_h(alpha[1], gamma[1])
        - 2 * entropy_h(eps, 0.5 * (alpha[0] - alpha[1]))
    )
    bracket_1 = (
        entropy_h(beta[0], delta[0])
        + entropy_h(beta[1], delta[1])
        - 2 * entropy_h(-eps, 0.5 * (beta[0] - beta[1]))
    )
    if weighting == "standard":
        return 1.0 - 0.25 * (bracket_0 + bracket_1)
    # each A outcome contributes sum_k p(k|j) S_jk; a weight-zero outcome contributes 0
    pos0 = 1 + eps > ZERO_PROB
    pos1 = 1 - eps > ZERO_PROB
    with np.errstate(divide="ignore", invalid="ignore"):
        term0 = np.where(pos0, 1.0 - bracket_0 / (2 * np.where(pos0, 1 + eps, 1.0)), 0.0)
        term1 = np.where(pos1, 1.0 - bracket_1 / (2 * np.where(pos1, 1 - eps, 1.0)), 0.0)
    out = term0 + term1
    return out if np.ndim(out) else float(out)


def cond_entropy_c_given_ab(p: ParamSet, zA, zB, weighting="standard"):
    """S(C|Pi^AB) in bits for a B measurement shared by both A outcomes."""
    zA = as_bloch(zA)
    eps = _dot(p.a, zA)
    alpha, beta, gamma, delta = branch_parameters(p, zA, zB)
    return _c_entropy_from_branches(eps, alpha, beta, gamma, delta, weighting)


def objective_g(p: ParamSet, zA):
    return 1.0 - cond_entropy_b_given_a(p, zA)


def objective_f(p: ParamSet, zA, zB, weighting="standard"):
    return 2.0 - cond_entropy_c_given_ab(p, zA, zB, weighting)


def objective_gf(p: ParamSet, zA, zB, weighting="standard"):
    """G + F = 3 - S(B|Pi^A) - S(C|Pi^AB)."""
    return (
        3.0
        - cond_entropy_b_given_a(p, zA)
        - cond_entropy_c_given_ab(p, zA, zB, weighting)
    )


def objective_table(p: ParamSet, zA, zB, weighting="standard"):
    """G + F on the outer product of zA (NA, 3) and zB (NB, 3); returns (NA, NB).

    All zB-dependent quantities reduce to small matrix products, so a full
    grid costs a handful of GEMMs plus the logarithms.
    """
    _check_weighting(weighting)
    zA = as_bloch(zA)
    zB = as_bloch(zB)
    g = (1.0 - cond_entropy_b_given_a(p, zA))[:, None]
    eps = (zA @ p.a)[:, None]
    bz = (zB @ p.b)[None, :]
    rzz = (zA * p.r) @ zB.T
    u = p.c + p.s * zA  # (NA, 3), C vector for A outcome 0 before B
    u1 = -p.c + p.s * zA
    w = p.T * zA  # T o zA, pairs with zB
    vz = zB * p.v  # (NB, 3)
    zb2 = zB**2

    uu = np.sum(u * u, axis=1)[:, None]
    u1u1 = np.sum(u1 * u1, axis=1)[:, None]
    ww = (w * w) @ zb2.T
    vv = np.sum(vz * vz, axis=1)[None, :]
    wv = w @ (zB * vz).T  # sum_i T_i zA_i zB_i * v_i zB_i
    uw = (u * w) @ zB.T
    uv = u @ vz.T
    u1w = (u1 * w) @ zB.T
    u1v = u1 @ vz.T

    def safe_sqrt(x):
        return np.sqrt(np.maximum(x, 0.0))

    # gamma_k = |u + (-1)^k (v o zB + w o zB)|, delta_k = |u1 + (-1)^k (w o zB - v o zB)|
    cross_g = ww + vv + 2 * wv
    lin_g = 2 * (uw + uv)
    cross_d = ww + vv - 2 * wv
    lin_d = 2 * (u1w - u1v)
    gamma = np.stack([safe_sqrt(uu + cross_g + lin_g), safe_sqrt(uu + cross_g - lin_g)])
    delta = np.stack([safe_sqrt(u1u1 + cross_d + lin_d), safe_sqrt(u1u1 + cross_d - lin_d)])
    alpha = np.stack([eps + bz + rzz, eps - bz - rzz])
    beta = np.stack([-eps + bz - rzz, -eps - bz + rzz])
    eps_full = np.broadcast_to(eps, rzz.shape)
    s_c = _c_entropy_from_branches(eps_full, alpha, beta, gamma, delta, weighting)
    return g + 2.0 - s_c


# --- matrix route ---------------------------------------------------------


@dataclass(frozen=True)
class MeasurementScheme:
    """Bloch vector for A plus a B vector shared by both A outcomes, or one per outcome."""

    zA: np.ndarray
    zB_shared: np.ndarray | None = None
    zB_given_j: tuple | None = None

    def __post_init__(self):
        if (self.zB_shared is None) == (self.zB_given_j is None):
            raise ValueError("give exactly one of zB_shared and zB_given_j")
        object.__setattr__(self, "zA", as_bloch(self.zA))
        if self.zB_shared is not None:
            object.__setattr__(self, "zB_shared", as_bloch(self.zB_shared))
        else:
            pair = tuple(as_bloch(z) for z in self.zB_given_j)
            if len(pair) != 2:
                raise ValueError("zB_given_j needs one vector per A outcome")
            object.__setattr__(self, "zB_given_j", pair)

    def zB(self, j):
        return self.zB_shared if self.zB_shared is not None else self.zB_given_j[j]


@dataclass(frozen=True)
class BranchEnsemble:
    probabilities: np.ndarray
    states: list


def _ensemble(blocks, dim):
    probs, states = [], []
    for blk in blocks:
        pr = float(np.trace(blk).real)
        if pr > ZERO_PROB:
            probs.append(pr)
            states.append(blk / pr)
        else:
            probs.append(0.0)
            states.append(np.eye(dim, dtype=complex) / dim)
    return BranchEnsemble(np.array(probs), states)


def measured_branches(rho, scheme: MeasurementScheme):
    """Post-measurement ensembles: BC after measuring A, and C after measuring A then B.

    Returns ``(bc, c)``; ``c`` is ordered (j, k) = (0,0), (0,1), (1,0), (1,1).
    """
    rho = np.asarray(rho, dtype=complex)
    pa = projectors(scheme.zA)
    bc_blocks, c_blocks = [], []
    for j in range(2):
        op = kron(pa[j], I2, I2)
        bc_blocks.append(partial_trace(op @ rho @ op, "BC"))
        pb = projectors(scheme.zB(j))
        for k in range(2):
            op = kron(pa[j], pb[k], I2)
            c_blocks.append(partial_trace(op @ rho @ op, "C"))
    return _ensemble(bc_blocks, 4), _ensemble(c_blocks, 2)


def cond_entropies_matrix(rho, scheme: MeasurementScheme, weighting="standard"):
    """(S(B|Pi^A), S(C|Pi^AB)) computed from explicit post-measurement matrices."""
    _check_weighting(weighting)
    bc, c = measured_branches(rho, scheme)
    s_b = sum(
        pj * entropy_of_spectrum(eig_hermitian(partial_trace(st, "A")))
        for pj, st in zip(bc.probabilities, bc.states)
        if pj > 0
    )
    s_c = 0.0
    for idx, (pjk, st) in enumerate(zip(c.probabilities, c.states)):
        if pjk == 0:
            continue
        weight = pjk
        if weighting == "unnormalized":
            weight = pjk / bc.probabilities[idx // 2]
        s_c += weight * entropy_of_spectrum(eig_hermitian(st))
    return float(s_b), float(s_c)
