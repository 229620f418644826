"""Closed-form discord for special parameter families and the Werner-GHZ state.

Each case names a region of parameter space and a measurement (zA, zB) at
which G + F is claimed to be maximal. For every case two values are computed:

``q``
    The discord assembled from G + F evaluated in closed form at the case's
    measurement, with degenerate branch parameters written out explicitly.
    Known misprints in the reference expressions are corrected here.
``uncorrected_q``
    The reference expression evaluated as written (NaN when one of its
    logarithms has a negative argument).

Neither value is trusted on its own: ``verify=True`` compares ``q`` against
the numerical maximization.
"""

import numpy as np

from .discord import (
    DiscordResult,
    OptimizerOptions,
    assemble,
    discord_numeric,
    entropy_a,
    entropy_abc,
)
from .measure import WEIGHTINGS
from .qmat import xlog2x
from .states import ParamSet, build_state, require_valid

CASE_TOL = 1e-12
VERIFY_TOL = 1e-6
CASES = ("T2.1", "T2.2a", "T2.2b", "T3.1", "T3.2", "T3.3", "T3.4", "T3.5", "T3.6")


def H(x, eps=0.0):
    """Entropy function H_eps(x); NaN if a logarithm argument is negative."""
    lo = 1 + eps - abs(x)
    if lo < -1e-12:
        return float("nan")
    return 0.5 * float(xlog2x(1 + eps + x) + xlog2x(1 + eps - x))


# --- case premises --------------------------------------------------------


def _zero(*vecs):
    return all(np.all(np.abs(v) <= CASE_TOL) for v in vecs)


def _equal(v):
    return np.ptp(v) <= CASE_TOL


def _family_31(p):
    return _zero(p.a[:2], p.b[:2], p.v)


def _t2_1(p):
    a3, b3 = p.a[2], p.b[2]
    r1, r2, r3 = p.r
    rmax = max(abs(r1), abs(r2))
    return (
        _family_31(p)
        and a3 * b3 * r3 <= CASE_TOL
        and r3**2 - rmax**2 >= a3 * b3 * r3 - CASE_TOL
        and (b3 + r3) * (p.c[2] + p.s[2]) <= CASE_TOL
    )


def _t2_2(p, axis):
    rabs = np.abs(p.r)
    return (
        _family_31(p)
        and abs(p.b[2]) <= CASE_TOL
        and p.c[0] * p.s[0] <= CASE_TOL
        and p.s[0] <= abs(p.c[0]) + CASE_TOL
        and rabs[axis] >= rabs.max() - CASE_TOL
    )


PREMISES = {
    "T2.1": _t2_1,
    "T2.2a": lambda p: _t2_2(p, 0),
    "T2.2b": lambda p: _t2_2(p, 1),
    "T3.1": lambda p: _zero(p.a, p.v, p.T) and _equal(p.r),
    "T3.2": lambda p: _zero(p.b, p.v, p.T) and _equal(p.r),
    "T3.3": lambda p: _zero(p.r, p.T, p.v),
    "T3.4": lambda p: _zero(p.a, p.c, p.s, p.T) and _equal(p.r) and _equal(p.v),
    "T3.5": lambda p: _zero(p.r, p.T, p.s, p.c) and _equal(p.v),
    "T3.6": lambda p: _zero(p.b, p.s, p.c, p.T) and _equal(p.r) and _equal(p.v),
}


def premises_hold(p: ParamSet, case):
    return bool(PREMISES[case](p))


def classify_case(p: ParamSet):
    """First case whose premises hold, or None."""
    for case in CASES:
        if PREMISES[case](p):
            return case
    return None


# --- corrected closed forms ------------------------------------------------


def _unit(v):
    n = np.linalg.norm(v)
    return v / n if n > 0 else np.array([0.0, 0.0, 1.0])


def case_measurement(p: ParamSet, case):
    """The (zA, zB) at which the case places the maximum of G + F."""
    e = np.eye(3)
    a_hat, b_hat = _unit(p.a), _unit(p.b)
    return {
        "T2.1": (e[2], e[2]),
        "T2.2a": (e[0], e[0]),
        "T2.2b": (e[1], e[1]),
        "T3.1": (b_hat, b_hat),
        "T3.2": (a_hat, a_hat),
        "T3.3": (a_hat, b_hat),
        "T3.4": (b_hat, b_hat),
        "T3.5": (a_hat, b_hat),
        "T3.6": (a_hat, a_hat),
    }[case]


def _gf(eps, amp_plus, amp_minus, alpha, beta, gamma, delta, weighting):
    """G + F from the degenerate branch parameters at one measurement."""
    g = 0.5 * (H(amp_plus, eps) + H(amp_minus, -eps) - 2 * H(eps))
    da = 0.5 * (alpha[0] - alpha[1])
    db = 0.5 * (beta[0] - beta[1])
    br0 = H(gamma[0], alpha[0]) + H(gamma[1], alpha[1]) - 2 * H(da, eps)
    br1 = H(delta[0], beta[0]) + H(delta[1], beta[1]) - 2 * H(db, -eps)
    if weighting == "standard":
        f = 1.0 + 0.25 * (br0 + br1)
    else:
        f = 0.0
        if 1 + eps > 1e-15:
            f += br0 / (2 * (1 + eps))
        if 1 - eps > 1e-15:
            f += br1 / (2 * (1 - eps))
    return g, f


def _axis_case(p, i, weighting):
    # zA = zB = e_i: every sum over Bloch components collapses to component i
    a, b, c, r, s, t = p.a[i], p.b[i], p.c, p.r[i], p.s[i], p.T[i]
    bb = float(p.b @ p.b)
    cc = float(c @ c)
    ci = c[i]
    amp_plus = np.sqrt(max(bb + r * r + 2 * b * r, 0.0))
    amp_minus = np.sqrt(max(bb + r * r - 2 * b * r, 0.0))
    alpha = [a + (b + r), a - (b + r)]
    beta = [-a + (b - r), -a - (b - r)]
    gamma = [
        np.sqrt(max(cc + s * s + t * t + 2 * (ci * s + sg * (ci * t + s * t)), 0.0))
        for sg in (1, -1)
    ]
    delta = [
        np.sqrt(max(cc + s * s + t * t + 2 * (-ci * s + sg * (s * t - ci * t)), 0.0))
        for sg in (1, -1)
    ]
    return _gf(a, amp_plus, amp_minus, alpha, beta, gamma, delta, weighting)


def _t3_case(p, case, weighting):
    a_norm = float(np.linalg.norm(p.a))
    b_norm = float(np.linalg.norm(p.b))
    a_hat, b_hat = _unit(p.a), _unit(p.b)
    r = p.r[0]
    v = abs(p.v[0])
    if case in ("T3.1", "T3.4"):
        eps = 0.0
        amp = (abs(b_norm + r), abs(b_norm - r))
        alpha = [b_norm + r, -(b_norm + r)]
        beta = [b_norm - r, -(b_norm - r)]
    elif case in ("T3.2", "T3.6"):
        eps = a_norm
        amp = (abs(r), abs(r))
        alpha = [a_norm + r, a_norm - r]
        beta = [-a_norm - r, -a_norm + r]
    else:  # T3.3, T3.5
        eps = a_norm
        amp = (b_norm, b_norm)
        alpha = [a_norm + b_norm, a_norm - b_norm]
        beta = [-a_norm + b_norm, -a_norm - b_norm]
    if case in ("T3.4", "T3.5", "T3.6"):
        gamma = delta = [v, v]
    else:
        axis = b_hat if case == "T3.1" else a_hat
        big = float(np.linalg.norm(p.c + p.s * axis))
        big_minus = float(np.linalg.norm(-p.c + p.s * axis))
        gamma, delta = [big, big], [big_minus, big_minus]
    return _gf(eps, *amp, alpha, beta, gamma, delta, weighting)


def closed_gf(p: ParamSet, case, weighting="standard"):
    """(G, F) in closed form at the case's measurement."""
    if case == "T2.1":
        return _axis_case(p, 2, weighting)
    if case == "T2.2a":
        return _axis_case(p, 0, weighting)
    if case == "T2.2b":
        return _axis_case(p, 1, weighting)
    return _t3_case(p, case, weighting)


# --- uncorrected reference expressions ------------------------------------


def _sum_lam_log_lam(p):
    return -entropy_abc(p)


def uncorrected_q(p: ParamSet, case):
    """The uncorrected closed form for ``case``, misprints included."""
    lam = _sum_lam_log_lam(p)
    if case.startswith("T2"):
        a3 = p.a[2]
        neg_s_a = 0.5 * float(xlog2x(1 + a3) + xlog2x(1 - a3)) - 1.0
        g, f = _uncorrected_t2(p, case)
        return 3 + lam - neg_s_a - (g + f)
    a = float(np.linalg.norm(p.a))
    b = float(np.linalg.norm(p.b))
    r = p.r[0]
    v = p.v[0]
    if case == "T3.1":
        big = float(np.linalg.norm(p.s * _unit(p.b) + p.c))
        return (
            lam + 4 + H(r, b) + H(r, -b) - H(abs(b + r))
            - 0.5 * (H(r, b + big) + H(r, b - big) + H(r, -b + big) + H(r, -b - big))
        )
    big_a = float(np.linalg.norm(p.s * _unit(p.a) + p.c))
    if case == "T3.2":
        return (
            lam + 3 - H(a * a) - 0.5 * (H(r, a) + H(r, -a) - 2 * H(a))
            - (H(r, a + big_a) + H(r, a - big_a) - 2 * H(r, a)) / (2 * (1 + a))
            - (H(r, -a + big_a) + H(r, -a - big_a) - 2 * H(r, -a)) / (2 * (1 - a))
        )
    if case == "T3.3":
        return (
            lam + 3 - H(a * a) - 0.5 * (H(a, b) + H(a, -b) - 2 * H(a))
            - (H(b, a + big_a) + H(b, a - big_a) - 2 * H(b, a)) / (2 * (1 + a))
            - (H(b, b + big_a) + H(b, -a - big_a) - 2 * H(b, -a)) / (2 * (1 - a))
        )
    if case == "T3.4":
        return (
            lam + H(r, b) + H(r, -b) + 4 - H(abs(b + r))
            - 0.5 * (H(r, b + v) + H(r, b - v) + H(r, -b + v) * H(r, -b - v))
        )
    if case == "T3.5":
        return (
            lam + 3 - H(a * a) - 0.5 * (H(a, b) + H(a, -b) - 2 * H(a))
            - (H(b, a + v) + H(b, a - v) - 2 * H(b, a)) / (2 * (1 + a))
            - (H(b, -a + v) + H(b, -a - v) - 2 * H(b, -a)) / (2 * (1 - a))
        )
    if case == "T3.6":
        return (
            lam + 3 - H(a * a) - 0.5 * (H(r, a) + H(r, -a) - 2 * H(a))
            - (H(r, a + v) + H(r, a - v) - 2 * H(r, a)) / (2 * (1 + a))
            - (H(r, -a + v) + H(r, -a - v) - 2 * H(r, -a)) / (2 * (1 - a))
        )
    raise ValueError(f"unknown case {case!r}")


def _uncorrected_t2(p, case):
    a3, b3 = p.a[2], p.b[2]
    c, r, s, t = p.c, p.r, p.s, p.T
    cc = float(c @ c)
    if case == "T2.1":
        g = 0.5 * (H(abs(b3 + r[2]), a3) + H(abs(b3 - r[2]), -a3) - 2 * H(a3))
        gam, dlt = [], []
        for sg in (1, -1):
            gam.append(np.sqrt(cc + s[2] ** 2 + t[2] ** 2
                               + 2 * (c[2] * s[2] + sg * (c[2] * t[2] + s[2] * t[2]))))
            dlt.append(np.sqrt(cc + s[2] ** 2 + t[2] ** 2
                               + 2 * (-c[2] * s[2] + sg * (s[2] * t[2] - c[2] * t[2]))))
        al = [a3 + (b3 + r[2]), a3 - (b3 + r[2])]
        be = [-a3 + (b3 - r[2]), -a3 - (b3 - r[2])]
        f = (H(gam[0], al[0]) + H(gam[1], al[1]) - 2 * H(b3 + r[2], a3)) / (2 * (1 + a3)) + (
            H(dlt[0], be[0]) + H(dlt[1], be[1]) - 2 * H(b3 - r[2], -a3)
        ) / (2 * (1 - a3))
        return g, f
    i = 0 if case == "T2.2a" else 1
    ri = r[i]
    g = 0.5 * (H(ri, a3) + H(ri, -a3) - 2 * H(a3))
    gam, dlt = [], []
    for sg in (1, -1):
        if i == 0:
            gsq = cc + s[0] ** 2 + t[0] ** 2 + 2 * (c[0] * s[0] + sg * (c[0] * t[0] + s[0] * t[0]))
            dsq = cc + s[0] ** 2 + t[0] ** 2 + 2 * (-c[0] * s[0] + sg * (c[0] * t[0] - s[0] * t[0]))
        else:
            # no brackets around the (-1)^k factor
            gsq = cc + s[1] ** 2 + t[1] ** 2 + 2 * (c[1] * s[1] + sg * c[1] * t[1] + s[1] * t[1])
            dsq = cc + s[1] ** 2 + t[1] ** 2 + 2 * (-c[1] * s[1] + sg * c[1] * t[1] - s[1] * t[1])
        gam.append(np.sqrt(gsq) if gsq >= 0 else float("nan"))
        dlt.append(np.sqrt(dsq) if dsq >= 0 else float("nan"))
    f = 0.5 * (H(gam[0], ri) + H(gam[1], -ri) + H(dlt[0], ri) + H(dlt[1], -ri) - 4 * H(ri))
    return g, f


# --- entry points -----------------------------------------------------------


def discord_closed_form(
    p: ParamSet,
    case=None,
    weighting="standard",
    verify=False,
    opts: OptimizerOptions | None = None,
):
    """Closed-form discord for a matching case, or None if no case applies.

    Passing ``case`` evaluates that case's expression even when its premises
    fail; ``extra["premises_hold"]`` records whether they did.
    """
    if weighting not in WEIGHTINGS:
        raise ValueError(f"unknown weighting {weighting!r}")
    if case is None:
        case = classify_case(p)
        if case is None:
            return None
    elif case not in CASES:
        raise ValueError(f"unknown case {case!r}; expected one of {CASES}")
    require_valid(build_state(p), p)
    g, f = closed_gf(p, case, weighting)
    s_abc, s_a = entropy_abc(p), entropy_a(p)
    za, zb = case_measurement(p, case)
    res = DiscordResult(
        q=assemble(s_abc, s_a, g + f),
        zA_opt=za,
        zB_opt=zb,
        g_max=g,
        f_max=f,
        s_abc=s_abc,
        s_a=s_a,
        method=f"closed:{case}",
        case=case,
        weighting=weighting,
        extra={"premises_hold": premises_hold(p, case), "uncorrected_q": uncorrected_q(p, case)},
    )
    if verify:
        opts = opts or OptimizerOptions(weighting=weighting)
        if opts.weighting != weighting:
            raise ValueError("optimizer weighting differs from closed-form weighting")
        num = discord_numeric(p, opts)
        res.verify_delta = abs(res.q - num.q)
        res.extra["numeric_q"] = num.q
        res.extra["verified"] = res.verify_delta <= VERIFY_TOL
    return res


def discord_werner_ghz(c):
    """Discord of c|GHZ><GHZ| + (1 - c) I/8 in closed form."""
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"Werner-GHZ weight c={c} outside [0, 1]")
    return float(
        xlog2x(1 - c) / 8 + xlog2x(1 + 7 * c) / 8 - xlog2x(1 + 3 * c) / 4
    )
