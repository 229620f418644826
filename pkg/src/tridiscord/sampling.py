"""Random physical parameter sets, optionally restricted to one closed-form case."""

import numpy as np

from .closed_form import PREMISES
from .qmat import eig_hermitian
from .states import ParamSet, build_state

MAX_TRIES = 10_000


def is_physical(p: ParamSet, margin=0.0):
    return eig_hermitian(build_state(p))[0] >= margin


def _draw(rng, case, scale):
    u = lambda n=3: rng.uniform(-scale, scale, n)  # noqa: E731
    one = lambda: float(rng.uniform(-scale, scale))  # noqa: E731
    if case == "family31":
        return ParamSet(a=[0, 0, one()], b=[0, 0, one()], c=u(), r=u(), s=u(), T=u())
    if case == "general":
        return ParamSet(**{k: u() for k in ("a", "b", "c", "r", "s", "v", "T")})
    if case == "T2.1":
        a3, b3 = one(), one()
        r = u()
        c, s = u(), u()
        # enforce the sign conditions by flipping signs where that is free
        if a3 * b3 * r[2] > 0:
            r[2] = -r[2]
        if (b3 + r[2]) * (c[2] + s[2]) > 0:
            c[2], s[2] = -c[2], -s[2]
        return ParamSet(a=[0, 0, a3], b=[0, 0, b3], c=c, r=r, s=s, T=u())
    if case in ("T2.2a", "T2.2b"):
        axis = 0 if case == "T2.2a" else 1
        r = u()
        big = int(np.argmax(np.abs(r)))
        r[[axis, big]] = r[[big, axis]]
        c, s = u(), u()
        if c[0] * s[0] > 0:
            s[0] = -s[0]
        if s[0] > abs(c[0]):
            s[0] = -s[0]
        return ParamSet(a=[0, 0, one()], c=c, r=r, s=s, T=u())
    r, v = [one()] * 3, [one()] * 3
    if case == "T3.1":
        return ParamSet(b=u(), c=u(), r=r, s=u())
    if case == "T3.2":
        return ParamSet(a=u(), c=u(), r=r, s=u())
    if case == "T3.3":
        return ParamSet(a=u(), b=u(), c=u(), s=u())
    if case == "T3.4":
        return ParamSet(b=u(), r=r, v=v)
    if case == "T3.5":
        return ParamSet(a=u(), b=u(), v=v)
    if case == "T3.6":
        return ParamSet(a=u(), r=r, v=v)
    raise ValueError(f"unknown sampling family {case!r}")


def random_params(rng, case="general", scale=0.3, margin=1e-6):
    """Draw ParamSets for ``case`` until one is physical (min eigenvalue >= margin).

    For a closed-form case the draw is also rejected until the case premises hold.
    """
    for _ in range(MAX_TRIES):
        p = _draw(rng, case, scale)
        if case in PREMISES and not PREMISES[case](p):
            continue
        if is_physical(p, margin):
            return p
    raise RuntimeError(f"no physical sample found for {case!r}")
