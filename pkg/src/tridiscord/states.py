"""Tripartite qubit states in the Pauli basis.

A :class:`ParamSet` holds the 21 real coefficients of

    rho = 1/8 (I + a.s(x)I(x)I + I(x)b.s(x)I + I(x)I(x)c.s
               + sum_i r_i s_i(x)s_i(x)I + s_i s_i(x)I(x)s_i
               + v_i I(x)s_i(x)s_i + T_i s_i(x)s_i(x)s_i)

The 14-parameter non-X family is the subset with a1 = a2 = b1 = b2 = 0 and
v = 0.
"""

import json
from dataclasses import dataclass, field, fields

import numpy as np

from .qmat import I2, PAULI, InvalidStateError, eig_hermitian, kron

KEYS = ("a", "b", "c", "r", "s", "v", "T")
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
COEFF_TOL = 1e-12


def _vec3(x):
    v = np.zeros(3) if x is None else np.asarray(x, dtype=float).reshape(-1)
    if v.shape != (3,):
        raise ValueError(f"expected 3 coefficients, got {v.shape[0]}")
    return v


@dataclass(frozen=True)
class ParamSet:
    """Pauli coefficients of a three-qubit state; each entry lies in [-1, 1]."""

    a: np.ndarray = field(default_factory=lambda: np.zeros(3))
    b: np.ndarray = field(default_factory=lambda: np.zeros(3))
    c: np.ndarray = field(default_factory=lambda: np.zeros(3))
    r: np.ndarray = field(default_factory=lambda: np.zeros(3))
    s: np.ndarray = field(default_factory=lambda: np.zeros(3))
    v: np.ndarray = field(default_factory=lambda: np.zeros(3))
    T: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        for f in fields(self):
            vec = _vec3(getattr(self, f.name))
            if not np.all(np.isfinite(vec)) or np.any(np.abs(vec) > 1.0):
                raise ValueError(f"coefficient {f.name}={vec.tolist()} outside [-1, 1]")
            vec.setflags(write=False)
            object.__setattr__(self, f.name, vec)

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - set(KEYS)
        if unknown:
            raise ValueError(f"unknown parameter keys: {sorted(unknown)}")
        return cls(**{k: d[k] for k in KEYS if k in d})

    def to_dict(self):
        return {k: getattr(self, k).tolist() for k in KEYS}

    def replace(self, **changes):
        d = {k: getattr(self, k) for k in KEYS}
        d.update(changes)
        return ParamSet(**d)

    def __add__(self, other):
        return ParamSet(**{k: getattr(self, k) + getattr(other, k) for k in KEYS})

    @property
    def is_family_31(self):
        """True when only the 14 non-X parameters may be nonzero (exact zeros)."""
        return bool(
            self.a[0] == 0 and self.a[1] == 0 and self.b[0] == 0 and self.b[1] == 0
            and not np.any(self.v)
        )

    def __eq__(self, other):
        if not isinstance(other, ParamSet):
            return NotImplemented
        return all(np.array_equal(getattr(self, k), getattr(other, k)) for k in KEYS)

    __hash__ = None


def load_params(path):
    """Read a parameter file: one JSON object with optional keys a, b, c, r, s, v, T."""
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("parameter file must hold a single JSON object")
    return ParamSet.from_dict(data)


def pauli_string(i, j, k):
    """Tensor product of three single-qubit Paulis; index 0 is the identity."""
    ops = (I2,) + PAULI
    return kron(ops[i], ops[j], ops[k])


# (coefficient name, function mapping axis i -> Pauli index triple)
_TERMS = (
    ("a", lambda i: (i, 0, 0)),
    ("b", lambda i: (0, i, 0)),
    ("c", lambda i: (0, 0, i)),
    ("r", lambda i: (i, i, 0)),
    ("s", lambda i: (i, 0, i)),
    ("v", lambda i: (0, i, i)),
    ("T", lambda i: (i, i, i)),
)


def build_state(p):
    """8x8 density matrix for a ParamSet (positivity is not checked here)."""
    m = np.eye(8, dtype=complex)
    for name, idx in _TERMS:
        coeffs = getattr(p, name)
        for axis in range(3):
            if coeffs[axis] != 0:
                m = m + coeffs[axis] * pauli_string(*idx(axis + 1))
    return m / 8.0


def pauli_coefficients(rho):
    """Recover a ParamSet-shaped dict of coefficients Tr[rho P] from a matrix."""
    out = {}
    for name, idx in _TERMS:
        out[name] = np.array(
            [np.trace(rho @ pauli_string(*idx(axis))).real for axis in (1, 2, 3)]
        )
    return out


GHZ = np.zeros(8, dtype=complex)
GHZ[0] = GHZ[7] = 1 / np.sqrt(2)


def build_werner_ghz(c):
    """c |GHZ><GHZ| + (1 - c) I/8 with the normalized GHZ vector."""
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"Werner-GHZ weight c={c} outside [0, 1]")
    return c * np.outer(GHZ, GHZ.conj()) + (1 - c) * np.eye(8) / 8


@dataclass(frozen=True)
class ValidationReport:
    hermitian_ok: bool
    trace_dev: float
    min_eigenvalue: float
    sufficient_condition: bool | None
    valid: bool


def validate_state(rho, p=None):
    """Check Hermiticity, unit trace and positivity of an 8x8 matrix.

    When ``p`` is given, ``sufficient_condition`` reports whether
    |a| + |b| + |r| <= 1. It is advisory only; the eigenvalues decide validity.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (8, 8):
        raise ValueError(f"expected an 8x8 matrix, got {rho.shape}")
    hermitian_ok = bool(np.max(np.abs(rho - rho.conj().T)) <= 1e-12)
    trace_dev = float(np.trace(rho).real - 1.0)
    herm = 0.5 * (rho + rho.conj().T)
    min_eig = float(eig_hermitian(herm)[0])
    cond = None
    if p is not None:
        cond = bool(np.linalg.norm(p.a) + np.linalg.norm(p.b) + np.linalg.norm(p.r) <= 1.0)
    valid = hermitian_ok and abs(trace_dev) <= TRACE_TOL and min_eig >= -PSD_TOL
    return ValidationReport(hermitian_ok, trace_dev, min_eig, cond, valid)


def require_valid(rho, p=None):
    """Return the validation report, raising InvalidStateError if it fails."""
    rep = validate_state(rho, p)
    if not rep.valid:
        raise InvalidStateError(
            rep.min_eigenvalue,
            f"unphysical state: min eigenvalue {rep.min_eigenvalue:.6g}, "
            f"trace deviation {rep.trace_dev:.3g}, hermitian={rep.hermitian_ok}",
        )
    return rep


EXAMPLE_1 = ParamSet(
    a=[0, 0, 0.03], b=[0, 0, 0.25], c=[0.12, 0.12, 0.01], r=[0.1, 0.1, -0.3],
    s=[0.13, 0.13, -0.26], T=[-0.02, -0.02, -0.36],
)
EXAMPLE_2 = ParamSet(
    b=[0.2, 0.05, 0.1], c=[0.04, 0.06, 0.11], r=[0.17, 0.17, 0.17],
    s=[0.08, 0.15, 0.25],
)
