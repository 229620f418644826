"""Small dense complex linear algebra for one to three qubits.

Everything here works on plain numpy arrays. Matrices are at most 8x8, so the
Hermitian eigensolver is a cyclic Jacobi sweep rather than a LAPACK call.
"""

from functools import reduce

import numpy as np

HERMITIAN_TOL = 1e-12
NEGATIVE_EIG_TOL = 1e-10
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SX, SY, SZ)

SUBSYSTEMS = "ABC"


class NotHermitianError(ValueError):
    """Raised when a matrix that must be Hermitian is not."""

    def __init__(self, max_asym, index):
        self.max_asym = max_asym
        self.index = index
        super().__init__(
            f"matrix is not Hermitian: |M - M^H| = {max_asym:.3e} at entry {index}"
        )


class InvalidStateError(ValueError):
    """Raised when a density matrix has a genuinely negative eigenvalue."""

    def __init__(self, min_eigenvalue, message=None):
        self.min_eigenvalue = min_eigenvalue
        super().__init__(
            message or f"not a valid density matrix: min eigenvalue {min_eigenvalue:.3e}"
        )


def kron(*factors):
    """Kronecker product of one or more square matrices."""
    return reduce(np.kron, (np.asarray(f, dtype=complex) for f in factors))


def check_hermitian(m, tol=HERMITIAN_TOL):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    diff = np.abs(m - m.conj().T)
    idx = np.unravel_index(np.argmax(diff), diff.shape)
    if diff[idx] > tol:
        raise NotHermitianError(float(diff[idx]), tuple(int(i) for i in idx))


def _jacobi_rotate(a, v, p, q):
    apq = a[p, q]
    mag = abs(apq)
    if mag == 0.0:
        return
    # phase-rotate so the (p, q) entry is real, then an ordinary Jacobi rotation
    phase = apq / mag
    app, aqq = a[p, p].real, a[q, q].real
    theta = (aqq - app) / (2.0 * mag)
    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex)
    idx = [p, q]
    a[:, idx] = a[:, idx] @ g
    a[idx, :] = g.conj().T @ a[idx, :]
    v[:, idx] = v[:, idx] @ g


def jacobi_eigh(m, tol=JACOBI_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigen-decomposition of a small Hermitian matrix by cyclic Jacobi sweeps.

    Returns ascending real eigenvalues and the unitary whose columns are the
    matching eigenvectors. Sweeps stop once the off-diagonal Frobenius norm
    drops below ``tol``.
    """
    check_hermitian(m)
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(a))))
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a[~np.eye(n, dtype=bool)]) ** 2))
        if off < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _jacobi_rotate(a, v, p, q)
    else:
        raise RuntimeError("Jacobi eigensolver did not converge")
    w = np.diag(a).real
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def eig_hermitian(m):
    """Ascending eigenvalues of a Hermitian matrix."""
    return jacobi_eigh(m)[0]


def eigvalsh_2x2(m):
    """Eigenvalues of a stack of 2x2 Hermitian matrices, shape (..., 2, 2).

    Closed form of a single Jacobi rotation; returns (..., 2) ascending.
    """
    m = np.asarray(m)
    a = m[..., 0, 0].real
    d = m[..., 1, 1].real
    b = np.abs(m[..., 0, 1])
    mean = 0.5 * (a + d)
    rad = np.sqrt(0.25 * (a - d) ** 2 + b * b)
    return np.stack([mean - rad, mean + rad], axis=-1)


def _mask(keep):
    if isinstance(keep, str):
        keep = [SUBSYSTEMS.index(ch) for ch in keep.upper()]
    return sorted(set(int(k) for k in keep))


def partial_trace(rho, keep):
    """Trace out every qubit not listed in ``keep``.

    ``keep`` is either a string over "ABC" (e.g. "BC") or qubit indices.
    The number of qubits is inferred from the matrix size (2 or 3 qubits).
    """
    rho = np.asarray(rho)
    dim = rho.shape[0]
    n = {4: 2, 8: 3}.get(dim)
    if n is None or rho.shape != (dim, dim):
        raise ValueError(f"partial_trace needs a 4x4 or 8x8 matrix, got {rho.shape}")
    keep = _mask(keep)
    if not keep or keep[-1] >= n or keep[0] < 0:
        raise ValueError(f"invalid subsystem mask {keep} for {n} qubits")
    t = rho.reshape([2] * (2 * n))
    row = list(range(n))
    col = [n + i for i in range(n)]
    for i in range(n):
        if i not in keep:
            col[i] = row[i]
    out = [row[i] for i in keep] + [col[i] for i in keep]
    d = 2 ** len(keep)
    return np.einsum(t, row + col, out).reshape(d, d)


def xlog2x(x):
    """Elementwise x*log2(x) with 0*log2(0) = 0; negative inputs are treated as 0."""
    x = np.asarray(x, dtype=float)
    pos = x > 0
    return np.where(pos, x * np.log2(np.where(pos, x, 1.0)), 0.0)


def clamp_spectrum(w, tol=NEGATIVE_EIG_TOL):
    w = np.asarray(w, dtype=float)
    if w.size and w.min() < -tol:
        raise InvalidStateError(float(w.min()))
    return np.where(w < 0, 0.0, w)


def entropy_of_spectrum(w):
    """-sum(w log2 w) in bits after clamping rounding noise."""
    return float(-np.sum(xlog2x(clamp_spectrum(w))))


def von_neumann_entropy(rho):
    """Von Neumann entropy in bits, S = -Tr(rho log2 rho)."""
    return entropy_of_spectrum(eig_hermitian(rho))


def random_unitary(n, rng):
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(n, rng, rank=None):
    """Random density matrix of size n (Ginibre ensemble)."""
    k = rank or n
    g = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
