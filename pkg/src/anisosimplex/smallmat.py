"""Dense kernels for the tiny matrices that show up in simplex geometry.

Everything here works on plain ``numpy`` arrays. Sizes are 2x2 or 3x3 for
the geometric matrices and at most 10x10 for the polynomial Gram matrices,
so the routines favour exactness and simplicity over speed.
"""
import numpy as np

from .errors import NotPositiveDefiniteError

MAX_GEN_EIG_SIZE = 10

_JACOBI_TOL = 1e-14
_JACOBI_MAX_SWEEPS = 100


def _as_square(m):
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def determinant(m):
    """Cofactor-expansion determinant of a 1x1, 2x2 or 3x3 matrix."""
    a = _as_square(m)
    n = a.shape[0]
    if n == 1:
        return float(a[0, 0])
    if n == 2:
        return float(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
    if n == 3:
        return float(
            a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
            - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
            + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
        )
    raise ValueError("determinant is only provided for dim <= 3")


def inverse(m):
    """Adjugate inverse for 2x2 and 3x3 matrices."""
    a = _as_square(m)
    det = determinant(a)
    if det == 0.0:
        raise ZeroDivisionError("singular matrix")
    n = a.shape[0]
    if n == 2:
        adj = np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]])
        return adj / det
    if n == 3:
        adj = np.empty((3, 3))
        for i in range(3):
            for j in range(3):
                minor = np.delete(np.delete(a, j, axis=0), i, axis=1)
                adj[i, j] = (-1) ** (i + j) * determinant(minor)
        return adj / det
    raise ValueError("inverse is only provided for dim 2 and 3")


def sym_eig(a):
    """Eigen-decomposition of a small symmetric matrix by cyclic Jacobi sweeps.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors stored column-wise.
    """
    a = _as_square(a).copy()
    n = a.shape[0]
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = np.sum(np.triu(a, 1) ** 2)
        diag = np.sum(np.diag(a) ** 2)
        if off <= (_JACOBI_TOL**2) * diag or off == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if theta == 0.0:
                    t = 1.0
                elif abs(theta) > 1e150:
                    t = 0.5 / theta  # theta^2 would overflow
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                a[p, q] = a[q, p] = 0.0
                v = v @ rot
    w = np.diag(a).copy()
    order = np.argsort(w)
    return w[order], v[:, order]


def two_norm(m):
    """Spectral norm: the largest singular value.

    Uses the closed-form eigenvalues of ``m^T m`` for 2x2 input and Jacobi
    sweeps otherwise.
    """
    a = _as_square(m)
    g = a.T @ a
    if a.shape[0] == 2:
        # half-difference form of the discriminant avoids cancellation when
        # the two eigenvalues nearly coincide
        half_diff = 0.5 * (g[0, 0] - g[1, 1])
        lam = 0.5 * (g[0, 0] + g[1, 1]) + np.hypot(half_diff, g[0, 1])
    else:
        lam = sym_eig(g)[0][-1]
    return float(np.sqrt(max(lam, 0.0)))


def cholesky(b):
    """Lower-triangular Cholesky factor; raises on a non-positive pivot."""
    b = _as_square(b)
    n = b.shape[0]
    low = np.zeros_like(b)
    for j in range(n):
        pivot = b[j, j] - np.dot(low[j, :j], low[j, :j])
        if pivot <= 0.0:
            raise NotPositiveDefiniteError(f"Cholesky pivot {j} is {pivot:g}")
        low[j, j] = np.sqrt(pivot)
        for i in range(j + 1, n):
            low[i, j] = (b[i, j] - np.dot(low[i, :j], low[j, :j])) / low[j, j]
    return low


def _forward_substitute(low, rhs):
    n = low.shape[0]
    out = np.zeros_like(rhs, dtype=float)
    for i in range(n):
        out[i] = (rhs[i] - low[i, :i] @ out[:i]) / low[i, i]
    return out


def sym_generalized_eig_max(a, b):
    """Largest ``lam`` with ``a v = lam b v`` for symmetric ``a`` and SPD ``b``.

    The pencil is reduced to ``L^{-1} a L^{-T}`` with ``b = L L^T`` and the
    resulting symmetric matrix is diagonalised with Jacobi rotations.
    """
    a = _as_square(a)
    b = _as_square(b)
    if a.shape != b.shape:
        raise ValueError("a and b must have the same shape")
    if a.shape[0] > MAX_GEN_EIG_SIZE:
        raise ValueError(f"generalized eigenproblems are capped at n={MAX_GEN_EIG_SIZE}")
    low = cholesky(b)
    y = _forward_substitute(low, a)  # L^{-1} a
    c = _forward_substitute(low, y.T)  # L^{-1} (L^{-1} a)^T = L^{-1} a L^{-T}
    c = 0.5 * (c + c.T)
    return float(sym_eig(c)[0][-1])
