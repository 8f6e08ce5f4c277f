"""Fixed-size 4x4 real kernel: the symplectic form, exp, brackets, sp_2(R) coordinates.

Basis of sp_2(R) used for coordinates (0-based matrix indices, block form
[[a, b1], [b2, -a^T]]):

    0..3  a-block units: a = e_00, e_01, e_10, e_11   (lower-right gets -a^T)
    4..6  b1 (upper-right):  e_02, e_13, e_03 + e_12
    7..9  b2 (lower-left):   e_20, e_31, e_21 + e_30

The elements are mutually Frobenius-orthogonal; the a-block units and the
off-diagonal b fillers have squared norm 2, the diagonal b fillers 1.
"""

import numpy as np
import scipy.linalg

from .errors import InvalidInputError, RangeError

J = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])

# beyond this the scaled Pade step still works but exp overflows float64
_EXPM_NORM_LIMIT = 700.0


def _basis():
    out = []
    for i, j in [(0, 0), (0, 1), (1, 0), (1, 1)]:
        m = np.zeros((4, 4))
        m[i, j] = 1.0
        m[j + 2, i + 2] = -1.0
        out.append(m)
    for off_r, off_c in [(0, 2), (2, 0)]:
        for cells in ([(0, 0)], [(1, 1)], [(0, 1), (1, 0)]):
            m = np.zeros((4, 4))
            for i, j in cells:
                m[off_r + i, off_c + j] = 1.0
            out.append(m)
    return np.array(out)


SP2_BASIS = _basis()
SP2_BASIS.setflags(write=False)
SP2_DIM = 10
_BASIS_SQNORM = np.einsum("kij,kij->k", SP2_BASIS, SP2_BASIS)


def as_mat4(m):
    """Validate and return ``m`` as a finite float 4x4 array."""
    a = np.asarray(m, dtype=float)
    if a.shape != (4, 4):
        raise InvalidInputError(f"expected a 4x4 matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix has non-finite entries")
    return a


def max_norm(m):
    return float(np.max(np.abs(m)))


def is_symplectic(m, tol=1e-9):
    """True iff ``||m^T J m - J||_max <= tol * max(1, ||m||_max^2)``."""
    if tol <= 0:
        raise InvalidInputError("tol must be positive")
    m = as_mat4(m)
    defect = max_norm(m.T @ J @ m - J)
    return defect <= tol * max(1.0, max_norm(m) ** 2)


def symplectic_inverse(m):
    """Inverse of a symplectic matrix, ``-J m^T J``; exact, no solve."""
    return -J @ m.T @ J


def expm(m):
    """Matrix exponential by degree-13 Pade scaling and squaring.

    Raises RangeError when the 1-norm is large enough for the result to overflow.
    """
    m = as_mat4(m)
    if np.linalg.norm(m, 1) > _EXPM_NORM_LIMIT:
        raise RangeError("matrix norm too large for expm")
    out = scipy.linalg.expm(m)
    if not np.all(np.isfinite(out)):
        raise RangeError("expm overflowed")
    return out


def bracket(x, y):
    """Commutator ``xy - yx``."""
    x = as_mat4(x)
    y = as_mat4(y)
    return x @ y - y @ x


def coords_to_matrix(c):
    c = np.asarray(c, dtype=float)
    if c.shape != (SP2_DIM,):
        raise InvalidInputError(f"expected {SP2_DIM} coordinates, got shape {c.shape}")
    return np.tensordot(c, SP2_BASIS, axes=1)


def sp2_project(m):
    """Orthogonal (Frobenius) projection onto sp_2(R).

    Returns ``(coords, residual)`` where residual is the Frobenius norm of the
    part of ``m`` orthogonal to the algebra.
    """
    m = as_mat4(m)
    coords = np.einsum("kij,ij->k", SP2_BASIS, m) / _BASIS_SQNORM
    residual = float(np.linalg.norm(m - coords_to_matrix(coords)))
    return coords, residual


def in_sp2(m, tol=1e-9):
    m = as_mat4(m)
    _, res = sp2_project(m)
    return res <= tol * max(1.0, max_norm(m))
