"""Second exterior power of R^4 and Gram determinants of p-vectors."""

from itertools import combinations

import numpy as np

from .errors import InvalidInputError
from .symplectic import as_mat4

# lexicographic basis e1^e2, e1^e3, e1^e4, e2^e3, e2^e4, e3^e4 (0-based pairs)
PAIRS = tuple(combinations(range(4), 2))
_ROWS = np.array(PAIRS)


def wedge2(m):
    """6x6 matrix of the induced action on bivectors; entry [(i,j),(k,l)] is the minor."""
    m = as_mat4(m)
    return wedge2_batch(m[None])[0]


def wedge2_batch(ms):
    """Vectorized ``wedge2`` over a stack of shape (n, 4, 4)."""
    ms = np.asarray(ms, dtype=float)
    i, j = _ROWS[:, 0], _ROWS[:, 1]
    # a[n, r, c] = m[i_r, k_c], etc.
    mik = ms[:, i[:, None], i[None, :]]
    mjl = ms[:, j[:, None], j[None, :]]
    mil = ms[:, i[:, None], j[None, :]]
    mjk = ms[:, j[:, None], i[None, :]]
    return mik * mjl - mil * mjk


def wedge_of(u, v):
    """Coordinates of the bivector ``u ^ v`` in the lexicographic basis."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return np.array([u[i] * v[j] - u[j] * v[i] for i, j in PAIRS])


def wedge_inner(u, v):
    """Inner product of decomposable p-vectors: det of the matrix of <u_i, v_j>."""
    u = np.atleast_2d(np.asarray(u, dtype=float))
    v = np.atleast_2d(np.asarray(v, dtype=float))
    if u.shape != v.shape:
        raise InvalidInputError(f"p-vector shapes differ: {u.shape} vs {v.shape}")
    p, dim = u.shape
    if dim != 4 or not 1 <= p <= 4:
        raise InvalidInputError("need 1 <= p <= 4 vectors in R^4")
    return float(np.linalg.det(u @ v.T))


def lagrangian_seed(p):
    """Canonical element of L_p: e1 for p=1, e1^e2 (6 coordinates) for p=2."""
    if p == 1:
        return np.array([1.0, 0.0, 0.0, 0.0])
    if p == 2:
        return np.array([1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    raise InvalidInputError(f"p must be 1 or 2, got {p!r}")


# bivector of the symplectic form: e1^e3 + e2^e4
OMEGA_J = np.array([0.0, 1.0, 0.0, 0.0, 1.0, 0.0])
