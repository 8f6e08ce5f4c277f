"""Transfer matrices of the two coupled-string models and their random parameters.

Point-interaction model: one cell is the free coupled propagator over (0, 1)
followed by the jump ``u'(n+) = u'(n-) + diag(w) u(n)`` at the right end, so

    A = M(diag(w1, w2)) @ A0(E),   M(Q) = [[I, 0], [Q, I]],

with ``A0(E) = exp([[0, I], [V0 - E, 0]])`` and ``V0 = [[0, 1], [1, 0]]``.

Anderson model: a constant potential ``M_w = [[w1, 1], [1, w2]]`` on each cell,
so ``A = exp([[0, I], [M_w - E, 0]])``, evaluated in the eigenbasis of ``M_w``.

All matrices act on ``(u1, u2, u1', u2')``.
"""

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import BranchPointError, InvalidInputError, RangeError

V0 = np.array([[0.0, 1.0], [1.0, 0.0]])
U = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
# branch points of the point-interaction model (eigenvalues of V0)
POINT_BRANCHES = (-1.0, 1.0)


class ModelKind(str, Enum):
    POINT = "point"
    ANDERSON = "anderson"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        aliases = {"point": cls.POINT, "pointinteraction": cls.POINT, "1": cls.POINT,
                   "anderson": cls.ANDERSON, "2": cls.ANDERSON}
        key = str(name).replace("_", "").replace("-", "").lower()
        if key not in aliases:
            raise InvalidInputError(f"unknown model {name!r}; use 'point' or 'anderson'")
        return aliases[key]


@dataclass(frozen=True)
class ParamDistribution:
    """Finite-support distribution on R^2 for the coupling pair (w1, w2)."""

    atoms: tuple
    weights: tuple

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float).reshape(-1, 2)
        weights = np.asarray(self.weights, dtype=float).ravel()
        if len(atoms) == 0:
            raise InvalidInputError("distribution needs at least one atom")
        if len(weights) != len(atoms):
            raise InvalidInputError("atoms and weights differ in length")
        if not (np.all(np.isfinite(atoms)) and np.all(np.isfinite(weights))):
            raise InvalidInputError("non-finite atom or weight")
        if np.any(weights < 0):
            raise InvalidInputError("weights must be nonnegative")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise InvalidInputError(f"weights sum to {weights.sum()!r}, not 1")
        object.__setattr__(self, "atoms", tuple(map(tuple, atoms.tolist())))
        object.__setattr__(self, "weights", tuple(weights.tolist()))

    @classmethod
    def uniform(cls, atoms):
        atoms = list(atoms)
        return cls(tuple(atoms), tuple([1.0 / len(atoms)] * len(atoms)))

    @classmethod
    def point_mass(cls, atom):
        return cls((tuple(atom),), (1.0,))

    @classmethod
    def from_dict(cls, d):
        """Parse ``{"atoms": [[w1, w2], ...], "weights": [...]}``; weights default uniform."""
        if "atoms" not in d:
            raise InvalidInputError("distribution needs an 'atoms' list")
        atoms = [tuple(a) for a in d["atoms"]]
        if any(len(a) != 2 for a in atoms):
            raise InvalidInputError("each atom must be a pair [w1, w2]")
        if d.get("weights") is None:
            return cls.uniform(atoms)
        return cls(tuple(atoms), tuple(d["weights"]))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_dict(self):
        return {"atoms": [list(a) for a in self.atoms], "weights": list(self.weights)}

    @property
    def atom_array(self):
        return np.array(self.atoms, dtype=float)

    def differences_span_plane(self, tol=1e-12):
        """Whether the differences of atoms span R^2 (needed for point-model density)."""
        a = self.atom_array
        if len(a) < 3:
            return False
        return np.linalg.matrix_rank(a[1:] - a[0], tol=tol) == 2

    def contains(self, atom, tol=1e-12):
        return any(abs(w1 - atom[0]) <= tol and abs(w2 - atom[1]) <= tol for w1, w2 in self.atoms)


@dataclass(frozen=True)
class ModelSpec:
    kind: ModelKind
    distribution: ParamDistribution = field(
        default_factory=lambda: ParamDistribution.uniform([(0, 0), (0, 1), (1, 0), (1, 1)]))

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind.parse(self.kind))

    def transfer(self, E, omega):
        if self.kind is ModelKind.POINT:
            return transfer_point(E, omega)
        return transfer_anderson(E, omega)

    def atom_matrices(self, E):
        """Stack of the transfer matrices of every atom, shape (K, 4, 4)."""
        return np.array([self.transfer(E, w) for w in self.distribution.atoms])

    def branch_points(self):
        if self.kind is ModelKind.POINT:
            return POINT_BRANCHES
        pts = set()
        for w in self.distribution.atoms:
            pts.update(anderson_eigen(w).eigenvalues)
        return tuple(sorted(pts))


@dataclass(frozen=True)
class SpectralDecomposition2:
    """``M = s @ diag(lam1, lam2) @ s.T`` with ``lam1 >= lam2``."""

    s: np.ndarray
    lam1: float
    lam2: float

    @property
    def eigenvalues(self):
        return (self.lam1, self.lam2)


def interface_matrix(q):
    """M(q) = [[I, 0], [q, I]] for symmetric 2x2 q."""
    q = np.asarray(q, dtype=float)
    if q.shape != (2, 2) or not np.all(np.isfinite(q)):
        raise InvalidInputError("q must be a finite 2x2 matrix")
    if abs(q[0, 1] - q[1, 0]) > 1e-14 * max(1.0, np.abs(q).max()):
        raise InvalidInputError("q must be symmetric")
    out = np.eye(4)
    out[2:, :2] = q
    return out


def _oscillator_block(k):
    """Propagator over unit length of ``w'' = -k w`` for one scalar channel.

    ``k = E - lambda``; trigonometric for k > 0, hyperbolic for k < 0.
    """
    if k > 0:
        r = np.sqrt(k)
        return np.array([[np.cos(r), np.sin(r) / r], [-r * np.sin(r), np.cos(r)]])
    if k < 0:
        r = np.sqrt(-k)
        if r > 700:
            raise RangeError(f"hyperbolic block overflows for E - lambda = {k}")
        return np.array([[np.cosh(r), np.sinh(r) / r], [r * np.sinh(r), np.cosh(r)]])
    raise BranchPointError("energy equals an eigenvalue of the cell potential")


def canonical_block(k1, k2):
    """Interleaved 4x4 propagator for two decoupled channels in (w1, w2, w1', w2') order."""
    out = np.zeros((4, 4))
    out[np.ix_([0, 2], [0, 2])] = _oscillator_block(k1)
    out[np.ix_([1, 3], [1, 3])] = _oscillator_block(k2)
    return out


def block_diag2(s):
    out = np.zeros((4, 4))
    out[:2, :2] = s
    out[2:, 2:] = s
    return out


def _check_energy(E):
    if not np.isfinite(E):
        raise InvalidInputError("energy must be finite")


def free_propagator(E):
    """A0(E): the coupled free propagator over one unit cell, in closed form.

    E > 1: both channels trigonometric; -1 < E < 1: the +1 channel hyperbolic;
    E < -1: both hyperbolic.
    """
    _check_energy(E)
    if E in POINT_BRANCHES:
        raise BranchPointError(f"E={E} is a branch point of the point-interaction model")
    uu = block_diag2(U)
    # V0 = U diag(1, -1) U, channel k_i = E - eigenvalue
    return uu @ canonical_block(E - 1.0, E + 1.0) @ uu


def transfer_point(E, omega):
    """One-cell transfer matrix of the point-interaction model: M(diag(w)) @ A0(E)."""
    w1, w2 = _pair(omega)
    return interface_matrix(np.diag([w1, w2])) @ free_propagator(E)


def _pair(omega):
    w = np.asarray(omega, dtype=float).ravel()
    if w.shape != (2,) or not np.all(np.isfinite(w)):
        raise InvalidInputError("omega must be a finite pair")
    return float(w[0]), float(w[1])


def anderson_eigen(omega):
    """Eigen-data of ``[[w1, 1], [1, w2]]``; columns of s have positive first entry."""
    w1, w2 = _pair(omega)
    lam, vec = np.linalg.eigh(np.array([[w1, 1.0], [1.0, w2]]))
    lam = lam[::-1]
    vec = vec[:, ::-1]
    # the off-diagonal 1 keeps first components away from zero
    vec = vec * np.sign(vec[0])
    return SpectralDecomposition2(vec, float(lam[0]), float(lam[1]))


def transfer_anderson(E, omega):
    """One-cell transfer matrix of the Anderson model with constant potential M_w."""
    _check_energy(E)
    eig = anderson_eigen(omega)
    if E in eig.eigenvalues:
        raise BranchPointError(f"E={E} equals an eigenvalue of M_omega")
    rr = block_diag2(eig.s)
    return rr @ canonical_block(E - eig.lam1, E - eig.lam2) @ rr.T


def point_generator(E):
    """Generator of A0(E) as a first-order system on (u, u')."""
    return np.block([[np.zeros((2, 2)), np.eye(2)], [V0 - E * np.eye(2), np.zeros((2, 2))]])


def anderson_generator(E, omega):
    w1, w2 = _pair(omega)
    m = np.array([[w1, 1.0], [1.0, w2]])
    return np.block([[np.zeros((2, 2)), np.eye(2)], [m - E * np.eye(2), np.zeros((2, 2))]])


def cdf(dist):
    c = np.cumsum(np.asarray(dist.weights, dtype=float))
    c[-1] = 1.0
    return c


def sample_indices(dist, rng, n):
    """Atom indices for ``n`` i.i.d. draws, inverse CDF on one uniform each."""
    u = rng.random(n)
    return np.minimum(np.searchsorted(cdf(dist), u, side="right"), len(dist.weights) - 1)


def sample_params(dist, rng):
    """Draw one coupling pair; advances ``rng`` by exactly one uniform."""
    k = int(sample_indices(dist, rng, 1)[0])
    return dist.atoms[k]


def make_rng(seed, *keys):
    """Independent generator for (seed, keys...), e.g. keys=(energy_index, replica)."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(ss))
