"""Lyapunov spectrum of i.i.d. products of 4x4 transfer matrices.

Two estimators are provided: QR deflation of a full orthonormal frame
(``lyapunov_qr``) and norm growth of a single vector or bivector
(``lyapunov_wedge_sum``). Both draw the same sequence of atoms for a given
seed, process it in blocks of ``qr_stride`` steps, and attach standard errors
from batch means.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, StrideTooLargeError
from .exterior import lagrangian_seed, wedge2_batch
from .models import ModelSpec, make_rng, sample_indices

# chunk of steps turned into block products at once; bounds memory
_CHUNK = 1 << 16
_OVERFLOW = 1e200


@dataclass(frozen=True)
class Cocycle:
    """Finite-support law of the one-step matrix: atoms (K, 4, 4) with weights."""

    matrices: np.ndarray
    weights: tuple

    @classmethod
    def deterministic(cls, m):
        return cls(np.asarray(m, dtype=float).reshape(1, 4, 4), (1.0,))

    @classmethod
    def from_model(cls, model, E):
        return cls(model.atom_matrices(E), model.distribution.weights)

    def log_norm_bound(self):
        """max over atoms of log ||A||_2; finite means the moment condition holds."""
        return float(max(np.log(np.linalg.norm(m, 2)) for m in self.matrices))


@dataclass(frozen=True)
class CocycleRun:
    model: object  # ModelSpec or Cocycle
    E: float = 0.0
    n_steps: int = 10**6
    qr_stride: int = 5
    n_batches: int = 50

    def __post_init__(self):
        if not 1 <= self.qr_stride <= 20:
            raise InvalidInputError("qr_stride must lie in [1, 20]")
        if self.n_batches < 2:
            raise InvalidInputError("need at least 2 batches")
        if self.n_steps < self.qr_stride * self.n_batches:
            raise InvalidInputError("n_steps too small for the requested batches")

    def cocycle(self):
        if isinstance(self.model, Cocycle):
            return self.model
        if isinstance(self.model, ModelSpec):
            return Cocycle.from_model(self.model, self.E)
        raise InvalidInputError("model must be a ModelSpec or a Cocycle")


@dataclass(frozen=True)
class LyapunovEstimate:
    gamma: np.ndarray
    se: np.ndarray
    n_steps: int
    seed: int


class _WeightsOnly:
    def __init__(self, weights):
        self.weights = weights


def _block_products(run, seed):
    """Yield ``(products, lengths)`` for consecutive blocks of ``qr_stride`` steps.

    ``products[b] = A_{k+s-1} ... A_k`` for block b. The atom sequence is a
    function of ``seed`` alone, independent of stride and chunking.
    """
    coc = run.cocycle()
    mats = np.asarray(coc.matrices, dtype=float)
    rng = make_rng(*seed) if isinstance(seed, tuple) else make_rng(seed)
    dist = _WeightsOnly(coc.weights)
    s = run.qr_stride
    chunk = max(s, (_CHUNK // s) * s)
    done = 0
    while done < run.n_steps:
        m = min(chunk, run.n_steps - done)
        idx = sample_indices(dist, rng, m) if len(mats) > 1 else np.zeros(m, dtype=int)
        full = (m // s) * s
        if full:
            seq = mats[idx[:full]].reshape(-1, s, 4, 4)
            prod = seq[:, 0]
            # overflow surfaces through _check_overflow
            with np.errstate(over="ignore", invalid="ignore"):
                for j in range(1, s):
                    prod = seq[:, j] @ prod
            yield prod, np.full(len(prod), s)
        if full < m:
            prod = mats[idx[full]]
            for k in idx[full + 1:m]:
                prod = mats[k] @ prod
            yield prod[None], np.array([m - full])
        done += m


def _check_overflow(prod):
    if not np.all(np.isfinite(prod)) or np.abs(prod).max() > _OVERFLOW:
        raise StrideTooLargeError("product overflow between re-orthonormalizations; "
                                  "reduce qr_stride")


def _batch_stats(logs, lengths, n_batches):
    """Overall rate and batch-means standard error for per-block log increments.

    ``logs`` has shape (blocks, d); returns (rate[d], se[d]).
    """
    total = logs.sum(axis=0) / lengths.sum()
    groups = np.array_split(np.arange(len(lengths)), n_batches)
    rates = np.array([logs[g].sum(axis=0) / lengths[g].sum() for g in groups])
    se = rates.std(axis=0, ddof=1) / np.sqrt(n_batches)
    return total, se


def _base_seed(seed):
    return int(seed[0]) if isinstance(seed, tuple) else int(seed)


def lyapunov_qr(run, seed=0):
    """All four exponents by QR deflation, re-orthonormalizing every ``qr_stride`` steps.

    ``seed`` is an int or a tuple ``(seed, *stream_keys)`` selecting a derived
    stream. The frame starts at the identity; diagonal signs of R are made positive.
    Exponents are reported sorted non-increasing, standard errors permuted alike.
    """
    q = np.eye(4)
    logs, lengths = [], []
    for prods, lens in _block_products(run, seed):
        _check_overflow(prods)
        out = np.empty((len(prods), 4))
        for b, p in enumerate(prods):
            q, r = np.linalg.qr(p @ q)
            d = np.diag(r)
            sgn = np.where(d < 0, -1.0, 1.0)
            q = q * sgn
            out[b] = np.log(np.abs(d))
        logs.append(out)
        lengths.append(lens)
    gamma, se = _batch_stats(np.concatenate(logs), np.concatenate(lengths), run.n_batches)
    order = np.argsort(-gamma, kind="stable")
    return LyapunovEstimate(gamma[order], se[order], run.n_steps, _base_seed(seed))


def lyapunov_wedge_sum(p, run, seed=0):
    """Estimate gamma_1 + ... + gamma_p from growth of the p-Lagrangian seed.

    Returns ``(estimate, se)``.
    """
    v = lagrangian_seed(p).copy()
    logs, lengths = [], []
    for prods, lens in _block_products(run, seed):
        _check_overflow(prods)
        ops = prods if p == 1 else wedge2_batch(prods)
        out = np.empty(len(ops))
        for b, op in enumerate(ops):
            v = op @ v
            nv = np.sqrt(v @ v)
            out[b] = np.log(nv)
            v = v / nv
        logs.append(out[:, None])
        lengths.append(lens)
    rate, se = _batch_stats(np.concatenate(logs), np.concatenate(lengths), run.n_batches)
    return float(rate[0]), float(se[0])


def symmetry_residual(est):
    """``(|g4 + g1|, |g3 + g2|)``; symplectic cocycles make both vanish."""
    g = np.asarray(est.gamma)
    return float(abs(g[3] + g[0])), float(abs(g[2] + g[1]))


def combine_replicas(estimates):
    """Average independent replicas; standard errors combine in quadrature."""
    g = np.array([e.gamma for e in estimates])
    s = np.array([e.se for e in estimates])
    n = len(estimates)
    return LyapunovEstimate(g.mean(axis=0), np.sqrt((s**2).sum(axis=0)) / n,
                            sum(e.n_steps for e in estimates), estimates[0].seed)
