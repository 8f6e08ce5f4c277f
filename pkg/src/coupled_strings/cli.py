"""Command-line driver: energy sweeps, certificate sweeps, single matrices, roots.

    coupled-strings sweep config.json [--workers N]
    coupled-strings certify config.json [--workers N]
    coupled-strings transfer --model point --energy 5 --omega 0,1
    coupled-strings roots --model point --cert det11 --interval 1.5,12

Config (JSON)::

    {"model": "point", "distribution": {"atoms": [[0,0],[0,1],[1,0],[1,1]]},
     "energy_grid": [1.5, 12, 20], "n_steps": 100000, "n_replicas": 1,
     "qr_stride": 5, "n_batches": 50, "seed": 1, "tol": 1e-8,
     "outputs": {"csv": "out.csv", "summary": "out.txt"}, "workers": 1}
"""

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, RangeError
from .lyapunov import CocycleRun, combine_replicas, lyapunov_qr
from .models import ModelKind, ModelSpec, ParamDistribution, transfer_anderson, transfer_point
from .zariski import CERTIFICATES, certificate_names, certify, exceptional_roots

log = logging.getLogger(__name__)

HEADER = ("model,E,gamma1,gamma2,gamma3,gamma4,se1,se2,se3,se4,"
          "lie_dim,det_a,det_b,exceptional,n_steps,seed")
NUDGE = 1e-9

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_RANGE = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    model: ModelKind
    distribution: ParamDistribution
    energy_grid: tuple
    n_steps: int = 100_000
    n_replicas: int = 1
    qr_stride: int = 5
    n_batches: int = 50
    seed: int = 0
    tol: float = 1e-8
    outputs: dict = field(default_factory=dict)
    workers: int = 1

    @property
    def spec(self):
        return ModelSpec(self.model, self.distribution)

    @classmethod
    def from_dict(cls, d):
        def need(key):
            if key not in d:
                raise ConfigError(f"{key}: missing")
            return d[key]

        try:
            model = ModelKind.parse(need("model"))
        except InvalidInputError as exc:
            raise ConfigError(f"model: {exc}") from None
        try:
            dist = ParamDistribution.from_dict(need("distribution"))
        except (InvalidInputError, TypeError, ValueError) as exc:
            raise ConfigError(f"distribution: {exc}") from None
        grid = need("energy_grid")
        if isinstance(grid, dict):
            grid = [grid.get("min"), grid.get("max"), grid.get("points")]
        try:
            lo, hi, pts = float(grid[0]), float(grid[1]), int(grid[2])
        except (TypeError, ValueError, IndexError):
            raise ConfigError("energy_grid: expected [min, max, points]") from None
        if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
            raise ConfigError("energy_grid: need finite min < max")
        if pts < 1:
            raise ConfigError("energy_grid: points must be >= 1")

        def integer(key, default, low):
            val = d.get(key, default)
            if not isinstance(val, int) or isinstance(val, bool) or val < low:
                raise ConfigError(f"{key}: expected an integer >= {low}")
            return val

        qr_stride = integer("qr_stride", 5, 1)
        if qr_stride > 20:
            raise ConfigError("qr_stride: must lie in [1, 20]")
        n_batches = integer("n_batches", 50, 2)
        n_steps = integer("n_steps", 100_000, 0)
        if n_steps and n_steps < qr_stride * n_batches:
            raise ConfigError("n_steps: too small for qr_stride * n_batches")
        seed = integer("seed", 0, 0)
        if seed >= 2**64:
            raise ConfigError("seed: must fit in 64 bits")
        tol = d.get("tol", 1e-8)
        if not isinstance(tol, (int, float)) or not tol > 0:
            raise ConfigError("tol: must be a positive number")
        outputs = d.get("outputs", {})
        if not isinstance(outputs, dict):
            raise ConfigError("outputs: expected an object with csv/summary paths")
        return cls(model, dist, (lo, hi, pts), n_steps, integer("n_replicas", 1, 1),
                   qr_stride, n_batches, seed, float(tol), dict(outputs),
                   integer("workers", 1, 1))

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            try:
                return cls.from_dict(json.load(fh))
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from None


def energy_grid(config):
    """Grid energies with branch-point collisions nudged up by 1e-9; returns (energies, warnings)."""
    lo, hi, pts = config.energy_grid
    grid = np.linspace(lo, hi, pts) if pts > 1 else np.array([lo])
    branches = config.spec.branch_points()
    out, warnings = [], []
    for e in grid:
        e = float(e)
        for b in branches:
            if abs(e - b) <= 1e-12 * max(1.0, abs(b)):
                warnings.append(f"E={e!r} hits branch point {b!r}; moved to {b + NUDGE!r}")
                e = b + NUDGE
        out.append(e)
    return out, warnings


def fmt(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _certificate_cells(spec, E, tol):
    """(lie_dim, det_a, det_b, exceptional) or blanks where no certificate applies."""
    if spec.kind is ModelKind.ANDERSON and E <= 2:
        return None, None, None, None
    try:
        cert = certify(spec, E, tol)
    except InvalidInputError:
        return None, None, None, None
    vals = list(cert.det_values.values()) + [None]
    return cert.lie_dim, vals[0], vals[1], cert.is_candidate_exceptional


def _grid_point(args):
    config, index, E, estimate = args
    spec = config.spec
    row = {"model": spec.kind.value, "E": E, "n_steps": 0, "seed": config.seed}
    if estimate and config.n_steps:
        run = CocycleRun(spec, E, config.n_steps, config.qr_stride, config.n_batches)
        ests = [lyapunov_qr(run, (config.seed, index, r)) for r in range(config.n_replicas)]
        est = combine_replicas(ests)
        row["gamma"] = list(est.gamma)
        row["se"] = list(est.se)
        row["n_steps"] = est.n_steps
    row["lie_dim"], row["det_a"], row["det_b"], row["exceptional"] = \
        _certificate_cells(spec, E, config.tol)
    return row


def _csv_line(row):
    g = row.get("gamma", [None] * 4)
    s = row.get("se", [None] * 4)
    cells = [row["model"], fmt(row["E"]), *map(fmt, g), *map(fmt, s), fmt(row["lie_dim"]),
             fmt(row["det_a"]), fmt(row["det_b"]), fmt(row["exceptional"]),
             fmt(row["n_steps"]), fmt(row["seed"])]
    return ",".join(cells)


def _evaluate(config, estimate, workers):
    energies, warnings = energy_grid(config)
    jobs = [(config, i, e, estimate) for i, e in enumerate(energies)]
    workers = workers or config.workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_grid_point, jobs))
    else:
        rows = [_grid_point(j) for j in jobs]
    rows.sort(key=lambda r: r["E"])
    return rows, warnings


def _write(path, text):
    if path is None:
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _summary(config, rows, warnings, roots=None):
    lines = [f"model: {config.model.value}",
             f"grid: {config.energy_grid[0]!r} .. {config.energy_grid[1]!r} "
             f"({config.energy_grid[2]} points)",
             f"seed: {config.seed}"]
    certified = [r for r in rows if r["lie_dim"] is not None]
    full = [r for r in certified if r["lie_dim"] == 10]
    flagged = [r["E"] for r in certified if r["exceptional"]]
    lines.append(f"certified energies: {len(certified)}, lie_dim 10 at {len(full)}")
    lines.append("candidate exceptional energies: "
                 + (", ".join(fmt(e) for e in flagged) if flagged else "none"))
    est = [r for r in rows if "gamma" in r]
    if est:
        sep = [r for r in est if r["gamma"][1] > 5 * r["se"][1]
               and r["gamma"][0] - r["gamma"][1] > 5 * (r["se"][0] + r["se"][1])]
        lines.append(f"gamma1 > gamma2 > 0 at 5 sigma: {len(sep)} of {len(est)} energies")
    if roots is not None:
        lines.append("roots: " + (", ".join(fmt(x) for x in roots) if roots else "none"))
    lines += [f"warning: {w}" for w in warnings]
    return "\n".join(lines) + "\n"


def run_sweep(config, workers=None):
    """Lyapunov estimation plus certificates on every grid point; returns the CSV text."""
    rows, warnings = _evaluate(config, True, workers)
    for w in warnings:
        log.warning(w)
    text = "\n".join([HEADER] + [_csv_line(r) for r in rows]
                     + [f"# warning: {w}" for w in warnings]) + "\n"
    _write(config.outputs.get("csv"), text)
    _write(config.outputs.get("summary"), _summary(config, rows, warnings))
    return text


def _regime_pieces(config, lo, hi):
    """(certificate, sub-interval) pairs covering (lo, hi) without crossing branch points."""
    if config.model is ModelKind.ANDERSON:
        lo = max(lo, 2.0)
        return [("m2step6", (lo, hi))] if lo < hi else []
    pieces = []
    cuts = [-np.inf, -1.0, 1.0, np.inf]
    for a, b in zip(cuts[:-1], cuts[1:]):
        s, t = max(lo, a), min(hi, b)
        if s < t:
            mid = 0.5 * (s + t)
            for name in certificate_names(mid):
                pieces.append((name, (s, t)))
    return pieces


def divisor_zeros(lo, hi):
    """Energies in (lo, hi), E > 2, where a commutator normalization divisor of the Anderson seeds vanishes."""
    out = set()
    for lam in (1.0, -1.0, 2.0, 0.0):
        k = 1
        while True:
            E = (k * np.pi / 2) ** 2 + lam
            if E >= hi:
                break
            if E > max(lo, 2.0):
                out.add(E)
            k += 1
    return sorted(out)


def _merge_close(xs, gap=1e-9):
    """Collapse sorted roots that several certificates report within ``gap``."""
    out = []
    for x in xs:
        if not out or x - out[-1] > gap * max(1.0, abs(x)):
            out.append(x)
    return out


def run_certify(config, workers=None):
    """Certificate-only sweep; the footer lists roots found in the grid's span."""
    rows, warnings = _evaluate(config, False, workers)
    energies = [r["E"] for r in rows]
    footer = []
    found = set()
    lo, hi = min(energies), max(energies)
    if hi > lo:
        for name, interval in _regime_pieces(config, lo, hi):
            rep = exceptional_roots(name, interval, tol=1e-12)
            found.update(rep.all_roots)
            if rep.vanishes_identically:
                footer.append(f"# {name}: vanishes identically on this interval")
            else:
                footer.append(f"# {name}: simple={';'.join(map(fmt, rep.roots))} "
                              f"double={';'.join(map(fmt, rep.suspected_double_roots))}")
        if config.model is ModelKind.ANDERSON:
            zs = divisor_zeros(lo, hi)
            found.update(zs)
            footer.append(f"# divisor_zeros: {';'.join(map(fmt, zs))}")
    roots = _merge_close(sorted(found))
    text = "\n".join([HEADER] + [_csv_line(r) for r in rows]
                     + [f"# roots: {';'.join(map(fmt, roots))}"] + footer
                     + [f"# warning: {w}" for w in warnings]) + "\n"
    _write(config.outputs.get("csv"), text)
    _write(config.outputs.get("summary"), _summary(config, rows, warnings, roots))
    return text


def _pair(text):
    try:
        a, b = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}")
    return a, b


def build_parser():
    p = argparse.ArgumentParser(prog="coupled-strings", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("sweep", "certify"):
        s = sub.add_parser(name)
        s.add_argument("config")
        s.add_argument("--workers", type=int, default=None)
    t = sub.add_parser("transfer", help="print one transfer matrix, row-major")
    t.add_argument("--model", required=True, choices=["point", "anderson"])
    t.add_argument("--energy", type=float, required=True)
    t.add_argument("--omega", type=_pair, required=True)
    r = sub.add_parser("roots", help="zeros of a determinant certificate")
    r.add_argument("--model", required=True, choices=["point", "anderson"])
    r.add_argument("--cert", required=True, choices=sorted(CERTIFICATES))
    r.add_argument("--interval", type=_pair, required=True)
    r.add_argument("--tol", type=float, default=1e-12)
    return p


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command in ("sweep", "certify"):
            config = SweepConfig.load(args.config)
            fn = run_sweep if args.command == "sweep" else run_certify
            text = fn(config, args.workers)
            if not config.outputs.get("csv"):
                sys.stdout.write(text)
        elif args.command == "transfer":
            build = transfer_point if args.model == "point" else transfer_anderson
            m = build(args.energy, args.omega)
            for row in m:
                print(" ".join(f"{x:.17g}" for x in row))
        else:
            cert = CERTIFICATES[args.cert]
            if cert.model.value != args.model:
                raise ConfigError(f"cert: {args.cert} belongs to the {cert.model.value} model")
            rep = exceptional_roots(args.cert, args.interval, tol=args.tol)
            if rep.vanishes_identically:
                print(f"{args.cert} vanishes identically on the interval")
            for x in rep.roots:
                print(f"{x:.17g}")
            for x in rep.suspected_double_roots:
                print(f"{x:.17g} double")
    except (ConfigError, InvalidInputError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (RangeError, ArithmeticError) as exc:
        print(f"numeric range error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
