"""Reference dataset generation: sweep scatters and bound-vs-MMSE tables.

Six datasets are produced, each as a CSV plus (optionally) a rendered PNG:

* four sweep datasets (two two-point priors, two beta priors) with the
  reference curve, PNR curve, Fock markers, and 200 random samples per
  grid point over nbar in [0, 4];
* two bound datasets tabulating MMSE, je_inv, jd_inv and jb_inv against
  photon number n = 1..10 for a two-point and a beta prior.

CSV contents are bitwise-deterministic under a fixed seed.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

from .fisher_bounds import bounds_report
from .fock_closed_forms import fock_mmse_beta, fock_mmse_twopoint
from .numeric import is_divergent
from .priors import BetaPrior, Prior, TwoPointPrior
from .search_harness import SweepResult, sweep

__all__ = ["FIGURE_PRIORS", "BOUND_PRIORS", "generate_figure_data"]

#: Sweep datasets: name -> prior.
FIGURE_PRIORS: dict[str, Prior] = {
    "sweep_twopoint_a": TwoPointPrior(0.541, 0.706, 0.279),
    "sweep_twopoint_b": TwoPointPrior(0.377, 0.416, 0.139),
    "sweep_beta_uniform": BetaPrior(1.0, 1.0),
    "sweep_beta_2_4": BetaPrior(2.0, 4.0),
}

#: Bound tables: name -> prior.
BOUND_PRIORS: dict[str, Prior] = {
    "bounds_twopoint": TwoPointPrior(0.79, 0.127, 0.641),
    "bounds_beta": BetaPrior(2.33, 3.84),
}

BOUND_N_RANGE = range(1, 11)


@dataclass(frozen=True)
class BoundRow:
    n: int
    mmse: float
    je_inv: float | object
    jd_inv: float | object
    jb_inv: float | object


def _closed_form_mmse(prior: Prior, n: int) -> float:
    if isinstance(prior, TwoPointPrior):
        return fock_mmse_twopoint(n, prior.q, prior.tau0, prior.tau1)
    if isinstance(prior, BetaPrior):
        return fock_mmse_beta(n, prior.alpha, prior.beta)
    raise TypeError("bound tables support two-point and beta priors only")


def bound_table(prior: Prior) -> list[BoundRow]:
    rows = []
    for n in BOUND_N_RANGE:
        rep = bounds_report(n, prior)
        rows.append(
            BoundRow(
                n=n,
                mmse=_closed_form_mmse(prior, n),
                je_inv=rep.je_inv,
                jd_inv=rep.jd_inv,
                jb_inv=rep.jb_inv,
            )
        )
    return rows


def _cell(value) -> str:
    return "divergent" if is_divergent(value) else repr(float(value))


def _write_bound_csv(path: Path, rows: list[BoundRow]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "mmse", "je_inv", "jd_inv", "jb_inv"])
        for r in rows:
            writer.writerow([r.n, repr(r.mmse), _cell(r.je_inv), _cell(r.jd_inv), _cell(r.jb_inv)])


def _render_sweep(path: Path, result: SweepResult) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    xs = [s.nbar for s in result.samples]
    ys = [s.mse for s in result.samples]
    ax.plot(xs, ys, "k.", ms=3, alpha=0.5, label="random states")
    ax.plot(result.grid, result.inbetween, "b-", lw=1.5, label="two-component reference")
    ax.plot(result.grid, result.pnr, "r--", lw=1.2, label="PNR detection")
    if result.fock:
        ns, vals = zip(*result.fock)
        ax.plot(ns, vals, "o", mfc="none", mec="k", ms=7, label="Fock states")
    ax.set_xlabel(r"mean photon number $\bar{n}$")
    ax.set_ylabel("mean square error")
    ax.set_title(result.prior)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_bounds(path: Path, rows: list[BoundRow], title: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ns = [r.n for r in rows]
    series = [
        ("mmse", "o-", [r.mmse for r in rows]),
        ("je_inv", "s--", [r.je_inv for r in rows]),
        ("jd_inv", "^--", [r.jd_inv for r in rows]),
        ("jb_inv", "v--", [r.jb_inv for r in rows]),
    ]
    for label, style, values in series:
        pts = [(n, v) for n, v in zip(ns, values) if not is_divergent(v)]
        if pts:
            ax.semilogy(*zip(*pts), style, label=label, ms=5)
    ax.set_xlabel("photon number $n$")
    ax.set_ylabel("mean square error / bound")
    ax.set_title(title)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def generate_figure_data(
    outdir,
    seed: int = 7,
    cutoff: int = 4,
    count: int = 200,
    step: float = 0.1,
    order: int = 200,
    render: bool = True,
) -> list[Path]:
    """Write all six datasets into ``outdir``; returns the files created."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    n_steps = int(round(cutoff / step))
    grid = [round(k * step, 10) for k in range(n_steps + 1)]
    written = []
    for name, prior in FIGURE_PRIORS.items():
        result = sweep(prior, grid, cutoff=cutoff, count=count, seed=seed, order=order)
        csv_path = outdir / f"{name}.csv"
        result.to_csv(csv_path)
        written.append(csv_path)
        if render:
            png_path = outdir / f"{name}.png"
            _render_sweep(png_path, result)
            written.append(png_path)
    for name, prior in BOUND_PRIORS.items():
        rows = bound_table(prior)
        csv_path = outdir / f"{name}.csv"
        _write_bound_csv(csv_path, rows)
        written.append(csv_path)
        if render:
            png_path = outdir / f"{name}.png"
            _render_bounds(png_path, rows, prior.describe())
            written.append(png_path)
    return written
