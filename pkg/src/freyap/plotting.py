"""Figure rendering for scan reports. Always uses the non-interactive Agg backend."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "figure.figsize": (6.4, 4.0),
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "font.size": 9,
}


def _save(fig, path: str) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _running_min(x: np.ndarray) -> np.ndarray:
    return np.minimum.accumulate(x)


def condbound_figure(N: np.ndarray, P: np.ndarray, path: str, bound: float = 0.94) -> str:
    """P(N)/log N over valid conductors: thinned scatter plus the running minimum."""
    ratio = P / np.log(N.astype(float))
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        step = max(1, len(N) // 20000)
        ax.scatter(N[::step], ratio[::step], s=1, alpha=0.3, label="P(N)/log N (thinned)")
        ax.plot(N, _running_min(ratio), color="C1", lw=1.5, label="running minimum")
        ax.axhline(bound, color="C3", ls="--", lw=1, label=f"{bound}")
        i = int(np.argmin(ratio))
        ax.annotate(f"N={int(N[i])}", (N[i], ratio[i]), xytext=(10, 20), textcoords="offset points",
                    arrowprops={"arrowstyle": "->"})
        ax.set_xscale("log")
        ax.set_ylim(0.8, min(6.0, float(ratio.max()) + 0.1))
        ax.set_xlabel("conductor N")
        ax.set_ylabel("P(N) / log N")
        ax.legend(loc="upper right", fontsize=7)
        return _save(fig, path)


def theta_figure(primes: np.ndarray, ratio: np.ndarray, path: str, cap: float = 1.000081) -> str:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(primes, ratio, lw=0.7)
        ax.axhline(cap, color="C3", ls="--", lw=1, label=f"{cap}")
        ax.set_xscale("log")
        ax.set_xlabel("x (prime)")
        ax.set_ylabel("theta(x) / x")
        ax.legend(loc="lower right")
        return _save(fig, path)


def gram_figure(gram: np.ndarray, labels: Sequence[int], path: str) -> str:
    """|y_i . y_j| for the character vectors on (k/2, k]."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.5, 5.0))
        im = ax.imshow(np.log10(1 + np.abs(gram)), cmap="viridis")
        ax.set_xticks(range(len(labels)))
        ax.set_yticks(range(len(labels)))
        ax.set_xticklabels(labels, rotation=90, fontsize=6)
        ax.set_yticklabels(labels, fontsize=6)
        ax.grid(False)
        fig.colorbar(im, ax=ax, label="log10(1 + |y_i . y_j|)")
        ax.set_title("character Gram matrix")
        return _save(fig, path)


def sieve_figure(counts: dict[str, int], needs: dict[str, float], path: str) -> str:
    names = list(counts)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        x = np.arange(len(names))
        ax.bar(x - 0.2, [counts[n] for n in names], width=0.4, label="observed")
        ax.bar(x + 0.2, [needs.get(n, 0.0) for n in names], width=0.4, label="budget")
        ax.set_xticks(x)
        ax.set_xticklabels(names)
        ax.set_yscale("symlog")
        ax.set_ylabel("cardinality")
        ax.legend()
        return _save(fig, path)


def trace_histogram(a_p: Sequence[int], p: Sequence[int], path: str, title: str = "") -> str:
    """a_p / (2 sqrt p) across a scan."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        z = np.asarray(a_p, dtype=float) / (2 * np.sqrt(np.asarray(p, dtype=float)))
        ax.hist(z, bins=40, range=(-1, 1))
        ax.set_xlabel("a_p / 2 sqrt(p)")
        ax.set_ylabel("count")
        if title:
            ax.set_title(title)
        return _save(fig, path)


def repulsion_figure(N1_values: np.ndarray, bound: np.ndarray, target: float, threshold: int, path: str) -> str:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(N1_values, bound, label="chain bound 2.13 / log N1")
        ax.axhline(target, color="C3", ls="--", lw=1, label=f"{target}")
        ax.axvline(threshold, color="C2", ls=":", lw=1, label=f"N1 = {threshold}")
        ax.set_xscale("log")
        ax.set_xlabel("N1")
        ax.set_ylabel("upper bound on sum 1/P(N_j)")
        ax.legend()
        return _save(fig, path)


def char_partial_sums(values: np.ndarray, lo: int, path: str, label: str) -> str:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        xs = np.arange(lo + 1, lo + 1 + len(values))
        ax.plot(xs, np.cumsum(values), lw=0.8, label=label)
        ax.set_xlabel("m")
        ax.set_ylabel("partial sum")
        ax.legend()
        return _save(fig, path)

