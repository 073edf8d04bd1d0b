"""Figure rendering for analysis artifacts: MI heatmaps, block-entropy
profiles, and VQE convergence curves, written next to their CSV twins."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt     # noqa: E402


def render_mi_heatmap(I: np.ndarray, path, title: str = "Mutual information",
                      highlight: Optional[Sequence[int]] = None) -> None:
    """Heatmap of the pairwise qubit MI matrix; ``highlight`` draws a frame
    around the listed qubit rows/columns."""
    n = I.shape[0]
    fig, ax = plt.subplots(figsize=(5.2, 4.4))
    im = ax.imshow(I, cmap="viridis", origin="upper")
    ax.set_xticks(range(n))
    ax.set_yticks(range(n))
    ax.set_xlabel("qubit")
    ax.set_ylabel("qubit")
    ax.set_title(title)
    fig.colorbar(im, ax=ax, label="I(i, j)")
    if highlight:
        lo, hi = min(highlight), max(highlight)
        ax.add_patch(plt.Rectangle((lo - 0.5, lo - 0.5), hi - lo + 1,
                                   hi - lo + 1, fill=False, color="red",
                                   linewidth=1.5))
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_block_entropies(values: np.ndarray, path,
                           title: str = "Block entropies") -> None:
    """Entanglement entropy across each left/right cut of the qubit line."""
    cuts = np.arange(1, len(values) + 1)
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.plot(cuts, values, "o-")
    ax.set_xlabel("cut position (qubits in left block)")
    ax.set_ylabel("S(block)")
    ax.set_title(title)
    ax.set_xticks(cuts)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_vqe_curve(layers: Sequence[int], errors_kcal: Sequence[float],
                     path, label: str = "", title: str = "VQE accuracy vs depth",
                     chemical_accuracy: float = 1.0) -> None:
    """Best-of-restarts VQE error (kcal/mol) against entangling layer count."""
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.semilogy(layers, np.maximum(np.asarray(errors_kcal, dtype=float), 1e-12),
                "o-", label=label or None)
    ax.axhline(chemical_accuracy, color="gray", linestyle="--",
               label="chemical accuracy")
    ax.set_xlabel("entangling layers")
    ax.set_ylabel("E_VQE - E_FCI (kcal/mol)")
    ax.set_title(title)
    ax.set_xticks(list(layers))
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_cost_histogram(costs: np.ndarray, reference: float, path,
                          title: str = "Tree-space MI cost distribution") -> None:
    """Histogram of sampled-tree costs with the reference mapping marked."""
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.hist(costs, bins=30, alpha=0.8)
    ax.axvline(reference, color="red", linestyle="--", label="reference mapping")
    ax.set_xlabel("optimal MI cost")
    ax.set_ylabel("count")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
