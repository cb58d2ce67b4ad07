"""Static SVG bar chart of a reconstructed EQP."""

import numpy as np


def plot_eqp(d, path, title=None):
    """Bar chart of the 12 weights with one-standard-deviation error bars."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = [f"{a}\n{b}" for a, b in d.labels]
    x = np.arange(len(labels))
    colors = ["tab:red" if w < 0 else "tab:blue" for w in d.weights]
    fig, ax = plt.subplots(figsize=(8, 3.5))
    ax.bar(x, d.weights, color=colors, yerr=d.errors, capsize=3, ecolor="black")
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xticks(x)
    ax.set_xticklabels(labels, fontsize=8)
    ax.set_ylabel("P(a, b)")
    ax.set_xlabel("Alice / Bob transformed eigenstate")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
