"""Static coefficient-path figure."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def plot_path(lambdas, coefs, path, title: str = "") -> None:
    """Draw one line per ever-active slope against ``log(lambda)`` and save it.

    ``coefs`` is ``(n_points, p + 1)`` with the intercept in column 0, which is
    not drawn.  The format follows the file suffix (SVG by default in the CLI).
    """
    lambdas = np.asarray(lambdas, dtype=float)
    slopes = np.asarray(coefs, dtype=float)[:, 1:]
    ever = np.flatnonzero(np.any(slopes != 0.0, axis=0))
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    x = np.log(lambdas)
    for j in ever:
        ax.plot(x, slopes[:, j], linewidth=1.0, label=f"x{j + 1}")
    ax.axhline(0.0, color="0.6", linewidth=0.5)
    ax.invert_xaxis()
    ax.set_xlabel("log(lambda)")
    ax.set_ylabel("coefficient")
    if title:
        ax.set_title(title)
    if 0 < ever.size <= 10:
        ax.legend(fontsize="small", frameon=False)
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None} if str(path).endswith(".svg") else None)
    plt.close(fig)
