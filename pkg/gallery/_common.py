"""Shared plotting setup for the gallery scripts."""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

OUTPUT = Path(__file__).resolve().parent / "_output"


def save(fig, name):
    OUTPUT.mkdir(exist_ok=True)
    path = OUTPUT / name
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    print(f"saved {path}")
    return path
