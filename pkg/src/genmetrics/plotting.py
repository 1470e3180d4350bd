"""Matplotlib renderings of radar tables, for reports that want a raster figure."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .radar import REAL  # noqa: E402

RC = {
    "font.size": 11,
    "axes.titlesize": 13,
    "legend.fontsize": 10,
    "legend.frameon": False,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def radar_figure(normalized, title=None, real_key=REAL):
    """Polar radar chart of a normalized table; returns the Figure."""
    metrics = list(normalized[real_key])
    angles = np.linspace(0, 2 * np.pi, len(metrics), endpoint=False)
    closed = np.append(angles, angles[:1])
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(7, 7), subplot_kw={"polar": True})
        ax.set_theta_offset(np.pi / 2)
        ax.set_theta_direction(-1)
        ax.set_xticks(angles)
        ax.set_xticklabels(metrics)
        ax.set_ylim(0, 2)
        ax.set_yticks([0.5, 1.0, 1.5, 2.0])
        ax.set_yticklabels([])
        models = [n for n in normalized if n != real_key] + [real_key]
        for name in models:
            values = [normalized[name][m] for m in metrics]
            values = np.clip(np.append(values, values[:1]), 0, 2)
            style = {"color": "k", "linewidth": 2.0} if name == real_key else {"linewidth": 1.5}
            line, = ax.plot(closed, values, label=name, **style)
            ax.fill(closed, values, color=line.get_color(), alpha=0.12)
        ax.legend(loc="upper right", bbox_to_anchor=(1.25, 1.1))
        if title:
            ax.set_title(title, pad=24)
    return fig


def save_radar_figure(normalized, path, title=None):
    fig = radar_figure(normalized, title)
    with plt.rc_context(RC):
        fig.savefig(path)
    plt.close(fig)
