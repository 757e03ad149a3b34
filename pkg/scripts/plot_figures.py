"""Plot the CSV tables written by reproduce_figures.py (needs matplotlib).

    python scripts/plot_figures.py --in-dir figures
"""
import argparse
import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def load(path):
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    header, data = rows[0], np.array(rows[1:], dtype=float)
    return {name: data[:, i] for i, name in enumerate(header)}


def plot_signals(t, ax, title):
    phi = t["phi"]
    for name, col in t.items():
        if name != "phi":
            ax.plot(phi, col, label=name)
    ax.set_xlabel("phi")
    ax.set_ylabel("<parity>")
    ax.set_title(title)
    ax.legend()


def plot_sensitivity(t, ax):
    x = t["nbar"]
    ax.fill_between(x, t["coherent_n3_2"], t["bgsl_n2"], color="0.9", label="1/nbar^1.5 .. 1/nbar^2")
    styles = {
        "tf_parity": "o",
        "tmsv_parity": "s",
        "ec_parity": "^",
        "tmsv_qcr": "-",
        "ec_qcr": "--",
        "tf_qcr": ":",
        "tmsv_generalized": "-.",
    }
    for name, style in styles.items():
        ok = np.isfinite(t[name])
        ax.loglog(x[ok], t[name][ok], style, label=name, fillstyle="none")
    ax.set_xlabel("nbar")
    ax.set_ylabel("delta phi")
    ax.legend(fontsize=7)


def plot_gain(t, ax):
    ax.semilogx(t["nbar"], t["gain_tmsv"], label="tmsv")
    ax.semilogx(t["nbar"], t["gain_ec"], label="ec")
    ax.semilogx(t["nbar"], t["gain_tmsv_asymptote"], "k:", label="tmsv asymptote")
    ax.set_xlabel("nbar")
    ax.set_ylabel("gain over 1/nbar^2 [dB]")
    ax.legend()


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--in-dir", default="figures")
    ap.add_argument("--out", default=None, help="image path (default <in-dir>/figures.png)")
    args = ap.parse_args()
    d = Path(args.in_dir)
    fig, axes = plt.subplots(2, 2, figsize=(11, 8))
    plot_signals(load(d / "fig2a.csv"), axes[0, 0], "twin Fock")
    plot_signals(load(d / "fig2b.csv"), axes[0, 1], "two-mode squeezed vacuum")
    plot_sensitivity(load(d / "fig3.csv"), axes[1, 0])
    plot_gain(load(d / "fig4.csv"), axes[1, 1])
    fig.tight_layout()
    out = args.out or d / "figures.png"
    fig.savefig(out, dpi=120)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
