"""One figure builder per table kind.

Each builder takes the column dict from read_table and returns a finished
matplotlib Figure. Nothing here computes rates or power; the builders only
group, sort, and draw what the simulator already wrote.
"""

import math

import matplotlib

matplotlib.use("Agg")  # file output only
import matplotlib.pyplot as plt

__all__ = ["FIGURES"]

_RATE_LABEL = "rate (bits/s/Hz)"
_SNR_LABEL = "SNR (dB)"


def _new_axes(title: str):
    fig, ax = plt.subplots(figsize=(7.0, 4.5), layout="constrained")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _groups(columns: dict, *keys):
    """(key tuple, row indices) pairs in first-seen order."""
    seen = {}
    for i in range(len(columns[keys[0]])):
        key = tuple(columns[k][i] for k in keys)
        seen.setdefault(key, []).append(i)
    return list(seen.items())


def _pick(columns: dict, name: str, idx):
    return [columns[name][i] for i in idx]


def _rate_axes(ax, ylabel: str = _RATE_LABEL) -> None:
    ax.set_xlabel(_SNR_LABEL)
    ax.set_ylabel(ylabel)
    ax.legend()


def fixed(columns: dict):
    fig, ax = _new_axes("rates on a fixed channel")
    several = len(set(columns["k"])) > 1
    for (k,), idx in _groups(columns, "k"):
        tag = f" (k={k:g})" if several else ""
        snr = _pick(columns, "snr_db", idx)
        ax.plot(snr, _pick(columns, "gmi_bits", idx), "o-", label="mixed adc" + tag)
        ax.plot(snr, _pick(columns, "conventional_bits", idx), "s--",
                label="full resolution" + tag)
        ax.plot(snr, _pick(columns, "selection_bits", idx), "^:",
                label="antenna selection" + tag)
    _rate_axes(ax)
    return fig


def outage(columns: dict):
    fig, ax = _new_axes("outage rates")
    for (k, arch), idx in _groups(columns, "k", "arch"):
        snr = _pick(columns, "snr_db", idx)
        ax.plot(snr, _pick(columns, "rate_bits", idx), "o-",
                label=f"{arch.replace('_', ' ')} (k={k:g})")
    _rate_axes(ax)
    return fig


def ergodic(columns: dict):
    fig, ax = _new_axes("ergodic rate bounds")
    for (k,), idx in _groups(columns, "k"):
        snr = _pick(columns, "snr_db", idx)
        line, = ax.plot(snr, _pick(columns, "lower_bits", idx), "o-",
                        label=f"lower (k={k:g})")
        ax.plot(snr, _pick(columns, "upper_bits", idx), "--",
                color=line.get_color(), label=f"upper (k={k:g})")
    _rate_axes(ax)
    return fig


def imperfect(columns: dict):
    fig, ax = _new_axes("rates with estimated channel knowledge")
    trained_drawn = set()
    for (k, mse), idx in _groups(columns, "k", "mse_db"):
        snr = _pick(columns, "snr_db", idx)
        line, = ax.plot(snr, _pick(columns, "lower_bits", idx), "o-",
                        label=f"lower (k={k:g}, mse {mse:g} dB)")
        ax.plot(snr, _pick(columns, "upper_bits", idx), "--",
                color=line.get_color(), label=f"upper (k={k:g}, mse {mse:g} dB)")
        if k not in trained_drawn:  # same reference for every mse level
            trained_drawn.add(k)
            ax.plot(snr, _pick(columns, "conventional_trained_bits", idx), ":",
                    color="black", label=f"full resolution, trained (k={k:g})")
    _rate_axes(ax)
    return fig


def dither(columns: dict):
    fig, ax = _new_axes("dithered against plain one-bit conversion")
    for (k,), idx in _groups(columns, "k"):
        snr = _pick(columns, "snr_db", idx)
        line, = ax.plot(snr, _pick(columns, "lower_bits", idx), "o-",
                        label=f"dithered (k={k:g})")
        ax.plot(snr, _pick(columns, "plain_lower_bits", idx), "--",
                color=line.get_color(), label=f"plain (k={k:g})")
    _rate_axes(ax)
    return fig


def multiuser(columns: dict):
    fig, ax = _new_axes("per-user ergodic rate bounds")
    for (k, scheme), idx in _groups(columns, "k", "scheme"):
        snr = _pick(columns, "snr_db", idx)
        line, = ax.plot(snr, _pick(columns, "lower_bits", idx), "o-",
                        label=f"lower, {scheme} switch (k={k:g})")
        ax.plot(snr, _pick(columns, "upper_bits", idx), "--",
                color=line.get_color(), label=f"upper, {scheme} switch (k={k:g})")
    _rate_axes(ax, ylabel="per-user " + _RATE_LABEL)
    return fig


def energy(columns: dict):
    fig, ax = _new_axes("rate against receiver power")
    for (arch,), idx in _groups(columns, "arch"):
        order = sorted(idx, key=lambda i: columns["k"][i])
        x = [columns["norm_rate"][i] for i in order]
        y = [columns["norm_energy"][i] for i in order]
        ax.plot(x, y, "o-", label=arch.replace("_", " "))
        for i in order:
            ax.annotate(f"{columns['k'][i]:g}",
                        (columns["norm_rate"][i], columns["norm_energy"][i]),
                        textcoords="offset points", xytext=(4, 4), fontsize=8)
    ax.set_xlabel("normalized rate")
    ax.set_ylabel("normalized energy")
    ax.legend()
    return fig


def validate(columns: dict):
    fig, ax = _new_axes("closed form against sampling, per battery row")
    cap = 10.0  # keeps a z of inf (exact rows gone wrong) drawable
    heights = [v if math.isfinite(v) and v < cap else cap for v in columns["z"]]
    colors = ["tab:red" if s == "FAIL" else "tab:gray" for s in columns["status"]]
    ax.bar(range(len(heights)), heights, color=colors)
    ax.axhline(3.0, color="black", linestyle="--", linewidth=1.0, label="3 standard errors")
    ax.set_xlabel("battery row")
    ax.set_ylabel("deviation (standard errors)")
    ax.legend()
    return fig


FIGURES = {
    "fixed": fixed,
    "outage": outage,
    "ergodic": ergodic,
    "imperfect": imperfect,
    "dither": dither,
    "multiuser": multiuser,
    "energy": energy,
    "validate": validate,
}
