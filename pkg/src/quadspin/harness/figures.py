"""Matplotlib rendering of run and scenario reports to PNG files.

All figures are drawn with the Agg backend at fixed sizes and DPI so repeated
runs produce byte-identical images.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_DPI = 130


def _save(fig, path):
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def _spin_text(two_i: int) -> str:
    return f"I={two_i}/2" if two_i % 2 else f"I={two_i // 2}"


def save_run_figure(path, series, config):
    tau = series.t * config.f_q_hz
    fig, (ax, ax2) = plt.subplots(
        2, 1, figsize=(7.0, 5.0), sharex=True,
        gridspec_kw={"height_ratios": [3, 1]})
    ax.plot(tau, series.xi_s, lw=0.9, label="xi_S")
    ax.plot(tau, series.xi_r, lw=0.7, alpha=0.6, label="xi_R")
    ax.axhline(1.0, color="k", ls=":", lw=0.8)
    ax.set_ylabel("squeezing parameter")
    ax.legend(loc="upper right", fontsize="small")
    ax.set_title(f"{_spin_text(config.spin_two_i)}, eta={config.eta:g}, "
                 f"larmor={config.larmor_hz:g} Hz, W/2pi={config.dephasing_hz:g} Hz")
    ax2.plot(tau, series.purity, lw=0.9, color="tab:green")
    ax2.set_ylabel("purity")
    ax2.set_xlabel("t (1/f_Q)")
    fig.tight_layout()
    _save(fig, path)


def save_sweep_figure(path, axis, values, mins, means, maxs, duties):
    fig, (ax, ax2) = plt.subplots(2, 1, figsize=(7.0, 5.5), sharex=True)
    ax.fill_between(values, mins, maxs, alpha=0.3, label="xi_S range")
    ax.plot(values, means, color="tab:red", lw=1.2, label="mean xi_S")
    ax.axhline(1.0, color="k", ls=":", lw=0.8)
    ax.set_ylabel("xi_S")
    ax.legend(fontsize="small")
    ax2.plot(values, duties, marker="o", ms=3, lw=1.0)
    ax2.set_ylabel("duty cycle")
    ax2.set_xlabel(axis)
    ax2.set_ylim(-0.02, 1.02)
    fig.tight_layout()
    _save(fig, path)


def save_fig2(path, panels, etas):
    spins = sorted(panels)
    fig, axes = plt.subplots(4, 2, figsize=(9.0, 10.0), sharex=True)
    for ax, two_i in zip(axes.ravel(), spins):
        tau, by_eta = panels[two_i]
        for eta in etas:
            ax.plot(tau, by_eta[eta], lw=0.7, label=f"eta={eta:g}")
        ax.axhline(1.0, color="k", ls=":", lw=0.6)
        ax.set_title(_spin_text(two_i), fontsize="small")
        ax.set_ylabel("xi_S")
    axes[0, 0].legend(fontsize="x-small")
    for ax in axes[-1]:
        ax.set_xlabel("t (1/f_Q)")
    fig.tight_layout()
    _save(fig, path)


def save_fig3(path, panels, etas):
    keys = sorted(panels)
    fig, axes = plt.subplots(2, 2, figsize=(9.0, 6.5), sharex=True)
    for ax, key in zip(axes.ravel(), keys):
        two_i, phi = key
        tau, by_eta = panels[key]
        for eta in etas:
            ax.plot(tau, by_eta[eta], lw=0.7, label=f"eta={eta:g}")
        ax.axhline(1.0, color="k", ls=":", lw=0.6)
        ax.set_title(f"{_spin_text(two_i)}, phi_css={phi:.2f}", fontsize="small")
        ax.set_ylabel("xi_S")
    axes[0, 0].legend(fontsize="x-small")
    for ax in axes[-1]:
        ax.set_xlabel("t (1/f_Q)")
    fig.tight_layout()
    _save(fig, path)


def save_fig4a(path, etas, curves):
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 4.0), sharey=True)
    for ax, phi, tag in ((axes[0], 0.0, "phi_css=0"),
                         (axes[1], math.pi / 2, "phi_css=pi/2")):
        for (two_i, p), energy in sorted(curves.items()):
            if p == phi:
                ax.plot(etas, energy, marker="o", ms=3, lw=1.0,
                        label=_spin_text(two_i))
        ax.set_title(tag, fontsize="small")
        ax.set_xlabel("eta")
    axes[0].set_ylabel("E (h f_Q)")
    axes[1].legend(fontsize="x-small", ncol=2)
    fig.tight_layout()
    _save(fig, path)


def save_heatmap(path, thetas, phis, values, title, cbar_label):
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    mesh = ax.pcolormesh(phis, thetas, values, shading="nearest")
    ax.axhline(math.pi / 2, color="w", ls="--", lw=0.8)
    ax.set_xlabel("phi (rad)")
    ax.set_ylabel("theta (rad)")
    ax.invert_yaxis()
    ax.set_title(title, fontsize="small")
    fig.colorbar(mesh, ax=ax, label=cbar_label)
    fig.tight_layout()
    _save(fig, path)


def save_fig5(path, thetas, results):
    keys = sorted(results)
    fig, axes = plt.subplots(2, 3, figsize=(10.0, 6.0), sharex=True, sharey="row")
    for ax, key in zip(axes.ravel(), keys):
        mins, means, maxs, _, _ = results[key]
        ax.fill_between(thetas, mins, maxs, alpha=0.35)
        ax.plot(thetas, means, color="tab:red", lw=1.1)
        ax.axhline(1.0, color="k", ls=":", lw=0.6)
        ax.set_title(f"{_spin_text(key[0])}, eta={key[1]:g}", fontsize="small")
    for ax in axes[-1]:
        ax.set_xlabel("theta_css (rad)")
    for ax in axes[:, 0]:
        ax.set_ylabel("xi_S band")
    fig.tight_layout()
    _save(fig, path)


def save_fig6(path, thetas, results):
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 4.0), sharey=True)
    for ax, two_i in zip(axes, (3, 9)):
        for (t, eta), payload in sorted(results.items()):
            if t == two_i:
                ax.plot(thetas, payload[3], marker="o", ms=2.5, lw=1.0,
                        label=f"eta={eta:g}")
        ax.set_title(_spin_text(two_i), fontsize="small")
        ax.set_xlabel("theta_css (rad)")
        ax.set_ylim(-0.02, 1.02)
    axes[0].set_ylabel("duty cycle")
    axes[1].legend(fontsize="x-small")
    fig.tight_layout()
    _save(fig, path)


def save_fig7(path, transients, summaries):
    spins = sorted({two_i for two_i, _ in transients})
    fig = plt.figure(figsize=(10.0, 11.0))
    grid = fig.add_gridspec(5, 2, height_ratios=[1, 1, 1, 1, 1.2])
    for k, two_i in enumerate(spins):
        ax = fig.add_subplot(grid[k // 2, k % 2])
        for eta in (0.0, 0.5):
            tau, xi = transients[(two_i, eta)]
            ax.plot(tau, xi, lw=0.6, label=f"eta={eta:g}")
        ax.axhline(1.0, color="k", ls=":", lw=0.6)
        ax.set_title(_spin_text(two_i), fontsize="small")
        ax.set_ylabel("xi_S")
        if k == 0:
            ax.legend(fontsize="x-small")
    ax = fig.add_subplot(grid[4, :])
    for eta, marker in ((0.0, "o"), (0.5, "s")):
        xs = [s["two_i"] / 2 for s in summaries if s["eta"] == eta]
        ys = [s["terminal_xi_s"] for s in summaries if s["eta"] == eta]
        ax.plot(xs, ys, marker=marker, ms=5, lw=1.0, label=f"eta={eta:g}")
    ax.set_xlabel("I")
    ax.set_ylabel("terminal xi_S")
    ax.legend(fontsize="small")
    fig.tight_layout()
    _save(fig, path)


def save_fig8(path, panels, larmors):
    fig, axes = plt.subplots(3, 2, figsize=(9.0, 8.5), sharex=True)
    for col, two_i in enumerate((3, 9)):
        for row, larmor in enumerate(larmors):
            ax = axes[row, col]
            tau, xi_oat, xi_tac = panels[(two_i, larmor)]
            ax.plot(tau, xi_oat, lw=0.5, alpha=0.8, label="eta=0")
            ax.plot(tau, xi_tac, lw=0.5, alpha=0.8, label="eta=1")
            ax.axhline(1.0, color="k", ls=":", lw=0.6)
            ax.set_title(f"{_spin_text(two_i)}, larmor={larmor:g} f_Q",
                         fontsize="small")
            ax.set_ylabel("xi_S")
    axes[0, 0].legend(fontsize="x-small")
    for ax in axes[-1]:
        ax.set_xlabel("t (1/f_Q)")
    fig.tight_layout()
    _save(fig, path)


def save_fig9(path, series, f_q_hz, instants, fields, bars, m_values):
    fig = plt.figure(figsize=(12.0, 9.5))
    grid = fig.add_gridspec(3, 4, height_ratios=[1.1, 0.9, 0.9])
    labels = sorted(instants)
    for col, label in enumerate(labels):
        ax = fig.add_subplot(grid[0, col])
        field = fields[label]
        ax.pcolormesh(field.grid.phis, field.grid.thetas, field.values,
                      shading="nearest")
        ax.invert_yaxis()
        ax.set_title(f"instant {label}", fontsize="small")
        if col == 0:
            ax.set_ylabel("theta")
        ax.set_xlabel("phi")
    ax = fig.add_subplot(grid[1, :])
    tau = series.t * f_q_hz
    ax.plot(tau, series.xi_s, lw=0.6)
    ax.axhline(1.0, color="k", ls=":", lw=0.6)
    for label in labels:
        k = instants[label]
        ax.axvline(tau[k], color="tab:red", lw=0.8, alpha=0.7)
        ax.annotate(str(label), (tau[k], float(np.nanmax(series.xi_s))),
                    fontsize="small", color="tab:red")
    ax.set_xlabel("t (1/f_Q)")
    ax.set_ylabel("xi_S")
    width = 0.4
    for col, label in enumerate(labels):
        ax = fig.add_subplot(grid[2, col])
        ax.bar(m_values - width / 2, bars[label][0], width=width,
               color="tab:red", label="squeezed")
        ax.bar(m_values + width / 2, bars[label][1], width=width,
               color="tab:blue", label="anti-squeezed")
        ax.set_xlabel("m")
        if col == 0:
            ax.set_ylabel("|C_m|^2")
            ax.legend(fontsize="x-small")
    fig.tight_layout()
    _save(fig, path)
