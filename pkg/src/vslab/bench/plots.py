"""Static SVG line charts rendered from the experiment CSVs alone."""
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .io import read_csv, to_float  # noqa: E402

# fixed element ids and no timestamp, so identical CSVs give identical SVG bytes
plt.rcParams["svg.hashsalt"] = "vslab"
plt.rcParams["svg.fonttype"] = "none"


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def fig1_svg(csv_path, svg_path):
    rows = read_csv(csv_path)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    series = defaultdict(list)
    for r in rows:
        g = to_float(r["gamma"])
        key = int(r["d"]) if r["family"] == "cone" else None
        for name in ("mc", "lemma2", "eq4", "eq5"):
            v = to_float(r[name])
            if v is not None and v > 0:
                series[(key, name)].append((g, v))
    styles = {"mc": "o", "lemma2": "-", "eq4": "--", "eq5": ":"}
    for (key, name), pts in sorted(series.items(), key=lambda kv: (kv[0][0] or 0, kv[0][1])):
        pts.sort()
        label = name if key is None else f"{name} D={key}"
        xs, ys = zip(*pts)
        ax.plot(xs, ys, styles[name], label=label, markersize=4)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("margin")
    ax.set_ylabel("Pr[w in version space]")
    ax.legend(fontsize=6, ncol=2)
    return _save(fig, svg_path)


def scaling_svg(csv_path, svg_path):
    rows = read_csv(csv_path)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    by_variant = defaultdict(list)
    for r in rows:
        col = "mean_quantum_queries" if r["variant"] == "quantum" else "mean_classical_queries"
        by_variant[r["variant"]].append((int(r["n"]), to_float(r[col])))
    for variant, pts in sorted(by_variant.items()):
        pts.sort()
        xs, ys = zip(*pts)
        ax.plot(xs, ys, "o-", label=variant)
    ax.set_xscale("log", base=2)
    ax.set_yscale("log")
    ax.set_xlabel("N")
    ax.set_ylabel("mean queries")
    ax.legend()
    return _save(fig, svg_path)


def walkdemo_svg(csv_path, svg_path):
    rows = read_csv(csv_path)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    rounds = [int(r["round"]) for r in rows]
    for col in ("vs_mass", "overlap", "target_fidelity"):
        ax.plot(rounds, [to_float(r[col]) for r in rows], "o-", label=col)
    ax.axhline(1.0 / 3.0, color="grey", lw=0.8, ls="--")
    ax.set_xlabel("accepted cut")
    ax.set_ylim(0.0, 1.05)
    ax.legend()
    return _save(fig, svg_path)
