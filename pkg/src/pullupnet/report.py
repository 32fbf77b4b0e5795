"""Figures for runs and corpus sweeps, rendered headless to PNG."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_net_preview(plan, path):
    """Draw every piece: outline, dashed creases, holes, and string route."""
    from .fabricate import _outline_loops, _piece_bbox

    fig, ax = plt.subplots(figsize=(8, 6))
    offset = 0.0
    gap = 0.12
    for piece in plan["pieces"]:
        x0, _, x1, _ = _piece_bbox(piece)
        dx = offset - x0
        for loop in _outline_loops(piece):
            xs = [x + dx for x, _ in loop] + [loop[0][0] + dx]
            ys = [y for _, y in loop] + [loop[0][1]]
            ax.plot(xs, ys, color="#c22", linewidth=1.2)
        for crease in piece["creases"]:
            ax.plot([crease["a"][0] + dx, crease["b"][0] + dx],
                    [crease["a"][1], crease["b"][1]],
                    color="#25c", linewidth=0.8, linestyle="--")
        centers = {h["id"]: h["center"] for h in piece["holes"]}
        for h in piece["holes"]:
            ax.add_patch(plt.Circle((h["center"][0] + dx, h["center"][1]),
                                    h["radius"], fill=False, color="#222",
                                    linewidth=0.8))
        route = [centers[i] for i in piece["string_order"]]
        if len(route) >= 2:
            ax.plot([p[0] + dx for p in route], [p[1] for p in route],
                    color="#2a2", linewidth=0.7, alpha=0.8)
        offset += (x1 - x0) + gap * max(x1 - x0, 1.0)
    ax.set_aspect("equal")
    ax.set_title("%s (%s, %d piece%s)" % (
        plan["meta"]["mesh"], plan["meta"]["heuristic"],
        len(plan["pieces"]), "" if len(plan["pieces"]) == 1 else "s"))
    ax.set_axis_off()
    fig.savefig(path, dpi=110, bbox_inches="tight")
    plt.close(fig)
    return path


def render_corpus_overview(rows, path):
    """Status counts and the distributions of holes and string cost."""
    fig, axes = plt.subplots(1, 3, figsize=(13, 4))

    statuses = {}
    for row in rows:
        statuses[row["status"]] = statuses.get(row["status"], 0) + 1
    labels = sorted(statuses)
    axes[0].bar(labels, [statuses[s] for s in labels], color="#47a")
    axes[0].set_title("status (%d solids)" % len(rows))
    axes[0].tick_params(axis="x", rotation=30)

    holes = [int(r["holes"]) for r in rows if r["status"] == "ok"]
    if holes:
        axes[1].hist(holes, bins=20, color="#4a7")
    axes[1].set_title("holes per solid")
    axes[1].set_xlabel("holes")

    costs = [float(r["string_cost"]) for r in rows if r["status"] == "ok"]
    if costs:
        axes[2].hist(costs, bins=20, color="#a74")
    axes[2].set_title("string cost")
    axes[2].set_xlabel("cost (sheet units)")

    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path
