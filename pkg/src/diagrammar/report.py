"""Figures for the command line: loss curves and drawings as PNG files."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from diagrammar.layout import box_kind, box_label  # noqa: E402


def plot_loss(trace, path):
    figure, axes = plt.subplots(figsize=(5, 3.5))
    axes.plot(range(len(trace)), trace, color="black")
    axes.set_xlabel("iteration")
    axes.set_ylabel("loss")
    axes.set_yscale("log" if min(trace) > 0 else "linear")
    figure.tight_layout()
    figure.savefig(path, dpi=100)
    plt.close(figure)


def plot_graph(graph, path):
    """Render a plane graph with straight wires and labeled boxes."""
    figure, axes = plt.subplots(figsize=(5, 5))
    boxes = {node: box_kind(node.label) for node in graph.boxes()}
    for source, target in graph.edges:
        (x0, y0), (x1, y1) = graph.positions[source], graph.positions[target]
        axes.plot([x0, x1], [-y0, -y1], color="black", linewidth=1)
    for node, kind in boxes.items():
        x, y = graph.positions[node]
        if kind == "spider":
            axes.plot([x], [-y], "o", color="black")
        elif kind == "box" or kind == "bubble":
            axes.text(x, -y, box_label(node.label), ha="center", va="center",
                      bbox={"boxstyle": "round" if kind == "bubble" else "square",
                            "facecolor": "white"})
    axes.set_axis_off()
    figure.savefig(path, dpi=100)
    plt.close(figure)
