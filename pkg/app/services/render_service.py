"""
Render Service - SVG heatmaps of importance matrices.

Time steps run horizontally, signals vertically. A score of 0 is white,
1 the darkest blue, linear in between.
"""
from pathlib import Path
from typing import List, Optional, Sequence, Union

from jinja2 import Template
from pydantic import ValidationError

from app.core.file_store import write_text_atomic
from app.services.explanation_store import load_explanation

CELL = 16
LABEL_WIDTH = 96
AXIS_HEIGHT = 20
TITLE_HEIGHT = 20
TICK_EVERY = 5
WHITE = (255, 255, 255)
DARK_BLUE = (8, 48, 107)

SVG_TEMPLATE = Template(
    """<svg xmlns="http://www.w3.org/2000/svg" width="{{ width }}" height="{{ height }}" \
viewBox="0 0 {{ width }} {{ height }}" font-family="sans-serif" font-size="10">
<title>{{ title }}</title>
<text x="{{ label_width }}" y="{{ title_height - 6 }}">{{ title }}</text>
{% for row in rows -%}
<text x="{{ label_width - 4 }}" y="{{ row.y + cell - 4 }}" text-anchor="end">{{ row.name }}</text>
{% for c in row.cells -%}
<rect x="{{ c.x }}" y="{{ row.y }}" width="{{ cell }}" height="{{ cell }}" fill="{{ c.fill }}" \
stroke="#dddddd" stroke-width="0.5"><title>t={{ c.t }} {{ row.name }} score={{ c.score }}</title></rect>
{% endfor -%}
{% endfor -%}
{% for tick in ticks -%}
<text x="{{ tick.x }}" y="{{ axis_y }}" text-anchor="middle">{{ tick.t }}</text>
{% endfor -%}
</svg>
""",
    autoescape=True,
    keep_trailing_newline=True,
)


class RenderError(Exception):
    """Raised when an explanation file cannot be rendered."""
    pass


def score_color(score: float) -> str:
    """Hex color for a score in [0, 1]."""
    score = min(1.0, max(0.0, score))
    channels = [round(w + (d - w) * score) for w, d in zip(WHITE, DARK_BLUE)]
    return "#{:02x}{:02x}{:02x}".format(*channels)


def render_heatmap(
    importance: Sequence[Sequence[float]],
    signal_names: Optional[Sequence[str]] = None,
    title: str = "",
) -> str:
    """
    Build the SVG document for a T×V matrix indexed [t][s].

    Raises:
        RenderError: If the matrix is empty or ragged.
    """
    T = len(importance)
    if T == 0 or not importance[0]:
        raise RenderError("empty importance matrix")
    V = len(importance[0])
    if any(len(row) != V for row in importance):
        raise RenderError("ragged importance matrix")
    names: List[str] = list(signal_names) if signal_names else [f"s{s}" for s in range(V)]
    if len(names) != V:
        raise RenderError(f"{len(names)} signal names for {V} signals")

    rows = []
    for s, name in enumerate(names):
        cells = []
        for t in range(T):
            score = float(importance[t][s])
            cells.append({"t": t, "x": LABEL_WIDTH + t * CELL, "fill": score_color(score), "score": f"{score:.4f}"})
        rows.append({"name": name, "y": TITLE_HEIGHT + s * CELL, "cells": cells})

    return SVG_TEMPLATE.render(
        width=LABEL_WIDTH + T * CELL,
        height=TITLE_HEIGHT + V * CELL + AXIS_HEIGHT,
        title=title,
        label_width=LABEL_WIDTH,
        title_height=TITLE_HEIGHT,
        cell=CELL,
        rows=rows,
        ticks=[{"t": t, "x": LABEL_WIDTH + t * CELL + CELL // 2} for t in range(0, T, TICK_EVERY)],
        axis_y=TITLE_HEIGHT + V * CELL + AXIS_HEIGHT - 6,
    )


def render_explanation_file(explanation_path: Union[str, Path], out_path: Union[str, Path]) -> Path:
    """
    Render an explanation JSON file to SVG.

    Raises:
        RenderError: On a missing or malformed explanation file.
    """
    try:
        explanation = load_explanation(explanation_path)
    except FileNotFoundError:
        raise RenderError(f"explanation file not found: {explanation_path}") from None
    except (ValidationError, ValueError) as e:
        raise RenderError(f"malformed explanation file {explanation_path}: {e}") from e
    title = f"{explanation.instance_id} class={explanation.winner_class} status={explanation.status.value}"
    svg = render_heatmap(explanation.importance, explanation.signal_names or None, title)
    return write_text_atomic(out_path, svg)
