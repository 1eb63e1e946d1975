"""Deterministic SVG rendering: scarf tracks, time axis, legend, and the
linked confidence bar panel.

All coordinates use fixed decimal formatting so identical inputs produce
byte-identical output.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .scarf import ScarfModel, Segment


class EmptySelectionError(ValueError):
    pass


@dataclass(frozen=True)
class RenderConfig:
    width_px: int = 960
    track_height_px: int = 48
    margin_px: int = 40
    time_tick_interval_ms: int = 1000
    show_legend: bool = True
    min_subsegment_fraction: float = 0.01
    font_size_px: int = 11
    track_gap_px: int = 22


def _f(x: float) -> str:
    return f"{x:.2f}"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def adjusted_heights(heights: list[float], min_fraction: float) -> list[float]:
    """Raise sliver sub-segments to min_fraction, renormalizing the rest.
    Render-time only; the model keeps true probabilities."""
    if not heights:
        return []
    total = sum(heights)
    if total <= 0:
        return heights
    fr = [h / total for h in heights]
    small = [i for i, h in enumerate(fr) if h < min_fraction]
    if not small or len(small) == len(fr):
        return fr
    reserved = min_fraction * len(small)
    rest = sum(fr[i] for i in range(len(fr)) if i not in small)
    scale = (1.0 - reserved) / rest
    return [min_fraction if i in small else fr[i] * scale for i in range(len(fr))]


def render_svg(models: list[ScarfModel], config: RenderConfig | None = None) -> str:
    """One track per model, stacked vertically, with a shared time axis in
    seconds and a label -> color legend. White segments are background."""
    config = config or RenderConfig()
    if not models:
        raise ValueError("no models to render")
    if any(not m.segments for m in models):
        warnings.warn("rendering an empty model: axis and empty track only")

    t0 = min((m.segments[0].t_start_ms for m in models if m.segments), default=0)
    t1 = max((m.segments[-1].t_end_ms for m in models if m.segments), default=0)
    duration = max(1, t1 - t0)
    palette = models[0].palette

    m = config.margin_px
    plot_w = config.width_px - 2 * m

    def x_of(t: int) -> float:
        return m + (t - t0) / duration * plot_w

    used_labels: list[str] = []
    for model in models:
        for seg in model.segments:
            for sub in seg.subsegments:
                if sub.label not in used_labels:
                    used_labels.append(sub.label)
    used_labels = [lbl for lbl in palette if lbl in used_labels]

    axis_h = 28
    legend_h = 22 if (config.show_legend and used_labels) else 0
    tracks_h = len(models) * (config.track_height_px + config.track_gap_px)
    height = m + tracks_h + axis_h + legend_h + m

    out: list[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{config.width_px}" height="{height}" '
        f'viewBox="0 0 {config.width_px} {height}" '
        f'font-family="sans-serif" font-size="{config.font_size_px}">'
    )
    out.append(f'<rect x="0" y="0" width="{config.width_px}" height="{height}" fill="#ffffff"/>')

    display_name = {"standard": "standard", "depth": "depth", "nn": "NN"}
    y = float(m)
    for model in models:
        out.append(f'<text x="{_f(m)}" y="{_f(y - 5)}" fill="#333333">{display_name.get(model.variant, model.variant)}</text>')
        out.append(
            f'<rect x="{_f(m)}" y="{_f(y)}" width="{_f(plot_w)}" '
            f'height="{config.track_height_px}" fill="none" stroke="#cccccc" stroke-width="1"/>'
        )
        for seg in model.segments:
            if not seg.subsegments:
                continue
            x = x_of(seg.t_start_ms)
            w = x_of(seg.t_end_ms) - x
            fracs = adjusted_heights(
                [s.height for s in seg.subsegments], config.min_subsegment_fraction
            )
            # depth_rank 0 is nearest the viewer and sits at the bottom
            y_cursor = y + config.track_height_px
            for sub, frac in zip(seg.subsegments, fracs):
                h = frac * config.track_height_px
                y_cursor -= h
                color = palette.get(sub.label, "#999999")
                out.append(
                    f'<rect x="{_f(x)}" y="{_f(y_cursor)}" width="{_f(w)}" '
                    f'height="{_f(h)}" fill="{color}"/>'
                )
        y += config.track_height_px + config.track_gap_px

    # time axis, labeled in seconds
    axis_y = y + 4
    out.append(
        f'<line x1="{_f(m)}" y1="{_f(axis_y)}" x2="{_f(m + plot_w)}" y2="{_f(axis_y)}" '
        f'stroke="#333333" stroke-width="1"/>'
    )
    t = t0
    while t <= t1:
        x = x_of(t)
        out.append(
            f'<line x1="{_f(x)}" y1="{_f(axis_y)}" x2="{_f(x)}" y2="{_f(axis_y + 5)}" '
            f'stroke="#333333" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_f(x)}" y="{_f(axis_y + 16)}" text-anchor="middle" '
            f'fill="#333333">{(t - t0) / 1000:g}s</text>'
        )
        t += config.time_tick_interval_ms

    if config.show_legend and used_labels:
        lx = float(m)
        ly = axis_y + 28
        for label in used_labels:
            out.append(
                f'<rect x="{_f(lx)}" y="{_f(ly - 9)}" width="10" height="10" '
                f'fill="{palette[label]}"/>'
            )
            out.append(f'<text x="{_f(lx + 14)}" y="{_f(ly)}" fill="#333333">{_esc(label)}</text>')
            lx += 14 + 7 * len(label) + 20

    out.append("</svg>")
    return "\n".join(out) + "\n"


def _labels_in_selection(models: dict, t0: int, t1: int) -> list[str]:
    labels: list[str] = []
    for model in models.values():
        for seg in model["segments"]:
            if seg["t_end_ms"] <= t0 or seg["t_start_ms"] >= t1:
                continue
            for sub in seg["subsegments"]:
                if sub["label"] not in labels:
                    labels.append(sub["label"])
    return labels


def render_confidence_panel(export: dict, t0: int, t1: int, config: RenderConfig | None = None) -> str:
    """Horizontal confidence bars for the labels gazed at in [t0, t1].

    Takes the analysis export (see export module); bar length encodes the
    duration-weighted mean confidence of each label's detections within the
    selection, annotated with the numeric value.
    """
    config = config or RenderConfig()
    labels = _labels_in_selection(export["models"], t0, t1)
    if not labels:
        raise EmptySelectionError(f"no labeled segments in [{t0}, {t1}]")

    palette = export["palette"]
    means: dict[str, float] = {}
    for label in labels:
        series = export["confidence"].get(label, {}).get("series", [])
        points = [(t, c) for t, c in series if t0 <= t <= t1]
        if not points:
            points = [(t, c) for t, c in series]
        if not points:
            continue
        if len(points) == 1:
            means[label] = points[0][1]
        else:
            ws = [points[i + 1][0] - points[i][0] for i in range(len(points) - 1)]
            ws.append(ws[-1])
            total = sum(ws) or len(points)
            means[label] = sum(w * c for w, (_, c) in zip(ws, points)) / total

    m = config.margin_px
    bar_h = 16
    row_h = 26
    label_w = 120
    bar_area = config.width_px - 2 * m - label_w - 60
    height = 2 * m + row_h * len(means) + 20

    out: list[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{config.width_px}" height="{height}" '
        f'viewBox="0 0 {config.width_px} {height}" '
        f'font-family="sans-serif" font-size="{config.font_size_px}">'
    )
    out.append(f'<rect x="0" y="0" width="{config.width_px}" height="{height}" fill="#ffffff"/>')
    out.append(
        f'<text x="{_f(m)}" y="{_f(m - 8)}" fill="#333333">detection confidence, '
        f"{t0 / 1000:g}s to {t1 / 1000:g}s</text>"
    )
    y = float(m)
    for label in labels:
        if label not in means:
            continue
        c = means[label]
        color = palette.get(label, "#999999")
        out.append(f'<text x="{_f(m)}" y="{_f(y + 12)}" fill="#333333">{_esc(label)}</text>')
        out.append(
            f'<rect x="{_f(m + label_w)}" y="{_f(y)}" width="{_f(bar_area)}" '
            f'height="{bar_h}" fill="none" stroke="#cccccc" stroke-width="1"/>'
        )
        out.append(
            f'<rect x="{_f(m + label_w)}" y="{_f(y)}" width="{_f(c * bar_area)}" '
            f'height="{bar_h}" fill="{color}"/>'
        )
        out.append(
            f'<text x="{_f(m + label_w + bar_area + 8)}" y="{_f(y + 12)}" '
            f'fill="#333333">{c:.2f}</text>'
        )
        y += row_h
    out.append("</svg>")
    return "\n".join(out) + "\n"
