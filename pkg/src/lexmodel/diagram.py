"""SVG and ASCII rendering of a :class:`LinearLawModel`.

Coordinates in options are in display units, i.e. money divided by the
model's ``unit_scale`` (millions by default).  Defaults reproduce the
classic taxpayer-autonomy chart: x 0..5000, y 0..1000, both lines drawn
solid, dashed guides dropped from the equilibrium to both axes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from xml.sax.saxutils import escape

from .equilibrium import EquilibriumOutcome, EquilibriumPoint, LinearFn, LinearLawModel

LABEL_EQUILIBRIUM = "Legal equilibrium"
LABEL_RIGHTS = "Graph of rights"
LABEL_DUTIES = "Graph of duties"

ASCII_WIDTH = 80
ASCII_HEIGHT = 24
ASCII_RIGHTS = "*"
ASCII_DUTIES = "#"
ASCII_EQUILIBRIUM = "+"
ASCII_VGUIDE = ":"
ASCII_HGUIDE = "."


class DiagramOptionsError(ValueError):
    pass


@dataclass(frozen=True)
class DiagramOptions:
    x_range: tuple[float, float] = (0, 5000)
    y_range: tuple[float, float] = (0, 1000)
    width: int = 720
    height: int = 540
    margin_left: int = 80
    margin_right: int = 30
    margin_top: int = 50
    margin_bottom: int = 70
    line_width: int = 3
    guide_width: int = 2
    dash_pattern: str = "6,4"
    ticks: int = 5

    def validate(self) -> None:
        (x0, x1), (y0, y1) = self.x_range, self.y_range
        if not x0 < x1:
            raise DiagramOptionsError(f"empty or inverted x-range {self.x_range}")
        if not y0 < y1:
            raise DiagramOptionsError(f"empty or inverted y-range {self.y_range}")
        if self.width <= self.margin_left + self.margin_right or self.height <= self.margin_top + self.margin_bottom:
            raise DiagramOptionsError("canvas too small for its margins")
        if self.ticks < 1:
            raise DiagramOptionsError("ticks must be at least 1")


@dataclass(frozen=True)
class _Scene:
    """Model geometry in display units, shared by both renderers."""

    x_range: tuple[Fraction, Fraction]
    y_range: tuple[Fraction, Fraction]
    rights: list[tuple[Fraction, Fraction]]
    duties: list[tuple[Fraction, Fraction]]
    equilibrium: tuple[Fraction, Fraction] | None
    labels: list[tuple[str, str, Fraction, Fraction, str]]  # (css class, text, x, y, anchor)


def _scaled(fn: LinearFn, scale: int) -> tuple[Fraction, Fraction]:
    # y/scale = slope * (x/scale) + intercept/scale
    return fn.slope, fn.intercept.to_fraction() / scale


def _clip(slope: Fraction, intercept: Fraction, xr, yr) -> list[tuple[Fraction, Fraction]]:
    """Clip ``y = slope*x + intercept`` to the box; [] if it misses it."""
    lo, hi = xr
    if slope != 0:
        xa = (yr[0] - intercept) / slope
        xb = (yr[1] - intercept) / slope
        lo = max(lo, min(xa, xb))
        hi = min(hi, max(xa, xb))
    elif not yr[0] <= intercept <= yr[1]:
        return []
    if lo > hi:
        return []
    return [(lo, slope * lo + intercept), (hi, slope * hi + intercept)]


def _scene(model: LinearLawModel, eq: EquilibriumOutcome | None, opts: DiagramOptions) -> _Scene:
    opts.validate()
    xr = (Fraction(opts.x_range[0]), Fraction(opts.x_range[1]))
    yr = (Fraction(opts.y_range[0]), Fraction(opts.y_range[1]))
    xspan, yspan = xr[1] - xr[0], yr[1] - yr[0]
    rs, ri = _scaled(model.rights, model.unit_scale)
    ds, di = _scaled(model.duties, model.unit_scale)

    point = None
    if isinstance(eq, EquilibriumPoint):
        ex = eq.income / model.unit_scale
        ey = eq.responsibility / model.unit_scale
        if xr[0] <= ex <= xr[1] and yr[0] <= ey <= yr[1]:
            point = (ex, ey)

    # label offsets are fractions of the frame, tuned so the defaults land
    # at (2600, 460), (5000, 920) and (0, 580)
    labels = []
    if point is not None:
        labels.append(("label-equilibrium", LABEL_EQUILIBRIUM,
                       point[0] + xspan * Fraction(29, 1000), point[1] + yspan * Fraction(18, 1000), "start"))
    labels.append(("label-rights", LABEL_RIGHTS, xr[1], rs * xr[1] + ri + yspan * Fraction(2, 100), "end"))
    labels.append(("label-duties", LABEL_DUTIES, xr[0], ds * xr[0] + di + yspan * Fraction(275, 10000), "start"))

    return _Scene(
        x_range=xr,
        y_range=yr,
        rights=_clip(rs, ri, xr, yr),
        duties=_clip(ds, di, xr, yr),
        equilibrium=point,
        labels=labels,
    )


def _num(value: Fraction | float, places: int = 3) -> str:
    text = f"{float(round(Fraction(value), places)):.{places}f}"
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def _tick_values(lo: Fraction, hi: Fraction, n: int) -> list[Fraction]:
    return [lo + (hi - lo) * i / n for i in range(n + 1)]


def render_svg(model: LinearLawModel, eq: EquilibriumOutcome | None, opts: DiagramOptions | None = None) -> str:
    """Render the model as a standalone SVG 1.1 document."""
    opts = opts or DiagramOptions()
    scene = _scene(model, eq, opts)
    (x0, x1), (y0, y1) = scene.x_range, scene.y_range
    plot_w = opts.width - opts.margin_left - opts.margin_right
    plot_h = opts.height - opts.margin_top - opts.margin_bottom

    def px(x: Fraction) -> Fraction:
        return opts.margin_left + (x - x0) / (x1 - x0) * plot_w

    def py(y: Fraction) -> Fraction:
        return opts.margin_top + (y1 - y) / (y1 - y0) * plot_h

    def points(pts) -> str:
        return " ".join(f"{_num(px(x))},{_num(py(y))}" for x, y in pts)

    left, right = opts.margin_left, opts.margin_left + plot_w
    top, bottom = opts.margin_top, opts.margin_top + plot_h
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{opts.width}" height="{opts.height}" '
        f'viewBox="0 0 {opts.width} {opts.height}" font-family="sans-serif" font-size="13">',
        f'<rect class="background" x="0" y="0" width="{opts.width}" height="{opts.height}" fill="white"/>',
        f'<text class="title" x="{_num(Fraction(opts.width, 2))}" y="{opts.margin_top // 2 + 6}" '
        f'text-anchor="middle" font-size="16" font-weight="bold">{escape(model.title)}</text>',
        f'<rect class="frame" x="{left}" y="{top}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>',
    ]
    for v in _tick_values(x0, x1, opts.ticks):
        x = _num(px(v))
        out.append(f'<line class="tick" x1="{x}" y1="{bottom}" x2="{x}" y2="{bottom + 5}" stroke="black"/>')
        out.append(f'<text class="tick-label" x="{x}" y="{bottom + 20}" text-anchor="middle">{_num(v, 2)}</text>')
    for v in _tick_values(y0, y1, opts.ticks):
        y = _num(py(v))
        out.append(f'<line class="tick" x1="{left - 5}" y1="{y}" x2="{left}" y2="{y}" stroke="black"/>')
        out.append(f'<text class="tick-label" x="{left - 8}" y="{_num(py(v) + 4)}" text-anchor="end">{_num(v, 2)}</text>')
    out.append(
        f'<text class="axis-label x-axis" x="{_num(Fraction(left + right, 2))}" y="{opts.height - 20}" '
        f'text-anchor="middle">{escape(model.axis_labels[0])}</text>'
    )
    cy = _num(Fraction(top + bottom, 2))
    out.append(
        f'<text class="axis-label y-axis" x="20" y="{cy}" text-anchor="middle" '
        f'transform="rotate(-90 20 {cy})">{escape(model.axis_labels[1])}</text>'
    )

    if scene.equilibrium is not None:
        ex, ey = scene.equilibrium
        data = f'data-x="{_num(ex)}" data-y="{_num(ey)}"'
        style = f'stroke="black" stroke-width="{opts.guide_width}" stroke-dasharray="{opts.dash_pattern}"'
        out.append(
            f'<line class="guide guide-vertical" x1="{_num(px(ex))}" y1="{_num(py(y0))}" '
            f'x2="{_num(px(ex))}" y2="{_num(py(ey))}" {style} {data}/>'
        )
        out.append(
            f'<line class="guide guide-horizontal" x1="{_num(px(x0))}" y1="{_num(py(ey))}" '
            f'x2="{_num(px(ex))}" y2="{_num(py(ey))}" {style} {data}/>'
        )

    line_style = f'fill="none" stroke="black" stroke-width="{opts.line_width}"'
    out.append(f'<polyline class="line-rights" points="{points(scene.rights)}" {line_style}/>')
    out.append(f'<polyline class="line-duties" points="{points(scene.duties)}" {line_style}/>')

    for css, text, x, y, anchor in scene.labels:
        out.append(
            f'<text class="{css}" x="{_num(px(x))}" y="{_num(py(y))}" text-anchor="{anchor}">{escape(text)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_ascii(model: LinearLawModel, eq: EquilibriumOutcome | None, opts: DiagramOptions | None = None) -> str:
    """Render the model on an 80x24 character grid.

    Row 0 carries the y-axis label, rows 1-19 the plot, row 20 the x axis,
    row 21 tick values, row 22 the x-axis label and row 23 a legend.
    ``*`` marks rights, ``#`` duties, ``+`` the equilibrium cell, ``:`` and
    ``.`` the vertical and horizontal guides.
    """
    opts = opts or DiagramOptions()
    scene = _scene(model, eq, opts)
    (x0, x1), (y0, y1) = scene.x_range, scene.y_range
    gutter = 8
    cols = ASCII_WIDTH - gutter
    rows = 19
    grid = [[" "] * ASCII_WIDTH for _ in range(ASCII_HEIGHT)]

    def col(x: Fraction) -> int:
        return gutter + round((x - x0) / (x1 - x0) * (cols - 1))

    def row(y: Fraction) -> int:
        return 1 + round((y1 - y) / (y1 - y0) * (rows - 1))

    def put(r: int, c: int, text: str) -> None:
        for i, ch in enumerate(text):
            if 0 <= c + i < ASCII_WIDTH:
                grid[r][c + i] = ch

    put(0, 0, model.axis_labels[1][:ASCII_WIDTH])
    for r in range(1, rows + 1):
        grid[r][gutter - 1] = "|"
    for v in (y0, (y0 + y1) / 2, y1):
        put(row(v), 0, _num(v, 0).rjust(gutter - 2)[: gutter - 2])
    put(rows + 1, gutter - 1, "+" + "-" * cols)
    for v in (x0, (x0 + x1) / 2, x1):
        label = _num(v, 0)
        c = col(v) - len(label) // 2
        put(rows + 2, min(max(c, 0), ASCII_WIDTH - len(label)), label)
    xlab = model.axis_labels[0][:ASCII_WIDTH]
    put(rows + 3, max(0, (ASCII_WIDTH - len(xlab)) // 2), xlab)
    put(rows + 4, 0, f"{ASCII_RIGHTS} {LABEL_RIGHTS}   {ASCII_DUTIES} {LABEL_DUTIES}   {ASCII_EQUILIBRIUM} {LABEL_EQUILIBRIUM}")

    if scene.equilibrium is not None:
        ex, ey = scene.equilibrium
        ec, er = col(ex), row(ey)
        for r in range(er, rows + 1):
            grid[r][ec] = ASCII_VGUIDE
        for c in range(gutter, ec):
            grid[er][c] = ASCII_HGUIDE

    for pts, mark in ((scene.rights, ASCII_RIGHTS), (scene.duties, ASCII_DUTIES)):
        if not pts:
            continue
        (ax, ay), (bx, by) = pts
        slope = (by - ay) / (bx - ax) if bx != ax else Fraction(0)
        for c in range(col(ax), col(bx) + 1):
            x = x0 + Fraction(c - gutter, cols - 1) * (x1 - x0)
            y = ay + slope * (x - ax)
            if y0 <= y <= y1:
                grid[row(y)][c] = mark

    for css, text, x, y, anchor in scene.labels:
        c = col(x) if anchor == "start" else col(x) - len(text) + 1
        r = min(max(row(y) - 1, 1), rows)
        put(r, min(max(c, gutter), ASCII_WIDTH - len(text)), text)

    if scene.equilibrium is not None:
        grid[er][ec] = ASCII_EQUILIBRIUM
    return "\n".join("".join(line).rstrip() for line in grid) + "\n"


__all__ = [
    "DiagramOptions",
    "DiagramOptionsError",
    "LABEL_DUTIES",
    "LABEL_EQUILIBRIUM",
    "LABEL_RIGHTS",
    "render_ascii",
    "render_svg",
]
