"""backend.utils.svg_writer
+------------------------------------------------
Plain-text SVG figures: polylines, axes and labels in data coordinates.

Example
-------
>>> svg = SvgWriter(x_range=(0.0, 1.0), y_range=(0.0, 1.0))
>>> svg.add_axes()
>>> svg.add_polyline([[0.0, 0.0], [1.0, 1.0]], stroke="#888")
>>> svg.to_string().startswith("<svg")
True
"""

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from backend.exceptions import DomainError, UsageError

PALETTE: tuple[str, ...] = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


class SvgWriter:
    """Accumulate SVG elements and serialize them."""

    def __init__(
        self,
        x_range: tuple[float, float],
        y_range: tuple[float, float],
        width: int = 600,
        height: int = 600,
        margin: int = 40,
    ) -> None:
        if not (x_range[0] < x_range[1] and y_range[0] < y_range[1]):
            raise DomainError(f"empty plot range x={x_range}, y={y_range}")
        self.__x_range = x_range
        self.__y_range = y_range
        self.__width = width
        self.__height = height
        self.__margin = margin
        self.__elements: list[str] = []

    def __to_pixels(self, points: np.ndarray) -> np.ndarray:
        (x0, x1), (y0, y1) = self.__x_range, self.__y_range
        inner_w = self.__width - 2 * self.__margin
        inner_h = self.__height - 2 * self.__margin
        px = self.__margin + (points[:, 0] - x0) / (x1 - x0) * inner_w
        # SVG y grows downwards
        py = self.__height - self.__margin - (points[:, 1] - y0) / (y1 - y0) * inner_h
        return np.column_stack([px, py])

    def add_polyline(
        self, points: object, stroke: str = "#000000", stroke_width: float = 1.0
    ) -> None:
        arr = np.asarray(points, dtype=float).reshape(-1, 2)
        if arr.shape[0] < 2:
            return
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in self.__to_pixels(arr))
        self.__elements.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{stroke_width}" />'
        )

    def add_label(self, x: float, y: float, text: str, size: int = 12) -> None:
        px, py = self.__to_pixels(np.array([[x, y]]))[0]
        self.__elements.append(
            f'<text x="{px:.2f}" y="{py:.2f}" font-size="{size}">{escape(text)}</text>'
        )

    def add_axes(self, x_label: str = "", y_label: str = "") -> None:
        """Frame the plot area and write the range ends as tick labels."""
        (x0, x1), (y0, y1) = self.__x_range, self.__y_range
        corners = np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]])
        self.add_polyline(corners, stroke="#444444")
        self.add_label(x0, y0, f"{x0:g}", size=10)
        self.add_label(x1, y0, f"{x1:g}", size=10)
        self.add_label(x0, y1, f"{y1:g}", size=10)
        if x_label:
            self.add_label(0.5 * (x0 + x1), y0, x_label)
        if y_label:
            self.add_label(x0, 0.5 * (y0 + y1), y_label)

    def to_string(self) -> str:
        header = (
            f'<svg width="{self.__width}" height="{self.__height}" '
            f'viewBox="0 0 {self.__width} {self.__height}" '
            'xmlns="http://www.w3.org/2000/svg">'
        )
        body = "\n".join(f"  {element}" for element in self.__elements)
        return f"{header}\n{body}\n</svg>\n"

    def write(self, path: str | Path) -> None:
        try:
            Path(path).write_text(self.to_string(), encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot write figure {str(path)!r}: {exc}") from exc
