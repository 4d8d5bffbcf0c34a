"""Minimal SVG writing: enough for trace plots and set diagrams, no deps."""


def _fmt(x):
    return f"{x:.2f}".rstrip("0").rstrip(".")


class SvgCanvas:
    def __init__(self, width=640, height=640, background="#ffffff"):
        self.width = width
        self.height = height
        self.parts = [
            f'<rect x="0" y="0" width="{width}" height="{height}" fill="{background}"/>'
        ]

    def polyline(self, pts, stroke="#1f77b4", width=1.5, fill="none", dash=None):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<polyline points="{coords}" fill="{fill}" stroke="{stroke}" '
            f'stroke-width="{width}"{extra}/>'
        )

    def line(self, x1, y1, x2, y2, stroke="#888888", width=1.0, dash=None):
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
            f'stroke="{stroke}" stroke-width="{width}"{extra}/>'
        )

    def circle(self, cx, cy, r, stroke="#888888", fill="none", width=1.0):
        self.parts.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" '
            f'stroke="{stroke}" fill="{fill}" stroke-width="{width}"/>'
        )

    def rect(self, x, y, w, h, fill="#dddddd", stroke="none"):
        self.parts.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" height="{_fmt(h)}" '
            f'fill="{fill}" stroke="{stroke}"/>'
        )

    def text(self, x, y, s, size=12, anchor="start", color="#222222"):
        self.parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="{size}" '
            f'font-family="sans-serif" text-anchor="{anchor}" fill="{color}">{s}</text>'
        )

    def to_string(self):
        body = "\n".join(self.parts)
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">\n'
            f"{body}\n</svg>\n"
        )

    def write(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_string())


def fit_transform(xs, ys, width, height, margin=40):
    """Map data bounding box to the canvas, preserving aspect ratio;
    returns a (x, y) -> (px, py) function with y flipped for screen space."""
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    span_x = max(x_hi - x_lo, 1e-12)
    span_y = max(y_hi - y_lo, 1e-12)
    scale = min((width - 2 * margin) / span_x, (height - 2 * margin) / span_y)
    cx, cy = 0.5 * (x_lo + x_hi), 0.5 * (y_lo + y_hi)

    def tf(x, y):
        return (
            width / 2 + (x - cx) * scale,
            height / 2 - (y - cy) * scale,
        )

    return tf
