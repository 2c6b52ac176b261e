"""Static SVG rendering of lemniscates.

The curve |P(z)| = 1 is the zero set of a real bivariate polynomial, so
it is drawn by sampling that polynomial's sign on a grid and running
marching squares over the cells; each sign-change edge contributes one
linearly interpolated crossing point.
"""

import numpy

from ._kernels import grid_eval
from .curves import lemniscate_poly

__all__ = ["lemniscate_segments", "lemniscate_svg"]

DEFAULT_BOX = (-2.0, -2.0, 2.0, 2.0)


def _real_matrix(lp):
    mat = numpy.array(lp.numeric_matrix(53), dtype=complex)
    return numpy.ascontiguousarray(mat.real)


def _cross(va, vb, a, b):
    t = va / (va - vb)
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def lemniscate_segments(p, box=DEFAULT_BOX, samples=512):
    """Line segments approximating {|p| = 1} inside the box.

    Returns a list of endpoint pairs in plane coordinates.  Cells whose
    corners straddle zero get one segment per crossing pair; saddle cells
    are disambiguated by the sign at the cell center.
    """
    x0, y0, x1, y1 = (float(v) for v in box)
    if not (x0 < x1 and y0 < y1):
        raise ValueError("box must satisfy x0 < x1 and y0 < y1")
    if samples < 2:
        raise ValueError("need at least a 2x2 sample grid")
    lp = lemniscate_poly(p)
    cmat = _real_matrix(lp)
    xs = numpy.linspace(x0, x1, samples)
    ys = numpy.linspace(y0, y1, samples)
    vals = grid_eval(cmat, xs, ys)

    segments = []
    for iy in range(samples - 1):
        for ix in range(samples - 1):
            v00 = vals[iy, ix]
            v10 = vals[iy, ix + 1]
            v01 = vals[iy + 1, ix]
            v11 = vals[iy + 1, ix + 1]
            code = (
                (1 if v00 > 0 else 0)
                | (2 if v10 > 0 else 0)
                | (4 if v11 > 0 else 0)
                | (8 if v01 > 0 else 0)
            )
            if code in (0, 15):
                continue
            p00 = (xs[ix], ys[iy])
            p10 = (xs[ix + 1], ys[iy])
            p01 = (xs[ix], ys[iy + 1])
            p11 = (xs[ix + 1], ys[iy + 1])
            bottom = lambda: _cross(v00, v10, p00, p10)
            top = lambda: _cross(v01, v11, p01, p11)
            left = lambda: _cross(v00, v01, p00, p01)
            right = lambda: _cross(v10, v11, p10, p11)
            if code in (1, 14):
                segments.append((bottom(), left()))
            elif code in (2, 13):
                segments.append((bottom(), right()))
            elif code in (3, 12):
                segments.append((left(), right()))
            elif code in (4, 11):
                segments.append((top(), right()))
            elif code in (6, 9):
                segments.append((bottom(), top()))
            elif code in (7, 8):
                segments.append((top(), left()))
            else:
                # saddle: split according to the center sign
                center = (v00 + v10 + v01 + v11) / 4.0
                if (code == 5) == (center > 0):
                    segments.append((bottom(), right()))
                    segments.append((top(), left()))
                else:
                    segments.append((bottom(), left()))
                    segments.append((top(), right()))
    return segments


def lemniscate_svg(p, box=DEFAULT_BOX, samples=512):
    """SVG 1.1 document drawing {|p| = 1} over the box."""
    x0, y0, x1, y1 = (float(v) for v in box)
    segments = lemniscate_segments(p, box, samples)
    w = h = 512
    sx = w / (x1 - x0)
    sy = h / (y1 - y0)

    def to_px(pt):
        return ((pt[0] - x0) * sx, (y1 - pt[1]) * sy)

    parts = []
    for a, b in segments:
        ax, ay = to_px(a)
        bx, by = to_px(b)
        parts.append(f"M{ax:.2f} {ay:.2f}L{bx:.2f} {by:.2f}")
    path = "".join(parts)
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n'
        f'<rect width="{w}" height="{h}" fill="white"/>\n'
        f'<path d="{path}" fill="none" stroke="black" stroke-width="1"/>\n'
        "</svg>\n"
    )
