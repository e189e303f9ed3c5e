"""NumPy fallback implementations of the hot per-frame kernels.

Semantics must match ``_core.pyx`` exactly; ``tests/test_kernels_parity.py``
enforces this whenever the compiled extension is available.
"""

import numpy as np

# 8-neighbour offsets, scan order irrelevant to the result
_NEIGHBOURS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def label_components(mask):
    """Label 8-connected components of a boolean mask.

    Returns (labels, count) where labels is int32, 0 = background and
    components are numbered 1..count in order of their first pixel in
    row-major scan order.
    """
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    labels = np.zeros((h, w), dtype=np.int32)
    count = 0
    for r0 in range(h):
        for c0 in range(w):
            if not mask[r0, c0] or labels[r0, c0]:
                continue
            count += 1
            stack = [(r0, c0)]
            labels[r0, c0] = count
            while stack:
                r, c = stack.pop()
                for dr, dc in _NEIGHBOURS:
                    rr, cc = r + dr, c + dc
                    if 0 <= rr < h and 0 <= cc < w and mask[rr, cc] and not labels[rr, cc]:
                        labels[rr, cc] = count
                        stack.append((rr, cc))
    return labels, count


def otsu_threshold(hist):
    """Pick the threshold maximizing between-class variance.

    ``hist`` is a 256-bin count histogram. Classes split as (<= t) vs (> t);
    ties go to the smallest t. Returns -1 when fewer than two bins are
    occupied (degenerate histogram, no meaningful split).
    """
    hist = np.asarray(hist, dtype=np.int64)
    if np.count_nonzero(hist) < 2:
        return -1
    levels = np.arange(256, dtype=np.int64)
    w0 = np.cumsum(hist)
    s0 = np.cumsum(hist * levels)
    total_w = w0[-1]
    total_s = s0[-1]
    w1 = total_w - w0
    s1 = total_s - s0
    # between-class variance is proportional to (s0*w1 - s1*w0)^2 / (w0*w1);
    # numerator fits in a double exactly for 8-bit frames of this size
    num = (s0 * w1 - s1 * w0).astype(np.float64)
    den = (w0 * w1).astype(np.float64)
    score = np.zeros(256)
    valid = den > 0
    score[valid] = num[valid] * num[valid] / den[valid]
    return int(np.argmax(score))


def bilinear_resize(src, out_h, out_w):
    """Corner-aligned bilinear upsample of a 2D float array.

    Source coordinate of output pixel i is i*(n_src-1)/(n_out-1), clamped to
    the source extent so the result never extrapolates.
    """
    src = np.asarray(src, dtype=np.float64)
    h, w = src.shape
    if out_h == h and out_w == w:
        return src.copy()
    sy = (h - 1.0) / (out_h - 1.0) if out_h > 1 else 0.0
    sx = (w - 1.0) / (out_w - 1.0) if out_w > 1 else 0.0
    ys = np.minimum(np.arange(out_h) * sy, h - 1.0)
    xs = np.minimum(np.arange(out_w) * sx, w - 1.0)
    y0 = np.minimum(ys.astype(np.int64), max(h - 2, 0))
    x0 = np.minimum(xs.astype(np.int64), max(w - 2, 0))
    fy = (ys - y0)[:, None]
    fx = (xs - x0)[None, :]
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    tl = src[np.ix_(y0, x0)]
    tr = src[np.ix_(y0, x1)]
    bl = src[np.ix_(y1, x0)]
    br = src[np.ix_(y1, x1)]
    top = tl + (tr - tl) * fx
    bot = bl + (br - bl) * fx
    return top + (bot - top) * fy
