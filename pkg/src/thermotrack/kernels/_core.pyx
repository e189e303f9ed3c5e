# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-frame kernels: component labeling, Otsu, bilinear resize.

Must stay semantically identical to the NumPy fallback in ``_py.py``.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def label_components(mask):
    """Label 8-connected components; see ``_py.label_components``."""
    cdef cnp.ndarray[cnp.uint8_t, ndim=2, mode='c'] m = \
        np.ascontiguousarray(mask, dtype=np.uint8)
    cdef int h = m.shape[0]
    cdef int w = m.shape[1]
    cdef cnp.ndarray[cnp.int32_t, ndim=2, mode='c'] labels = \
        np.zeros((h, w), dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1, mode='c'] stack = \
        np.empty(h * w, dtype=np.int32)
    cdef int count = 0, top, r0, c0, r, c, rr, cc, dr, dc, idx
    for r0 in range(h):
        for c0 in range(w):
            if m[r0, c0] == 0 or labels[r0, c0] != 0:
                continue
            count += 1
            labels[r0, c0] = count
            stack[0] = r0 * w + c0
            top = 1
            while top > 0:
                top -= 1
                idx = stack[top]
                r = idx // w
                c = idx % w
                for dr in range(-1, 2):
                    for dc in range(-1, 2):
                        if dr == 0 and dc == 0:
                            continue
                        rr = r + dr
                        cc = c + dc
                        if 0 <= rr < h and 0 <= cc < w and m[rr, cc] != 0 \
                                and labels[rr, cc] == 0:
                            labels[rr, cc] = count
                            stack[top] = rr * w + cc
                            top += 1
    return np.asarray(labels), count


def otsu_threshold(hist):
    """Between-class-variance maximizing threshold; see ``_py.otsu_threshold``."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode='c'] hh = \
        np.ascontiguousarray(hist, dtype=np.int64)
    cdef long long total_w = 0, total_s = 0, w0, s0, w1, s1, num_i
    cdef int t, best = -1, occupied = 0
    cdef double score, best_score = -1.0, num, den
    for t in range(256):
        total_w += hh[t]
        total_s += hh[t] * t
        if hh[t] > 0:
            occupied += 1
    if occupied < 2:
        return -1
    w0 = 0
    s0 = 0
    for t in range(256):
        w0 += hh[t]
        s0 += hh[t] * t
        w1 = total_w - w0
        s1 = total_s - s0
        if w0 == 0 or w1 == 0:
            score = 0.0
        else:
            num = <double> (s0 * w1 - s1 * w0)
            den = <double> (w0 * w1)
            score = num * num / den
        if score > best_score:
            best_score = score
            best = t
    return best


def bilinear_resize(src, int out_h, int out_w):
    """Corner-aligned bilinear upsample; see ``_py.bilinear_resize``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode='c'] s = \
        np.ascontiguousarray(src, dtype=np.float64)
    cdef int h = s.shape[0]
    cdef int w = s.shape[1]
    if out_h == h and out_w == w:
        return s.copy()
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode='c'] out = \
        np.empty((out_h, out_w), dtype=np.float64)
    cdef double sy = (h - 1.0) / (out_h - 1.0) if out_h > 1 else 0.0
    cdef double sx = (w - 1.0) / (out_w - 1.0) if out_w > 1 else 0.0
    cdef int i, j, y0, x0, y1, x1, ymax0, xmax0
    cdef double y, x, fy, fx, tl, tr, bl, br, top, bot
    ymax0 = h - 2 if h >= 2 else 0
    xmax0 = w - 2 if w >= 2 else 0
    for i in range(out_h):
        y = i * sy
        if y > h - 1.0:
            y = h - 1.0
        y0 = <int> y
        if y0 > ymax0:
            y0 = ymax0
        fy = y - y0
        y1 = y0 + 1 if y0 + 1 < h else h - 1
        for j in range(out_w):
            x = j * sx
            if x > w - 1.0:
                x = w - 1.0
            x0 = <int> x
            if x0 > xmax0:
                x0 = xmax0
            fx = x - x0
            x1 = x0 + 1 if x0 + 1 < w else w - 1
            tl = s[y0, x0]
            tr = s[y0, x1]
            bl = s[y1, x0]
            br = s[y1, x1]
            top = tl + (tr - tl) * fx
            bot = bl + (br - bl) * fx
            out[i, j] = top + (bot - top) * fy
    return np.asarray(out)
