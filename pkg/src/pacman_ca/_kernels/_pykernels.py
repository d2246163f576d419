"""Pure numpy implementations of the hot kernels.

These mirror ``_ckernels.pyx`` exactly and are used whenever the compiled
extension is unavailable (or ``PACMAN_CA_PURE=1`` is set).
"""
import numpy as np


def _weights(nsym, span):
    return nsym ** np.arange(span - 1, -1, -1, dtype=np.intp)


def step_row(table, nsym, span, row):
    row = np.asarray(row, dtype=np.uint8)
    n = row.shape[0] - span + 1
    if n <= 0:
        return np.empty(0, dtype=np.uint8)
    idx = np.zeros(n, dtype=np.intp)
    for j, w in enumerate(_weights(nsym, span)):
        idx += row[j:j + n].astype(np.intp) * w
    return table[idx]


def _runs(cells, split_gap):
    """Group sorted cell indices into intervals, joining across short gaps."""
    if not cells.size:
        return []
    cuts = np.flatnonzero(np.diff(cells) > split_gap)
    starts = np.concatenate(([0], cuts + 1))
    ends = np.concatenate((cuts, [cells.size - 1]))
    return [[int(cells[s]), int(cells[e])] for s, e in zip(starts, ends)]


def evolve_band(table, nsym, m, a, r, buf, H, rect_lo, rect_w, keep_rows, split_gap=16):
    """Advance ``buf`` ``H`` steps in place.

    A cell whose neighborhood did not change on the previous step keeps its
    value, so only cells within reach of a changed cell are recomputed. The
    first step recomputes everything. Row ``t`` is valid on
    ``[r*t, L-1-r*t]``.
    """
    L = buf.shape[0]
    span = a - m + 1
    grow_left = max(a, 0)
    grow_right = max(-m, 0)
    weights = _weights(nsym, span)
    rect = np.empty((H + 1, rect_w), dtype=np.uint8)
    rect[0] = buf[rect_lo:rect_lo + rect_w]
    rows = [buf.copy()] if keep_rows else None
    active = [[0, L - 1]]
    for t in range(H):
        row_lo = r * (t + 1)
        row_hi = L - 1 - r * (t + 1)
        merged = []
        for lo, hi in active:
            nlo = max(lo - grow_left, row_lo)
            nhi = min(hi + grow_right, row_hi)
            if nlo > nhi:
                continue
            if merged and nlo <= merged[-1][1] + 1:
                merged[-1][1] = max(merged[-1][1], nhi)
            else:
                merged.append([nlo, nhi])
        updates = []
        for nlo, nhi in merged:
            k = nhi - nlo + 1
            idx = np.zeros(k, dtype=np.intp)
            base = nlo + m
            for j in range(span):
                idx += buf[base + j:base + j + k].astype(np.intp) * weights[j]
            updates.append(table[idx])
        changed = []
        for (nlo, nhi), vals in zip(merged, updates):
            changed.append(np.flatnonzero(vals != buf[nlo:nhi + 1]) + nlo)
            buf[nlo:nhi + 1] = vals
        active = _runs(np.concatenate(changed) if changed else np.empty(0, np.intp), split_gap)
        rect[t + 1] = buf[rect_lo:rect_lo + rect_w]
        if keep_rows:
            rows.append(buf[row_lo:row_hi + 1].copy())
    return rect, rows
