# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels in ``_pykernels``."""
import numpy as np
from libc.stdint cimport uint8_t


def step_row(const uint8_t[::1] table, int nsym, int span, row):
    cdef const uint8_t[::1] src = np.ascontiguousarray(row, dtype=np.uint8)
    cdef Py_ssize_t n = src.shape[0] - span + 1
    if n <= 0:
        return np.empty(0, dtype=np.uint8)
    out = np.empty(n, dtype=np.uint8)
    cdef uint8_t[::1] dst = out
    cdef Py_ssize_t i, j, idx
    for i in range(n):
        idx = 0
        for j in range(span):
            idx = idx * nsym + src[i + j]
        dst[i] = table[idx]
    return out


def evolve_band(const uint8_t[::1] table, int nsym, int m, int a, int r,
                uint8_t[::1] buf, Py_ssize_t H, Py_ssize_t rect_lo, Py_ssize_t rect_w,
                bint keep_rows, int split_gap=16):
    """Advance ``buf`` ``H`` steps in place, recomputing only cells whose
    neighborhood changed on the previous step."""
    cdef Py_ssize_t L = buf.shape[0]
    cdef int span = a - m + 1
    cdef int grow_left = a if a > 0 else 0
    cdef int grow_right = -m if m < 0 else 0
    cdef Py_ssize_t t, i, j, k, idx, nlo, nhi, row_lo, row_hi, count, merged, run_lo, last
    cap = L // 2 + 2
    lo_arr = np.empty(cap, dtype=np.intp)
    hi_arr = np.empty(cap, dtype=np.intp)
    mlo_arr = np.empty(cap, dtype=np.intp)
    mhi_arr = np.empty(cap, dtype=np.intp)
    cdef Py_ssize_t[::1] los = lo_arr, his = hi_arr, mlos = mlo_arr, mhis = mhi_arr
    rect_arr = np.empty((H + 1, rect_w), dtype=np.uint8)
    cdef uint8_t[:, ::1] rect = rect_arr
    tmp_arr = np.empty(L, dtype=np.uint8)
    cdef uint8_t[::1] tmp = tmp_arr
    buf_arr = np.asarray(buf)
    rows = [buf_arr.copy()] if keep_rows else None

    # the first step recomputes everything
    count = 1
    los[0] = 0
    his[0] = L - 1
    for j in range(rect_w):
        rect[0, j] = buf[rect_lo + j]
    for t in range(H):
        row_lo = r * (t + 1)
        row_hi = L - 1 - r * (t + 1)
        with nogil:
            # cells a changed cell can influence, clipped to the valid row
            merged = 0
            for k in range(count):
                nlo = los[k] - grow_left
                if nlo < row_lo:
                    nlo = row_lo
                nhi = his[k] + grow_right
                if nhi > row_hi:
                    nhi = row_hi
                if nlo > nhi:
                    continue
                if merged and nlo <= mhis[merged - 1] + 1:
                    if nhi > mhis[merged - 1]:
                        mhis[merged - 1] = nhi
                else:
                    mlos[merged] = nlo
                    mhis[merged] = nhi
                    merged += 1
            for k in range(merged):
                for i in range(mlos[k], mhis[k] + 1):
                    idx = 0
                    for j in range(span):
                        idx = idx * nsym + buf[i + m + j]
                    tmp[i] = table[idx]
            # write back, collecting runs of changed cells
            count = 0
            run_lo = -1
            last = -1
            for k in range(merged):
                for i in range(mlos[k], mhis[k] + 1):
                    if tmp[i] == buf[i]:
                        continue
                    buf[i] = tmp[i]
                    if run_lo >= 0 and i - last <= split_gap:
                        last = i
                        continue
                    if run_lo >= 0:
                        los[count] = run_lo
                        his[count] = last
                        count += 1
                    run_lo = i
                    last = i
            if run_lo >= 0:
                los[count] = run_lo
                his[count] = last
                count += 1
            for j in range(rect_w):
                rect[t + 1, j] = buf[rect_lo + j]
        if keep_rows:
            rows.append(buf_arr[row_lo:row_hi + 1].copy())
    return rect_arr, rows
