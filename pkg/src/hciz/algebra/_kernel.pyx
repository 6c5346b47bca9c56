# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled sparse graded multiplication kernel.

Same contract as ``_kernel_py``: blocks are ``{key: coefficient}`` dicts with
packed-int keys; coefficients are arbitrary Python numbers (usually mpq).
Loops run over pre-extracted lists so the per-term overhead is a couple of
C-level calls instead of interpreted bytecode.
"""

from cpython.dict cimport PyDict_GetItem, PyDict_SetItem
from cpython.ref cimport PyObject


cdef inline bint _capped(object key, list caps):
    cdef object c
    for c in caps:
        if ((key >> <object>c[0]) & <object>c[1]) > <object>c[2]:
            return True
    return False


cdef dict _mul_into(dict acc, list ka_list, list ca_list, list kb_list,
                    list cb_list, list caps):
    cdef Py_ssize_t i, j, na = len(ka_list), nb = len(kb_list)
    cdef object ka, ca, k, prod
    cdef PyObject* old
    cdef bint has_caps = len(caps) > 0
    for i in range(na):
        ka = ka_list[i]
        ca = ca_list[i]
        for j in range(nb):
            k = ka + kb_list[j]
            if has_caps and _capped(k, caps):
                continue
            prod = ca * cb_list[j]
            old = PyDict_GetItem(acc, k)
            if old is NULL:
                PyDict_SetItem(acc, k, prod)
            else:
                PyDict_SetItem(acc, k, <object>old + prod)
    return acc


def mul_block(dict da, dict db, caps):
    cdef dict out = {}
    cdef list cl = list(caps) if caps else []
    _mul_into(out, list(da.keys()), list(da.values()),
              list(db.keys()), list(db.values()), cl)
    return {k: c for k, c in out.items() if c}


def mul_blocks(dict a, dict b, long W, caps):
    cdef dict out = {}
    cdef dict acc
    cdef long wa, wb, w
    cdef list cl = list(caps) if caps else []
    cdef list bw = []
    cdef object blk
    for wb_obj, blk in b.items():
        bw.append((wb_obj, list(blk.keys()), list(blk.values())))
    for wa_obj, blk in a.items():
        wa = wa_obj
        kal = list(blk.keys())
        cal = list(blk.values())
        for item in bw:
            wb = item[0]
            w = wa + wb
            if w > W:
                continue
            acc = out.get(w)
            if acc is None:
                acc = {}
                out[w] = acc
            _mul_into(acc, kal, cal, item[1], item[2], cl)
    res = {}
    for w_obj, acc in out.items():
        blk = {k: c for k, c in acc.items() if c}
        if blk:
            res[w_obj] = blk
    return res


def axpy_block(dict acc, dict db, scale):
    cdef object k, c, v
    for k, c in db.items():
        v = acc.get(k, 0) + scale * c
        if v:
            acc[k] = v
        elif k in acc:
            del acc[k]
    return acc
