"""Pure-Python sparse graded multiplication kernel.

A series is stored as ``{weight: {key: coefficient}}`` where ``key`` packs the
exponent vector into a Python int (fixed-width fields), so that the key of a
product monomial is the sum of the factor keys.  The compiled twin of this
module (``_kernel.pyx``) exposes the same three functions with identical
semantics; :mod:`hciz.algebra.kernel` picks one at import.
"""


def _capped(key, caps):
    for shift, mask, cap in caps:
        if (key >> shift) & mask > cap:
            return True
    return False


def mul_block(da, db, caps):
    """Product of two homogeneous blocks (single weight each)."""
    out = {}
    get = out.get
    if caps:
        for ka, ca in da.items():
            for kb, cb in db.items():
                k = ka + kb
                if _capped(k, caps):
                    continue
                out[k] = get(k, 0) + ca * cb
    else:
        for ka, ca in da.items():
            for kb, cb in db.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
    return {k: c for k, c in out.items() if c}


def mul_blocks(a, b, W, caps):
    """Product of two graded series, dropping every weight above ``W``."""
    out = {}
    for wa, da in a.items():
        for wb, db in b.items():
            w = wa + wb
            if w > W:
                continue
            acc = out.get(w)
            if acc is None:
                acc = out[w] = {}
            get = acc.get
            for ka, ca in da.items():
                for kb, cb in db.items():
                    k = ka + kb
                    if caps and _capped(k, caps):
                        continue
                    acc[k] = get(k, 0) + ca * cb
    res = {}
    for w, acc in out.items():
        blk = {k: c for k, c in acc.items() if c}
        if blk:
            res[w] = blk
    return res


def axpy_block(acc, db, scale):
    """In-place ``acc += scale * db``; zero entries are removed."""
    get = acc.get
    for k, c in db.items():
        v = get(k, 0) + scale * c
        if v:
            acc[k] = v
        elif k in acc:
            del acc[k]
    return acc
