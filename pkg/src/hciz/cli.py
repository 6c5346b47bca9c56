"""Command-line front end: ``expand-f``, ``verify`` and ``mc``.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

import argparse
import contextlib
import json
import math
import os
import sys
import time

from . import __version__
from .algebra.rational import as_rational, rational_str

CACHE_ROUTE = "assemble_F"
SUITES = ("toda", "kp", "lax", "string", "dkp", "scaltoda", "routes", "cumulants")


class InputError(ValueError):
    """Malformed command-line input (exit code 2)."""


# --- parsing helpers ---------------------------------------------------------

def parse_rational_list(text):
    try:
        return [as_rational(x) for x in text.split(",") if x.strip() != ""]
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"cannot parse rational list {text!r}: {exc}") from None


def parse_assignments(text):
    """``"1=1/2,2=1/3"`` -> ``{1: 1/2, 2: 1/3}``."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise InputError(f"expected q=value, got {item!r}")
        q, v = item.split("=", 1)
        try:
            q = int(q)
            if q < 1:
                raise ValueError("index must be >= 1")
            out[q] = as_rational(v)
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise InputError(f"bad assignment {item!r}: {exc}") from None
    return out


def _positive(name):
    def conv(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be >= 1")
        return v

    return conv


def _nonnegative(name):
    def conv(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < 0:
            raise argparse.ArgumentTypeError(f"{name} must be >= 0")
        return v

    return conv


# --- coefficient records ---------------------------------------------------

def format_records(records, fmt):
    """``records`` is a list of ``(key, Rational)``; returns output text."""
    lines = []
    if fmt == "tsv":
        lines = [f"{k}\t{rational_str(v)}" for k, v in records]
    elif fmt == "json-lines":
        for k, v in records:
            lines.append(
                json.dumps({"key": k, "num": int(v.numerator), "den": int(v.denominator)})
            )
    elif fmt == "text":
        width = max((len(k) for k, _ in records), default=0)
        lines = [f"{k.ljust(width)}  {rational_str(v)}" for k, v in records]
    else:
        raise InputError(f"unknown format {fmt!r}")
    return "".join(line + "\n" for line in lines)


def free_energy_records(F):
    ring = F.series.ring
    return [(ring.render_monomial(e), c) for e, c in F.series.terms()]


def _cache_header(W):
    return f"# hciz-cache route={CACHE_ROUTE} W={W} version={__version__}"


def _cache_path(args, W):
    if args.cache:
        return args.cache
    root = os.environ.get("HCIZ_CACHE_DIR")
    if root:
        return os.path.join(root, f"{CACHE_ROUTE}-W{W}.tsv")
    return None


def read_cache(path, W):
    """Records from a cache file, or None (with the reason) if unusable."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        return None, f"unreadable cache {path}: {exc}"
    lines = text.split("\n")
    if not lines or lines[0] != _cache_header(W):
        return None, f"cache header mismatch in {path}"
    if text and not text.endswith("\n"):
        return None, f"truncated cache {path}"
    records = []
    for line in lines[1:]:
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2 or "/" not in parts[1]:
            return None, f"corrupt cache line in {path}"
        try:
            records.append((parts[0], as_rational(parts[1])))
        except (ValueError, ZeroDivisionError):
            return None, f"corrupt cache value in {path}"
    return records, None


def write_cache(path, W, records):
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(_cache_header(W) + "\n")
        fh.write(format_records(records, "tsv"))
    os.replace(tmp, path)


# --- commands ----------------------------------------------------------------

def cmd_expand_f(args, out, err):
    from .large_n.free_energy import assemble_F

    W = args.max_weight
    path = _cache_path(args, W)
    records = None
    if path and os.path.exists(path):
        records, why = read_cache(path, W)
        if records is None:
            print(f"warning: {why}; recomputing", file=err)
    if records is None:
        records = free_energy_records(assemble_F(W))
        if path:
            try:
                write_cache(path, W, records)
            except OSError as exc:
                print(f"warning: cannot write cache {path}: {exc}", file=err)
    out.write(format_records(records, args.format))
    return 0


class Report:
    def __init__(self, out):
        self.out = out
        self.failed = 0
        self.count = 0

    def series(self, label, residual, expect_zero=True):
        """Record an exact series check; ``residual`` is a MultiSeries or UniSeries."""
        zero = not residual
        ok = zero if expect_zero else not zero
        self._line(ok, label, "" if zero else _describe(residual))

    def check(self, label, ok, detail=""):
        self._line(bool(ok), label, detail)

    def _line(self, ok, label, detail):
        self.count += 1
        if not ok:
            self.failed += 1
        msg = f"{'PASS' if ok else 'FAIL'}  {label}"
        if detail:
            msg += f"  [{detail}]"
        self.out.write(msg + "\n")

    def finish(self):
        self.out.write(f"{self.count - self.failed}/{self.count} checks passed\n")
        return 0 if self.failed == 0 else 1


def _describe(residual):
    """Largest residual monomial, for the report."""
    if hasattr(residual, "ring"):
        best = None
        for e, c in residual.terms():
            if best is None or abs(c) > abs(best[1]):
                best = (residual.ring.render_monomial(e), c)
        return f"max residual {best[0]} {rational_str(best[1])}" if best else ""
    if hasattr(residual, "c"):
        for k, c in enumerate(residual.c):
            if c:
                return f"first nonzero x^{k} {rational_str(c)}"
    return ""


def _window_detail(res):
    w = res.worst()
    if w is None:
        return ""
    (i, j), mono, c = w
    return f"entry ({i},{j}) {mono} {rational_str(c)}"


def suite_toda(args, rep):
    from .toda_ladder import verify_toda

    n, W = args.n or 3, args.weight if args.weight is not None else 4
    for k in range(1, n + 1):
        rep.series(f"toda n={k} W={W}", verify_toda(k, W))


def suite_kp(args, rep):
    from .toda_ladder import verify_kp

    n, W = args.n or 2, args.weight if args.weight is not None else 5
    for N in range(1, n + 1):
        rep.series(f"kp N={N} W={W} tt-support=1,2", verify_kp(N, W, (1, 2)))


def suite_lax(args, rep):
    from .toda_ladder import verify_lax_evolution

    qmax, W = args.q or 2, args.weight if args.weight is not None else 3
    K = args.n or 4
    for q in range(1, qmax + 1):
        for which in ("t", "tt"):
            res = verify_lax_evolution(q, which, K, W)
            for name, r in res.items():
                rep.check(
                    f"lax {name} q={q} flow={which} window={K} W={W} margin={r.margin}",
                    r.is_zero,
                    _window_detail(r),
                )


def suite_string(args, rep):
    from .toda_ladder import verify_string

    W = args.weight if args.weight is not None else 3
    K = args.n or 3
    for w in range(0, W + 1):
        r = verify_string(K, w)
        rep.check(f"string window={K} W={w} margin={r.margin}", r.is_zero, _window_detail(r))


def suite_dkp(args, rep):
    from .large_n.residuals import dkp_residual

    W = args.weight if args.weight is not None else 8
    rep.series(f"dkp ell=3 W={W}", dkp_residual(3, W))
    rep.series(f"dkp ell=1 W={min(W, 4)} (negative control, must be nonzero)",
               dkp_residual(1, min(W, 4)), expect_zero=False)


def suite_scaltoda(args, rep):
    from .large_n.free_energy import assemble_F
    from .large_n.residuals import scaltoda_residual, scaltodab_residual

    W = args.weight if args.weight is not None else 4
    T = max(8, 2 * W)
    rep.series(f"scaltodab T={T}", scaltodab_residual(T))
    rep.series(f"scaltoda per-side W={W}", scaltoda_residual(assemble_F(W + 1)))


def suite_routes(args, rep):
    from .large_n.derivatives import (
        derivative_to_coefficient,
        gradient_F,
        hessian_F,
        mixed_derivative_F,
        third_derivative_F,
    )
    from .large_n.cumulants import Curve
    from .large_n.curves import diagonal_F
    from .large_n.free_energy import assemble_F, assemble_F_formal
    from .large_n.triangle import triangle_mismatches

    W = args.weight if args.weight is not None else 5
    F = assemble_F(W)
    rep.check(f"assemble_F W={W} invariants", not F.invariant_violations())
    curve = Curve.formal(W)
    derivs = {(q,): g for q, g in enumerate(gradient_F(curve, W), 1)}
    derivs.update(hessian_F(curve, W))
    derivs.update(third_derivative_F(curve, W))
    bad = triangle_mismatches(F, derivs)
    rep.check(f"routes curve derivatives vs assemble_F W={W} ({len(derivs)} derivatives)",
              not bad, f"{len(bad)} mismatches" if bad else "")
    mixed = mixed_derivative_F(curve, W)
    bad = [k for k, v in mixed.items() if v != derivs[(k[0],)].derivative(f"tt{k[1]}")]
    rep.check(f"routes mixed derivatives W={W}", not bad)
    diag = diagonal_F(W)
    rep.check(f"routes diagonal cubic vs assemble_F W={W}",
              F.diagonal() == [diag[n] for n in range(1, W + 1)])
    Wf = min(W, 3)
    rep.check(f"routes exact Q(N) logarithm vs 1/N expansion W={Wf}",
              assemble_F_formal(Wf).series == assemble_F(Wf).series)


def suite_cumulants(args, rep):
    from .large_n.cumulants import (
        formal_theta_tilde,
        free_cumulants_direct,
        free_cumulants_inversion,
    )

    Q = args.q or 12
    if args.theta_tilde:
        th = parse_assignments(args.theta_tilde)
        label = ",".join(f"{q}={rational_str(v)}" for q, v in sorted(th.items()))
    else:
        th = formal_theta_tilde(Q)
        label = "formal"
    d, i = free_cumulants_direct(th, Q), free_cumulants_inversion(th, Q)
    rep.check(f"cumulants direct vs inversion Q={Q} theta~={label}", d == i)
    if args.theta:
        th2 = parse_assignments(args.theta)
        rep.check(
            f"cumulants direct vs inversion Q={Q} theta={args.theta}",
            free_cumulants_direct(th2, Q) == free_cumulants_inversion(th2, Q),
        )


SUITE_RUNNERS = {
    "toda": suite_toda,
    "kp": suite_kp,
    "lax": suite_lax,
    "string": suite_string,
    "dkp": suite_dkp,
    "scaltoda": suite_scaltoda,
    "routes": suite_routes,
    "cumulants": suite_cumulants,
}


def cmd_verify(args, out, err):
    rep = Report(out)
    start = time.perf_counter()
    SUITE_RUNNERS[args.suite](args, rep)
    code = rep.finish()
    print(f"suite {args.suite} finished in {time.perf_counter() - start:.2f}s", file=err)
    return code


def cmd_mc(args, out, err):
    import mpmath

    from .hciz_finite import (
        SpectrumPair,
        hciz_determinant,
        hciz_monte_carlo,
    )

    if not args.a or not args.b:
        raise InputError("mc needs --a and --b")
    a, b = parse_rational_list(args.a), parse_rational_list(args.b)
    if len(a) != len(b) or not a:
        raise InputError("--a and --b must have the same nonzero length")
    if args.n is not None and args.n != len(a):
        raise InputError(f"--n {args.n} does not match the spectrum length {len(a)}")
    if args.samples < 2:
        raise InputError("--samples must be >= 2")
    s = SpectrumPair(a, b)
    ref = hciz_determinant(s, dps=args.precision)
    est, se = hciz_monte_carlo(s, args.samples, args.seed, jobs=args.jobs)
    with mpmath.workdps(args.precision):
        diff = mpmath.mpf(est) - ref
        if se > 0:
            z = float(abs(diff) / se)
        elif abs(diff) <= mpmath.mpf("1e-12") * abs(ref):
            z = 0.0
        else:
            z = math.inf
        ref_str = mpmath.nstr(ref, min(args.precision, 20))
    out.write(f"N          {s.N}\n")
    out.write(f"samples    {args.samples}\n")
    out.write(f"seed       {args.seed}\n")
    out.write(f"estimate   {est!r}\n")
    out.write(f"stderr     {se!r}\n")
    out.write(f"reference  {ref_str}\n")
    out.write(f"z          {z:.6g}\n")
    ok = z <= 4
    out.write(f"{'PASS' if ok else 'FAIL'}  |z| <= 4\n")
    return 0 if ok else 1


# --- entry point ---------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(
        prog="hciz",
        description="Exact large-N expansion of the unitary-group (HCIZ) integral.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("text", "tsv", "json-lines"), default="tsv")
        sp.add_argument("--jobs", type=_positive("--jobs"), default=1)
        sp.add_argument("--precision", type=_positive("--precision"), default=50,
                        help="significant digits for high-precision floats")

    e = sub.add_parser("expand-f", help="print the coefficients of F")
    e.add_argument("--max-weight", type=_positive("--max-weight"), default=4,
                   help="per-side weight cutoff: theta-weight = theta~-weight <= W")
    e.add_argument("--cache", default=None, help="cache file (default: $HCIZ_CACHE_DIR)")
    common(e)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=SUITES, required=True)
    v.add_argument("--n", type=_positive("--n"), default=None)
    v.add_argument("--weight", type=_nonnegative("--weight"), default=None)
    v.add_argument("--q", type=_positive("--q"), default=None)
    v.add_argument("--theta-tilde", default=None, help="q=value,... assignments")
    v.add_argument("--theta", default=None, help="q=value,... assignments")
    common(v)

    m = sub.add_parser("mc", help="Monte Carlo estimate against the determinant formula")
    m.add_argument("--n", type=_positive("--n"), default=None)
    m.add_argument("--a", default=None, help="comma-separated rational eigenvalues")
    m.add_argument("--b", default=None, help="comma-separated rational eigenvalues")
    m.add_argument("--samples", type=int, default=100000)
    m.add_argument("--seed", type=int, default=0)
    common(m)
    return p


COMMANDS = {"expand-f": cmd_expand_f, "verify": cmd_verify, "mc": cmd_mc}


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        # argparse prints usage, --help and --version itself
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return COMMANDS[args.command](args, out, err)
    except InputError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except ValueError as exc:
        # degenerate spectra and other rejected inputs
        print(f"error: {exc}", file=err)
        return 2


if __name__ == "__main__":
    sys.exit(main())
