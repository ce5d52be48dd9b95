"""Command line front end.

    cmnorms field-info [--field F]
    cmnorms cmvalue --disc D [--field F] [--pp PP] [--multiplier 1/2] [--json]
    cmnorms table [--disc D ...] [--golden FILE|builtin] [--threads N]

Field files are ``key = value`` lines (``poly``, ``delta``, ``label``) with
power-basis coefficients written as ``a0,a1,a2``. Principal-part files have
one term per line: ``<m> <c> [auto | r1,r2,...]``.
"""

import argparse
import hashlib
import json
import os
import sys
import tempfile
from fractions import Fraction

import sympy

from . import engine
from .cmext import BadDiscriminant, CMExtension
from .engine import Calibration, FactoredValue, PrincipalPart
from .ideals import factor_prime
from .lattice import ModelMismatch, MultiMatch, build_quaternion_model
from .numfield import Field, NotIrreducible, NotTotallyReal, BadDifferentGenerator, zeta7_field

EXIT_OK, EXIT_ZERO, EXIT_POLE, EXIT_INDET = 0, 10, 11, 12
EXIT_CONFIG, EXIT_DISC, EXIT_MODEL, EXIT_PP, EXIT_DEGENERATE, EXIT_ARITH = 2, 3, 4, 5, 6, 7

STATUS_EXIT = {engine.FINITE: EXIT_OK, engine.ZERO: EXIT_ZERO, engine.POLE: EXIT_POLE,
               engine.INDETERMINATE: EXIT_INDET}


class ConfigError(ValueError):
    def __init__(self, msg, path=None, line=None):
        where = f"{path}:{line}: " if path and line else (f"{path}: " if path else "")
        super().__init__(where + msg)


def parse_coeffs(text):
    """``"1,0,-8"`` or ``"-3"`` or ``"1/2"`` -> list of Fractions."""
    try:
        return [Fraction(x.strip()) for x in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad coefficient list {text!r}") from exc


def parse_rational(text):
    text = text.strip()
    if any(ch in text for ch in "^*"):
        return FactoredValue.parse(text).as_fraction()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad rational {text!r}") from exc


def read_field_spec(path):
    spec = {}
    with open(path) as fh:
        for i, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            if not sep:
                raise ConfigError("expected key = value", path, i)
            key = key.strip()
            if key not in ("poly", "delta", "label"):
                raise ConfigError(f"unknown key {key!r}", path, i)
            try:
                spec[key] = val.strip() if key == "label" else parse_coeffs(val)
            except ConfigError as exc:
                raise ConfigError(str(exc), path, i) from None
    if "poly" not in spec:
        raise ConfigError("missing poly", path)
    return spec


def field_from_spec(spec):
    if spec is None:
        return zeta7_field()
    poly = spec["poly"]
    if any(c.denominator != 1 for c in poly):
        raise ConfigError("poly must have integer coefficients")
    delta = spec.get("delta")
    return Field([int(c) for c in poly], delta_override=delta, label=spec.get("label", ""))


def read_pp(path, F):
    pairs = []
    with open(path) as fh:
        for i, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise ConfigError("expected '<m> <c> [mu]'", path, i)
            try:
                m = parse_coeffs(parts[0])
                c = int(parts[1])
            except (ConfigError, ValueError) as exc:
                raise ConfigError(str(exc), path, i) from None
            mu = None
            if len(parts) == 3 and parts[2] != "auto":
                mu = tuple(int(x) for x in parts[2].split(","))
            pairs.append((F.from_rationals(m + [0] * (F.degree - len(m))), c, mu))
    try:
        return PrincipalPart.from_pairs(F, pairs)
    except engine.PrincipalPartError as exc:
        raise ConfigError(str(exc), path) from None


def parse_disc(F, text):
    labels = dict(engine.CM_TABLE_LABELS)
    if text in labels and F == zeta7_field():
        return F(labels[text])
    c = parse_coeffs(text)
    return F.from_rationals(c + [0] * (F.degree - len(c)))


# ---------------------------------------------------------------------------


def _cache_key(F, pp, d, cal):
    blob = json.dumps({
        "poly": list(F.min_poly), "delta": F.delta.to_strings(),
        "pp": [[t.m.to_strings(), t.c, list(t.mu) if t.mu else None] for t in pp.terms],
        "d": d.to_strings(), "cal": cal.to_json()}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:32]


def compute(F, pp, d, cal, cache_dir=None):
    key = path = None
    if cache_dir:
        key = _cache_key(F, pp, d, cal)
        path = os.path.join(cache_dir, key + ".json")
        if os.path.exists(path):
            with open(path) as fh:
                return FactoredValue.from_json(json.load(fh))
    ext = CMExtension(F, d)
    model = build_quaternion_model(F, ext)
    val = engine.cm_value_norm(F, pp, d, cal, model=model)
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(val.to_json(), fh)
        os.replace(tmp, path)
    return val


def _row_job(job):
    fspec, pp_data, d_str, cal, cache_dir = job
    F = field_from_spec(fspec)
    pp = PrincipalPart.from_pairs(F, [(F.from_rationals(m), c, mu) for m, c, mu in pp_data])
    d = F.from_rationals(d_str)
    try:
        return compute(F, pp, d, cal, cache_dir), None
    except Exception as exc:  # per-row failure is reported, not fatal
        return None, f"{type(exc).__name__}: {exc}"


# ---------------------------------------------------------------------------


def cmd_field_info(F, out=None, primes_up_to=50):
    out = out or sys.stdout
    print(f"field      {F.label or 'custom'}  f = {list(F.min_poly)}", file=out)
    print(f"degree     {F.degree}", file=out)
    print(f"disc       {F.disc}", file=out)
    print(f"delta      {F.delta}  (norm {F.delta.norm()})", file=out)
    if F.degree == 1:
        print("degenerate: F = Q, every prime has a single prime above it", file=out)
    for p in sympy.primerange(2, primes_up_to + 1):
        Ps = factor_prime(F, p)
        shape = " ".join(f"(e={P.e},f={P.f_deg})" for P in Ps)
        if len(Ps) == 1 and Ps[0].e == F.degree and F.degree > 1:
            kind = "totally ramified"
        elif len(Ps) == 1 and Ps[0].f_deg == F.degree and F.degree > 1:
            kind = "inert"
        elif len(Ps) == F.degree and all(P.e == 1 for P in Ps):
            kind = f"split ({len(Ps)} primes)"
        else:
            kind = "mixed"
        print(f"p = {p:<4} {kind:<18} {shape}", file=out)
    return 0


def cmd_cmvalue(F, pp, d, cal, as_json=False, cache_dir=None, out=None):
    out = out or sys.stdout
    val = compute(F, pp, d, cal, cache_dir)
    if as_json:
        print(engine.dumps(val, cal), file=out)
    else:
        print(val.render(), file=out)
    code = STATUS_EXIT[val.status]
    if code == EXIT_OK and val.indeterminate:
        code = EXIT_INDET
    return code


def load_golden(spec):
    if spec is None:
        return None
    if spec == "builtin":
        return {lab: engine.golden(lab) for lab in engine.CM_TABLE_GOLDEN}
    with open(spec) as fh:
        data = json.load(fh)
    return {k: FactoredValue.parse(v) if isinstance(v, str) else FactoredValue.from_json(v)
            for k, v in data.items()}


def exponent_diff(got, want):
    lines = []
    if got.status != want.status:
        lines.append(f"status {got.status} != {want.status}")
    skip = got.indeterminate | want.indeterminate
    for p in sorted(set(got.exps) | set(want.exps)):
        if p in skip:
            continue
        a, b = got.exps.get(p, 0), want.exps.get(p, 0)
        if a != b:
            lines.append(f"{p}: {a} != {b}")
    return lines


def cmd_table(F, pp, discs, cal, golden=None, fspec=None, threads=1, cache_dir=None,
              out=None):
    """``discs`` is a list of ``(label, d)``; returns the number of failed rows."""
    out = out or sys.stdout
    pp_data = [(list(t.m.coeffs), t.c, t.mu) for t in pp.terms]
    jobs = [(fspec, pp_data, list(d.coeffs), cal, cache_dir) for _, d in discs]
    if threads and threads > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(_row_job, jobs))
    else:
        results = [_row_job(j) for j in jobs]
    failures = 0
    for (label, _), (val, err) in zip(discs, results):
        if err:
            failures += 1
            print(f"{label:>8}  ERROR {err}", file=out)
            continue
        verdict = ""
        diff = []
        if golden is not None:
            want = golden.get(label)
            if want is None:
                verdict = "  (no golden)"
            elif val.agrees(want) and val.indeterminate == want.indeterminate:
                verdict = "  PASS"
            else:
                verdict = "  FAIL"
                diff = exponent_diff(val, want)
                failures += 1
        print(f"{label:>8}  {val.render()}{verdict}", file=out)
        for line in diff:
            print(f"{'':>10}{line}", file=out)
    return failures


# ---------------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="field spec file (default: Q(zeta7)+)")
    common.add_argument("--pp", help="principal part file (default: Elkies' t)")
    common.add_argument("--multiplier", default="1/2", help="weight of the CM cycle Z(O_d)")
    common.add_argument("--prefactor", default="1")
    common.add_argument("--constant", default="1",
                        help="normalization constant reported with the result (e.g. 2^6*3^3)")
    common.add_argument("--json", action="store_true")
    common.add_argument("--golden", help="golden JSON file, or 'builtin' for the reference table")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--cache-dir")
    ap = argparse.ArgumentParser(prog="cmnorms", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("field-info", parents=[common])
    c = sub.add_parser("cmvalue", parents=[common])
    c.add_argument("--disc", required=True, help="a0,a1,a2 in the power basis, or a reference-table label")
    t = sub.add_parser("table", parents=[common])
    t.add_argument("--disc", action="append", help="repeatable; default: all reference-table rows")
    t.add_argument("--none", action="store_true", help="run with an empty row list")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        fspec = read_field_spec(args.field) if args.field else None
        F = field_from_spec(fspec)
        if args.command == "field-info":
            return cmd_field_info(F)
        pp = read_pp(args.pp, F) if args.pp else engine.elkies_principal_part(F)
        cal = Calibration(cycle_multiplier=parse_rational(args.multiplier),
                          prefactor=parse_rational(args.prefactor),
                          constant_factor=parse_rational(args.constant))
        if args.command == "cmvalue":
            d = parse_disc(F, args.disc)
            return cmd_cmvalue(F, pp, d, cal, args.json, args.cache_dir)
        if args.none:
            discs = []
        elif args.disc:
            discs = [(s, parse_disc(F, s)) for s in args.disc]
        else:
            discs = [(lab, F(d)) for lab, d in engine.CM_TABLE_LABELS]
        golden = load_golden(args.golden)
        fails = cmd_table(F, pp, discs, cal, golden, fspec, args.threads, args.cache_dir)
        return 1 if fails else 0
    except (ConfigError, NotIrreducible, NotTotallyReal, BadDifferentGenerator, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BadDiscriminant as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISC
    except (ModelMismatch, MultiMatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except engine.PrincipalPartError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PP
    except engine.DegenerateTerm as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ArithmeticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARITH


if __name__ == "__main__":
    sys.exit(main())
