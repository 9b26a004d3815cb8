"""bersdec command line.

Exit codes: 0 success, 1 usage/parse/config error, 2 a bound or certificate failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import bounds, constructions, experiments, normal_position, surface
from .decompose import bers_decompose
from .errors import BersError, BoundViolated, ConfigError, InsertionBoundViolated, ParseError

EXIT_OK, EXIT_USAGE, EXIT_BOUND = 0, 1, 2


def parse_n_range(text: str) -> tuple[int, ...]:
    """``"8"``, ``"5-12"`` or ``"5,7,9"``."""
    try:
        if "-" in text:
            lo, hi = (int(x) for x in text.split("-", 1))
            return tuple(range(lo, hi + 1))
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise ConfigError(f"cannot parse n range {text!r}")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- commands ------------------------------------------------------------------

def cmd_gen(a) -> int:
    if a.n < 4:
        raise ConfigError(f"n = {a.n}: a sphere with 3 punctures is a single pair of pants")
    experiments.ExperimentConfig(seed=a.seed, n_values=(a.n,), kind=a.kind, low=a.len_low,
                                 high=a.len_high)
    s = experiments.random_surface(a.n, experiments.rng_for(a.seed), a.kind, a.len_low, a.len_high)
    _emit(surface.dumps(s) + "\n", a.out)
    return EXIT_OK


def cmd_decompose(a) -> int:
    s = surface.loads(_read(a.file))
    if a.twist_depth < 0:
        raise ConfigError("twist depth must be >= 0")
    P, cert = bers_decompose(s, a.base_n, a.twist_depth)
    _emit(_dump({"n": s.n, "decomposition": P.to_json(), "certificate": cert.to_json()}), a.out)
    return EXIT_OK if cert.within_bound else EXIT_BOUND


def cmd_project(a) -> int:
    text = _read(a.file)
    inst = normal_position.loads(text)
    p_len = a.p_length
    if p_len is None:
        p_len = json.loads(text).get("P_length")
    if p_len is None:
        raise ConfigError("P length missing: pass --p-length or set P_length in the file")
    res = normal_position.project_insert_combinatorial(inst, float(p_len))
    _emit(_dump(res.to_json()), a.out)
    return EXIT_OK


def cmd_sweep(a) -> int:
    cfg = experiments.ExperimentConfig(seed=a.seed, n_values=parse_n_range(a.n), kind=a.kind,
                                       low=a.len_low, high=a.len_high, K=a.twist_depth,
                                       base_n=a.base_n, trials=a.trials, timing=a.timing)
    rows = experiments.sweep(cfg)
    if a.format == "json":
        _emit(_dump(rows), a.out)
    else:
        _emit(experiments.rows_to_csv(rows), a.out)
    bad = any(r["ratio"] and float(r["ratio"]) > 1.0 for r in rows[:-1])
    return EXIT_BOUND if bad else EXIT_OK


def cmd_hairy(a) -> int:
    h = constructions.hairy_constants(a.p, a.ell)
    if a.format == "json":
        _emit(_dump(h.to_json()), a.out)
    else:
        r = h.row()
        _emit(_csv(list(r), [[repr(v) if isinstance(v, float) else v for v in r.values()]]), a.out)
    return EXIT_OK


def cmd_lift(a) -> int:
    rep = experiments.random_lift(a.g, a.seed, geometric=a.geometric, K=a.twist_depth)
    _emit(_dump(rep.to_json()), a.out)
    return EXIT_OK if rep.within_theorem else EXIT_BOUND


def cmd_bounds(a) -> int:
    rows = bounds.table()
    if a.format == "json":
        _emit(_dump([{"bound_id": b.bound_id, "params": b.params, "value": b.value,
                      "direction": b.direction, "citation": b.citation} for b in rows]), a.out)
    else:
        _emit(_csv(["bound_id", "params", "value", "direction", "citation"], [b.row() for b in rows]),
              a.out)
    return EXIT_OK


def cmd_check(a) -> int:
    checks = bounds.consistency_suite()
    seps = [constructions.check_separation_lemma(n, (1, 2), (4, 5)) for n in (6, 7, 8)]
    failed = [c for c in checks if not c.passed and not c.informational]
    failed += [s for s in seps if not s.passed]
    if a.format == "json":
        _emit(_dump({"checks": [{"name": c.name, "passed": c.passed, "detail": c.detail,
                                 "informational": c.informational} for c in checks],
                     "separation": [s.to_json() for s in seps]}), a.out)
    else:
        rows = [[c.name, "info" if c.informational else ("pass" if c.passed else "FAIL"), c.detail]
                for c in checks]
        rows += [[f"separation_n{s.n}", "pass" if s.passed else "FAIL",
                  f"{s.families} families {s.by_condition}"] for s in seps]
        _emit(_csv(["check", "status", "detail"], rows), a.out)
    return EXIT_BOUND if failed else EXIT_OK


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bersdec", description="Short pants decompositions of hyperbolic spheres.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, *, seed=True, rand=False, decomp=False, fmt=None):
        if seed:
            sp.add_argument("--seed", type=int, default=7)
        if rand:
            sp.add_argument("--kind", choices=("cusp", "cone_pi", "boundary"), default="cusp")
            sp.add_argument("--len-low", type=float, default=0.5)
            sp.add_argument("--len-high", type=float, default=2.5)
        if decomp:
            sp.add_argument("--twist-depth", type=int, default=2)
            sp.add_argument("--base-n", type=int, default=5)
        if fmt:
            sp.add_argument("--format", choices=("json", "csv"), default=fmt)
        sp.add_argument("--out")

    sp = sub.add_parser("gen", help="random surface as JSON")
    sp.add_argument("--n", type=int, required=True)
    common(sp, rand=True)
    sp.set_defaults(fn=cmd_gen)

    sp = sub.add_parser("decompose", help="short pants decomposition of a surface file")
    sp.add_argument("file")
    common(sp, seed=False, decomp=True)
    sp.set_defaults(fn=cmd_decompose)

    sp = sub.add_parser("project", help="combinatorial insertion on a normal-position instance")
    sp.add_argument("file")
    sp.add_argument("--p-length", type=float)
    common(sp, seed=False)
    sp.set_defaults(fn=cmd_project)

    sp = sub.add_parser("sweep", help="bound-witness sweep")
    sp.add_argument("--n", default="5-12")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--timing", action="store_true", help="fill time_ms (makes output non-reproducible)")
    common(sp, rand=True, decomp=True, fmt="csv")
    sp.set_defaults(fn=cmd_sweep)

    sp = sub.add_parser("hairy", help="hairy sphere constants")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--ell", type=float, default=0.0)
    common(sp, seed=False, fmt="csv")
    sp.set_defaults(fn=cmd_hairy)

    sp = sub.add_parser("lift", help="hyperelliptic lift of a random decomposition")
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--geometric", action="store_true")
    common(sp, decomp=True)
    sp.set_defaults(fn=cmd_lift)

    sp = sub.add_parser("bounds", help="bound catalog")
    common(sp, seed=False, fmt="csv")
    sp.set_defaults(fn=cmd_bounds)

    sp = sub.add_parser("check", help="arithmetic consistency suite and separation lemma")
    common(sp, seed=False, fmt="csv")
    sp.set_defaults(fn=cmd_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (BoundViolated, InsertionBoundViolated) as exc:
        print(f"bersdec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (BersError, ValueError) as exc:
        print(f"bersdec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
