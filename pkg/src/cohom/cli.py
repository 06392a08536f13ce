"""Command-line front end.

Exit codes: 0 success, 1 malformed input (with a field diagnostic),
2 mathematical invariant violation (message names the violated law).
JSON reports are canonical (sorted keys, no volatile fields) so
identical inputs produce byte-identical output; wall-clock timing is
shown only in table mode.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from . import __version__
from .cech import cech_complex, cover_from_json, cech_hyper, hyper_from_json
from .complexes import cohomology, complex_from_json
from .forms import (
    TorusSpec,
    derham_cohomology,
    form_to_text,
    log_representative,
    parse_form,
)
from .grid import double_complex_from_json, total, totals_agree
from .linalg import CohomError, rat_to_str
from .presets import build_circle, p1_report, torus_report
from .spectral import certify_convergence, first_pages, page_to_json, second_pages

SCHEMA_VERSION = "1"


class InputError(Exception):
    """Malformed file or argument; maps to exit code 1."""


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: invalid JSON ({e.msg})")


def _rep_listing(report) -> list:
    out = []
    for i, sub in enumerate(report.representatives):
        degree_reps = []
        for col in sub.basis.columns:
            entries = [[str(lab), rat_to_str(c)]
                       for lab, c in zip(sub.ambient.labels, col) if c != 0]
            degree_reps.append(entries)
        out.append(degree_reps)
    return out


def _print_report(report: dict, fmt: str, elapsed: float, lines: list[str]) -> None:
    if fmt == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)
        print(f"elapsed: {elapsed * 1000:.1f} ms")


def _gen_name(I) -> str:
    return "1" if not I else "w_" + "".join(str(i) for i in I)


def _dims_line(name: str, dims) -> str:
    return f"{name}: " + " ".join(str(d) for d in dims)


def cmd_complex(args) -> tuple[dict, list[str]]:
    data = _load_json(args.file)
    cx = complex_from_json(data)
    rep = cohomology(cx)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "complex",
        "lo": cx.lo,
        "hi": cx.hi,
        "space_dims": list(cx.dims()),
        "cohomology_dims": list(rep.dims),
        "representatives": _rep_listing(rep),
    }
    lines = [
        f"cochain complex, degrees {cx.lo}..{cx.hi}",
        _dims_line("space dims", cx.dims()),
        _dims_line("cohomology", rep.dims),
    ]
    return report, lines


def cmd_cech(args) -> tuple[dict, list[str]]:
    nerve, sheaf = cover_from_json(_load_json(args.file))
    cx = cech_complex(nerve, sheaf)
    rep = cohomology(cx)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "cech",
        "opens": nerve.opens,
        "cochain_dims": list(cx.dims()),
        "cohomology_dims": list(rep.dims),
        "representatives": _rep_listing(rep),
    }
    lines = [
        f"cover with {nerve.opens} opens, nerve dimension {nerve.max_dim}",
        _dims_line("Cech cochain dims", cx.dims()),
        _dims_line("Cech cohomology", rep.dims),
    ]
    return report, lines


def cmd_hyper(args) -> tuple[dict, list[str]]:
    nerve, sheaves, level_maps = hyper_from_json(_load_json(args.file))
    res = cech_hyper(nerve, sheaves, level_maps)
    cert = certify_convergence(res.double)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "hyper",
        "P": res.double.P,
        "Q": res.double.Q,
        "total_dims": list(res.report.dims),
        "first_pages": [page_to_json(p) for p in res.first],
        "second_pages": [page_to_json(p) for p in res.second],
        "degeneration": {"first": cert.first_degeneration,
                         "second": cert.second_degeneration},
    }
    lines = [
        f"Cech-sheaf double complex, P={res.double.P}, Q={res.double.Q}",
        _dims_line("hypercohomology", res.report.dims),
        f"degeneration pages: first filtration {cert.first_degeneration}, "
        f"second filtration {cert.second_degeneration}",
    ]
    return report, lines


def cmd_spectral(args) -> tuple[dict, list[str]]:
    dc = double_complex_from_json(_load_json(args.file))
    pages_fn = first_pages if args.filtration == "first" else second_pages
    pages = pages_fn(dc, args.pages)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "spectral",
        "filtration": args.filtration,
        "pages": [page_to_json(p) for p in pages],
    }
    lines = [f"{args.filtration} filtration, pages 1..{args.pages}"]
    for p in pages:
        nonzero = {f"({a},{b})": d for (a, b), d in sorted(p.dims().items())}
        lines.append(f"E_{p.r}: {nonzero if nonzero else '0'}")
    return report, lines


def cmd_derham(args) -> tuple[dict, list[str]]:
    try:
        spec = TorusSpec(args.n, args.invert, args.window)
    except ValueError as e:
        raise InputError(str(e))
    rep = derham_cohomology(spec)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "derham",
        "n": spec.n,
        "invert": spec.k,
        "window": spec.window,
        "dims": list(rep.dims),
        "generators": [[_gen_name(I) for I in gens] for gens in rep.generators],
    }
    lines = [
        f"torus de Rham model: n={spec.n}, inverted={spec.k}, window={spec.window}",
        _dims_line("cohomology dims", rep.dims),
    ]
    if args.reduce is not None:
        try:
            phi = parse_form(args.reduce, spec.n)
        except ValueError as e:
            raise InputError(f"--reduce: {e}")
        vec, xi = log_representative(phi, spec)
        coeffs = [{"I": list(I), "c": rat_to_str(c)} for I, c in sorted(vec.as_dict().items())]
        report["reduce"] = {
            "input": form_to_text(phi),
            "log_coefficients": coeffs,
            "witness": form_to_text(xi),
        }
        lines.append(f"reduce {form_to_text(phi)}:")
        lines.append(f"  log coefficients: "
                     + (", ".join(f"{_gen_name(I)} -> {rat_to_str(c)}"
                                  for I, c in sorted(vec.as_dict().items())) or "all 0"))
        lines.append(f"  exactness witness: {form_to_text(xi)}")
    return report, lines


def cmd_preset(args) -> tuple[dict, list[str]]:
    name = args.name
    if name == "circle":
        nerve, sheaf = build_circle()
        rep = cohomology(cech_complex(nerve, sheaf))
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": "preset",
            "name": "circle",
            "dims": list(rep.dims),
        }
        lines = [_dims_line("circle Cech cohomology", rep.dims)]
        return report, lines
    if name.startswith("torus:"):
        try:
            k, n = (int(x) for x in name[len("torus:"):].split(","))
        except ValueError:
            raise InputError("torus preset syntax: torus:k,n")
        tr = torus_report(k, n)
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": "preset",
            "name": "torus",
            "k": k,
            "n": n,
            "dims": list(tr.derham_dims),
            "hyper_dims": list(tr.hyper_dims),
            "generators": [[_gen_name(I) for I in gens]
                           for gens in tr.log_generators],
        }
        lines = [
            _dims_line(f"torus({k},{n}) de Rham dims", tr.derham_dims),
            _dims_line("trivial-cover hypercohomology", tr.hyper_dims),
        ]
        return report, lines
    if name == "p1":
        pr = p1_report(args.window)
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": "preset",
            "name": "p1",
            "window": pr.window,
            "dims": list(pr.dims),
            "e1_second": [{"p": p, "q": q, "dim": d}
                          for (p, q), d in sorted(pr.e1_second.items())],
            "h2_representative": pr.h2_representative,
        }
        lines = [
            _dims_line(f"p1 hypercohomology (window {pr.window}, stable)", pr.dims),
            "E_1 of the second spectral sequence: "
            + ", ".join(f"({p},{q})={d}" for (p, q), d in sorted(pr.e1_second.items()) if d),
            f"H^2 generator: {pr.h2_representative}",
        ]
        return report, lines
    raise InputError(f"unknown preset {name!r} (expected circle | torus:k,n | p1)")


def cmd_selftest(args) -> tuple[dict, list[str]]:
    from .generators import (
        nonzero_d2_double_complex,
        random_cochain_complex,
        random_function_sheaf,
        random_tensor_double_complex,
        random_tensor_triple_complex,
    )

    rng = random.Random(args.seed)
    checks = []

    def check(name, fn):
        try:
            fn()
            checks.append({"name": name, "ok": True})
        except Exception as e:  # noqa: BLE001 - report, do not crash
            checks.append({"name": name, "ok": False, "error": str(e)})

    def complexes_check():
        for _ in range(10):
            cx, h = random_cochain_complex(rng)
            assert cohomology(cx).dims == h

    def cech_check():
        for _ in range(10):
            sheaf = random_function_sheaf(rng)
            cech_complex(sheaf.nerve, sheaf)  # validates delta^2 = 0

    def tensor_check():
        for _ in range(5):
            dc, a, b, ha, hb = random_tensor_double_complex(rng)
            ht = cohomology(total(dc)).dims
            for deg in range(len(ht)):
                expect = sum(ha[p] * hb[deg - p] for p in range(len(ha))
                             if 0 <= deg - p < len(hb))
                assert ht[deg] == expect

    def triple_check():
        for _ in range(5):
            assert totals_agree(random_tensor_triple_complex(rng)).agree

    def spectral_check():
        certify_convergence(nonzero_d2_double_complex())

    def derham_check():
        assert derham_cohomology(TorusSpec(2, 2, 4)).dims == (1, 2, 1)

    check("random complexes have expected cohomology", complexes_check)
    check("Cech coboundary squares to zero", cech_check)
    check("tensor totals match the product formula", tensor_check)
    check("triple-complex flattenings share one total", triple_check)
    check("spectral convergence certificate", spectral_check)
    check("torus de Rham dims", derham_check)

    ok = all(c["ok"] for c in checks)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "selftest",
        "seed": args.seed,
        "checks": checks,
        "ok": ok,
    }
    lines = [("PASS " if c["ok"] else "FAIL ") + c["name"] for c in checks]
    if not ok:
        raise SelftestFailure(report, lines)
    return report, lines


class SelftestFailure(Exception):
    def __init__(self, report, lines):
        self.report = report
        self.lines = lines
        super().__init__("selftest failed")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(
        prog="cohom",
        description="Exact rational cohomology engine",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("complex", parents=[common],
                       help="cohomology of a cochain complex from JSON")
    p.add_argument("file")
    p.set_defaults(fn=cmd_complex)

    p = sub.add_parser("cech", parents=[common],
                       help="Cech cohomology of a cover from JSON")
    p.add_argument("file")
    p.set_defaults(fn=cmd_cech)

    p = sub.add_parser("hyper", parents=[common],
                       help="Cech hypercohomology of a complex of sheaves")
    p.add_argument("file")
    p.set_defaults(fn=cmd_hyper)

    p = sub.add_parser("spectral", parents=[common],
                       help="spectral pages of a double complex")
    p.add_argument("file")
    p.add_argument("--pages", type=int, default=2)
    p.add_argument("--filtration", choices=("first", "second"), default="first")
    p.set_defaults(fn=cmd_spectral)

    p = sub.add_parser("derham", parents=[common],
                       help="algebraic de Rham cohomology of a torus model")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--invert", type=int, required=True)
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--reduce", default=None, metavar="FORM")
    p.set_defaults(fn=cmd_derham)

    p = sub.add_parser("preset", parents=[common],
                       help="landmark examples: circle | torus:k,n | p1")
    p.add_argument("name")
    p.add_argument("--window", type=int, default=4)
    p.set_defaults(fn=cmd_preset)

    p = sub.add_parser("selftest", parents=[common],
                       help="generator-backed self checks")
    p.set_defaults(fn=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.monotonic()
    try:
        report, lines = args.fn(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except SelftestFailure as e:
        _print_report(e.report, args.format, time.monotonic() - start, e.lines)
        return 2
    except CohomError as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, TypeError) as e:
        # schema-level problems from the JSON loaders
        print(f"error: malformed input: {e}", file=sys.stderr)
        return 1
    _print_report(report, args.format, time.monotonic() - start, lines)
    return 0


if __name__ == "__main__":
    sys.exit(main())
