"""
Command line front end.

    cellkit cells B3 --format markdown
    cellkit kl "I2(7)" 12 12121
    cellkit classify hcell B3 1 --max-rank 2
    cellkit cache build B4

Data goes to stdout; progress and errors go to stderr. Exit status is 0 on
success, 1 on a domain error and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from .based_rings import (QuotientError, cell_quotient_ring, dihedral_small_quotient_ring,
                          enumerate_transitive_modules, nice_reduced_ring)
from .cells import REPORT_FORMATS, cell_report, compute_cells, h_cell, h_cell_involutions, is_nice
from .coxeter import build_system, parse_spec
from .graphs import classify_spectral_graphs
from .hecke import (CONVENTION_VERSION, CacheError, SizePolicyError, build_kl_table,
                    load_kl_table, naive_kl_polynomial, save_kl_table)

log = logging.getLogger("cellkit")

COMMANDS = ("cells", "report", "afunction", "kl", "hcell", "ring", "classify", "cache")

# tables for groups up to this order are written to the cache automatically
AUTO_CACHE_ORDER = 1000


class DomainError(Exception):
    pass


@dataclass
class CliConfig:
    spec: str | None
    command: str
    format: str = "markdown"
    cache_dir: Path | None = None
    threads: int | str = "auto"
    use_cache: bool = True


def default_cache_dir() -> Path:
    env = os.environ.get("CELLKIT_CACHE_DIR")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "cellkit"


def cache_path(cfg: CliConfig, spec: str) -> Path:
    safe = re.sub(r"[^A-Za-z0-9]+", "_", str(parse_spec(spec))).strip("_")
    tag = re.sub(r"[^A-Za-z0-9]+", "", CONVENTION_VERSION)[:24]
    return cfg.cache_dir / f"kl_{safe}_{tag}.json"


def _threads(value: str):
    if value == "auto":
        return value
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("--threads must be positive or 'auto'")
    return n


def build_parser() -> argparse.ArgumentParser:
    # shared flags are accepted before or after the subcommand; SUPPRESS keeps
    # a subparser from overwriting a value given at the top level
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--format", choices=REPORT_FORMATS)
    common.add_argument("--cache-dir", type=Path)
    common.add_argument("--threads", type=_threads)
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--max-rank", type=int)
    common.add_argument("--entry-bound", type=int)
    common.add_argument("-q", "--quiet", action="store_true",
                        help="no progress messages on stderr")

    p = argparse.ArgumentParser(prog="cellkit", parents=[common],
                                description="Kazhdan-Lusztig cells, a-function and based rings.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("cells", "report", "afunction"):
        c = sub.add_parser(name, parents=[common])
        c.add_argument("spec")
    c = sub.add_parser("kl", parents=[common])
    c.add_argument("spec")
    c.add_argument("x")
    c.add_argument("y")
    for name in ("hcell", "ring"):
        c = sub.add_parser(name, parents=[common])
        c.add_argument("spec")
        c.add_argument("element")
    c = sub.add_parser("classify", parents=[common])
    csub = c.add_subparsers(dest="target", required=True)
    d = csub.add_parser("dihedral", parents=[common])
    d.add_argument("n", type=int)
    d.add_argument("--max-vertices", type=int, default=None)
    h = csub.add_parser("hcell", parents=[common])
    h.add_argument("spec")
    h.add_argument("element")
    c = sub.add_parser("cache", parents=[common])
    c.add_argument("action", choices=("build", "verify", "clear"))
    c.add_argument("spec")
    return p


# -- helpers -------------------------------------------------------------------

def _system(spec):
    try:
        return build_system(spec)
    except ValueError as e:
        raise DomainError(str(e)) from None


def _element(W, label):
    try:
        return W.element(label)
    except ValueError as e:
        raise DomainError(f"unknown element {label!r}: {e}") from None


def _table(cfg: CliConfig, W):
    path = cache_path(cfg, str(W.spec)) if cfg.use_cache else None
    if path is not None and path.exists():
        log.info("loading KL table from %s", path)
        return load_kl_table(W, path)
    log.info("computing KL table for %s (|W| = %d)", W.spec, W.order)
    table = build_kl_table(W)
    if path is not None and W.order <= AUTO_CACHE_ORDER:
        try:
            save_kl_table(table, path)
        except OSError as e:
            log.warning("could not write cache %s: %s", path, e)
    return table


def _cells(cfg, W):
    table = _table(cfg, W)
    log.info("computing cells and a-values")
    return table, compute_cells(W, table)


def _dump(doc) -> str:
    return json.dumps(doc, indent=1) + "\n"


# -- commands ------------------------------------------------------------------

def cmd_cells(cfg, args):
    W = _system(args.spec)
    _, dec = _cells(cfg, W)
    return cell_report(dec, cfg.format)


def cmd_afunction(cfg, args):
    W = _system(args.spec)
    _, dec = _cells(cfg, W)
    rows = [(W.label(x), dec.a_values[int(dec.two_sided_of[x])]) for x in range(W.order)]
    if cfg.format == "json":
        return _dump({"spec": str(W.spec), "convention_version": CONVENTION_VERSION,
                      "a": {lab: a for lab, a in rows}})
    if cfg.format == "csv":
        return "label,a\n" + "".join(f"{lab},{a}\n" for lab, a in rows)
    return "| element | a |\n|---|---|\n" + "".join(f"| {lab} | {a} |\n" for lab, a in rows)


def cmd_kl(cfg, args):
    W = _system(args.spec)
    x, y = _element(W, args.x), _element(W, args.y)
    table = _table(cfg, W)
    P = table.kl(x, y)
    if cfg.format == "json":
        return _dump({"spec": str(W.spec), "x": W.label(x), "y": W.label(y),
                      "coefficients": P.to_list(), "mu": table.mu(x, y)})
    return f"{P}\n"


def cmd_hcell(cfg, args):
    W = _system(args.spec)
    x = _element(W, args.element)
    _, dec = _cells(cfg, W)
    L = int(dec.left_of[x])
    H = [W.label(h) for h in h_cell(dec, L)]
    inv = [W.label(h) for h in h_cell_involutions(dec, L)]
    if cfg.format == "json":
        return _dump({"spec": str(W.spec), "element": W.label(x), "left_cell": L,
                      "h_cell": H, "involutions": inv})
    if cfg.format == "csv":
        return "label,involution\n" + "".join(f"{h},{int(h in inv)}\n" for h in H)
    return (f"H-cell of the left cell of {W.label(x)}: {', '.join(H)}\n"
            f"involutions (Duflo candidates): {', '.join(inv)}\n")


def cmd_ring(cfg, args):
    W = _system(args.spec)
    x = _element(W, args.element)
    table, dec = _cells(cfg, W)
    ring = cell_quotient_ring(W, table, dec, int(dec.left_of[x]))
    return _dump({"spec": str(W.spec), "element": W.label(x), **ring.to_json()})


def cmd_classify(cfg, args):
    max_rank = args.max_rank
    if args.target == "dihedral":
        n = args.n
        graphs = classify_spectral_graphs(n, args.max_vertices)
        ring = dihedral_small_quotient_ring(n)
        # the small quotient ring has 2n - 1 basis elements, far beyond what
        # the generic module search handles quickly; search shallow by default
        r = max_rank if max_rank is not None else 1
        log.info("enumerating based modules of the small quotient ring, rank <= %d", r)
        result = enumerate_transitive_modules(ring, r, args.entry_bound)
        return _dump({
            "n": n,
            "note": "decategorified candidates",
            "graphs": [g.to_json() for g in graphs],
            "small_quotient": result.to_json(),
        })
    W = _system(args.spec)
    x = _element(W, args.element)
    table, dec = _cells(cfg, W)
    L = int(dec.left_of[x])
    J = int(dec.two_sided_of[x])
    r = max_rank if max_rank is not None else 2
    doc = {"spec": str(W.spec), "element": W.label(x), "a": dec.a_values[J],
           "nice": is_nice(dec, J).is_nice, "note": "decategorified candidates"}
    try:
        reduced, info = nice_reduced_ring(W, table, dec, L)
    except QuotientError:
        reduced = None
    if reduced is not None and doc["nice"]:
        log.info("enumerating based modules of the reduced ring, rank <= %d", r)
        red = enumerate_transitive_modules(reduced, r, args.entry_bound)
        doc.update(kind="reduced", reduction=info, **red.to_json())
        # the unreduced H-cell ring has a large default entry bound; only on request
        if args.entry_bound is not None:
            raw = enumerate_transitive_modules(cell_quotient_ring(W, table, dec, L), r,
                                               args.entry_bound)
            doc["h_cell_ring"] = raw.to_json()
    else:
        log.info("enumerating based modules of the H-cell ring, rank <= %d", r)
        raw = enumerate_transitive_modules(cell_quotient_ring(W, table, dec, L), r,
                                           args.entry_bound)
        doc.update(kind="h_cell", **raw.to_json())
    return _dump(doc)


def cmd_cache(cfg, args):
    W = _system(args.spec)
    path = cache_path(cfg, str(W.spec))
    if args.action == "clear":
        if path.exists():
            path.unlink()
            return f"removed {path}\n"
        return f"no cache at {path}\n"
    if args.action == "build":
        table = build_kl_table(W)
        save_kl_table(table, path)
        return f"wrote {path} ({table.nonzero_pairs()} nonzero P_(x,y))\n"
    if not path.exists():
        raise DomainError(f"no cache at {path}")
    table = load_kl_table(W, path)
    pairs = [(x, y) for y, col in enumerate(table.columns)
             for x in col.any(axis=1).nonzero()[0].tolist()]
    rng = random.Random(0)
    sample = rng.sample(pairs, max(1, len(pairs) // 100))
    memo: list = []
    for x, y in sample:
        want = memo[0](x, y) if memo else naive_kl_polynomial(W, x, y, _memo=memo)
        if want != table.kl(x, y):
            raise CacheError(f"{path}: P_({W.label(x)},{W.label(y)}) is {table.kl(x, y)}, "
                             f"recomputed {want}")
    return f"verified {len(sample)} of {len(pairs)} cached polynomials in {path}\n"


SHARED_DEFAULTS = {"format": None, "cache_dir": None, "threads": "auto", "no_cache": False,
                   "max_rank": None, "entry_bound": None, "quiet": False}

HANDLERS = {"cells": cmd_cells, "report": cmd_cells, "afunction": cmd_afunction,
            "kl": cmd_kl, "hcell": cmd_hcell, "ring": cmd_ring,
            "classify": cmd_classify, "cache": cmd_cache}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    for name, value in SHARED_DEFAULTS.items():
        if not hasattr(args, name):
            setattr(args, name, value)
    if not args.quiet:
        logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                            format="cellkit: %(message)s")
    cfg = CliConfig(
        spec=getattr(args, "spec", None),
        command=args.command,
        format=args.format or "markdown",
        cache_dir=args.cache_dir or default_cache_dir(),
        threads=args.threads,
        use_cache=not args.no_cache,
    )
    if cfg.command == "classify" and args.format is None:
        cfg.format = "json"
    try:
        out = HANDLERS[cfg.command](cfg, args)
    except (DomainError, CacheError, QuotientError, SizePolicyError, ValueError) as e:
        print(f"cellkit: error: {e}", file=sys.stderr)
        return 1
    stdout.write(out)
    stdout.flush()
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
