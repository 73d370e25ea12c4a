"""Command-line interface: ``tailforge COMMAND [diagram | --corpus FILE] [options]``.

Every command emits one record per diagram, in input order.  With ``--json``
each record is one line of deterministic JSON.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from .algebra import KhTable, dumps
from .bstate import DomainError, adequacy_report, b_state, reduce_graph
from .cache import ResultCache, cache_key
from .corpus import CorpusEntry, CorpusError, default_corpus, parse_corpus, parse_entry
from .diagram import DiagramError, stats
from .jones import colored_jones, kauffman_bracket, tail_extract
from .khovanov import shifted_homology, stabilization_front, verify_bounds
from .tl import DEFAULT_CAP, ResourceError
from .verify import FAIL, summary, verify_all

COMMANDS = ("parse", "bstate", "jones", "cjones", "tail", "kh", "verify")


@dataclass(frozen=True)
class RunConfig:
    command: str
    color: int = 2
    nmax: int = 5
    twists: int = 2
    nmin: int | None = None
    cap: int = DEFAULT_CAP
    verify_bounds: bool = False

    def params(self) -> dict:
        """Parameters that affect the result of ``command`` (the cache key)."""
        keep = {
            "parse": (), "bstate": (), "jones": (),
            "cjones": ("color", "cap"),
            "tail": ("nmax", "nmin", "cap"),
            "kh": ("color", "twists", "nmin", "verify_bounds"),
        }[self.command]
        return {k: v for k, v in asdict(self).items() if k in keep}


# -- per-diagram computations -------------------------------------------------------------

def _parse(d) -> dict:
    return {"pd": d.render_pd(), "key": d.key(), "unknots": d.unknots, **stats(d).to_json()}


def _bstate(d) -> dict:
    g = b_state(d)
    adequate, n_i = adequacy_report(g)
    red = reduce_graph(g)
    return {"g": g.g, "n": d.n, "n_i": n_i, "adequate": adequate, "graph": g.to_json(),
            "reduced": {"circles": red.number_of_nodes(), "struts": red.number_of_edges()}}


def _jones(d) -> dict:
    return {"bracket": kauffman_bracket(d).to_json()}


def _cjones(d, cfg: RunConfig) -> dict:
    return colored_jones(d, cfg.color, cap=cfg.cap).to_json()


def _tail(d, cfg: RunConfig) -> dict:
    return tail_extract(d, cfg.nmax, n_min=cfg.nmin, cap=cfg.cap).to_json()


def _kh(d, cfg: RunConfig) -> dict:
    N, k = cfg.color, cfg.twists
    if N == 1:
        r, front = shifted_homology(d), None
    else:
        r = shifted_homology(d, N, k=k)
        front = stabilization_front(r.table, shifted_homology(d, N, k=k + 1).table)
    out = r.to_json()
    out["front"] = front
    out["bounds"] = verify_bounds(r, d, N, n_min=cfg.nmin, front=front).to_json() \
        if cfg.verify_bounds else None
    return out


def compute(source: str, cfg: RunConfig) -> dict:
    """Result payload for one diagram given as text; raises on bad input."""
    _, d, _ = parse_entry(f"x: {source}")
    fn = {"parse": _parse, "bstate": _bstate, "jones": _jones}.get(cfg.command)
    if fn is not None:
        return fn(d)
    return {"cjones": _cjones, "tail": _tail, "kh": _kh}[cfg.command](d, cfg)


def _job(args: tuple[str, str, RunConfig, str | None]) -> dict:
    name, source, cfg, cache_dir = args
    record = {"name": name, "command": cfg.command}
    try:
        _, d, _ = parse_entry(f"x: {source}")
        cache = ResultCache(cache_dir) if cache_dir else None
        key = cache_key(d.key(), cfg.command, cfg.params()) if cache else None
        result = cache.get(key) if cache else None
        if result is None:
            result = compute(source, cfg)
            if cache:
                cache.put(key, result)
        record["result"] = result
    except ResourceError as exc:
        record["skipped"] = str(exc)
    except (DomainError, DiagramError, ValueError) as exc:
        record["error"] = str(exc)
    return record


# -- input handling -----------------------------------------------------------------------

def _inputs(ns) -> tuple[list[CorpusEntry], list[CorpusError]]:
    if ns.corpus:
        if ns.corpus == "default":
            return default_corpus(), []
        with open(ns.corpus, encoding="utf-8") as fh:
            return parse_corpus(fh.read())
    if not ns.diagram:
        raise SystemExit("give a diagram or --corpus FILE")
    text = " ".join(ns.diagram)
    named = {e.name: e for e in default_corpus()}
    if text in named:
        return [named[text]], []
    return parse_corpus(f"input: {text}")


def _render(record: dict) -> str:
    head = record["name"]
    if "error" in record:
        return f"{head}: error: {record['error']}"
    if "skipped" in record:
        return f"{head}: skipped: {record['skipped']}"
    res = record["result"]
    if record["command"] == "kh":
        table = KhTable.from_json(res["table"]).render()
        return f"{head}: shifts {res['shifts']} front {res['front']}\n{table}"
    return f"{head}: {dumps(res)}"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tailforge", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("diagram", nargs="*", help="PD code, 'BRAID s:k ...', or a bundled corpus name")
    p.add_argument("--corpus", help="corpus file ('default' for the bundled corpus)")
    p.add_argument("--color", type=int, default=2, help="color N for cjones and kh")
    p.add_argument("--nmax", type=int, default=5, help="largest color used by tail")
    p.add_argument("--twists", type=int, default=2, help="twist depth k approximating projectors")
    p.add_argument("--nmin", type=int, default=None, help="known lower bound on the crossing number")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest projector arity")
    p.add_argument("--verify-bounds", action="store_true", help="kh: scan the degree bounds")
    p.add_argument("--json", action="store_true", help="one JSON record per line")
    p.add_argument("--cache", help="cache directory (default: $TAILFORGE_CACHE, else no cache)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--only", type=int, action="append", help="verify: run only these criteria")
    return p


def _verify(ns, entries) -> int:
    results = verify_all(entries if ns.corpus else None, cap=ns.cap,
                         only=set(ns.only) if ns.only else None)
    if ns.json:
        print(dumps(summary(results)))
    else:
        for r in results:
            print(r.line())
    return 1 if any(r.status == FAIL for r in results) else 0


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    if ns.color < 0 or ns.nmax < 1 or ns.twists < 1 or ns.cap < 1 or ns.jobs < 1:
        print("error: --color must be >= 0; --nmax, --twists, --cap, --jobs >= 1", file=sys.stderr)
        return 2
    if ns.command == "verify" and not ns.corpus:
        return _verify(ns, None)
    entries, errors = _inputs(ns)
    for err in errors:
        print(f"line {err.lineno}: {err.message}: {err.line}", file=sys.stderr)
    if ns.command == "verify":
        return _verify(ns, entries) or (1 if errors else 0)
    cfg = RunConfig(ns.command, ns.color, ns.nmax, ns.twists, ns.nmin, ns.cap, ns.verify_bounds)
    cache_dir = ns.cache or os.environ.get("TAILFORGE_CACHE")
    jobs = [(e.name, e.source, cfg, cache_dir) for e in entries]
    if ns.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
            records = list(pool.map(_job, jobs))
    else:
        records = [_job(j) for j in jobs]
    failed = bool(errors)
    for rec in records:
        failed = failed or "error" in rec
        print(dumps(rec) if ns.json else _render(rec))
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
