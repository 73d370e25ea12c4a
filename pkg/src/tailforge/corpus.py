"""Bundled diagram corpus and the corpus file format.

A corpus file has one diagram per line, ``name: PDCODE`` or
``name: BRAID s:k g1 g2 ...``; ``#`` starts a comment and blank lines are
skipped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import (
    DiagramError,
    LinkDiagram,
    ParseError,
    add_kink,
    braid_closure,
    double_crossing,
    mirror,
    parse_braid,
    parse_pd,
)


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    diagram: LinkDiagram
    source: str
    tags: frozenset = field(default_factory=frozenset)
    base: str | None = None  # entry this one was derived from

    def line(self) -> str:
        return f"{self.name}: {self.source}"


@dataclass
class CorpusError:
    lineno: int
    line: str
    message: str

    def to_json(self) -> dict:
        return {"line": self.lineno, "text": self.line, "error": self.message}


def parse_entry(text: str) -> tuple[str, LinkDiagram, str]:
    if ":" not in text:
        raise ParseError("expected 'name: diagram'")
    name, body = (s.strip() for s in text.split(":", 1))
    if not name:
        raise ParseError("missing name")
    if body.upper().startswith("BRAID"):
        d = braid_closure(parse_braid(body[5:].strip()))
    else:
        d = parse_pd(body)
    return name, d, body


def parse_corpus(text: str) -> tuple[list[CorpusEntry], list[CorpusError]]:
    """Parse every line; bad lines are collected, not fatal."""
    entries, errors = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            name, d, body = parse_entry(line)
        except (DiagramError, ValueError) as exc:
            errors.append(CorpusError(lineno, raw.rstrip("\n"), str(exc)))
            continue
        tags = {"negative_braid"} if _negative_braid(body) else set()
        entries.append(CorpusEntry(name, d, body, frozenset(tags)))
    return entries, errors


def load_corpus(path) -> tuple[list[CorpusEntry], list[CorpusError]]:
    with open(path, encoding="utf-8") as fh:
        return parse_corpus(fh.read())


def _negative_braid(body: str) -> bool:
    if not body.upper().startswith("BRAID"):
        return False
    letters = body.split()[2:]
    return bool(letters) and all(g.startswith("-") for g in letters)


_BASE = """
unknot: U
unlink2: U U
trefoil_left: BRAID s:2 -1 -1 -1
trefoil_kt: X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]
figure_eight: X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]
figure_eight_braid: BRAID s:3 1 -2 1 -2
hopf_pos: BRAID s:2 1 1
hopf_neg: BRAID s:2 -1 -1
t24_neg: BRAID s:2 -1 -1 -1 -1
t25_neg: BRAID s:2 -1 -1 -1 -1 -1
t27_neg: BRAID s:2 -1 -1 -1 -1 -1 -1 -1
nb3_a: BRAID s:3 -1 -2 -1 -2
nb3_b: BRAID s:3 -1 -1 -2 -2
nb3_c: BRAID s:3 -1 -2 -1 -2 -1 -2
t34_neg: BRAID s:3 -1 -2 -1 -2 -1 -2 -1 -2
nb4_a: BRAID s:4 -1 -2 -3 -1 -2 -3
"""


def default_corpus() -> list[CorpusEntry]:
    """Bundled 0-8 crossing diagrams plus mirrored, kinked and strut-doubled variants."""
    entries, errors = parse_corpus(_BASE)
    assert not errors, errors
    by_name = {e.name: e for e in entries}
    out = list(entries)

    def derived(name, d, base, *tags):
        out.append(CorpusEntry(name, d, d.render_pd(), frozenset(tags), base))

    derived("trefoil_right", mirror(by_name["trefoil_left"].diagram), "trefoil_left", "mirror")
    for base in ("unknot", "trefoil_left", "hopf_neg", "figure_eight"):
        d = by_name[base].diagram
        derived(f"{base}+kink-", add_kink(d, 0, -1), base, "kink", "kink-")
        derived(f"{base}+kink+", add_kink(d, 0, 1), base, "kink", "kink+")
    for base in ("trefoil_left", "hopf_neg", "nb3_a", "t24_neg"):
        d = by_name[base].diagram
        derived(f"{base}+double", double_crossing(d, 0), base, "doubled")
    return out


def corpus_text(entries: list[CorpusEntry]) -> str:
    return "\n".join(e.line() for e in entries) + "\n"
