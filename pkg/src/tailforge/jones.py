"""Kauffman bracket, colored Jones polynomials, shifts and tails.

Normalization: ``J_N`` of a diagram is the bracket of its ``N``-cable with a
Jones-Wenzl projector on every component, so ``J_N(unknot) = (-1)^N [N+1]``
and ``J_1`` is the Kauffman bracket itself (unknot ``-(q + q^-1)``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import LaurentPoly, TailSeries
from .bstate import DomainError, b_reduce, b_state, is_b_adequate
from .contraction import bracket_network, colored_network, contract
from .diagram import LinkDiagram, double_crossing
from .tl import DEFAULT_CAP, ResourceError

METHODS = ("tl-contraction", "multicone")


class ConventionError(AssertionError):
    """A structural identity that holds for every link failed: a convention bug."""


@dataclass(frozen=True)
class ColoredEvaluation:
    diagram: str  # content hash of the diagram
    N: int
    value: LaurentPoly
    method: str

    def to_json(self) -> dict:
        return {"diagram": self.diagram, "N": self.N, "method": self.method, "value": self.value.to_json()}


_CACHE: dict[tuple, LaurentPoly] = {}
_CACHE_MAX = 512


def _memo(key: tuple, compute) -> LaurentPoly:
    got = _CACHE.get(key)
    if got is None:
        got = compute()
        if len(_CACHE) >= _CACHE_MAX:
            _CACHE.pop(next(iter(_CACHE)))
        _CACHE[key] = got
    return got


def kauffman_bracket(d: LinkDiagram) -> LaurentPoly:
    """Exact bracket by planar contraction (no enumeration of the 2^n states)."""
    return _memo((d.key(), 1, "bracket"), lambda: contract(bracket_network(d), backend="exact"))


def _check_color(N: int, cap: int) -> None:
    if N < 0:
        raise ValueError("color must be nonnegative")
    if N > cap:
        raise ResourceError(f"color {N} needs a projector of arity {N}, above the cap {cap}")


def colored_jones(d: LinkDiagram, N: int, *, cap: int = DEFAULT_CAP, projectors: str = "all",
                  method: str = "tl-contraction") -> ColoredEvaluation:
    """``J_N`` by cabling into single crossings and contracting with projectors.

    ``projectors="component"`` puts a single projector on each component;
    ``"all"`` (default, same value) puts one on every cable bundle, which
    lets the contraction prune far more states.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    _check_color(N, cap)
    if N == 0:
        value = LaurentPoly.const(1)
    elif N == 1:
        value = kauffman_bracket(d)
    else:
        value = _memo((d.key(), N, method, projectors),
                      lambda: contract(colored_network(d, N, method, projectors)))
    return ColoredEvaluation(d.key(), N, value, method)


def multicone_colored_jones(d: LinkDiagram, N: int, *, cap: int = DEFAULT_CAP) -> ColoredEvaluation:
    """``J_N`` with each colored crossing expanded as a signed sum of flat colored tangles."""
    _check_color(N, cap)
    if N == 0:
        value = LaurentPoly.const(1)
    else:
        value = _memo((d.key(), N, "multicone", "all"),
                      lambda: contract(colored_network(d, N, "multicone", "all")))
    return ColoredEvaluation(d.key(), N, value, "multicone")


def shift_exponent(d: LinkDiagram, N: int) -> Fraction:
    """The q-exponent ``n N^2 / 2 + g N`` of the shift."""
    return Fraction(d.n * N * N, 2) + b_state(d).g * N


def shifted_colored_jones(d: LinkDiagram, N: int, *, cap: int = DEFAULT_CAP) -> LaurentPoly:
    if N == 0:
        return LaurentPoly.const(1)
    J = colored_jones(d, N, cap=cap).value
    out = J.shift(int(2 * shift_exponent(d, N)))
    if not out.in_q2_ring():
        raise ConventionError(f"shifted J_{N} is not in Z[q^(+-2)]: {out.to_text()}")
    return out


def normalized_series(d: LinkDiagram, N: int, *, cap: int = DEFAULT_CAP) -> dict[int, int]:
    """``(-1)^(gN)`` times the shifted ``J_N``, as ``{q-exponent: coefficient}``."""
    sign = -1 if (b_state(d).g * N) % 2 else 1
    return {k // 2: sign * c for k, c in shifted_colored_jones(d, N, cap=cap).terms.items()}


def tail_extract(d: LinkDiagram, N_max: int, *, n_min: int | None = None,
                 cap: int = DEFAULT_CAP) -> TailSeries:
    """Stable low-degree prefix of the normalized series, certified strictly below ``(N_max - n)/2``.

    ``n`` is ``n_min`` when supplied, else the crossing number of ``d``.  Every
    ``N <= N_max`` is checked against ``N_max`` below its own bound; a
    disagreement clears ``consistent``.  Diagrams that are not B-adequate are
    computed but flagged ``certified=False``.
    """
    if N_max < 1:
        raise ValueError("N_max must be at least 1")
    n_used = d.n if n_min is None else n_min
    g = b_state(d).g
    series = {N: normalized_series(d, N, cap=cap) for N in range(1, N_max + 1)}
    top = series[N_max]
    degree = Fraction(N_max - n_used, 2)
    consistent = True
    for N, s in series.items():
        bound = Fraction(N - n_used, 2)
        for m in set(s) | set(top):
            if m < bound and s.get(m, 0) != top.get(m, 0):
                consistent = False
    adequate = is_b_adequate(d)
    notes = []
    if not adequate:
        notes.append("diagram is not B-adequate; prefix is not certified")
    if not consistent:
        notes.append("series for different colors disagree below their bounds")
    coeffs = {m: c for m, c in top.items() if m < degree}
    return TailSeries(
        coeffs=coeffs,
        certified_degree=degree,
        sign_normalization={N: -1 if (g * N) % 2 else 1 for N in series},
        n_used=n_used,
        n_min_supplied=n_min is not None,
        certified=adequate and consistent,
        consistent=consistent,
        notes=tuple(notes),
    )


@dataclass
class ReductionReport:
    tails: dict[str, TailSeries]
    common_degree: Fraction
    agree: bool
    diagrams: dict[str, str] = field(default_factory=dict)

    @property
    def vacuous(self) -> bool:
        """No coefficient lies below the common certified degree."""
        return self.common_degree <= 0

    def to_json(self) -> dict:
        return {
            "tails": {k: v.to_json() for k, v in sorted(self.tails.items())},
            "common_degree": str(self.common_degree),
            "agree": self.agree,
            "vacuous": self.vacuous,
            "diagrams": dict(sorted(self.diagrams.items())),
        }


def _agree_below(tails: list[TailSeries], bound: Fraction) -> bool:
    ref = tails[0].prefix(bound)
    return all(t.prefix(bound) == ref for t in tails[1:])


def reduction_tail_check(d: LinkDiagram, N_max: int, *, crossing: int = 0,
                         cap: int = DEFAULT_CAP) -> ReductionReport:
    """Compare tails of ``d``, its B-reduction and ``d`` with one strut doubled."""
    if not is_b_adequate(d):
        raise DomainError("reduction_tail_check needs a B-adequate diagram")
    variants = {"original": d, "reduced": b_reduce(d)[0]}
    if d.n:
        variants["doubled"] = double_crossing(d, crossing)
    tails = {k: tail_extract(v, N_max, cap=cap) for k, v in variants.items()}
    common = min(t.certified_degree for t in tails.values())
    agree = all(t.certified for t in tails.values()) and _agree_below(list(tails.values()), common)
    return ReductionReport(tails, common, agree, {k: v.render_pd() for k, v in variants.items()})
