import pytest
from hypothesis import given, settings

from oracles import braid_diagrams
from tailforge.algebra import KhTable, euler_char
from tailforge.corpus import default_corpus
from tailforge.diagram import BraidWord, add_kink, disjoint_union, mirror, unknot
from tailforge.jones import kauffman_bracket, normalized_series
from tailforge.khovanov import (
    ChainComplex,
    KhResult,
    build_complex,
    crossing_vs_projector_check,
    homology,
    homology_table,
    insert_twist_projector,
    min_degree_bound_holds,
    scan_complex,
    shifted_homology,
    simplify_scan,
    stabilization_front,
    tail_homology_estimate,
    twist_series,
    verify_bounds,
)

CORPUS = default_corpus()
BY = {e.name: e.diagram for e in CORPUS}
UNKNOT_TABLE = KhTable({(0, 1): 1, (0, -1): 1})
SMALL = [e for e in CORPUS if e.diagram.n <= 8]


def _differential_degrees_ok(c: ChainComplex) -> bool:
    # independent of ChainComplex.check: entries index into the generator lists,
    # and the h-degree is stored doubled, so one step down is 2
    for h, block in c.diff.items():
        for src, row in block.items():
            for tgt in row:
                if c.gens[h - 2][tgt][1] != c.gens[h][src][1] + 1:
                    return False
    return True


def test_unknot_complex():
    c = build_complex(unknot())
    assert c.degrees() == [0]
    assert sorted(q for _, q in c.gens[0]) == [-1, 1]
    assert homology(unknot()).table == UNKNOT_TABLE


def test_kink_shift():
    assert homology(add_kink(unknot(), 0, 1)).table == UNKNOT_TABLE.shift(1, 1)


@pytest.mark.parametrize("entry", SMALL, ids=lambda e: e.name)
def test_complexes_agree(entry):
    d = entry.diagram
    cube, scan = build_complex(d), scan_complex(d, check=True)
    cube.check()
    scan.check()
    simp = simplify_scan(scan)
    simp.check()
    assert _differential_degrees_ok(cube)
    t = homology_table(cube)
    assert homology_table(scan) == t == homology_table(simp)
    assert euler_char(t) == kauffman_bracket(d)
    assert min_degree_bound_holds(cube, d.n)


@settings(max_examples=50)
@given(braid_diagrams(max_strands=4, max_len=6))
def test_random_simplification_preserves_homology(d):
    cube = build_complex(d)
    assert homology_table(simplify_scan(scan_complex(d))) == homology_table(cube)
    assert euler_char(homology_table(cube)) == kauffman_bracket(d)


def test_simplify_fixed_point_and_size():
    s = simplify_scan(scan_complex(BY["trefoil_left"]))
    assert s.n_generators() <= 8
    again = simplify_scan(s)
    assert homology_table(again) == homology_table(s) and again.n_generators() == s.n_generators()


@pytest.mark.parametrize("name,total", [("unknot", 2), ("trefoil_left", 4), ("figure_eight", 6),
                                        ("hopf_neg", 4), ("unlink2", 4)])
def test_known_total_dimensions(name, total):
    assert homology(BY[name]).table.total_dim() == total


@pytest.mark.parametrize("name", ["trefoil_left", "figure_eight", "hopf_neg", "nb3_a"])
def test_mirror_dualizes(name):
    t = homology(BY[name]).table
    dual = KhTable({(-i, -j): v for (i, j), v in t.entries.items()})
    assert homology(mirror(BY[name])).table == dual


def test_disjoint_union_tensor():
    d = BY["trefoil_left"]
    assert homology(disjoint_union(d, unknot())).table == homology(d).table.tensor(UNKNOT_TABLE)


def test_shifted_trefoil():
    r = shifted_homology(BY["trefoil_left"])
    assert r.shifts_applied == (3, 2)
    assert isinstance(r, KhResult) and r.table[(0, 0)] == 1


def test_twisted_unknot_counts():
    td = insert_twist_projector(unknot(), None, 2, 2)
    assert td.y_hat == 2
    assert td.n_hat == td.diagram.n


def test_color_one_twist_is_plain():
    d = BY["trefoil_left"]
    assert shifted_homology(insert_twist_projector(d, None, 1, 3)).table == shifted_homology(d).table


def test_kink_invariance_of_shifted_tables():
    for base in ("unknot", "trefoil_left", "hopf_neg"):
        assert shifted_homology(BY[base + "+kink-"]).table == shifted_homology(BY[base]).table


def test_unknot_twist_series():
    s = twist_series(unknot(), 2, [1, 2, 3])
    assert s.monotone()
    assert (s.fronts[2], s.fronts[3]) == (8, 12)
    for k in (2, 3):
        assert s.tables[k][(0, 0)] == 1
    # below the front, consecutive depths agree
    f = s.fronts[2]
    assert s.tables[2].restrict_rows(f - 1) == s.tables[3].restrict_rows(f - 1)
    assert s.tables[2].row(f) != s.tables[3].row(f)


def test_twisted_euler_matches_series_below_front():
    d = BY["trefoil_left"]
    t2 = shifted_homology(d, 2, k=2).table
    front = stabilization_front(t2, shifted_homology(d, 2, k=3).table)
    chi = {k // 2: c for k, c in euler_char(t2.restrict_rows(front - 1)).terms.items()}
    series = normalized_series(d, 2)
    top = (front - 1 - 2 * d.n) / 2  # anti-diagonals fully inside the certified rows
    assert all(chi.get(m, 0) == series.get(m, 0) for m in range(0, int(top) + 1))


@pytest.mark.parametrize("k", [2, 3])
@pytest.mark.parametrize("name", ["unknot", "hopf_neg"])
def test_bounds_below_front(name, k):
    d = BY[name]
    r = shifted_homology(d, 2, k=k)
    front = stabilization_front(r.table, shifted_homology(d, 2, k=k + 1).table)
    rep = verify_bounds(r, d, 2, front=front)
    assert rep.passed, rep.to_json()
    for name_ in ("bd1", "bd3", "bd4", "endi"):
        assert rep.by_name(name_).passed


def test_bounds_negative_control():
    d = BY["trefoil_left"]
    good = shifted_homology(d)
    bad = KhResult(good.table.shift(-4, 0), good.shifts_applied)
    rep = verify_bounds(bad, d)
    assert not rep.passed
    assert rep.by_name("bd1").violations


def test_bounds_inadequate_use_weak_forms():
    bad = BY["unknot+kink+"]
    rep = verify_bounds(shifted_homology(bad), bad)
    names = {c.name for c in rep.checks}
    assert "bd2a" in names and "bd3a" in names and not rep.adequate


@pytest.mark.parametrize("entry", SMALL, ids=lambda e: e.name)
def test_plain_homology_passes_smfr(entry):
    rep = verify_bounds(shifted_homology(entry.diagram), entry.diagram)
    assert rep.by_name("smfr").passed


def test_tail_estimate_unknot():
    rep = tail_homology_estimate(unknot(), [1, 2], 2)
    assert rep.certified
    assert rep.comparisons[0]["rows"] == [0]
    assert rep.estimate[(0, 0)] == 1


def test_tail_estimate_single_color():
    rep = tail_homology_estimate(unknot(), [2], 2)
    assert not rep.certified and "no comparison possible" in rep.notes[0]


def test_crossing_vs_projector_hopf_slot():
    rep = crossing_vs_projector_check(BraidWord(2, (-1, -1)), 2, 2)
    assert rep.agree
    assert rep.rows_checked == [0, 4]


def test_crossing_vs_projector_color_one():
    rep = crossing_vs_projector_check(BraidWord(2, (-1,)), 1, 2)
    assert rep.agree and rep.rows_checked == [0]
