from tailforge.bn import TangleComplex, cycles, join, matching, scan
from tailforge.corpus import default_corpus


def test_cycles_of_identical_matchings():
    m = matching([(0, 1), (2, 3)])
    n, _ = cycles(m, m)
    assert n == 2


def test_cycles_of_crossed_matchings():
    n, _ = cycles(matching([(0, 1), (2, 3)]), matching([(1, 2), (3, 0)]))
    assert n == 1


def test_join_counts_closed_loops():
    _, loops = join(matching([(0, 1)]), matching([(0, 1)]))
    assert loops == 1


def test_two_crossing_tensor_d2():
    a = TangleComplex.crossing(1, 2, 3, 4)
    b = TangleComplex.crossing(3, 4, 5, 6)
    t = a.tensor(b)
    assert t.check_d2()
    t.simplify()
    assert t.check_d2()


def test_circle_and_empty():
    assert len(TangleComplex.empty()) == 1
    assert len(TangleComplex.circle()) == 2


def test_closed_scan_sizes():
    # after full simplification only homology survives: trefoil has 4 generators
    by = {e.name: e.diagram for e in default_corpus()}
    d = by["trefoil_left"]
    assert len(scan(d.crossings, d.unknots, check=True)) == 4
    d = by["figure_eight"]
    assert len(scan(d.crossings, d.unknots, check=True)) == 6
