from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import (
    bipartite4,
    cycle,
    de_bruijn,
    random_digraph,
    random_r_cyclic,
    random_strong,
    two_vertex_multiarc,
)
from digraph_bounds.bounds import BoundParams
from digraph_bounds.equality import (
    block_constants,
    check_quasiregular,
    check_regular,
    equality_diagnosis,
    root_of_integer_check,
)
from digraph_bounds.graph import Digraph, NotStronglyConnectedError, index_of_imprimitivity
from digraph_bounds.reference import perron_vector, spectral_radius_oracle
from digraph_bounds.walks import power_digraph, walk_table


class TestRegular:
    @pytest.mark.parametrize("kappa", [1, 2])
    def test_g1_not_regular(self, g1, kappa):
        assert check_regular(walk_table(g1, 2), kappa) == (False, None)

    def test_de_bruijn(self):
        assert check_regular(walk_table(de_bruijn(2, 3), 1), 1) == (True, Fraction(2))

    def test_persists_to_larger_kappa(self):
        g = Digraph.from_arcs([(1, 2, 2), (2, 1, 2)])
        wt = walk_table(g, 5)
        assert all(check_regular(wt, k) == (True, 2) for k in range(1, 6))

    def test_needs_table(self, g1):
        with pytest.raises(ValueError):
            check_regular(walk_table(g1, 1), 2)
        with pytest.raises(ValueError):
            check_regular(walk_table(g1, 1), 0)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_monotone_persistence(self, seed):
        g = random_digraph(np.random.default_rng(seed), n=None, density=0.5)
        wt = walk_table(g, 6)
        seen = False
        for kappa in range(1, 7):
            ok, c = check_regular(wt, kappa)
            assert ok or not seen
            if ok:
                seen = True
                assert float(c) == pytest.approx(spectral_radius_oracle(g).rho, rel=1e-8)


class TestQuasiregular:
    def test_two_vertex(self):
        g = two_vertex_multiarc()
        ok, consts, part = check_quasiregular(g, walk_table(g, 1), 1, 2)
        assert ok and consts[part[0]] == 2 and consts[part[1]] == 1
        _, prod, root = block_constants(g, walk_table(g, 1), 1, 2)
        assert prod == 2 and root == pytest.approx(2**0.5, abs=1e-15)

    def test_bipartite4(self):
        g = bipartite4()
        ok, consts, part = check_quasiregular(g, walk_table(g, 1), 1, 2)
        assert ok and consts[part[0]] == 2 and consts[part[2]] == 1

    def test_six_cycle_r3(self):
        g = cycle(6)
        ok, consts, part = check_quasiregular(g, walk_table(g, 1), 1, 3)
        assert ok and consts == (1, 1, 1)
        for v in range(6):
            assert part[g.index(str(v % 6 + 1))] == (part[g.index(str((v - 1) % 6 + 1))] + 1) % 3

    def test_non_divisor(self):
        g = cycle(6)
        assert check_quasiregular(g, walk_table(g, 1), 1, 4) == (False, None, None)

    def test_g1(self, g1):
        assert check_quasiregular(g1, walk_table(g1, 1), 1, 2)[0] is False
        with pytest.raises(ValueError):
            block_constants(g1, walk_table(g1, 1), 1, 2)

    def test_errors(self, g1):
        with pytest.raises(ValueError):
            check_quasiregular(g1, walk_table(g1, 1), 1, 1)
        g = Digraph.from_arcs([(1, 2), (2, 2)])
        with pytest.raises(NotStronglyConnectedError):
            check_quasiregular(g, walk_table(g, 1), 1, 2)

    def test_blocks_of_cyclic_graphs(self):
        rng = np.random.default_rng(21)
        hits = 0
        for _ in range(200):
            r = int(rng.integers(2, 5))
            g, _ = random_r_cyclic(rng, r, n_max=8, max_mult=2)
            h = index_of_imprimitivity(g)
            wt = walk_table(g, 4)
            for kappa in range(1, 5):
                ok, consts, _ = check_quasiregular(g, wt, kappa, r) if h % r == 0 else (False, 0, 0)
                if ok:
                    hits += 1
                    rho = spectral_radius_oracle(g).rho
                    prod = np.prod([float(c) for c in consts])
                    assert prod == pytest.approx(rho**r, rel=1e-8)
        assert hits > 10


class TestRootCheck:
    @pytest.mark.parametrize(
        "rho, r, verdict",
        [(2.193399638, 1, False), (1.41421356, 2, True), (2.0, 1, True), (2 ** (1 / 3), 3, True)],
    )
    def test_examples(self, rho, r, verdict):
        assert root_of_integer_check(rho, r).verdict is verdict

    def test_invalid(self):
        with pytest.raises(ValueError):
            root_of_integer_check(-1.0, 1)
        with pytest.raises(ValueError):
            root_of_integer_check(1.0, 0)


class TestDiagnosis:
    def test_g1(self, g1):
        rep = equality_diagnosis(g1, BoundParams("liu", k=0, L=2))
        assert rep.applicable and rep.clause == "none" and not rep.equality_predicted
        assert rep.bounds_collapse is False and rep.h == 1 and rep.r_used == 1

    def test_two_vertex_liu(self):
        rep = equality_diagnosis(two_vertex_multiarc(), BoundParams("liu", k=0, L=2))
        assert rep.clause == "quasiregular" and rep.equality_predicted
        assert rep.rho_power == 2 and rep.root_check.verdict
        assert rep.bound.lower == rep.bound.upper == pytest.approx(2**0.5)

    def test_two_vertex_odd_span(self):
        rep = equality_diagnosis(two_vertex_multiarc(), BoundParams("liu", k=0, L=1))
        assert rep.r_used == 1 and not rep.equality_predicted
        assert (rep.bound.lower, rep.bound.upper) == (1, 2)

    def test_xu_span(self):
        # M + N = 2 picks up the 2-cyclic structure
        rep = equality_diagnosis(two_vertex_multiarc(), BoundParams("xu", k=0, M=1, N=1))
        assert rep.r_used == 2 and rep.equality_predicted

    def test_regular(self):
        rep = equality_diagnosis(de_bruijn(3, 2), BoundParams("liu", k=1, L=1))
        assert rep.clause == "regular" and rep.c == 3 and rep.rho_power == 3

    def test_cycle_both(self):
        rep = equality_diagnosis(cycle(4), BoundParams("liu", k=0, L=2))
        assert rep.clause == "both" and rep.r_used == 2 and rep.rho_power == 1

    def test_not_strong(self):
        g = Digraph.from_arcs([(1, 1), (1, 2), (2, 2, 2)])
        rep = equality_diagnosis(g, BoundParams("liu", k=0, L=1))
        assert not rep.applicable and "strongly" in rep.reason

    def test_rejects(self, g1):
        with pytest.raises(ValueError):
            equality_diagnosis(g1, BoundParams("kolotilina", k=0, L=1))
        with pytest.raises(ValueError):
            equality_diagnosis(Digraph.from_arcs([(1, 2)]), BoundParams("liu"))

    @settings(max_examples=80, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_prediction_matches_bounds(self, seed):
        # equality_diagnosis raises if structure and exact extrema disagree
        rng = np.random.default_rng(seed)
        if rng.random() < 0.5:
            g, _ = random_r_cyclic(rng, int(rng.integers(2, 5)), n_max=8, max_mult=2)
        else:
            g = random_strong(rng, n=int(rng.integers(1, 8)), max_mult=2)
        rho = spectral_radius_oracle(g).rho
        for k in range(3):
            for L in range(1, 5):
                rep = equality_diagnosis(g, BoundParams("liu", k=k, L=L))
                if rep.equality_predicted:
                    assert rep.root_check.verdict
                    assert float(rep.rho_power) == pytest.approx(rho**rep.r_used, rel=1e-8)
            rep = equality_diagnosis(g, BoundParams("xu", k=k, M=1, N=1))


def test_perron_vector_of_power(g1):
    # primitive: A^L has the same Perron vector as A
    v = perron_vector(g1)
    for L in (2, 3, 5):
        w = perron_vector(power_digraph(g1, L))
        np.testing.assert_allclose(w / w.sum(), v / v.sum(), atol=1e-9)
