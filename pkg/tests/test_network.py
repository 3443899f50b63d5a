import numpy as np
import pytest
from fractions import Fraction

from ngpair import network as nw


def degrees(net):
    return np.array([len(a) for a in net.adjacency])


class TestGenerateEr:
    def test_deterministic(self):
        a = nw.generate_er(200, 6.0, seed=9)
        b = nw.generate_er(200, 6.0, seed=9)
        assert np.array_equal(a.edges, b.edges)
        assert nw.generate_er(200, 6.0, seed=10).m != a.m or not np.array_equal(
            nw.generate_er(200, 6.0, seed=10).edges, a.edges)

    def test_n2_k1_always_has_the_edge(self):
        for seed in range(5):
            net = nw.generate_er(2, 1.0, seed=seed)
            assert net.m == 1
            assert net.adjacency == [[1], [0]]

    @pytest.mark.parametrize("n,k", [(2, 0.0), (2, 1.5), (500, 500), (1, 0.5)])
    def test_parameter_errors(self, n, k):
        with pytest.raises(ValueError):
            nw.generate_er(n, k, seed=0)

    def test_mean_degree_over_seeds(self):
        # n=500, k=5: empirical mean degree within 5% over 100 seeds
        total = 0.0
        for seed in range(100):
            net = nw.generate_er(500, 5.0, seed=seed)
            total += 2.0 * net.m / net.n
        mean = total / 100
        assert 5.0 * 0.95 < mean < 5.0 * 1.05

    @pytest.mark.parametrize("n", [100, 1000])
    def test_mean_degree_three_standard_errors(self, n):
        k = 7.0
        net = nw.generate_er(n, k, seed=3)
        mean = degrees(net).mean()
        # each potential edge is Bernoulli(k/(n-1)); se of the mean degree
        p = k / (n - 1)
        se = np.sqrt(2 * p * (1 - p) / n * (n - 1))
        assert abs(mean - k) < 3 * max(se, 0.3)

    def test_symmetric_simple_graph(self):
        net = nw.generate_er(120, 4.0, seed=5)
        for i, nbrs in enumerate(net.adjacency):
            assert i not in nbrs
            assert len(set(nbrs)) == len(nbrs)
            for j in nbrs:
                assert i in net.adjacency[j]
        assert net.m == sum(len(a) for a in net.adjacency) // 2
        assert np.all(net.edges[:, 0] < net.edges[:, 1])

    def test_pair_linear_inversion_brute_force(self):
        n = 9
        total = n * (n - 1) // 2
        i, j = nw._pairs_from_linear(np.arange(total), n)
        expect = [(a, b) for a in range(n) for b in range(a + 1, n)]
        assert list(zip(i.tolist(), j.tolist())) == expect

    def test_isolated_nodes_permitted(self):
        net = nw.generate_er(300, 1.2, seed=1)
        assert (degrees(net) == 0).sum() > 0  # ER at low k produces them


class TestAssignOpinions:
    def test_symmetric_balance(self):
        net = nw.generate_er(400, 5.0, seed=0)
        bound = 3.0 / (2.0 * np.sqrt(net.n))
        for seed in range(10):
            st = nw.assign_opinions(net, 0.0, "symmetric", seed)
            frac_a = np.mean(st.opinions == nw.A)
            assert abs(frac_a - 0.5) < bound
            assert st.committed_count == 0

    def test_committed_counts(self):
        net = nw.generate_er(100, 5.0, seed=0)
        st = nw.assign_opinions(net, 0.10, "committed", seed=4)
        assert st.committed_count == 10
        assert int(np.sum(st.opinions == nw.C)) == 10
        assert int(np.sum(st.opinions == nw.B)) == 90

    def test_round_half_up(self):
        net = nw.generate_er(100, 5.0, seed=0)
        st = nw.assign_opinions(net, 0.005, "committed", seed=4)
        assert st.committed_count == 1

    def test_mode_validation(self):
        net = nw.generate_er(10, 3.0, seed=0)
        with pytest.raises(ValueError):
            nw.assign_opinions(net, 0.1, "symmetric", seed=0)
        with pytest.raises(ValueError):
            nw.assign_opinions(net, 0.0, "other", seed=0)
        with pytest.raises(ValueError):
            nw.assign_opinions(net, 1.0, "committed", seed=0)


def tiny_network(n, edge_pairs):
    edges = np.array(sorted(edge_pairs), dtype=np.int64).reshape(-1, 2)
    adjacency = [[] for _ in range(n)]
    for a, b in edges.tolist():
        adjacency[a].append(b)
        adjacency[b].append(a)
    return nw.Network(n=n, adjacency=adjacency, edges=edges, m=len(edges))


class TestLinkCensus:
    def test_triangle(self):
        net = tiny_network(3, [(0, 1), (0, 2), (1, 2)])
        st = nw.OpinionState(np.array([nw.A, nw.A, nw.B], dtype=np.int8), 0)
        cen = nw.link_census(net, st)
        assert np.allclose(cen.l, [1 / 3, 2 / 3, 0, 0, 0, 0])

    def test_path_with_mixed(self):
        net = tiny_network(3, [(0, 1), (1, 2)])
        st = nw.OpinionState(np.array([nw.A, nw.AB, nw.B], dtype=np.int8), 0)
        cen = nw.link_census(net, st)
        assert np.allclose(cen.l, [0, 0, 0.5, 0, 0.5, 0])

    def test_symmetric_ensemble_mean_product_measure(self):
        acc = np.zeros(6)
        m_total = 0
        for seed in range(30):
            net = nw.generate_er(500, 8.0, seed=seed)
            st = nw.assign_opinions(net, 0.0, "symmetric", seed=seed + 100)
            cen = nw.link_census(net, st)
            acc += cen.counts
            m_total += cen.m
        mean = acc / m_total
        tol = 4.0 / np.sqrt(m_total)
        assert np.all(np.abs(mean - np.array([0.25, 0.5, 0, 0.25, 0, 0])) < tol)

    def test_committed_census_exact_rational_sum(self):
        net = nw.generate_er(150, 6.0, seed=2)
        st = nw.assign_opinions(net, 0.12, "committed", seed=3)
        cen = nw.link_census(net, st)
        assert len(cen.l) == 9
        total = sum(Fraction(int(c), cen.m) for c in cen.counts)
        assert total == 1 - Fraction(cen.cc_count, cen.m)
        assert np.all(cen.counts >= 0)

    def test_degenerate_network(self):
        net = nw.Network(n=3, adjacency=[[], [], []],
                         edges=np.empty((0, 2), dtype=np.int64), m=0)
        st = nw.OpinionState(np.array([nw.A] * 3, dtype=np.int8), 0)
        with pytest.raises(nw.DegenerateNetworkError):
            nw.link_census(net, st)


class TestEdgelistIO:
    def test_round_trip(self, tmp_path):
        net = nw.generate_er(60, 4.0, seed=11)
        path = tmp_path / "net.edges"
        nw.save_edgelist(net, path)
        back = nw.load_edgelist(path, n=60)
        assert back.n == net.n
        assert np.array_equal(np.sort(back.edges, axis=0), np.sort(net.edges, axis=0))
        text = path.read_text()
        rows = [tuple(map(int, line.split())) for line in text.splitlines()]
        assert rows == sorted(rows)
        assert all(a < b for a, b in rows)

    def test_trailing_isolated_needs_explicit_n(self, tmp_path):
        path = tmp_path / "mini.edges"
        path.write_text("0 1\n")
        assert nw.load_edgelist(path).n == 2
        assert nw.load_edgelist(path, n=5).n == 5

    def test_rejects_malformed(self, tmp_path):
        path = tmp_path / "bad.edges"
        path.write_text("2 1\n")
        with pytest.raises(ValueError):
            nw.load_edgelist(path)
