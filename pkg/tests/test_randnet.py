import numpy as np
import pytest

from econnet import randnet as rn
from econnet.errors import InsufficientData, InvalidArgument
from econnet.graphcore import WeightedDigraph, from_adjacency

from _data import ring

CHI2_9DF_999 = 27.877


def adj_degrees(g):
    return np.array([len(g.successors(v)) for v in range(g.n)])


class TestInverseTransform:
    def test_cumulative_oracle(self):
        phi = [0.2, 0.1, 0.7]
        assert rn.inverse_transform_sample(phi, 0.2) == 0
        assert rn.inverse_transform_sample(phi, 0.25) == 1
        assert rn.inverse_transform_sample(phi, 0.5) == 2
        assert rn.inverse_transform_sample(phi, 1.0) == 2

    def test_point_mass(self):
        u = np.linspace(1e-9, 1, 1001)
        np.testing.assert_array_equal(rn.inverse_transform_sample([0, 0, 1, 0], u), 2)

    def test_bad_u(self):
        for u in (0.0, 1.5, -0.1):
            with pytest.raises(InvalidArgument):
                rn.inverse_transform_sample([0.5, 0.5], u)

    def test_bad_distribution(self):
        with pytest.raises(InvalidArgument):
            rn.inverse_transform_sample([0.5, 0.6], 0.5)

    def test_lln(self):
        phi = np.array([0.2, 0.1, 0.7])
        x = rn.sample_distribution(phi, 1_000_000, 3)
        assert np.max(np.abs(np.bincount(x, minlength=3) / x.size - phi)) < 0.005

    def test_zero_mass_never_drawn(self):
        phi = np.array([0.3, 0.0, 0.0, 0.7, 0.0])
        x = rn.sample_distribution(phi, 100_000, 4)
        assert set(np.unique(x)) == {0, 3}


class TestErdosRenyi:
    def test_validation(self):
        for p in (0.0, 1.0, 1.2):
            with pytest.raises(InvalidArgument):
                rn.erdos_renyi(5, p, 0)
        with pytest.raises(InvalidArgument):
            rn.erdos_renyi(0, 0.5, 0)

    def test_single_vertex(self):
        assert rn.erdos_renyi(1, 0.5, 0).edges == ()

    def test_pair_frequency(self):
        hits = sum(len(rn.erdos_renyi(2, 0.3, s).edges) > 0 for s in range(10_000))
        assert abs(hits / 10_000 - 0.3) < 0.015

    def test_symmetric_and_reproducible(self):
        g = rn.erdos_renyi(30, 0.2, 9)
        A = np.zeros((30, 30))
        for i, j, _ in g.edges:
            A[i, j] = 1
        np.testing.assert_array_equal(A, A.T)
        assert g.edges == rn.erdos_renyi(30, 0.2, 9).edges
        assert g.edges != rn.erdos_renyi(30, 0.2, 10).edges

    def test_binomial_degrees(self):
        n, p = 100, 0.05
        deg = np.concatenate([adj_degrees(rn.erdos_renyi(n, p, s)) for s in range(50)])
        obs = np.bincount(np.minimum(deg, 9), minlength=10).astype(float)
        pmf = rn.binomial_pmf(n - 1, p)
        exp = np.append(pmf[:9], pmf[9:].sum()) * deg.size
        chi2 = ((obs - exp) ** 2 / exp).sum()
        assert chi2 < CHI2_9DF_999


class TestBarabasiAlbert:
    def test_validation(self):
        with pytest.raises(InvalidArgument):
            rn.barabasi_albert(3, 3, 0)
        with pytest.raises(InvalidArgument):
            rn.barabasi_albert(3, 0, 0)

    def test_smallest(self):
        for m in (1, 2, 4):
            g = rn.barabasi_albert(m + 1, m, 0)
            assert sorted(g.successors(m)) == list(range(m))

    def test_min_degree(self):
        for s in range(100):
            g = rn.barabasi_albert(60, 3, s)
            assert adj_degrees(g)[3:].min() >= 3
            assert len(g.edges) == 2 * (3 + 3 * 57)

    def test_reproducible(self):
        assert rn.barabasi_albert(200, 2, 5).edges == rn.barabasi_albert(200, 2, 5).edges

    def test_heavier_tail_than_er(self):
        n, m = 5000, 5
        ba = adj_degrees(rn.barabasi_albert(n, m, 1))
        er = adj_degrees(rn.erdos_renyi(n, ba.mean() / (n - 1), 1))
        s_ba = rn.empirical_ccdf_loglog(ba, 0.1).slope
        s_er = rn.empirical_ccdf_loglog(er, 0.1).slope
        assert abs(s_ba) < abs(s_er)


class TestDegreeDistribution:
    def test_ring(self):
        g = WeightedDigraph(6, [(i, (i + 1) % 6, 1.0) for i in range(6)] +
                            [((i + 1) % 6, i, 1.0) for i in range(6)])
        d = rn.degree_distribution(g)
        assert d[2] == 1.0 and d.sum() == 1.0

    def test_directions(self):
        g = from_adjacency(ring())
        np.testing.assert_array_equal(rn.degree_distribution(g, "in"),
                                      rn.degree_distribution(g, "out"))
        with pytest.raises(InvalidArgument):
            rn.degree_distribution(g, "sideways")

    def test_histogram_oracle(self):
        for s in range(200):
            g = rn.erdos_renyi(25, 0.15, s) if s % 2 else rn.barabasi_albert(25, 2, s)
            d = rn.degree_distribution(g)
            counts = {}
            for v in range(g.n):
                k = sum(1 for i, _, _ in g.edges if i == v)
                counts[k] = counts.get(k, 0) + 1
            for k in range(g.n + 1):
                assert d[k] == counts.get(k, 0) / g.n
            assert d.sum() == pytest.approx(1.0)


class TestTailFit:
    def test_exact_pareto(self):
        # samples placed at the quantiles of the CCDF t^(-2)
        N = 1000
        G = (N - np.arange(N)) / N
        x = G ** (-1 / 2)
        fit = rn.empirical_ccdf_loglog(x, 1.0)
        assert fit.slope == pytest.approx(-2.0, abs=1e-9)
        assert fit.r_squared == pytest.approx(1.0)

    def test_pareto_samples(self):
        fit = rn.empirical_ccdf_loglog(rn.pareto_sample(1.0, 1.05, 1, 100_000), 0.1)
        assert -1.35 <= fit.slope <= -0.8

    def test_exponential_fits_worse(self):
        g = rn.rng_for(2)
        exp_fit = rn.empirical_ccdf_loglog(g.exponential(size=100_000), 0.1)
        par_fit = rn.empirical_ccdf_loglog(rn.pareto_sample(1.0, 1.5, 2, 100_000), 0.1)
        assert exp_fit.r_squared < par_fit.r_squared - 0.02

    def test_insufficient(self):
        with pytest.raises(InsufficientData):
            rn.empirical_ccdf_loglog(np.arange(1, 100.0), 0.1)
        with pytest.raises(InvalidArgument):
            rn.empirical_ccdf_loglog([1.0, 0.0], 1.0)


class TestSamplers:
    def test_pareto_median(self):
        for alpha in (1.059, 1.32, 2.0):
            x = rn.pareto_sample(2.0, alpha, 5, 1_000_000)
            assert np.median(x) == pytest.approx(2.0 * 2 ** (1 / alpha), rel=0.02)
            assert x.min() >= 2.0

    def test_lognormal_mean(self):
        x = rn.lognormal_sample(0.0, 0.5, 6, 1_000_000)
        assert x.mean() == pytest.approx(np.exp(0.125), rel=0.02)

    def test_matching(self):
        alpha = 1.32
        mu, sigma = rn.lognormal_matching_pareto(alpha)
        assert np.exp(mu) == pytest.approx(2 ** (1 / alpha))
        assert np.exp(mu + sigma ** 2 / 2) == pytest.approx(alpha / (alpha - 1))
        with pytest.raises(InvalidArgument):
            rn.lognormal_matching_pareto(0.9)

    def test_zeta(self):
        p = rn.zeta_pmf(2.5, 1000)
        assert p.sum() == pytest.approx(1.0)
        assert p[0] / p[1] == pytest.approx(2 ** 2.5)
        with pytest.raises(InvalidArgument):
            rn.zeta_pmf(1.0, 10)

    def test_invalid(self):
        with pytest.raises(InvalidArgument):
            rn.pareto_sample(1.0, -1.0, 0, 10)
        with pytest.raises(InvalidArgument):
            rn.lognormal_sample(0.0, 0.0, 0, 10)
        with pytest.raises(InvalidArgument):
            rn.rng_for(None)

    def test_divergent_moment(self):
        alpha, r = 1.5, 2.0
        med = [np.median([np.mean(rn.pareto_sample(1.0, alpha, s, n) ** r) for s in range(21)])
               for n in (10**3, 10**4, 10**5)]
        assert med[0] < med[1] < med[2]

    def test_streams_independent(self):
        a = rn.rng_for(1, 0).random(5)
        b = rn.rng_for(1, 1).random(5)
        assert not np.array_equal(a, b)
        np.testing.assert_array_equal(a, rn.rng_for(1, 0).random(5))


class TestHerfindahl:
    def test_equal_firms(self):
        assert rn.herfindahl(np.ones(10**6)) == pytest.approx(1e-3, abs=1e-15)
        assert rn.herfindahl([4.0]) == 1.0

    def test_direct_formula(self):
        g = rn.rng_for(7)
        for _ in range(200):
            S = g.random(int(g.integers(1, 50)))
            H = rn.herfindahl(S)
            assert H == pytest.approx(np.sqrt(sum((s / S.sum()) ** 2 for s in S)), rel=1e-12)
            assert 1 / np.sqrt(S.size) - 1e-12 <= H <= 1 + 1e-12

    def test_zero(self):
        with pytest.raises(InvalidArgument):
            rn.herfindahl(np.zeros(3))

    def test_constant_sampler(self):
        h = rn.herfindahl_median_mc(lambda rng, n: np.full(n, 3.0), 400, 5, 0)
        assert h == pytest.approx(0.05, abs=1e-15)

    def test_mc_reproducible(self):
        a = rn.herfindahl_median_mc("pareto", 1000, 7, 11, alpha=1.32)
        assert a == rn.herfindahl_median_mc("pareto", 1000, 7, 11, alpha=1.32)
        mu, sigma = rn.lognormal_matching_pareto(1.32)
        assert rn.herfindahl_median_mc("lognormal", 1000, 7, 11, mu=mu, sigma=sigma) < a
        with pytest.raises(InvalidArgument):
            rn.herfindahl_median_mc("cauchy", 10, 1, 0)
