import math

import pytest

from percolab import extremal, generators
from percolab.errors import OracleLimitError, PercolabError, ProbabilityError
from percolab.extremal import Chernoff, Mult, TuranFamily

C3 = generators.cycle(3)
C4 = generators.cycle(4)
C5 = generators.cycle(5)
EMPTY = TuranFamily.empty()


def test_ex_bruteforce_examples():
    assert extremal.ex_bruteforce(5, TuranFamily.explicit([C3])) == 6
    assert extremal.ex_bruteforce(3, EMPTY) == 3
    assert extremal.ex_bruteforce(5, TuranFamily.explicit([C3, C4])) == 5


@pytest.mark.parametrize("n", range(1, 8))
def test_mantel(n):
    assert extremal.ex_bruteforce(n, TuranFamily.girth_greater(3)) == n * n // 4


def test_ex_bruteforce_c4_alone():
    # C4-free maxima for n = 4..7
    fam = TuranFamily.explicit([C4])
    assert [extremal.ex_bruteforce(n, fam) for n in range(4, 8)] == [4, 6, 7, 9]


def test_ex_bruteforce_is_capped():
    with pytest.raises(OracleLimitError):
        extremal.ex_bruteforce(9, EMPTY)


def test_cycles_normalize_to_girth_family():
    assert TuranFamily.explicit([C4, C3]) == TuranFamily.girth_greater(4)
    assert TuranFamily.explicit([C3, C5]).variant == extremal.EXPLICIT
    assert TuranFamily.explicit([]) == EMPTY


def test_explicit_family_rejects_acyclic_patterns():
    with pytest.raises(PercolabError):
        TuranFamily.explicit([generators.path(3)])


@pytest.mark.parametrize("family", [EMPTY, TuranFamily.girth_greater(5), TuranFamily.explicit([C3, C5])])
def test_family_json(family):
    assert TuranFamily.from_json(family.to_json()) == family


def test_ex_bracket_examples():
    assert extremal.ex_bracket(100, EMPTY).exact == 4950
    b = extremal.ex_bracket(7, TuranFamily.girth_greater(3))
    assert (b.lower, b.exact, b.upper) == (12, 12, 12)


@pytest.mark.parametrize("g", [4, 5, 6])
@pytest.mark.parametrize("n", range(1, 9))
def test_girth_bracket_sandwiches_oracle(n, g):
    b = extremal.ex_bracket(n, TuranFamily.girth_greater(g))
    exact = extremal.ex_bruteforce(n, TuranFamily.girth_greater(g))
    assert b.lower <= exact <= b.upper
    assert b.heuristic


def test_explicit_bracket_above_oracle_cap():
    b = extremal.ex_bracket(9, TuranFamily.explicit([C3, C5]))
    assert not b.available
    assert b.lower == 81 // 4
    assert b.upper == 36
    assert b.to_row() == (9, 20, "", 36)


def test_explicit_bracket_below_cap_is_exact():
    b = extremal.ex_bracket(6, TuranFamily.explicit([C4]))
    assert b.lower == b.exact == b.upper == 7


@pytest.mark.parametrize("k", [1, 2, 5, 17, 100])
def test_nh_empty_family(k):
    b = extremal.n_h_bracket(k, EMPTY)
    assert (b.n_lo, b.n_hi) == (k + 1, k + 1)
    assert b.exact


def test_nh_triangle_free():
    b = extremal.n_h_bracket(3, TuranFamily.explicit([C3]))
    assert (b.n_lo, b.n_hi) == (6, 6)


@pytest.mark.parametrize("k", [1, 3, 8, 20, 50])
def test_nh_non_bipartite_family_at_most_2k(k):
    assert extremal.n_h_bracket(k, TuranFamily.girth_greater(3)).n_hi <= 2 * k
    if k >= 8:
        assert extremal.n_h_bracket(k, TuranFamily.explicit([C3, C5])).n_hi <= 2 * k


def test_nh_monotone_in_k():
    fam = TuranFamily.girth_greater(5)
    brackets = [extremal.n_h_bracket(k, fam) for k in range(1, 30)]
    assert all(a.n_lo <= b.n_lo and a.n_hi <= b.n_hi for a, b in zip(brackets, brackets[1:]))
    assert all(b.n_lo <= b.n_hi for b in brackets)


def test_path_budget_scan():
    assert extremal.path_len_budget(3600, 1.0, EMPTY) == (100, 100)


@pytest.mark.parametrize("k", [500, 1000, 3600, 10000])
@pytest.mark.parametrize("eps", [0.5, 1.0])
def test_path_budget_closed_form(k, eps):
    ell_lo, _ = extremal.path_len_budget(k, eps, EMPTY)
    assert ell_lo >= math.floor(eps * eps * k / 36) - 1


def test_path_budget_rejects_bad_eps():
    with pytest.raises(PercolabError):
        extremal.path_len_budget(100, 0.0, EMPTY)


@pytest.mark.parametrize("k, c", [(100, 1.0), (40, 2.0), (250, 0.4)])
def test_cycle_budget_empty_family(k, c):
    ell_lo, ell_hi = extremal.cycle_len_budget(k, c, EMPTY)
    assert ell_lo == ell_hi == math.floor(c * k / 10) + 1


def test_cycle_budget_monotone_in_c():
    fam = TuranFamily.girth_greater(4)
    values = [extremal.cycle_len_budget(60, c, fam)[0] for c in (0.5, 1.0, 2.0, 4.0)]
    assert values == sorted(values)


@pytest.mark.parametrize("k", range(10, 41))
def test_cycle_budget_reaches_nh(k):
    fam = TuranFamily.explicit([C3])
    ell, _ = extremal.cycle_len_budget(k, 1.0, fam)
    assert ell + 1 >= extremal.n_h_bracket(k / 10, fam).n_hi


@pytest.mark.parametrize("family", [
    TuranFamily.explicit([C3]),
    TuranFamily.explicit([C4]),
    TuranFamily.explicit([C3, C4]),
])
def test_turan_growth_and_average_bounds(family):
    top = 6
    ex = {n: extremal.ex_bruteforce(n, family) for n in range(2, top + 1)}
    for m in range(2, top + 1):
        for n in range(m, top + 1):
            assert ex[n] <= extremal.turan_growth_bound(n, m, ex[m]) + 1e-9
            assert ex[m] / m <= extremal.turan_average_bound(n, ex[n]) + 1e-9


def test_binom_tail_bound_values():
    assert extremal.binom_tail_bound(100, 0.5, Chernoff(10)) == pytest.approx(2 * math.exp(-0.5))
    assert extremal.binom_tail_bound(100, 0.5, Chernoff(10)) == pytest.approx(1.2131, abs=1e-4)
    assert extremal.binom_tail_bound(100, 0.1, Mult(3)) == pytest.approx(math.exp(30 * (1 - math.log(3))))


@pytest.mark.parametrize("mode", [Chernoff(0), Chernoff(26), Mult(0), Mult(-1)])
def test_binom_tail_bound_preconditions(mode):
    with pytest.raises(ProbabilityError):
        extremal.binom_tail_bound(100, 0.5, mode)


@pytest.mark.parametrize("n", [10, 100, 1000])
@pytest.mark.parametrize("p", [0.01, 0.1, 0.5])
def test_exact_tails_below_bounds(n, p):
    mu = n * p
    for i in range(1, 11):
        for mode in (Chernoff(mu / 2 * i / 10), Mult(0.5 * i + 0.3 * i)):
            assert extremal.binom_tail_exact(n, p, mode) <= extremal.binom_tail_bound(n, p, mode) * (1 + 1e-12)


def test_solve_c0():
    c0 = extremal.solve_c0()
    assert 1.59 < c0 < 1.60
    assert c0 == pytest.approx(1.593624, abs=1e-5)
    assert abs(c0 / 2 - 1 + math.exp(-c0)) <= 1e-9


def test_theorem_quantities():
    assert extremal.path_prob_lower_bound(1000, 0.5) == pytest.approx(1 - 3 * math.exp(-0.125 * 1000 / 300))
    assert extremal.girth_cycle_target(14, 5, 0.1) == pytest.approx(0.1 * 14 ** 2)
    assert extremal.avg_degree_threshold(10, 0.1) == pytest.approx((extremal.solve_c0() + 0.1) / 10)
    assert extremal.explored_size(100, 1.0) == 600
    assert extremal.explored_size(6, 0.5) == 72
