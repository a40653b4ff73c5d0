import pytest

from rrseries.errors import BadParameter, UnboundedSum
from rrseries.identities import finite_poly_F, rr_sum_side
from rrseries.multipart import (
    FermionicData,
    MomentumWindow,
    VecPartEnv,
    _multi_indices,
    drop_last_q,
    fermionic_sum,
    functional_sides,
    momentum_formula,
    momentum_generating_function,
    momentum_window,
    rr_fermionic_data,
    vecpart_coefficients,
    vecpart_F,
    vecpart_functional_check,
)
from rrseries.multiseries import MultiSeries
from rrseries.qfunctions import INFINITY
from rrseries.series import Series


def test_n0_is_base_case():
    env = VecPartEnv(0, 6)
    F = vecpart_F(env)
    rhs = MultiSeries.from_constant(1, 2, 6).mul_factor((1, 1), 1, 1).mul_factor((0, 1), 1, -1)
    assert F == rhs


def test_a_equal_one_gives_one():
    env = VecPartEnv(2, 6)
    collapsed = {}
    for e, c in vecpart_F(env).terms.items():
        key = e[: env.a] + e[env.a + 1 :]
        collapsed[key] = collapsed.get(key, 0) + c
    # the power of a never exceeds that of t, so these terms are complete
    complete = {k: v for k, v in collapsed.items() if v and sum(k) + k[-1] <= env.degree_cap}
    assert complete == {(0, 0, 0): 1}


def test_first_t_coefficient():
    # [t^1] F_n = (1 - a) sum_alpha q^alpha
    env = VecPartEnv(2, 6)
    got = vecpart_coefficients(env, 1)
    want = {}
    for alpha in _multi_indices(2, 5):
        want[alpha + (0,)] = 1
        want[alpha + (1,)] = -1
    assert got.terms == {e: c for e, c in want.items() if sum(e) <= 5}


def test_slice_bounds():
    with pytest.raises(BadParameter):
        vecpart_coefficients(VecPartEnv(1, 4), 5)


@pytest.mark.parametrize("n,cap", [(1, 8), (2, 7), (3, 6), (4, 5)])
def test_functional_equation(n, cap):
    assert vecpart_functional_check(n, cap).passed


def test_functional_equation_mutation():
    lhs, rhs = functional_sides(2, 5)
    assert lhs != rhs.mul_factor((1, 0, 0, 1), 1, 1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_drop_last_variable(n):
    env = VecPartEnv(n, 6)
    assert drop_last_q(vecpart_F(env), env) == vecpart_F(VecPartEnv(n - 1, 6))


# -- fermionic sums ---------------------------------------------------------


@pytest.mark.parametrize("a", [0, 1])
def test_fermionic_finite(a):
    for L in range(21):
        d = L * L + 2
        assert fermionic_sum(rr_fermionic_data(a, L), d) == Series(finite_poly_F(L, a).coeffs, d)


@pytest.mark.parametrize("a", [0, 1])
def test_fermionic_infinite(a):
    assert fermionic_sum(rr_fermionic_data(a), 40) == rr_sum_side(a, 40)


def test_empty_restriction():
    data = FermionicData(((2,),), (0,), (INFINITY,), restriction=lambda m: False)
    assert fermionic_sum(data, 10).is_zero()


def test_parity_restriction():
    even = FermionicData(((2,),), (0,), (INFINITY,), restriction=lambda m: m[0] % 2 == 0)
    odd = FermionicData(((2,),), (0,), (INFINITY,), restriction=lambda m: m[0] % 2 == 1)
    assert fermionic_sum(even, 30) + fermionic_sum(odd, 30) == rr_sum_side(0, 30)


def test_non_integral_exponent_rejected():
    with pytest.raises(BadParameter):
        fermionic_sum(FermionicData(((1,),), (0,), (INFINITY,)), 5)


def test_non_integral_top_rejected():
    with pytest.raises(BadParameter):
        fermionic_sum(FermionicData(((2,),), (0,), (3,)), 5)


def test_unbounded_sum():
    data = FermionicData(((1, 1), (1, 1)), (0, 0), (INFINITY, INFINITY))
    with pytest.raises(UnboundedSum):
        fermionic_sum(data, 5)


def test_shape_checks():
    with pytest.raises(BadParameter):
        FermionicData(((2, 1),), (0,), (0,))


def test_two_species_matches_explicit_bound():
    B = ((2, 1), (1, 2))
    data = FermionicData(B, (0, 0), (INFINITY, INFINITY))
    assert fermionic_sum(data, 20) == fermionic_sum(data, 20, m_bound=20)


def test_extended_binomial_differs():
    # a negative top entry contributes under the extended convention
    std = fermionic_sum(rr_fermionic_data(0, 3), 12)
    ext = fermionic_sum(rr_fermionic_data(0, 3), 12, m_bound=4, extended=True)
    assert std == Series(finite_poly_F(3, 0).coeffs, 12)
    assert ext != std
    with pytest.raises(UnboundedSum):
        fermionic_sum(rr_fermionic_data(0, 3), 12, extended=True)


# -- momentum windows -------------------------------------------------------


def test_window_basic():
    data = FermionicData(((2,),), (0,), (4,))
    win = momentum_window(data, (0,))
    assert win.p_min == (1,)
    single = MomentumWindow(1, (3,), (3,))
    assert single.slots(0) == 1 and single.momenta(0) == [3]
    with pytest.raises(BadParameter):
        momentum_window(rr_fermionic_data(0), (1,))


@pytest.mark.parametrize("L", range(0, 8))
@pytest.mark.parametrize("j", range(0, 4))
def test_momentum_brute_force(L, j):
    data = FermionicData(((2,),), (0,), (2 * L,))
    win = momentum_window(data, (j,))
    if win.slots(0) > 8:
        pytest.skip("window larger than the brute-force range")
    assert win.slots(0) == max(L - j, 0)
    assert momentum_generating_function(data, (j,)) == momentum_formula(data, (j,))


def test_momentum_two_species():
    data = FermionicData(((2, 1), (1, 2)), (0, 0), (6, 6))
    for m in [(0, 0), (1, 0), (1, 1), (2, 1)]:
        assert momentum_generating_function(data, m) == momentum_formula(data, m)
