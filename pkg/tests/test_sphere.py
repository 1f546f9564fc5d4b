import math

import pytest

from chebhalley.sphere import (
    HALF_PLANE_SWAP,
    INFINITY,
    SHIFT_TO_ZERO,
    ExtendedComplex,
    MobiusMap,
    mobius_apply,
    rotation_map,
)


def test_finite_rejects_nan():
    with pytest.raises(ValueError):
        ExtendedComplex.finite(complex(math.nan, 0))
    with pytest.raises(ValueError):
        ExtendedComplex.finite(complex(0, math.inf))


def test_infinity_equals_only_itself():
    assert INFINITY == ExtendedComplex.infinity()
    assert INFINITY != ExtendedComplex.finite(0)
    assert ExtendedComplex.finite(2) == 2 + 0j
    assert INFINITY != 1e300


def test_infinity_has_no_value():
    with pytest.raises(ValueError):
        _ = INFINITY.z


def test_singular_mobius_rejected():
    with pytest.raises(ValueError):
        MobiusMap(1, 2, 2, 4)


def test_pole_and_infinity_handling():
    m = SHIFT_TO_ZERO  # 1/(z-1)
    assert mobius_apply(m, 1.0) == INFINITY
    assert mobius_apply(m, INFINITY) == ExtendedComplex.finite(0j)
    assert mobius_apply(m, 2.0).z == 1.0


def test_half_plane_swap_examples():
    # (z+1)/(z-1) sends -1 to 0 and 1 to infinity
    assert HALF_PLANE_SWAP(-1.0).z == 0
    assert HALF_PLANE_SWAP(1.0) == INFINITY
    assert HALF_PLANE_SWAP(INFINITY).z == 1.0
    # involution
    z = 0.3 + 2.2j
    assert abs(HALF_PLANE_SWAP(HALF_PLANE_SWAP(z).z).z - z) < 1e-14


def test_rotation():
    xi = complex(math.cos(2 * math.pi / 3), math.sin(2 * math.pi / 3))
    assert abs(rotation_map(xi)(1.0).z - xi) == 0


def test_inverse_roundtrip():
    m = MobiusMap(2, 1j, -1, 3)
    z = -0.7 + 0.4j
    back = m.inverse()(m(z).z).z
    assert abs(back - z) < 1e-12
