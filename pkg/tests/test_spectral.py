import random

import pytest

from bigraded.rings import ZZ, QQ, GF, UnsupportedRing
from bigraded.matrices import ExactMatrix
from bigraded.chain import homology
from bigraded.bicomplex import (
    bic_disc,
    bic_sphere,
    directional_subquotient,
    e2,
    h_boundary,
    v_boundary,
)
from bigraded.twisted import (
    TwistedComplex,
    tot_twisted,
    twisted_boundary,
    twisted_disc,
    vertical_homology_twisted,
)
from bigraded.spectral import convergence_check, pages
from bigraded.randgen import random_bicomplex, random_twisted


def d2_example():
    """One generator at (2, 0) hitting one at (0, 1) through the second
    structure map: pages one and two are nonzero, page three is empty."""
    return TwistedComplex(QQ, {(2, 0): 1, (0, 1): 1},
                          {2: {(2, 0): ExactMatrix.identity(QQ, 1)}})


def test_sphere_pages_constant():
    s = bic_sphere(2, 1, 1, QQ)
    data = pages(s)
    for r in range(1, data.stable_page + 1):
        assert data.page(r) == {(2, 1): 1}
    assert data.einf == {(2, 1): 1}


def test_disc_collapses_immediately():
    data = pages(bic_disc(2, 0, 1, QQ))
    assert all(not data.page(r) for r in range(1, data.stable_page + 1))
    assert convergence_check(bic_disc(2, 0, 1, QQ))["ok"]


def test_page_one_is_vertical_homology():
    for x in (h_boundary(2, 0, 1, QQ), v_boundary(2, 0, 1, QQ),
              bic_disc(3, 1, 1, QQ)):
        data = pages(x)
        hv = directional_subquotient(x, "v", "H")
        assert data.page(1) == {pq: r for pq, r in hv.ranks.items()}
    d = twisted_disc(3, 0, QQ)
    assert pages(d).page(1) == dict(vertical_homology_twisted(d).ranks)


def test_page_two_is_e2():
    for x in (h_boundary(2, 0, 1, QQ), v_boundary(2, 0, 1, QQ),
              bic_sphere(1, 1, 1, QQ)):
        assert pages(x).page(2) == {pq: d for pq, d in e2(x).items() if d}


def test_d2_example_runs_to_empty():
    x = d2_example()
    data = pages(x)
    assert data.page(1) == {(2, 0): 1, (0, 1): 1}
    assert data.page(2) == {(2, 0): 1, (0, 1): 1}
    assert data.differentials[2]  # the connecting map is nonzero
    assert data.page(3) == {}
    assert data.einf == {}
    assert homology(tot_twisted(x)) == {}
    assert convergence_check(x)["ok"]


def test_pages_monotone_and_d_squared_zero():
    rng = random.Random(4)
    for _ in range(6):
        x = random_twisted(rng, QQ, p_range=(0, 3), q_range=(-1, 1))
        data = pages(x)
        for r in range(1, data.stable_page):
            for pq, d in data.page(r + 1).items():
                assert d <= data.page(r).get(pq, 0)
            for (p, q), m in data.differentials.get(r, {}).items():
                nxt = data.differentials[r].get((p - r, q + r - 1))
                if nxt is not None:
                    assert (nxt @ m).is_zero


def test_convergence_on_random_objects():
    rng = random.Random(9)
    for _ in range(8):
        assert convergence_check(random_bicomplex(rng, QQ))["ok"]
        assert convergence_check(random_twisted(rng, QQ))["ok"]


def test_cells_converge():
    for p in range(4):
        assert convergence_check(twisted_disc(p, 0, QQ))["ok"]
        assert convergence_check(twisted_boundary(p, 0, QQ))["ok"]


def test_field_only():
    with pytest.raises(UnsupportedRing):
        pages(bic_disc(1, 0, 1, ZZ))
    with pytest.raises(UnsupportedRing):
        convergence_check(twisted_disc(1, 0, ZZ))


def test_stable_page_clamping():
    s = bic_sphere(0, 0, 1, GF(2))
    data = pages(s)
    assert data.page(50) == data.page(data.stable_page)
