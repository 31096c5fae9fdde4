import random

import pytest

from bigraded.rings import ZZ, QQ, GF, BadParameter
from bigraded.matrices import ExactMatrix
from bigraded.chain import ChainComplex, homology, is_acyclic, is_quasi_iso
from bigraded.bicomplex import (
    Bicomplex,
    BicomplexMap,
    bic_disc,
    bic_sphere,
    include_chain,
    tot,
    tot_map,
    v_boundary,
)
from bigraded.twisted import TwistedMap, tot_twisted, twisted_disc
from bigraded.model import (
    GENERATING_FAMILIES,
    BadSquare,
    GeneratorRef,
    LiftingProblem,
    NoLift,
    ce_resolution,
    classify_map,
    cofibrancy_report,
    generator_map,
    has_rlp,
    pushout,
    relevant_generators,
    rlp_report,
    solve_lift,
    verify_generator_identities,
)


def I(ring=ZZ, n=1):
    return ExactMatrix.identity(ring, n)


def proj_disc_to_vboundary(p, q, ring=ZZ):
    """The quotient of the (p, q) cell by its own vertical boundary,
    landing on the vertical boundary one row up."""
    d = bic_disc(p, q, 1, ring)
    b = v_boundary(p, q + 1, 1, ring)
    return BicomplexMap(d, b, {pq: I(ring) for pq in b.ranks})


# --- generating sets -------------------------------------------------------

def test_all_generator_families_build():
    for (structure, which), fams in GENERATING_FAMILIES.items():
        for fam in fams:
            ref = GeneratorRef(fam, 2, 0)
            try:
                g = generator_map(ref, ZZ)
            except BadParameter:
                g = generator_map(GeneratorRef(fam, 1, 0), ZZ)
            assert g.source is not None and g.target is not None


def test_j_generators_are_weak_equivalences():
    # every trivial-cofibration generator has acyclic cofiber content:
    # source and target have the same total homology
    for fam_ref in [GeneratorRef("TotJ_ZeroToHBoundary", 0, 1),
                    GeneratorRef("TotI_VBoundaryToDisc", 2, 0),
                    GeneratorRef("TwJ_ZeroToDisc0", 0, 0),
                    GeneratorRef("TwI_BoundaryToDisc", 2, 0)]:
        g = generator_map(fam_ref, QQ)
        if isinstance(g, BicomplexMap):
            assert is_quasi_iso(tot_map(g))
        else:
            src = tot_twisted(g.source)
            tgt = tot_twisted(g.target)
            assert homology(src) == homology(tgt)


def test_relevant_generators_track_support():
    f = BicomplexMap.identity(bic_sphere(1, 1, 1))
    refs = relevant_generators(f, "tot", "I")
    assert refs
    assert all(0 <= r.p <= 2 for r in refs)
    zero = BicomplexMap.identity(Bicomplex(ZZ, {}, {}, {}))
    assert relevant_generators(zero, "ce", "J") == []


# --- lifting ----------------------------------------------------------------

def test_solve_lift_identity_square():
    i = generator_map(GeneratorRef("TotI_VBoundaryToDisc", 2, 0), ZZ)
    zero = Bicomplex(ZZ, {}, {}, {})
    g = BicomplexMap(i.target, zero, {})
    f = BicomplexMap(i.target, zero, {})
    h = solve_lift(LiftingProblem(i, g, i, f))
    assert h.source == i.target
    # h restricted along i is i itself
    for pq in i.source.ranks:
        assert h.component(*pq) @ i.component(*pq) == i.component(*pq)


def test_solve_lift_rejects_bad_square():
    i = generator_map(GeneratorRef("TotI_VBoundaryToDisc", 2, 0), ZZ)
    g = BicomplexMap.identity(i.target)
    u = BicomplexMap(i.source, i.target, {})  # zero top map
    with pytest.raises(BadSquare):
        # g*u = 0 but f*i = i != 0
        solve_lift(LiftingProblem(i, g, u, BicomplexMap.identity(i.target)))


def test_solve_lift_no_lift():
    # retract of the vertical boundary off its cell does not exist
    i = generator_map(GeneratorRef("TotI_VBoundaryToDisc", 2, 0), ZZ)
    u = BicomplexMap.identity(i.source)
    with pytest.raises(NoLift):
        solve_lift(LiftingProblem(i, i, u, BicomplexMap.identity(i.target)))


def test_has_rlp_hand_verified_negative():
    # the quotient cell -> vertical boundary does not lift against the
    # boundary inclusion in the same bidegree: the candidate diagonal is
    # a scalar forced two different ways
    g = proj_disc_to_vboundary(2, 0, QQ)
    gen = generator_map(GeneratorRef("TotI_VBoundaryToDisc", 2, 0), QQ)
    assert not has_rlp(g, gen)


def test_identity_has_rlp_against_everything():
    for ring in (ZZ, GF(2)):
        d = bic_disc(2, 0, 1, ring)
        idm = BicomplexMap.identity(d)
        for structure in ("tot", "ce"):
            rep = rlp_report(idm, structure)
            assert rep.has_rlp_I and rep.has_rlp_J
            assert all(rep.per_generator.values())
        t = TwistedMap.identity(twisted_disc(2, 0, ring))
        rep = rlp_report(t, "twisted-tot")
        assert rep.has_rlp_I and rep.has_rlp_J


# --- classification ----------------------------------------------------------

def test_classify_quotient_map():
    # weak equivalence for the total structure, but not a fibration:
    # vertical homology of the target is not hit
    g = proj_disc_to_vboundary(2, 0, QQ)
    rep = classify_map(g, "tot")
    assert rep.is_weq
    assert not rep.is_fibration
    assert not rep.is_trivial_fibration
    rep_ce = classify_map(g, "ce")
    assert not rep_ce.is_fibration
    assert (2, 0) in rep_ce.evidence["vertical_cycles_failures"]


def test_classify_agrees_with_rlp_on_quotient():
    g = proj_disc_to_vboundary(2, 0, GF(2))
    for structure in ("tot", "ce"):
        rep = rlp_report(g, structure)
        cls = classify_map(g, structure)
        assert rep.has_rlp_J == cls.is_fibration
        assert rep.has_rlp_I == cls.is_trivial_fibration


def test_classify_trivial_fibration_asserts_consistency():
    d = bic_disc(1, 0, 1, QQ)
    rep = classify_map(BicomplexMap.identity(d), "tot")
    assert rep.is_weq and rep.is_fibration and rep.is_trivial_fibration


def test_classify_ce_weq_unavailable_over_z():
    c = ChainComplex(ZZ, {0: 1, 1: 1}, {1: ExactMatrix.from_rows(ZZ, [[2]])})
    x = include_chain(c)
    rep = classify_map(BicomplexMap.identity(x), "ce")
    assert rep.is_weq is None
    assert "weq_unavailable" in rep.evidence


# --- cofibrancy ---------------------------------------------------------------

def test_cofibrancy_sphere_cases():
    ok = cofibrancy_report(bic_sphere(0, 3, 1, QQ), "tot")
    assert ok.passes
    bad = cofibrancy_report(bic_sphere(2, 0, 1, QQ), "tot")
    assert not bad.passes
    assert cofibrancy_report(twisted_disc(2, 0, QQ), "twisted-tot").passes


# --- pushouts ------------------------------------------------------------------

def test_pushout_attaches_cell():
    gen = generator_map(GeneratorRef("TwJ_ZeroToDisc0", 0, 5), ZZ)
    a = TwistedMap.zero(gen.source, twisted_disc(1, 0, ZZ))
    x2, incl = pushout(gen, a)
    d = twisted_disc(1, 0, ZZ)
    for (p, q), r in twisted_disc(0, 5).ranks.items():
        assert x2.rank(p, q) == d.rank(p, q) + r


def test_pushout_of_vboundary_inclusion():
    gen = generator_map(GeneratorRef("TotI_VBoundaryToDisc", 2, 0), ZZ)
    a = BicomplexMap.identity(gen.source)
    x2, incl = pushout(gen, a)
    assert dict(x2.ranks) == dict(gen.target.ranks)
    assert is_acyclic(tot(x2))


# --- resolutions ---------------------------------------------------------------

def test_ce_resolution_times_two():
    c = ChainComplex(ZZ, {0: 1, 1: 1}, {1: ExactMatrix.from_rows(ZZ, [[2]])})
    p, eps = ce_resolution(c)
    assert dict(p.ranks) == {(0, 0): 2, (0, 1): 1, (1, 0): 1}
    rep = classify_map(eps, "ce")
    assert rep.is_fibration and rep.is_trivial_fibration
    assert cofibrancy_report(p, "ce").passes


def test_ce_resolution_zero_and_field():
    z = ChainComplex(ZZ, {}, {})
    p, _ = ce_resolution(z)
    assert not p.ranks
    cq = ChainComplex(QQ, {0: 2, 1: 1},
                      {1: ExactMatrix.from_rows(QQ, [[1], [0]])})
    p, eps = ce_resolution(cq)
    assert classify_map(eps, "ce").is_trivial_fibration


def test_ce_resolution_random_contract():
    from bigraded.randgen import random_chain_complex

    rng = random.Random(11)
    for _ in range(10):
        y = random_chain_complex(rng, ZZ, degrees=(0, 3), max_rank=3)
        p, eps = ce_resolution(y)
        assert all(pp <= 1 for pp, _ in p.ranks)  # width at most two
        assert classify_map(eps, "ce").is_trivial_fibration
        assert cofibrancy_report(p, "ce").passes


# --- tensor identities -----------------------------------------------------------

def test_generator_identities_small():
    results = verify_generator_identities(pmax=2, qs=(0, 2), seed=0)
    assert results
    assert all(r["ok"] for r in results)
