import json

import numpy as np
import pytest

import kreinrel as kr
from kreinrel import boundary as bnd, extensions as ext, generators as gen, \
    relations as rel, subspaces as sub, suites as st


def test_instance_spec_validation():
    with pytest.raises(ValueError):
        gen.InstanceSpec(0, 4, (3, 2), 1)
    with pytest.raises(ValueError):
        gen.InstanceSpec(0, 4, (2, 2), 5)


def test_gen_symmetric_defect_zero_selfadjoint():
    t = gen.gen_symmetric(gen.InstanceSpec(5, 3, (2, 1), 0))
    assert rel.is_selfadjoint(t)


def test_gen_symmetric_c4_parameters():
    # the worked example's parameters: dim 4, signature (2,2), defect 3
    t = gen.gen_symmetric(gen.InstanceSpec(6, 4, (2, 2), 3))
    assert t.dim == 1
    assert ext.defect_numbers(t) == (3, 3)
    w = gen.sample_witness(t, 7)
    assert ext.prop_n_audit(t, w.N)["ok"]


def test_gen_symmetric_determinism():
    spec = gen.InstanceSpec(123, 5, (3, 2), 2)
    a = gen.gen_symmetric(spec)
    b = gen.gen_symmetric(spec)
    assert np.array_equal(a.graph.frame, b.graph.frame)


def test_gen_symmetric_flags():
    spec = gen.InstanceSpec(9, 4, (2, 2), 2, require_simple=True,
                            require_property_p=True)
    t = gen.gen_symmetric(spec)
    assert ext.simple_check(t, bnd.DEFAULT_GRID)
    assert ext.has_property_p(t)


def test_gen_triple_seed_changes_map():
    t = gen.gen_symmetric(gen.InstanceSpec(3, 4, (2, 2), 2))
    tri_a = gen.gen_triple(t, 1)
    tri_b = gen.gen_triple(t, 2)
    assert not np.allclose(tri_a.gamma, tri_b.gamma)


def test_gen_standard_unitary_gram():
    for seed in range(5):
        rng = gen.rng_for(seed, 0)
        space = gen.random_space(seed, 2, 2)
        other = gen.random_space(seed + 100, 2, 2)
        u = gen.gen_standard_unitary(seed, space, other)
        assert np.abs(u.conj().T @ other.J @ u - space.J).max() < 1e-10


def test_gen_standard_unitary_hilbert_case():
    space = kr.hilbert_space(4)
    u = gen.gen_standard_unitary(8, space, space)
    assert np.abs(u.conj().T @ u - np.eye(4)).max() < 1e-10


def test_gen_standard_unitary_signature_mismatch():
    a = gen.random_space(1, 3, 1)
    b = gen.random_space(2, 2, 2)
    with pytest.raises(ValueError):
        gen.gen_standard_unitary(0, a, b)


def test_lemma_o_trivial_second_summand():
    # the eigenspace formula with H = {0}x{0} degenerates to the plain one
    space = gen.random_space(1, 2, 2)
    rng = gen.rng_for(2, 0)
    g = kr.relation(space, space, sub.span(gen.random_complex(rng, 8, 3)))
    h = rel.zero_relation(space, space)
    gh, _ = rel.cw_sum(g, h)
    for z in (1j, 0.5, 1 - 2j):
        assert sub.equal(rel.eigenspace(gh, z), rel.eigenspace(g, z))
        assert ext.O_membership(g, h, z)


def test_suites_deterministic():
    r1 = st.suite_extensions(5, 99)
    r2 = st.suite_extensions(5, 99)
    d1, d2 = r1.to_dict(), r2.to_dict()
    d1.pop("elapsed"), d2.pop("elapsed")
    assert json.dumps(d1, sort_keys=True) == json.dumps(d2, sort_keys=True)


@pytest.mark.parametrize("name", ["appendix", "extensions", "boundary", "similarity"])
def test_suites_clean_on_small_runs(name):
    for report in st.run_suites(name, 6, 2024):
        assert report.ok, report.to_dict()
