from fractions import Fraction

import pytest

from sgtc.clifford import (
    CliffordData,
    UnsupportedSignatureError,
    build_clifford,
    check_spin_pair,
    chiral_half_basis,
    chiral_projectors,
    spin_embedded_generators,
    spin_generators,
    t0_bilinears,
    t0_tensor,
    volume_element,
)
from sgtc.exact import Matrix, inverse, solve
from sgtc.superlin import SuperVectorSpace

SIGNATURES = ((1, 0), (1, 1), (2, 0), (2, 1), (3, 1), (4, 0), (5, 1))


def check_relations_directly(cd: CliffordData):
    # independent verification loop, no helper reuse
    q = cd.module_dim
    for a in range(cd.p):
        for b in range(cd.p):
            anti = cd.gammas[a] @ cd.gammas[b] + cd.gammas[b] @ cd.gammas[a]
            eta = 2 * (0 if a != b else (1 if a < cd.p_plus else -1))
            assert anti == Matrix.identity(q).scale(eta), (a, b)
    cinv = inverse(cd.C)
    for a in range(cd.p):
        assert cd.C @ cd.gammas[a] @ cinv == cd.gammas[a].T.scale(cd.alpha)
    assert cd.C.T == cd.C.scale(cd.alpha)


@pytest.mark.parametrize("sig", SIGNATURES)
def test_clifford_relations(sig):
    cd = build_clifford(*sig)
    check_relations_directly(cd)


def test_one_dimensional_case():
    cd = build_clifford(1, 0)
    assert cd.module_dim == 1
    assert cd.gammas[0] == Matrix([[1]])
    assert cd.C == Matrix([[1]])
    assert cd.alpha == 1


def test_lorentzian_2d_conjugation_antisymmetric():
    cd = build_clifford(2, 1)
    assert cd.module_dim == 2
    assert cd.C.T == -cd.C  # the invariant symplectic form
    assert cd.alpha == -1


def test_requested_module_size_must_match():
    build_clifford(2, 1, 2)
    with pytest.raises(UnsupportedSignatureError):
        build_clifford(5, 1, 8)  # the faithful module has size 16
    with pytest.raises(UnsupportedSignatureError):
        build_clifford(0, 3)


@pytest.mark.parametrize("sig", SIGNATURES)
def test_intertwining_and_bracket_iso(sig):
    cd = build_clifford(*sig)
    assert check_spin_pair(cd) == []


def test_spin_generator_counts():
    assert len(spin_generators(build_clifford(2, 1)).pairs) == 3
    assert len(spin_generators(build_clifford(1, 0)).pairs) == 0


def test_so21_bracket_table():
    # brute-force comparison of sigma brackets against the vector brackets
    cd = build_clifford(2, 1)
    rep = spin_generators(cd)
    sig_cols = Matrix.from_cols(
        [[m.data[i][j] for i in range(2) for j in range(2)] for m in rep.sigma], 4
    )
    vec_cols = Matrix.from_cols(
        [[m.data[i][j] for i in range(3) for j in range(3)] for m in rep.vector], 9
    )
    for i in range(3):
        for j in range(3):
            bs = rep.sigma[i] @ rep.sigma[j] - rep.sigma[j] @ rep.sigma[i]
            bv = rep.vector[i] @ rep.vector[j] - rep.vector[j] @ rep.vector[i]
            cs = solve(sig_cols, [bs.data[a][b] for a in range(2) for b in range(2)])
            cv = solve(vec_cols, [bv.data[a][b] for a in range(3) for b in range(3)])
            assert cs == cv


def test_t0_symmetric_and_odd_odd_only():
    cd = build_clifford(2, 1)
    w = SuperVectorSpace.make(3, 2)
    t0 = t0_tensor(cd, w)
    assert not t0.is_zero()
    seen = False
    for (i, j, b), v in t0.items():
        assert w.parity(i) == 1 and w.parity(j) == 1 and w.parity(b) == 0
        assert t0.get(j, i, b) == v  # symmetric in the odd pair
        seen = True
    assert seen


@pytest.mark.parametrize("sig", SIGNATURES)
def test_spin_action_annihilates_t0(sig):
    # direct evaluation of the derivation action, written out inline
    cd = build_clifford(*sig)
    w = SuperVectorSpace.make(cd.p, cd.module_dim)
    t0 = t0_tensor(cd, w)
    n = w.dim
    for x in spin_embedded_generators(cd, w):
        moved = {}
        for (i, j, b), v in t0.items():
            for c in range(n):
                if x.data[c][b]:
                    key = (i, j, c)
                    moved[key] = moved.get(key, Fraction(0)) + x.data[c][b] * v
        for (r, j, b), v in t0.items():
            for i in range(n):
                if x.data[r][i]:
                    key = (i, j, b)
                    moved[key] = moved.get(key, Fraction(0)) - x.data[r][i] * v
        for (i, r, b), v in t0.items():
            for j in range(n):
                if x.data[r][j]:
                    key = (i, j, b)
                    moved[key] = moved.get(key, Fraction(0)) - x.data[r][j] * v
        assert not any(moved.values())


def test_chiral_projectors():
    cd = build_clifford(1, 1)
    pp, pm = chiral_projectors(cd)
    assert pp @ pp == pp and pm @ pm == pm
    assert (pp + pm) == Matrix.identity(2)
    assert chiral_half_basis(cd, 1).dim == 1
    # Euclidean signature (2,0): volume squares to -1, no real split
    assert chiral_projectors(build_clifford(2, 0)) is None
    vol = volume_element(build_clifford(5, 1))
    assert vol @ vol == Matrix.identity(16)
    assert chiral_half_basis(build_clifford(5, 1), 1).dim == 8


def test_t0_bilinears_symmetric():
    for sig in SIGNATURES:
        cd = build_clifford(*sig)
        for m in t0_bilinears(cd):
            assert m.T == m
