from fractions import Fraction

import pytest

from sgtc.clifford import build_clifford
from sgtc.exact import Matrix
from sgtc.superlie import (
    GradedAlgebra,
    NotClosedError,
    NotInvariantError,
    SuperLieAlgebra,
    build_structure_algebra,
    build_superconformal_3d,
    gl_group_data,
    osp_group_data,
    structure_constants_from_json,
    structure_constants_to_json,
    validate,
    validate_group_data,
)
from sgtc.superlin import SuperVectorSpace


def test_abelian_validates():
    space = SuperVectorSpace(("a", "b"), (0, 0))
    assert validate(SuperLieAlgebra(space, {})) == []


def sl2():
    # [h, e] = 2e, [h, f] = -2f, [e, f] = h  with basis order (e, f, h)
    space = SuperVectorSpace(("e", "f", "h"), (0, 0, 0))
    br = {
        (2, 0): ((0, Fraction(2)),),
        (0, 2): ((0, Fraction(-2)),),
        (2, 1): ((1, Fraction(-2)),),
        (1, 2): ((1, Fraction(2)),),
        (0, 1): ((2, Fraction(1)),),
        (1, 0): ((2, Fraction(-1)),),
    }
    return SuperLieAlgebra(space, br)


def test_sl2_validates():
    assert validate(sl2()) == []


def test_corrupted_constant_is_named():
    alg = sl2()
    bad = dict(alg.brackets)
    bad[(0, 1)] = ((2, Fraction(1)), (0, Fraction(1)))  # corrupt [e, f]
    report = validate(SuperLieAlgebra(alg.space, bad))
    kinds = {k for k, _ in report}
    assert "antisymmetry" in kinds or "jacobi" in kinds
    assert any((0, 1) == t or (0, 1) == t[:2] for _, t in report)


@pytest.mark.parametrize("pq", [(1, 1), (2, 1)])
def test_gl_group_data(pq):
    gd = gl_group_data(*pq)
    p, q = pq
    assert gd.even.dim == p * p + q * q
    assert gd.v_dim == 2 * p * q
    assert validate_group_data(gd) == []


@pytest.mark.parametrize("pq", [(1, 1), (2, 1)])
def test_osp_group_data(pq):
    gd = osp_group_data(*pq)
    p, q = pq
    assert gd.even.dim == p * (p - 1) // 2 + q * (2 * q + 1)
    assert gd.v_dim == 2 * p * q
    assert validate_group_data(gd) == []


def full_s_basis(p, q):
    out = []
    for a in range(q):
        for b in range(p):
            m = [[0] * p for _ in range(q)]
            m[a][b] = 1
            out.append(Matrix(m))
    return out


def test_structure_algebra_dims():
    cd = build_clifford(2, 1)
    sa = build_structure_algebra(cd, full_s_basis(3, 2))
    assert sa.dim == 9
    assert validate(sa.algebra) == []
    sa0 = build_structure_algebra(cd, [])
    assert sa0.dim == 3
    # z-type subspace has dimension 2, giving dim g = 5
    from sgtc.models import s_variants_3d

    saz = build_structure_algebra(cd, s_variants_3d()["z_type"])
    assert saz.dim == 5


def test_structure_algebra_rejects_non_invariant():
    cd = build_clifford(2, 1)
    bad = [Matrix([[1, 0, 0], [0, 0, 0]])]
    with pytest.raises(NotInvariantError) as err:
        build_structure_algebra(cd, bad)
    assert "spin" in str(err.value)


def test_brackets_match_supercommutators():
    # structure constants agree with an independent recomputation in gl(W)
    cd = build_clifford(2, 1)
    sa = build_structure_algebra(cd, full_s_basis(3, 2))
    alg = sa.algebra
    n = alg.dim
    for a in range(n):
        for b in range(n):
            xa, xb = sa.gens[a], sa.gens[b]
            if sa.parities[a] and sa.parities[b]:
                br = xa @ xb + xb @ xa
            else:
                br = xa @ xb - xb @ xa
            coords = alg.bracket_basis(a, b)
            recomposed = Matrix.zeros(5, 5)
            for c, v in enumerate(coords):
                if v:
                    recomposed = recomposed + sa.gens[c].scale(v)
            assert recomposed == br


def test_superconformal_structure():
    ga = build_superconformal_3d()
    assert ga.algebra.dim == 14
    even = sum(1 for p in ga.algebra.space.parities if p == 0)
    assert (even, 14 - even) == (10, 4)
    dims = {str(k): v for k, v in ga.component_dims().items()}
    assert dims == {"-1": 3, "-1/2": 2, "0": 4, "1/2": 2, "1": 3}
    assert validate(ga.algebra) == []
    assert ga.validate_grading() == []


def test_superconformal_top_degree_abelian():
    ga = build_superconformal_3d()
    top = ga.indices(1)
    for a in top:
        for b in top:
            assert not any(ga.algebra.bracket_basis(a, b))


def test_supertranslations_surject_onto_translations():
    ga = build_superconformal_3d()
    half = ga.indices(Fraction(-1, 2))
    low = ga.indices(-1)
    vecs = []
    for a in half:
        for b in half:
            coords = ga.algebra.bracket_basis(a, b)
            vecs.append([coords[i] for i in low])
    from sgtc.exact import Matrix as M, rank

    assert rank(M.from_cols(vecs, len(low))) == 3


def test_structure_constant_json_round_trip():
    alg = sl2()
    text = structure_constants_to_json(alg)
    back = structure_constants_from_json(alg.space, text)
    assert back.brackets == alg.brackets


def test_graded_algebra_detects_bad_grading():
    alg = sl2()
    ga = GradedAlgebra(alg, (Fraction(1), Fraction(-1), Fraction(0)))
    assert ga.validate_grading() == []
    bad = GradedAlgebra(alg, (Fraction(1), Fraction(1), Fraction(0)))
    assert bad.validate_grading() != []
