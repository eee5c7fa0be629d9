import random
from fractions import Fraction

import pytest

from sgtc.exact import Matrix, rank
from sgtc.superlin import (
    GradedTensor,
    HomSpace,
    SuperVectorSpace,
    WedgeSpace,
    hom2_tensor_from_coords,
    hom_flatten,
    hom_unflatten,
    induced_wedge_map,
    koszul_sign,
    project_pair_symmetry,
    super_exterior_square,
)


def test_wedge_square_dims():
    assert super_exterior_square(SuperVectorSpace.make(3, 2)).dim == 12
    for n in (1, 2, 5):
        assert super_exterior_square(SuperVectorSpace.make(n, 0)).dim == n * (n - 1) // 2
    for q in (1, 2, 4):
        assert super_exterior_square(SuperVectorSpace.make(0, q)).dim == q * (q + 1) // 2


def test_wedge_square_parity_split():
    w = SuperVectorSpace.make(3, 2)
    pair = super_exterior_square(w)
    even = sum(1 for p in pair.parities if p == 0)
    odd = pair.dim - even
    assert (even, odd) == (3 + 3, 6)


def test_koszul_sign_basics():
    assert koszul_sign([0, 1], [0, 0]) == 1
    assert koszul_sign([1, 0], [0, 0]) == 1  # pure Koszul factor, no alternation
    assert koszul_sign([1, 0], [1, 1]) == -1
    assert koszul_sign([0, 1, 2], [1, 1, 1]) == 1


def test_koszul_sign_multiplicative():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(2, 6)
        parities = [rng.randint(0, 1) for _ in range(n)]
        p1 = list(range(n))
        rng.shuffle(p1)
        p2 = list(range(n))
        rng.shuffle(p2)
        composed = [p1[p2[k]] for k in range(n)]
        # permuted parities seen by the second move
        par_after = [parities[p1[k]] for k in range(n)]
        assert koszul_sign(composed, parities) == koszul_sign(
            p1, parities
        ) * koszul_sign(p2, par_after)


def test_hom_dims():
    w = SuperVectorSpace.make(3, 2)
    g = SuperVectorSpace(tuple(f"x{i}" for i in range(9)), (0,) * 9)
    pair = super_exterior_square(w)
    assert HomSpace(WedgeSpace(w, 1), g).dim == 45
    assert HomSpace(pair, w).dim == 60


def test_hom_flatten_round_trip():
    rng = random.Random(9)
    w = SuperVectorSpace.make(2, 2)
    pair = super_exterior_square(w)
    hom = HomSpace(pair, w)
    vec = [Fraction(rng.randint(-5, 5)) for _ in range(hom.dim)]
    t = hom2_tensor_from_coords(w, pair, hom, vec)
    assert hom_flatten(t, hom) == vec
    zero = hom2_tensor_from_coords(w, pair, hom, [0] * hom.dim)
    assert zero.is_zero()


def test_hom_flatten_basis_tensor():
    w = SuperVectorSpace.make(2, 1)
    hom = HomSpace(WedgeSpace(w, 1), w)
    t = GradedTensor((w,), w, {(0, 1): Fraction(1)})
    vec = hom_flatten(t, hom)
    assert vec[hom.flat(0, 1)] == 1
    assert sum(1 for v in vec if v) == 1
    assert hom_unflatten(vec, hom).comps == t.comps


def test_wedge_canonicalize_signs():
    w = SuperVectorSpace.make(2, 2)  # e1 e2 f1 f2 -> indices 0 1 2 3
    pair = super_exterior_square(w)
    pos_ee, sign = pair.canonicalize((1, 0))
    assert sign == -1 and pair.tuples[pos_ee] == (0, 1)
    pos_ff, sign = pair.canonicalize((3, 2))
    assert sign == 1 and pair.tuples[pos_ff] == (2, 3)
    pos, sign = pair.canonicalize((0, 0))
    assert pos is None
    pos_ff2, sign = pair.canonicalize((2, 2))
    assert pos_ff2 is not None


def test_wedge_functoriality():
    rng = random.Random(13)
    w = SuperVectorSpace.make(2, 2)
    pair = super_exterior_square(w)
    for _ in range(10):
        while True:
            blocks = [
                [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
                for _ in range(2)
            ]
            a = Matrix(
                [
                    [blocks[0][0][0], blocks[0][0][1], 0, 0],
                    [blocks[0][1][0], blocks[0][1][1], 0, 0],
                    [0, 0, blocks[1][0][0], blocks[1][0][1]],
                    [0, 0, blocks[1][1][0], blocks[1][1][1]],
                ]
            )
            if rank(a) == 4:
                break
        ind = induced_wedge_map(pair, a)
        assert rank(ind) == pair.dim


def test_projection_idempotent():
    rng = random.Random(17)
    w = SuperVectorSpace.make(2, 2)
    comps = {}
    for i in range(4):
        for j in range(4):
            for b in range(4):
                v = rng.randint(-4, 4)
                if v:
                    comps[(i, j, b)] = Fraction(v)
    t = GradedTensor((w, w), w, comps, symmetry="none", validate=False)
    for kind in ("super_anti", "super_sym", "pair_exchange"):
        p1 = project_pair_symmetry(t, kind)
        p2 = project_pair_symmetry(p1, kind)
        assert p1.comps == p2.comps


def test_symmetry_validation():
    w = SuperVectorSpace.make(1, 1)
    good = {(1, 1, 0): Fraction(2)}  # odd-odd symmetric under super_anti
    GradedTensor((w, w), w, good, symmetry="super_anti")
    bad = {(0, 1, 0): Fraction(1), (1, 0, 0): Fraction(1)}
    with pytest.raises(ValueError):
        GradedTensor((w, w), w, bad, symmetry="super_anti")


def test_parity_homogeneity_enforced():
    w = SuperVectorSpace.make(1, 1)
    mixed = {(0, 1, 0): Fraction(1), (0, 1, 1): Fraction(1)}
    with pytest.raises(ValueError):
        GradedTensor((w, w), w, mixed, symmetry="none")


def test_space_validation():
    with pytest.raises(ValueError):
        SuperVectorSpace(("a", "a"), (0, 0))
    with pytest.raises(ValueError):
        SuperVectorSpace(("a", "b"), (0, 2))
    w = SuperVectorSpace.make(2, 3)
    assert (w.p, w.q, w.dim) == (2, 3, 5)
