"""Super Lie algebras from structure constants, and the algebra catalog.

A super Lie group is represented by its infinitesimal data: an ordinary
Lie algebra acting on an odd module together with a symmetric equivariant
pairing back into the algebra satisfying the cyclic identity (GroupData).
Matrix superalgebras are built from explicit gl(W) generators; brackets are
always the supercommutator xy - (-1)^(|x||y|) yx.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from sgtc.exact import Matrix, scalar, solve, solve_columns
from sgtc.superlin import EVEN, ODD, SuperVectorSpace

_ZERO = Fraction(0)


class NotClosedError(ValueError):
    """A generating set fails to close under the supercommutator."""


class NotInvariantError(ValueError):
    """A subspace fails invariance under a named generator."""


class SuperLieAlgebra:
    """Structure constants over a labeled super vector space."""

    __slots__ = ("space", "brackets")

    def __init__(self, space: SuperVectorSpace, brackets):
        self.space = space
        cleaned = {}
        for (a, b), terms in brackets.items():
            terms = tuple((c, scalar(v)) for c, v in terms if v)
            if terms:
                cleaned[(a, b)] = terms
        self.brackets = cleaned

    @property
    def dim(self):
        return self.space.dim

    def parity(self, i):
        return self.space.parity(i)

    def bracket_basis(self, a, b):
        """Coordinates of [x_a, x_b]."""
        out = [_ZERO] * self.dim
        for c, v in self.brackets.get((a, b), ()):
            out[c] += v
        return out

    def bracket(self, x, y):
        """Bilinear bracket of coordinate vectors."""
        out = [_ZERO] * self.dim
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if not yb:
                    continue
                for c, v in self.brackets.get((a, b), ()):
                    out[c] += xa * yb * v
        return out

    def ad_matrix(self, a):
        """Matrix of ad(x_a) in the basis."""
        cols = [self.bracket_basis(a, b) for b in range(self.dim)]
        return Matrix.from_cols(cols, self.dim)


def validate(alg: SuperLieAlgebra):
    """All violated super-antisymmetry pairs and super-Jacobi triples."""
    out = []
    n = alg.dim
    par = alg.space.parities
    br = alg.brackets
    for a in range(n):
        for b in range(a, n):
            sign = -1 if (par[a] and par[b]) else 1
            acc = {}
            for c, v in br.get((a, b), ()):
                acc[c] = acc.get(c, _ZERO) + v
            for c, v in br.get((b, a), ()):
                acc[c] = acc.get(c, _ZERO) + sign * v
            if any(acc.values()):
                out.append(("antisymmetry", (a, b)))
    for a in range(n):
        for b in range(a, n):
            for c in range(b, n):
                acc = {}
                for (x, y, z) in ((a, b, c), (b, c, a), (c, a, b)):
                    sgn = -1 if (par[x] and par[z]) else 1
                    for m, v in br.get((y, z), ()):
                        for t, w in br.get((x, m), ()):
                            acc[t] = acc.get(t, _ZERO) + sgn * v * w
                if any(acc.values()):
                    out.append(("jacobi", (a, b, c)))
    return out


def _flatten_mat(m: Matrix):
    return [m.data[i][j] for i in range(m.rows) for j in range(m.cols)]


def supercommutator(x: Matrix, y: Matrix, px, py) -> Matrix:
    xy = x @ y
    yx = y @ x
    return xy + yx if (px and py) else xy - yx


def algebra_from_matrices(mats, parities, labels=None) -> SuperLieAlgebra:
    """Structure constants of a bracket-closed family of gl(W) matrices.

    All supercommutators are expanded against the span in one elimination.
    """
    n = len(mats)
    if labels is None:
        labels = tuple(f"x{i+1}" for i in range(n))
    space = SuperVectorSpace(tuple(labels), tuple(parities))
    if n == 0:
        return SuperLieAlgebra(space, {})
    size = mats[0].rows
    span = Matrix.from_cols([_flatten_mat(m) for m in mats], size * size)
    pairs = [(a, b) for a in range(n) for b in range(n)]
    rhs = Matrix.from_cols(
        [
            _flatten_mat(
                supercommutator(mats[a], mats[b], parities[a], parities[b])
            )
            for (a, b) in pairs
        ],
        size * size,
    )
    coords = solve_columns(span, rhs)
    if coords is None:
        for (a, b) in pairs:
            br = supercommutator(mats[a], mats[b], parities[a], parities[b])
            if solve(span, _flatten_mat(br)) is None:
                raise NotClosedError(
                    f"[{labels[a]}, {labels[b]}] is outside the span"
                )
    brackets = {}
    for k, (a, b) in enumerate(pairs):
        col = coords.col(k)
        terms = tuple((c, v) for c, v in enumerate(col) if v)
        if terms:
            brackets[(a, b)] = terms
    return SuperLieAlgebra(space, brackets)


def structure_constants_to_json(alg: SuperLieAlgebra) -> str:
    quads = []
    for (a, b) in sorted(alg.brackets):
        for c, v in alg.brackets[(a, b)]:
            quads.append([a, b, c, str(v)])
    return json.dumps(quads)


def structure_constants_from_json(space: SuperVectorSpace, text: str):
    brackets = {}
    for a, b, c, v in json.loads(text):
        brackets.setdefault((a, b), []).append((c, Fraction(v)))
    return SuperLieAlgebra(space, brackets)


# ---------------------------------------------------------------------------
# Super Lie group ingredient triples
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupData:
    """(even Lie algebra, odd module, symmetric pairing) triple.

    ``action[k]`` is the module action of the k-th even basis element and
    ``pairing[(i, j)]`` holds the even-algebra coordinates of d(v_i, v_j).
    """

    name: str
    even: SuperLieAlgebra
    v_dim: int
    action: tuple
    pairing: dict

    def d_coords(self, i, j):
        return list(self.pairing.get((i, j), [_ZERO] * self.even.dim))


def validate_group_data(gd: GroupData):
    """Symmetry, equivariance and cyclic-identity violations."""
    out = []
    n = gd.even.dim
    m = gd.v_dim
    for i in range(m):
        for j in range(i, m):
            if gd.d_coords(i, j) != gd.d_coords(j, i):
                out.append(("symmetry", (i, j)))
    for k in range(n):
        act = gd.action[k]
        for i in range(m):
            for j in range(m):
                xk = [Fraction(1) if t == k else _ZERO for t in range(n)]
                lhs = gd.even.bracket(xk, gd.d_coords(i, j))
                rhs = [_ZERO] * n
                for t in range(m):
                    a = act.data[t][i]
                    if a:
                        for c, v in enumerate(gd.d_coords(t, j)):
                            rhs[c] += a * v
                    b = act.data[t][j]
                    if b:
                        for c, v in enumerate(gd.d_coords(i, t)):
                            rhs[c] += b * v
                if lhs != rhs:
                    out.append(("equivariance", (k, i, j)))
    for i in range(m):
        for j in range(i, m):
            for k in range(j, m):
                acc = [_ZERO] * m
                for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                    coords = gd.d_coords(a, b)
                    for t, v in enumerate(coords):
                        if not v:
                            continue
                        col = gd.action[t].col(c)
                        for s in range(m):
                            acc[s] += v * col[s]
                if any(acc):
                    out.append(("cyclic", (i, j, k)))
    return out


def _unit(rows, cols, i, j):
    m = [[_ZERO] * cols for _ in range(rows)]
    m[i][j] = Fraction(1)
    return Matrix(m)


def _expand(basis_mats, m: Matrix):
    span = Matrix.from_cols(
        [_flatten_mat(x) for x in basis_mats], m.rows * m.cols
    )
    coords = solve(span, _flatten_mat(m))
    if coords is None:
        raise NotClosedError("matrix is outside the span of the basis")
    return coords


def gl_group_data(p, q) -> GroupData:
    """Ingredient triple of the super general linear group of size (p|q)."""
    a_gens = [_unit(p, p, i, j) for i in range(p) for j in range(p)]
    d_gens = [_unit(q, q, i, j) for i in range(q) for j in range(q)]
    even_mats = [
        Matrix(
            [
                [m.data[i][j] if (i < p and j < p) else _ZERO for j in range(p + q)]
                for i in range(p + q)
            ]
        )
        for m in a_gens
    ] + [
        Matrix(
            [
                [
                    m.data[i - p][j - p] if (i >= p and j >= p) else _ZERO
                    for j in range(p + q)
                ]
                for i in range(p + q)
            ]
        )
        for m in d_gens
    ]
    labels = [f"a{i+1}{j+1}" for i in range(p) for j in range(p)] + [
        f"d{i+1}{j+1}" for i in range(q) for j in range(q)
    ]
    even = algebra_from_matrices(even_mats, [EVEN] * len(even_mats), labels)

    # module basis: lower-left units (q x p), then upper-right units (p x q)
    lower = [(i, j) for i in range(q) for j in range(p)]
    upper = [(i, j) for i in range(p) for j in range(q)]
    m = len(lower) + len(upper)

    def act_matrix(kind, a, b):
        act = [[_ZERO] * m for _ in range(m)]
        for col, (i, j) in enumerate(lower):
            # C -> D C - C A
            if kind == "a" and j == a:
                act[lower.index((i, b))][col] -= 1
            if kind == "d" and b == i:
                act[lower.index((a, j))][col] += 1
        for col0, (i, j) in enumerate(upper):
            col = len(lower) + col0
            # B -> A B - B D
            if kind == "a" and b == i:
                act[len(lower) + upper.index((a, j))][col] += 1
            if kind == "d" and j == a:
                act[len(lower) + upper.index((i, b))][col] -= 1
        return Matrix(act)

    action = [act_matrix("a", i, j) for i in range(p) for j in range(p)]
    action += [act_matrix("d", i, j) for i in range(q) for j in range(q)]

    pairing = {}
    for s, vs in enumerate(lower + upper):
        for t, vt in enumerate(lower + upper):
            c_s = _unit(q, p, *vs) if s < len(lower) else Matrix.zeros(q, p)
            b_s = _unit(p, q, *vs) if s >= len(lower) else Matrix.zeros(p, q)
            c_t = _unit(q, p, *vt) if t < len(lower) else Matrix.zeros(q, p)
            b_t = _unit(p, q, *vt) if t >= len(lower) else Matrix.zeros(p, q)
            gl_p = b_s @ c_t + b_t @ c_s
            gl_q = c_s @ b_t + c_t @ b_s
            coords = [_ZERO] * even.dim
            for i in range(p):
                for j in range(p):
                    coords[i * p + j] = gl_p.data[i][j]
            for i in range(q):
                for j in range(q):
                    coords[p * p + i * q + j] = gl_q.data[i][j]
            if any(coords):
                pairing[(s, t)] = coords
    return GroupData(f"gl({p}|{q})", even, m, tuple(action), pairing)


def osp_group_data(p, q) -> GroupData:
    """Ingredient triple of the super orthogonal-symplectic group.

    Even part o(p) + sp(2q) preserving the standard symmetric/symplectic
    forms; the odd module is Hom(R^p, R^2q).
    """
    q2 = 2 * q
    eps = Matrix(
        [
            [
                Fraction(1) if j == i + q else (Fraction(-1) if i == j + q else _ZERO)
                for j in range(q2)
            ]
            for i in range(q2)
        ]
    )
    o_mats = [
        _unit(p, p, a, b) - _unit(p, p, b, a) for a in range(p) for b in range(a + 1, p)
    ]
    sp_mats = []
    for a in range(q):
        for b in range(q):
            m = [[_ZERO] * q2 for _ in range(q2)]
            m[a][b] = Fraction(1)
            m[q + b][q + a] = Fraction(-1)
            sp_mats.append(Matrix(m))
    for a in range(q):
        for b in range(a, q):
            m = [[_ZERO] * q2 for _ in range(q2)]
            m[a][q + b] = Fraction(1)
            m[b][q + a] = Fraction(1)
            sp_mats.append(Matrix(m))
            m = [[_ZERO] * q2 for _ in range(q2)]
            m[q + a][b] = Fraction(1)
            m[q + b][a] = Fraction(1)
            sp_mats.append(Matrix(m))
    even_mats = []
    for m in o_mats:
        even_mats.append(
            Matrix(
                [
                    [
                        m.data[i][j] if (i < p and j < p) else _ZERO
                        for j in range(p + q2)
                    ]
                    for i in range(p + q2)
                ]
            )
        )
    for m in sp_mats:
        even_mats.append(
            Matrix(
                [
                    [
                        m.data[i - p][j - p] if (i >= p and j >= p) else _ZERO
                        for j in range(p + q2)
                    ]
                    for i in range(p + q2)
                ]
            )
        )
    labels = [f"o{a+1}{b+1}" for a in range(p) for b in range(a + 1, p)]
    labels += [f"sp{k+1}" for k in range(len(sp_mats))]
    even = algebra_from_matrices(even_mats, [EVEN] * len(even_mats), labels)

    units = [(i, j) for i in range(q2) for j in range(p)]
    m = len(units)

    def act_matrix(idx):
        if idx < len(o_mats):
            amat, dmat = o_mats[idx], Matrix.zeros(q2, q2)
        else:
            amat, dmat = Matrix.zeros(p, p), sp_mats[idx - len(o_mats)]
        act = [[_ZERO] * m for _ in range(m)]
        for col, (i, j) in enumerate(units):
            cm = _unit(q2, p, i, j)
            res = dmat @ cm - cm @ amat
            for (r, s) in units:
                v = res.data[r][s]
                if v:
                    act[units.index((r, s))][col] = v
        return Matrix(act)

    action = [act_matrix(k) for k in range(len(even_mats))]

    o_span = o_mats
    sp_span = sp_mats
    pairing = {}
    for s, vs in enumerate(units):
        cs = _unit(q2, p, *vs)
        for t, vt in enumerate(units):
            ct = _unit(q2, p, *vt)
            o_part = -(cs.T @ eps @ ct + ct.T @ eps @ cs)
            sp_part = -(cs @ ct.T + ct @ cs.T) @ eps
            coords = [_ZERO] * even.dim
            if o_span:
                oc = _expand(o_span, o_part)
                for i, v in enumerate(oc):
                    coords[i] = v
            elif not o_part.is_zero():
                raise NotClosedError("o(p) component outside span")
            spc = _expand(sp_span, sp_part)
            for i, v in enumerate(spc):
                coords[len(o_span) + i] = v
            if any(coords):
                pairing[(s, t)] = coords
    return GroupData(f"osp({p}|{2*q})", even, m, tuple(action), pairing)


def poincare_group_data(name, vector_gens, spinor_gens, t0_comps, p, q) -> GroupData:
    """Super translation-rotation triple from a spin pair and a flat torsion.

    ``t0_comps[(alpha, beta)]`` is the R^p vector valued pairing of the odd
    basis; translations act trivially on the module, so the cyclic identity
    holds term by term.
    """
    n_spin = len(vector_gens)
    n = n_spin + p
    brackets = {}
    if n_spin:
        span = Matrix.from_cols([_flatten_mat(v) for v in vector_gens], p * p)
    for a in range(n_spin):
        for b in range(n_spin):
            br = vector_gens[a] @ vector_gens[b] - vector_gens[b] @ vector_gens[a]
            coords = solve(span, _flatten_mat(br))
            if coords is None:
                raise NotClosedError("vector generators do not close")
            terms = tuple((c, v) for c, v in enumerate(coords) if v)
            if terms:
                brackets[(a, b)] = terms
    for a in range(n_spin):
        for c in range(p):
            col = vector_gens[a].col(c)
            terms = tuple((n_spin + d, v) for d, v in enumerate(col) if v)
            if terms:
                brackets[(a, n_spin + c)] = terms
                brackets[(n_spin + c, a)] = tuple((i, -v) for i, v in terms)
    labels = [f"j{k+1}" for k in range(n_spin)] + [f"t{c+1}" for c in range(p)]
    even = SuperLieAlgebra(
        SuperVectorSpace(tuple(labels), (EVEN,) * n), brackets
    )
    action = [spinor_gens[k] for k in range(n_spin)] + [
        Matrix.zeros(q, q) for _ in range(p)
    ]
    pairing = {}
    for (al, be), vec in t0_comps.items():
        coords = [_ZERO] * n
        for c, v in enumerate(vec):
            coords[n_spin + c] = v
        if any(coords):
            pairing[(al, be)] = coords
    return GroupData(name, even, q, tuple(action), pairing)


# ---------------------------------------------------------------------------
# Matrix structure algebras for the flat models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StructureAlgebra:
    """Bracket-closed generators of g inside gl(W), with metadata."""

    W: SuperVectorSpace
    gens: tuple
    parities: tuple
    names: tuple
    algebra: SuperLieAlgebra

    @property
    def dim(self):
        return len(self.gens)


def matrix_superalgebra(W, gens, parities, names) -> StructureAlgebra:
    alg = algebra_from_matrices(list(gens), list(parities), list(names))
    return StructureAlgebra(W, tuple(gens), tuple(parities), tuple(names), alg)


def check_invariant_subspace(s_basis, spin_vector, spin_sigma, names):
    """Verify sigma s - s v stays in span(s_basis) for every generator.

    Raises NotInvariantError naming the first violating generator.
    """
    if not s_basis:
        return
    q, p = s_basis[0].shape
    span = Matrix.from_cols([_flatten_mat(s) for s in s_basis], p * q)
    for k, (v, sg) in enumerate(zip(spin_vector, spin_sigma)):
        moved = Matrix.from_cols(
            [_flatten_mat(sg @ s - s @ v) for s in s_basis], p * q
        )
        if solve_columns(span, moved) is None:
            raise NotInvariantError(
                f"subspace not invariant under generator {names[k]}"
            )


def build_structure_algebra(cd, s_basis, k_gens=(), k_names=()) -> StructureAlgebra:
    """g = spin + k + S inside gl(W) for W = R^(p|module).

    ``s_basis`` are module x p matrices; ``k_gens`` act on the spinor factor
    only.  Invariance of S under spin and k is verified, not assumed.
    """
    from sgtc.clifford import embed_even, embed_odd, spin_generators

    rep = spin_generators(cd)
    p, q = cd.p, cd.module_dim
    W = SuperVectorSpace.make(p, q)
    spin_names = [f"spin{a+1}{b+1}" for (a, b) in rep.pairs]
    vecs = list(rep.vector) + [Matrix.zeros(p, p) for _ in k_gens]
    sigs = list(rep.sigma) + list(k_gens)
    names = spin_names + list(k_names)
    check_invariant_subspace(list(s_basis), vecs, sigs, names)
    gens = [embed_even(v, s) for v, s in zip(vecs, sigs)]
    gens += [embed_odd(s, p, q) for s in s_basis]
    parities = [EVEN] * len(sigs) + [ODD] * len(s_basis)
    names = names + [f"s{k+1}" for k in range(len(s_basis))]
    return matrix_superalgebra(W, gens, parities, names)


# ---------------------------------------------------------------------------
# Graded algebras and the three-dimensional superconformal algebra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedAlgebra:
    """Super Lie algebra with a basis grading by degrees in halves."""

    algebra: SuperLieAlgebra
    degrees: tuple

    def indices(self, degree):
        degree = Fraction(degree)
        return [i for i, d in enumerate(self.degrees) if d == degree]

    def component_dims(self):
        out = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def validate_grading(self):
        """Degree additivity and integer/half-integer parity consistency."""
        out = []
        n = self.algebra.dim
        for i in range(n):
            d = self.degrees[i]
            par = self.algebra.parity(i)
            if (d.denominator == 1) != (par == EVEN):
                out.append(("parity", i))
        for a in range(n):
            for b in range(n):
                target = self.degrees[a] + self.degrees[b]
                coords = self.algebra.bracket_basis(a, b)
                for c, v in enumerate(coords):
                    if v and self.degrees[c] != target:
                        out.append(("degree", (a, b, c)))
        return out


def build_superconformal_3d() -> GradedAlgebra:
    """The orthosymplectic algebra with even part sp(4, R) and odd part R^4,
    five-graded by a diagonal element: dims (3, 2, 4, 2, 3) at degrees
    (-1, -1/2, 0, 1/2, 1), with degree zero gl(2, R)."""
    half = Fraction(1, 2)
    eps = Matrix(
        [
            [0, 0, 1, 0],
            [0, 0, 0, 1],
            [-1, 0, 0, 0],
            [0, -1, 0, 0],
        ]
    )

    def sp_embed(m4: Matrix) -> Matrix:
        rows = [[_ZERO] * 5 for _ in range(5)]
        for i in range(4):
            for j in range(4):
                rows[1 + i][1 + j] = m4.data[i][j]
        return Matrix(rows)

    def odd_embed(v) -> Matrix:
        col = Matrix.from_cols([v], 4)
        row = (col.T @ eps).scale(-1)
        rows = [[_ZERO] * 5 for _ in range(5)]
        for i in range(4):
            rows[0][1 + i] = row.data[0][i]
            rows[1 + i][0] = col.data[i][0]
        return Matrix(rows)

    def sym2(i, j):
        m = [[_ZERO] * 2 for _ in range(2)]
        m[i][j] += 1
        m[j][i] += 1
        if i == j:
            m[i][j] = Fraction(1)
        return Matrix(m)

    gens, names, pars, degs = [], [], [], []
    # degree -1: lower-left symmetric block of sp(4)
    for (i, j) in ((0, 0), (0, 1), (1, 1)):
        s = sym2(i, j)
        m4 = Matrix(
            [
                [0, 0, 0, 0],
                [0, 0, 0, 0],
                [s.data[0][0], s.data[0][1], 0, 0],
                [s.data[1][0], s.data[1][1], 0, 0],
            ]
        )
        gens.append(sp_embed(m4))
        names.append(f"p{i+1}{j+1}")
        pars.append(EVEN)
        degs.append(Fraction(-1))
    # degree -1/2: odd elements along the second symplectic pair
    for i in (2, 3):
        v = [Fraction(1) if k == i else _ZERO for k in range(4)]
        gens.append(odd_embed(v))
        names.append(f"q{i-1}")
        pars.append(ODD)
        degs.append(-half)
    # degree 0: gl(2) block
    for (i, j) in ((0, 0), (0, 1), (1, 0), (1, 1)):
        m4 = Matrix.zeros(4, 4)
        m = [[_ZERO] * 4 for _ in range(4)]
        m[i][j] = Fraction(1)
        m[2 + j][2 + i] = Fraction(-1)
        gens.append(sp_embed(Matrix(m)))
        names.append(f"l{i+1}{j+1}")
        pars.append(EVEN)
        degs.append(Fraction(0))
    # degree +1/2
    for i in (0, 1):
        v = [Fraction(1) if k == i else _ZERO for k in range(4)]
        gens.append(odd_embed(v))
        names.append(f"s{i+1}")
        pars.append(ODD)
        degs.append(half)
    # degree +1: upper-right symmetric block
    for (i, j) in ((0, 0), (0, 1), (1, 1)):
        s = sym2(i, j)
        m4 = Matrix(
            [
                [0, 0, s.data[0][0], s.data[0][1]],
                [0, 0, s.data[1][0], s.data[1][1]],
                [0, 0, 0, 0],
                [0, 0, 0, 0],
            ]
        )
        gens.append(sp_embed(m4))
        names.append(f"k{i+1}{j+1}")
        pars.append(EVEN)
        degs.append(Fraction(1))

    alg = algebra_from_matrices(gens, pars, names)
    return GradedAlgebra(alg, tuple(degs))
