"""Torsion obstruction machinery for super G-structures.

Given W and a bracket-closed g inside gl(W), this module builds the
torsion-change differential on Hom(W, g), its prolongation tower, the
quotient obstruction space H^{0,2} = Hom(wedge^2 W, W)/im(delta) and the
higher Spencer cohomology groups H^{i,2}, plus the induced group actions,
flat-torsion stabilizers, first-order flatness tests, the connection
ambiguity check, and the Cartan adjustment map for five-graded algebras.

All sign conventions come from sgtc.superlin.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from sgtc.exact import (
    Matrix,
    Subspace,
    echelon_pivots,
    kernel_basis,
    row_reduce,
    solve,
)
from sgtc.superlie import GradedAlgebra, NotClosedError, supercommutator
from sgtc.superlin import (
    GradedTensor,
    HomSpace,
    SuperVectorSpace,
    WedgeSpace,
    hom2_tensor_from_coords,
    hom_flatten,
)

_ZERO = Fraction(0)


class DescentError(RuntimeError):
    """The action fails to preserve the image of delta (sign-convention bug)."""


class ProlongationLevel:
    """Basis of g^(k) stored as maps from W into the previous level.

    ``apply(e, w)`` returns the coordinates, over the level-(k-1) basis, of
    the e-th basis element evaluated on the w-th basis vector of W.  Level 0
    is g itself with values in W coordinates.
    """

    __slots__ = ("k", "dim", "prev_dim", "parities", "_table")

    def __init__(self, k, dim, prev_dim, parities, table):
        self.k = k
        self.dim = dim
        self.prev_dim = prev_dim
        self.parities = parities
        self._table = table

    def apply(self, e, w):
        return self._table[e][w]

    def parity(self, e):
        return self.parities[e]


def _level_zero(W, gens, parities):
    table = [
        [[g.data[r][w] for r in range(W.dim)] for w in range(W.dim)]
        for g in gens
    ]
    return ProlongationLevel(0, len(gens), W.dim, tuple(parities), table)


def _delta_matrix(W, dom: WedgeSpace, cod: WedgeSpace, level: ProlongationLevel):
    """Matrix of the torsion-change differential.

    Maps Hom(dom, g^(k)) to Hom(cod, g^(k-1)), flat index conventions
    ``source_index * value_dim + value_index`` on both sides.
    """
    m = level.dim
    mp = level.prev_dim
    rows = cod.dim * mp
    cols = dom.dim * m
    out = [[_ZERO] * cols for _ in range(rows)]
    j = dom.degree
    for uidx, U in enumerate(cod.tuples):
        for i in range(j + 1):
            rest = U[:i] + U[i + 1 :]
            pos, s = dom.canonicalize(rest)
            if pos is None:
                continue
            sign = s if (j - i) % 2 == 0 else -s
            pi = W.parity(U[i])
            if pi:
                tail = sum(W.parity(U[l]) for l in range(i + 1, j + 1))
                if tail % 2:
                    sign = -sign
            for e in range(m):
                vec = level.apply(e, U[i])
                col = pos * m + e
                base = uidx * mp
                for t in range(mp):
                    v = vec[t]
                    if v:
                        out[base + t][col] += sign * v
    return Matrix(out, rows, cols)


@dataclass
class SpencerComplex:
    """The differential, first prolongation and quotient data for (W, g)."""

    W: SuperVectorSpace
    gens: tuple
    parities: tuple
    names: tuple
    pair2: WedgeSpace
    hom_wg: HomSpace
    hom_l2w: HomSpace
    delta: Matrix
    g1: Subspace
    im_delta: Subspace
    rank: int
    h02_dim: int
    complement: tuple
    h02_projection: Matrix
    _levels: list = field(default_factory=list, repr=False)
    _wedges: dict = field(default_factory=dict, repr=False)
    _action: object = field(default=None, repr=False)

    @property
    def g_dim(self):
        return len(self.gens)

    def wedge(self, degree):
        if degree not in self._wedges:
            self._wedges[degree] = WedgeSpace(self.W, degree)
        return self._wedges[degree]

    def level(self, k) -> ProlongationLevel:
        while len(self._levels) <= k:
            prev = self._levels[-1]
            ker = kernel_basis(
                _delta_matrix(self.W, self.wedge(1), self.pair2, prev)
            )
            table = []
            pars = []
            for e in range(ker.dim):
                vec = ker.basis.col(e)
                table.append(
                    [
                        [vec[w * prev.dim + t] for t in range(prev.dim)]
                        for w in range(self.W.dim)
                    ]
                )
                par = None
                for w in range(self.W.dim):
                    for t in range(prev.dim):
                        if vec[w * prev.dim + t]:
                            p = (self.W.parity(w) + prev.parity(t)) % 2
                            if par is None:
                                par = p
                            elif par != p:
                                raise AssertionError(
                                    "prolongation element is not homogeneous"
                                )
                if par is None:
                    par = 0
                pars.append(par)
            self._levels.append(
                ProlongationLevel(
                    prev.k + 1, ker.dim, prev.dim, tuple(pars), table
                )
            )
        return self._levels[k]


def spencer_complex(W, gens, parities, names=None, check_closed=True) -> SpencerComplex:
    """Build the complex for g = span(gens) inside gl(W).

    Raises NotClosedError when the generators do not close under the
    supercommutator (g must be a subalgebra).
    """
    gens = tuple(gens)
    parities = tuple(parities)
    if names is None:
        names = tuple(f"g{i+1}" for i in range(len(gens)))
    if check_closed and gens:
        from sgtc.exact import solve_columns

        flat = Matrix.from_cols(
            [[g.data[i][j] for i in range(W.dim) for j in range(W.dim)] for g in gens],
            W.dim * W.dim,
        )
        pairs = [
            (a, b) for a in range(len(gens)) for b in range(a, len(gens))
        ]
        rhs = Matrix.from_cols(
            [
                [
                    supercommutator(
                        gens[a], gens[b], parities[a], parities[b]
                    ).data[i][j]
                    for i in range(W.dim)
                    for j in range(W.dim)
                ]
                for (a, b) in pairs
            ],
            W.dim * W.dim,
        )
        if solve_columns(flat, rhs) is None:
            for a, b in pairs:
                br = supercommutator(gens[a], gens[b], parities[a], parities[b])
                vec = [br.data[i][j] for i in range(W.dim) for j in range(W.dim)]
                if solve(flat, vec) is None:
                    raise NotClosedError(
                        f"[{names[a]}, {names[b]}] leaves the span of g"
                    )
    pair2 = WedgeSpace(W, 2)
    wedge1 = WedgeSpace(W, 1)
    level0 = _level_zero(W, gens, parities)
    delta = _delta_matrix(W, wedge1, pair2, level0)
    g1 = kernel_basis(delta)
    n = delta.rows

    # one echelon pass of [delta | I] gives the image pivots and the greedy
    # standard-basis complement of im(delta)
    aug = delta.hstack(Matrix.identity(n))
    pivots = echelon_pivots(aug.int_rows(), aug.cols)
    img_cols = [c for c in pivots if c < delta.cols]
    complement = tuple(c - delta.cols for c in pivots if c >= delta.cols)
    rank_ = len(img_cols)
    im_delta = Subspace(
        n,
        Matrix.from_cols([delta.col(c) for c in img_cols], n),
        _checked=True,
    )
    h02_dim = n - rank_

    # projection to quotient coordinates over the complement: eliminate the
    # row space of delta^T with the complement columns ordered last
    non_c = [c for c in range(n) if c not in set(complement)]
    perm = non_c + list(complement)
    dt = delta.T
    rows = [[dt.data[i][perm[k]] for k in range(n)] for i in range(dt.rows)]
    introws = Matrix(rows, dt.rows, n).int_rows()
    piv, red = row_reduce(introws, n)
    if piv != list(range(rank_)):
        raise AssertionError("complement is not complementary to im(delta)")
    proj = [[_ZERO] * n for _ in range(h02_dim)]
    for k in range(h02_dim):
        proj[k][complement[k]] = Fraction(1)
        for i in range(rank_):
            num = red[i][rank_ + k]
            if num:
                proj[k][non_c[i]] = Fraction(-num, red[i][piv[i]])
    h02_projection = Matrix(proj, h02_dim, n)

    sc = SpencerComplex(
        W=W,
        gens=gens,
        parities=parities,
        names=tuple(names),
        pair2=pair2,
        hom_wg=HomSpace(wedge1, _CarrierSpace(len(gens), parities)),
        hom_l2w=HomSpace(pair2, W),
        delta=delta,
        g1=g1,
        im_delta=im_delta,
        rank=rank_,
        h02_dim=h02_dim,
        complement=complement,
        h02_projection=h02_projection,
    )
    sc._levels.append(level0)
    sc._wedges[1] = wedge1
    sc._wedges[2] = pair2
    return sc


@dataclass(frozen=True)
class _CarrierSpace:
    """Basis bookkeeping for g as the target of Hom(W, g)."""

    dim: int
    parities: tuple

    def parity(self, i):
        return self.parities[i]


def prolongation(sc: SpencerComplex, k: int) -> Subspace:
    """g^(k) as a subspace of Hom(W, g^(k-1)) coordinates."""
    if k < 1:
        raise ValueError("prolongation index must be >= 1")
    lv = sc.level(k)
    prev = sc.level(k - 1)
    cols = []
    for e in range(lv.dim):
        vec = []
        for w in range(sc.W.dim):
            vec.extend(lv.apply(e, w))
        cols.append(vec)
    amb = sc.W.dim * prev.dim
    return Subspace(amb, Matrix.from_cols(cols, amb), _checked=True)


@dataclass(frozen=True)
class CohomologyData:
    degree: int
    dim: int
    cycle_dim: int
    boundary_dim: int
    basis: tuple  # coordinate vectors in Hom(wedge^2 W, g^(i-1))


def spencer_cohomology(sc: SpencerComplex, i: int) -> CohomologyData:
    """H^{i,2} of the two-step complex at wedge degree 2."""
    if i < 0:
        raise ValueError("cohomology index must be >= 0")
    if i == 0:
        basis = []
        n = sc.delta.rows
        for c in sc.complement:
            v = [_ZERO] * n
            v[c] = Fraction(1)
            basis.append(tuple(v))
        return CohomologyData(0, sc.h02_dim, n - 0, sc.rank, tuple(basis))
    lv_i = sc.level(i)
    lv_prev = sc.level(i - 1)
    a_mat = _delta_matrix(sc.W, sc.wedge(1), sc.pair2, lv_i)
    b_mat = _delta_matrix(sc.W, sc.pair2, sc.wedge(3), lv_prev)
    if not (b_mat @ a_mat).is_zero():
        raise AssertionError("two-step differential does not square to zero")
    kerb = kernel_basis(b_mat)
    from sgtc.exact import column_pivots

    img_cols = column_pivots(a_mat)
    im_basis = [a_mat.col(c) for c in img_cols]
    ker_cols = [kerb.basis.col(j) for j in range(kerb.dim)]
    if im_basis or ker_cols:
        stacked = Matrix.from_cols(im_basis + ker_cols, a_mat.rows)
        pivots = echelon_pivots(stacked.int_rows(), stacked.cols)
    else:
        pivots = []
    chosen = [p - len(im_basis) for p in pivots if p >= len(im_basis)]
    basis = tuple(tuple(ker_cols[j]) for j in chosen)
    return CohomologyData(
        i, kerb.dim - len(im_basis), kerb.dim, len(im_basis), basis
    )


# ---------------------------------------------------------------------------
# Actions on Hom(wedge^2 W, W)
# ---------------------------------------------------------------------------


def act_on_hom2(W, x: Matrix, x_par, T: GradedTensor) -> GradedTensor:
    """Derivation action of a homogeneous x in gl(W) on a 2-form tensor.

    Non-homogeneous tensors are handled componentwise (the action respects
    the parity splitting).
    """
    comps = {}

    def add(key, val):
        if val:
            comps[key] = comps.get(key, _ZERO) + val

    xen = [
        (r, c, x.data[r][c])
        for r in range(W.dim)
        for c in range(W.dim)
        if x.data[r][c]
    ]
    for (i, j, b), val in T.items():
        for (r, c, xv) in xen:
            if c == b:
                add((i, j, r), xv * val)
    for key, val in T.items():
        r, j, b = key
        s1 = -1 if (x_par and T.key_parity(key)) else 1
        for (rr, i, xv) in xen:
            if rr == r:
                add((i, j, b), -s1 * xv * val)
    for key, val in T.items():
        i, r, b = key
        s1 = -1 if (x_par and T.key_parity(key)) else 1
        for (rr, jj, xv) in xen:
            if rr == r:
                s2 = -1 if (x_par and W.parity(i)) else 1
                add((i, jj, b), -s1 * s2 * xv * val)
    comps = {k: v for k, v in comps.items() if v}
    return GradedTensor((W, W), W, comps, symmetry="super_anti", validate=False)


def hom2_flat(sc: SpencerComplex, T: GradedTensor):
    return hom_flatten(T, sc.hom_l2w)


def hom2_unflat(sc: SpencerComplex, vec) -> GradedTensor:
    return hom2_tensor_from_coords(sc.W, sc.pair2, sc.hom_l2w, vec)


def gen_action_on_t(sc: SpencerComplex, j, T: GradedTensor):
    return act_on_hom2(sc.W, sc.gens[j], sc.parities[j], T)


def stabilizer(sc: SpencerComplex, T: GradedTensor) -> Subspace:
    """{x in g : x.T = 0}, with bracket closure verified."""
    cols = [hom2_flat(sc, gen_action_on_t(sc, j, T)) for j in range(sc.g_dim)]
    if not cols:
        return Subspace.zero(0)
    mat = Matrix.from_cols(cols, sc.delta.rows)
    stab = kernel_basis(mat)
    _check_bracket_closed(sc, stab)
    return stab


def _check_bracket_closed(sc, sub: Subspace):
    if sub.dim == 0:
        return
    mats = []
    for j in range(sub.dim):
        coords = sub.basis.col(j)
        m = Matrix.zeros(sc.W.dim, sc.W.dim)
        for t, v in enumerate(coords):
            if v:
                m = m + sc.gens[t].scale(v)
        mats.append(m)
    pars = []
    for j in range(sub.dim):
        ps = {
            sc.parities[t]
            for t, v in enumerate(sub.basis.col(j))
            if v
        }
        if len(ps) > 1:
            raise AssertionError("stabilizer basis element is not homogeneous")
        pars.append(ps.pop() if ps else 0)
    flat = Matrix.from_cols(
        [[m.data[i][j] for i in range(sc.W.dim) for j in range(sc.W.dim)] for m in mats],
        sc.W.dim * sc.W.dim,
    )
    for a in range(sub.dim):
        for b in range(sub.dim):
            br = supercommutator(mats[a], mats[b], pars[a], pars[b])
            vec = [br.data[i][j] for i in range(sc.W.dim) for j in range(sc.W.dim)]
            if solve(flat, vec) is None:
                raise AssertionError("stabilizer is not bracket-closed")


@dataclass(frozen=True)
class ActionData:
    matrices: tuple  # descended h02 x h02 matrices, one per generator
    trivial: bool


def induced_h02_action(sc: SpencerComplex) -> ActionData:
    """Descended action of g on the quotient, with well-definedness checks."""
    if sc._action is not None:
        return sc._action
    h = sc.h02_dim
    mats = []
    trivial = True
    for j in range(sc.g_dim):
        # well-definedness: x . im(delta) stays in im(delta)
        for c in range(sc.im_delta.dim):
            vec = sc.im_delta.basis.col(c)
            moved = hom2_flat(sc, gen_action_on_t(sc, j, hom2_unflat(sc, vec)))
            if any(sc.h02_projection.matvec(moved)):
                raise DescentError(
                    f"generator {sc.names[j]} does not preserve im(delta)"
                )
        cols = []
        for k in range(h):
            lift = [_ZERO] * sc.delta.rows
            lift[sc.complement[k]] = Fraction(1)
            moved = hom2_flat(sc, gen_action_on_t(sc, j, hom2_unflat(sc, lift)))
            cols.append(sc.h02_projection.matvec(moved))
        m = Matrix.from_cols(cols, h) if h else Matrix.zeros(0, 0)
        if not m.is_zero():
            trivial = False
        mats.append(m)
    data = ActionData(tuple(mats), trivial)
    sc._action = data
    return data


@dataclass(frozen=True)
class TorsionClass:
    representative: GradedTensor
    coords: tuple

    def __eq__(self, other):
        return isinstance(other, TorsionClass) and self.coords == other.coords


def torsion_class(sc: SpencerComplex, T: GradedTensor) -> TorsionClass:
    """Class of T in the quotient; unchanged under adding any delta(phi)."""
    coords = tuple(sc.h02_projection.matvec(hom2_flat(sc, T)))
    rep = [_ZERO] * sc.delta.rows
    for k, c in enumerate(sc.complement):
        rep[c] = coords[k]
    return TorsionClass(hom2_unflat(sc, rep), coords)


@dataclass(frozen=True)
class FlatnessResult:
    flat: bool
    test: str  # "class-equality" or "first-order orbit test"


def first_order_flat(sc: SpencerComplex, T, T0) -> FlatnessResult:
    """Exact class equality when the induced action is trivial; otherwise the
    linearized orbit membership test, labeled as such."""
    action = induced_h02_action(sc)
    ct = torsion_class(sc, T).coords
    c0 = torsion_class(sc, T0).coords
    if action.trivial:
        return FlatnessResult(ct == c0, "class-equality")
    diff = [a - b for a, b in zip(ct, c0)]
    tangent = [m.matvec(list(c0)) for m in action.matrices]
    orbit = Subspace.from_spanning(sc.h02_dim, tangent)
    return FlatnessResult(orbit.contains(diff), "first-order orbit test")


# ---------------------------------------------------------------------------
# Connection ambiguity for the three-dimensional model
# ---------------------------------------------------------------------------


def u_to_connection_change(sc: SpencerComplex, s_units, U):
    """Hom(W, g) coordinates of the connection change attached to U.

    ``s_units`` maps (alpha, c) to the index of the g generator sending the
    even basis vector e_c to the odd basis vector f_alpha; ``U`` maps
    (b, c, alpha) to a scalar, b and c even indices of W.
    """
    vec = [_ZERO] * (sc.W.dim * sc.g_dim)
    for (b, c, alpha), v in U.items():
        g_idx = s_units[(alpha, c)]
        vec[b * sc.g_dim + g_idx] += v
    return vec


def torsion_change_from_u(sc: SpencerComplex, s_units, U):
    """Flat Hom(wedge^2 W, W) coordinates of the induced torsion change."""
    return sc.delta.matvec(u_to_connection_change(sc, s_units, U))


@dataclass(frozen=True)
class AmbiguityData:
    symmetric_dim: int
    g1_dim: int
    bijective: bool


def connection_ambiguity_check_3d(sc: SpencerComplex, s_units) -> AmbiguityData:
    """Pair-symmetric U tensors inject onto g^(1) with zero torsion change."""
    p = sc.W.p
    alphas = sorted({a for (a, _) in s_units})
    sym_basis = []
    for b in range(p):
        for c in range(b, p):
            for alpha in alphas:
                U = {(b, c, alpha): Fraction(1)}
                if b != c:
                    U[(c, b, alpha)] = Fraction(1)
                sym_basis.append(U)
    vecs = [u_to_connection_change(sc, s_units, U) for U in sym_basis]
    span = Subspace.from_spanning(sc.W.dim * sc.g_dim, vecs)
    inside = all(
        not any(sc.delta.matvec(list(span.basis.col(j))))
        for j in range(span.dim)
    )
    bij = inside and span.dim == len(sym_basis) == sc.g1.dim
    return AmbiguityData(len(sym_basis), sc.g1.dim, bij)


# ---------------------------------------------------------------------------
# Cartan adjustment for five-graded algebras
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CartanData:
    matrix: Matrix
    domain_dim: int
    codomain_dim: int
    rank: int
    kernel_dim: int


def cartan_adjustment_map(ga: GradedAlgebra) -> CartanData:
    """Linear map measuring how raising-degree connection components change
    the low-degree curvature; zero kernel means the choice is unique."""
    half = Fraction(1, 2)
    w_idx = ga.indices(-1) + ga.indices(-half)
    up_idx = ga.indices(half) + ga.indices(1)
    low_idx = ga.indices(-half) + ga.indices(0)
    if not w_idx or not up_idx:
        raise ValueError("algebra is missing the five-grading components")
    alg = ga.algebra
    labels = tuple(alg.space.labels[i] for i in w_idx)
    pars = tuple(alg.parity(i) for i in w_idx)
    W = SuperVectorSpace(labels, pars)
    pair = WedgeSpace(W, 2)
    nw = len(w_idx)
    nu = len(up_idx)
    nl = len(low_idx)
    rows = pair.dim * nl
    cols = nw * nu
    out = [[_ZERO] * cols for _ in range(rows)]
    for (i, j) in pair.tuples:
        uidx = pair.canonicalize((i, j))[0]
        sgn_swap = 1 if (pars[i] and pars[j]) else -1
        for a in range(nw):
            for u in range(nu):
                col = a * nu + u
                acc = [_ZERO] * alg.dim
                if j == a:
                    br = alg.bracket_basis(w_idx[i], up_idx[u])
                    for t, v in enumerate(br):
                        acc[t] += v
                if i == a:
                    br = alg.bracket_basis(w_idx[j], up_idx[u])
                    for t, v in enumerate(br):
                        acc[t] += sgn_swap * v
                base = uidx * nl
                for t, li in enumerate(low_idx):
                    v = acc[li]
                    if v:
                        out[base + t][col] += v
    mat = Matrix(out, rows, cols)
    from sgtc.exact import rank as _rank

    r = _rank(mat)
    return CartanData(mat, cols, rows, r, cols - r)
