"""Gamma matrices, charge conjugation and spin representation pairs.

All representations are real with rational entries, built by tensoring
2x2 blocks (and 4x4 quaternion blocks for the Euclidean cases) so that the
whole package stays over Q.  The metric is diag(+..+,-..-) with the pluses
first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sgtc.exact import (
    Matrix,
    Subspace,
    block_diag,
    inverse,
    kernel_basis,
    kron,
)
from sgtc.superlin import GradedTensor, SuperVectorSpace

_X = Matrix([[0, 1], [1, 0]])
_Z = Matrix([[1, 0], [0, -1]])
_Y = Matrix([[0, -1], [1, 0]])  # = X @ Z, squares to -1

# left multiplication by i and j on the quaternions, basis (1, i, j, k)
_QI = Matrix([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]])
_QJ = Matrix([[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]])


class UnsupportedSignatureError(ValueError):
    """No rational construction is wired up for the requested signature."""


@dataclass(frozen=True)
class CliffordData:
    """Gamma matrices for signature (p_plus, p_minus) with conjugation data.

    ``gammas[a] @ gammas[b] + gammas[b] @ gammas[a] == 2 eta_ab`` and
    ``C @ gammas[a] @ C^-1 == alpha * gammas[a].T`` with ``C.T == alpha C``.
    """

    p_plus: int
    p_minus: int
    gammas: tuple
    C: Matrix
    alpha: int

    @property
    def p(self):
        return self.p_plus + self.p_minus

    @property
    def module_dim(self):
        return self.gammas[0].rows if self.gammas else 1

    @property
    def eta(self):
        return Matrix.diag([1] * self.p_plus + [-1] * self.p_minus)

    def eta_sign(self, a):
        return 1 if a < self.p_plus else -1

    def gamma_upper(self, c):
        """gamma^c = eta^{cc} gamma_c."""
        g = self.gammas[c]
        return g if c < self.p_plus else -g


@dataclass(frozen=True)
class SpinRepPair:
    """Spinor-representation generators and the matched vector action.

    ``pairs[k] = (a, b)`` with a < b; ``sigma[k] = gamma_a gamma_b / 2``
    acts on spinors, ``vector[k]`` is the so(p_plus, p_minus) generator with
    both indices raised by the metric, acting on vectors.
    """

    pairs: tuple
    sigma: tuple
    vector: tuple


def _raw_gammas(p_plus, p_minus):
    if (p_plus, p_minus) == (0, 0):
        return []
    if (p_plus, p_minus) == (1, 0):
        return [Matrix([[1]])]
    if (p_plus, p_minus) == (2, 0):
        return [_X, _Z]
    if (p_plus, p_minus) == (0, 2):
        return [_QI, _QJ]
    if p_plus >= 1 and p_minus >= 1:
        inner = _raw_gammas(p_plus - 1, p_minus - 1)
        ident = Matrix.identity(inner[0].rows if inner else 1)
        plus = [kron(g, _Z) for g in inner[: p_plus - 1]]
        minus = [kron(g, _Z) for g in inner[p_plus - 1 :]]
        return plus + [kron(ident, _X)] + minus + [kron(ident, _Y)]
    if p_minus == 0 and p_plus >= 2:
        inner = _raw_gammas(0, p_plus - 2)
        ident = Matrix.identity(inner[0].rows if inner else 1)
        xz = _X @ _Z
        return [kron(ident, _X), kron(ident, _Z)] + [kron(g, xz) for g in inner]
    raise UnsupportedSignatureError(
        f"no construction for signature ({p_plus},{p_minus})"
    )


def _find_conjugation(gammas, q):
    """Search alpha in {+1,-1} for an invertible C with the required identities."""
    basis = [(i, j) for i in range(q) for j in range(q)]
    for alpha in (1, -1):
        rows = []
        for g in gammas:
            gt = g.T
            # C g - alpha g^T C = 0, entrywise linear in C
            for r in range(q):
                for s in range(q):
                    row = []
                    for (i, j) in basis:
                        coeff = Fraction(0)
                        if i == r:
                            coeff += g.data[j][s]
                        if j == s:
                            coeff -= alpha * gt.data[r][i]
                        row.append(coeff)
                    rows.append(row)
        # C^T = alpha C
        for r in range(q):
            for s in range(q):
                row = []
                for (i, j) in basis:
                    coeff = Fraction(0)
                    if (i, j) == (s, r):
                        coeff += 1
                    if (i, j) == (r, s):
                        coeff -= alpha
                    row.append(coeff)
                rows.append(row)
        sols = kernel_basis(Matrix(rows))
        cand = None
        for k in range(sols.dim):
            vec = sols.basis.col(k)
            c = Matrix([[vec[i * q + j] for j in range(q)] for i in range(q)])
            cand = c if cand is None else cand + c
            try:
                inverse(cand)
            except ValueError:
                continue
            return _primitive(cand), alpha
    raise UnsupportedSignatureError("no invertible charge conjugation found")


def _primitive(m: Matrix) -> Matrix:
    rows = m.int_rows()
    flat = [x for row in rows for x in row]
    from math import gcd

    g = 0
    for x in flat:
        g = gcd(g, abs(x))
    if g > 1:
        rows = [[x // g for x in row] for row in rows]
        flat = [x for row in rows for x in row]
    for x in flat:
        if x:
            if x < 0:
                rows = [[-y for y in row] for row in rows]
            break
    return Matrix(rows)


def build_clifford(p_plus, p_minus, q=None) -> CliffordData:
    """Clifford data for the signature; gammas have the minimal real size.

    ``q``, when given, must equal that minimal faithful module size (models
    that use a chiral half or several copies of the module assemble those
    from this data; see sgtc.models).
    """
    gammas = _raw_gammas(p_plus, p_minus)
    module = gammas[0].rows if gammas else 1
    if q is not None and q != module:
        raise UnsupportedSignatureError(
            f"signature ({p_plus},{p_minus}) has a faithful module of size "
            f"{module}, not {q}"
        )
    if not gammas:
        return CliffordData(0, 0, (), Matrix.identity(1), 1)
    C, alpha = _find_conjugation(gammas, module)
    cd = CliffordData(p_plus, p_minus, tuple(gammas), C, alpha)
    _check_relations(cd)
    return cd


def _check_relations(cd: CliffordData):
    q = cd.module_dim
    ident = Matrix.identity(q)
    for a, ga in enumerate(cd.gammas):
        for b, gb in enumerate(cd.gammas):
            anti = ga @ gb + gb @ ga
            want = ident.scale(2 * cd.eta.data[a][b])
            if anti != want:
                raise AssertionError(f"Clifford relation fails at ({a},{b})")
    cinv = inverse(cd.C)
    for a, ga in enumerate(cd.gammas):
        if cd.C @ ga @ cinv != ga.T.scale(cd.alpha):
            raise AssertionError(f"conjugation identity fails at gamma_{a}")
    if cd.C.T != cd.C.scale(cd.alpha):
        raise AssertionError("C is not (anti)symmetric as required")


def spin_generators(cd: CliffordData) -> SpinRepPair:
    pairs = []
    sigma = []
    vector = []
    p = cd.p
    for a in range(p):
        for b in range(a + 1, p):
            pairs.append((a, b))
            sigma.append((cd.gammas[a] @ cd.gammas[b]).scale(Fraction(1, 2)))
            v = [[Fraction(0)] * p for _ in range(p)]
            v[a][b] = Fraction(cd.eta_sign(a))
            v[b][a] = Fraction(-cd.eta_sign(b))
            vector.append(Matrix(v))
    return SpinRepPair(tuple(pairs), tuple(sigma), tuple(vector))


def check_spin_pair(cd: CliffordData) -> list:
    """Violations of the intertwining identity and the bracket isomorphism."""
    rep = spin_generators(cd)
    out = []
    p = cd.p
    for k, (a, b) in enumerate(rep.pairs):
        for c in range(p):
            got = rep.sigma[k] @ cd.gammas[c] - cd.gammas[c] @ rep.sigma[k]
            want = Matrix.zeros(cd.module_dim, cd.module_dim)
            if b == c:
                want = want + cd.gammas[a].scale(cd.eta_sign(b))
            if a == c:
                want = want - cd.gammas[b].scale(cd.eta_sign(a))
            if got != want:
                out.append(("intertwine", (a, b), c))
    # brackets of sigmas and of vector generators have equal coefficients
    if rep.pairs:
        sig_cols = Matrix.from_cols(
            [_mat_flat(s) for s in rep.sigma], cd.module_dim**2
        )
        vec_cols = Matrix.from_cols([_mat_flat(v) for v in rep.vector], p * p)
        from sgtc.exact import solve

        for i in range(len(rep.pairs)):
            for j in range(len(rep.pairs)):
                bs = rep.sigma[i] @ rep.sigma[j] - rep.sigma[j] @ rep.sigma[i]
                bv = rep.vector[i] @ rep.vector[j] - rep.vector[j] @ rep.vector[i]
                cs = solve(sig_cols, _mat_flat(bs))
                cv = solve(vec_cols, _mat_flat(bv))
                if cs is None or cv is None or cs != cv:
                    out.append(("bracket", rep.pairs[i], rep.pairs[j]))
    return out


def _mat_flat(m: Matrix):
    return [m.data[i][j] for i in range(m.rows) for j in range(m.cols)]


def t0_bilinears(cd: CliffordData):
    """The symmetric spinor pairings gamma^c C^-1, one per vector index."""
    cinv = inverse(cd.C)
    return [cd.gamma_upper(c) @ cinv for c in range(cd.p)]


def t0_tensor(cd: CliffordData, W: SuperVectorSpace) -> GradedTensor:
    """Flat-model torsion on W: only odd-odd slots hit the even part."""
    if W.p != cd.p or W.q != cd.module_dim:
        raise ValueError("space dimensions do not match the Clifford data")
    mats = t0_bilinears(cd)
    comps = {}
    p = cd.p
    for alpha in range(cd.module_dim):
        for beta in range(cd.module_dim):
            for c in range(p):
                v = mats[c].data[alpha][beta]
                if v:
                    comps[(p + alpha, p + beta, c)] = v
    return GradedTensor((W, W), W, comps, symmetry="super_anti")


def volume_element(cd: CliffordData) -> Matrix:
    out = Matrix.identity(cd.module_dim)
    for g in cd.gammas:
        out = out @ g
    return out


def chiral_projectors(cd: CliffordData):
    """Projectors onto the +1/-1 eigenspaces of the volume element.

    Returns None when the volume element squares to -1 (no real split).
    """
    vol = volume_element(cd)
    ident = Matrix.identity(cd.module_dim)
    if vol @ vol != ident:
        return None
    half = Fraction(1, 2)
    return (ident + vol).scale(half), (ident - vol).scale(half)


def chiral_half_basis(cd: CliffordData, sign: int) -> Subspace:
    """Column basis of the chiral eigenspace with the given volume sign."""
    vol = volume_element(cd)
    ident = Matrix.identity(cd.module_dim)
    if vol @ vol != ident:
        raise UnsupportedSignatureError(
            f"signature ({cd.p_plus},{cd.p_minus}) has no real chiral split"
        )
    return kernel_basis(vol - ident.scale(sign))


def embed_even(vector_part: Matrix, spinor_part: Matrix) -> Matrix:
    """Block-diagonal even element of gl(W) for W = R^(p|q)."""
    return block_diag([vector_part, spinor_part])


def embed_odd(s: Matrix, p: int, q: int) -> Matrix:
    """Lower-left block embedding of s in Hom(R^p, R^q) into gl(W)."""
    if s.shape != (q, p):
        raise ValueError("shape does not match the requested blocks")
    out = [[Fraction(0)] * (p + q) for _ in range(p + q)]
    for i in range(q):
        for j in range(p):
            out[p + i][j] = s.data[i][j]
    return Matrix(out)


def spin_embedded_generators(cd: CliffordData, W: SuperVectorSpace):
    """The spin generators as block-diagonal elements of gl(W)."""
    rep = spin_generators(cd)
    return [
        embed_even(rep.vector[k], rep.sigma[k]) for k in range(len(rep.pairs))
    ]
