"""Catalog of flat model spaces and their structure algebras.

Each model is a pair (W, g in gl(W)) together with the flat-model torsion.
The catalog rows fix (p, p_+, p_-, q, N); the odd part of W is assembled
from the minimal Clifford module (whole, chiral halves, or several copies)
and S is a spin-invariant subspace of Hom(R^p, R^q).  Internal symmetry
algebras for the extended rows are presets, clearly marked as such: the
sources give only the group's existence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from sgtc import clifford as _cl
from sgtc.exact import Matrix, inverse, solve, solve_columns
from sgtc.superlie import (
    GroupData,
    NotInvariantError,
    StructureAlgebra,
    check_invariant_subspace,
    matrix_superalgebra,
    poincare_group_data,
)
from sgtc.superlin import EVEN, ODD, GradedTensor, SuperVectorSpace

_ZERO = Fraction(0)
_ONE = Fraction(1)


class ModelConfigError(ValueError):
    """Invalid model configuration; message carries a JSON-pointer path."""


@dataclass(frozen=True)
class TheoryRow:
    p: int
    p_plus: int
    p_minus: int
    q: int
    n_label: str

    def __post_init__(self):
        if self.p != self.p_plus + self.p_minus:
            raise ValueError("p must equal p_plus + p_minus")
        if self.q > 8:
            raise ValueError("catalog rows have q <= 8")


_CATALOG = (
    TheoryRow(1, 1, 0, 1, "1"),
    TheoryRow(2, 1, 1, 1, "(1,0)"),
    TheoryRow(2, 1, 1, 2, "(1,1)"),
    TheoryRow(2, 1, 1, 2, "(2,0)"),
    TheoryRow(2, 1, 1, 3, "(2,1)"),
    TheoryRow(2, 2, 0, 4, "(2,2)"),
    TheoryRow(3, 2, 1, 2, "1"),
    TheoryRow(4, 3, 1, 4, "1"),
    TheoryRow(4, 4, 0, 8, "2"),
    TheoryRow(6, 5, 1, 8, "1"),
)


def catalog():
    """The ten theory rows, in source order."""
    return _CATALOG


@dataclass
class GStructureModel:
    """One flat model: W, g inside gl(W), and the flat torsion."""

    name: str
    W: SuperVectorSpace
    gens: tuple
    parities: tuple
    gen_names: tuple
    s_choice: str
    s_basis: tuple
    flat_torsion: GradedTensor
    clifford: object = None
    row: TheoryRow = None
    s_units: dict = field(default_factory=dict)
    k_dim: int = 0
    preset_k: bool = False
    notes: tuple = ()

    @property
    def g_dim(self):
        return len(self.gens)

    @property
    def spin_dim(self):
        return self.g_dim - self.k_dim - len(self.s_basis)

    def structure_algebra(self) -> StructureAlgebra:
        return matrix_superalgebra(self.W, self.gens, self.parities, self.gen_names)


def _unit(rows, cols, i, j):
    m = [[_ZERO] * cols for _ in range(rows)]
    m[i][j] = _ONE
    return Matrix(m)


def _restrict(u: Matrix, m: Matrix) -> Matrix:
    """X with m @ u == u @ X (m preserves the column span of u)."""
    x = solve_columns(u, m @ u)
    if x is None:
        raise ValueError("operator does not preserve the subspace")
    return x


def _parse_chirality(label):
    if label.startswith("(") and label.endswith(")"):
        a, b = label[1:-1].split(",")
        return int(a), int(b)
    return None


def _assemble_odd(cd, q, chirality, notes):
    """Copies of the spinor module (or its chiral halves) summing to dim q.

    Returns (copies, labels) where each copy is an m x d basis matrix.
    """
    m = cd.module_dim
    if q == m:
        return [Matrix.identity(m)], ["module"]
    proj = _cl.chiral_projectors(cd)
    if proj is not None and q % (m // 2) == 0:
        half = m // 2
        count = q // half
        if chirality is None:
            chirality = (count, 0)
        a, b = chirality
        if a + b != count:
            raise ModelConfigError(
                f"/chirality: {a}+{b} halves do not give q={q}"
            )
        plus = _cl.chiral_half_basis(cd, 1).basis
        minus = _cl.chiral_half_basis(cd, -1).basis
        copies = [plus] * a + [minus] * b
        labels = ["plus"] * a + ["minus"] * b
        return copies, labels
    if q % m == 0:
        notes.append("no real chiral split; odd part is whole-module copies")
        return [Matrix.identity(m)] * (q // m), ["module"] * (q // m)
    raise _cl.UnsupportedSignatureError(
        f"cannot assemble a {q}-dimensional odd part from a module of size {m}"
    )


def _block_diag_copies(blocks):
    from sgtc.exact import block_diag

    return block_diag(blocks)


def _t0_blocks(cd, copies):
    """Per-copy restrictions of the flat spinor pairings, one list per c."""
    mats = _cl.t0_bilinears(cd)
    out = []
    for c in range(cd.p):
        out.append([u.T @ mats[c] @ u for u in copies])
    return out


def _so_copy_generators(labels, half_dims):
    """so(k) on each group of identical copies, acting by copy rotation."""
    gens = []
    names = []
    groups = {}
    for idx, lab in enumerate(labels):
        groups.setdefault(lab, []).append(idx)
    offsets = []
    off = 0
    for d in half_dims:
        offsets.append(off)
        off += d
    total = off
    for lab, idxs in groups.items():
        for ii in range(len(idxs)):
            for jj in range(ii + 1, len(idxs)):
                a, b = idxs[ii], idxs[jj]
                d = half_dims[a]
                m = [[_ZERO] * total for _ in range(total)]
                for t in range(d):
                    m[offsets[a] + t][offsets[b] + t] = _ONE
                    m[offsets[b] + t][offsets[a] + t] = -_ONE
                gens.append(Matrix(m))
                names.append(f"k_{lab}{ii+1}{jj+1}")
    return gens, names


def _commutant_stabilizer_k(cd, sigmas, t0_mats):
    """Preset internal algebra: commutant of spin annihilating the pairing."""
    q = cd.module_dim if not t0_mats else t0_mats[0].rows
    idx = [(i, j) for i in range(q) for j in range(q)]
    rows = []
    for s in sigmas:
        for r in range(q):
            for t in range(q):
                row = []
                for (i, j) in idx:
                    coeff = _ZERO
                    if i == r:
                        coeff += s.data[j][t]
                    if j == t:
                        coeff -= s.data[r][i]
                    row.append(coeff)
                rows.append(row)
    for tc in t0_mats:
        # k^T tc + tc k = 0
        for r in range(q):
            for t in range(q):
                row = []
                for (i, j) in idx:
                    coeff = _ZERO
                    if j == r:
                        coeff += tc.data[i][t]
                    if j == t:
                        coeff += tc.data[r][i]
                    row.append(coeff)
                rows.append(row)
    from sgtc.exact import kernel_basis

    ker = kernel_basis(Matrix(rows))
    gens = []
    for k in range(ker.dim):
        vec = ker.basis.col(k)
        gens.append(Matrix([[vec[i * q + j] for j in range(q)] for i in range(q)]))
    names = [f"k{k+1}" for k in range(len(gens))]
    return gens, names


def s_variants_3d():
    """Spin-invariant subspaces of Hom(R^3, R^2) for the three-dimensional
    model: full (6), z-type (2), traceless (4) and zero, with
    full = z_type + traceless as a direct sum."""
    cd = _cl.build_clifford(2, 1)
    mats = _cl.t0_bilinears(cd)
    sym_pairs = [(0, 0), (0, 1), (1, 1)]
    # pairing matrix: column (alpha<=beta) -> vector over R^3
    pair_cols = []
    for (al, be) in sym_pairs:
        pair_cols.append([mats[c].data[al][be] for c in range(3)])
    pairing = Matrix.from_cols(pair_cols, 3)
    pairing_inv = inverse(pairing)

    def from_sym_map(values):
        # values[(al, be)] = image vector in R^2 of the symmetric pair
        m_cols = []
        for k in range(3):
            coeffs = pairing_inv.col(k)  # e_k as a symmetric-pair combination
            vec = [_ZERO, _ZERO]
            for coef, (al, be) in zip(coeffs, sym_pairs):
                if coef:
                    v = values[(al, be)]
                    vec = [a + coef * b for a, b in zip(vec, v)]
            m_cols.append(vec)
        return Matrix.from_cols(m_cols, 2)

    full = [_unit(2, 3, a, b) for a in range(2) for b in range(3)]
    z_type = []
    for z in range(2):
        values = {}
        for (al, be) in sym_pairs:
            v = [_ZERO, _ZERO]
            if al == z:
                v[be] += _ONE
            if be == z:
                v[al] += _ONE
            values[(al, be)] = v
        z_type.append(from_sym_map(values))
    # traceless: basis of the kernel of M -> (v -> Tr(w -> M(v o w)))
    from sgtc.exact import kernel_basis

    rows = []
    for gamma in range(2):
        row = []
        for (al, be) in sym_pairs:
            for comp in range(2):
                # component (al,be,comp) contributes to Tr at v = f_gamma:
                # sum_delta [M(gamma o delta)]_delta
                coeff = _ZERO
                for delta in range(2):
                    key = tuple(sorted((gamma, delta)))
                    if key == (al, be) and comp == delta:
                        coeff += _ONE
                row.append(coeff)
        rows.append(row)
    ker = kernel_basis(Matrix(rows))
    traceless = []
    for k in range(ker.dim):
        vec = ker.basis.col(k)
        values = {}
        for idx, (al, be) in enumerate(sym_pairs):
            values[(al, be)] = [vec[idx * 2], vec[idx * 2 + 1]]
        traceless.append(from_sym_map(values))
    return {"full": full, "z_type": z_type, "traceless": traceless, "zero": []}


def _s_basis_for(choice, p, q):
    if isinstance(choice, (list, tuple)):
        return "custom", [Matrix(m) for m in choice]
    if choice == "full":
        return "full", [_unit(q, p, a, b) for a in range(q) for b in range(p)]
    if choice == "zero":
        return "zero", []
    if choice in ("z_type", "traceless"):
        if (p, q) != (3, 2):
            raise ModelConfigError(
                f"/s_choice: {choice!r} is defined for the (3|2) model only"
            )
        return choice, s_variants_3d()[choice]
    raise ModelConfigError(f"/s_choice: unknown choice {choice!r}")


def build_model(row: TheoryRow, s_choice="full", k_data=None, chirality=None) -> GStructureModel:
    """Assemble the model of a catalog row.

    ``s_choice`` is "full", "zero", "z_type", "traceless" or an explicit
    list of q x p matrices; ``k_data`` overrides the preset internal algebra
    with explicit q x q generators.  ``chirality = (a, b)`` selects how many
    plus/minus chiral halves form the odd part when it is assembled.
    """
    notes = []
    cd = _cl.build_clifford(row.p_plus, row.p_minus)
    if chirality is None:
        chirality = _parse_chirality(row.n_label)
        if chirality is not None and cd.module_dim == row.q:
            chirality = None  # whole module already matches
    copies, labels = _assemble_odd(cd, row.q, chirality, notes)

    # flat torsion blocks; flip the chiral choice if the pairing dies on it
    blocks = _t0_blocks(cd, copies)
    if all(b.is_zero() for bs in blocks for b in bs) and len(copies) == 1:
        swap = {"plus": -1, "minus": 1}
        if labels[0] in swap:
            copies = [_cl.chiral_half_basis(cd, swap[labels[0]]).basis]
            labels = ["minus" if labels[0] == "plus" else "plus"]
            blocks = _t0_blocks(cd, copies)
            notes.append("chirality flipped: pairing vanished on requested half")
    if all(b.is_zero() for bs in blocks for b in bs):
        raise _cl.UnsupportedSignatureError(
            "flat torsion pairing vanishes on the assembled odd part"
        )

    rep = _cl.spin_generators(cd)
    half_dims = [u.cols for u in copies]
    sigmas = [
        _block_diag_copies([_restrict(u, s) for u in copies]) for s in rep.sigma
    ]
    vectors = list(rep.vector)
    spin_names = [f"spin{a+1}{b+1}" for (a, b) in rep.pairs]

    if k_data is not None:
        k_gens = [Matrix(m) for m in k_data]
        k_names = [f"k{i+1}" for i in range(len(k_gens))]
        preset = False
    elif len(copies) > 1:
        k_gens, k_names = _so_copy_generators(labels, half_dims)
        preset = bool(k_gens)
    elif row.n_label not in ("1",) and _parse_chirality(row.n_label) is None:
        t0_mats = [
            _block_diag_copies([blocks[c][i] for i in range(len(copies))])
            for c in range(cd.p)
        ]
        k_gens, k_names = _commutant_stabilizer_k(cd, sigmas, t0_mats)
        preset = bool(k_gens)
    else:
        k_gens, k_names = [], []
        preset = False
    if preset:
        notes.append("internal symmetry algebra is a preset, not source-specified")

    tag, s_basis = _s_basis_for(s_choice, row.p, row.q)

    W = SuperVectorSpace.make(row.p, row.q)
    vec_all = vectors + [Matrix.zeros(row.p, row.p) for _ in k_gens]
    sig_all = sigmas + list(k_gens)
    names_even = spin_names + list(k_names)
    check_invariant_subspace(s_basis, vec_all, sig_all, names_even)

    gens = [_cl.embed_even(v, s) for v, s in zip(vec_all, sig_all)]
    gens += [_cl.embed_odd(s, row.p, row.q) for s in s_basis]
    parities = [EVEN] * len(sig_all) + [ODD] * len(s_basis)
    names = names_even + [f"s{k+1}" for k in range(len(s_basis))]

    comps = {}
    off = 0
    t0_full = [[[_ZERO] * row.q for _ in range(row.q)] for _ in range(cd.p)]
    for i, d in enumerate(half_dims):
        for c in range(cd.p):
            blk = blocks[c][i]
            for a in range(d):
                for b in range(d):
                    t0_full[c][off + a][off + b] = blk.data[a][b]
        off += d
    for al in range(row.q):
        for be in range(row.q):
            for c in range(cd.p):
                v = t0_full[c][al][be]
                if v:
                    comps[(row.p + al, row.p + be, c)] = v
    torsion = GradedTensor((W, W), W, comps, symmetry="super_anti")

    s_units = {}
    if tag == "full":
        for a in range(row.q):
            for b in range(row.p):
                s_units[(a, b)] = len(sig_all) + a * row.p + b

    return GStructureModel(
        name=f"d{row.p}n{row.n_label}",
        W=W,
        gens=tuple(gens),
        parities=tuple(parities),
        gen_names=tuple(names),
        s_choice=tag,
        s_basis=tuple(s_basis),
        flat_torsion=torsion,
        clifford=cd,
        row=row,
        s_units=s_units,
        k_dim=len(k_gens),
        preset_k=preset,
        notes=tuple(notes),
    )


def classical_models(n: int):
    """O(n) in gl(n) and the real form of U(n) in gl(2n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    Wo = SuperVectorSpace.make(n, 0)
    o_gens = []
    o_names = []
    for a in range(n):
        for b in range(a + 1, n):
            o_gens.append(_unit(n, n, a, b) - _unit(n, n, b, a))
            o_names.append(f"r{a+1}{b+1}")
    zero_o = GradedTensor((Wo, Wo), Wo, {}, symmetry="super_anti")
    orthogonal = GStructureModel(
        name=f"o{n}",
        W=Wo,
        gens=tuple(o_gens),
        parities=(EVEN,) * len(o_gens),
        gen_names=tuple(o_names),
        s_choice="zero",
        s_basis=(),
        flat_torsion=zero_o,
    )

    Wu = SuperVectorSpace.make(2 * n, 0)
    u_gens = []
    u_names = []

    def real_form(a_mat, b_mat):
        rows = [[_ZERO] * (2 * n) for _ in range(2 * n)]
        for i in range(n):
            for j in range(n):
                rows[i][j] = a_mat[i][j]
                rows[i][n + j] = -b_mat[i][j]
                rows[n + i][j] = b_mat[i][j]
                rows[n + i][n + j] = a_mat[i][j]
        return Matrix(rows)

    zero = [[_ZERO] * n for _ in range(n)]
    for a in range(n):
        b_mat = [r[:] for r in zero]
        b_mat[a][a] = _ONE
        u_gens.append(real_form(zero, b_mat))
        u_names.append(f"u{a+1}")
    for a in range(n):
        for b in range(a + 1, n):
            a_mat = [r[:] for r in zero]
            a_mat[a][b] = _ONE
            a_mat[b][a] = -_ONE
            u_gens.append(real_form(a_mat, zero))
            u_names.append(f"r{a+1}{b+1}")
            b_mat = [r[:] for r in zero]
            b_mat[a][b] = _ONE
            b_mat[b][a] = _ONE
            u_gens.append(real_form(zero, b_mat))
            u_names.append(f"s{a+1}{b+1}")
    zero_u = GradedTensor((Wu, Wu), Wu, {}, symmetry="super_anti")
    unitary = GStructureModel(
        name=f"u{n}",
        W=Wu,
        gens=tuple(u_gens),
        parities=(EVEN,) * len(u_gens),
        gen_names=tuple(u_names),
        s_choice="zero",
        s_basis=(),
        flat_torsion=zero_u,
    )
    return {"orthogonal": orthogonal, "unitary": unitary}


def complex_structure(n):
    """J on R^2n in the block realification layout."""
    rows = [[_ZERO] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        rows[i][n + i] = -_ONE
        rows[n + i][i] = _ONE
    return Matrix(rows)


def superkahler_model_n1(s_choice="full") -> GStructureModel:
    """The one-complex-dimension superKahler model on R^(2|4).

    The even algebra is spanned by the real scaling with opposite weights
    on the two odd form-degree components, the chiral rotation acting as a
    common complex phase on the odd part, and the unitary rotation with
    opposite weights on the odd components and a doubled rotation on W_even.
    S is either all of Hom(R^2, R^4) or its complex-linear subspace.
    """
    p, q = 2, 4
    W = SuperVectorSpace.make(p, q)
    j2 = complex_structure(1)
    zero2 = Matrix.zeros(2, 2)

    def odd_block(m00, m11):
        from sgtc.exact import block_diag

        return block_diag([m00, m11])

    scale = _cl.embed_even(zero2, odd_block(Matrix.identity(2), Matrix.identity(2).scale(-1)))
    chiral = _cl.embed_even(zero2, odd_block(j2, j2))
    unitary = _cl.embed_even(j2.scale(2), odd_block(j2, j2.scale(-1)))
    even_gens = [scale, chiral, unitary]
    even_names = ["scale", "chiral", "unitary"]

    if s_choice == "full":
        s_basis = [_unit(q, p, a, b) for a in range(q) for b in range(p)]
        tag = "full"
    elif s_choice == "clinear":
        # s J2 = J4 s, a real 4-dimensional space
        from sgtc.exact import kernel_basis

        j4 = odd_block(j2, j2)
        idx = [(i, j) for i in range(q) for j in range(p)]
        rows = []
        for r in range(q):
            for t in range(p):
                row = []
                for (i, j) in idx:
                    coeff = _ZERO
                    if i == r:
                        coeff += j2.data[j][t]
                    if j == t:
                        coeff -= j4.data[r][i]
                    row.append(coeff)
                rows.append(row)
        ker = kernel_basis(Matrix(rows))
        s_basis = []
        for k in range(ker.dim):
            vec = ker.basis.col(k)
            s_basis.append(Matrix([[vec[i * p + j] for j in range(p)] for i in range(q)]))
        tag = "clinear"
    elif s_choice == "zero":
        s_basis = []
        tag = "zero"
    else:
        raise ModelConfigError(f"/s_choice: unknown superKahler choice {s_choice!r}")

    vec_all = [Matrix.zeros(p, p), Matrix.zeros(p, p), j2.scale(2)]
    sig_all = [
        odd_block(Matrix.identity(2), Matrix.identity(2).scale(-1)),
        odd_block(j2, j2),
        odd_block(j2, j2.scale(-1)),
    ]
    check_invariant_subspace(s_basis, vec_all, sig_all, even_names)

    gens = list(even_gens) + [_cl.embed_odd(s, p, q) for s in s_basis]
    parities = [EVEN] * 3 + [ODD] * len(s_basis)
    names = even_names + [f"s{k+1}" for k in range(len(s_basis))]

    # pairing: product of the degree-zero component with the conjugate of
    # the degree-one component, landing in W_even = C
    comps = {}
    for (a, b, vec) in (
        (0, 2, (1, 0)),
        (0, 3, (0, -1)),
        (1, 2, (0, 1)),
        (1, 3, (1, 0)),
    ):
        for c, v in enumerate(vec):
            if v:
                comps[(p + a, p + b, c)] = Fraction(v)
                comps[(p + b, p + a, c)] = Fraction(v)
    torsion = GradedTensor((W, W), W, comps, symmetry="super_anti")

    s_units = {}
    if tag == "full":
        for a in range(q):
            for b in range(p):
                s_units[(a, b)] = 3 + a * p + b

    return GStructureModel(
        name=f"sk1_{tag}",
        W=W,
        gens=tuple(gens),
        parities=tuple(parities),
        gen_names=tuple(names),
        s_choice=tag,
        s_basis=tuple(s_basis),
        flat_torsion=torsion,
        s_units=s_units,
    )


def super_poincare_data(model: GStructureModel) -> GroupData:
    """Translation extension of the model's even algebra acting on the odd
    module, with the flat torsion as the symmetric pairing."""
    p = model.W.p
    q = model.W.q
    n_even = model.g_dim - len(model.s_basis)
    vector_gens = []
    spinor_gens = []
    for k in range(n_even):
        g = model.gens[k]
        vector_gens.append(
            Matrix([[g.data[i][j] for j in range(p)] for i in range(p)])
        )
        spinor_gens.append(
            Matrix([[g.data[p + i][p + j] for j in range(q)] for i in range(q)])
        )
    t0_comps = {}
    for (i, j, c), v in model.flat_torsion.items():
        al, be = i - p, j - p
        t0_comps.setdefault((al, be), [_ZERO] * p)
        t0_comps[(al, be)][c] += v
    return poincare_group_data(
        f"poincare[{model.name}]", vector_gens, spinor_gens, t0_comps, p, q
    )


# ---------------------------------------------------------------------------
# Model configuration files
# ---------------------------------------------------------------------------

_SCHEMA_PATH = Path(__file__).parent / "schemas" / "model_config.json"


def config_schema():
    return json.loads(_SCHEMA_PATH.read_text())


def _rational_matrix(data, path):
    try:
        return Matrix([[Fraction(x) for x in row] for row in data])
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ModelConfigError(f"{path}: bad rational entry ({exc})") from None


def load_model_config(path) -> GStructureModel:
    """Build a model from a JSON config; schema errors carry JSON pointers."""
    import jsonschema

    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ModelConfigError(f"/: not valid JSON ({exc})") from None
    validator = jsonschema.Draft202012Validator(config_schema())
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        pointer = "/" + "/".join(str(x) for x in e.absolute_path)
        raise ModelConfigError(f"{pointer}: {e.message}")
    p_plus, p_minus = raw["signature"]
    q = raw["q"]
    p = p_plus + p_minus
    row = TheoryRow(p, p_plus, p_minus, q, raw.get("n_label", "1"))
    s_choice = raw.get("s_choice", "full")
    if isinstance(s_choice, dict):
        s_choice = [
            _rational_matrix(m, f"/s_choice/basis/{i}")
            for i, m in enumerate(s_choice["basis"])
        ]
        for i, m in enumerate(s_choice):
            if m.shape != (q, p):
                raise ModelConfigError(
                    f"/s_choice/basis/{i}: expected a {q}x{p} matrix"
                )
    k_data = None
    if "k" in raw:
        k_data = [
            _rational_matrix(m, f"/k/generators/{i}")
            for i, m in enumerate(raw["k"]["generators"])
        ]
        for i, m in enumerate(k_data):
            if m.shape != (q, q):
                raise ModelConfigError(f"/k/generators/{i}: expected {q}x{q}")
    chirality = tuple(raw["chirality"]) if "chirality" in raw else None
    try:
        model = build_model(row, s_choice=s_choice, k_data=k_data, chirality=chirality)
    except NotInvariantError as exc:
        raise ModelConfigError(f"/s_choice: {exc}") from None
    if "name" in raw:
        model.name = raw["name"]
    return model
