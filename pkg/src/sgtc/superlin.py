"""Graded (super) vector spaces, Koszul signs, wedge and Hom constructions.

Sign conventions
----------------
All sign rules used anywhere in the package are fixed here and nowhere else.

* Transposing two homogeneous objects of parities s, t across each other
  costs the Koszul factor (-1)^(s*t).
* A graded-alternating k-form picks up the factor -(-1)^(s*t) under the
  swap of two adjacent arguments; so even indices never repeat, odd indices
  may (wedge of odd vectors is symmetric).  Canonical wedge basis tuples are
  weakly increasing, strictly at even indices.
* The torsion-change differential of a Hom(W, g)-valued object is, on
  homogeneous vectors,

      (d phi)(v, w) = phi(v).w - (-1)^(|v||w|) phi(w).v

  and more generally, for a g-valued graded-alternating j-form psi,

      (d psi)(v_0 .. v_j) =
          sum_i (-1)^(j-i) (-1)^(|v_i|(|v_{i+1}|+..+|v_j|))
                psi(v_0 .. v_i^ .. v_j)(v_i),

  i.e. each argument is carried to the last slot and applied there.
* gl(W) acts on multilinear maps by the graded derivation rule

      (x.T)(v_1 .. v_k) = x(T(v_1 .. v_k))
          - sum_i (-1)^(|x|(|T|+|v_1|+..+|v_{i-1}|)) T(v_1 .. x v_i .. v_k)

  and on Hom(W, g) through the adjoint on the target:

      (x.phi)(v) = [x, phi(v)] - (-1)^(|x||phi|) phi(x v).

These choices make the differential parity-preserving and equivariant for
the derivation action; the test suite checks both exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sgtc.exact import Matrix, scalar

EVEN, ODD = 0, 1

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class SuperVectorSpace:
    """Finite-dimensional Z/2-graded vector space with a labeled basis."""

    labels: tuple
    parities: tuple

    def __post_init__(self):
        if len(self.labels) != len(self.parities):
            raise ValueError("labels and parities differ in length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate basis labels")
        if any(p not in (EVEN, ODD) for p in self.parities):
            raise ValueError("parities must be 0 or 1")

    @classmethod
    def make(cls, p, q, even_prefix="e", odd_prefix="f"):
        """Standard space with p even then q odd basis vectors."""
        labels = tuple(f"{even_prefix}{i+1}" for i in range(p)) + tuple(
            f"{odd_prefix}{a+1}" for a in range(q)
        )
        return cls(labels, (EVEN,) * p + (ODD,) * q)

    @property
    def dim(self):
        return len(self.labels)

    @property
    def p(self):
        return sum(1 for x in self.parities if x == EVEN)

    @property
    def q(self):
        return sum(1 for x in self.parities if x == ODD)

    def parity(self, i):
        return self.parities[i]

    def label(self, i):
        return self.labels[i]


def koszul_sign(perm, parities) -> int:
    """Koszul factor for reordering homogeneous objects.

    ``perm[k]`` is the original position of the object landing at slot k.
    The factor is -1 raised to the number of odd-odd inversions.
    """
    perm = list(perm)
    parities = list(parities)
    if len(perm) != len(parities):
        raise ValueError("permutation and parity list differ in length")
    if sorted(perm) != list(range(len(perm))):
        raise ValueError("not a permutation")
    odd_inversions = 0
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b] and parities[perm[a]] and parities[perm[b]]:
                odd_inversions += 1
    return -1 if odd_inversions % 2 else 1


def sort_wedge_tuple(indices, parities):
    """Canonicalize a wedge index tuple.

    Returns ``(sorted_tuple, sign)`` or ``(None, 0)`` when the wedge value
    is forced to vanish (repeated even index).  The sign accounts for both
    alternation and Koszul factors: an adjacent swap contributes +1 when
    both entries are odd and -1 otherwise.
    """
    idx = list(indices)
    sign = 1
    for a in range(1, len(idx)):
        b = a
        while b > 0 and idx[b - 1] > idx[b]:
            if not (parities[idx[b - 1]] and parities[idx[b]]):
                sign = -sign
            idx[b - 1], idx[b] = idx[b], idx[b - 1]
            b -= 1
    for a in range(1, len(idx)):
        if idx[a - 1] == idx[a] and parities[idx[a]] == EVEN:
            return None, 0
    return tuple(idx), sign


class WedgeSpace:
    """Super exterior power of a SuperVectorSpace with a canonical basis.

    Degree j basis tuples are weakly increasing index tuples, strictly
    increasing at even indices; so the even part of degree 2 is
    wedge^2(even) + sym^2(odd) and the odd part is even x odd.
    """

    __slots__ = ("base", "degree", "tuples", "_pos", "parities", "labels")

    def __init__(self, base: SuperVectorSpace, degree: int):
        if degree < 1:
            raise ValueError("degree must be >= 1")
        self.base = base
        self.degree = degree
        tuples = []

        def extend(prefix, start):
            if len(prefix) == degree:
                tuples.append(tuple(prefix))
                return
            for i in range(start, base.dim):
                if prefix and prefix[-1] == i and base.parity(i) == EVEN:
                    continue
                extend(prefix + [i], i)

        extend([], 0)
        self.tuples = tuple(tuples)
        self._pos = {t: k for k, t in enumerate(self.tuples)}
        self.parities = tuple(
            sum(base.parity(i) for i in t) % 2 for t in self.tuples
        )
        self.labels = tuple(
            "^".join(base.label(i) for i in t) for t in self.tuples
        )

    @property
    def dim(self):
        return len(self.tuples)

    def parity(self, k):
        return self.parities[k]

    def label(self, k):
        return self.labels[k]

    def canonicalize(self, indices):
        """Position and sign of an arbitrary index tuple, or (None, 0)."""
        t, sign = sort_wedge_tuple(indices, self.base.parities)
        if t is None:
            return None, 0
        return self._pos[t], sign


def super_exterior_square(space: SuperVectorSpace) -> WedgeSpace:
    """The super wedge square; dim = p(p-1)/2 + pq + q(q+1)/2."""
    return WedgeSpace(space, 2)


@dataclass(frozen=True)
class HomSpace:
    """Flattening conventions for Hom(source, target).

    Flat index = source_index * dim(target) + target_index; both factors
    may be SuperVectorSpaces or WedgeSpaces.
    """

    source: object
    target: object

    @property
    def dim(self):
        return self.source.dim * self.target.dim

    def flat(self, a, b):
        return a * self.target.dim + b

    def unflat(self, k):
        return divmod(k, self.target.dim)

    def parity(self, k):
        a, b = self.unflat(k)
        return (self.source.parity(a) + self.target.parity(b)) % 2


SYMMETRY_TAGS = ("none", "super_anti", "super_sym", "pair_exchange")


class GradedTensor:
    """Exact multi-index array with graded source slots and one target slot.

    Components are stored for every ordered index tuple; the declared
    symmetry (for 2 source slots) is validated at construction:

    * ``super_anti``:     T(v,w) = -(-1)^(|v||w|) T(w,v)
    * ``super_sym``:      T(v,w) = +(-1)^(|v||w|) T(w,v)
    * ``pair_exchange``:  T(v,w) = T(w,v) with no sign
    """

    __slots__ = ("sources", "target", "symmetry", "comps")

    def __init__(self, sources, target, comps, symmetry="none", validate=True):
        self.sources = tuple(sources)
        self.target = target
        if symmetry not in SYMMETRY_TAGS:
            raise ValueError(f"unknown symmetry tag {symmetry!r}")
        if symmetry != "none" and len(self.sources) != 2:
            raise ValueError("pair symmetry needs exactly two source slots")
        self.symmetry = symmetry
        self.comps = {
            k: scalar(v) for k, v in comps.items() if v
        }
        if validate:
            self._validate()

    def _validate(self):
        for key in self.comps:
            if len(key) != len(self.sources) + 1:
                raise ValueError(f"bad index tuple {key}")
        if self.symmetry != "none":
            s0, s1 = self.sources
            if s0 is not s1 and s0 != s1:
                raise ValueError("symmetric slots must share a space")
            for (i, j, b), v in self.comps.items():
                w = self.get(j, i, b)
                if self.symmetry == "super_anti":
                    expect = -v if not (s0.parity(i) and s0.parity(j)) else v
                elif self.symmetry == "super_sym":
                    expect = v if not (s0.parity(i) and s0.parity(j)) else -v
                else:
                    expect = v
                if w != expect:
                    raise ValueError(
                        f"components violate {self.symmetry} at {(i, j, b)}"
                    )
        par = self.parity()
        if par is not None:
            for key in self.comps:
                if self._key_parity(key) != par:
                    raise ValueError("tensor is not parity-homogeneous")

    def _key_parity(self, key):
        p = self.target.parity(key[-1])
        for slot, i in zip(self.sources, key[:-1]):
            p += slot.parity(i)
        return p % 2

    def parity(self):
        """Overall parity; None for the zero or a non-homogeneous tensor."""
        par = None
        for key in self.comps:
            p = self._key_parity(key)
            if par is None:
                par = p
            elif par != p:
                return None
        return par

    def key_parity(self, key):
        return self._key_parity(key)

    def get(self, *key):
        return self.comps.get(tuple(key), _ZERO)

    def items(self):
        return self.comps.items()

    def is_zero(self):
        return not self.comps

    def __eq__(self, other):
        return (
            isinstance(other, GradedTensor)
            and self.sources == other.sources
            and self.comps == other.comps
        )

    def __hash__(self):
        raise TypeError("GradedTensor is not hashable")

    def add(self, other):
        comps = dict(self.comps)
        for k, v in other.comps.items():
            comps[k] = comps.get(k, _ZERO) + v
        sym = self.symmetry if self.symmetry == other.symmetry else "none"
        return GradedTensor(
            self.sources, self.target, comps, symmetry=sym, validate=False
        )

    def scale(self, s):
        s = scalar(s)
        return GradedTensor(
            self.sources,
            self.target,
            {k: s * v for k, v in self.comps.items()},
            symmetry=self.symmetry,
            validate=False,
        )

    def sub(self, other):
        return self.add(other.scale(-1))


def project_pair_symmetry(t: GradedTensor, kind: str) -> GradedTensor:
    """Projection of a 2-slot tensor onto a symmetry type (idempotent)."""
    if len(t.sources) != 2:
        raise ValueError("need a 2-slot tensor")
    s0 = t.sources[0]
    half = Fraction(1, 2)
    comps = {}
    for (i, j, b), v in t.comps.items():
        koszul = -1 if (s0.parity(i) and s0.parity(j)) else 1
        mirror = t.get(j, i, b)
        if kind == "super_anti":
            val = half * (v - koszul * mirror)
        elif kind == "super_sym":
            val = half * (v + koszul * mirror)
        elif kind == "pair_exchange":
            val = half * (v + mirror)
        else:
            raise ValueError(f"unknown projection {kind!r}")
        if val:
            comps[(i, j, b)] = val
    return GradedTensor(t.sources, t.target, comps, symmetry=kind, validate=False)


def hom2_tensor_from_coords(W, pair_space: WedgeSpace, hom: HomSpace, vec):
    """Tensor in Hom(wedge^2 W, W) from flat coordinates over ``hom``."""
    comps = {}
    for k, val in enumerate(vec):
        if not val:
            continue
        pk, b = hom.unflat(k)
        i, j = pair_space.tuples[pk]
        comps[(i, j, b)] = comps.get((i, j, b), _ZERO) + scalar(val)
        if i != j:
            sgn = 1 if (W.parity(i) and W.parity(j)) else -1
            comps[(j, i, b)] = comps.get((j, i, b), _ZERO) + sgn * scalar(val)
    comps = {k: v for k, v in comps.items() if v}
    return GradedTensor((W, W), W, comps, symmetry="super_anti", validate=False)


def hom_flatten(t: GradedTensor, hom: HomSpace):
    """Flat coordinate vector of a tensor with respect to a HomSpace.

    For a 1-slot tensor the source must be the Hom source space itself; for
    a 2-slot super-antisymmetric tensor the Hom source must be the wedge
    square of the slot space.
    """
    vec = [_ZERO] * hom.dim
    if len(t.sources) == 1:
        if t.sources[0].dim != hom.source.dim:
            raise ValueError("slot does not match Hom source")
        for (a, b), v in t.comps.items():
            vec[hom.flat(a, b)] = v
        return vec
    if len(t.sources) == 2 and isinstance(hom.source, WedgeSpace):
        pair_space = hom.source
        for k, tup in enumerate(pair_space.tuples):
            i, j = tup
            for b in range(hom.target.dim):
                v = t.get(i, j, b)
                if v:
                    vec[hom.flat(k, b)] = v
        return vec
    raise ValueError("unsupported tensor/HomSpace combination")


def hom_unflatten(vec, hom: HomSpace, W=None):
    """Inverse of hom_flatten."""
    if isinstance(hom.source, WedgeSpace):
        if W is None:
            W = hom.source.base
        return hom2_tensor_from_coords(W, hom.source, hom, vec)
    comps = {}
    for k, val in enumerate(vec):
        if val:
            a, b = hom.unflat(k)
            comps[(a, b)] = scalar(val)
    return GradedTensor((hom.source,), hom.target, comps)


def induced_wedge_map(pair_space: WedgeSpace, a: Matrix) -> Matrix:
    """Map on the wedge square induced by a parity-preserving map on W."""
    W = pair_space.base
    n = W.dim
    if a.shape != (n, n):
        raise ValueError("matrix does not act on the base space")
    cols = []
    for (i, j) in pair_space.tuples:
        col = [_ZERO] * pair_space.dim
        for c in range(n):
            aci = a.data[c][i]
            if not aci:
                continue
            for d in range(n):
                adj = a.data[d][j]
                if not adj:
                    continue
                pos, sgn = pair_space.canonicalize((c, d))
                if pos is None:
                    continue
                col[pos] += sgn * aci * adj
        cols.append(col)
    return Matrix.from_cols(cols, pair_space.dim)
