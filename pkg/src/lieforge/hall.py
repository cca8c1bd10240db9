"""Hall bases and structure constants of free k-step nilpotent algebras.

Basis words are binary bracketing trees over the generators.  A pair
(u, v) is standard when u > v in the Hall order and, if u = (w, z),
additionally v >= z.  Layer d is ordered lexicographically by the
orders of the two factors; across layers, lower degree comes first.
Given the generator order the basis is uniquely determined.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

from .core import LieAlgebra, check_cap
from .errors import LieforgeError


class HallWord:
    """A bracketing tree: either a generator leaf or a pair of subwords.

    ``key`` is a canonical sort key implementing the Hall order: leaves
    compare by generator index, composite words by (degree, left key,
    right key).  Words of equal degree always have comparable keys.
    """

    __slots__ = ("gen", "left", "right", "degree", "multidegree", "key")

    def __init__(self, gen=None, left=None, right=None, m=None):
        if gen is not None:
            object.__setattr__(self, "gen", gen)
            object.__setattr__(self, "left", None)
            object.__setattr__(self, "right", None)
            object.__setattr__(self, "degree", 1)
            md = [0] * m
            md[gen] = 1
            object.__setattr__(self, "multidegree", tuple(md))
            object.__setattr__(self, "key", (1, gen))
        else:
            object.__setattr__(self, "gen", None)
            object.__setattr__(self, "left", left)
            object.__setattr__(self, "right", right)
            object.__setattr__(self, "degree", left.degree + right.degree)
            object.__setattr__(self, "multidegree", tuple(
                a + b for a, b in zip(left.multidegree, right.multidegree)))
            object.__setattr__(self, "key", (self.degree, left.key, right.key))

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("HallWord is immutable")

    def is_leaf(self) -> bool:
        return self.gen is not None

    def __eq__(self, other) -> bool:
        return isinstance(other, HallWord) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __lt__(self, other: "HallWord") -> bool:
        return self.key < other.key

    def __le__(self, other: "HallWord") -> bool:
        return self.key <= other.key

    def label(self) -> str:
        if self.is_leaf():
            return f"x{self.gen + 1}"
        return f"[{self.left.label()},{self.right.label()}]"

    def __repr__(self) -> str:
        return f"HallWord({self.label()})"


class HallBasis:
    """Layers B_1, ..., B_k of the Hall basis on m ordered generators."""

    def __init__(self, m: int, k: int):
        if m < 2:
            raise LieforgeError("a free algebra needs at least 2 generators")
        if k < 1:
            raise LieforgeError("nilpotency class must be >= 1")
        self.m = m
        self.k = k
        layers: list[list[HallWord]] = [[HallWord(gen=i, m=m) for i in range(m)]]
        for degree in range(2, k + 1):
            layer = []
            for i in range(1, degree):
                j = degree - i
                for u in layers[i - 1]:
                    for v in layers[j - 1]:
                        if u.key <= v.key:
                            continue
                        if not u.is_leaf() and v.key < u.right.key:
                            continue
                        layer.append(HallWord(left=u, right=v))
            layer.sort(key=lambda w: w.key)
            layers.append(layer)
        self.layers = layers
        self.words: list[HallWord] = [w for layer in layers for w in layer]
        self.index: dict = {w.key: pos for pos, w in enumerate(self.words)}
        self._rewrite_cache: dict = {}

    @property
    def dim(self) -> int:
        return len(self.words)

    def layer_sizes(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.layers)

    def position(self, w: HallWord) -> int:
        return self.index[w.key]

    def __iter__(self) -> Iterator[HallWord]:
        return iter(self.words)


def hall_basis(m: int, k: int) -> HallBasis:
    return HallBasis(m, k)


def left_normed_word(basis: HallBasis, k: int) -> HallWord:
    """The chain word [[..[[x2, x1], x1]..], x1] of degree k.

    It has multidegree (k-1, 1, 0, ...) and lies in layer k; it is the
    only layer-k basis word that the bracket of lower-layer basis words
    can reach, and only via the pair (chain word of degree k-1, x1).
    """
    if k < 2 or k > basis.k:
        raise LieforgeError(f"degree {k} out of range 2..{basis.k}")
    x1 = basis.layers[0][0]
    x2 = basis.layers[0][1]
    w = HallWord(left=x2, right=x1)
    for _ in range(k - 2):
        w = HallWord(left=w, right=x1)
    if w.key not in basis.index:
        raise LieforgeError("chain word missing from basis")  # pragma: no cover
    return w


def _combo_add(acc: dict, combo: dict, scale: Fraction):
    for w, c in combo.items():
        new = acc.get(w, Fraction(0)) + scale * c
        if new:
            acc[w] = new
        elif w in acc:
            del acc[w]


def normalize(basis: HallBasis, u: HallWord, v: HallWord) -> dict[HallWord, Fraction]:
    """The class of [u, v] in the truncated free algebra, in basis words.

    u and v must be standard (members of the basis).  Degrees above the
    nilpotency class are dropped eagerly; this is sound because the
    truncation ideal is homogeneous.
    """
    if u.key not in basis.index or v.key not in basis.index:
        raise LieforgeError("normalize expects standard Hall words")
    return _rewrite(basis, u, v)


def _rewrite(basis: HallBasis, u: HallWord, v: HallWord) -> dict[HallWord, Fraction]:
    if u.degree + v.degree > basis.k:
        return {}
    if u.key == v.key:
        return {}
    cached = basis._rewrite_cache.get((u.key, v.key))
    if cached is not None:
        return cached
    if u.key < v.key:
        result = {w: -c for w, c in _rewrite(basis, v, u).items()}
    elif u.is_leaf() or u.right.key <= v.key:
        word = HallWord(left=u, right=v)
        assert word.key in basis.index
        result = {word: Fraction(1)}
    else:
        # u = (w, z) with v < z: Jacobi gives [[w,z],v] = [[w,v],z] + [w,[z,v]].
        w, z = u.left, u.right
        acc: dict[HallWord, Fraction] = {}
        for word, c in _rewrite(basis, w, v).items():
            _combo_add(acc, _rewrite(basis, word, z), c)
        for word, c in _rewrite(basis, z, v).items():
            _combo_add(acc, _rewrite(basis, w, word), c)
        result = acc
    basis._rewrite_cache[(u.key, v.key)] = result
    return result


def free_nilpotent(m: int, k: int) -> LieAlgebra:
    """The free k-step nilpotent algebra on m generators, in its Hall basis."""
    sizes = necklace_layer_sizes(m, k)
    n = sum(sizes)
    check_cap(n * n * (n - 1) // 2, f"free nilpotent algebra of dimension {n}")
    basis = hall_basis(m, k)
    assert basis.layer_sizes() == tuple(sizes)
    table = {}
    for i in range(n):
        for j in range(i + 1, n):
            combo = _rewrite(basis, basis.words[i], basis.words[j])
            if combo:
                value = [Fraction(0)] * n
                for word, c in combo.items():
                    value[basis.position(word)] = c
                table[(i, j)] = value
    return LieAlgebra(
        n, table,
        names=[w.label() for w in basis.words],
        degrees=[w.degree for w in basis.words])


def _mobius(n: int) -> int:
    if n == 1:
        return 1
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def necklace_layer_sizes(m: int, k: int) -> tuple[int, ...]:
    """Per-degree dimensions via the necklace-counting formula.

    Layer d has size (1/d) * sum over divisors e of d of mobius(e) *
    m^(d/e).  Used as an independent cross-check of the generated
    bases.
    """
    out = []
    for d in range(1, k + 1):
        total = sum(_mobius(e) * m ** (d // e) for e in range(1, d + 1) if d % e == 0)
        assert total % d == 0
        out.append(total // d)
    return tuple(out)
