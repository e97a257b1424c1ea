"""GF(2) linear algebra: alternating pairings, quadratic forms, their isometry
groups, multiset orbits, the 2-torsion flag of an abelian group and symplectic
lifting over Z/2^m.

Vectors of GF(2)^n are plain ints (bit i is coordinate i).  A linear map is a
tuple of basis images.  Groups are kept as generator lists of permutations of
a carrier set, which is enough for orbit computations; orders are delegated to
sympy's Schreier-Sims implementation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from typing import Callable, Optional, Sequence

from sympy.combinatorics import Permutation, PermutationGroup

EXHAUSTIVE_DIM = 4
MAX_DIM = 8


class CapacityError(ValueError):
    pass


def popcount(x: int) -> int:
    return bin(x).count("1")


def dot(x: int, y: int) -> int:
    return popcount(x & y) & 1


def apply_linear(images: Sequence[int], x: int) -> int:
    out = 0
    i = 0
    while x:
        if x & 1:
            out ^= images[i]
        x >>= 1
        i += 1
    return out


def rank(vectors: Sequence[int]) -> int:
    return len(row_basis(vectors))


def row_basis(vectors: Sequence[int]) -> list[int]:
    """Echelon basis of the span (pivot = highest bit)."""
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return basis


def in_span(basis: Sequence[int], v: int) -> bool:
    for b in sorted(basis, reverse=True):
        v = min(v, v ^ b)
    return v == 0


def span(vectors: Sequence[int]) -> list[int]:
    out = {0}
    for v in row_basis(vectors):
        out |= {x ^ v for x in out}
    return sorted(out)


# ---------------------------------------------------------------- spaces

@dataclass(frozen=True)
class QuadSpace2:
    """GF(2)^dim with an alternating Gram matrix and optional quadratic form.

    ``pairing`` holds the Gram rows as bitmasks; ``quad`` is a value table of
    length 2^dim or None.
    """
    dim: int
    pairing: tuple
    quad: Optional[tuple] = None

    def __post_init__(self):
        n = self.dim
        if len(self.pairing) != n:
            raise ValueError("pairing has wrong size")
        for i in range(n):
            if (self.pairing[i] >> i) & 1:
                raise ValueError("pairing is not alternating")
            for j in range(n):
                if ((self.pairing[i] >> j) & 1) != ((self.pairing[j] >> i) & 1):
                    raise ValueError("pairing is not symmetric")
        if self.quad is not None:
            if len(self.quad) != 1 << n or self.quad[0] != 0:
                raise ValueError("bad quadratic form table")
            pol = polarize_table(self.quad, n)
            if pol != tuple(self.pairing):
                raise ValueError("quadratic form does not polarize to the pairing")

    def b(self, x: int, y: int) -> int:
        return dot(apply_linear(self.pairing, x), y)

    def Q(self, x: int) -> int:
        if self.quad is None:
            raise ValueError("space carries no quadratic form")
        return self.quad[x]

    def radical(self) -> list[int]:
        return [x for x in range(1 << self.dim)
                if apply_linear(self.pairing, x) == 0]

    def is_nondegenerate(self) -> bool:
        return rank(self.pairing) == self.dim

    def points(self) -> list[int]:
        return list(range(1 << self.dim))


def polarize_table(quad: Sequence[int], dim: int) -> tuple:
    rows = []
    for i in range(dim):
        row = 0
        for j in range(dim):
            if i != j:
                x, y = 1 << i, 1 << j
                if quad[x ^ y] ^ quad[x] ^ quad[y]:
                    row |= 1 << j
        rows.append(row)
    return tuple(rows)


def polarize(quad: Sequence[int], dim: int) -> QuadSpace2:
    """The alternating pairing Q(x+y)-Q(x)-Q(y), as a space without form."""
    if quad[0] != 0:
        raise ValueError("Q(0) must be 0")
    return QuadSpace2(dim, polarize_table(quad, dim))


def quad_from_function(fn: Callable[[int], int], dim: int) -> QuadSpace2:
    table = tuple(fn(x) & 1 for x in range(1 << dim))
    return QuadSpace2(dim, polarize_table(table, dim), table)


def standard_symplectic(m: int) -> QuadSpace2:
    """Hyperbolic pairing on GF(2)^{2m} with coordinates (i_1,j_1,...,i_m,j_m)."""
    rows = [1 << (i ^ 1) for i in range(2 * m)]
    return QuadSpace2(2 * m, tuple(rows))


def hyperbolic_quad(m: int, arf_sign: int = 1) -> QuadSpace2:
    """Q = i_1 j_1 + ... + i_m j_m, plus i_m^2 + j_m^2 when arf_sign is -1.

    Coordinates are interleaved: bit 2r is i_{r+1}, bit 2r+1 is j_{r+1}.
    """
    if arf_sign < 0 and m == 0:
        raise ValueError("no form with Arf -1 in dimension 0")

    def q(x):
        val = sum((x >> (2 * r)) & (x >> (2 * r + 1)) & 1 for r in range(m))
        if arf_sign < 0:
            val += ((x >> (2 * m - 2)) & 1) + ((x >> (2 * m - 1)) & 1)
        return val
    return quad_from_function(q, 2 * m)


def arf(space: QuadSpace2) -> int:
    """Majority value of Q as a sign: +1 if Q=0 wins, else -1."""
    if space.quad is None:
        raise ValueError("arf needs a quadratic form")
    if not space.is_nondegenerate():
        raise ValueError("arf needs a nondegenerate polarization")
    zeros = space.quad.count(0)
    return 1 if 2 * zeros > len(space.quad) else -1


# ---------------------------------------------------------------- groups

@dataclass
class GroupAction:
    """A finite group given by generators acting on ``carrier`` (a list).

    Each generator is a tuple ``g`` with ``g[i]`` the index of the image of
    carrier[i].  ``matrices`` keeps the linear (or affine) data when known.
    """
    carrier: list
    generators: list
    description: str = ""
    matrices: list = field(default_factory=list)
    _order: Optional[int] = None
    _index: Optional[dict] = None

    def index(self, point) -> int:
        if self._index is None:
            self._index = {p: i for i, p in enumerate(self.carrier)}
        return self._index[point]

    def order(self) -> int:
        if self._order is None:
            n = len(self.carrier)
            gens = [Permutation(list(g)) for g in self.generators if list(g) != list(range(n))]
            if not gens:
                self._order = 1
            else:
                self._order = int(PermutationGroup(gens).order())
        return self._order

    def perm_group(self) -> PermutationGroup:
        n = len(self.carrier)
        gens = [Permutation(list(g)) for g in self.generators] or [Permutation(list(range(max(n, 1))))]
        return PermutationGroup(gens)

    def elements(self) -> list[tuple]:
        """All group elements as image tuples (closure by BFS)."""
        n = len(self.carrier)
        ident = tuple(range(n))
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for h in frontier:
                for g in self.generators:
                    k = tuple(g[h[i]] for i in range(n))
                    if k not in seen:
                        seen.add(k)
                        nxt.append(k)
            frontier = nxt
        return sorted(seen)

    def image(self, g: tuple, point):
        return self.carrier[g[self.index(point)]]

    def same_group(self, other: "GroupAction") -> bool:
        if self.carrier != other.carrier:
            return False
        a, b = self.perm_group(), other.perm_group()
        return a.order() == b.order() and a.is_subgroup(b) and b.is_subgroup(a)


def _perm_of_linear(images: Sequence[int], dim: int, translation: int = 0) -> tuple:
    return tuple(apply_linear(images, x) ^ translation for x in range(1 << dim))


def linear_action(dim: int, maps: Sequence[Sequence[int]], description: str) -> GroupAction:
    return GroupAction(list(range(1 << dim)),
                       [_perm_of_linear(g, dim) for g in maps],
                       description, [tuple(g) for g in maps])


def all_invertible(dim: int):
    """Every element of GL(dim,2) as a tuple of basis images."""
    if dim == 0:
        yield ()
        return

    def rec(prefix, spanned):
        if len(prefix) == dim:
            yield tuple(prefix)
            return
        for v in range(1, 1 << dim):
            if v not in spanned:
                yield from rec(prefix + [v], spanned | {x ^ v for x in spanned})
    yield from rec([], {0})


def preserves(space: QuadSpace2, images: Sequence[int], use_quad: bool) -> bool:
    n = space.dim
    for i in range(n):
        for j in range(i + 1, n):
            if space.b(images[i], images[j]) != space.b(1 << i, 1 << j):
                return False
    if use_quad:
        for i in range(n):
            if space.Q(images[i]) != space.Q(1 << i):
                return False
    return True


def count_isometries_backtrack(space: QuadSpace2, use_quad: bool) -> int:
    """Independent order count: extend images of the basis one vector at a time."""
    n = space.dim
    count = 0

    def rec(prefix, spanned):
        nonlocal count
        k = len(prefix)
        if k == n:
            count += 1
            return
        for v in range(1, 1 << n):
            if v in spanned:
                continue
            if use_quad and space.Q(v) != space.Q(1 << k):
                continue
            if any(space.b(prefix[j], v) != space.b(1 << j, 1 << k) for j in range(k)):
                continue
            rec(prefix + [v], spanned | {x ^ v for x in spanned})
    rec([], {0})
    return count


def _greedy_generators(dim: int, maps: Sequence[Sequence[int]]) -> list:
    """A small generating subset of a list of linear maps forming a group."""
    chosen: list = []
    group = None
    target = len(maps)
    for g in maps:
        perm = Permutation(list(_perm_of_linear(g, dim)))
        if perm.is_Identity:
            continue
        if group is not None and group.contains(perm):
            continue
        chosen.append(tuple(g))
        group = PermutationGroup([Permutation(list(_perm_of_linear(c, dim))) for c in chosen])
        if group.order() == target:
            break
    return chosen


def transvection(space: QuadSpace2, v: int) -> tuple:
    """x -> x + b(x,v) v."""
    return tuple((1 << i) ^ (v if space.b(1 << i, v) else 0) for i in range(space.dim))


def isometry_group(space: QuadSpace2, preserve: str = "quad") -> GroupAction:
    """Stabilizer in GL(dim,2) of the pairing (``preserve='pairing'``) or of Q."""
    n = space.dim
    use_quad = preserve == "quad"
    if use_quad and space.quad is None:
        raise ValueError("space has no quadratic form")
    if n > MAX_DIM:
        raise CapacityError(f"dimension {n} exceeds the supported maximum {MAX_DIM}")
    name = ("O" if use_quad else "Sp") + f"({n},2)"
    if n <= EXHAUSTIVE_DIM:
        maps = [g for g in all_invertible(n) if preserves(space, g, use_quad)]
        act = linear_action(n, _greedy_generators(n, maps), name)
        act._order = len(maps)
        return act
    # generators: symplectic transvections, or orthogonal reflections in
    # nonsingular vectors (these generate for dim >= 6)
    if use_quad:
        gens = [transvection(space, v) for v in range(1, 1 << n) if space.Q(v) == 1]
    else:
        gens = [transvection(space, v) for v in range(1, 1 << n)]
    gens = [g for g in gens if preserves(space, g, use_quad)]
    return linear_action(n, gens, name)


def affine_isometry_group(space: QuadSpace2) -> GroupAction:
    """All maps x -> v + g(x) with g in O(V,Q)."""
    lin = isometry_group(space, "quad")
    n = space.dim
    gens = list(lin.generators)
    for i in range(n):
        gens.append(_perm_of_linear([1 << j for j in range(n)], n, 1 << i))
    act = GroupAction(list(range(1 << n)), gens, "A" + lin.description)
    act._order = (1 << n) * lin.order()
    return act


def restrict(action: GroupAction, subset: Sequence) -> GroupAction:
    """Restriction of an action to an invariant subset of the carrier."""
    sub = list(subset)
    pos = {p: i for i, p in enumerate(sub)}
    gens = []
    for g in action.generators:
        imgs = []
        for p in sub:
            q = action.carrier[g[action.index(p)]]
            if q not in pos:
                raise ValueError("subset is not invariant")
            imgs.append(pos[q])
        gens.append(tuple(imgs))
    return GroupAction(sub, gens, action.description + "|restricted")


# ---------------------------------------------------------------- multisets

def _act_multiset(action: GroupAction, g: tuple, ms: tuple) -> tuple:
    return tuple(sorted(g[i] for i in ms))


def multiset_orbit(action: GroupAction, ms: Sequence) -> set:
    start = tuple(sorted(action.index(p) for p in ms))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for g in action.generators:
                y = _act_multiset(action, g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _key(action: GroupAction, idx_ms: tuple) -> tuple:
    return tuple(sorted(action.carrier[i] for i in idx_ms))


def canonical_multiset(ms: Sequence, action: GroupAction) -> tuple:
    """Lexicographically least multiset (sorted tuple of points) in the orbit."""
    for p in ms:
        if p not in action.carrier:
            raise ValueError(f"point {p!r} is not in the carrier")
    return min(_key(action, x) for x in multiset_orbit(action, ms))


_ORBIT_CACHE: dict = {}


def multiset_orbits(action: GroupAction, size: int, points: Optional[Sequence] = None) -> list[tuple]:
    """Canonical representatives of all orbits of size-``size`` multisets
    drawn from ``points`` (an invariant subset, default the whole carrier)."""
    pts = tuple(sorted(action.carrier if points is None else points))
    cache_key = (id(action), size, pts)
    if cache_key in _ORBIT_CACHE:
        return _ORBIT_CACHE[cache_key][1]
    idx = [action.index(p) for p in pts]
    reps = []
    done: set = set()
    for combo in combinations_with_replacement(sorted(idx), size):
        combo = tuple(sorted(combo))
        if combo in done:
            continue
        orb = multiset_orbit(action, [action.carrier[i] for i in combo])
        done |= orb
        reps.append(min(_key(action, x) for x in orb))
    reps.sort()
    _ORBIT_CACHE[cache_key] = (action, reps)
    return reps


# ---------------------------------------------------------------- flag

@dataclass(frozen=True)
class Flag2:
    """Flag V_0 = 0 <= V_1 <= ... in V = T/T^[2].

    ``subspaces[i]`` is a basis of V_i, ``quotients[i]`` a pair
    (coordinate list, Gram rows) describing W_{i+1} = V_{i+1}/V_i with its
    induced form.  Coordinates of V follow the even-order cyclic factors of T.
    """
    dim: int
    subspaces: tuple
    quotients: tuple

    @property
    def length(self) -> int:
        return len(self.quotients)


def _v2(n: int) -> int:
    k = 0
    while n % 2 == 0 and n:
        n //= 2
        k += 1
    return k


def build_flag(T, beta) -> Flag2:
    """Flag of V = T/T^[2] given by V_i = (T_[2^i] + T^[2]) / T^[2].

    ``T`` is a FinAbGroup (finite) and ``beta`` a Bichar on it.
    """
    if T.free_rank:
        raise ValueError("flag needs a finite group")
    if not beta.is_nondegenerate():
        raise ValueError("beta is degenerate")
    even = [j for j, n in enumerate(T.orders) if n % 2 == 0]
    vals = [_v2(T.orders[j]) for j in even]
    top = max(vals, default=0)
    subspaces = [()]
    quotients = []
    for i in range(1, top + 1):
        coords = [k for k, v in enumerate(vals) if v == i]
        # lift of coordinate k: odd multiple of the generator of order 2^i
        lifts = []
        for k in coords:
            j = even[k]
            odd = T.orders[j] >> i
            x = [0] * len(T.orders)
            x[j] = odd
            lifts.append(tuple(x))
        rows = []
        for a, x in enumerate(lifts):
            row = 0
            for c, y in enumerate(lifts):
                e = (beta.exp(x, y) * (1 << (i - 1))) % beta.N
                if e not in (0, beta.N // 2):
                    raise ValueError("induced form is not 2-valued")
                if e:
                    row |= 1 << c
            rows.append(row)
        if rank(rows) != len(rows):
            raise ValueError("induced quotient form is degenerate")
        quotients.append((tuple(coords), tuple(rows)))
        prev = subspaces[-1]
        subspaces.append(tuple(sorted(set(prev) | {1 << k for k in coords})))
    return Flag2(len(even), tuple(subspaces), tuple(quotients))


def _stabilizes_flag(flag: Flag2, g: Sequence[int]) -> bool:
    for i, (coords, rows) in enumerate(flag.quotients):
        upper = flag.subspaces[i + 1]
        for k in coords:
            img = g[k]
            if not in_span(upper, img):
                return False
        # induced form on W_{i+1}: read quotient coordinates of images
        proj = []
        for k in coords:
            img = g[k]
            bits = 0
            for c, kk in enumerate(coords):
                if (img >> kk) & 1:
                    bits |= 1 << c
            proj.append(bits)
        sp = QuadSpace2(len(coords), rows)
        for a in range(len(coords)):
            for c in range(a + 1, len(coords)):
                if sp.b(proj[a], proj[c]) != sp.b(1 << a, 1 << c):
                    return False
    return True


def flag_stabilizer(flag: Flag2) -> GroupAction:
    """Sp(V,F): maps of V keeping each V_i and each quotient form."""
    n = flag.dim
    if n <= EXHAUSTIVE_DIM:
        maps = [g for g in all_invertible(n) if _stabilizes_flag(flag, g)]
        act = linear_action(n, _greedy_generators(n, maps), "Sp(V,F)")
        act._order = len(maps)
        return act
    if n > MAX_DIM:
        raise CapacityError(f"dimension {n} exceeds the supported maximum {MAX_DIM}")
    gens = []
    for i, (coords, rows) in enumerate(flag.quotients):
        sp = QuadSpace2(len(coords), rows)
        for v in range(1, 1 << len(coords)):
            t = transvection(sp, v)
            g = [1 << k for k in range(n)]
            for a, k in enumerate(coords):
                img = 0
                for c, kk in enumerate(coords):
                    if (t[a] >> c) & 1:
                        img |= 1 << kk
                g[k] = img
            gens.append(tuple(g))
        for lower_coords, _ in flag.quotients[:i]:
            for k in coords:
                for kk in lower_coords:
                    g = [1 << x for x in range(n)]
                    g[k] ^= 1 << kk
                    gens.append(tuple(g))
    return linear_action(n, gens, "Sp(V,F)")


def flag_stabilizer_order(flag: Flag2) -> int:
    """prod |Sp(W_i)| * 2^(sum_{i<j} d_i d_j)."""
    dims = [len(c) for c, _ in flag.quotients]
    total = 1
    for d in dims:
        total *= symplectic_order(d // 2)
    e = sum(dims[i] * dims[j] for i in range(len(dims)) for j in range(i + 1, len(dims)))
    return total << e


def symplectic_order(m: int) -> int:
    out = 2 ** (m * m)
    for i in range(1, m + 1):
        out *= 4 ** i - 1
    return out


def autTbeta_image(T, beta, max_order: int = 256) -> GroupAction:
    """Image in GL(T/T^[2]) of the automorphisms of T preserving beta.

    Backtracks over images of the cyclic generators; preserving a
    nondegenerate beta forces injectivity, hence bijectivity.
    """
    if T.free_rank:
        raise ValueError("needs a finite group")
    if T.size() > max_order:
        raise CapacityError(f"|T| = {T.size()} exceeds {max_order}")
    elems = T.elements()
    gens = [T.basis(j) for j in range(len(T.orders))]
    cands = []
    for j, n in enumerate(T.orders):
        cands.append([x for x in elems if T.order_of(x) == T.order_of(gens[j])])
    even = [j for j, n in enumerate(T.orders) if n % 2 == 0]
    nv = len(even)
    images: set = set()

    def to_v(x):
        bits = 0
        for k, j in enumerate(even):
            if x[j] & 1:
                bits |= 1 << k
        return bits

    def rec(chosen):
        j = len(chosen)
        if j == len(gens):
            img = tuple(to_v(chosen[jj]) for jj in even)
            images.add(img)
            return
        for x in cands[j]:
            if all(beta.exp(chosen[i], x) == beta.exp(gens[i], gens[j]) for i in range(j)):
                rec(chosen + [x])
    rec([])
    maps = sorted(images)
    act = linear_action(nv, _greedy_generators(nv, maps) if nv else [], "Aut(T,beta)|V")
    act._order = len(maps)
    return act


# ---------------------------------------------------------------- lifting

def _std_J(n: int) -> list[list[int]]:
    h = n // 2
    J = [[0] * n for _ in range(n)]
    for i in range(h):
        J[i][h + i] = 1
        J[h + i][i] = -1
    return J


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]


def star(A) -> list[list[int]]:
    """Adjoint for the standard symplectic form: J^{-1} A^T J."""
    n = len(A)
    h = n // 2
    a = [row[:h] for row in A[:h]]
    b = [row[h:] for row in A[:h]]
    c = [row[:h] for row in A[h:]]
    d = [row[h:] for row in A[h:]]

    def tr(M):
        return [list(r) for r in zip(*M)] if M else []
    dT, bT, cT, aT = tr(d), tr(b), tr(c), tr(a)
    out = []
    for i in range(h):
        out.append([dT[i][j] for j in range(h)] + [-bT[i][j] for j in range(h)])
    for i in range(h):
        out.append([-cT[i][j] for j in range(h)] + [aT[i][j] for j in range(h)])
    return out


def is_symplectic_mod(A, modulus: int) -> bool:
    n = len(A)
    P = _matmul(star(A), A)
    return all((P[i][j] - (1 if i == j else 0)) % modulus == 0
               for i in range(n) for j in range(n))


def lift_symplectic(Abar, m: int) -> list[list[int]]:
    """Lift a symplectic matrix mod 2 to one that is symplectic mod 2^m.

    Each step replaces a by a(1-x) where x + x* = a*a - 1; the error
    exponent doubles every step.
    """
    n = len(Abar)
    if n % 2 or any(len(r) != n for r in Abar):
        raise ValueError("need a square matrix of even size")
    A = [[x % 2 for x in row] for row in Abar]
    if not is_symplectic_mod(A, 2):
        raise ValueError("matrix is not symplectic mod 2")
    mod = 1 << m
    h = n // 2
    k = 1
    while k < m:
        C = _matmul(star(A), A)
        S = [[C[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
        X = [[0] * n for _ in range(n)]
        for i in range(h):
            for j in range(h):
                X[i][j] = S[i][j]
                if j > i:
                    X[i][h + j] = S[i][h + j]
                    X[h + i][j] = S[h + i][j]
        U = [[(1 if i == j else 0) - X[i][j] for j in range(n)] for i in range(n)]
        A = [[x % mod for x in row] for row in _matmul(A, U)]
        k *= 2
    return A
