"""Finitely generated abelian groups, Smith normal form, presentations and the
universal groups of the gradings on M(D,q,s,d) and M^ex(D,k)."""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product
from math import gcd
from typing import Optional, Sequence

from sympy import ZZ, factorint
from sympy.polys.matrices import DomainMatrix

from .gf2forms import rank as gf2_rank, row_basis


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def smith(rows: Sequence[Sequence[int]], ncols: Optional[int] = None):
    """Smith form of an integer matrix.

    Returns ``(diag, S, T)`` with ``S*M*T`` diagonal; ``diag`` lists the
    diagonal entries (length min(rows, cols)).  S and T are unimodular lists
    of lists.
    """
    from sympy.polys.matrices.normalforms import smith_normal_decomp
    nr = len(rows)
    nc = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    if nr == 0 or nc == 0:
        ident = [[int(i == j) for j in range(nc)] for i in range(nc)]
        return [], [[int(i == j) for j in range(nr)] for i in range(nr)], ident
    M = DomainMatrix([[ZZ(int(x)) for x in r] for r in rows], (nr, nc), ZZ)
    D, S, T = smith_normal_decomp(M)
    Dm, Sm, Tm = D.to_list(), S.to_list(), T.to_list()
    diag = [abs(int(Dm[i][i])) for i in range(min(nr, nc))]
    # sympy may return negative diagonal entries; fold the sign into S
    for i in range(min(nr, nc)):
        if int(Dm[i][i]) < 0:
            Sm[i] = [-x for x in Sm[i]]
    return diag, [[int(x) for x in r] for r in Sm], [[int(x) for x in r] for r in Tm]


def cokernel_factors(rows: Sequence[Sequence[int]], ncols: int) -> tuple[list[int], int]:
    """Invariant factors (>1) and free rank of Z^ncols / rowspace."""
    diag, _, _ = smith(rows, ncols)
    tors = [d for d in diag if d > 1]
    free = ncols - sum(1 for d in diag if d != 0)
    return tors, free


def primary_parts(factors: Sequence[int]) -> list[int]:
    out = []
    for d in factors:
        for p, e in factorint(d).items():
            out.append(p ** e)
    return sorted(out, key=lambda n: (min(factorint(n)), n))


def format_iso(torsion: Sequence[int], free: int) -> str:
    parts = []
    prim = primary_parts([d for d in torsion if d > 1])
    counts: dict = {}
    for n in prim:
        counts[n] = counts.get(n, 0) + 1
    for n in sorted(counts, key=lambda n: (min(factorint(n)), n)):
        c = counts[n]
        parts.append(f"Z{n}" + (f"^{c}" if c > 1 else ""))
    if free:
        parts.append("Z" + (f"^{free}" if free > 1 else ""))
    return " x ".join(parts) if parts else "1"


@dataclass(frozen=True)
class FinAbGroup:
    """Z_{n_1} x ... x Z_{n_r} x Z^free_rank with elements as integer tuples.

    The cyclic orders need not form a divisibility chain; ``iso_type``
    normalizes.
    """
    orders: tuple = ()
    free_rank: int = 0

    def __post_init__(self):
        if any(n < 1 for n in self.orders) or self.free_rank < 0:
            raise ValueError("bad group data")

    # -- elements
    @property
    def ngens(self) -> int:
        return len(self.orders) + self.free_rank

    def reduce(self, x: Sequence[int]) -> tuple:
        if len(x) != self.ngens:
            raise ValueError(f"element {tuple(x)} has wrong length for {self}")
        r = len(self.orders)
        return tuple(int(v) % n for v, n in zip(x[:r], self.orders)) + tuple(int(v) for v in x[r:])

    def zero(self) -> tuple:
        return (0,) * self.ngens

    def basis(self, j: int) -> tuple:
        x = [0] * self.ngens
        x[j] = 1
        return self.reduce(x)

    def add(self, x, y) -> tuple:
        return self.reduce([a + b for a, b in zip(x, y)])

    def sub(self, x, y) -> tuple:
        return self.reduce([a - b for a, b in zip(x, y)])

    def neg(self, x) -> tuple:
        return self.reduce([-a for a in x])

    def mul(self, n: int, x) -> tuple:
        return self.reduce([n * a for a in x])

    def combo(self, coeffs: Sequence[int], elems: Sequence[Sequence[int]]) -> tuple:
        out = [0] * self.ngens
        for c, e in zip(coeffs, elems):
            for i, v in enumerate(e):
                out[i] += c * v
        return self.reduce(out)

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def size(self) -> int:
        if self.free_rank:
            raise ValueError("infinite group")
        return reduce(lambda a, b: a * b, self.orders, 1)

    def exponent(self) -> int:
        return reduce(lcm, self.orders, 1)

    def elements(self) -> list[tuple]:
        if self.free_rank:
            raise ValueError("infinite group")
        return [tuple(x) for x in product(*[range(n) for n in self.orders])]

    def order_of(self, x) -> int:
        x = self.reduce(x)
        if any(x[len(self.orders):]):
            return 0
        o = 1
        for v, n in zip(x, self.orders):
            o = lcm(o, n // gcd(n, v))
        return o

    # -- structure
    def iso_invariants(self) -> tuple[list[int], int]:
        diag, _, _ = smith([[n if i == j else 0 for j in range(len(self.orders))]
                            for i, n in enumerate(self.orders)], len(self.orders))
        return [d for d in diag if d > 1], self.free_rank

    def iso_type(self) -> str:
        tors, free = self.iso_invariants()
        return format_iso(tors, free)

    def two_part_counts(self) -> dict:
        """n_i(2): number of cyclic factors of order 2^i in a primary decomposition."""
        out: dict = {}
        for n in primary_parts(self.iso_invariants()[0]):
            if n % 2 == 0:
                i = n.bit_length() - 1
                out[i] = out.get(i, 0) + 1
        return out

    def power_subgroup(self, n: int) -> list[tuple]:
        """T^[n] = {x^n}."""
        return sorted({self.mul(n, x) for x in self.elements()})

    def kernel(self, n: int) -> list[tuple]:
        """T_[n] = {x | x^n = e}."""
        return [x for x in self.elements() if self.mul(n, x) == self.zero()]

    def generated(self, gens: Sequence[Sequence[int]]) -> list[tuple]:
        out = {self.zero()}
        frontier = [self.zero()]
        gens = [self.reduce(g) for g in gens]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.add(x, g)
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(out)

    def quotient(self, gens: Sequence[Sequence[int]]):
        """Quotient by the subgroup generated by ``gens``: (group, projection)."""
        pres = Presentation(self.ngens, self.relation_rows() + [list(g) for g in gens])
        Q, imgs = pres.cokernel()
        basis_imgs = imgs

        def proj(x):
            return Q.combo(list(x), basis_imgs)
        return Q, proj

    def relation_rows(self) -> list[list[int]]:
        rows = []
        for i, n in enumerate(self.orders):
            r = [0] * self.ngens
            r[i] = n
            rows.append(r)
        return rows

    def product(self, other: "FinAbGroup") -> "FinAbGroup":
        if self.free_rank:
            raise ValueError("put free factors last")
        return FinAbGroup(self.orders + other.orders, other.free_rank)

    def __str__(self):
        return self.iso_type()


# ---------------------------------------------------------------- words

LETTERS = "abcdefghijklmnopqrstuvwxyz".replace("e", "")


def parse_word(G: FinAbGroup, word: str) -> tuple:
    """Parse generator words like ``e``, ``a``, ``ab``, ``a2b`` into elements.

    Letters name generators in order, skipping ``e`` which denotes the
    identity.
    """
    word = word.strip()
    if word in ("e", "1", ""):
        return G.zero()
    x = [0] * G.ngens
    i = 0
    while i < len(word):
        ch = word[i]
        if ch not in LETTERS:
            raise ValueError(f"bad group word {word!r}")
        j = LETTERS.index(ch)
        if j >= G.ngens:
            raise ValueError(f"generator {ch!r} does not exist in {G.iso_type()}")
        i += 1
        num = ""
        while i < len(word) and (word[i].isdigit() or (word[i] == "-" and not num)):
            num += word[i]
            i += 1
        x[j] += int(num) if num else 1
    return G.reduce(x)


def format_word(G: FinAbGroup, x: Sequence[int]) -> str:
    x = G.reduce(x)
    out = ""
    for j, v in enumerate(x):
        if v:
            out += LETTERS[j] + (str(v) if v != 1 else "")
    return out or "e"


# ---------------------------------------------------------------- presentations

@dataclass
class Presentation:
    ngens: int
    relations: list

    def cokernel(self) -> tuple[FinAbGroup, list[tuple]]:
        """The presented group and the images of the generators."""
        diag, _, Tm = smith(self.relations, self.ngens) if self.relations else \
            ([], None, [[int(i == j) for j in range(self.ngens)] for i in range(self.ngens)])
        n = self.ngens
        d = list(diag) + [0] * (n - len(diag))
        keep_t = [i for i in range(n) if d[i] > 1]
        keep_f = [i for i in range(n) if d[i] == 0]
        G = FinAbGroup(tuple(d[i] for i in keep_t), len(keep_f))
        images = []
        for g in range(n):
            row = Tm[g]  # generator g maps to e_g * T
            images.append(G.reduce([row[i] for i in keep_t] + [row[i] for i in keep_f]))
        return G, images


# ---------------------------------------------------------------- bicharacters

@dataclass(frozen=True)
class Bichar:
    """beta(x,y) = zeta_N ^ (x^T B y) on a finite FinAbGroup."""
    group: FinAbGroup
    N: int
    B: tuple

    def __post_init__(self):
        G = self.group
        r = len(G.orders)
        for i in range(r):
            for j in range(r):
                if (G.orders[i] * self.B[i][j]) % self.N or (G.orders[j] * self.B[i][j]) % self.N:
                    raise ValueError("bicharacter is not well defined")

    def exp(self, x, y) -> int:
        r = len(self.group.orders)
        s = 0
        for i in range(r):
            if x[i]:
                row = self.B[i]
                for j in range(r):
                    if y[j]:
                        s += x[i] * row[j] * y[j]
        return s % self.N

    def is_alternating(self) -> bool:
        r = len(self.group.orders)
        return all(self.B[i][i] % self.N == 0 for i in range(r)) and \
            all((self.B[i][j] + self.B[j][i]) % self.N == 0 for i in range(r) for j in range(r))

    def radical(self) -> list[tuple]:
        G = self.group
        gens = [G.basis(j) for j in range(G.ngens)]
        return [x for x in G.elements() if all(self.exp(x, g) == 0 for g in gens)]

    def is_nondegenerate(self) -> bool:
        return len(self.radical()) == 1

    def perp(self, subgroup: Sequence[Sequence[int]]) -> list[tuple]:
        if not self.is_nondegenerate():
            raise ValueError("beta is degenerate")
        return [y for y in self.group.elements() if all(self.exp(x, y) == 0 for x in subgroup)]


def pauli_bichar(ells: Sequence[int]) -> Bichar:
    """Standard beta on prod Z_l^2, coordinates (i_1,j_1,...,i_m,j_m),
    with beta(a_r, b_r) = zeta_{l_r}."""
    m = len(ells)
    N = reduce(lcm, ells, 1)
    G = FinAbGroup(tuple(l for l in ells for _ in (0, 1)))
    B = [[0] * (2 * m) for _ in range(2 * m)]
    for r, l in enumerate(ells):
        B[2 * r][2 * r + 1] = N // l
        B[2 * r + 1][2 * r] = (-N // l) % N
    return Bichar(G, N, tuple(tuple(r) for r in B))


# ---------------------------------------------------------------- universal groups

def universal_group_M(T: FinAbGroup, q: int, s: int, tbar: Sequence[Sequence[int]]):
    """Universal group of the grading on M(D,phi0,q,s,d,delta).

    Generators: those of T, then u_1..u_k (k = q+2s).  Relations: T's own,
    2u_i - t_i (i <= q) and u_{q+2r-1} + u_{q+2r} all equal, and u_1 = e.
    Returns ``(U, u_images, t_images)``.
    """
    k = q + 2 * s
    if k < 1:
        raise ValueError("need q + 2s >= 1")
    if len(tbar) != q:
        raise ValueError("need q degrees")
    tbar = [T.reduce(t) for t in tbar]
    nt = T.ngens
    n = nt + k
    rows = [r + [0] * k for r in T.relation_rows()]
    exprs = []
    for i in range(q):
        r = [0] * n
        for j, v in enumerate(tbar[i]):
            r[j] -= v
        r[nt + i] += 2
        exprs.append(r)
    for p in range(s):
        r = [0] * n
        r[nt + q + 2 * p] += 1
        r[nt + q + 2 * p + 1] += 1
        exprs.append(r)
    for r in exprs[1:]:
        rows.append([a - b for a, b in zip(r, exprs[0])])
    norm = [0] * n
    norm[nt] = 1
    rows.append(norm)
    U, imgs = Presentation(n, rows).cokernel()
    return U, imgs[nt:], imgs[:nt]


def universal_group_Mex(T: FinAbGroup, k: int) -> FinAbGroup:
    if k < 1:
        raise ValueError("need k >= 1")
    return FinAbGroup(T.orders, T.free_rank + k - 1)


def flag_levels(T: FinAbGroup) -> list[list[int]]:
    """Bases (GF(2) bitmasks over the even cyclic factors of T) of
    V_i = (T_[2^i] + T^[2]) / T^[2] for i = 0, 1, ..., top."""
    even = [j for j, n in enumerate(T.orders) if n % 2 == 0]
    vals = [(T.orders[j] & -T.orders[j]).bit_length() - 1 for j in even]
    top = max(vals, default=0)
    return [[1 << k for k, v in enumerate(vals) if v <= i] for i in range(top + 1)]


def to_V(T: FinAbGroup, x: Sequence[int]) -> int:
    """Image of x in V = T/T^[2] (bit k = k-th even cyclic factor)."""
    bits = 0
    k = 0
    for j, n in enumerate(T.orders):
        if n % 2 == 0:
            if x[j] % 2:
                bits |= 1 << k
            k += 1
    return bits


def universal_group_formula(T: FinAbGroup, q: int, tbar: Sequence[Sequence[int]]) -> str:
    """Torsion part of the universal group via the flag pullback formula.

    n'_i(2) = n_i(2) + dim(U_i/U_{i-1}) - dim(U_{i+1}/U_i) for q > 1, where
    U_i = tau^{-1}(V_{i-1}) and tau sends the j-th basis vector of
    Z_2^{q-1} to t_{j+1} - t_1 modulo T^[2].
    """
    if q < 1:
        raise ValueError("need q >= 1")
    if not T.is_finite():
        raise ValueError("T must be finite")
    tors, _ = T.iso_invariants()
    if q == 1:
        return format_iso(tors, 0)
    tau = [to_V(T, T.sub(tbar[j], tbar[0])) for j in range(1, q)]
    levels = flag_levels(T)
    rk = gf2_rank(tau)

    def dim_U(i):
        if i == 0:
            return 0
        lev = levels[min(i - 1, len(levels) - 1)]
        # dim tau^{-1}(W) = dim ker tau + dim(im tau intersect W)
        inter = len(row_basis(tau)) + len(row_basis(lev)) - gf2_rank(list(tau) + list(lev))
        return (q - 1 - rk) + inter

    n2 = T.two_part_counts()
    top = max(list(n2) + [len(levels)]) + 2
    new_counts = {}
    for i in range(1, top + 1):
        c = n2.get(i, 0) + (dim_U(i) - dim_U(i - 1)) - (dim_U(i + 1) - dim_U(i))
        if c:
            new_counts[i] = c
    odd = [n for n in primary_parts(tors) if n % 2]
    two = [2 ** i for i, c in new_counts.items() for _ in range(c)]
    return format_iso(sorted(odd + two), 0)
