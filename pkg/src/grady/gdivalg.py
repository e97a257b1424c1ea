"""Real graded-division algebras with a degree-preserving involution.

Every algebra is realized by monomial complex matrices X_t (one per degree t)
whose nonzero entries are roots of unity.  From the model we read off the
cocycle X_s X_t = zeta^sigma(s,t) X_{s+t}, the commutation bicharacter beta,
the square classes mu and the involution signs eta, so nothing is typed in by
hand except the generators.

Labels:
    D(2m;+1)      M_2(R)^{(x)m}, transpose
    D(2m;-1)      M_2(R)^{(x)m-1} (x) H, conjugate transpose
    D(2m+1;R)     D(2m;+1) (x) C, conjugate transpose
    D(l1,...;C)   Pauli gradings on M_l(C), involution P^{-1} conj(X)^T P
    D(2m+1;+1)    D(2m;+1) (x) (R x R), (X,Y) -> (Y^T, X^T)
    D(2m+1;-1)    D(2m;-1) (x) (R x R), (X,Y) -> (conj(Y)^T, conj(X)^T)
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import reduce
from typing import Optional, Sequence

from sympy import factorint

from .abelian import Bichar, FinAbGroup, lcm
from .cyclo import Cyc
from .gf2forms import GroupAction, QuadSpace2, arf, quad_from_function


class Mono:
    """Monomial matrix: column j has the entry zeta_M^exps[j] in row perm[j]."""
    __slots__ = ("M", "perm", "exps")

    def __init__(self, M: int, perm: Sequence[int], exps: Sequence[int]):
        self.M = M
        self.perm = tuple(perm)
        self.exps = tuple(e % M for e in exps)

    @classmethod
    def identity(cls, M: int, n: int) -> "Mono":
        return cls(M, range(n), [0] * n)

    @property
    def n(self) -> int:
        return len(self.perm)

    def __mul__(self, other: "Mono") -> "Mono":
        perm = [self.perm[other.perm[j]] for j in range(other.n)]
        exps = [other.exps[j] + self.exps[other.perm[j]] for j in range(other.n)]
        return Mono(self.M, perm, exps)

    def __pow__(self, k: int) -> "Mono":
        out = Mono.identity(self.M, self.n)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, k: int) -> "Mono":
        return Mono(self.M, self.perm, [e + k for e in self.exps])

    def transpose(self) -> "Mono":
        perm = [0] * self.n
        exps = [0] * self.n
        for j, i in enumerate(self.perm):
            perm[i] = j
            exps[i] = self.exps[j]
        return Mono(self.M, perm, exps)

    def conj(self) -> "Mono":
        return Mono(self.M, self.perm, [-e for e in self.exps])

    def kron(self, other: "Mono") -> "Mono":
        n2 = other.n
        perm, exps = [], []
        for a in range(self.n):
            for b in range(n2):
                perm.append(self.perm[a] * n2 + other.perm[b])
                exps.append(self.exps[a] + other.exps[b])
        return Mono(self.M, perm, exps)

    def direct_sum(self, other: "Mono") -> "Mono":
        n1 = self.n
        return Mono(self.M, list(self.perm) + [n1 + p for p in other.perm],
                    list(self.exps) + list(other.exps))

    def ratio(self, other: "Mono") -> Optional[int]:
        """k with self = zeta^k * other, or None."""
        if self.perm != other.perm:
            return None
        ks = {(a - b) % self.M for a, b in zip(self.exps, other.exps)}
        return ks.pop() if len(ks) == 1 else None

    def __eq__(self, other):
        return isinstance(other, Mono) and self.perm == other.perm and self.exps == other.exps

    def __hash__(self):
        return hash((self.perm, self.exps))


def _perm_mono(M: int, perm: Sequence[int]) -> Mono:
    return Mono(M, perm, [0] * len(perm))


@dataclass(frozen=True)
class HomElem:
    """A homogeneous element c * X_t."""
    degree: tuple
    coeff: Cyc


FAMILY_REAL = "D(2m;+1)"
FAMILY_QUAT = "D(2m;-1)"
FAMILY_CPLX_R = "D(2m+1;R)"
FAMILY_CPLX = "D(l;C)"
FAMILY_SPLIT_R = "D(2m+1;+1)"
FAMILY_SPLIT_H = "D(2m+1;-1)"

FAMILIES = (FAMILY_REAL, FAMILY_QUAT, FAMILY_CPLX_R, FAMILY_CPLX, FAMILY_SPLIT_R, FAMILY_SPLIT_H)

_LABEL = re.compile(r"^\s*D\(\s*([0-9][0-9,\s]*)\s*;\s*([+-]1|R|C)\s*\)\s*$")


def parse_label(label: str) -> tuple:
    """Return (family, params) for a textual label."""
    mt = _LABEL.match(label)
    if not mt:
        raise ValueError(f"malformed label {label!r}")
    nums = [int(x) for x in mt.group(1).replace(" ", "").split(",") if x]
    tag = mt.group(2)
    if tag == "C":
        if not nums:
            raise ValueError("need at least one l")
        for l in nums:
            if l < 2 or len(factorint(l)) != 1:
                raise ValueError(f"l = {l} is not a prime power >= 2")
        return FAMILY_CPLX, tuple(sorted(nums))
    if len(nums) != 1:
        raise ValueError(f"malformed label {label!r}")
    d = nums[0]
    if tag == "R":
        if d % 2 == 0:
            raise ValueError("D(n;R) needs odd n = 2m+1")
        return FAMILY_CPLX_R, d // 2
    sign = int(tag)
    if d % 2 == 0:
        if sign < 0 and d == 0:
            raise ValueError("D(2m;-1) needs m >= 1")
        return (FAMILY_REAL if sign > 0 else FAMILY_QUAT), d // 2
    if sign < 0 and d == 1:
        raise ValueError("D(2m+1;-1) needs m >= 1")
    return (FAMILY_SPLIT_R if sign > 0 else FAMILY_SPLIT_H), d // 2


def make_label(family: str, param) -> str:
    if family == FAMILY_CPLX:
        return "D(" + ",".join(str(l) for l in param) + ";C)"
    m = param
    return {
        FAMILY_REAL: f"D({2 * m};+1)",
        FAMILY_QUAT: f"D({2 * m};-1)",
        FAMILY_CPLX_R: f"D({2 * m + 1};R)",
        FAMILY_SPLIT_R: f"D({2 * m + 1};+1)",
        FAMILY_SPLIT_H: f"D({2 * m + 1};-1)",
    }[family]


@dataclass
class GDAlgebra:
    label: str
    family: str
    param: object
    T: FinAbGroup
    M: int                      # scalars live in Q(zeta_M)
    X: dict                     # degree -> Mono
    phi0_matrix: object         # Mono -> Mono (the involution on the model)
    conjugating: bool           # phi0 conjugates complex scalars
    _sigma: dict = field(default_factory=dict, repr=False)
    _eps: dict = field(default_factory=dict, repr=False)

    # -- basic data
    @property
    def N(self) -> int:
        return self.M // 2

    @property
    def elements(self) -> list:
        return self.T.elements()

    @property
    def De(self) -> str:
        return "C" if self.family == FAMILY_CPLX else "R"

    @property
    def dim_e(self) -> int:
        """Real dimension of D_e."""
        return 2 if self.family == FAMILY_CPLX else 1

    @property
    def center(self) -> str:
        return {FAMILY_REAL: "R", FAMILY_QUAT: "R", FAMILY_CPLX_R: "C", FAMILY_CPLX: "C",
                FAMILY_SPLIT_R: "C~", FAMILY_SPLIT_H: "C~"}[self.family]

    @property
    def Delta(self) -> str:
        return {FAMILY_REAL: "R", FAMILY_QUAT: "H", FAMILY_CPLX_R: "C", FAMILY_CPLX: "C",
                FAMILY_SPLIT_R: "R", FAMILY_SPLIT_H: "H"}[self.family]

    @property
    def m(self) -> int:
        if self.family == FAMILY_CPLX:
            return len(self.param)
        return self.param

    @property
    def ell(self) -> int:
        """Matrix degree over Delta."""
        if self.family == FAMILY_CPLX:
            return reduce(lambda a, b: a * b, self.param, 1)
        if self.family in (FAMILY_QUAT, FAMILY_SPLIT_H):
            return 2 ** (self.m - 1)
        return 2 ** self.m

    @property
    def f(self) -> Optional[tuple]:
        """Degree of the odd central element, when the center is 2-dimensional graded."""
        if self.family in (FAMILY_CPLX_R, FAMILY_SPLIT_R, FAMILY_SPLIT_H):
            return self.T.basis(len(self.T.orders) - 1)
        return None

    @property
    def H(self) -> list:
        """Support of the center."""
        return [self.T.zero()] + ([self.f] if self.f is not None else [])

    def real_dim(self) -> int:
        return self.T.size() * self.dim_e

    # -- structure constants
    def sigma(self, s, t) -> int:
        key = (s, t)
        if key not in self._sigma:
            st = self.T.add(s, t)
            k = (self.X[s] * self.X[t]).ratio(self.X[st])
            if k is None:
                raise AssertionError("model is not a twisted group algebra")
            self._sigma[key] = k
        return self._sigma[key]

    def beta(self, s, t) -> int:
        """Exponent of zeta_M with X_s X_t = zeta^beta X_t X_s."""
        return (self.sigma(s, t) - self.sigma(t, s)) % self.M

    def beta_sign(self, s, t) -> int:
        b = self.beta(s, t)
        if b not in (0, self.M // 2):
            raise ValueError("beta is not a sign here")
        return 1 if b == 0 else -1

    def bichar(self) -> Bichar:
        """beta as a Bichar on T with values in zeta_M."""
        gens = [self.T.basis(j) for j in range(len(self.T.orders))]
        B = tuple(tuple(self.beta(g, h) for h in gens) for g in gens)
        return Bichar(self.T, self.M, B)

    def phi0_sign_exp(self, t) -> int:
        """k with phi0(X_t) = zeta^k X_t."""
        if t not in self._eps:
            k = self.phi0_matrix(self.X[t]).ratio(self.X[t])
            if k is None:
                raise AssertionError("phi0 does not preserve the degree")
            self._eps[t] = k
        return self._eps[t]

    def mu(self, t) -> int:
        """Sign class of X_t^2 (t of order <= 2, D_e = R)."""
        if self.De != "R":
            raise ValueError("mu is only defined when D_e = R")
        t = self.T.reduce(t)
        if self.T.mul(2, t) != self.T.zero():
            raise ValueError("mu needs t^2 = e")
        k = self.sigma(t, t)
        if k == 0:
            return 1
        if k == self.M // 2:
            return -1
        raise AssertionError("X_t^2 is not real")

    def eta(self, t) -> int:
        """phi0(x) = eta(t) x on D_t (only when phi0 is D_e-linear)."""
        if self.conjugating:
            raise ValueError("eta is undefined: phi0 conjugates D_e = C")
        k = self.phi0_sign_exp(self.T.reduce(t))
        if k == 0:
            return 1
        if k == self.M // 2:
            return -1
        raise AssertionError("phi0 sign is not real")

    def eta_space(self) -> QuadSpace2:
        """eta as a GF(2) quadratic form (2-elementary T, linear phi0)."""
        n = len(self.T.orders)
        return quad_from_function(lambda x: 0 if self.eta(_bits(x, n)) == 1 else 1, n)

    def mu_space(self) -> QuadSpace2:
        n = len(self.T.orders)
        return quad_from_function(lambda x: 0 if self.mu(_bits(x, n)) == 1 else 1, n)

    def involution_type(self) -> str:
        if self.center == "C":
            return "second-kind"
        if self.center == "C~":
            return "exchange"
        return "orthogonal" if arf(self.eta_space()) == 1 else "symplectic"

    # -- arithmetic on homogeneous elements
    def one(self) -> HomElem:
        return HomElem(self.T.zero(), Cyc(self.M, 1))

    def X_elem(self, t, k: int = 0) -> HomElem:
        return HomElem(self.T.reduce(t), Cyc.root(self.M, k))

    def multiply(self, x: HomElem, y: HomElem) -> HomElem:
        t = self.T.add(x.degree, y.degree)
        return HomElem(t, x.coeff * y.coeff * Cyc.root(self.M, self.sigma(x.degree, y.degree)))

    def inverse(self, x: HomElem) -> HomElem:
        t = self.T.neg(x.degree)
        # X_t X_{-t} = zeta^sigma(t,-t) X_e
        c = x.coeff.inverse() * Cyc.root(self.M, -self.sigma(x.degree, t))
        return HomElem(t, c)

    def apply_phi0(self, x: HomElem) -> HomElem:
        c = x.coeff.conj() if self.conjugating else x.coeff
        return HomElem(x.degree, c * Cyc.root(self.M, self.phi0_sign_exp(x.degree)))

    def scalar_conj(self, c: Cyc) -> Cyc:
        return c.conj() if self.conjugating else c

    def is_scalar_admissible(self, c: Cyc) -> bool:
        """Coefficients must lie in D_e (real unless D_e = C)."""
        return True if self.De == "C" else c.is_real()

    # -- Weyl group
    def weyl_group(self, max_order: int = 128) -> GroupAction:
        """Aut(T,mu) when D_e = R; Aut(T,beta), extended by tau when T is
        not 2-elementary, when D_e = C."""
        T = self.T
        if T.size() > max_order:
            from .gf2forms import CapacityError
            raise CapacityError(f"|T| = {T.size()} exceeds {max_order}")
        maps = automorphisms(self)
        elems = T.elements()
        if self.De == "C" and T.exponent() > 2:
            tau = tuple(T.neg(T.basis(j)) if j % 2 == 0 else T.basis(j)
                        for j in range(len(T.orders)))
            maps = maps + [_compose_maps(T, g, tau) for g in maps]
        perms = [map_to_perm(T, g, elems) for g in maps]
        act = GroupAction(list(elems), [], "W(D)")
        act.generators = _greedy_perm_generators(perms)
        act.matrices = maps
        act._order = len(set(perms))
        return act


def _bits(x: int, n: int) -> tuple:
    return tuple((x >> i) & 1 for i in range(n))


def map_apply(T: FinAbGroup, images: Sequence, x) -> tuple:
    return T.combo(list(x), images)


def _compose_maps(T, g, h) -> tuple:
    """g after h, on generator images."""
    return tuple(map_apply(T, g, h_img) for h_img in h)


def map_to_perm(T: FinAbGroup, images: Sequence, elems: Sequence) -> tuple:
    idx = {e: i for i, e in enumerate(elems)}
    return tuple(idx[map_apply(T, images, e)] for e in elems)


def _greedy_perm_generators(perms: Sequence[tuple]) -> list:
    from sympy.combinatorics import Permutation, PermutationGroup
    target = len(set(perms))
    chosen: list = []
    group = None
    for p in perms:
        P = Permutation(list(p))
        if P.is_Identity or (group is not None and group.contains(P)):
            continue
        chosen.append(p)
        group = PermutationGroup([Permutation(list(c)) for c in chosen])
        if group.order() == target:
            break
    return chosen


def automorphisms(D: GDAlgebra) -> list:
    """All automorphisms of T preserving mu (D_e = R) or beta (D_e = C),
    as tuples of generator images."""
    T = D.T
    elems = T.elements()
    gens = [T.basis(j) for j in range(len(T.orders))]
    use_mu = D.De == "R"
    cands = []
    for g in gens:
        og = T.order_of(g)
        cands.append([x for x in elems if T.order_of(x) == og and
                      (not use_mu or D.mu(x) == D.mu(g))])
    out = []
    size = T.size()

    def rec(chosen):
        j = len(chosen)
        if j == len(gens):
            if len(T.generated(chosen)) == size:
                out.append(tuple(chosen))
            return
        for x in cands[j]:
            if all(D.beta(chosen[i], x) == D.beta(gens[i], gens[j]) for i in range(j)):
                rec(chosen + [x])
    rec([])
    return out


# ---------------------------------------------------------------- models

_REAL_X = ((0, 1), (2, 0))   # diag(-1, 1) in zeta_4 exponents
_REAL_Y = ((1, 0), (0, 0))   # swap
_QUAT_I = ((0, 1), (1, 3))   # diag(i, -i)
_QUAT_J = ((1, 0), (2, 0))   # [[0,1],[-1,0]]


def _mono2(M: int, spec) -> Mono:
    perm, exps = spec
    scale = M // 4
    return Mono(M, perm, [e * scale for e in exps])


def _pauli_real(M: int, m: int, quaternion_last: bool) -> list:
    """Generators (X_1, Y_1, ..., X_m, Y_m) as Kronecker products."""
    size = 2 ** m
    gens = []
    for r in range(m):
        for which in (0, 1):
            if quaternion_last and r == m - 1:
                local = _mono2(M, _QUAT_I if which == 0 else _QUAT_J)
            else:
                local = _mono2(M, _REAL_X if which == 0 else _REAL_Y)
            mat = Mono.identity(M, 1)
            for rr in range(m):
                mat = mat.kron(local if rr == r else Mono.identity(M, 2))
            gens.append(mat)
    if m == 0:
        return []
    assert all(g.n == size for g in gens)
    return gens


def _fill_degrees(T: FinAbGroup, M: int, gens: Sequence[Mono], n: int, phase=None) -> dict:
    X = {}
    for t in T.elements():
        mat = Mono.identity(M, n)
        for j, c in enumerate(t):
            if c:
                mat = mat * (gens[j] ** c)
        if phase is not None:
            mat = mat.scale(phase(t))
        X[t] = mat
    return X


def _block_swap(M: int, n: int) -> Mono:
    h = n // 2
    return _perm_mono(M, [(j + h) % n for j in range(n)])


def build_gda(label: str) -> GDAlgebra:
    family, param = parse_label(label)
    label = make_label(family, param)
    if family in (FAMILY_REAL, FAMILY_QUAT, FAMILY_CPLX_R):
        m = param
        M = 4
        quat = family == FAMILY_QUAT
        gens = _pauli_real(M, m, quat)
        n = 2 ** m
        if family == FAMILY_CPLX_R:
            gens = gens + [Mono.identity(M, n).scale(1)]   # i * identity
            T = FinAbGroup((2,) * (2 * m + 1))
        else:
            T = FinAbGroup((2,) * (2 * m))
        X = _fill_degrees(T, M, gens, n)
        if family == FAMILY_REAL:
            phi = Mono.transpose
        else:
            def phi(A):
                return A.transpose().conj()
        return GDAlgebra(label, family, m, T, M, X, phi, False)
    if family in (FAMILY_SPLIT_R, FAMILY_SPLIT_H):
        m = param
        M = 4
        quat = family == FAMILY_SPLIT_H
        base = _pauli_real(M, m, quat)
        n = 2 ** m
        gens = [g.direct_sum(g) for g in base]
        ident = Mono.identity(M, n)
        gens.append(ident.direct_sum(ident.scale(2)))       # (1, -1)
        T = FinAbGroup((2,) * (2 * m + 1))
        X = _fill_degrees(T, M, gens, 2 * n)
        S = _block_swap(M, 2 * n)

        if quat:
            def phi(A):
                return S * A.transpose().conj() * S
        else:
            def phi(A):
                return S * A.transpose() * S
        return GDAlgebra(label, family, m, T, M, X, phi, False)
    # D(l_1,...,l_m;C)
    ells = param
    M = reduce(lcm, [2 * l for l in ells] + [4], 1)
    n = reduce(lambda a, b: a * b, ells, 1)
    gens = []
    Ps = []
    for r, l in enumerate(ells):
        Xl = Mono(M, range(l), [((j + 1) % l) * (M // l) for j in range(l)])
        Yl = _perm_mono(M, [(j + 1) % l for j in range(l)])
        Pl = _perm_mono(M, [l - 2 - a if a <= l - 2 else a for a in range(l)])
        for local in (Xl, Yl):
            mat = Mono.identity(M, 1)
            for rr, ll in enumerate(ells):
                mat = mat.kron(local if rr == r else Mono.identity(M, ll))
            gens.append(mat)
        Ps.append(Pl)
    P = Mono.identity(M, 1)
    for Pl in Ps:
        P = P.kron(Pl)
    T = FinAbGroup(tuple(l for l in ells for _ in (0, 1)))

    def phase(t):
        return -sum(t[2 * r] * t[2 * r + 1] * (M // (2 * l)) for r, l in enumerate(ells))
    X = _fill_degrees(T, M, gens, n, phase)
    Pinv = P.transpose()

    def phi(A):
        return Pinv * A.transpose().conj() * P
    return GDAlgebra(label, family, ells, T, M, X, phi, True)


def realize_automorphism(D: GDAlgebra, images: Sequence, max_tries: int = 4096) -> Optional[tuple]:
    """Find root-of-unity exponents c_i such that X_{b_i} -> zeta^{c_i} X_{images[i]}
    extends to a D_e-linear algebra automorphism; None when no such choice exists."""
    T = D.T
    n = len(T.orders)
    gens = [T.basis(j) for j in range(n)]
    options = list(range(D.M)) if D.De == "C" else [0, D.M // 2]
    if len(options) ** n > max_tries:
        options = options[:max(2, int(max_tries ** (1.0 / max(n, 1))))]
    # pairwise commutation must already match
    for i in range(n):
        for j in range(n):
            if D.beta(images[i], images[j]) != D.beta(gens[i], gens[j]):
                return None

    def ordered(t, imgs, cs):
        out = D.one()
        for i, c in enumerate(t):
            img = D.X_elem(imgs[i], cs[i])
            for _ in range(c):
                out = D.multiply(out, img)
        return out

    zeros = (0,) * n

    def psi(t, cs):
        # X_t = ordered(t)/coeff, so its image carries the same scalar
        src = ordered(t, gens, zeros)
        img = ordered(t, images, cs)
        return HomElem(img.degree, img.coeff / src.coeff)

    def ok(cs):
        # X_{b_i}^{ord} = zeta^k X_e must be preserved, and so must the
        # structure constants on generator pairs
        for i in range(n):
            o = T.orders[i]
            lhs = D.one()
            img = D.X_elem(images[i], cs[i])
            for _ in range(o):
                lhs = D.multiply(lhs, img)
            src = D.one()
            for _ in range(o):
                src = D.multiply(src, D.X_elem(gens[i]))
            if lhs != src:
                return False
        return True

    from itertools import product as iproduct
    for cs in iproduct(options, repeat=n):
        if ok(cs):
            elems = T.elements()
            table = {t: psi(t, cs) for t in elems}
            good = all(D.multiply(table[s], table[t]) ==
                       HomElem(table[T.add(s, t)].degree,
                               table[T.add(s, t)].coeff * Cyc.root(D.M, D.sigma(s, t)))
                       for s in elems for t in elems)
            if good:
                return tuple(cs)
    return None
