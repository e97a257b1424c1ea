"""Equivalence classes of fine gradings on matrix algebras with involution.

A grading M(D, phi0, q, s, dbar, delta) is determined up to equivalence by
q, s, delta, a signature (in the three cases where one is defined) and the
orbit of the multiset of degrees of dbar in a quotient V = T/H under a
group A acting on V:

    case 1   D(2m;+-1)    H = 1          A = Aut(T, mu) = O(V, mu)
    case 2a  D(2m+1;R)    H = supp K     A = Sp(V, beta)
    case 2b  D(l;C)       H = T^[2]      A = image of Aut(T, beta) = Sp(V, F)
    case 3   D(2m+1;+-1)  H = supp K     A = V x| O(V, mu)   (affine)

For the exchange construction M(D,k) x M(D,k)^op only m and k matter.
Points of V are bitmasks; multisets are reported as sorted bit vectors.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt
from typing import Optional, Sequence

from sympy import factorint

from .abelian import to_V, universal_group_M, universal_group_Mex
from .cyclo import Cyc
from .gdivalg import (FAMILY_CPLX, FAMILY_CPLX_R, FAMILY_QUAT, FAMILY_REAL, FAMILY_SPLIT_H,
                      FAMILY_SPLIT_R, GDAlgebra, HomElem, build_gda, make_label)
from .gf2forms import (GroupAction, QuadSpace2, affine_isometry_group, build_flag,
                       canonical_multiset, flag_stabilizer, isometry_group, multiset_orbits,
                       quad_from_function)
from .gradedmat import GradingParams, MexParams, is_2_elementary, sign_degrees, validate

# family ids in the order of the fine-grading theorem
FAM_R = "M(2m;R)"
FAM_H = "M(2m;H)"
FAM_C1 = "M(I)(l;C)"
FAM_C2 = "M(II)(2m+1;C)"
FAM_EX_R = "M(I)(2m;R;k)"
FAM_EX_H = "M(I)(2m;H;k)"
FAM_S_R = "M(II)(2m+1;R)"
FAM_S_H = "M(II)(2m+1;H)"
FAMILY_ORDER = (FAM_R, FAM_H, FAM_C1, FAM_C2, FAM_EX_R, FAM_EX_H, FAM_S_R, FAM_S_H)

_FAMILY_OF = {FAMILY_REAL: FAM_R, FAMILY_QUAT: FAM_H, FAMILY_CPLX: FAM_C1,
              FAMILY_CPLX_R: FAM_C2, FAMILY_SPLIT_R: FAM_S_R, FAMILY_SPLIT_H: FAM_S_H}

KINDS = ("orthogonal", "symplectic", "second-kind", "exchange")


@dataclass(frozen=True)
class ClassInvariant:
    family: str
    gda: str
    q: int
    s: int
    k: int
    delta: int
    signature: Optional[int]      # |n0+ - n0-| of dbar
    multiset: tuple               # sorted bit vectors of cosets in V
    universal: str
    matrix_signature: Optional[int] = field(default=None, compare=False)
    representative: object = field(default=None, compare=False, repr=False)

    def to_dict(self) -> dict:
        out = {"family": self.family, "gda": self.gda, "q": self.q, "s": self.s, "k": self.k,
               "delta": self.delta, "signature": self.signature,
               "multiset": [list(v) for v in self.multiset], "universal": self.universal,
               "matrix_signature": self.matrix_signature}
        if self.representative is not None:
            out["representative"] = self.representative.to_dict()
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, obj: dict) -> "ClassInvariant":
        rep = obj.get("representative")
        if rep is not None:
            from .gradedmat import params_from_dict
            rep = params_from_dict(rep)
        return cls(obj["family"], obj["gda"], int(obj["q"]), int(obj["s"]), int(obj["k"]),
                   int(obj["delta"]), obj["signature"],
                   tuple(tuple(v) for v in obj["multiset"]), obj["universal"],
                   obj.get("matrix_signature"), rep)


# ---------------------------------------------------------------- quotient data

def case_of(D: GDAlgebra) -> str:
    return {FAMILY_REAL: "1", FAMILY_QUAT: "1", FAMILY_CPLX_R: "2a", FAMILY_CPLX: "2b",
            FAMILY_SPLIT_R: "3", FAMILY_SPLIT_H: "3"}[D.family]


def _bits(x: int, n: int) -> tuple:
    return tuple((x >> i) & 1 for i in range(n))


def _pairing_rows(D: GDAlgebra, n: int) -> tuple:
    T = D.T
    rows = []
    for i in range(n):
        row = 0
        for j in range(n):
            if D.beta(T.basis(i), T.basis(j)):
                row |= 1 << j
        rows.append(row)
    return tuple(rows)


@dataclass
class Quotient:
    """V = T/H with the acting group and the point <-> degree maps."""
    dim: int
    action: GroupAction
    to_point: object        # degree -> bitmask
    lift: object            # bitmask -> an admissible degree (or None)
    sign_point: Optional[int]


def _trivial_action(desc: str) -> GroupAction:
    act = GroupAction([0], [], desc)
    act._order = 1
    return act


@lru_cache(maxsize=None)
def quotient(label: str, delta: int) -> Quotient:
    D = build_gda(label)
    T = D.T
    case = case_of(D)
    n = len(T.orders)

    def admissible(t):
        x = HomElem(t, Cyc(D.M, 1))
        return D.apply_phi0(x) == HomElem(t, Cyc(D.M, delta))

    if case == "1":
        space = D.mu_space()
        act = isometry_group(space, "quad") if n else _trivial_action("O(0,2)")

        def to_point(t):
            return sum(v << i for i, v in enumerate(T.reduce(t)))

        def lift(v):
            t = _bits(v, n)
            return t if admissible(t) else None
        sign = 0 if delta == 1 else None
        return Quotient(n, act, to_point, lift, sign)
    if case == "2b":
        flag = build_flag(T, D.bichar())
        dim = flag.dim
        act = flag_stabilizer(flag) if dim else _trivial_action("Sp(V,F)")
        even = [j for j, o in enumerate(T.orders) if o % 2 == 0]

        def to_point(t):
            return to_V(T, t)

        def lift(v):
            x = [0] * n
            for kk, j in enumerate(even):
                if (v >> kk) & 1:
                    x[j] = 1
            return tuple(x)
        return Quotient(dim, act, to_point, lift, 0)
    # cases 2a and 3: H = {e, f} with f the last coordinate
    dim = n - 1
    if case == "2a":
        act = isometry_group(QuadSpace2(dim, _pairing_rows(D, dim)), "pairing") if dim \
            else _trivial_action("Sp(0,2)")
    else:
        space = quad_from_function(lambda x: 0 if D.mu(_bits(x, dim) + (0,)) == 1 else 1, dim) \
            if dim else None
        act = affine_isometry_group(space) if dim else _trivial_action("AO(0,2)")

    def to_point(t):
        t = T.reduce(t)
        return sum(v << i for i, v in enumerate(t[:dim]))

    def lift(v):
        for z in (0, 1):
            t = _bits(v, dim) + (z,)
            if admissible(t):
                return t
        return None
    return Quotient(dim, act, to_point, lift, 0 if case == "2a" else None)


# ---------------------------------------------------------------- signatures

def sign_test(D: GDAlgebra, d: HomElem, c: HomElem) -> int:
    """Sign of the real number c d phi0(c) (c d phi0(c) must have degree e)."""
    x = D.multiply(D.multiply(c, d), D.apply_phi0(c))
    if x.degree != D.T.zero():
        raise ValueError("c d phi0(c) is not of degree e")
    if not x.coeff.is_rational():
        raise ValueError("c d phi0(c) is not rational")
    v = x.coeff.rational()
    return 1 if v > 0 else -1


def square_roots_inv(D: GDAlgebra, t) -> list:
    """All s in T with s^2 = t^{-1}."""
    T = D.T
    target = T.neg(t)
    return [s for s in T.elements() if T.mul(2, s) == target]


def entry_signs(params: GradingParams) -> Optional[list]:
    """For each d_i, its sign if d_i lies in the signed coset, else 0;
    None when the family has no signature."""
    D = validate(params)
    free = sign_degrees(D, params.delta)
    if free is None:
        return None
    out = []
    for t, e in params.d:
        t = D.T.reduce(t)
        if t not in free:
            out.append(0)
            continue
        if D.family == FAMILY_CPLX:
            s = square_roots_inv(D, t)[0]
            out.append(sign_test(D, HomElem(t, Cyc(D.M, e)), D.X_elem(s)))
        else:
            out.append(e)
    return out


def signature_d(params: GradingParams) -> Optional[int]:
    """|n0+ - n0-|, or None when the family defines no signature."""
    signs = entry_signs(params)
    if signs is None:
        return None
    return abs(sum(signs))


def signature_factor(D: GDAlgebra) -> int:
    sq = len(set(D.T.power_subgroup(2)))
    r = isqrt(sq)
    if r * r != sq or D.ell % r:
        raise ValueError("signature scale is not an integer")
    return D.ell // r


def signature_phi(params: GradingParams) -> Optional[int]:
    sd = signature_d(params)
    if sd is None:
        return None
    return sd * signature_factor(build_gda(params.gda))


# ---------------------------------------------------------------- invariants

def _universal(params) -> str:
    D = build_gda(params.gda)
    if isinstance(params, MexParams):
        return universal_group_Mex(D.T, params.k).iso_type()
    U, _, _ = universal_group_M(D.T, params.q, params.s, [D.T.reduce(t) for t in params.degrees])
    return U.iso_type()


def class_invariant(params) -> ClassInvariant:
    if isinstance(params, MexParams):
        D = build_gda(params.gda)
        if D.family not in (FAMILY_REAL, FAMILY_QUAT):
            raise ValueError("the exchange construction is classified over D(2m;+-1) only")
        fam = FAM_EX_R if D.family == FAMILY_REAL else FAM_EX_H
        return ClassInvariant(fam, D.label, 0, 0, params.k, 1, None, (), _universal(params),
                              None, params)
    D = validate(params)
    Q = quotient(D.label, params.delta)
    pts = [Q.to_point(t) for t in params.degrees]
    canon = canonical_multiset(pts, Q.action) if pts else ()
    ms = tuple(_bits(v, Q.dim) for v in canon)
    sig = signature_d(params)
    msig = None if sig is None else sig * signature_factor(D)
    return ClassInvariant(_FAMILY_OF[D.family], D.label, params.q, params.s, params.k,
                          params.delta, sig, ms, _universal(params), msig, params)


def equivalent(p1, p2) -> bool:
    return class_invariant(p1) == class_invariant(p2)


# ---------------------------------------------------------------- involution kinds

def involution_kind(params) -> str:
    if isinstance(params, MexParams):
        return "exchange"
    D = build_gda(params.gda)
    t = D.involution_type()
    if t in ("orthogonal", "symplectic"):
        if params.delta == -1:
            return "symplectic" if t == "orthogonal" else "orthogonal"
        return t
    return t


def complex_size(D: GDAlgebra, k: int) -> int:
    """Size n of the complexified matrix algebra M_n(C) (per simple factor)."""
    if D.family == FAMILY_CPLX:
        return k * D.ell
    return k * 2 ** D.m


# ---------------------------------------------------------------- enumeration

def _prime_power_multisets(n: int) -> list:
    """Sorted tuples of prime powers >= 2 whose product divides n."""
    pps = sorted({p ** e for p, a in factorint(n).items() for e in range(1, a + 1)})
    out = []

    def rec(start, prod, cur):
        if cur:
            out.append(tuple(cur))
        for i in range(start, len(pps)):
            if n % (prod * pps[i]) == 0:
                rec(i, prod * pps[i], cur + [pps[i]])
    rec(0, 1, [])
    return out


def _division_candidates(kind: str, n: int) -> list:
    """(label, delta, k) triples for the fine families of the given kind."""
    out = []
    ms = [m for m in range(0, 8) if n % (2 ** m) == 0]
    if kind in ("orthogonal", "symplectic"):
        for m in ms:
            for fam, lab in ((FAMILY_REAL, f"D({2 * m};+1)"), (FAMILY_QUAT, f"D({2 * m};-1)")):
                if fam == FAMILY_QUAT and m == 0:
                    continue
                for delta in (1, -1):
                    p = GradingParams(lab, 0, 0, (), delta)
                    if involution_kind(p) == kind:
                        out.append((lab, delta, n // 2 ** m))
    elif kind == "second-kind":
        for ells in _prime_power_multisets(n):
            if all(l == 2 for l in ells):
                continue
            l = 1
            for x in ells:
                l *= x
            out.append((make_label(FAMILY_CPLX, ells), 1, n // l))
        for m in ms:
            out.append((f"D({2 * m + 1};R)", 1, n // 2 ** m))
    elif kind == "exchange":
        for m in ms:
            out.append((f"D({2 * m + 1};+1)", 1, n // 2 ** m))
            if m >= 1:
                out.append((f"D({2 * m + 1};-1)", 1, n // 2 ** m))
    else:
        raise ValueError(f"unknown involution kind {kind!r}")
    return out


def representatives(label: str, delta: int, k: int) -> list:
    """One GradingParams per equivalence class of fine gradings
    M(D, q, s, dbar, delta) with q + 2s = k."""
    D = build_gda(label)
    Q = quotient(D.label, delta)
    pts = [v for v in range(1 << Q.dim) if Q.lift(v) is not None]
    has_sig = sign_degrees(D, delta) is not None
    out = []
    from .gradedmat import division_is_fine
    if not division_is_fine(D):
        return out
    for q in range(k, -1, -1):
        if (k - q) % 2:
            continue
        s = (k - q) // 2
        if q == 2 and s == 0 and D.family == FAMILY_CPLX:
            continue
        for ms in multiset_orbits(Q.action, q, pts) if q else [()]:
            if q == 2 and s == 0 and ms[0] == ms[1]:
                continue
            degs = [Q.lift(v) for v in ms]
            ne = sum(1 for v in ms if v == Q.sign_point) if has_sig else 0
            sigs = list(range(ne % 2, ne + 1, 2)) if has_sig else [None]
            for sig in sigs:
                plus = (ne + sig) // 2 if has_sig else 0
                d = []
                seen = 0
                for v, t in zip(ms, degs):
                    e = 1
                    if has_sig and v == Q.sign_point:
                        e = 1 if seen < plus else -1
                        seen += 1
                    d.append((t, e))
                out.append(GradingParams(D.label, q, s, tuple(d), delta))
    return out


def _mex_candidates(n: int) -> list:
    out = []
    for m in range(0, 8):
        if n % (2 ** m):
            continue
        k = n // 2 ** m
        out.append(MexParams(f"D({2 * m};+1)", k))
        if m >= 1:
            out.append(MexParams(f"D({2 * m};-1)", k))
    return out


def _sort_key(inv: ClassInvariant):
    D = build_gda(inv.gda)
    dparam = tuple(D.param) if isinstance(D.param, tuple) else (D.param,)
    return (FAMILY_ORDER.index(inv.family), dparam, -inv.q, inv.s, -inv.k, inv.multiset,
            -1 if inv.signature is None else inv.signature)


def enumerate_fine(n: int, kind: str, families: Optional[Sequence[str]] = None,
                   signature: Optional[Sequence[int]] = None) -> list:
    """Equivalence classes of fine gradings on the real forms of M_n(C)
    (or M_n(C) x M_n(C) for ``kind='exchange'``) with an involution of the
    given kind.  ``signature`` filters on the matrix signature."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > 32:
        raise ValueError(f"n = {n} exceeds the supported maximum 32")
    out = []
    for label, delta, k in _division_candidates(kind, n):
        for p in representatives(label, delta, k):
            out.append(class_invariant(p))
    if kind == "exchange":
        for p in _mex_candidates(n):
            D = build_gda(p.gda)
            if p.k >= 3 or not is_2_elementary(D.T):
                out.append(class_invariant(p))
    if families is not None:
        out = [c for c in out if c.family in families]
    if signature is not None:
        wanted = set(signature)
        out = [c for c in out if c.matrix_signature in wanted]
    seen = set()
    uniq = []
    for c in sorted(out, key=_sort_key):
        if c not in seen:
            seen.add(c)
            uniq.append(c)
    return uniq


# ---------------------------------------------------------------- Clifford rule

def clifford_inner_outer(params: GradingParams) -> str:
    """'inner' when the grading induced on the center of the Clifford
    algebra is trivial, else 'outer'."""
    D = validate(params)
    if D.family not in (FAMILY_REAL, FAMILY_QUAT) or involution_kind(params) != "orthogonal":
        raise ValueError("the rule applies to M(2m;R/H) with an orthogonal involution")
    if complex_size(D, params.k) % 2:
        raise ValueError("the rule needs even matrix size")
    size = D.T.size()
    if size > 4:
        return "inner"
    if size == 1:
        return "inner" if params.q == 0 else "outer"
    Q = quotient(D.label, params.delta)
    permissible = [v for v in range(1 << Q.dim) if Q.lift(v) is not None]
    pts = [Q.to_point(t) for t in params.degrees]
    parities = {pts.count(v) % 2 for v in permissible}
    return "inner" if len(parities) == 1 else "outer"
