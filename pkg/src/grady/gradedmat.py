"""Graded matrix algebras M_k(D) with involution.

Basis elements are tuples ``(c, i, j, t)``: the matrix unit E_ij tensored
with X_t in copy ``c`` (always 0, except in the exchange construction where
copy 1 is the opposite algebra).  Indices i, j run from 0 to k-1.

For M(D, phi0, q, s, dbar, delta) the involution is
X -> Phi^{-1} phi0(X^T) Phi with Phi = diag(d_1, ..., d_q) followed by s
hyperbolic blocks [[0, 1], [delta, 0]].  On basis elements this reads
E_ij (x) x -> E_{pi(j) pi(i)} (x) c_j^{-1} phi0(x) c_i, where c_a is the
nonzero entry of row a of Phi and pi pairs the hyperbolic indices.

Dimensions of components are counted over D_e unless a function says
otherwise.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Optional, Sequence

from .abelian import FinAbGroup, Presentation, lcm, universal_group_M, universal_group_Mex
from .cyclo import Cyc, rank_cyc, solve_linear
from .gdivalg import (FAMILY_CPLX, FAMILY_CPLX_R, FAMILY_QUAT, FAMILY_REAL, FAMILY_SPLIT_H,
                      FAMILY_SPLIT_R, GDAlgebra, HomElem, build_gda)

MAX_REFINE_T = 9


# ---------------------------------------------------------------- parameters

@dataclass(frozen=True)
class GradingParams:
    gda: str
    q: int
    s: int
    d: tuple = ()          # ((t, sign), ...)
    delta: int = 1

    def __post_init__(self):
        object.__setattr__(self, "d", tuple((tuple(int(v) for v in t), int(e)) for t, e in self.d))

    @property
    def k(self) -> int:
        return self.q + 2 * self.s

    @property
    def degrees(self) -> list:
        return [t for t, _ in self.d]

    @property
    def signs(self) -> list:
        return [e for _, e in self.d]

    def to_dict(self) -> dict:
        return {"gda": self.gda, "q": self.q, "s": self.s,
                "d": [{"t": list(t), "sign": e} for t, e in self.d], "delta": self.delta}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, obj: dict) -> "GradingParams":
        try:
            d = tuple((tuple(x["t"]), int(x.get("sign", 1))) for x in obj.get("d", []))
            return cls(str(obj["gda"]), int(obj["q"]), int(obj["s"]), d, int(obj.get("delta", 1)))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed params: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "GradingParams":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class MexParams:
    """Parameters of the exchange construction M(D,k) x M(D,k)^op."""
    gda: str
    k: int

    def to_dict(self) -> dict:
        return {"gda": self.gda, "k": self.k, "exchange": True}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def params_from_dict(obj: dict):
    if obj.get("exchange"):
        return MexParams(str(obj["gda"]), int(obj["k"]))
    return GradingParams.from_dict(obj)


def sign_degrees(D: GDAlgebra, delta: int) -> Optional[list]:
    """Degrees at which the sign of d_i is an invariant, or None when the
    family carries no signature."""
    T = D.T
    if D.family in (FAMILY_REAL, FAMILY_QUAT) and delta == 1:
        return [T.zero()]
    if D.family == FAMILY_CPLX_R:
        return [T.zero()]
    if D.family == FAMILY_CPLX:
        return sorted(set(T.power_subgroup(2)))
    return None


def validate(params: GradingParams) -> GDAlgebra:
    """Check the parameter invariants and return the graded-division algebra."""
    D = build_gda(params.gda)
    if params.q < 0 or params.s < 0 or params.k < 1:
        raise ValueError("need q, s >= 0 and q + 2s >= 1")
    if len(params.d) != params.q:
        raise ValueError(f"expected {params.q} degrees, got {len(params.d)}")
    if params.delta not in (1, -1):
        raise ValueError("delta must be +1 or -1")
    if D.center != "R" and params.delta != 1:
        raise ValueError("delta must be +1 when the center is not R")
    free = sign_degrees(D, params.delta)
    for i, (t, e) in enumerate(params.d):
        if e not in (1, -1):
            raise ValueError(f"d[{i}]: sign must be +1 or -1")
        t = D.T.reduce(t)
        x = HomElem(t, Cyc(D.M, e))
        if D.apply_phi0(x) != HomElem(t, Cyc(D.M, e * params.delta)):
            raise ValueError(f"d[{i}]: phi0(d) != delta*d for degree {t}")
        if e == -1 and (free is None or t not in free):
            raise ValueError(f"d[{i}]: the sign is not an invariant at degree {t}; use +1")
    return D


# ---------------------------------------------------------------- algebras

@dataclass
class GradedMatAlg:
    params: object
    D: GDAlgebra
    k: int
    U: FinAbGroup
    u: list                  # degrees of the u_i in U
    t_img: list              # images in U of the generators of T
    exchange: bool
    basis: list
    degree: dict             # basis element -> degree in U
    components: dict         # degree -> list of basis elements
    pi: list = field(default_factory=list)
    cdiag: list = field(default_factory=list)   # HomElem c_a
    _phi: dict = field(default_factory=dict, repr=False)

    @property
    def M(self) -> int:
        return self.D.M

    def deg_T(self, t) -> tuple:
        return self.U.combo(list(self.D.T.reduce(t)), self.t_img)

    def dim(self) -> int:
        """Dimension over D_e."""
        return len(self.basis)

    def real_dim(self) -> int:
        return len(self.basis) * self.D.dim_e

    def census(self) -> Counter:
        """Multiset of component dimensions over D_e."""
        return Counter(len(v) for v in self.components.values())

    # -- structure
    def mul_basis(self, a, b):
        """(basis, root exponent) with a*b = zeta^k basis, or None."""
        c1, i, j, s = a
        c2, k, l, t = b
        if c1 != c2:
            return None
        D = self.D
        if c1 == 0:
            if j != k:
                return None
            return (0, i, l, D.T.add(s, t)), D.sigma(s, t)
        if l != i:
            return None
        return (1, k, j, D.T.add(t, s)), D.sigma(t, s)

    def phi_basis(self, b):
        """(basis, coefficient) with phi(b) = coefficient * basis."""
        if b in self._phi:
            return self._phi[b]
        c, i, j, t = b
        D = self.D
        if self.exchange:
            out = ((1 - c, i, j, t), Cyc(D.M, 1))
        else:
            x = D.apply_phi0(D.X_elem(t))
            y = D.multiply(D.multiply(D.inverse(self.cdiag[j]), x), self.cdiag[i])
            out = ((0, self.pi[j], self.pi[i], y.degree), y.coeff)
        self._phi[b] = out
        return out

    # -- general elements: dicts basis -> Cyc over a field Q(zeta_F), M | F
    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for a, ca in x.items():
            F = ca.M
            for b, cb in y.items():
                r = self.mul_basis(a, b)
                if r is None:
                    continue
                bas, k = r
                v = ca * cb * Cyc.root(F, k * (F // self.M))
                out[bas] = out.get(bas, Cyc(F, 0)) + v
        return {b: v for b, v in out.items() if not v.is_zero()}

    def phi(self, x: dict) -> dict:
        out: dict = {}
        for a, ca in x.items():
            F = ca.M
            bas, coeff = self.phi_basis(a)
            lam = ca.conj() if self.D.conjugating else ca
            out[bas] = out.get(bas, Cyc(F, 0)) + lam * lift(coeff, F)
        return {b: v for b, v in out.items() if not v.is_zero()}


def lift(x: Cyc, F: int) -> Cyc:
    """Embed Q(zeta_M) into Q(zeta_F) for M | F."""
    if x.M == F:
        return x
    if F % x.M:
        raise ValueError("field order must divide")
    # write x in the power basis of zeta_M and substitute
    out = Cyc(F, 0)
    step = F // x.M
    for k, a in enumerate(x.c):
        if a:
            out = out + Cyc.root(F, k * step) * a
    return out


def _basis_order(D: GDAlgebra, k: int, copies: int) -> list:
    elems = D.T.elements()
    return [(c, i, j, t) for c in range(copies) for i in range(k) for j in range(k) for t in elems]


def build_M(params: GradingParams) -> GradedMatAlg:
    """The graded algebra with involution M(D, phi0, q, s, dbar, delta),
    graded by its universal group."""
    D = validate(params)
    T = D.T
    q, s, k = params.q, params.s, params.k
    tbar = [T.reduce(t) for t in params.degrees]
    U, u, t_img = universal_group_M(T, q, s, tbar)
    pi = list(range(q))
    cdiag = [HomElem(t, Cyc(D.M, e)) for t, e in zip(tbar, params.signs)]
    for r in range(s):
        p = q + 2 * r
        pi += [p + 1, p]
        cdiag += [D.one(), HomElem(T.zero(), Cyc(D.M, params.delta))]
    basis = _basis_order(D, k, 1)
    alg = GradedMatAlg(params, D, k, U, list(u), list(t_img), False, basis, {}, {}, pi, cdiag)
    _assign_degrees(alg)
    return alg


def build_Mex(params: MexParams) -> GradedMatAlg:
    """M(D,k) x M(D,k)^op with the exchange involution, graded by T x Z^(k-1)."""
    D = build_gda(params.gda)
    k = params.k
    if k < 1:
        raise ValueError("need k >= 1")
    T = D.T
    U = universal_group_Mex(T, k)
    nt = len(T.orders)
    t_img = [U.basis(j) for j in range(nt)]
    u = [U.zero()] + [U.basis(nt + i) for i in range(k - 1)]
    basis = _basis_order(D, k, 2)
    alg = GradedMatAlg(params, D, k, U, u, t_img, True, basis, {}, {})
    _assign_degrees(alg)
    return alg


def _assign_degrees(alg: GradedMatAlg) -> None:
    U = alg.U
    for b in alg.basis:
        _, i, j, t = b
        alg.degree[b] = U.add(U.sub(alg.u[i], alg.u[j]), alg.deg_T(t))
    comps: dict = {}
    for b in alg.basis:
        comps.setdefault(alg.degree[b], []).append(b)
    alg.components = comps


def build(params) -> GradedMatAlg:
    return build_Mex(params) if isinstance(params, MexParams) else build_M(params)


# ---------------------------------------------------------------- closed forms

def closed_form_components(alg: GradedMatAlg) -> list:
    """Components predicted by the closed forms, as frozensets of basis
    elements: span(E_11..E_kk) (x) D_t; the hyperbolic corners
    E_{p,p+1} (x) D_t and E_{p+1,p} (x) D_t; and
    E_ij (x) D_t + E_{pi(j) pi(i)} (x) D_t' for the remaining i != j."""
    D = alg.D
    k = alg.k
    elems = D.T.elements()
    copies = (0, 1) if alg.exchange else (0,)
    out = []
    for t in elems:
        out.append(frozenset((c, i, i, t) for c in copies for i in range(k)))
    if alg.exchange:
        for i in range(k):
            for j in range(k):
                if i != j:
                    for t in elems:
                        out.append(frozenset((c, i, j, t) for c in copies))
        return out
    seen = set()
    for i in range(k):
        for j in range(k):
            if i == j:
                continue
            for t in elems:
                b = (0, i, j, t)
                if b in seen:
                    continue
                if alg.pi[j] == i:          # hyperbolic corner
                    grp = frozenset([b])
                else:
                    grp = frozenset([b, alg.phi_basis(b)[0]])
                seen |= grp
                out.append(grp)
    return out


def closed_form_census(params) -> Counter:
    """Component dimensions (over D_e) from the closed forms alone."""
    D = build_gda(params.gda)
    n = D.T.size()
    if isinstance(params, MexParams):
        k = params.k
        return Counter({2 * k: n, 2: k * (k - 1) * n}) if k > 1 else Counter({2: n})
    k, s = params.k, params.s
    c = Counter({k: n})
    if s:
        c[1] += 2 * s * n
    pairs = (k * (k - 1) - 2 * s) // 2 * n
    if pairs:
        c[2] += pairs
    return c


# ---------------------------------------------------------------- verification

@dataclass
class Report:
    ok: bool
    failure: str = ""
    witness: tuple = ()
    checks: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def verify_grading(alg: GradedMatAlg, degree: Optional[dict] = None) -> Report:
    """Check the grading axioms on basis elements: multiplicativity,
    phi preserves degrees, phi^2 = id, components partition the basis.
    ``degree`` overrides the stored degree map (for negative controls)."""
    deg = alg.degree if degree is None else degree
    U = alg.U
    checks = {}
    total = sum(len(v) for v in alg.components.values())
    covered = set()
    for g, comp in alg.components.items():
        for b in comp:
            if deg[b] != g or b in covered:
                return Report(False, "partition", (g, b))
            covered.add(b)
    if total != len(alg.basis) or covered != set(alg.basis):
        return Report(False, "dimension", (total, len(alg.basis)))
    checks["dimension"] = total
    nprod = 0
    # products vanish unless inner indices match, so loop over matching pairs
    by_row: dict = {}
    for b in alg.basis:
        by_row.setdefault((b[0], b[1] if b[0] == 0 else b[2]), []).append(b)
    for a in alg.basis:
        c, i, j, _ = a
        key = (c, j) if c == 0 else (c, i)
        for b in by_row.get(key, []):
            r = alg.mul_basis(a, b)
            if r is None:
                continue
            nprod += 1
            if deg[r[0]] != U.add(deg[a], deg[b]):
                return Report(False, "multiplicativity", (a, b, r[0]))
    checks["products"] = nprod
    F = alg.M
    for b in alg.basis:
        img, coeff = alg.phi_basis(b)
        if deg[img] != deg[b]:
            return Report(False, "phi degree", (b, img))
        back = alg.phi({img: coeff})
        if back != {b: Cyc(F, 1)}:
            return Report(False, "phi^2", (b, img))
    checks["phi"] = len(alg.basis)
    return Report(True, checks=checks)


def check_closed_forms(alg: GradedMatAlg) -> Report:
    actual = {frozenset(v) for v in alg.components.values()}
    predicted = set(closed_form_components(alg))
    if actual != predicted:
        diff = sorted(actual ^ predicted, key=lambda s: sorted(s))[:1]
        return Report(False, "closed forms", tuple(diff))
    if alg.census() != closed_form_census(alg.params):
        return Report(False, "census", (alg.census(), closed_form_census(alg.params)))
    return Report(True)


# ---------------------------------------------------------------- refined gradings

@dataclass
class Refinement:
    """A grading of the same algebra by ``group`` whose components are spans
    of explicit (not necessarily monomial) elements."""
    alg: GradedMatAlg
    group: FinAbGroup
    components: dict        # degree -> list of elements (dict basis -> Cyc)
    coarse: dict            # degree -> degree of alg containing it
    description: str = ""

    def census(self) -> Counter:
        return Counter(len(v) for v in self.components.values())


def _field(elems) -> int:
    for x in elems:
        for v in x.values():
            return v.M
    return 4


def _in_span(vecs: list, x: dict, keys: list, F: int) -> bool:
    if not x:
        return True
    if not vecs:
        return False
    rows = [[lift(v.get(b, Cyc(F, 0)), F) for b in keys] for v in vecs]
    r0 = rank_cyc(rows, F)
    rows.append([lift(x.get(b, Cyc(F, 0)), F) for b in keys])
    return rank_cyc(rows, F) == r0


def _lift_vec(x: dict, F: int) -> dict:
    return {b: lift(c, F) for b, c in x.items() if not c.is_zero()}


def _reduce(rows: list, x: dict) -> dict:
    """Remainder of x modulo a fully reduced echelon basis ``rows``."""
    x = dict(x)
    for piv, w in rows:
        c = x.get(piv)
        if c is None:
            continue
        for b, v in w.items():
            y = x.get(b, 0 * c) - c * v
            if y.is_zero():
                x.pop(b, None)
            else:
                x[b] = y
    return x


def _echelon(vecs: list) -> list:
    """Reduced echelon basis of span(vecs): (pivot, vector with 1 at pivot)."""
    rows: list = []
    for v in vecs:
        r = _reduce(rows, v)
        if not r:
            continue
        piv = min(r)
        inv = r[piv].inverse()
        r = {b: c * inv for b, c in r.items()}
        new = []
        for p, w in rows:
            c = w.get(piv)
            if c is not None:
                w = _reduce([(piv, r)], w)
            new.append((p, w))
        rows = new + [(piv, r)]
    return rows


def verify_refinement(ref: Refinement) -> Report:
    """Grading axioms for a refinement, plus strictness: every new component
    sits inside an old one, the spans add up, and some old component splits."""
    alg = ref.alg
    G = ref.group
    F = _field(x for v in ref.components.values() for x in v)
    comps = {g: [_lift_vec(x, F) for x in vecs] for g, vecs in ref.components.items()}
    # containment and dimension
    for g, vecs in comps.items():
        old = ref.coarse[g]
        allowed = set(alg.components[old])
        for x in vecs:
            if not set(x) <= allowed:
                return Report(False, "containment", (g,))
    per_old: dict = {}
    for g, vecs in comps.items():
        per_old.setdefault(ref.coarse[g], []).extend(vecs)
    for old, basis in alg.components.items():
        vecs = per_old.get(old, [])
        if len(vecs) != len(basis) or len(_echelon(vecs)) != len(basis):
            return Report(False, "dimension", (old,))
    # multiplicativity and phi-invariance
    ech = {g: _echelon(vecs) for g, vecs in comps.items()}
    for g, vecs in comps.items():
        for h, wecs in comps.items():
            gh = G.add(g, h)
            for x in vecs:
                for y in wecs:
                    p = _lift_vec(alg.mul(x, y), F)
                    if not p:
                        continue
                    if gh not in comps or _reduce(ech[gh], p):
                        return Report(False, "multiplicativity", (g, h))
        for x in vecs:
            if _reduce(ech[g], _lift_vec(alg.phi(x), F)):
                return Report(False, "phi", (g,))
    strict = len(comps) > len(alg.components)
    if not strict:
        return Report(False, "not strict", ())
    return Report(True, checks={"components": len(comps)})


def refine_equal_degrees(params: GradingParams) -> Refinement:
    """For q = 2, s = 0 and t_1 = t_2 (so d_2 = mu d_1), the U x Z_2-grading
    with components I (x) D_t, diag(1,-1) (x) D_t, [[0, mu], [1, 0]] (x) D_t and
    [[0, -mu], [1, 0]] (x) D_t."""
    if params.q != 2 or params.s != 0:
        raise ValueError("refine_equal_degrees needs q = 2 and s = 0")
    alg = build_M(params)
    D = alg.D
    T = D.T
    (t1, e1), (t2, e2) = params.d
    if T.reduce(t1) != T.reduce(t2):
        raise ValueError("refine_equal_degrees needs t_1 = t_2")
    mu = e1 * e2
    U = alg.U
    G = _extend(U, 2)
    z = U.sub(alg.u[1], alg.u[0])
    one = Cyc(D.M, 1)
    comps: dict = {}
    coarse: dict = {}

    def put(g_old, bit, vec):
        g = _embed(U, g_old, bit)
        comps.setdefault(g, []).append(vec)
        coarse[g] = g_old

    for t in T.elements():
        gt = alg.deg_T(t)
        gz = U.add(z, gt)
        put(gt, 0, {(0, 0, 0, t): one, (0, 1, 1, t): one})
        put(gt, 1, {(0, 0, 0, t): one, (0, 1, 1, t): -one})
        put(gz, 0, {(0, 0, 1, t): one * mu, (0, 1, 0, t): one})
        put(gz, 1, {(0, 0, 1, t): one * (-mu), (0, 1, 0, t): one})
    return Refinement(alg, G, comps, coarse, "U x Z2 refinement of equal degrees")


def _extend(U: FinAbGroup, n: int) -> FinAbGroup:
    """U x Z_n with the new cyclic factor placed last among the torsion
    coordinates (free coordinates stay at the end)."""
    return FinAbGroup(U.orders + (n,), U.free_rank)


def _embed(U: FinAbGroup, g, bit: int) -> tuple:
    r = len(U.orders)
    return tuple(g[:r]) + (bit,) + tuple(g[r:])


def _int_refinement(params: GradingParams) -> Refinement:
    """Eigenspaces of psi = Int(A), A = [[0, d_2], [d_1, 0]], inside each
    component (the never-fine case q = 2, s = 0 over D(l;C))."""
    alg = build_M(params)
    D = alg.D
    d1, d2 = alg.cdiag
    A = {(0, 0, 1, d2.degree): d2.coeff, (0, 1, 0, d1.degree): d1.coeff}
    i1, i2 = D.inverse(d1), D.inverse(d2)
    Ainv = {(0, 0, 1, i1.degree): i1.coeff, (0, 1, 0, i2.degree): i2.coeff}

    def psi(x):
        return alg.mul(alg.mul(A, x), Ainv)

    # order of psi on the whole algebra
    n = 1
    cur = {b: psi({b: Cyc(D.M, 1)}) for b in alg.basis}
    base = {b: {b: Cyc(D.M, 1)} for b in alg.basis}
    while cur != base:
        cur = {b: psi(v) for b, v in cur.items()}
        n += 1
        if n > 4 * D.M:
            raise RuntimeError("psi has unexpectedly large order")
    F = lcm(D.M, n)
    G = _extend(alg.U, n)
    comps: dict = {}
    coarse: dict = {}
    for g, basis in alg.components.items():
        cols = [psi({b: Cyc(D.M, 1)}) for b in basis]
        mat = [[lift(cols[c].get(r, Cyc(D.M, 0)), F) for c in range(len(basis))] for r in basis]
        for kexp in range(n):
            lam = Cyc.root(F, kexp * (F // n))
            shifted = [[mat[r][c] - (lam if r == c else 0) for c in range(len(basis))]
                       for r in range(len(basis))]
            for v in solve_linear(shifted, F):
                vec = {b: x for b, x in zip(basis, v) if not x.is_zero()}
                h = _embed(alg.U, g, kexp)
                comps.setdefault(h, []).append(vec)
                coarse[h] = g
    return Refinement(alg, G, comps, coarse, f"eigenspaces of Int(A), order {n}")


# ---------------------------------------------------------------- fineness

def is_2_elementary(T: FinAbGroup) -> bool:
    return T.is_finite() and all(n in (1, 2) for n in T.orders)


def division_is_fine(D: GDAlgebra) -> bool:
    """Only Pauli-type D(l;C) with every l = 2 fails to be fine among the
    catalog families."""
    return not (D.family == FAMILY_CPLX and all(l == 2 for l in D.param))


def is_fine(params, witness: bool = True) -> tuple:
    """(fine?, certificate).  The certificate is a dict with a ``reason``
    and, for non-fine answers, a verified ``refinement`` when one is
    constructed explicitly."""
    if isinstance(params, MexParams):
        D = build_gda(params.gda)
        if params.k < 1:
            raise ValueError("need k >= 1")
        if D.family not in (FAMILY_REAL, FAMILY_QUAT):
            return False, {"reason": "exchange construction is fine only over D(2m;+-1)",
                           "refinement": None}
        if params.k >= 3 or not is_2_elementary(D.T):
            return True, {"reason": "k >= 3 or T not 2-elementary"}
        return False, {"reason": "k <= 2 with 2-elementary T (theorem-only)", "refinement": None}
    D = validate(params)
    if not division_is_fine(D):
        return False, {"reason": "graded-division algebra is not fine (theorem-only)",
                       "refinement": None}
    special = params.q == 2 and params.s == 0
    if D.family == FAMILY_CPLX and special:
        ref = None
        if witness and D.T.size() <= MAX_REFINE_T:
            ref = _int_refinement(params)
        return False, {"reason": "q = 2, s = 0 over D(l;C) is never fine"
                       + ("" if ref else " (theorem-only)"), "refinement": ref}
    if special and D.T.reduce(params.d[0][0]) == D.T.reduce(params.d[1][0]):
        ref = refine_equal_degrees(params) if witness else None
        return False, {"reason": "q = 2, s = 0 with deg d_1 = deg d_2", "refinement": ref}
    return True, {"reason": "fine by the case list"}


# ---------------------------------------------------------------- split search

def split_search(params: GradingParams, max_dim: int = 2) -> list:
    """Search for phi-compatible proper refinements obtained by splitting
    components of dimension <= max_dim into the lines spanned by b1 +- b2
    or b1, b2 (real coefficients, D_e = R).  Returns the refinements found,
    each as a list of lines (dicts)."""
    alg = build_M(params)
    D = alg.D
    if D.De != "R":
        raise ValueError("split search is implemented for D_e = R")
    F = D.M
    one = Cyc(F, 1)
    comps = sorted(alg.components.items())
    options = []        # per component: list of decompositions (lists of subspaces)
    for g, basis in comps:
        whole = [[{b: one} for b in basis]]
        opts = [whole]
        if len(basis) == 2 and len(basis) <= max_dim:
            b1, b2 = basis
            opts.append([[{b1: one}], [{b2: one}]])
            opts.append([[{b1: one, b2: one}], [{b1: one, b2: -one}]])
        options.append(opts)

    subspaces = []      # (component index, list of vectors)
    sub_index = {}
    for ci, opts in enumerate(options):
        for oi, dec in enumerate(opts):
            for si, vecs in enumerate(dec):
                sub_index[(ci, oi, si)] = len(subspaces)
                subspaces.append((ci, vecs))
    comp_of_degree = {g: ci for ci, (g, _) in enumerate(comps)}

    # where does the product of two subspaces land?  (target comp, set of
    # subspace ids of that comp containing every product), or None if zero
    def landing(a, b):
        ca, va = subspaces[a]
        cb, vb = subspaces[b]
        prods = [p for x in va for y in vb for p in [alg.mul(x, y)] if p]
        if not prods:
            return None
        g = alg.U.add(comps[ca][0], comps[cb][0])
        ct = comp_of_degree[g]
        keys = comps[ct][1]
        inside = set()
        for (c2, o2, s2), sid in sub_index.items():
            if c2 != ct:
                continue
            if all(_in_span(subspaces[sid][1], p, keys, F) for p in prods):
                inside.add(sid)
        return ct, inside

    cache: dict = {}

    def phi_ok(sid):
        ci, vecs = subspaces[sid]
        keys = comps[ci][1]
        return all(_in_span(vecs, alg.phi(x), keys, F) for x in vecs)

    phi_cache = {sid: phi_ok(sid) for sid in range(len(subspaces))}
    found = []
    for choice in iproduct(*[range(len(o)) for o in options]):
        if not any(choice):
            continue
        chosen = [sub_index[(ci, oi, si)] for ci, oi in enumerate(choice)
                  for si in range(len(options[ci][oi]))]
        if not all(phi_cache[s] for s in chosen):
            continue
        chosen_by_comp: dict = {}
        for sid in chosen:
            chosen_by_comp.setdefault(subspaces[sid][0], []).append(sid)
        ok = True
        rels = []
        for a in chosen:
            for b in chosen:
                key = (a, b)
                if key not in cache:
                    cache[key] = landing(a, b)
                land = cache[key]
                if land is None:
                    continue
                ct, inside = land
                hit = [s for s in chosen_by_comp[ct] if s in inside]
                if not hit:
                    ok = False
                    break
                rels.append((a, b, hit[0]))
            if not ok:
                break
        if not ok:
            continue
        # the pieces must carry pairwise distinct degrees in the universal group
        idx = {s: n for n, s in enumerate(chosen)}
        rows = []
        for a, b, c in rels:
            r = [0] * len(chosen)
            r[idx[a]] += 1
            r[idx[b]] += 1
            r[idx[c]] -= 1
            rows.append(tuple(r))
        _, imgs = Presentation(len(chosen), [list(r) for r in sorted(set(rows))]).cokernel()
        if len(set(imgs)) == len(chosen):
            found.append([subspaces[s][1] for s in chosen])
    return found


# ---------------------------------------------------------------- forms

def form_matrix(alg: GradedMatAlg) -> list:
    """Phi of the construction as a k x k matrix of HomElems (None = 0)."""
    k = alg.k
    mat = [[None] * k for _ in range(k)]
    for a in range(k):
        mat[a][alg.pi[a]] = alg.cdiag[a]
    return mat


@dataclass
class Diagonalized:
    q: int
    s: int
    dbar: list              # (t, sign)
    scale: list             # positive rationals: entry i equals scale[i] * sign * X_t
    P: list                 # base change (columns are the new basis)
    delta: int

    def params(self, gda: str) -> GradingParams:
        return GradingParams(gda, self.q, self.s, tuple(self.dbar), self.delta)


def _hmul(D, x, y):
    if x is None or y is None:
        return None
    return D.multiply(x, y)


def _hadd(D, x, y):
    if x is None:
        return y
    if y is None:
        return x
    if x.degree != y.degree:
        raise ValueError("inhomogeneous sum in the form")
    c = x.coeff + y.coeff
    return None if c.is_zero() else HomElem(x.degree, c)


def _hneg(x):
    return None if x is None else HomElem(x.degree, -x.coeff)


def _star(D, x):
    return None if x is None else D.apply_phi0(x)


def diagonalize_form(D: GDAlgebra, Phi: list, delta: int, degrees: Optional[list] = None,
                     group: Optional[FinAbGroup] = None, t_img: Optional[list] = None) -> Diagonalized:
    """Bring a delta-hermitian homogeneous matrix Phi over D to the shape
    diag(d_1..d_q) + s hyperbolic blocks [[0,1],[delta,0]].

    Convention: Phi_ij = B(e_i, e_j) with B(xa, yb) = phi0(a) B(x,y) b, so a
    base change P (new e'_j = sum_i e_i P_ij) gives P^* Phi P.  ``degrees``
    (elements of ``group``, with ``t_img`` the images of the generators of T)
    decide when two basis vectors may be combined into a homogeneous one;
    without them basis vectors are only combined when Phi forces it.
    """
    k = len(Phi)
    F = D.M
    T = D.T
    B = [[Phi[i][j] for j in range(k)] for i in range(k)]
    for i in range(k):
        for j in range(k):
            x, y = B[i][j], _star(D, B[j][i])
            y = None if y is None else HomElem(y.degree, y.coeff * delta)
            if x != y:
                raise ValueError(f"Phi is not {'' if delta == 1 else 'skew-'}hermitian at ({i},{j})")
    P = [[D.one() if i == j else None for j in range(k)] for i in range(k)]
    degs = list(degrees) if degrees is not None else None

    def combine(j, i, c):
        # e_j <- e_j + e_i c
        diag = B[j][j]
        diag = _hadd(D, diag, _hmul(D, _star(D, c), B[i][j]))
        diag = _hadd(D, diag, _hmul(D, B[j][i], c))
        diag = _hadd(D, diag, _hmul(D, _hmul(D, _star(D, c), B[i][i]), c))
        for r in range(k):
            P[r][j] = _hadd(D, P[r][j], _hmul(D, P[r][i], c))
        row = [B[i][r] for r in range(k)]
        col = [B[r][i] for r in range(k)]
        for r in range(k):
            if r != j:
                B[j][r] = _hadd(D, B[j][r], _hmul(D, _star(D, c), row[r]))
                B[r][j] = _hadd(D, B[r][j], _hmul(D, col[r], c))
        B[j][j] = diag

    def scale(j, c):
        # e_j <- e_j c
        for r in range(k):
            P[r][j] = _hmul(D, P[r][j], c)
        for r in range(k):
            if r != j:
                B[j][r] = _hmul(D, _star(D, c), B[j][r])
                B[r][j] = _hmul(D, B[r][j], c)
        B[j][j] = _hmul(D, _hmul(D, _star(D, c), B[j][j]), c)
        if degs is not None:
            degs[j] = group.add(degs[j], group.combo(list(c.degree), t_img))

    def T_of(g):
        # t in T with image g, or None
        for t in T.elements():
            if group.combo(list(t), t_img) == g:
                return t
        return None

    hyper: list = []
    active = list(range(k))
    while active:
        piv = next((i for i in active if B[i][i] is not None), None)
        if piv is None:
            # try to create a nonzero diagonal entry from a pair
            made = False
            for i in active:
                for j in active:
                    if i == j or B[i][j] is None or degs is None:
                        continue
                    t = T_of(group.sub(degs[i], degs[j]))
                    if t is None:
                        continue
                    for ex in range(F):
                        c = HomElem(T.reduce(t), Cyc.root(F, ex))
                        if not D.is_scalar_admissible(c.coeff):
                            continue
                        val = _hadd(D, _hmul(D, _star(D, c), B[j][i]), _hmul(D, B[i][j], c))
                        if val is not None:
                            combine(i, j, c)
                            made = True
                            break
                    if made:
                        break
                if made:
                    break
            if made:
                continue
            # hyperbolic pair
            i = active[0]
            j = next((j for j in active if B[i][j] is not None), None)
            if j is None:
                raise ValueError("Phi is not invertible")
            scale(j, D.inverse(B[i][j]))
            # clear the rest against the plane (e_i, e_j): B = [[0,1],[delta,0]]
            for r in active:
                if r in (i, j):
                    continue
                # subtract components: e_r <- e_r - e_j B[i][r]' - e_i delta^{-1}...
                x = B[i][r]       # B(e_i, e_r)
                y = B[j][r]       # B(e_j, e_r)
                if x is not None:
                    # B(e_i, e_j c) = c, so c = x cancels B(e_i, .)
                    combine(r, j, _hneg(x))
                y = B[j][r]
                if y is not None:
                    # B(e_j, e_i c) = delta c
                    c = HomElem(y.degree, -y.coeff * delta)
                    combine(r, i, c)
            hyper.append((i, j))
            active = [r for r in active if r not in (i, j)]
            continue
        d = B[piv][piv]
        dinv = D.inverse(d)
        for r in active:
            if r == piv or B[piv][r] is None:
                continue
            combine(r, piv, _hneg(_hmul(D, dinv, B[piv][r])))
        active.remove(piv)
        hyper.append((piv,))
    order = [h[0] for h in hyper if len(h) == 1] + [x for h in hyper if len(h) == 2 for x in h]
    free = set(sign_degrees(D, delta) or [])
    dbar = []
    scales = []
    for h in hyper:
        if len(h) != 1:
            continue
        c, d = _normal_entry(D, B[h[0]][h[0]], free)
        if c is not None:
            scale(h[0], c)
        val = d.coeff.rational()
        dbar.append((d.degree, 1 if val > 0 else -1))
        scales.append(abs(val))
    q = len(dbar)
    s = (k - q) // 2
    Pm = [[P[r][c] for c in order] for r in range(k)]
    return Diagonalized(q, s, dbar, scales, Pm, delta)


def _normal_entry(D: GDAlgebra, d: HomElem, free: set) -> tuple:
    """Find a homogeneous c with phi0(c) d c = r X_t, r rational, and r > 0
    unless t is a degree where the sign is an invariant.  Returns (c, new d);
    c is None when d already has that shape."""
    def good(x):
        return x.coeff.is_rational() and (x.degree in free or x.coeff.rational() > 0)
    if good(d):
        return None, d
    F = D.M
    cands = [HomElem(t, Cyc.root(F, ex)) for t in D.T.elements() for ex in range(F)]
    # prefer keeping the degree
    cands.sort(key=lambda c: c.degree != D.T.zero())
    for c in cands:
        if not D.is_scalar_admissible(c.coeff):
            continue
        x = _hmul(D, _hmul(D, _star(D, c), d), c)
        if good(x):
            return c, x
    raise ValueError(f"no normal form for the diagonal entry of degree {d.degree}")


def twisted_form(D: GDAlgebra, Phi: list, P: list) -> list:
    """P^* Phi P for matrices of HomElems."""
    k = len(Phi)
    out = [[None] * k for _ in range(k)]
    for a in range(k):
        for b in range(k):
            acc = None
            for i in range(k):
                for j in range(k):
                    term = _hmul(D, _hmul(D, _star(D, P[i][a]), Phi[i][j]), P[j][b])
                    acc = _hadd(D, acc, term)
            out[a][b] = acc
    return out
