"""Fine gradings on real forms of the classical simple Lie algebras.

Every fine grading on such a Lie algebra L is the restriction of a fine
grading on a matrix algebra with involution (R, phi), taking L to be the
derived algebra of Skew(R, phi).  This module

* computes the component census of L for a given grading, both directly
  (real dimension of the skew part of every homogeneous component) and
  from the closed forms, and reports any disagreement,
* enumerates the fine gradings of each series by restricting the output of
  ``classify.enumerate_fine`` to the right families and signatures,
* rebuilds the two summary tables for M_8(C) with an orthogonal involution
  and for so_8(C).

Series names: ``A-inner-sl``, ``A-inner-su``, ``A-outer-sl``,
``A-outer-su``, ``B``, ``C``, ``D``.  Dimensions in a census are real
dimensions.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Optional

from .abelian import FinAbGroup, format_iso, format_word
from .classify import (FAM_C1, FAM_C2, FAM_EX_H, FAM_EX_R, FAM_H, FAM_R, FAM_S_H, FAM_S_R,
                       ClassInvariant, clifford_inner_outer, complex_size, enumerate_fine,
                       signature_phi)
from .cyclo import Cyc, rank_cyc
from .gdivalg import (FAMILY_CPLX, FAMILY_CPLX_R, FAMILY_QUAT, FAMILY_REAL, FAMILY_SPLIT_H,
                      FAMILY_SPLIT_R, GDAlgebra, build_gda)
from .gf2forms import rank as gf2_rank
from .gradedmat import GradedMatAlg, MexParams, build, lift

SERIES = ("A-inner-sl", "A-inner-su", "A-outer-sl", "A-outer-su", "B", "C", "D")
MAX_SIZE = 32


# ---------------------------------------------------------------- real forms

@dataclass(frozen=True)
class LieFormSpec:
    """A real form of a classical simple Lie algebra of rank ``r``.

    ``Delta`` names the division algebra for sl_n(R), sl_n(H), sp_2r(R) and
    u*(r); ``signature`` is the pair (n+, n-) for su, so and sp(n+, n-).
    """
    series: str
    r: int
    Delta: Optional[str] = None
    signature: Optional[tuple] = None

    def __post_init__(self):
        if self.signature is not None:
            object.__setattr__(self, "signature", tuple(int(v) for v in self.signature))
        self.check()

    def check(self) -> None:
        s, r = self.series, self.r
        if s not in SERIES:
            raise ValueError(f"unknown series {s!r}")
        if r < 1:
            raise ValueError("rank must be positive")
        if (self.Delta is None) == (self.signature is None):
            raise ValueError("give exactly one of Delta and signature")
        if self.signature is not None:
            p, m = self.signature
            if m < 0 or p < m:
                raise ValueError("signature needs n+ >= n- >= 0")
        if s in ("A-inner-sl", "A-outer-sl"):
            if self.Delta not in ("R", "H"):
                raise ValueError(f"{s} needs Delta R or H")
            if self.Delta == "H" and (r + 1) % 2:
                raise ValueError("sl_n(H) needs r + 1 even")
            if s == "A-outer-sl" and r < 2:
                raise ValueError("outer gradings need r >= 2")
        elif s in ("A-inner-su", "A-outer-su"):
            if self.signature is None or sum(self.signature) != r + 1:
                raise ValueError(f"{s} needs a signature with n+ + n- = r + 1")
            if r < 2:
                raise ValueError(f"{s} needs r >= 2")
        elif s == "B":
            if self.signature is None or sum(self.signature) != 2 * r + 1:
                raise ValueError("series B needs a signature with n+ + n- = 2r + 1")
        elif s == "C":
            if self.Delta is not None and self.Delta != "R":
                raise ValueError("series C takes Delta R (sp_2r(R)) or a signature (sp(n+,n-))")
            if self.signature is not None and sum(self.signature) != r:
                raise ValueError("sp(n+,n-) needs n+ + n- = r")
        elif s == "D":
            if r == 4 or r < 3:
                raise ValueError("series D is handled for r = 3 or r >= 5")
            if self.Delta is not None and self.Delta != "H":
                raise ValueError("series D takes Delta H (u*(r)) or a signature (so(n+,n-))")
            if self.signature is not None and sum(self.signature) != 2 * r:
                raise ValueError("so(n+,n-) needs n+ + n- = 2r")
        if complex_degree(self) > MAX_SIZE:
            raise ValueError(f"matrix size {complex_degree(self)} exceeds the maximum {MAX_SIZE}")

    @property
    def name(self) -> str:
        s, r = self.series, self.r
        sig = self.signature
        if s in ("A-inner-sl", "A-outer-sl"):
            n = r + 1 if self.Delta == "R" else (r + 1) // 2
            return f"sl_{n}({self.Delta})"
        if s in ("A-inner-su", "A-outer-su"):
            return f"su({sig[0]},{sig[1]})"
        if s == "C":
            return f"sp_{2 * r}(R)" if sig is None else f"sp({sig[0]},{sig[1]})"
        if s == "D" and sig is None:
            return f"u*({r})"
        return f"so({sig[0]},{sig[1]})"

    def to_dict(self) -> dict:
        return {"series": self.series, "r": self.r, "Delta": self.Delta,
                "signature": None if self.signature is None else list(self.signature)}


def complex_degree(spec: LieFormSpec) -> int:
    """Size of the complex matrices in the complexified associative algebra."""
    s, r = spec.series, spec.r
    if s.startswith("A"):
        return r + 1
    if s == "B":
        return 2 * r + 1
    return 2 * r


def lie_dimension(spec: LieFormSpec) -> int:
    """Real dimension of the Lie algebra (read off the complexification)."""
    s, r = spec.series, spec.r
    if s.startswith("A"):
        return (r + 1) ** 2 - 1
    if s == "B":
        return r * (2 * r + 1)
    if s == "C":
        return r * (2 * r + 1)
    return r * (2 * r - 1)


def _enumeration_request(spec: LieFormSpec) -> tuple:
    """(kind, families, matrix signatures) passed to enumerate_fine."""
    s = spec.series
    diff = None if spec.signature is None else [spec.signature[0] - spec.signature[1]]
    if s == "A-inner-sl":
        return "exchange", [FAM_EX_R if spec.Delta == "R" else FAM_EX_H], None
    if s == "A-outer-sl":
        return "exchange", [FAM_S_R if spec.Delta == "R" else FAM_S_H], None
    if s == "A-inner-su":
        return "second-kind", [FAM_C1], diff
    if s == "A-outer-su":
        return "second-kind", [FAM_C2], diff
    if s == "B":
        return "orthogonal", [FAM_R], diff
    if s == "C":
        return ("symplectic", [FAM_R], None) if spec.signature is None \
            else ("symplectic", [FAM_H], diff)
    return ("orthogonal", [FAM_H], None) if spec.signature is None \
        else ("orthogonal", [FAM_R], diff)


# ---------------------------------------------------------------- series of a grading

def series_of(params) -> str:
    """The Lie series whose gradings restrict from ``params``."""
    D = build_gda(params.gda)
    if isinstance(params, MexParams):
        if D.family not in (FAMILY_REAL, FAMILY_QUAT):
            raise ValueError("the exchange construction is used over D(2m;+-1) only")
        return "A-inner-sl"
    fam = D.family
    if fam == FAMILY_CPLX:
        return "A-inner-su"
    if fam == FAMILY_CPLX_R:
        return "A-outer-su"
    if fam in (FAMILY_SPLIT_R, FAMILY_SPLIT_H):
        return "A-outer-sl"
    symplectic = (fam == FAMILY_REAL) == (params.delta == -1)
    if symplectic:
        return "C"
    if fam == FAMILY_REAL and D.m == 0 and params.k % 2:
        return "B"
    return "D"


def _check_series(params, series: Optional[str]) -> str:
    actual = series_of(params)
    if series is None:
        return actual
    if series not in SERIES:
        raise ValueError(f"unknown series {series!r}")
    if series != actual:
        raise ValueError(f"these parameters restrict to series {actual}, not {series}")
    return actual


def form_name(params, series: Optional[str] = None) -> str:
    """Name of the real form carried by the restriction of ``params``."""
    series = _check_series(params, series)
    D = build_gda(params.gda)
    n = complex_size(D, params.k)
    if series in ("A-inner-sl", "A-outer-sl"):
        return f"sl_{n if D.Delta == 'R' else n // 2}({D.Delta})"
    sig = signature_phi(params)
    if series in ("A-inner-su", "A-outer-su", "B") or (series == "D" and D.Delta == "R"):
        return f"so({(n + sig) // 2},{(n - sig) // 2})" if series in ("B", "D") \
            else f"su({(n + sig) // 2},{(n - sig) // 2})"
    if series == "C":
        if D.Delta == "R":
            return f"sp_{n}(R)"
        h = n // 2
        return f"sp({(h + sig) // 2},{(h - sig) // 2})"
    return f"u*({n // 2})"


def _center_degree(alg: GradedMatAlg, series: str):
    """Degree of the skew central element removed when passing to [L, L]."""
    if series in ("A-inner-sl", "A-inner-su"):
        return alg.U.zero()
    if series in ("A-outer-sl", "A-outer-su"):
        return alg.deg_T(alg.D.f)
    return None


# ---------------------------------------------------------------- direct census

def _re_im(z: Cyc, F: int) -> tuple:
    """Real and imaginary parts of z, both as elements of Q(zeta_F), 4 | F."""
    i = Cyc.root(F, F // 4)
    half = Cyc(F, Fraction(1, 2))
    zc = z.conj()
    return (z + zc) * half, (z - zc) * half * (-i)


def skew_dimension(alg: GradedMatAlg, basis: list) -> int:
    """Real dimension of {x in span(basis) : phi(x) = -x}.

    ``basis`` must span a phi-stable subspace (a homogeneous component).
    Computed as dim_R - rank_R(phi + id) with exact cyclotomic arithmetic.
    """
    D = alg.D
    index = {b: n for n, b in enumerate(basis)}
    if D.dim_e == 1:
        F = alg.M
        cols = []
        for b in basis:
            img, coeff = alg.phi_basis(b)
            if img not in index:
                raise ValueError("the span is not phi-stable")
            if not coeff.is_real():
                raise AssertionError("phi has a non-real coefficient over a real D_e")
            col = [Cyc(F, 0)] * len(basis)
            col[index[b]] = col[index[b]] + Cyc(F, 1)
            col[index[img]] = col[index[img]] + coeff
            cols.append(col)
        rows = [list(r) for r in zip(*cols)]
        return len(basis) - rank_cyc(rows, F)
    # D_e = C: real basis b, i*b; phi(lambda b) = conj(lambda) coeff b'
    F = lcm(alg.M, 4)
    i = Cyc.root(F, F // 4)
    n = 2 * len(basis)
    cols = []
    for b in basis:
        img, coeff = alg.phi_basis(b)
        if img not in index:
            raise ValueError("the span is not phi-stable")
        c = lift(coeff, F)
        for part, lam in ((0, Cyc(F, 1)), (1, i)):
            mu = lam.conj() * c
            re, im = _re_im(mu, F)
            col = [Cyc(F, 0)] * n
            col[2 * index[b] + part] = col[2 * index[b] + part] + Cyc(F, 1)
            col[2 * index[img]] = col[2 * index[img]] + re
            col[2 * index[img] + 1] = col[2 * index[img] + 1] + im
            cols.append(col)
    rows = [list(r) for r in zip(*cols)]
    return n - rank_cyc(rows, F)


def lie_census(params, series: Optional[str] = None, alg: Optional[GradedMatAlg] = None) -> dict:
    """Real dimensions of the nonzero homogeneous components of the Lie
    algebra obtained by restriction, as {degree in U: dim}.

    The components are computed directly: the skew part of every component
    of the associative algebra, minus the line of the skew central element
    for series A.
    """
    series = _check_series(params, series)
    if alg is None:
        alg = build(params)
    out = {}
    for g, comp in alg.components.items():
        d = skew_dimension(alg, comp)
        if d:
            out[g] = d
    z = _center_degree(alg, series)
    if z is not None:
        if out.get(z, 0) < 1:
            raise AssertionError("no skew central element at the expected degree")
        out[z] -= 1
        if not out[z]:
            del out[z]
    return out


# ---------------------------------------------------------------- closed forms

def _Q(D: GDAlgebra, v: tuple) -> int:
    """Quadratic form on T (or on T-bar = T/<f> for split and C-bar centers)
    with Q(v) = 1 exactly when X_v^2 is negative."""
    if D.f is not None:
        v = tuple(v[:-1]) + (0,)
    return 0 if D.mu(v) == 1 else 1


def closed_form_lie(params, series: Optional[str] = None) -> tuple:
    """Closed-form census: ({t in T: dim L_t}, Counter of the other dims).

    The first map lists the components whose degree comes from T (zero
    dimensions included); the counter lists the remaining components.
    """
    series = _check_series(params, series)
    D = build_gda(params.gda)
    T = D.T
    elems = T.elements()
    e = T.zero()
    nT = len(elems)
    k = params.k
    if series in ("A-inner-sl", "A-inner-su"):
        per_T = {t: (k - 1 if t == e else k) for t in elems}
        if series == "A-inner-sl":
            return per_T, Counter({1: nT * k * (k - 1)})
        s = params.s
        return per_T, Counter({1: 2 * s * nT, 2: (k * (k - 1) // 2 - s) * nT})
    q, s = params.q, params.s
    tb = [T.reduce(t) for t in params.degrees]
    if series in ("A-outer-sl", "A-outer-su"):
        per_T = {}
        for t in elems:
            v, z = t[:-1], t[-1]
            cnt = 0
            for ti in tb:
                w = tuple((a + b) % 2 for a, b in zip(ti[:-1], v)) + (0,)
                if _Q(D, w) == (_Q(D, ti) + z + 1) % 2:
                    cnt += 1
            per_T[t] = s + cnt - (1 if t == D.f else 0)
        return per_T, Counter({1: (nT // 2) * k * (k - 1)})
    # B, C, D: T = Z_2^{2m}
    vals = [_Q(D, t) for t in elems]
    arf = 1 if 2 * sum(vals) > len(vals) else 0
    target = arf if series == "C" else 1 - arf
    per_T = {}
    for t in elems:
        cnt = sum(1 for ti in tb if _Q(D, T.add(ti, t)) == target)
        per_T[t] = s + cnt
    two_m = 2 ** D.m
    base = nT * k * (k - 1) // 2
    ones = base + two_m * s if series == "C" else base - two_m * s
    return per_T, Counter({1: ones})


def census_flags(params, census: dict, series: Optional[str] = None,
                 alg: Optional[GradedMatAlg] = None) -> list:
    """Disagreements between a direct census and the closed forms (empty
    when they agree component by component on T and as multisets
    elsewhere)."""
    series = _check_series(params, series)
    if alg is None:
        alg = build(params)
    per_T, rest = closed_form_lie(params, series)
    flags = []
    t_degrees = set()
    for t, dim in per_T.items():
        g = alg.deg_T(t)
        t_degrees.add(g)
        got = census.get(g, 0)
        if got != dim:
            flags.append(f"degree {format_word(alg.D.T, t)}: direct {got}, closed form {dim}")
    other = Counter(d for g, d in census.items() if g not in t_degrees)
    rest = Counter({d: c for d, c in rest.items() if c})
    if other != rest:
        flags.append(f"other components: direct {dict(sorted(other.items()))}, "
                     f"closed form {dict(sorted(rest.items()))}")
    return flags


# ---------------------------------------------------------------- universal groups

def _t0_dim(vectors: list) -> int:
    if len(vectors) < 2:
        return 0
    masks = [sum(((a - b) % 2) << i for i, (a, b) in enumerate(zip(v, vectors[0])))
             for v in vectors[1:]]
    return gf2_rank(masks)


def universal_closed_form(params, series: Optional[str] = None) -> Optional[str]:
    """Universal group from the closed formulas for series A (outer), B, C
    and D, or None for the inner series A gradings."""
    series = _check_series(params, series)
    if series in ("A-inner-sl", "A-inner-su"):
        return None
    D = build_gda(params.gda)
    T = D.T
    q, s = params.q, params.s
    tb = [T.reduce(t) for t in params.degrees]
    d0 = _t0_dim(tb)
    rank_T = 2 * D.m + (1 if series.startswith("A-outer") else 0)
    twos = rank_T - 2 * d0 + max(0, q - 1)
    return format_iso([2] * twos + [4] * d0, s)


# ---------------------------------------------------------------- gradings

@dataclass
class LieGrading:
    label: str
    params: object
    universal: str
    census: tuple                       # ((degree, dim), ...) sorted by degree
    series: str
    form: str
    flags: list = field(default_factory=list)

    @property
    def dims(self) -> Counter:
        return Counter(d for _, d in self.census)

    def total(self) -> int:
        return sum(d for _, d in self.census)

    def to_dict(self) -> dict:
        return {"label": self.label, "series": self.series, "form": self.form,
                "params": self.params.to_dict(), "universal": self.universal,
                "census": [[list(g), d] for g, d in self.census], "flags": list(self.flags)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)


def _bar_word(D: GDAlgebra, t) -> str:
    """Word of t in T-bar = Z_2^{2m} (the central coordinate dropped)."""
    Tb = FinAbGroup(D.T.orders[:-1])
    return format_word(Tb, tuple(t)[:-1])


def grading_label(params, series: str, form: str) -> str:
    D = build_gda(params.gda)
    if series == "A-inner-sl":
        return f"Γ^(I)_{{{form}}}({D.m})"
    if series == "B":
        return f"Γ_{{{form}}}({params.s})"
    if series == "A-inner-su":
        words = [format_word(D.T, t) for t in params.degrees]
        ells = ",".join(str(l) for l in D.param)
        return f"Γ^(I)_{{{form}}}({ells};{params.s},({','.join(words)}))"
    if series.startswith("A-outer"):
        words = [_bar_word(D, t) for t in params.degrees]
        return f"Γ^(II)_{{{form}}}({D.m};{params.s},({','.join(words)}))"
    words = [format_word(D.T, t) for t in params.degrees]
    return f"Γ_{{{form}}}({D.m};{params.s},({','.join(words)}))"


def make_lie_grading(params, series: Optional[str] = None, form: str = "",
                     universal: Optional[str] = None) -> LieGrading:
    series = _check_series(params, series)
    alg = build(params)
    census = lie_census(params, series, alg)
    flags = census_flags(params, census, series, alg)
    if universal is None:
        universal = alg.U.iso_type()
    form = form or form_name(params, series)
    label = grading_label(params, series, form)
    return LieGrading(label, params, universal, tuple(sorted(census.items())), series,
                      form, flags)


def enumerate_lie(spec: LieFormSpec) -> list:
    """One LieGrading per equivalence class of fine gradings on the real
    form ``spec``."""
    kind, fams, sig = _enumeration_request(spec)
    classes = enumerate_fine(complex_degree(spec), kind, fams, sig)
    out = []
    for inv in classes:
        p = inv.representative
        if spec.series == "A-inner-sl" and p.k < 3:
            continue
        if spec.series == "B" and build_gda(p.gda).m != 0:
            continue
        out.append(make_lie_grading(p, spec.series, spec.name, inv.universal))
    return out


def real_forms(series: str, r: int) -> list:
    """All LieFormSpec of the given series and rank (n+ >= n-)."""
    out = []
    if series in ("A-inner-sl", "A-outer-sl"):
        for Delta in ("R", "H"):
            try:
                out.append(LieFormSpec(series, r, Delta=Delta))
            except ValueError:
                pass
        return out
    if series in ("A-inner-su", "A-outer-su"):
        n = r + 1
    elif series == "B":
        n = 2 * r + 1
    elif series == "C":
        n = r
        out.append(LieFormSpec(series, r, Delta="R"))
    else:
        n = 2 * r
        out.append(LieFormSpec(series, r, Delta="H"))
    for m in range(0, n // 2 + 1):
        try:
            out.append(LieFormSpec(series, r, signature=(n - m, m)))
        except ValueError:
            pass
    return out


# ---------------------------------------------------------------- M8 table

M8_COLUMNS = ("M4+4(R)", "M5+3(R)", "M6+2(R)", "M7+1(R)", "M8+0(R)", "M4(H)")
D4_COLUMNS = ("so(4,4)", "so(5,3)", "so(6,2)", "so(7,1)", "so(8,0)")


def _nfactors(iso: str) -> int:
    if iso == "1":
        return 0
    n = 0
    for part in iso.split(" x "):
        n += int(part.split("^")[1]) if "^" in part else 1
    return n


def _m8_column(inv: ClassInvariant) -> int:
    if inv.family == FAM_H:
        return 5
    return inv.matrix_signature // 2


def _m8_row_key(inv: ClassInvariant) -> tuple:
    """Gradings with equivalent complexifications share a key."""
    p = inv.representative
    D = build_gda(p.gda)
    if D.T.size() != 4:
        return (D.m, p.q, p.s, ())
    degs = [D.T.reduce(t) for t in p.degrees]
    if D.family == FAMILY_QUAT:
        c = (1, 1)
        degs = [D.T.add(t, c) for t in degs]
    counts = sorted(degs.count(x) for x in ((0, 0), (1, 0), (0, 1)))
    return (D.m, p.q, p.s, tuple(counts))


def table_m8() -> dict:
    """Fine gradings on the real forms of M_8(C) with an orthogonal
    involution, one row per class of complexifications."""
    classes = enumerate_fine(8, "orthogonal")
    rows: dict = {}
    for inv in classes:
        key = _m8_row_key(inv)
        inner = clifford_inner_outer(inv.representative) == "inner"
        row = rows.setdefault(key, {"universal": inv.universal, "inner": inner,
                                    "counts": [0] * 6, "classes": [[] for _ in range(6)]})
        if row["universal"] != inv.universal or row["inner"] != inner:
            raise AssertionError(f"row {key} mixes universal groups or inner/outer flags")
        col = _m8_column(inv)
        row["counts"][col] += 1
        row["classes"][col].append(inv)
    order = sorted(rows, key=lambda k: (k[0], k[1], -_nfactors(rows[k]["universal"]),
                                        0 if rows[k]["inner"] else 1, k))
    out_rows = []
    for n, key in enumerate(order, 1):
        r = rows[key]
        out_rows.append({"row": n, "universal": r["universal"], "inner": r["inner"],
                         "counts": r["counts"],
                         "classes": [[c.representative.to_dict() for c in cl]
                                     for cl in r["classes"]]})
    return {"title": "Fine gradings on real forms of M_8(C) with an orthogonal involution",
            "columns": list(M8_COLUMNS), "rows": out_rows}


# ---------------------------------------------------------------- D4 table

# Type III gradings do not come from associative algebras; they are listed
# as fixed data: (universal group, counts per column).
D4_TYPE_III = (("Z3 x Z^2", (0, 1, 0, 0, 0)),
               ("Z2^3 x Z3", (0, 1, 0, 1, 0)))

# Type I gradings on M_8(R) whose restrictions to so_8 coincide up to the
# outer automorphisms of D_4: rows of the M8 table that merge, and, per column,
# identifications between their classes (row, index) ~ (row, index).
D4_TYPE_I_MERGES = (
    {"rows": (10, 14),
     "identify": {"so(4,4)": (((10, 0), (14, 1)), ((10, 1), (14, 0)))}},
)


def _merged_count(members: list, column: str, merge: Optional[dict]) -> int:
    """Number of classes in the union of the member cells after applying
    the identifications for this column."""
    nodes = [(row, i) for row, cnt in members for i in range(cnt)]
    parent = {x: x for x in nodes}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x
    if merge:
        for a, b in merge.get("identify", {}).get(column, ()):
            if a in parent and b in parent:
                parent[find(a)] = find(b)
    return len({find(x) for x in nodes})


def table_d4(m8: Optional[dict] = None) -> dict:
    """Fine gradings on the real forms of so_8(C) by Type (I, II, III)."""
    if m8 is None:
        m8 = table_m8()
    rows = {r["row"]: r for r in m8["rows"]}
    inner_rows = [r for r in m8["rows"] if r["inner"]]
    outer_rows = [r for r in m8["rows"] if not r["inner"]]
    merged_into = {}
    for mg in D4_TYPE_I_MERGES:
        head = mg["rows"][0]
        for x in mg["rows"]:
            merged_into[x] = (head, mg)
    out = []
    done = set()
    for r in inner_rows:
        n = r["row"]
        if n in done:
            continue
        head, mg = merged_into.get(n, (n, None))
        group = list(mg["rows"]) if mg else [n]
        done.update(group)
        unis = {rows[x]["universal"] for x in group}
        if len(unis) != 1:
            raise AssertionError("merged rows have different universal groups")
        counts = []
        for j, col in enumerate(D4_COLUMNS):
            members = [(x, rows[x]["counts"][j]) for x in group]
            counts.append(_merged_count(members, col, mg))
        out.append({"type": "I", "universal": r["universal"], "counts": counts,
                    "from_rows": group})
    for r in outer_rows:
        c = list(r["counts"][:5])
        c[2] += r["counts"][5]
        out.append({"type": "II", "universal": r["universal"], "counts": c,
                    "from_rows": [r["row"]]})
    for uni, counts in D4_TYPE_III:
        out.append({"type": "III", "universal": uni, "counts": list(counts), "from_rows": []})
    return {"title": "Fine gradings on real forms of so_8(C)", "columns": list(D4_COLUMNS),
            "rows": out}


# ---------------------------------------------------------------- output

def table_json(table: dict) -> str:
    slim = {"title": table["title"], "columns": table["columns"],
            "rows": [{k: v for k, v in r.items() if k != "classes"} for r in table["rows"]]}
    return json.dumps(slim, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def table_text(table: dict) -> str:
    """Aligned plain-text rendering; '-' marks an empty cell."""
    cols = table["columns"]
    mark_col = "type" if table["rows"] and "type" in table["rows"][0] else "inner"
    head = ["universal group", mark_col] + list(cols)
    body = []
    for r in table["rows"]:
        mark = r["type"] if mark_col == "type" else ("inner" if r["inner"] else "outer")
        body.append([r["universal"], mark] + [str(c) if c else "-" for c in r["counts"]])
    widths = [max(len(row[i]) for row in [head] + body) for i in range(len(head))]
    lines = [table["title"]]
    for row in [head] + body:
        lines.append("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"
