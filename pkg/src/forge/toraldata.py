"""Generic-element data: construction, Galois descent, genericity.

A datum packages the arithmetic of a twisted-torus functional: a root
system, a lattice action for the distinguished Galois generator, a tame
extension of residue data, a depth in the window (n, n+1], and one leading
coefficient per simple coroot.  Verification is exhaustive: the descent
equations are checked on every simple coroot and genericity on every
coroot, in the residue field, exactly.

Leading coefficients are `TameLeadingTerm`s: (valuation, residue) pairs
whose sums turn Unknown when equal-valuation residues cancel; genericity
treats Unknown as failure because it demands the exact valuation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

import sympy

from . import linalg
from .ffield import FieldExtension, build_extension
from .rootsys import (
    DiagramAutomorphism,
    RootSystem,
    RootSystemType,
    WeylElement,
    build_root_system,
    coxeter_number,
    minus_one_in_W_delta,
    trivial_automorphism,
    weyl_from_word,
)

CASE_LABELS = ("Case1-unram", "Case1-ram", "A", "Dodd", "E6-unram", "E6-ram")


# ---------------------------------------------------------------------------
# extension specs and leading-term calculus
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtensionSpec:
    """Residue-level model of the tame extension E/F carrying the datum."""

    kind: str  # unramified | ramified_quadratic | ramified_cubic
    degree: int  # [E:F]
    ram_index: int  # e(E/F)
    residue: FieldExtension  # k_E as an extension of k_F
    unif_ratio: tuple  # residue of sigma(pi_E)/pi_E, a root of unity in k_E

    @staticmethod
    def unramified(p: int, f: int, degree: int) -> "ExtensionSpec":
        res = build_extension(p, f, degree)
        return ExtensionSpec("unramified", degree, 1, res, res.one())

    @staticmethod
    def ramified_quadratic(p: int, f: int) -> "ExtensionSpec":
        if p == 2:
            raise ValueError("ramified quadratic requires p != 2")
        res = build_extension(p, f, 1)
        return ExtensionSpec("ramified_quadratic", 2, 2, res, res.neg(res.one()))

    @staticmethod
    def ramified_cubic(p: int, f: int) -> "ExtensionSpec":
        res = build_extension(p, f, 1)
        q = res.q
        if q % 3 != 1:
            raise ValueError("ramified cubic requires a cube root of unity: q = 1 mod 3")
        zeta = res.generator_power((q - 1) // 3)
        return ExtensionSpec("ramified_cubic", 3, 3, res, zeta)

    def frobenius_power(self) -> int:
        """How the generator acts on the residue field: q-power iff unramified."""
        return 1 if self.kind == "unramified" else 0

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "degree": self.degree,
            "ram_index": self.ram_index,
            "residue": self.residue.to_json_dict(),
            "unif_ratio": self.residue.element_to_json(self.unif_ratio),
        }

    @staticmethod
    def from_json_dict(data: dict) -> "ExtensionSpec":
        res = build_extension(
            data["residue"]["p"], data["residue"]["f"], data["residue"]["n"]
        )
        if res.to_json_dict() != data["residue"]:
            raise ValueError("non-canonical residue field in serialized spec")
        return ExtensionSpec(
            data["kind"],
            data["degree"],
            data["ram_index"],
            res,
            res.element_from_json(data["unif_ratio"]),
        )


@dataclass(frozen=True)
class TameLeadingTerm:
    """Leading term of a tame element: exact valuation and unit residue.

    residue None encodes Unknown: the valuation is a strict lower bound and
    the exact leading coefficient is not certified.
    """

    valuation: Fraction
    residue: Optional[tuple]

    @property
    def known(self) -> bool:
        return self.residue is not None

    def add(self, other: "TameLeadingTerm", ext: FieldExtension) -> "TameLeadingTerm":
        if not self.known or not other.known:
            lb = min(self.valuation, other.valuation)
            known = self if self.known else (other if other.known else None)
            if known is not None:
                unknown = other if self.known else self
                if known.valuation <= unknown.valuation:
                    return known
            return TameLeadingTerm(lb, None)
        if self.valuation < other.valuation:
            return self
        if other.valuation < self.valuation:
            return other
        s = ext.add(self.residue, other.residue)
        if ext.is_zero(s):
            return TameLeadingTerm(self.valuation, None)
        return TameLeadingTerm(self.valuation, s)

    def mul(self, other: "TameLeadingTerm", ext: FieldExtension) -> "TameLeadingTerm":
        if not self.known or not other.known:
            return TameLeadingTerm(self.valuation + other.valuation, None)
        return TameLeadingTerm(
            self.valuation + other.valuation, ext.mul(self.residue, other.residue)
        )

    def scale(self, n: int, ext: FieldExtension) -> "TameLeadingTerm":
        """Multiply by a rational integer unit of the base (n nonzero mod p)."""
        if n % ext.p == 0:
            raise ValueError("integer scale must be a unit in the residue field")
        if not self.known:
            return self
        return TameLeadingTerm(self.valuation, ext.smul(n, self.residue))

    def to_json_dict(self, ext: FieldExtension) -> dict:
        return {
            "valuation": str(self.valuation),
            "residue": None if self.residue is None else ext.element_to_json(self.residue),
        }

    @staticmethod
    def from_json_dict(data: dict, ext: FieldExtension) -> "TameLeadingTerm":
        res = data["residue"]
        return TameLeadingTerm(
            Fraction(data["valuation"]),
            None if res is None else ext.element_from_json(res),
        )


# ---------------------------------------------------------------------------
# data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroToralDatum:
    rs: RootSystem
    delta: DiagramAutomorphism
    cocycle: WeylElement  # lattice action of the distinguished generator
    ext: ExtensionSpec
    p: int
    q: int
    n: int  # depth window index: depth in (n, n+1]
    depth: Fraction
    coords: tuple[TameLeadingTerm, ...]  # leading terms of X(pi^{r e} H_i)
    case: str

    def __post_init__(self):
        if self.p <= coxeter_number(self.rs.type):
            raise ValueError("requires p > Cox")
        if self.case not in CASE_LABELS:
            raise ValueError(f"unknown case label {self.case}")
        if not (Fraction(self.n) < self.depth <= Fraction(self.n + 1)):
            raise ValueError("depth outside the admissible window")
        m = linalg.mat_sub(
            self._sigma_action(), linalg.identity(self.rs.rank)
        )
        if linalg.det(m) == 0:
            raise ValueError("twisted action has a nonzero fixed vector: torus not elliptic")

    def _sigma_action(self) -> linalg.Matrix:
        """Lattice action of the distinguished generator used for descent."""
        if self.case.startswith("Case1"):
            return linalg.mat_scale(-1, linalg.identity(self.rs.rank))
        return self.cocycle.matrix

    def descent_equations(self) -> list[tuple[str, linalg.Matrix, tuple, int]]:
        """(label, lattice matrix, unit factor on the twisted side, frobenius power)."""
        ext = self.ext
        re_power = self.depth * ext.ram_index
        assert re_power.denominator == 1
        c_eff = ext.residue.pow(ext.unif_ratio, int(re_power))
        eqs = [("sigma", self._sigma_action(), c_eff, ext.frobenius_power())]
        if (
            self.case.startswith("Case1")
            and self.rs.type.family == "D"
            and self.rs.rank % 2 == 0
            and not self.delta.is_trivial
        ):
            # component of the Galois action through the splitting field of
            # the form, acting by the diagram automorphism with trivial
            # coefficient action; certified only on the split route.
            eqs.append(("tau", self.delta.matrix(), ext.residue.one(), 0))
        return eqs

    def residues(self) -> list[tuple]:
        assert all(c.known for c in self.coords)
        return [c.residue for c in self.coords]

    def with_coords(self, coords: Sequence[TameLeadingTerm]) -> "ZeroToralDatum":
        return replace(self, coords=tuple(coords))

    # -- serialization ----------------------------------------------------
    def to_json_dict(self) -> dict:
        return {
            "type": str(self.rs.type),
            "case": self.case,
            "p": self.p,
            "q": self.q,
            "n": self.n,
            "depth": str(self.depth),
            "delta": list(self.delta.permutation),
            "cocycle": [list(r) for r in self.cocycle.matrix],
            "ext": self.ext.to_json_dict(),
            "coords": [c.to_json_dict(self.ext.residue) for c in self.coords],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def datum_from_json(text: str) -> ZeroToralDatum:
    data = json.loads(text)
    rs = build_root_system(RootSystemType.parse(data["type"]))
    ext = ExtensionSpec.from_json_dict(data["ext"])
    return ZeroToralDatum(
        rs=rs,
        delta=DiagramAutomorphism(tuple(data["delta"])),
        cocycle=WeylElement(linalg.mat_freeze(data["cocycle"])),
        ext=ext,
        p=data["p"],
        q=data["q"],
        n=data["n"],
        depth=Fraction(data["depth"]),
        coords=tuple(
            TameLeadingTerm.from_json_dict(c, ext.residue) for c in data["coords"]
        ),
        case=data["case"],
    )


@dataclass(frozen=True)
class DescentRow:
    equation: str
    index: int  # 1-based simple coroot index
    lhs: Optional[list]
    rhs: Optional[list]
    ok: bool


@dataclass(frozen=True)
class CorootRow:
    expansion: tuple[int, ...]
    residue: Optional[list]
    ok: bool


@dataclass(frozen=True)
class GenericityReport:
    coroot_rows: tuple[CorootRow, ...]
    descent_rows: tuple[DescentRow, ...]
    notes: tuple[str, ...] = ()

    @property
    def genericity_ok(self) -> bool:
        return all(r.ok for r in self.coroot_rows)

    @property
    def descent_ok(self) -> bool:
        return all(r.ok for r in self.descent_rows)

    @property
    def verdict(self) -> bool:
        return self.genericity_ok and self.descent_ok and bool(
            self.coroot_rows or self.descent_rows
        )

    def failing_coroots(self) -> list[CorootRow]:
        return [r for r in self.coroot_rows if not r.ok]

    def merge(self, other: "GenericityReport") -> "GenericityReport":
        return GenericityReport(
            self.coroot_rows + other.coroot_rows,
            self.descent_rows + other.descent_rows,
            self.notes + other.notes,
        )

    def to_json_dict(self) -> dict:
        return {
            "verdict": "pass" if self.verdict else "fail",
            "genericity": [
                {
                    "expansion": list(r.expansion),
                    "residue": r.residue,
                    "ok": r.ok,
                }
                for r in self.coroot_rows
            ],
            "descent": [
                {
                    "equation": r.equation,
                    "index": r.index,
                    "lhs": r.lhs,
                    "rhs": r.rhs,
                    "ok": r.ok,
                }
                for r in self.descent_rows
            ],
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def verify_galois_descent(d: ZeroToralDatum) -> GenericityReport:
    """Check the generator equivariance equations on every simple coroot."""
    res_field = d.ext.residue
    coords = d.residues()
    rows = []
    notes = []
    for label, m, c_eff, frob_k in d.descent_equations():
        cols = [linalg.mat_vec(m, c.expansion) for c in d.rs.simple_coroots]
        for i in range(d.rs.rank):
            lhs = res_field.mul(c_eff, res_field.frobenius(coords[i], frob_k))
            rhs = res_field.zero()
            for j, mu in enumerate(cols[i]):
                if mu:
                    rhs = res_field.add(rhs, res_field.smul(mu, coords[j]))
            rows.append(
                DescentRow(
                    label,
                    i + 1,
                    res_field.element_to_json(lhs),
                    res_field.element_to_json(rhs),
                    lhs == rhs,
                )
            )
        if label == "tau":
            notes.append(
                "nontrivial form component on a D-even lattice: only the split "
                "route (independent quadratic twist) is certified"
            )
    return GenericityReport((), tuple(rows), tuple(notes))


def verify_genericity(d: ZeroToralDatum) -> GenericityReport:
    """Evaluate the functional on every coroot; all residues must be units."""
    res_field = d.ext.residue
    rows = []
    for coroot in d.rs.coroots:
        term: Optional[TameLeadingTerm] = None
        for lam, coord in zip(coroot.expansion, d.coords):
            if lam == 0:
                continue
            scaled = coord.scale(lam, res_field) if lam % res_field.p else TameLeadingTerm(coord.valuation, None)
            term = scaled if term is None else term.add(scaled, res_field)
        assert term is not None
        ok = term.known and not res_field.is_zero(term.residue)
        rows.append(
            CorootRow(
                coroot.expansion,
                None if not term.known else res_field.element_to_json(term.residue),
                bool(ok),
            )
        )
    return GenericityReport(tuple(rows), ())


def verify_datum(d: ZeroToralDatum) -> GenericityReport:
    return verify_galois_descent(d).merge(verify_genericity(d))


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def _q_to_p_f(q: int) -> tuple[int, int]:
    fac = sympy.factorint(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    p, f = next(iter(fac.items()))
    return int(p), int(f)


def _unit_terms(ext: ExtensionSpec, residues: Sequence[tuple]) -> tuple[TameLeadingTerm, ...]:
    return tuple(TameLeadingTerm(Fraction(0), r) for r in residues)


def build_dodd_coordinates(s: int, q: int) -> tuple[ExtensionSpec, list[tuple]]:
    """Coordinate vector for the odd orthogonal family, via generator powers."""
    if s < 5 or s % 2 == 0:
        raise ValueError("s must be odd and at least 5")
    p, f = _q_to_p_f(q)
    if p <= 2 * s - 2:
        raise ValueError("requires p > 2s - 2")
    spec = ExtensionSpec.unramified(p, f, 2 * s - 2)
    res = spec.residue
    a = res.generator_power((q ** (s - 1) + 1) // 2)
    b = res.generator_power((q ** (2 * (s - 1)) - 1) // (2 * (q - 1)))
    sig = [a]
    for _ in range(s - 1):
        sig.append(res.frobenius(sig[-1]))
    partial = res.zero()
    for i in range(s - 2):
        partial = res.add(partial, sig[i])
    inv2 = pow(2, -1, p)
    tail = res.add(res.neg(partial), sig[s - 2])
    coords = [sig[i] for i in range(s - 2)]
    coords.append(res.smul(inv2, res.add(b, tail)))
    coords.append(res.smul(inv2, res.add(res.neg(b), tail)))
    return spec, coords


def build_e6_coordinates(variant: str, q: int) -> tuple[ExtensionSpec, list[tuple]]:
    p, f = _q_to_p_f(q)
    if p <= 12:
        raise ValueError("requires p > 12")
    if variant == "unramified_cubic":
        if q % 3 == 1:
            raise ValueError(
                "unramified variant requires no cube root of unity: q != 1 mod 3"
            )
        spec = ExtensionSpec.unramified(p, f, 3)
        res = spec.residue
        a = res.find_trace_zero_generator()
        sa = res.frobenius(a)
        coords = [
            sa,
            sa,
            res.sub(a, res.smul(2, sa)),
            sa,
            res.add(a, sa),
            res.sub(res.smul(-3, a), res.smul(2, sa)),
        ]
        return spec, coords
    if variant == "ramified_cubic":
        spec = ExtensionSpec.ramified_cubic(p, f)
        res = spec.residue
        zeta = spec.unif_ratio
        one = res.one()
        coords = [
            res.smul(2, one),
            one,
            res.sub(res.smul(-4, one), res.smul(2, zeta)),
            one,
            one,
            res.smul(3, zeta),
        ]
        return spec, coords
    raise ValueError(f"unknown variant {variant!r}")


def e6_ramified_symbolic_coordinates() -> list[tuple[int, int]]:
    """The ramified-cubic coordinates as integer pairs (c1, c2) = c1 + c2*zeta."""
    return [(2, 0), (1, 0), (-4, -2), (1, 0), (1, 0), (0, 3)]


def build_generic_element(
    rs_type: RootSystemType,
    delta: Optional[DiagramAutomorphism],
    p: int,
    q: Optional[int] = None,
    n: int = 1,
    ramified: bool = False,
) -> ZeroToralDatum:
    """Construct a datum for the requested form; dispatch by lattice case.

    The quadratic-twist route applies whenever -1 lies in W*delta (and
    unconditionally on D-even lattices); the remaining split cases go
    through the dedicated coordinate builders.
    """
    q = p if q is None else q
    pp, f = _q_to_p_f(q)
    if pp != p:
        raise ValueError("q must be a power of p")
    cox = coxeter_number(rs_type)
    if p <= cox:
        raise ValueError(f"requires p > Cox = {cox}")
    if n < 1:
        raise ValueError("n must be at least 1")
    rs = build_root_system(rs_type)
    delta = delta if delta is not None else trivial_automorphism(rs)
    delta.validate(rs)

    d_even = rs_type.family == "D" and rs_type.rank % 2 == 0
    case1 = d_even or minus_one_in_W_delta(rs, delta)

    if case1:
        minus_delta = linalg.mat_scale(-1, delta.matrix())
        cocycle = WeylElement(
            linalg.mat_scale(-1, linalg.identity(rs.rank)) if d_even else minus_delta
        )
        if ramified:
            spec = ExtensionSpec.ramified_quadratic(p, f)
            coords = _unit_terms(spec, [spec.residue.one()] * rs.rank)
            datum = ZeroToralDatum(
                rs, delta, cocycle, spec, p, q, n,
                Fraction(2 * n + 1, 2), coords, "Case1-ram",
            )
        else:
            spec = ExtensionSpec.unramified(p, f, 2)
            a = spec.residue.find_trace_zero_generator()
            coords = _unit_terms(spec, [a] * rs.rank)
            datum = ZeroToralDatum(
                rs, delta, cocycle, spec, p, q, n,
                Fraction(n + 1), coords, "Case1-unram",
            )
    elif rs_type.family == "A":
        spec = ExtensionSpec.unramified(p, f, rs_type.rank + 1)
        res = spec.residue
        a = res.find_trace_zero_generator()
        coords = _unit_terms(
            spec, [res.frobenius(a, i) for i in range(rs_type.rank)]
        )
        w = weyl_from_word(rs, range(1, rs.rank + 1))
        datum = ZeroToralDatum(
            rs, delta, w, spec, p, q, n, Fraction(n + 1), coords, "A"
        )
    elif rs_type.family == "D":
        spec, residues = build_dodd_coordinates(rs_type.rank, q)
        w = weyl_from_word(rs, range(1, rs.rank + 1))
        datum = ZeroToralDatum(
            rs, delta, w, spec, p, q, n, Fraction(n + 1),
            _unit_terms(spec, residues), "Dodd",
        )
    elif rs_type.family == "E" and rs_type.rank == 6:
        use_ramified = ramified or q % 3 == 1
        if ramified and q % 3 != 1:
            raise ValueError("ramified cubic requested but q != 1 mod 3")
        w = weyl_from_word(rs, [2, 3, 5, 1, 4, 6]).power(4)
        if use_ramified:
            spec, residues = build_e6_coordinates("ramified_cubic", q)
            datum = ZeroToralDatum(
                rs, delta, w, spec, p, q, n, Fraction(3 * n + 1, 3),
                _unit_terms(spec, residues), "E6-ram",
            )
        else:
            spec, residues = build_e6_coordinates("unramified_cubic", q)
            datum = ZeroToralDatum(
                rs, delta, w, spec, p, q, n, Fraction(n + 1),
                _unit_terms(spec, residues), "E6-unram",
            )
    else:
        raise ValueError(f"no construction dispatchable for {rs_type} with this form")

    report = verify_datum(datum)
    if not report.verdict:
        raise AssertionError(f"constructed datum failed verification: {rs_type}")
    return datum


# ---------------------------------------------------------------------------
# depth rescaling, assembly, twisting
# ---------------------------------------------------------------------------


def restriction_depth(
    e: int,
    r_prime: Fraction,
    valuation_table: Optional[Sequence[Fraction]] = None,
) -> tuple[Fraction, Optional[list[Fraction]]]:
    """Rescale a depth (and optionally a per-coroot valuation table) by 1/e."""
    if e < 1:
        raise ValueError("ramification index must be at least 1")
    r_prime = Fraction(r_prime)
    if r_prime <= 0:
        raise ValueError("depth must be positive")
    rescaled = None
    if valuation_table is not None:
        if any(Fraction(v) != -r_prime for v in valuation_table):
            raise ValueError("nonuniform valuation table: genericity violated upstream")
        rescaled = [Fraction(v) / e for v in valuation_table]
        assert all(v == -r_prime / e for v in rescaled)
    return r_prime / e, rescaled


@dataclass(frozen=True)
class OneToralFactor:
    label: str
    depth: Fraction
    datum: Optional[ZeroToralDatum] = None


@dataclass(frozen=True)
class OneToralDatum:
    """Chain of factor groups with strictly increasing depths in one window."""

    groups: tuple[tuple[Fraction, tuple[OneToralFactor, ...]], ...]
    n: int

    @property
    def depths(self) -> tuple[Fraction, ...]:
        return tuple(depth for depth, _ in self.groups)

    @property
    def d(self) -> int:
        return len(self.groups)

    def __post_init__(self):
        ds = self.depths
        if not ds:
            raise ValueError("empty chain")
        if any(a >= b for a, b in zip(ds, ds[1:])):
            raise ValueError("depths must be strictly increasing across groups")
        if ds[-1] >= ds[0] + 1:
            raise ValueError("depth window exceeds one unit")

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "groups": [
                {
                    "depth": str(depth),
                    "factors": [
                        {
                            "label": fac.label,
                            "datum": None if fac.datum is None else fac.datum.to_json_dict(),
                        }
                        for fac in facs
                    ],
                }
                for depth, facs in self.groups
            ],
        }


def assemble_one_toral(factors: Sequence[OneToralFactor]) -> OneToralDatum:
    """Group factors by depth into the increasing chain, one window check."""
    if not factors:
        raise ValueError("no factors")
    windows = set()
    for fac in factors:
        r = Fraction(fac.depth)
        if r <= 0:
            raise ValueError("depths must be positive")
        n = r.__ceil__() - 1
        windows.add(n)
    if len(windows) != 1:
        raise ValueError("depths not all within a common unit half-open window")
    n = windows.pop()
    by_depth: dict[Fraction, list[OneToralFactor]] = {}
    for fac in factors:
        by_depth.setdefault(Fraction(fac.depth), []).append(fac)
    groups = tuple(
        (depth, tuple(by_depth[depth])) for depth in sorted(by_depth)
    )
    return OneToralDatum(groups, n)


def twist_datum(
    d: ZeroToralDatum | OneToralDatum, i: int, m: int, e_F: int = 1
):
    """Scale a datum by the character power i, 0 < i < p^m.

    Depths drop by the normalized valuation of i; leading residues scale by
    the unit part of i.  The half-depth window inequality is asserted and
    genericity is re-verified on the twist.
    """
    if isinstance(d, OneToralDatum):
        # the window inequality couples the chain extremes, not the factors
        first = d.groups[0][1][0].datum
        if first is None:
            raise ValueError("cannot twist a factor without coordinates")
        p0 = first.p
        if not 0 < i < p0**m:
            raise ValueError("i must satisfy 0 < i < p^m")
        t0 = 0
        unit0 = i
        while unit0 % p0 == 0:
            unit0 //= p0
            t0 += 1
        v0 = Fraction(t0 * e_F)
        if not d.depths[0] - v0 > d.depths[-1] / 2:
            raise ValueError("window inequality violated: r0 - v(i) <= r_d / 2")
        twisted = []
        reports = []
        for _, facs in d.groups:
            for fac in facs:
                if fac.datum is None:
                    raise ValueError("cannot twist a factor without coordinates")
                td, rep = twist_datum(fac.datum, i, m, e_F)
                twisted.append(OneToralFactor(fac.label, td.depth, td))
                reports.append(rep)
        out = assemble_one_toral(twisted)
        merged = reports[0]
        for rep in reports[1:]:
            merged = merged.merge(rep)
        return out, merged

    p = d.p
    if not 0 < i < p**m:
        raise ValueError("i must satisfy 0 < i < p^m")
    t = 0
    unit = i
    while unit % p == 0:
        unit //= p
        t += 1
    v = Fraction(t * e_F)
    r0 = rd = d.depth
    if not r0 - v > rd / 2:
        raise ValueError("window inequality violated: r0 - v(i) <= r_d / 2")
    res = d.ext.residue
    new_coords = tuple(c.scale(unit, res) for c in d.coords)
    new_depth = d.depth - v
    new_n = new_depth.__ceil__() - 1
    twisted = replace(d, coords=new_coords, depth=new_depth, n=new_n)
    report = verify_genericity(twisted)
    return twisted, report
