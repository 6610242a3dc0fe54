"""Characters, Fourier-algebra norms and character injections on finite
abelian p-groups.

The dual of G = sum Z_{p^ai} is identified with G itself: chi in G acts by
g -> exp(2 pi i sum chi_j g_j / p^aj).  Every value is a p^a1-th root of
unity, so characters are evaluated as integer phases into one root table.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .abelian import GroupSpec, _check_cap, coset_from_elements, enumerate_cosets
from .cosetring import minimal_representation
from .errors import PreconditionError

SURVEY_CAP = 2 ** 4


def _exponent_modulus(G: GroupSpec) -> int:
    return max(G.moduli, default=1)


def root_table(M: int) -> np.ndarray:
    """exp(2 pi i k / M) for k < M, exact at the quarter turns."""
    k = np.arange(M)
    roots = np.exp(2j * np.pi * k / M)
    for q, val in enumerate((1, 1j, -1, -1j)):
        if (q * M) % 4 == 0:
            roots[(q * M) // 4] = val
    return roots


def _phase_weights(G: GroupSpec) -> np.ndarray:
    M = _exponent_modulus(G)
    return np.array([M // m for m in G.moduli], dtype=np.int64)


def phases(G: GroupSpec, chis: np.ndarray, gs: np.ndarray) -> np.ndarray:
    """Integer k with chi(g) = zeta_M^k, for all pairs of rows."""
    M = _exponent_modulus(G)
    if G.rank == 0:
        return np.zeros((len(chis), len(gs)), dtype=np.int64)
    return ((chis * _phase_weights(G)) @ gs.T) % M


def character_value(G: GroupSpec, chi: Sequence[int], g: Sequence[int]) -> complex:
    chi, g = G.check(chi), G.check(g)
    M = _exponent_modulus(G)
    k = sum(c * x * (M // m) for c, x, m in zip(chi, g, G.moduli)) % M
    return complex(root_table(M)[k])


def character_matrix(G: GroupSpec) -> np.ndarray:
    """X[chi, g] over the lexicographic element order on both sides."""
    E = G.element_array
    return root_table(_exponent_modulus(G))[phases(G, E, E)]


@dataclass(frozen=True)
class CoefficientVector:
    group: GroupSpec
    coeffs: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for chi, a in dict(self.coeffs).items():
            chi = self.group.check(chi)
            if a != 0:
                clean[chi] = clean.get(chi, 0) + complex(a)
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def indicator(cls, G: GroupSpec, S: Iterable) -> "CoefficientVector":
        return cls(G, {tuple(x): 1 for x in S})

    @property
    def support(self) -> set:
        return set(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def to_json(self) -> dict:
        return {"group": self.group.to_json(),
                "coeffs": [{"chi": list(k), "re": v.real, "im": v.imag}
                           for k, v in sorted(self.coeffs.items())]}

    @classmethod
    def from_json(cls, obj) -> "CoefficientVector":
        G = GroupSpec.from_json(obj["group"])
        if "support" in obj:
            return cls.indicator(G, obj["support"])
        return cls(G, {tuple(c["chi"]): complex(c.get("re", 0), c.get("im", 0))
                       for c in obj.get("coeffs", [])})


def transform(v: CoefficientVector, cap: int | None = None) -> np.ndarray:
    """g -> sum_chi a_chi chi(g) over all of G, in index order."""
    G = v.group
    _check_cap(G.order, cap)
    if not v.coeffs:
        return np.zeros(G.order, dtype=complex)
    chis = np.array(list(v.coeffs), dtype=np.int64).reshape(len(v.coeffs), G.rank)
    a = np.array(list(v.coeffs.values()), dtype=complex)
    roots = root_table(_exponent_modulus(G))
    return a @ roots[phases(G, chis, G.element_array)]


def a_norm(v: CoefficientVector, cap: int | None = None) -> float:
    """(1/#G) sum_g |sum_chi a_chi chi(g)|, summed with math.fsum."""
    f = transform(v, cap)
    return math.fsum(np.abs(f).tolist()) / v.group.order


@dataclass(frozen=True)
class InjectionTable:
    source: GroupSpec
    target: GroupSpec
    table: Mapping

    def __post_init__(self):
        clean = {}
        for k, v in dict(self.table).items():
            clean[self.source.check(k)] = self.target.check(v)
        if len(set(clean.values())) != len(clean):
            raise PreconditionError("character map is not injective")
        object.__setattr__(self, "table", clean)

    def __call__(self, chi) -> tuple:
        return self.table[tuple(chi)]

    @classmethod
    def identity(cls, G: GroupSpec) -> "InjectionTable":
        return cls(G, G, {x: x for x in G.elements()})

    def to_json(self) -> dict:
        return {"source": self.source.to_json(), "target": self.target.to_json(),
                "map": [[list(k), list(v)] for k, v in sorted(self.table.items())]}

    @classmethod
    def from_json(cls, obj) -> "InjectionTable":
        return cls(GroupSpec.from_json(obj["source"]), GroupSpec.from_json(obj["target"]),
                   {tuple(k): tuple(v) for k, v in obj["map"]})


def pushforward(sigma: InjectionTable, v: CoefficientVector) -> CoefficientVector:
    if v.group != sigma.source:
        raise PreconditionError("vector does not live on the source dual")
    missing = [chi for chi in v.coeffs if chi not in sigma.table]
    if missing:
        raise PreconditionError(f"support outside the injection domain: {missing[:3]}")
    return CoefficientVector(sigma.target, {sigma.table[c]: a for c, a in v.coeffs.items()})


@dataclass(frozen=True)
class WitnessReport:
    ratios: tuple[float, ...]
    source_norms: tuple[float, ...]
    target_norms: tuple[float, ...]

    @property
    def max_ratio(self) -> float:
        return max(self.ratios)

    @property
    def max_inverse_ratio(self) -> float:
        return max(1 / r for r in self.ratios)

    @property
    def distortion_lower_bound(self) -> float:
        """(max rho) * (max 1/rho) <= ||T|| * ||T^-1||."""
        return self.max_ratio * self.max_inverse_ratio

    def to_json(self) -> dict:
        return {"ratios": list(self.ratios), "max_ratio": self.max_ratio,
                "max_inverse_ratio": self.max_inverse_ratio,
                "distortion_lower_bound": self.distortion_lower_bound}


def distortion_witness(sigma: InjectionTable, witnesses: Sequence[CoefficientVector],
                       cap: int | None = None) -> WitnessReport:
    if not witnesses:
        raise PreconditionError("no witnesses given")
    src, tgt, ratios = [], [], []
    for w in witnesses:
        a = a_norm(w, cap)
        if a == 0:
            raise PreconditionError("witness has zero norm")
        b = a_norm(pushforward(sigma, w), cap)
        if b == 0:
            raise PreconditionError("pushed-forward witness has zero norm")
        src.append(a)
        tgt.append(b)
        ratios.append(b / a)
    return WitnessReport(tuple(ratios), tuple(src), tuple(tgt))


def default_witnesses(G: GroupSpec, cap: int | None = None) -> list[CoefficientVector]:
    """Indicators of every coset of every subgroup of the dual, canonical order."""
    return [CoefficientVector.indicator(G, c.elements()) for c in enumerate_cosets(G, cap=cap)]


# exhaustive survey ----------------------------------------------------------------

def subset_norms(G: GroupSpec, cap: int = SURVEY_CAP, chunk: int = 1 << 14) -> np.ndarray:
    """norms[mask] = a_norm of the 0/1 vector on {element i : bit i of mask}."""
    _check_cap(G.order, cap)
    n = G.order
    X = character_matrix(G)
    bits = np.arange(n, dtype=np.int64)
    out = np.empty(1 << n, dtype=float)
    for lo in range(0, 1 << n, chunk):
        masks = np.arange(lo, min(lo + chunk, 1 << n), dtype=np.int64)
        B = ((masks[:, None] >> bits) & 1).astype(float)
        out[lo:lo + len(masks)] = np.abs(B @ X).sum(axis=1) / n
    return out


def coset_masks(G: GroupSpec) -> set[int]:
    out = set()
    for c in enumerate_cosets(G):
        m = 0
        for i in c.element_indices:
            m |= 1 << int(i)
        out.add(m)
    return out


def mask_elements(G: GroupSpec, mask: int) -> list:
    E = G.element_array
    return [tuple(int(v) for v in E[i]) for i in range(G.order) if mask >> i & 1]


@dataclass(frozen=True)
class SurveyRow:
    subset_bitmask: int
    norm: float
    min_coset_length: int | None
    distinct_subgroups: int | None


SURVEY_COLUMNS = ("subset_bitmask", "norm", "min_coset_length", "distinct_subgroups")


def idempotent_survey(G: GroupSpec, norm_cap: float, maxL: int,
                      cap: int = SURVEY_CAP) -> list[SurveyRow]:
    """Norm and shortest coset-ring length of every nonempty subset of the
    dual with norm <= norm_cap.  ``distinct_subgroups`` counts the distinct
    subgroups among the shortest representation found; it is descriptive,
    not a minimum."""
    norms = subset_norms(G, cap)
    rows = []
    for mask in range(1, 1 << G.order):
        nv = float(norms[mask])
        if nv > norm_cap:
            continue
        rep = minimal_representation(G, mask_elements(G, mask), maxL, cap=max(cap, G.order))
        if rep is None:
            rows.append(SurveyRow(mask, nv, None, None))
            continue
        subs = {c.subgroup for c in rep.positives + rep.negatives}
        rows.append(SurveyRow(mask, nv, rep.l1 + rep.l2, len(subs)))
    return rows


def survey_csv(rows: Sequence[SurveyRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SURVEY_COLUMNS)
    for r in rows:
        w.writerow([r.subset_bitmask, repr(r.norm),
                    "" if r.min_coset_length is None else r.min_coset_length,
                    "" if r.distinct_subgroups is None else r.distinct_subgroups])
    return buf.getvalue()


def is_coset(G: GroupSpec, S: Iterable) -> bool:
    return coset_from_elements(G, S) is not None
