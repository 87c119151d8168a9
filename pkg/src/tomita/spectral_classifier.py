"""Classification of inverse-problem solutions from spectral data.

A solution is described by the eigenvalues mu_k of H_0 together with their
von Neumann multiplicities m_k. The modular operator then has the ratio
spectrum lambda = mu_k / mu_l, with multiplicity sum m_k m_l over the pairs
giving lambda in type I and infinite multiplicity in type II.

Infinite sequences are represented as a finite head followed by a geometric
tail (start * ratio**k with a constant multiplicity), which keeps every
series that matters (sum m mu, sum m, sum m / mu) exactly decidable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import (
    DimensionTooLarge,
    EpsTooLarge,
    EqualMultiplicities,
    IndexOutOfHead,
    InvalidSpectralData,
    TypeIForbidden,
    UnsupportedTarget,
)
from .finite_factor import FactorContext

RATIO_RTOL = 1e-9
NORM_TOL = 1e-9
INTEGER_TOL = 1e-9
EXPONENT_TOL = 1e-7
DEFAULT_CUTOFF = 40
MAX_CROSSCHECK_DIM = 8
INF = math.inf


class FactorType(str, Enum):
    TYPE_I_FINITE = "TypeI_finite"
    TYPE_I_INF = "TypeI_inf"
    TYPE_II_1 = "TypeII_1"
    TYPE_II_INF = "TypeII_inf"

    @property
    def is_type_i(self) -> bool:
        return self in (FactorType.TYPE_I_FINITE, FactorType.TYPE_I_INF)

    @property
    def is_infinite(self) -> bool:
        return self in (FactorType.TYPE_I_INF, FactorType.TYPE_II_INF)


def _close(a: float, b: float, rtol: float = RATIO_RTOL) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= rtol * max(abs(a), abs(b))


@dataclass(frozen=True)
class GeometricTail:
    """Eigenvalues start * ratio**k for k = 0, 1, 2, ..., each with multiplicity mult."""

    ratio: float
    mult: float
    start: float

    def __post_init__(self):
        if not 0.0 < self.ratio < 1.0:
            raise InvalidSpectralData(f"tail ratio must lie in (0, 1), got {self.ratio}")
        if not (self.mult > 0 and math.isfinite(self.mult)):
            raise InvalidSpectralData(f"tail multiplicity must be positive, got {self.mult}")
        if not (self.start > 0 and math.isfinite(self.start)):
            raise InvalidSpectralData(f"tail start must be positive, got {self.start}")

    def terms(self, count: int) -> list[tuple[float, float]]:
        return [(self.start * self.ratio**k, self.mult) for k in range(count)]

    @property
    def weight(self) -> float:
        """sum_k mult * start * ratio**k."""
        return self.mult * self.start / (1.0 - self.ratio)


@dataclass(frozen=True)
class SpectralData:
    factor_type: FactorType
    head: tuple[tuple[float, float], ...] = ()
    tail: GeometricTail | None = None

    def __post_init__(self):
        object.__setattr__(self, "factor_type", FactorType(self.factor_type))
        object.__setattr__(self, "head", tuple((float(mu), float(m)) for mu, m in self.head))
        self._validate()

    def _validate(self):
        ft = self.factor_type
        if not self.head and self.tail is None:
            raise InvalidSpectralData("spectral data is empty")
        for mu, m in self.head:
            if not (mu > 0 and math.isfinite(mu)):
                raise InvalidSpectralData(f"eigenvalue must be positive, got {mu}")
            if not (m > 0 and math.isfinite(m)):
                raise InvalidSpectralData(f"multiplicity must be positive, got {m}")
        mus = [mu for mu, _ in self.head]
        if any(b >= a for a, b in zip(mus, mus[1:])):
            raise InvalidSpectralData("head eigenvalues must be strictly decreasing")
        if self.tail is not None and mus and self.tail.start >= mus[-1]:
            raise InvalidSpectralData("tail must start below the last head eigenvalue")
        if ft.is_type_i:
            mults = [m for _, m in self.head] + ([self.tail.mult] if self.tail else [])
            if any(abs(m - round(m)) > INTEGER_TOL for m in mults):
                raise InvalidSpectralData(f"{ft.value} requires integer multiplicities")
        if ft.is_infinite and self.tail is None:
            raise InvalidSpectralData(f"{ft.value} needs a tail so that sum m_k is infinite")
        if not ft.is_infinite and self.tail is not None:
            raise InvalidSpectralData(f"{ft.value} has finite multiplicity sum; no tail allowed")
        w = self.weight_sum
        if abs(w - 1.0) > NORM_TOL:
            raise InvalidSpectralData(f"sum m_k mu_k = {w!r}, expected 1")

    @classmethod
    def build(cls, factor_type, head=(), tail: GeometricTail | None = None, normalize=True):
        """Sort, merge repeated eigenvalues and rescale to sum m_k mu_k = 1."""
        ft = FactorType(factor_type)
        merged: list[list[float]] = []
        for mu, m in sorted(((float(a), float(b)) for a, b in head), reverse=True):
            if merged and _close(merged[-1][0], mu, 1e-12):
                merged[-1][1] += m
            else:
                merged.append([mu, m])
        if ft.is_type_i:
            # snap near-integers; genuine non-integers are rejected by validation
            def snap(m):
                return float(round(m)) if abs(m - round(m)) <= INTEGER_TOL else m

            merged = [[mu, snap(m)] for mu, m in merged]
            if tail is not None:
                tail = replace(tail, mult=snap(tail.mult))
        pairs = tuple((mu, m) for mu, m in merged)
        if normalize:
            w = sum(mu * m for mu, m in pairs) + (tail.weight if tail else 0.0)
            if not (w > 0 and math.isfinite(w)):
                raise InvalidSpectralData("cannot normalize spectral data")
            pairs = tuple((mu / w, m) for mu, m in pairs)
            if tail is not None:
                tail = replace(tail, start=tail.start / w)
        return cls(ft, pairs, tail)

    @property
    def weight_sum(self) -> float:
        """sum m_k mu_k, exact for the tail."""
        return math.fsum(mu * m for mu, m in self.head) + (self.tail.weight if self.tail else 0.0)

    @property
    def multiplicity_sum(self) -> float:
        if self.tail is not None:
            return INF
        return math.fsum(m for _, m in self.head)

    @property
    def inverse_trace(self) -> float:
        """sum m_k / mu_k, i.e. tr(H_0^{-1}); a tail makes it diverge."""
        if self.tail is not None:
            return INF
        return math.fsum(m / mu for mu, m in self.head)

    @property
    def zero_in_spectrum(self) -> bool:
        """Eigenvalues accumulate at 0, which happens exactly for a tail."""
        return self.tail is not None

    @property
    def top(self) -> float:
        return self.head[0][0] if self.head else self.tail.start

    def expand(self, cutoff: int) -> list[tuple[float, float]]:
        """Head followed by the first ``cutoff`` tail terms."""
        return list(self.head) + (self.tail.terms(cutoff) if self.tail else [])

    def scaled(self, c: float) -> "SpectralData":
        """All eigenvalues times c, renormalized."""
        if not c > 0:
            raise InvalidSpectralData("scale factor must be positive")
        tail = replace(self.tail, start=self.tail.start * c) if self.tail else None
        return SpectralData.build(self.factor_type, [(mu * c, m) for mu, m in self.head], tail)

    def canonical(self) -> "SpectralData":
        """Absorb trailing head entries that continue the tail's geometric pattern."""
        if self.tail is None:
            return self
        head = list(self.head)
        tail = self.tail
        while head:
            mu, m = head[-1]
            if _close(mu, tail.start / tail.ratio) and _close(m, tail.mult):
                head.pop()
                tail = replace(tail, start=mu)
            else:
                break
        return SpectralData(self.factor_type, tuple(head), tail)

    def to_dict(self) -> dict:
        return {
            "factor_type": self.factor_type.value,
            "head": [[mu, m] for mu, m in self.head],
            "tail": None
            if self.tail is None
            else {"ratio": self.tail.ratio, "mult": self.tail.mult, "start": self.tail.start},
        }


@dataclass(frozen=True)
class DeltaSpectrum:
    """Eigenvalues lambda_j of Delta_0 with multiplicities n_j (math.inf allowed).

    A lattice spectrum {base**z : z in Z} is represented by ``lattice_base``
    with an empty entry list; ``approximate`` marks spectra computed from a
    cutoff expansion of an infinite sequence.
    """

    entries: tuple[tuple[float, float], ...] = ()
    lattice_base: float | None = None
    lattice_mult: float = INF
    approximate: bool = False

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((float(l), float(n)) for l, n in self.entries))
        if self.lattice_base is not None:
            if not self.lattice_base > 1.0:
                raise InvalidSpectralData("lattice base must exceed 1")
            if self.entries:
                raise InvalidSpectralData("lattice spectra carry no explicit entries")
            return
        if not self.entries:
            raise InvalidSpectralData("empty spectrum")
        lams = [l for l, _ in self.entries]
        if any(l <= 0 for l in lams):
            raise InvalidSpectralData("eigenvalues of Delta_0 must be positive")
        if any(b <= a for a, b in zip(lams, lams[1:])):
            raise InvalidSpectralData("entries must be sorted and distinct")
        if self.lookup(1.0) is None:
            raise InvalidSpectralData("1 must belong to the ratio spectrum")
        for lam, n in self.entries:
            partner = self.lookup(1.0 / lam)
            if partner is None or not _close(partner, n):
                raise InvalidSpectralData(f"spectrum is not symmetric under inversion at {lam}")

    @classmethod
    def lattice(cls, base: float, mult: float = INF) -> "DeltaSpectrum":
        return cls(lattice_base=float(base), lattice_mult=float(mult))

    @property
    def is_lattice(self) -> bool:
        return self.lattice_base is not None

    def lookup(self, lam: float) -> float | None:
        """Multiplicity of ``lam`` or None when it is not in the spectrum."""
        if self.is_lattice:
            z = math.log(lam) / math.log(self.lattice_base)
            return self.lattice_mult if abs(z - round(z)) <= EXPONENT_TOL else None
        lams = np.array([l for l, _ in self.entries])
        i = int(np.argmin(np.abs(lams - lam)))
        return self.entries[i][1] if _close(lams[i], lam) else None

    def to_dict(self) -> dict:
        def enc(x):
            return "inf" if math.isinf(x) else x

        if self.is_lattice:
            return {"lattice_base": self.lattice_base, "mult": enc(self.lattice_mult)}
        return {
            "entries": [[l, enc(n)] for l, n in self.entries],
            "approximate": self.approximate,
        }


def group_ratios(values, weights=None, rtol: float = RATIO_RTOL) -> list[tuple[float, float]]:
    """Merge sorted positive values that agree to relative tolerance; sum their weights."""
    values = np.asarray(values, dtype=float)
    weights = np.ones_like(values) if weights is None else np.asarray(weights, dtype=float)
    order = np.argsort(values, kind="stable")
    groups: list[list[float]] = []
    anchor = None
    for v, w in zip(values[order], weights[order]):
        if anchor is not None and v - anchor <= rtol * anchor:
            groups[-1][1] += w
            groups[-1][2] += 1
            groups[-1][0] += (v - groups[-1][0]) / groups[-1][2]
        else:
            anchor = v
            groups.append([v, w, 1])
    return [(g[0], g[1]) for g in groups]


def _in_ratio_group(lam: float, ratio: float) -> bool:
    z = math.log(lam) / math.log(ratio)
    return abs(z - round(z)) <= EXPONENT_TOL * max(1.0, abs(z))


def delta_spectrum(s: SpectralData, cutoff: int = DEFAULT_CUTOFF) -> DeltaSpectrum:
    """Ratio spectrum of Delta_0 from (mu_k, m_k) data.

    Multiplicities follow n = sum m_k m_l in type I and are infinite in
    type II. With a tail the pairs are enumerated up to ``cutoff`` tail
    terms; ratios in the tail's group ratio**Z are realized by infinitely many
    tail pairs and get infinite multiplicity exactly.
    """
    if cutoff < 1:
        raise InvalidSpectralData("cutoff must be positive")
    pairs = s.expand(cutoff)
    mu = np.array([p[0] for p in pairs])
    m = np.array([p[1] for p in pairs])
    ratios = (mu[:, None] / mu[None, :]).ravel()
    weights = (m[:, None] * m[None, :]).ravel()
    grouped = group_ratios(ratios, weights)
    symmetric = []
    for lam, n in grouped:
        if not s.factor_type.is_type_i:
            n = INF
        elif s.tail is not None and _in_ratio_group(lam, s.tail.ratio):
            n = INF
        symmetric.append((lam, n))
    # Snap reciprocal pairs onto each other so the inversion symmetry is exact.
    out = [(lam, n) for lam, n in symmetric if lam < 1.0 and not _close(lam, 1.0)]
    out_upper = [(1.0 / lam, n) for lam, n in reversed(out)]
    ones = [(1.0, n) for lam, n in symmetric if _close(lam, 1.0)][:1]
    return DeltaSpectrum(
        entries=tuple(out + ones + out_upper), approximate=s.tail is not None
    )


@dataclass
class AdmissibilityReport:
    clauses: dict[str, bool]
    within_cutoff: bool
    cutoff: int
    details: dict[str, str] = field(default_factory=dict)

    @property
    def admissible(self) -> bool:
        return all(self.clauses.values())

    def __bool__(self) -> bool:
        return self.admissible

    @property
    def failures(self) -> list[str]:
        return [k for k, ok in self.clauses.items() if not ok]

    @property
    def label(self) -> str:
        if not self.admissible:
            return "not admissible"
        return "admissible within cutoff" if self.within_cutoff else "admissible"

    def to_dict(self) -> dict:
        return {
            "admissible": self.admissible,
            "label": self.label,
            "cutoff": self.cutoff,
            "clauses": dict(self.clauses),
            "failures": self.failures,
            "details": dict(self.details),
        }


def _exponents(values, base: float) -> list[int] | None:
    out = []
    for v in values:
        z = math.log(v) / math.log(base)
        if abs(z - round(z)) > EXPONENT_TOL * max(1.0, abs(z)):
            return None
        out.append(int(round(z)))
    return out


def _lattice_match(candidate: SpectralData, target: DeltaSpectrum, cutoff: int, details):
    """Ratio-set and multiplicity clauses against {base**z}, in integer exponents.

    Every exponent |z| < cutoff is checked; pairs needed for such z never
    involve tail terms beyond the cutoff, so this window is decided exactly.
    """
    base = target.lattice_base
    pairs = candidate.expand(cutoff)
    exps = _exponents([mu / candidate.top for mu, _ in pairs], base)
    step = None
    if candidate.tail is not None:
        st = _exponents([1.0 / candidate.tail.ratio], base)
        step = st[0] if st else None
    if exps is None or (candidate.tail is not None and step is None):
        details["ratio_set"] = "eigenvalue ratios are not integer powers of the base"
        return False, False
    counts: dict[int, float] = {}
    for (a, (_, ma)), (b, (_, mb)) in itertools.product(zip(exps, pairs), repeat=2):
        counts[a - b] = counts.get(a - b, 0.0) + ma * mb
    window = range(-(cutoff - 1), cutoff)
    missing = [z for z in window if z not in counts]
    ratio_ok = not missing
    if missing:
        details["ratio_set"] = f"missing exponents, e.g. {missing[:5]}"
    mult_ok = True
    for z in window:
        if z not in counts:
            continue
        if not candidate.factor_type.is_type_i:
            n = INF
        elif step is not None and z % step == 0:
            n = INF
        else:
            n = counts[z]
        if not _close(n, target.lattice_mult):
            mult_ok = False
            details["multiplicities"] = f"n(base^{z}) = {n}, target {target.lattice_mult}"
            break
    return ratio_ok, mult_ok


def _explicit_match(candidate: SpectralData, target: DeltaSpectrum, cutoff: int, details):
    got = delta_spectrum(candidate, cutoff)
    lo, hi = 0.0, INF
    if got.approximate or target.approximate:
        # compare only where both lists are complete
        hi = min(got.entries[-1][0], target.entries[-1][0])
        lo = 1.0 / hi
    a = [(l, n) for l, n in got.entries if lo * (1 - RATIO_RTOL) <= l <= hi * (1 + RATIO_RTOL)]
    b = [(l, n) for l, n in target.entries if lo * (1 - RATIO_RTOL) <= l <= hi * (1 + RATIO_RTOL)]
    if len(a) != len(b) or not all(_close(x[0], y[0]) for x, y in zip(a, b)):
        details["ratio_set"] = f"ratio set {[l for l, _ in a]} differs from {[l for l, _ in b]}"
        return False, False
    for (lam, n1), (_, n2) in zip(a, b):
        if not _close(n1, n2):
            details["multiplicities"] = f"n({lam:.6g}) = {n1}, target {n2}"
            return True, False
    return True, True


def is_admissible(
    candidate: SpectralData, target: DeltaSpectrum, cutoff: int = DEFAULT_CUTOFF
) -> AdmissibilityReport:
    """Check the ratio relation, the multiplicity relation and the constraints on (mu, m)."""
    details: dict[str, str] = {}
    if target.is_lattice:
        ratio_ok, mult_ok = _lattice_match(candidate, target, cutoff, details)
    else:
        ratio_ok, mult_ok = _explicit_match(candidate, target, cutoff, details)
    ft = candidate.factor_type
    mults = [m for _, m in candidate.head] + ([candidate.tail.mult] if candidate.tail else [])
    integral = not ft.is_type_i or all(abs(m - round(m)) <= INTEGER_TOL for m in mults)
    total = candidate.multiplicity_sum
    infinite_ok = math.isinf(total) if ft.is_infinite else math.isfinite(total)
    if not infinite_ok:
        details["multiplicity_sum"] = f"sum m_k = {total} for {ft.value}"
    clauses = {
        "ratio_set": ratio_ok,
        "multiplicities": mult_ok,
        "integrality": integral,
        "multiplicity_sum": infinite_ok,
        "normalization": abs(candidate.weight_sum - 1.0) <= NORM_TOL,
    }
    within = target.is_lattice or target.approximate or candidate.tail is not None
    return AdmissibilityReport(clauses=clauses, within_cutoff=within, cutoff=cutoff, details=details)


def equivalent(s1: SpectralData, s2: SpectralData) -> bool:
    """Same eigenvalues up to a constant c > 0 and the same multiplicities."""
    if s1.factor_type != s2.factor_type:
        return False
    a, b = s1.canonical(), s2.canonical()
    if (a.tail is None) != (b.tail is None) or len(a.head) != len(b.head):
        return False
    c = b.top / a.top
    for (mu1, m1), (mu2, m2) in zip(a.head, b.head):
        if not (_close(c * mu1, mu2) and _close(m1, m2)):
            return False
    if a.tail is not None:
        ta, tb = a.tail, b.tail
        if not (_close(ta.ratio, tb.ratio) and _close(ta.mult, tb.mult)):
            return False
        if not _close(c * ta.start, tb.start):
            return False
    return True


def second_class_exists(s: SpectralData) -> bool:
    """Whether tr(H_0^{-1}) = sum m_k / mu_k is finite.

    A geometric tail has mu_k -> 0, so the series diverges; every datum with
    infinite multiplicity sum carries a tail, hence this is always False
    for infinite factors.
    """
    if s.tail is not None:
        return False
    return math.isfinite(s.inverse_trace)


def _head_index(s: SpectralData, k: int) -> int:
    if not 0 <= k < len(s.head):
        raise IndexOutOfHead(f"index {k} outside head of length {len(s.head)}")
    return k


def permute_multiplicities(s: SpectralData, k: int, l: int) -> SpectralData:
    """Swap m_k and m_l (head indices, 0-based) and renormalize."""
    k, l = _head_index(s, k), _head_index(s, l)
    if _close(s.head[k][1], s.head[l][1]):
        raise EqualMultiplicities(f"m_{k} == m_{l}; swapping them changes nothing")
    head = [list(p) for p in s.head]
    head[k][1], head[l][1] = head[l][1], head[k][1]
    return SpectralData.build(s.factor_type, head, s.tail)


def shift_multiplicity(s: SpectralData, k: int, l: int, eps: float) -> SpectralData:
    """m_k += eps, m_l -= eps, then renormalize. Only meaningful for type II."""
    if s.factor_type.is_type_i:
        raise TypeIForbidden("type I multiplicities must stay integers")
    k, l = _head_index(s, k), _head_index(s, l)
    if k == l:
        raise InvalidSpectralData("k and l must differ")
    if not eps > 0:
        raise InvalidSpectralData("eps must be positive")
    if eps >= s.head[l][1]:
        raise EpsTooLarge(f"eps={eps} must be smaller than m_{l}={s.head[l][1]}")
    head = [list(p) for p in s.head]
    head[k][1] += eps
    head[l][1] -= eps
    return SpectralData.build(s.factor_type, head, s.tail)


@dataclass(frozen=True)
class EnumerationBounds:
    """Search space for ``enumerate_classes``.

    Lattice targets: head exponents are drawn from {0, -1, ..., -(window-1)}
    (at most ``max_head`` of them) and tails start at an exponent in
    {0, ..., -window} with a step from ``tail_steps``. Explicit targets:
    eigenvalues are drawn from ``mu_grid``. Multiplicities come from
    ``multiplicities`` in both cases.
    """

    max_head: int = 3
    window: int = 8
    tail_steps: tuple[int, ...] = (1, 2, 3)
    multiplicities: tuple[float, ...] = (1,)
    mu_grid: tuple[float, ...] | None = None
    cutoff: int = DEFAULT_CUTOFF


def _lattice_candidates(base: float, ft: FactorType, b: EnumerationBounds):
    exps = list(range(0, -b.window, -1))
    for size in range(0, b.max_head + 1):
        for head in itertools.combinations(exps, size):
            if head and head[0] != 0:
                continue
            tails = [None]
            if ft.is_infinite:
                lowest = head[-1] if head else 1
                tails = [
                    (t, p)
                    for t in range(lowest - 1, -b.window - 1, -1)
                    for p in b.tail_steps
                ]
                if not head:
                    tails = [(0, p) for p in b.tail_steps]
            elif not head:
                continue
            for tail in tails:
                n_mult = len(head) + (tail is not None)
                for mults in itertools.product(b.multiplicities, repeat=n_mult):
                    pairs = [(base**e, m) for e, m in zip(head, mults)]
                    gt = None
                    if tail is not None:
                        gt = GeometricTail(ratio=base ** -tail[1], mult=mults[-1], start=base ** tail[0])
                    yield SpectralData.build(ft, pairs, gt)


def _grid_candidates(grid, ft: FactorType, b: EnumerationBounds):
    if ft.is_infinite:
        raise UnsupportedTarget("grid search covers finite factors only")
    values = sorted(set(float(g) for g in grid), reverse=True)
    for size in range(1, b.max_head + 1):
        for subset in itertools.combinations(values, size):
            for mults in itertools.product(b.multiplicities, repeat=size):
                yield SpectralData.build(ft, list(zip(subset, mults)))


def enumerate_classes(
    target: DeltaSpectrum, factor_type, bounds: EnumerationBounds = EnumerationBounds()
) -> list[SpectralData]:
    """Pairwise inequivalent admissible data within ``bounds``, in generation order."""
    ft = FactorType(factor_type)
    if target.is_lattice:
        candidates = _lattice_candidates(target.lattice_base, ft, bounds)
    elif bounds.mu_grid:
        candidates = _grid_candidates(bounds.mu_grid, ft, bounds)
    else:
        raise UnsupportedTarget("target is not an exponent lattice and no mu_grid was given")
    found: list[SpectralData] = []
    seen: dict[tuple, list[SpectralData]] = {}
    for cand in candidates:
        bucket = seen.setdefault(_class_key(cand), [])
        if any(equivalent(cand, f) for f in bucket):
            continue
        bucket.append(cand)
        if is_admissible(cand, target, bounds.cutoff):
            found.append(cand.canonical())
    return found


def _class_key(s: SpectralData) -> tuple:
    # coarse bucket for equivalent(); exact comparison happens inside the bucket
    c = s.canonical()
    return (len(c.head), c.tail is not None, round(c.tail.ratio, 6) if c.tail else None)


@dataclass
class CrossCheckReport:
    expected: list[tuple[float, float]]
    observed: list[tuple[float, float]]
    max_rel_error: float
    multiplicities_match: bool
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.multiplicities_match and self.max_rel_error <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "expected": [[l, n] for l, n in self.expected],
            "observed": [[float(l), float(n)] for l, n in self.observed],
            "max_rel_error": self.max_rel_error,
            "multiplicities_match": self.multiplicities_match,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def cross_check_finite(
    s: SpectralData, ctx: FactorContext | None = None, rtol: float = 1e-10
) -> CrossCheckReport:
    """Compare the ratio spectrum with the eigenvalues of Delta_0 in the matrix model.

    H_0 = diag(mu_k repeated m_k times) and T = H_0^{1/2}; the modular
    operator is built by the polar-decomposition formulas.
    """
    from .modular_engine import modular_objects

    if not s.factor_type.is_type_i or s.tail is not None:
        raise InvalidSpectralData("cross-check needs finite type I data")
    n = int(round(s.multiplicity_sum))
    if n > MAX_CROSSCHECK_DIM:
        raise DimensionTooLarge(f"total dimension {n} exceeds {MAX_CROSSCHECK_DIM}")
    diag = np.concatenate([np.full(int(round(m)), mu) for mu, m in s.head])
    if ctx is None:
        ctx = FactorContext(n=n)
    else:
        ctx = ctx.replace(n=n)
    mu_ratio = diag.max() / diag.min()
    ctx = ctx.replace(cond_limit=max(ctx.cond_limit, np.sqrt(mu_ratio) * (1 + 1e-12)))
    t = np.diag(np.sqrt(diag)).astype(complex)
    delta0 = modular_objects(t, ctx).Delta0
    eig = np.sort(np.linalg.eigvalsh(0.5 * (delta0 + delta0.conj().T)))
    expected = list(delta_spectrum(s).entries)
    observed = group_ratios(eig)
    flat_expected = np.sort(
        np.concatenate([np.full(int(round(k)), lam) for lam, k in expected])
    )
    if flat_expected.size == eig.size:
        err = float(np.max(np.abs(eig - flat_expected) / flat_expected))
    else:
        err = INF
    mult_ok = len(observed) == len(expected) and all(
        int(round(k1)) == int(round(k2)) and _close(l1, l2, 1e-8)
        for (l1, k1), (l2, k2) in zip(observed, expected)
    )
    return CrossCheckReport(
        expected=expected,
        observed=observed,
        max_rel_error=err,
        multiplicities_match=mult_ok,
        tolerance=rtol,
    )
