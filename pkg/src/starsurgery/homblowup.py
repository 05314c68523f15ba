"""Second homology of CP^2 # N (-CP^2).

Classes are stored with the coefficients exactly as written, so
``86h - 36e1`` is ``(86, -36, ...)``; the pairing supplies the signs:
<x, y> = x_h y_h - sum x_i y_i.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import exactlin as el
from .plumbing import StarPlumbing


class DimensionMismatch(ValueError):
    pass


class InadmissibleParams(ValueError):
    pass


@dataclass(frozen=True)
class BlowupClass:
    N: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if len(self.coeffs) != self.N + 1:
            raise DimensionMismatch(f"expected {self.N + 1} coefficients, got {len(self.coeffs)}")

    @property
    def h(self) -> int:
        return self.coeffs[0]

    def e(self, i: int) -> int:
        return self.coeffs[i]

    def _check(self, other: "BlowupClass"):
        if other.N != self.N:
            raise DimensionMismatch(f"N={self.N} vs N={other.N}")

    def __add__(self, other: "BlowupClass") -> "BlowupClass":
        self._check(other)
        return BlowupClass(self.N, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "BlowupClass") -> "BlowupClass":
        return self + (-other)

    def __neg__(self) -> "BlowupClass":
        return BlowupClass(self.N, tuple(-a for a in self.coeffs))

    def __rmul__(self, k: int) -> "BlowupClass":
        return BlowupClass(self.N, tuple(k * a for a in self.coeffs))

    def square(self) -> int:
        return pair(self, self)

    def extend(self, N: int) -> "BlowupClass":
        """The same class after further blow-ups."""
        if N < self.N:
            raise DimensionMismatch("cannot shrink")
        return BlowupClass(N, self.coeffs + (0,) * (N - self.N))

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            name = "h" if i == 0 else f"e{i}"
            mag = "" if abs(c) == 1 else str(abs(c))
            parts.append(("-" if c < 0 else "+") + mag + name)
        if not parts:
            return "0"
        s = "".join(parts)
        return s[1:] if s[0] == "+" else s


_TERM = re.compile(r"([+-]?)(\d*)(h|e_?\{?(\d+)\}?)")


def parse_class(text: str, N: int) -> BlowupClass:
    """Parse ``"86h-36e1-25e_{10}"`` style text."""
    s = text.replace(" ", "")
    v = [0] * (N + 1)
    if s == "0":
        return BlowupClass(N, tuple(v))
    pos = 0
    for m in _TERM.finditer(s):
        if m.start() != pos:
            raise ValueError(f"cannot parse {text!r} near position {pos}")
        pos = m.end()
        c = int(m.group(2)) if m.group(2) else 1
        if m.group(1) == "-":
            c = -c
        if m.group(3) == "h":
            v[0] += c
        else:
            i = int(m.group(4))
            if not 1 <= i <= N:
                raise DimensionMismatch(f"e{i} outside 1..{N}")
            v[i] += c
    if pos != len(s):
        raise ValueError(f"cannot parse {text!r} near position {pos}")
    return BlowupClass(N, tuple(v))


def h_class(N: int) -> BlowupClass:
    return BlowupClass(N, (1,) + (0,) * N)


def e_class(N: int, i: int) -> BlowupClass:
    v = [0] * (N + 1)
    v[i] = 1
    return BlowupClass(N, tuple(v))


def canonical(N: int) -> BlowupClass:
    """-3h + e_1 + ... + e_N."""
    return BlowupClass(N, (-3,) + (1,) * N)


def fiber(N: int) -> BlowupClass:
    """f = 3h - e_1 - ... - e_9, the elliptic fiber of E(1) # further blow-ups."""
    if N < 9:
        raise DimensionMismatch("the fiber class needs N >= 9")
    return BlowupClass(N, (3,) + (-1,) * 9 + (0,) * (N - 9))


def pair(x: BlowupClass, y: BlowupClass) -> int:
    if x.N != y.N:
        raise DimensionMismatch(f"N={x.N} vs N={y.N}")
    return x.coeffs[0] * y.coeffs[0] - sum(a * b for a, b in zip(x.coeffs[1:], y.coeffs[1:]))


def sign(x) -> int:
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# Configurations and fibers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SphereConfiguration:
    classes: tuple[BlowupClass, ...]
    graph: StarPlumbing
    labels: tuple[str, ...] = ()
    canonical: BlowupClass | None = None  # None means -3h + sum e_i

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        if len(self.classes) != self.graph.vertex_count:
            raise ValueError("one class per vertex is required")
        if len({c.N for c in self.classes}) > 1:
            raise DimensionMismatch("classes live in different blow-ups")

    @property
    def N(self) -> int:
        return self.classes[0].N

    @property
    def K(self) -> BlowupClass:
        return self.canonical if self.canonical is not None else canonical(self.N)

    def pairing_matrix(self) -> el.Matrix:
        return [[pair(a, b) for b in self.classes] for a in self.classes]

    def name(self, v: int) -> str:
        return self.labels[v] if self.labels else f"u{v}"


@dataclass
class CheckReport:
    ok: bool
    failures: list[str] = field(default_factory=list)
    values: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"ok": self.ok, "failures": list(self.failures), "values": self.values}


def verify_configuration(cfg: SphereConfiguration) -> CheckReport:
    """Squares, adjacency and genus-zero adjunction of each vertex class."""
    fails = []
    gram = cfg.graph.gram()
    actual = cfg.pairing_matrix()
    n = len(gram)
    for i in range(n):
        for j in range(i, n):
            if actual[i][j] != gram[i][j]:
                what = "square" if i == j else "pairing"
                fails.append(
                    f"{what} {cfg.name(i)}.{cfg.name(j)} = {actual[i][j]}, expected {gram[i][j]}"
                )
    adj = []
    for i, c in enumerate(cfg.classes):
        a = pair(cfg.K, c) + pair(c, c)
        adj.append(a)
        if a != -2:
            fails.append(f"adjunction K.{cfg.name(i)} + {cfg.name(i)}^2 = {a}, expected -2")
    return CheckReport(not fails, fails, {"pairings": actual, "adjunction": adj})


def verify_fiber_decomposition(
    components: Sequence[tuple[BlowupClass, int]], K: BlowupClass | None = None
) -> CheckReport:
    fails = []
    N = components[0][0].N
    if N < 9:
        raise DimensionMismatch("fiber decompositions need N >= 9")
    K = K if K is not None else canonical(N)
    total = BlowupClass(N, (0,) * (N + 1))
    for idx, (c, m) in enumerate(components):
        total = total + m * c
        if pair(c, c) != -2:
            fails.append(f"component {idx} ({c}) has square {pair(c, c)}")
        if pair(K, c) + pair(c, c) != -2:
            fails.append(f"component {idx} ({c}) fails sphere adjunction")
    if total != fiber(N):
        fails.append(f"sum is {total}, not f")
    return CheckReport(not fails, fails, {"sum": str(total)})


def verify_chamber_vector(
    W: BlowupClass, cfg: SphereConfiguration, sign_of_KW: int, K: BlowupClass | None = None
) -> CheckReport:
    """W orthogonal to the configuration, W^2 > 0, W.h > 0, sign(W.K) as required.

    ``K`` defaults to -3h + sum e_i (not to the configuration's canonical
    class, which is only used for adjunction).
    """
    K = K if K is not None else canonical(W.N)
    fails = []
    orth = [pair(W, u) for u in cfg.classes]
    for i, x in enumerate(orth):
        if x:
            fails.append(f"W.{cfg.name(i)} = {x}, expected 0")
    sq, wh, wk = pair(W, W), pair(W, h_class(W.N)), pair(W, K)
    if sq <= 0:
        fails.append(f"W^2 = {sq} is not positive")
    if wh <= 0:
        fails.append(f"W.h = {wh} is not positive")
    if sign(wk) != sign_of_KW:
        fails.append(f"W.K = {wk} has the wrong sign")
    values = {"orthogonality": orth, "square": sq, "dot_h": wh, "dot_K": wk}
    report = CheckReport(not fails, fails, values)
    if any(orth):
        report.values["transcription_discrepancy"] = True
    return report


def single_entry_fixes(W: BlowupClass, cfg: SphereConfiguration) -> list[BlowupClass]:
    """All vectors differing from W in one coefficient that are orthogonal to cfg."""
    out = []
    resid = [pair(W, u) for u in cfg.classes]
    for i in range(W.N + 1):
        # changing coefficient i by t changes W.u by t * s_i(u)
        unit = h_class(W.N) if i == 0 else e_class(W.N, i)
        slopes = [pair(unit, u) for u in cfg.classes]
        t = None
        ok = True
        for r, s in zip(resid, slopes):
            if s == 0:
                if r:
                    ok = False
                    break
                continue
            if r % s:
                ok = False
                break
            if t is None:
                t = -r // s
            elif t != -r // s:
                ok = False
                break
        if ok and t:
            v = list(W.coeffs)
            v[i] += t
            out.append(BlowupClass(W.N, tuple(v)))
    return out


def project_orthogonal(W: BlowupClass, cfg: SphereConfiguration) -> BlowupClass:
    """Project W off the span of the configuration and clear denominators.

    Uses W' = W - sum c_j u_j with (c_j) = Gram^{-1} (W.u_j); the result is
    the primitive integral multiple of W'.
    """
    gram = cfg.pairing_matrix()
    c = el.solve_rational(gram, [pair(W, u) for u in cfg.classes])
    coords = [Fraction(x) for x in W.coeffs]
    for cj, u in zip(c, cfg.classes):
        coords = [a - cj * b for a, b in zip(coords, u.coeffs)]
    den = 1
    for x in coords:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in coords]
    g = 0
    for x in ints:
        g = gcd(g, x)
    g = g or 1
    return BlowupClass(W.N, tuple(x // g for x in ints))


def rederive_chamber_vector(
    W: BlowupClass, cfg: SphereConfiguration, sign_of_KW: int, K: BlowupClass | None = None
) -> BlowupClass | None:
    """A valid chamber vector close to W: single-coefficient fixes first,
    then the orthogonal projection.  None when neither satisfies the checks."""
    for cand in single_entry_fixes(W, cfg) + [project_orthogonal(W, cfg)]:
        if verify_chamber_vector(cand, cfg, sign_of_KW, K).ok:
            return cand
    return None


# ---------------------------------------------------------------------------
# Kodaira dimension
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OmegaParams:
    a: Fraction
    b: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", tuple(Fraction(x) for x in self.b))
        b = self.b
        if any(x <= 0 for x in b) or any(b[i] <= b[i + 1] for i in range(len(b) - 1)):
            raise InadmissibleParams("need b_1 > b_2 > ... > b_N > 0")
        if b and self.a <= b[0]:
            raise InadmissibleParams("need a > b_1")
        if self.a <= sum(b):
            raise InadmissibleParams("need a > b_1 + ... + b_N")


def random_admissible(N: int, rng: random.Random, scale: int = 1000) -> OmegaParams:
    """A random admissible parameter set with small rational entries."""
    while True:
        b = sorted({Fraction(rng.randint(1, scale), rng.randint(1, scale)) for _ in range(N)}, reverse=True)
        if len(b) < N:
            continue
        total = sum(b)
        a = max(total, b[0]) + Fraction(rng.randint(1, scale), rng.randint(1, scale))
        return OmegaParams(a, tuple(b))


@dataclass(frozen=True)
class KodairaReport:
    coefficients: tuple[Fraction, ...]  # functional in (a, b_1..b_N)
    value: Fraction | None
    K_squared: int | None
    kodaira_dimension: str | None

    def functional_str(self) -> str:
        names = ["a"] + [f"b{i}" for i in range(1, len(self.coefficients))]
        parts = []
        for c, n in zip(self.coefficients, names):
            if c:
                mag = "" if abs(c) == 1 else str(abs(c))
                parts.append(("-" if c < 0 else "+") + mag + n)
        s = "".join(parts) or "0"
        return s[1:] if s[0] == "+" else s


def omega_functional(u: BlowupClass) -> tuple[int, ...]:
    """Coefficients of omega.u in (a, b_1..b_N) for omega = a h - sum b_i e_i."""
    return (u.h,) + tuple(u.coeffs[1:])


def kodaira_dimension(k_omega, k_squared) -> str | None:
    if k_omega < 0 or k_squared < 0:
        return "-inf"
    if k_omega == 0 and k_squared == 0:
        return "0"
    if k_omega > 0 and k_squared == 0:
        return "1"
    if k_omega > 0 and k_squared > 0:
        return "2"
    return None


def kodaira_report(
    cfg: SphereConfiguration,
    P_inv: Sequence[Sequence[Fraction]] | None = None,
    params: OmegaParams | None = None,
    K_squared: int | None = None,
) -> KodairaReport:
    """K_X.omega_X = K.omega - K|_S.omega|_S as an exact functional.

    K|_S.omega|_S = k^T P^{-1} w with k_i = K.u_i and w_i = omega.u_i, the
    restrictions written in the basis dual to the vertices.
    """
    N = cfg.N
    K = canonical(N)
    if P_inv is None:
        P_inv = el.inverse_rational(cfg.pairing_matrix())
    k = [pair(K, u) for u in cfg.classes]
    kp = [sum(Fraction(k[i]) * P_inv[i][j] for i in range(len(k))) for j in range(len(k))]
    restricted = [Fraction(0)] * (N + 1)
    for coef, u in zip(kp, cfg.classes):
        for t, x in enumerate(omega_functional(u)):
            restricted[t] += coef * x
    # K.omega = -3a + sum b_i
    k_omega = [Fraction(-3)] + [Fraction(1)] * N
    coeffs = tuple(a - b for a, b in zip(k_omega, restricted))
    value = None
    dim = None
    if params is not None:
        if len(params.b) != N:
            raise InadmissibleParams(f"expected {N} b-parameters")
        value = coeffs[0] * params.a + sum(c * b for c, b in zip(coeffs[1:], params.b))
        if K_squared is not None:
            dim = kodaira_dimension(value, K_squared)
    return KodairaReport(coeffs, value, K_squared, dim)


# ---------------------------------------------------------------------------
# Homeomorphism type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HomeoReport:
    chi: int
    sigma: int
    b2_plus: int
    b2_minus: int
    parity: str

    @property
    def K_squared(self) -> int:
        return 3 * self.sigma + 2 * self.chi

    def as_dict(self) -> dict:
        return {
            "chi": self.chi,
            "sigma": self.sigma,
            "b2_plus": self.b2_plus,
            "b2_minus": self.b2_minus,
            "parity": self.parity,
        }


def blowup_invariants(N: int) -> tuple[int, int]:
    """(chi, sigma) of CP^2 # N (-CP^2)."""
    return 3 + N, 1 - N


def homeo_type_report(
    chi_ambient: int,
    sigma_ambient: int,
    plumbing: tuple[int, int],
    filling: tuple[int, int],
) -> HomeoReport:
    """Replace a plumbing (chi, sigma) by a filling (chi, sigma).

    Betti numbers assume the result is simply connected.  An even form of
    this size would have signature divisible by 8, so any other signature
    certifies odd parity; otherwise parity is left undetermined.
    """
    chi = chi_ambient - plumbing[0] + filling[0]
    sigma = sigma_ambient - plumbing[1] + filling[1]
    b2 = chi - 2
    if (b2 + sigma) % 2:
        raise ValueError(f"inconsistent chi={chi}, sigma={sigma}")
    bp, bm = (b2 + sigma) // 2, (b2 - sigma) // 2
    parity = "odd" if sigma % 8 else "undetermined"
    return HomeoReport(chi, sigma, bp, bm, parity)
