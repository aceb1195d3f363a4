"""Trace bookkeeping and local Euler factors.

Counts over GF(p) and GF(p^2) are converted to Frobenius traces on the
middle cohomology, the degree-23 cohomology of the Hilbert square and of
the cubic fourfold are realized as exact count identities, and the local
factor list of the fourfold is assembled from the surface data:

    P0 = 1 - T
    P2 = 1 - pT
    P4 = (1 - p^2 T)^{m+} (1 + p^2 T)^{m-} (1 - p^2 T) (1 - p a_p T + p^4 T^2)
    P6 = 1 - p^3 T
    P8 = 1 - p^4 T

with m+ + m- = 20 the rank of the algebraic part of H^2 of the surface,
m+ - m- the signed number of Frobenius-fixed algebraic classes, the lone
(1 - p^2 T) the class of the exceptional divisor, and the quadratic the
weight-3 CM form factor shifted by one Tate twist.  Everything is exact
integer arithmetic; there are no floating-point eigenvalues anywhere.

Bad primes (2 and 3) are rejected throughout; their factors are out of
scope and never guessed.
"""

from dataclasses import dataclass

from .fields import is_prime

K3_B2 = 22          # second Betti number of a K3 surface
NS_RANK = 20        # Picard rank of the singular surface S
FOURFOLD_B4 = 23    # middle Betti number of a cubic fourfold


def _check_good_prime(p):
    if not is_prime(p) or p in (2, 3):
        raise ValueError(f"bad prime {p}: need a good prime (>= 5)")


@dataclass(frozen=True)
class TraceRecord:
    """Frobenius trace data extracted from a count N1 = #S(F_p)."""

    p: int
    t2: int          # trace on H^2: N1 - 1 - p^2
    residue: int     # (N1 - 1) mod p, the transcendental trace mod p
    t_alg: int = None  # t2 - a_p once the form coefficient is known


def trace_from_count(n1: int, p: int) -> TraceRecord:
    """Lefschetz: N1 = 1 + t2 + p^2 for a K3 surface, with |t2| <= 22p."""
    _check_good_prime(p)
    t2 = n1 - 1 - p * p
    if abs(t2) > K3_B2 * p:
        raise ValueError(
            f"impossible K3 count: |{t2}| > 22*{p} violates the Weil bound")
    return TraceRecord(p, t2, (n1 - 1) % p)


def residue_zero_check(p: int, n1: int) -> bool:
    """For inert primes the transcendental trace vanishes mod p."""
    _check_good_prime(p)
    if p % 3 != 2:
        raise ValueError(f"{p} is not 2 mod 3")
    return (n1 - 1) % p == 0


def hilbert_square_count(n1: int, n2: int, p: int) -> int:
    """#S^[2](F_p) = (N1^2 + N2)/2 + p*N1.

    The first summand counts Frobenius-stable unordered pairs of
    geometric points, the second replaces each diagonal point by the
    exceptional line.  N1^2 + N2 must be even; an odd value cannot come
    from Frobenius-stable pair counting.
    """
    _check_good_prime(p)
    if (n1 * n1 + n2) % 2 != 0:
        raise ValueError(f"N1^2 + N2 = {n1 * n1 + n2} is odd; inconsistent pair counts")
    return (n1 * n1 + n2) // 2 + p * n1


def fourfold_count_from_surface(n1: int, p: int) -> int:
    """#X(F_p) = 1 + p^2 + p^4 + p*N1 from the middle-cohomology decomposition."""
    _check_good_prime(p)
    return 1 + p * p + p ** 4 + p * n1


def algebraic_trace_split(t2: int, a_p: int, p: int) -> int:
    """Split the H^2 trace as t2 = t_alg + a_p; t_alg must be p times an
    integer of absolute value at most 20."""
    _check_good_prime(p)
    t_alg = t2 - a_p
    if t_alg % p != 0:
        raise ValueError(
            f"algebraic trace {t_alg} not divisible by p={p}; decomposition inconsistent")
    if abs(t_alg // p) > NS_RANK:
        raise ValueError(f"|t_alg/p| = {abs(t_alg // p)} exceeds the algebraic rank 20")
    return t_alg


@dataclass(frozen=True)
class LocalFactor:
    """Integer polynomial in T = p^{-s} with constant term 1."""

    p: int
    weight: int
    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs or self.coeffs[0] != 1:
            raise ValueError("local factor must have constant term 1")

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def to_json(self) -> dict:
        return {"p": self.p, "weight": self.weight, "coeffs": list(self.coeffs)}


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def local_factor_cm(a_p: int, p: int, tate_shift: int) -> LocalFactor:
    """Degree-2 factor of the CM form, 1 - a_p T + p^2 T^2, with each Tate
    shift multiplying the inverse roots by p."""
    _check_good_prime(p)
    if abs(a_p) > 2 * p:
        raise ValueError(f"|a_p| = {abs(a_p)} violates the weight-3 bound 2p = {2 * p}")
    if tate_shift not in (0, 1):
        raise ValueError("tate_shift must be 0 or 1")
    s = p ** tate_shift
    return LocalFactor(p, 2 + 2 * tate_shift, (1, -a_p * s, p * p * s * s))


@dataclass(frozen=True)
class CohomologyDecomposition:
    """Labelled pieces (label, dimension, inverse-root description) of one
    cohomology group; dimensions must sum to the group's Betti number."""

    group: str
    betti: int
    pieces: tuple

    def __post_init__(self):
        total = sum(dim for _, dim, _ in self.pieces)
        if total != self.betti:
            raise ValueError(f"{self.group}: piece dimensions sum to {total}, not {self.betti}")


def fourfold_h4_decomposition(p: int, a_p: int, ns_fixed: int) -> CohomologyDecomposition:
    """The 23-dimensional middle cohomology of the fourfold: 20 algebraic
    surface classes with eigenvalue +-p^2, the exceptional class at p^2,
    and the Tate-twisted transcendental plane."""
    m_plus, m_minus = _ns_split(ns_fixed)
    return CohomologyDecomposition(
        "H4(X)", FOURFOLD_B4,
        (
            ("NS(S)(1) fixed", m_plus, f"eigenvalue {p * p}"),
            ("NS(S)(1) flipped", m_minus, f"eigenvalue {-p * p}"),
            ("Delta(1)", 1, f"eigenvalue {p * p}"),
            ("T(S)(1)", 2, f"roots of 1 - {p * a_p} T + {p ** 4} T^2"),
        ))


def hilbert_square_h2_decomposition(p: int, a_p: int, ns_fixed: int) -> CohomologyDecomposition:
    """The 23-dimensional H^2 of the Hilbert square: the 22 surface classes
    untwisted, plus the exceptional divisor class at eigenvalue p."""
    m_plus, m_minus = _ns_split(ns_fixed)
    return CohomologyDecomposition(
        "H2(S[2])", K3_B2 + 1,
        (
            ("NS(S) fixed", m_plus, f"eigenvalue {p}"),
            ("NS(S) flipped", m_minus, f"eigenvalue {-p}"),
            ("Delta", 1, f"eigenvalue {p}"),
            ("T(S)", 2, f"roots of 1 - {a_p} T + {p * p} T^2"),
        ))


def _ns_split(ns_fixed: int):
    if abs(ns_fixed) > NS_RANK or (NS_RANK + ns_fixed) % 2 != 0:
        raise ValueError(
            f"inconsistent ns_fixed {ns_fixed}: need |ns_fixed| <= 20 of the same parity as 20")
    m_plus = (NS_RANK + ns_fixed) // 2
    return m_plus, NS_RANK - m_plus


def assemble_fourfold_factors(p: int, a_p: int, ns_fixed: int):
    """Local factors P0, P2, P4, P6, P8 of the fourfold at a good prime."""
    _check_good_prime(p)
    m_plus, m_minus = _ns_split(ns_fixed)
    fourfold_h4_decomposition(p, a_p, ns_fixed)  # validates
    p2 = p * p
    quad = [1]
    for _ in range(m_plus + 1):  # fixed algebraic classes plus the exceptional class
        quad = _poly_mul(quad, [1, -p2])
    for _ in range(m_minus):
        quad = _poly_mul(quad, [1, p2])
    quad = _poly_mul(quad, list(local_factor_cm(a_p, p, 1).coeffs))
    return [
        LocalFactor(p, 0, (1, -1)),
        LocalFactor(p, 2, (1, -p)),
        LocalFactor(p, 4, tuple(quad)),
        LocalFactor(p, 6, (1, -p ** 3)),
        LocalFactor(p, 8, (1, -p ** 4)),
    ]


def reconstruct_count(factors) -> int:
    """Point count over GF(p) from the degree-1 coefficient of the
    logarithmic expansion of the factor list (alternating by weight)."""
    total = 0
    for f in factors:
        c1 = f.coeffs[1] if len(f.coeffs) > 1 else 0
        trace = -c1
        total += trace if f.weight % 2 == 0 else -trace
    return total
