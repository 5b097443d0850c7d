"""Periodized orthonormal wavelet bases on the unit cube.

The basis is built from a compactly supported 1-d scaling function (father)
``phi`` and mother wavelet ``psi`` obtained by the cascade algorithm from a
low-pass filter.  Multivariate functions use the tensor construction: each
index carries a direction vector ``eps`` in {0,1}^d and evaluates as a
product of ``phi`` (eps_i = 0) and ``psi`` (eps_i = 1) factors.  Translations
are folded modulo 2^j, i.e. functions live on the torus [0,1)^d; folding
preserves orthonormality at every level j >= 0.

Conventions:
    phi is supported on [0, 2N-1] for a filter with N vanishing moments,
    psi(x) = sqrt(2) * sum_n (-1)^n h_{1-n} phi(2x - n), supported on [1-N, N].
    Haar is the N = 1 member: phi = 1_[0,1), psi = +1 on [0,1/2), -1 on [1/2,1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ConfigurationError

_trapezoid = getattr(np, "trapezoid", None) or np.trapz

SCALING = "scaling"
DETAIL = "detail"

# Low-pass filters h_0..h_{2N-1}, extremal-phase, normalized so sum(h) = sqrt(2).
# Generated once by spectral factorization of the Daubechies polynomial at 60
# significant digits, then rounded to float64.  They are re-verified at load
# time by WaveletFamily.verify(), so a transcription error cannot go unnoticed.
_DAUBECHIES_FILTERS = {
    1: (
        0.7071067811865476,
        0.7071067811865476,
    ),
    2: (
        0.48296291314453416,
        0.8365163037378079,
        0.2241438680420134,
        -0.12940952255126037,
    ),
    3: (
        0.33267055295008263,
        0.8068915093110925,
        0.45987750211849154,
        -0.13501102001025458,
        -0.08544127388202666,
        0.03522629188570953,
    ),
    4: (
        0.2303778133088965,
        0.7148465705529157,
        0.6308807679298589,
        -0.027983769416859854,
        -0.18703481171909309,
        0.030841381835560764,
        0.0328830116668852,
        -0.010597401785069032,
    ),
    5: (
        0.16010239797419293,
        0.6038292697971896,
        0.7243085284377729,
        0.13842814590132074,
        -0.24229488706638203,
        -0.032244869584638375,
        0.07757149384004572,
        -0.006241490212798274,
        -0.012580751999081999,
        0.0033357252854737712,
    ),
    6: (
        0.11154074335010947,
        0.49462389039845306,
        0.7511339080210954,
        0.31525035170919763,
        -0.22626469396543983,
        -0.12976686756726194,
        0.09750160558732304,
        0.027522865530305727,
        -0.03158203931748603,
        0.0005538422011614961,
        0.004777257510945511,
        -0.0010773010853084796,
    ),
    7: (
        0.07785205408500918,
        0.3965393194819173,
        0.7291320908462351,
        0.4697822874051931,
        -0.14390600392856498,
        -0.22403618499387498,
        0.07130921926683026,
        0.08061260915108308,
        -0.03802993693501441,
        -0.01657454163066688,
        0.01255099855609984,
        0.0004295779729213665,
        -0.0018016407040474908,
        0.00035371379997452024,
    ),
    8: (
        0.05441584224310401,
        0.31287159091429995,
        0.6756307362972898,
        0.5853546836542067,
        -0.015829105256349306,
        -0.2840155429615469,
        0.0004724845739132828,
        0.12874742662047847,
        -0.017369301001807547,
        -0.044088253930794755,
        0.013981027917398282,
        0.008746094047405777,
        -0.004870352993451574,
        -0.00039174037337694705,
        0.0006754494064505693,
        -0.00011747678412476953,
    ),
    9: (
        0.038077947363878345,
        0.24383467461259034,
        0.6048231236901112,
        0.6572880780513005,
        0.13319738582500756,
        -0.2932737832791749,
        -0.09684078322297646,
        0.14854074933810638,
        0.03072568147933338,
        -0.06763282906132997,
        0.00025094711483145197,
        0.022361662123679096,
        -0.004723204757751397,
        -0.00428150368246343,
        0.0018476468830562265,
        0.00023038576352319597,
        -0.0002519631889427101,
        3.93473203162716e-05,
    ),
    10: (
        0.026670057900555554,
        0.1881768000776915,
        0.5272011889317256,
        0.6884590394536035,
        0.2811723436605775,
        -0.24984642432731538,
        -0.19594627437737705,
        0.12736934033579325,
        0.09305736460357235,
        -0.07139414716639708,
        -0.029457536821875813,
        0.033212674059341,
        0.0036065535669561697,
        -0.010733175483330575,
        0.001395351747052901,
        0.001992405295185056,
        -0.0006858566949597116,
        -0.00011646685512928545,
        9.358867032006959e-05,
        -1.3264202894521244e-05,
    ),
}


class WaveletFamily:
    """A compactly supported orthonormal filter family.

    ``n_moments`` is the number of vanishing moments N; the regularity index
    of the basis equals N.  Haar is the N = 1 member.
    """

    def __init__(self, name: str, n_moments: int, filter_coeffs: Sequence[float]):
        self.name = name
        self.n_moments = int(n_moments)
        self.filter = np.asarray(filter_coeffs, dtype=float)
        self.verify()

    @classmethod
    def haar(cls) -> "WaveletFamily":
        return cls("haar", 1, _DAUBECHIES_FILTERS[1])

    @classmethod
    def daubechies(cls, n_moments: int) -> "WaveletFamily":
        if n_moments == 1:
            return cls.haar()
        if n_moments not in _DAUBECHIES_FILTERS:
            raise ConfigurationError(
                "unsupported number of vanishing moments: %r (supported: 1..10)"
                % (n_moments,)
            )
        return cls("daubechies%d" % n_moments, n_moments, _DAUBECHIES_FILTERS[n_moments])

    @property
    def regularity(self) -> int:
        return self.n_moments

    @property
    def support_length(self) -> int:
        """Length of the support of both phi and psi (= 2N - 1)."""
        return 2 * self.n_moments - 1

    def verify(self) -> None:
        """Check the filter invariants; raise ConfigurationError on failure.

        Checks: sum h_k = sqrt(2); shifted self-orthonormality
        sum_k h_k h_{k+2m} = delta_m; N vanishing moments of the high-pass
        counterpart.  The moment sums for m >= 1 are evaluated about the
        filter midpoint and scaled by the moment magnitude: the raw sums are
        ill-conditioned in float64 once k^m reaches ~1e10 (N >= 9), so the
        normalized residual is the meaningful load-time check.  For N <= 8
        the raw absolute residual is also below 1e-10 and is asserted as is.
        """
        h = self.filter
        n = self.n_moments
        if len(h) != 2 * n:
            raise ConfigurationError("filter length %d != 2N = %d" % (len(h), 2 * n))
        if abs(math.fsum(h) - math.sqrt(2)) > 1e-12:
            raise ConfigurationError("filter does not sum to sqrt(2)")
        for m in range(n):
            dot = math.fsum(h[k] * h[k + 2 * m] for k in range(len(h) - 2 * m))
            target = 1.0 if m == 0 else 0.0
            if abs(dot - target) > 1e-12:
                raise ConfigurationError(
                    "filter violates shift-orthonormality at shift %d" % (2 * m)
                )
        ks = np.arange(len(h), dtype=float)
        signs = (-1.0) ** ks
        center = 0.5 * (len(h) - 1)
        for m in range(n):
            raw = math.fsum(signs * ks**m * h)
            centered = math.fsum(signs * (ks - center) ** m * h)
            scale = max(1.0, math.fsum(np.abs((ks - center) ** m * h)))
            if n <= 8 and abs(raw) > 1e-10:
                raise ConfigurationError("vanishing moment %d violated" % m)
            if abs(centered) / scale > 1e-10:
                raise ConfigurationError("vanishing moment %d violated" % m)


@dataclass(frozen=True)
class BasisIndex:
    """Identifies one scaling or detail basis function.

    kind: SCALING or DETAIL; j: level; k: translation per dimension, already
    folded into {0..2^j-1}; eps: direction per dimension, all-zero exactly
    for scaling indices.
    """

    kind: str
    j: int
    k: tuple
    eps: tuple

    def __post_init__(self):
        if self.kind not in (SCALING, DETAIL):
            raise ConfigurationError("unknown index kind %r" % (self.kind,))
        if self.j < 0:
            raise ConfigurationError("negative level")
        if len(self.k) != len(self.eps):
            raise ConfigurationError("k and eps dimension mismatch")
        nonzero = any(e != 0 for e in self.eps)
        if self.kind == DETAIL and not nonzero:
            raise ConfigurationError("detail index needs a nonzero direction")
        if self.kind == SCALING and nonzero:
            raise ConfigurationError("scaling index must have eps = 0")

    @property
    def d(self) -> int:
        return len(self.k)


def scaling_index(j: int, k) -> BasisIndex:
    k = (k,) if isinstance(k, int) else tuple(k)
    return BasisIndex(SCALING, j, k, (0,) * len(k))


def detail_index(j: int, k, eps=1) -> BasisIndex:
    k = (k,) if isinstance(k, int) else tuple(k)
    eps = (eps,) if isinstance(eps, int) else tuple(eps)
    return BasisIndex(DETAIL, j, k, eps)


def _integer_point_values(h: np.ndarray) -> np.ndarray:
    """phi at the integers 0..2N-1 via the eigenvector of the refinement map."""
    length = len(h)  # 2N
    interior = length - 2  # integers 1..2N-2
    if interior <= 0:  # Haar
        return np.array([1.0, 0.0])
    mat = np.zeros((interior, interior))
    for i in range(1, length - 1):
        for j in range(1, length - 1):
            idx = 2 * i - j
            if 0 <= idx < length:
                mat[i - 1, j - 1] = math.sqrt(2) * h[idx]
    eigvals, eigvecs = np.linalg.eig(mat)
    pick = int(np.argmin(np.abs(eigvals - 1.0)))
    vec = np.real(eigvecs[:, pick])
    vec = vec / vec.sum()  # sum_k phi(k) = 1
    return np.concatenate(([0.0], vec, [0.0]))


def _cascade(h: np.ndarray, depth: int) -> np.ndarray:
    """phi sampled on [0, 2N-1] with step 2^-depth (exact at dyadic points)."""
    values = _integer_point_values(h)
    sqrt2 = math.sqrt(2)
    for level in range(depth):
        step_count = len(values) - 1
        new = np.zeros(2 * step_count + 1)
        new[0::2] = values
        # phi(x) = sqrt(2) sum_k h_k phi(2x - k); 2x lands on the current grid
        scale = 2**level  # current grid points per unit
        for m in range(1, 2 * step_count, 2):
            acc = 0.0
            for k in range(len(h)):
                src = m - k * scale
                if 0 <= src <= step_count:
                    acc += h[k] * values[src]
            new[m] = sqrt2 * acc
        values = new
    return values


def _psi_from_phi(h: np.ndarray, phi: np.ndarray, depth: int) -> np.ndarray:
    """psi sampled on [1-N, N] with step 2^-depth, from the refined phi table."""
    n = len(h) // 2
    sqrt2 = math.sqrt(2)
    step_count = (2 * n - 1) * 2**depth
    psi = np.zeros(step_count + 1)
    # psi(x) = sqrt(2) sum_n g_n phi(2x - n), g_n = (-1)^n h_{1-n}, n = 2-2N..1
    for m in range(step_count + 1):
        x = (1 - n) + m * 2.0**-depth
        acc = 0.0
        for g_n in range(2 - 2 * n, 2):
            coeff = ((-1) ** g_n) * h[1 - g_n]
            t = 2 * x - g_n
            src = round((t) * 2**depth)
            if 0 <= src <= (2 * n - 1) * 2**depth and abs(t * 2**depth - src) < 1e-9:
                acc += coeff * phi[src]
        psi[m] = sqrt2 * acc
    return psi


class WaveletBasis:
    """An evaluable periodized basis on [0,1]^d built by ``build_basis``.

    Immutable after construction; shares nothing mutable between callers.
    """

    def __init__(self, family: WaveletFamily, d: int, table_resolution: int):
        if not 1 <= d <= 3:
            raise ConfigurationError("dimension %d unsupported (1 <= d <= 3)" % d)
        if not 8 <= table_resolution <= 16:
            raise ConfigurationError("table resolution R must satisfy 8 <= R <= 16")
        self.family = family
        self.d = int(d)
        self.R = int(table_resolution)
        self._is_haar = family.n_moments == 1
        n = family.n_moments
        self.phi_support = (0.0, float(2 * n - 1))
        self.psi_support = (float(1 - n), float(n))
        if self._is_haar:
            # Closed-interval step tables keep the trapezoid quadrature exact;
            # evaluation never reads them (Haar has an exact fast path).
            count = 2**self.R
            self.phi_table = np.ones(count + 1)
            self.psi_table = np.ones(count + 1)
            self.psi_table[count // 2 :] = -1.0
        else:
            self.phi_table = _cascade(family.filter, self.R)
            self.psi_table = _psi_from_phi(family.filter, self.phi_table, self.R)
        self.step = 2.0**-self.R
        self.phi_sup = float(np.max(np.abs(self.phi_table)))
        self.psi_sup = float(np.max(np.abs(self.psi_table)))
        self.phi_l1 = float(_trapezoid(np.abs(self.phi_table), dx=self.step))
        self._level_sup_cache: dict = {}
        self._check_tables()

    # -- table diagnostics -------------------------------------------------

    def _check_tables(self) -> None:
        step = self.step
        int_phi = float(_trapezoid(self.phi_table, dx=step))
        int_psi = float(_trapezoid(self.psi_table, dx=step))
        tol = 2.0 ** (-self.R + 2)
        if abs(int_phi - 1.0) > tol or abs(int_psi) > tol:
            raise ConfigurationError("cascade table fails the mean-value checks")
        if self.R >= 12:
            if abs(float(_trapezoid(self.phi_table**2, dx=step)) - 1.0) > 1e-4:
                raise ConfigurationError("phi table is not L2-normalized")
            if abs(float(_trapezoid(self.psi_table**2, dx=step)) - 1.0) > 1e-4:
                raise ConfigurationError("psi table is not L2-normalized")
            shifted = self.partition_of_unity_values()
            if np.max(np.abs(shifted - 1.0)) > 1e-4:
                raise ConfigurationError("phi translates do not sum to one")

    def partition_of_unity_values(self) -> np.ndarray:
        """sum_k phi(x - k) on the table grid over one period x in [0,1)."""
        per_unit = 2**self.R
        length = self.family.support_length
        acc = np.zeros(per_unit)
        for shift in range(length):
            acc += self.phi_table[shift * per_unit : (shift + 1) * per_unit]
        return acc

    # -- pointwise evaluation ----------------------------------------------

    def _table_value(self, kind: int, t: float) -> float:
        """Raw (unperiodized) phi (kind 0) or psi (kind 1) at t, linear interp."""
        if kind == 0:
            lo, hi = self.phi_support
            table = self.phi_table
        else:
            lo, hi = self.psi_support
            table = self.psi_table
        if t < lo or t >= hi:
            return 0.0
        pos = (t - lo) / self.step
        i = int(pos)
        frac = pos - i
        if frac == 0.0:
            return table[i]
        return table[i] * (1.0 - frac) + table[i + 1] * frac

    def _value_1d(self, kind: int, j: int, k: int, x: float) -> float:
        """Periodized factor value: sum of raw values over wrapped copies."""
        if self._is_haar:
            t = math.ldexp(x, j) - k  # 2^j x - k
            t -= math.floor(math.ldexp(t, -j)) * 2.0**j  # fold into [0, 2^j)
            if t < 0.0 or t >= 1.0:
                return 0.0
            if kind == 0:
                return 1.0
            return 1.0 if t < 0.5 else -1.0
        lo, hi = (self.phi_support, self.psi_support)[kind]
        period = 2.0**j
        t = math.ldexp(x, j) - k
        # shifts m with t - m*period in [lo, hi)
        m_lo = math.ceil((t - hi) / period)
        m_hi = math.floor((t - lo) / period)
        acc = 0.0
        for m in range(m_lo, m_hi + 1):
            acc += self._table_value(kind, t - m * period)
        return acc

    def _values_1d(self, kind: int, j: int, k: int, xs: np.ndarray) -> np.ndarray:
        """Vectorized version of _value_1d over an array of points."""
        period = 2.0**j
        t = xs * period - k
        if self._is_haar:
            t = np.mod(t, period)
            inside = t < 1.0
            if kind == 0:
                return inside.astype(float)
            return np.where(t < 0.5, 1.0, -1.0) * inside
        lo, hi = (self.phi_support, self.psi_support)[kind]
        table = self.phi_table if kind == 0 else self.psi_table
        m_lo = math.ceil((float(np.min(t)) - hi) / period)
        m_hi = math.floor((float(np.max(t)) - lo) / period)
        acc = np.zeros_like(t)
        grid = np.arange(len(table)) * self.step + lo
        for m in range(m_lo, m_hi + 1):
            shifted = t - m * period
            inside = (shifted >= lo) & (shifted < hi)
            if np.any(inside):
                acc[inside] += np.interp(shifted[inside], grid, table)
        return acc

    def eval(self, idx: BasisIndex, x) -> float:
        """Value of the periodized basis function at a point of [0,1]^d."""
        xs = (x,) if np.isscalar(x) else tuple(x)
        if len(xs) != self.d:
            raise ConfigurationError("point dimension %d != %d" % (len(xs), self.d))
        out = math.ldexp(1.0, idx.j * self.d) ** 0.5  # 2^{jd/2}
        for i in range(self.d):
            out *= self._value_1d(idx.eps[i], idx.j, idx.k[i], xs[i])
            if out == 0.0:
                return 0.0
        return out

    def eval_many(self, idx: BasisIndex, xs: np.ndarray) -> np.ndarray:
        """Vectorized ``eval`` over an (n, d) or (n,) array of points."""
        pts = np.atleast_2d(np.asarray(xs, dtype=float))
        if pts.shape[0] == 1 and pts.shape[1] != self.d:
            pts = pts.reshape(-1, self.d) if self.d > 1 else pts.T
        out = np.full(pts.shape[0], 2.0 ** (idx.j * self.d / 2.0))
        for i in range(self.d):
            out *= self._values_1d(idx.eps[i], idx.j, idx.k[i], pts[:, i])
        return out

    # -- index geometry ------------------------------------------------------

    def _candidate_ks(self, kind: int, j: int, x: float) -> list:
        """Folded translations whose periodized support contains x (one dim)."""
        lo, hi = (self.phi_support, self.psi_support)[kind]
        t = math.ldexp(x, j)
        k_lo = math.floor(t - hi) + 1  # k > t - hi
        k_hi = math.floor(t - lo)  # k <= t - lo; table is 0 at t = hi
        size = 2**j
        seen = []
        for k in range(k_lo, k_hi + 1):
            fold = k % size
            if fold not in seen:
                seen.append(fold)
        seen.sort()
        return seen

    def active_indices(self, j0: int, j_max: int, x) -> list:
        """All indices (scaling at j0, detail at j0..j_max) whose support holds x."""
        if j0 > j_max:
            raise ConfigurationError("j0 must not exceed the truncation level")
        xs = (x,) if np.isscalar(x) else tuple(x)
        out = []
        for ks in _product([self._candidate_ks(0, j0, xi) for xi in xs]):
            out.append(BasisIndex(SCALING, j0, ks, (0,) * self.d))
        for j in range(j0, j_max + 1):
            per_dim = {
                0: [self._candidate_ks(0, j, xi) for xi in xs],
                1: [self._candidate_ks(1, j, xi) for xi in xs],
            }
            for eps in _directions(self.d):
                for ks in _product([per_dim[e][i] for i, e in enumerate(eps)]):
                    out.append(BasisIndex(DETAIL, j, ks, eps))
        return out

    def support(self, idx: BasisIndex) -> list:
        """Folded support as a union of at most 2^d half-open boxes."""
        per_dim = []
        for i in range(self.d):
            lo, hi = (self.phi_support, self.psi_support)[idx.eps[i]]
            scale = 2.0**-idx.j
            a = (idx.k[i] + lo) * scale
            length = (hi - lo) * scale
            if length >= 1.0:
                per_dim.append([(0.0, 1.0)])
                continue
            a -= math.floor(a)
            if a + length <= 1.0:
                per_dim.append([(a, a + length)])
            else:
                per_dim.append([(a, 1.0), (0.0, a + length - 1.0)])
        boxes = []
        for combo in _product(per_dim):
            boxes.append(tuple(combo))
        return boxes

    def level_sup(self, kind: int, j: int) -> float:
        """Sup of |periodized factor| at level j (one dimension).

        Exceeds the raw sup only at levels coarse enough for the folded
        copies to overlap (2^j < support length).
        """
        raw = self.phi_sup if kind == 0 else self.psi_sup
        if 2**j >= self.family.support_length:
            return raw
        key = (kind, j)
        if key not in self._level_sup_cache:
            table = self.phi_table if kind == 0 else self.psi_table
            per_period = 2 ** (j + self.R)
            acc = np.zeros(per_period)
            for start in range(0, len(table) - 1, per_period):
                chunk = table[start : start + per_period]
                acc[: len(chunk)] += chunk
            self._level_sup_cache[key] = float(np.max(np.abs(acc)))
        return self._level_sup_cache[key]

    def index_sup(self, idx_kind: str, j: int, eps=None) -> float:
        """Sup-norm bound of the (tensor) basis function at level j, without
        the 2^{jd/2} normalization."""
        if idx_kind == SCALING:
            eps = (0,) * self.d
        out = 1.0
        for e in eps:
            out *= self.level_sup(e, j)
        return out

    def dump_tables(self, path: str) -> None:
        """Write the 1-d cascade tables as CSV columns x, phi, psi."""
        lo = min(self.phi_support[0], self.psi_support[0])
        hi = max(self.phi_support[1], self.psi_support[1])
        count = int(round((hi - lo) / self.step))
        with open(path, "w") as fh:
            fh.write("x,phi,psi\n")
            for i in range(count + 1):
                x = lo + i * self.step
                fh.write(
                    "%s,%s,%s\n"
                    % (repr(x), repr(self._table_value(0, x)), repr(self._table_value(1, x)))
                )


def _product(per_dim: Sequence[Sequence]) -> Iterator[tuple]:
    if len(per_dim) == 1:
        for a in per_dim[0]:
            yield (a,)
    elif len(per_dim) == 2:
        for a in per_dim[0]:
            for b in per_dim[1]:
                yield (a, b)
    else:
        for a in per_dim[0]:
            for rest in _product(per_dim[1:]):
                yield (a,) + rest


def _directions(d: int) -> list:
    """All nonzero direction vectors in {0,1}^d, lexicographic."""
    out = []
    for mask in range(1, 2**d):
        out.append(tuple((mask >> (d - 1 - i)) & 1 for i in range(d)))
    out.sort()
    return out


def build_basis(family: WaveletFamily, d: int, table_resolution: int = 12) -> WaveletBasis:
    """Construct the periodized basis; deterministic for fixed inputs."""
    return WaveletBasis(family, d, table_resolution)
