"""Low-level dense coefficient kernels for polynomials over F_q.

Coefficient vectors are numpy int64 arrays, lowest degree first, values in
[0, q).  The zero polynomial is the empty array.  Callers keep canonical
form (no trailing zeros) via strip().

Multiplication dispatch:
  * tiny operands     -> numpy int64 convolution
  * medium and large  -> Kronecker substitution: coefficients packed into
                         one big integer (fixed-width byte slots), one
                         GMP multiplication, unpack + vectorized mod
  * oversized slots   -> gmpy2.pack with arbitrary slot width

Quotient-ring polynomials (elements of (F_q[X]/h)[Z]) are 2-D int64
arrays, row i = X-coefficients of the Z^i coefficient.  Products use an
exact float64 FFT 2-D convolution when a conservative error bound holds,
with the packed-integer path as fallback.

Fields are limited to q < 2**62 so sums never overflow int64; paths that
form coefficient products inside int64 are additionally guarded by
q <= 2**30 with slow exact fallbacks above that.
"""

import math

import numpy as np

try:
    import gmpy2

    _HAVE_GMPY = True
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _HAVE_GMPY = False

try:
    from scipy.signal import fftconvolve as _fftconvolve

    _HAVE_SCIPY = True
except ImportError:  # pragma: no cover
    _HAVE_SCIPY = False

_I64 = np.int64
_Q_FAST_MAX = 1 << 30  # int64 coefficient products are safe below this

# operation counters (engineering telemetry for the bench commands)
COUNTS = {"mul": 0, "rem": 0, "gcd": 0, "rz_mul": 0}


def reset_counts():
    for k in COUNTS:
        COUNTS[k] = 0


def counts_snapshot():
    return dict(COUNTS)


def as_array(coeffs):
    a = np.asarray(coeffs, dtype=_I64)
    if a.ndim != 1:
        raise ValueError("coefficient vector must be 1-D")
    return a


def strip(arr):
    """Drop trailing zero coefficients."""
    n = arr.shape[0]
    while n > 0 and arr[n - 1] == 0:
        n -= 1
    return arr[:n]


def scale(a, c, q):
    """c*a mod q for a scalar c."""
    c %= q
    if c == 0:
        return a[:0]
    if c == 1:
        return a.copy()
    if q <= _Q_FAST_MAX:
        return a * c % q
    return np.array([int(x) * c % q for x in a], dtype=_I64)


def add(a, b, q):
    la, lb = a.shape[0], b.shape[0]
    if la < lb:
        a, b = b, a
        la, lb = lb, la
    out = a.copy()
    out[:lb] = (out[:lb] + b) % q
    return strip(out)


def sub(a, b, q):
    la, lb = a.shape[0], b.shape[0]
    n = max(la, lb)
    out = np.zeros(n, dtype=_I64)
    out[:la] = a
    out[:lb] = (out[:lb] - b) % q
    return strip(out)


# ---------------------------------------------------------------------------
# multiplication

_CONVOLVE_CUTOFF = 100  # total length below which numpy convolution wins


def mul(a, b, q):
    """Product of coefficient vectors, reduced mod q."""
    COUNTS["mul"] += 1
    la, lb = a.shape[0], b.shape[0]
    if la == 0 or lb == 0:
        return a[:0]
    if la == 1:
        return scale(b, int(a[0]), q)
    if lb == 1:
        return scale(a, int(b[0]), q)
    small = min(la, lb)
    if la + lb < _CONVOLVE_CUTOFF and (q - 1) ** 2 * small < 2**62:
        return np.convolve(a, b) % q
    return _pack_mul(a, b, q)


def _pack_mul(a, b, q):
    """Kronecker-substitution product, exact, reduced mod q."""
    la, lb = a.shape[0], b.shape[0]
    lo = la + lb - 1
    need = 2 * (q - 1).bit_length() + min(la, lb).bit_length()
    if need <= 32:
        dt, width = "<u4", 4
    elif need <= 64:
        dt, width = "<u8", 8
    else:
        A = gmpy2.pack([int(x) for x in a], need)
        B = gmpy2.pack([int(x) for x in b], need)
        return np.array(
            [int(x) % q for x in gmpy2.unpack(A * B, need)][:lo], dtype=_I64
        )
    A = int.from_bytes(a.astype(dt).tobytes(), "little")
    B = int.from_bytes(b.astype(dt).tobytes(), "little")
    if _HAVE_GMPY:
        C = int(gmpy2.mpz(A) * gmpy2.mpz(B))
    else:  # pragma: no cover
        C = A * B
    buf = C.to_bytes((la + lb) * width, "little")
    out = np.frombuffer(buf, dtype=dt)[:lo].astype(_I64)
    return out % q


def mul_trunc(a, b, k, q):
    """First k coefficients of a*b (power-series product)."""
    if a.shape[0] > k:
        a = a[:k]
    if b.shape[0] > k:
        b = b[:k]
    return mul(a, b, q)[:k]


def series_inv(f, k, q):
    """Inverse of the power series f mod X^k; f[0] must be a unit."""
    inv0 = pow(int(f[0]), q - 2, q)
    out = np.array([inv0], dtype=_I64)
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        t = mul_trunc(f[:prec], out, prec, q)
        t = -t % q
        t[0] = (t[0] + 2) % q
        out = mul_trunc(out, t, prec, q)
    return out[:k]


# ---------------------------------------------------------------------------
# division and gcd


def divrem(a, b, q):
    """(quotient, remainder) with deg r < deg b; b nonzero."""
    la, lb = a.shape[0], b.shape[0]
    if lb == 0:
        raise ZeroDivisionError("polynomial division by zero")
    if la < lb:
        return a[:0], a.copy()
    if lb == 1:
        return scale(a, pow(int(b[0]), q - 2, q), q), a[:0]
    k = la - lb + 1
    if q > _Q_FAST_MAX:
        quo, rem = _py_divrem([int(x) for x in a], [int(x) for x in b], q)
        return np.array(quo, dtype=_I64), np.array(rem, dtype=_I64)
    if k * lb <= 1024:
        return _schoolbook_divrem(a, b, q)
    inv = series_inv(b[::-1].copy(), k, q)
    return _divrem_newton(a, b, inv, q)


def _divrem_newton(a, b, inv, q):
    la, lb = a.shape[0], b.shape[0]
    k = la - lb + 1
    qr = mul_trunc(a[::-1].copy(), inv[:k], k, q)  # reversed quotient, len k
    quo = qr[::-1].copy()
    low = mul_trunc(quo, b, lb - 1, q)
    r = a[: lb - 1].copy()
    r[: low.shape[0]] = (r[: low.shape[0]] - low) % q
    return strip(quo), strip(r)


def _schoolbook_divrem(a, b, q):
    lb = b.shape[0]
    lead_inv = pow(int(b[lb - 1]), q - 2, q)
    r = a.copy()
    k = a.shape[0] - lb + 1
    quo = np.zeros(k, dtype=_I64)
    for i in range(k - 1, -1, -1):
        c = int(r[i + lb - 1])
        if c:
            c = c * lead_inv % q
            quo[i] = c
            r[i : i + lb] = (r[i : i + lb] - c * b) % q
    return strip(quo), strip(r[: lb - 1])


def _py_divrem(A, B, q):
    la, lb = len(A), len(B)
    if la < lb:
        return [], A[:]
    inv = pow(B[-1], q - 2, q)
    R = A[:]
    Q = [0] * (la - lb + 1)
    for i in range(la - lb, -1, -1):
        c = R[i + lb - 1] * inv % q
        Q[i] = c
        if c:
            for j in range(lb):
                R[i + j] = (R[i + j] - c * B[j]) % q
    del R[lb - 1 :]
    while R and R[-1] == 0:
        R.pop()
    while Q and Q[-1] == 0:
        Q.pop()
    return Q, R


def gcd_monic(a, b, q):
    """Monic gcd; not both zero."""
    COUNTS["gcd"] += 1
    a = strip(a).copy()
    b = strip(b).copy()
    if a.shape[0] == 0 and b.shape[0] == 0:
        raise ValueError("gcd(0, 0) is undefined")
    if q > _Q_FAST_MAX:
        return _gcd_python(a, b, q)
    # synthetic row elimination; each step kills the current top coefficient
    while b.shape[0] > 0:
        if a.shape[0] < b.shape[0]:
            a, b = b, a
        lead_inv = pow(int(b[-1]), q - 2, q)
        lb = b.shape[0]
        while a.shape[0] >= lb:
            s = int(a[-1]) * lead_inv % q
            off = a.shape[0] - lb
            a[off:] = (a[off:] - s * b) % q
            a = strip(a)
            if a.shape[0] == 0:
                break
        a, b = b, a
    if int(a[-1]) != 1:
        a = scale(a, pow(int(a[-1]), q - 2, q), q)
    return a


def _gcd_python(a, b, q):
    A, B = [int(x) for x in a], [int(x) for x in b]
    while B:
        _, R = _py_divrem(A, B, q)
        A, B = B, R
    inv = pow(A[-1], q - 2, q)
    return np.array([x * inv % q for x in A], dtype=_I64)


# ---------------------------------------------------------------------------
# fixed-modulus context: fast repeated reduction mod a monic h


class ModContext:
    """Precomputed state for reducing products modulo a fixed monic h."""

    def __init__(self, h, q):
        h = as_array(h)
        if h.shape[0] < 2:
            raise ValueError("modulus must have degree >= 1")
        if int(h[-1]) != 1:
            raise ValueError("modulus must be monic")
        self.h = h
        self.q = q
        self.d = h.shape[0] - 1
        self._rev = h[::-1].copy()
        self._inv = None  # series inverse of rev(h), grown on demand

    def inverse(self, k):
        if self._inv is None or self._inv.shape[0] < k:
            self._inv = series_inv(self._rev, max(k, self.d + 1), self.q)
        return self._inv[:k]

    def rem(self, a):
        """a mod h, any input length."""
        COUNTS["rem"] += 1
        d, q = self.d, self.q
        a = strip(a)
        la = a.shape[0]
        if la <= d:
            return a
        if q > _Q_FAST_MAX or (la - d) * (d + 1) <= 512:
            _, r = divrem(a, self.h, q)
            return r
        k = la - d
        _, r = _divrem_newton(a, self.h, self.inverse(k), q)
        return r

    def mulmod(self, a, b):
        return self.rem(mul(a, b, self.q))

    def powmod(self, a, e):
        """a**e mod h by square and multiply; e arbitrary precision."""
        if e < 0:
            raise ValueError("negative exponent")
        if e == 0:
            return np.array([1], dtype=_I64)
        result = None
        base = self.rem(as_array(a))
        while e:
            if e & 1:
                result = base.copy() if result is None else self.mulmod(result, base)
            e >>= 1
            if e:
                base = self.mulmod(base, base)
        return result

    def reduce_rows(self, rows):
        """Reduce each row of an (n, width) matrix mod h -> (n, d) matrix.

        Rows must already be reduced mod q.
        """
        n, width = rows.shape
        d, q = self.d, self.q
        out = np.zeros((n, d), dtype=_I64)
        if width <= d:
            out[:, :width] = rows
            return out
        k = width - d  # max quotient length
        if n * width <= 4096 or q > _Q_FAST_MAX or not _HAVE_SCIPY:
            for i in range(n):
                r = self.rem(strip(rows[i]))
                out[i, : r.shape[0]] = r
            return out
        inv = self.inverse(k)
        rev = rows[:, ::-1]
        qr = _conv_rows(rev, inv, q)[:, :k]
        quo = qr[:, ::-1]
        low = _conv_rows(quo, self.h, q)[:, :d]
        out[:, : min(d, width)] = rows[:, : min(d, width)]
        out = (out - low) % q
        return out


def _conv_rows(rows, vec, q):
    """Row-wise convolution with vec, exact, reduced mod q."""
    n, w = rows.shape
    lv = vec.shape[0]
    if _fft_safe(q, w, lv):
        c = _fftconvolve(rows.astype(np.float64), vec.astype(np.float64)[None, :], axes=1)
        return np.rint(c).astype(_I64) % q
    out = np.zeros((n, w + lv - 1), dtype=_I64)
    for i in range(n):
        p = mul(strip(rows[i]), vec, q)
        out[i, : p.shape[0]] = p
    return out


def _fft_safe(q, la, lb):
    if not _HAVE_SCIPY:
        return False
    # conservative: ||a||_2 ||b||_2 * eps * c*log2(n) << 0.5
    bound = float(q - 1) ** 2 * math.sqrt(float(la) * float(lb))
    nfft = la + lb
    return bound * 64.0 * max(math.log2(nfft), 1.0) < 2.0**51


# ---------------------------------------------------------------------------
# quotient-ring polynomials: (F_q[X]/h)[Z] as (rows, d) matrices


def rz_mul(A, B, ctx):
    """Product in (F_q[X]/h)[Z]; A, B are (za, d), (zb, d) reduced matrices."""
    COUNTS["rz_mul"] += 1
    q, d = ctx.q, ctx.d
    za, zb = A.shape[0], B.shape[0]
    if za == 0 or zb == 0:
        return np.zeros((0, d), dtype=_I64)
    zc = za + zb - 1
    if _fft_safe_2d(q, d, za, zb):
        c = _fftconvolve(A.astype(np.float64), B.astype(np.float64))
        rows = np.rint(c).astype(_I64) % q
    elif za * zb <= 16 or q > _Q_FAST_MAX:
        rows = np.zeros((zc, 2 * d - 1), dtype=_I64)
        for i in range(za):
            ai = strip(A[i])
            if ai.shape[0] == 0:
                continue
            for j in range(zb):
                p = mul(ai, strip(B[j]), q)
                rows[i + j, : p.shape[0]] = (rows[i + j, : p.shape[0]] + p) % q
    else:
        rows = _rz_mul_packed(A, B, q, d)
    return ctx.reduce_rows(rows)


def _fft_safe_2d(q, d, za, zb):
    if not _HAVE_SCIPY:
        return False
    bound = float(q - 1) ** 2 * math.sqrt(float(za * d) * float(zb * d))
    nfft = (za + zb) * 2 * d
    return bound * 64.0 * max(math.log2(nfft), 1.0) < 2.0**51


def _rz_mul_packed(A, B, q, d):
    """Flattened Kronecker product for ring polynomials (exact)."""
    za, zb = A.shape[0], B.shape[0]
    W = 2 * d - 1
    need = 2 * (q - 1).bit_length() + d.bit_length() + min(za, zb).bit_length()
    zc = za + zb - 1
    if need <= 32:
        dt, width = "<u4", 4
    elif need <= 64:
        dt, width = "<u8", 8
    else:
        # wide slots via gmpy2.pack on the flattened row-major layout
        Ap = np.zeros((za, W), dtype=_I64)
        Ap[:, :d] = A
        Bp = np.zeros((zb, W), dtype=_I64)
        Bp[:, :d] = B
        C = gmpy2.pack([int(x) for x in Ap.ravel()], need) * gmpy2.pack(
            [int(x) for x in Bp.ravel()], need
        )
        flat = [int(x) % q for x in gmpy2.unpack(C, need)][: zc * W]
        flat += [0] * (zc * W - len(flat))
        return np.array(flat, dtype=_I64).reshape(zc, W)
    Ap = np.zeros((za, W), dtype=dt)
    Ap[:, :d] = A
    Bp = np.zeros((zb, W), dtype=dt)
    Bp[:, :d] = B
    Ai = int.from_bytes(Ap.tobytes(), "little")
    Bi = int.from_bytes(Bp.tobytes(), "little")
    C = int(gmpy2.mpz(Ai) * gmpy2.mpz(Bi)) if _HAVE_GMPY else Ai * Bi
    buf = C.to_bytes((za + zb) * W * width, "little")
    rows = np.frombuffer(buf, dtype=dt)[: zc * W].astype(_I64) % q
    return rows.reshape(zc, W)


def rz_mul_trunc(A, B, k, ctx):
    """First k Z-coefficients of A*B."""
    if A.shape[0] > k:
        A = A[:k]
    if B.shape[0] > k:
        B = B[:k]
    out = rz_mul(A, B, ctx)
    if out.shape[0] > k:
        out = out[:k]
    return out


def rz_strip(A):
    n = A.shape[0]
    while n > 0 and not A[n - 1].any():
        n -= 1
    return A[:n]


def rz_series_inv(F, k, ctx):
    """Inverse of F in (F_q[X]/h)[[Z]] mod Z^k; F[0] must equal 1."""
    d = ctx.d
    if not (F.shape[0] >= 1 and F[0, 0] == 1 and not F[0, 1:].any()):
        raise ValueError("ring series inverse needs constant term 1")
    out = np.zeros((1, d), dtype=_I64)
    out[0, 0] = 1
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        t = rz_mul_trunc(F[:prec], out, prec, ctx)
        t = -t % ctx.q
        t[0, 0] = (t[0, 0] + 2) % ctx.q
        out = rz_mul_trunc(out, t, prec, ctx)
    return out[:k]


def rz_rem(A, M, Minv, ctx):
    """A mod M in (F_q[X]/h)[Z], M monic in Z; Minv = series inverse of the
    Z-reversal of M, covering precision A_rows - M_rows + 1."""
    za, zm = A.shape[0], M.shape[0]
    if za < zm:
        return A
    k = za - zm + 1
    qr = rz_mul_trunc(A[::-1], Minv[:k], k, ctx)
    if qr.shape[0] < k:  # pad (can happen only via zero blocks)
        pad = np.zeros((k, ctx.d), dtype=_I64)
        pad[: qr.shape[0]] = qr
        qr = pad
    quo = qr[::-1]
    low = rz_mul_trunc(quo, M, zm - 1, ctx)
    r = A[: zm - 1].copy()
    r[: low.shape[0]] = (r[: low.shape[0]] - low) % ctx.q
    return r
