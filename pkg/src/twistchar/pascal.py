"""Stacked root-of-unity Pascal blocks, with replayed row-reduction proofs.

A block spec fixes a root order k, block heights N_0..N_{k-1} summing to N,
and rationals z and w (w nonzero).  Block r has entries
eta^(p*r) * binomial(z + p*w, i) for row i < N_r and column p < N; the
stacked N x N matrix is invertible for every such choice, and this module
both checks that exactly (determinant over the cyclotomic field) and
replays, entry by entry, the two row-reduction arguments behind it.  A
failed identity raises PascalIdentityError naming the first bad entry;
nothing is ever patched to force agreement.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence, Union

from .cyclotomic import (
    CyclotomicField,
    CyclotomicScalar,
    ExactMatrix,
    get_field,
    rational_binomial,
)

Rational = Union[int, Fraction]
Scalar = Union[int, Fraction, CyclotomicScalar]


class PascalIdentityError(AssertionError):
    """A replayed matrix identity failed; reports the first differing entry."""

    def __init__(
        self,
        identity: str,
        row: int,
        col: int,
        got: CyclotomicScalar,
        expected: CyclotomicScalar,
    ) -> None:
        self.identity = identity
        self.row = row
        self.col = col
        self.got = got
        self.expected = expected
        super().__init__(
            f"identity {identity!r} fails at entry ({row}, {col}): "
            f"got {got}, expected {expected}"
        )


@dataclass(frozen=True)
class PascalSpec:
    """Parameters of a stacked root-of-unity Pascal matrix."""

    conductor: int
    block_sizes: tuple[int, ...]
    z: Fraction
    w: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "z", Fraction(self.z))
        object.__setattr__(self, "w", Fraction(self.w))
        if self.conductor < 1:
            raise ValueError(f"conductor must be >= 1, got {self.conductor}")
        if len(self.block_sizes) != self.conductor:
            raise ValueError(
                f"{len(self.block_sizes)} block sizes for conductor {self.conductor}"
            )
        if any(n < 0 for n in self.block_sizes):
            raise ValueError(f"negative block size in {self.block_sizes}")
        if sum(self.block_sizes) < 1:
            raise ValueError("block sizes must sum to at least 1")
        if self.w == 0:
            raise ValueError("w must be nonzero")

    @property
    def size(self) -> int:
        return sum(self.block_sizes)


def _coerce(field: CyclotomicField, value: Scalar) -> CyclotomicScalar:
    if isinstance(value, CyclotomicScalar):
        if value.field.conductor != field.conductor:
            raise ValueError(
                f"scalar from conductor {value.field.conductor} used in "
                f"conductor {field.conductor} computation"
            )
        return value
    return field.from_rational(value)


def _common_field(*values: Scalar) -> CyclotomicField:
    for v in values:
        if isinstance(v, CyclotomicScalar):
            return v.field
    return get_field(1)


def _powers(x: CyclotomicScalar, count: int) -> list[CyclotomicScalar]:
    out = [x.field.one()]
    for _ in range(count - 1):
        out.append(out[-1] * x)
    return out


def a_matrix(
    field: CyclotomicField, x: Scalar, z: Rational, w: Rational, p: int, q: int
) -> ExactMatrix:
    """p x q matrix with entries x^j * binomial(z + j*w, i)."""
    xs = _powers(_coerce(field, x), q)
    rows = tuple(
        tuple(
            xs[j] * rational_binomial(Fraction(z) + j * Fraction(w), i)
            for j in range(q)
        )
        for i in range(p)
    )
    return ExactMatrix(field, rows, q)


def a_prime_matrix(
    field: CyclotomicField, x: Scalar, p: int, q: int
) -> ExactMatrix:
    """p x q matrix with entries x^j * binomial(j, i)."""
    xs = _powers(_coerce(field, x), max(q, 1))
    rows = tuple(
        tuple(xs[j] * rational_binomial(j, i) for j in range(q)) for i in range(p)
    )
    return ExactMatrix(field, rows, q)


def pascal_matrix(field: CyclotomicField, p: int, q: int) -> ExactMatrix:
    return ExactMatrix.from_rows(
        field, [[rational_binomial(j, i) for j in range(q)] for i in range(p)]
    )


def _z_matrix(field: CyclotomicField, z: Rational, p: int) -> ExactMatrix:
    return ExactMatrix.from_rows(
        field,
        [
            [rational_binomial(z, i - j) if i >= j else 0 for j in range(p)]
            for i in range(p)
        ],
    )


def _m_matrix(field: CyclotomicField, w: Rational, p: int, q: int) -> ExactMatrix:
    wf = Fraction(w)
    return ExactMatrix.from_rows(
        field,
        [[rational_binomial(j * wf, i) for j in range(q)] for i in range(p)],
    )


def _m_stage_matrix(
    field: CyclotomicField, w: Rational, n: int, p: int, q: int
) -> ExactMatrix:
    # Stage-n target of the row reduction: Pascal rows through n, then rows
    # binomial(j-1, n) * binomial(j*w, i-n); the j = 0 column of the lower
    # rows uses binomial(-1, n) = (-1)^n.
    wf = Fraction(w)
    rows = []
    for i in range(p):
        if i <= n:
            rows.append([rational_binomial(j, i) for j in range(q)])
        else:
            rows.append(
                [
                    rational_binomial(j - 1, n) * rational_binomial(j * wf, i - n)
                    for j in range(q)
                ]
            )
    return ExactMatrix.from_rows(field, rows)


def _h_matrix(field: CyclotomicField, x: Scalar, q: int) -> ExactMatrix:
    xs = _powers(_coerce(field, x), max(q, 1))
    zero = field.zero()
    return ExactMatrix.from_rows(
        field,
        [[xs[j] if i == j else zero for j in range(q)] for i in range(q)],
    )


def _q_stage_matrix(field: CyclotomicField, w: Rational, n: int, p: int) -> ExactMatrix:
    # Identity of size n+1, then a lower-bidiagonal tail: row i has
    # (i-1-n-(n+1)w)/((n+1)w) below the diagonal and (i-n)/((n+1)w) on it.
    denom = (n + 1) * Fraction(w)
    rows = []
    for i in range(p):
        row = [Fraction(0)] * p
        if i <= n:
            row[i] = Fraction(1)
        else:
            row[i] = Fraction(i - n) / denom
            if i - 1 > n:
                row[i - 1] = (i - 1 - n - denom) / denom
        rows.append(row)
    return ExactMatrix.from_rows(field, rows)


def _final_q_matrix(field: CyclotomicField, w: Rational, p: int) -> ExactMatrix:
    rows = []
    for i in range(p):
        row = [Fraction(0)] * p
        row[i] = Fraction(1) if i < p - 1 else 1 / ((p - 1) * Fraction(w))
        rows.append(row)
    return ExactMatrix.from_rows(field, rows)


def _assert_equal(identity: str, got: ExactMatrix, expected: ExactMatrix) -> None:
    if got.nrows != expected.nrows or got.ncols != expected.ncols:
        raise PascalIdentityError(
            identity, -1, -1, got.field.zero(), expected.field.zero()
        )
    diff = got.first_difference(expected)
    if diff is not None:
        raise PascalIdentityError(identity, *diff)


def _reduction_matrix(
    field: CyclotomicField, w: Rational, p: int, q: int, replay: bool
) -> ExactMatrix:
    """The invertible P with P * M = rectangular Pascal, optionally replaying
    and checking every intermediate stage."""
    if p == 1:
        return ExactMatrix.identity(field, 1)
    m = _m_matrix(field, w, p, q)
    part = ExactMatrix.identity(field, p)
    for n in range(p - 2):
        q_n = _q_stage_matrix(field, w, n, p)
        if not q_n.det():
            raise PascalIdentityError(
                f"stage matrix Q({n}) singular", n, n, q_n.det(), field.one()
            )
        part = q_n * part
        if replay:
            _assert_equal(
                f"stage {n + 1} row reduction (P({n + 1})*M)",
                part * m,
                _m_stage_matrix(field, w, n + 1, p, q),
            )
    p_full = _final_q_matrix(field, w, p) * part
    if replay:
        _assert_equal(
            "reduced form (P*M = Pascal)", p_full * m, pascal_matrix(field, p, q)
        )
    return p_full


def build_block(spec: PascalSpec, r: int) -> ExactMatrix:
    """Block r of the stacked matrix: N_r rows over all N columns."""
    if not 0 <= r < spec.conductor:
        raise ValueError(f"block index {r} outside 0..{spec.conductor - 1}")
    field = get_field(spec.conductor)
    root = field.root_of_unity(spec.conductor)
    return stacked_with_root(
        field, root, (spec.block_sizes[r],), spec.z, spec.w, total=spec.size,
        first_power=r,
    )


def stacked_with_root(
    field: CyclotomicField,
    root: CyclotomicScalar,
    block_sizes: Sequence[int],
    z: Rational,
    w: Rational,
    total: int | None = None,
    first_power: int = 0,
) -> ExactMatrix:
    """Stack blocks built from successive powers of ``root``.

    Block r (starting at power ``first_power``) has entries
    root^(p*(first_power + r)) * binomial(z + p*w, i).
    """
    n = total if total is not None else sum(block_sizes)
    zf, wf = Fraction(z), Fraction(w)
    binoms = [
        [rational_binomial(zf + p * wf, i) for p in range(n)]
        for i in range(max(block_sizes, default=0))
    ]
    rows = []
    for r, height in enumerate(block_sizes):
        x = root ** (first_power + r)
        xs = _powers(x, n)
        for i in range(height):
            rows.append([xs[p] * binoms[i][p] for p in range(n)])
    return ExactMatrix(
        field, tuple(tuple(row) for row in rows), n
    )


def build_stacked(spec: PascalSpec) -> ExactMatrix:
    field = get_field(spec.conductor)
    return stacked_with_root(
        field, field.root_of_unity(spec.conductor), spec.block_sizes, spec.z, spec.w
    )


class InvertibilityResult(NamedTuple):
    invertible: bool
    determinant: CyclotomicScalar


def verify_invertible(spec: PascalSpec) -> InvertibilityResult:
    """Exact determinant test of the stacked matrix."""
    det = build_stacked(spec).det()
    return InvertibilityResult(bool(det), det)


@dataclass(frozen=True)
class FactorizationReport:
    """Successful replay of the triangular factorization argument."""

    p: int
    q: int
    x: str
    z: Fraction
    w: Fraction
    stages: int


def factorization_check(
    x: Scalar, z: Rational, w: Rational, p: int, q: int
) -> FactorizationReport:
    """Replay the factorization A = Z*M*H and the reduction of M to Pascal.

    Checks, entry by entry: the product decomposition of the p x q matrix
    x^j * binomial(z + j*w, i) into a lower-triangular Toeplitz factor, the
    binomial-grid factor M, and the diagonal of powers; each intermediate
    row-reduction stage; and the final reduced Pascal form.  Raises
    PascalIdentityError on the first failure.
    """
    if p < 1 or q < 1:
        raise ValueError(f"need p >= 1 and q >= 1, got p={p}, q={q}")
    if Fraction(w) == 0:
        raise ValueError("w must be nonzero")
    field = _common_field(x)
    xc = _coerce(field, x)
    if not xc:
        raise ValueError("x must be nonzero")
    a = a_matrix(field, xc, z, w, p, q)
    zm = _z_matrix(field, z, p)
    m = _m_matrix(field, w, p, q)
    h = _h_matrix(field, xc, q)
    _assert_equal("product decomposition (A = Z*M*H)", zm * m * h, a)
    p_full = _reduction_matrix(field, w, p, q, replay=True)
    if not p_full.det():
        raise PascalIdentityError(
            "reduction matrix P singular", -1, -1, p_full.det(), field.one()
        )
    return FactorizationReport(
        p=p, q=q, x=str(xc), z=Fraction(z), w=Fraction(w), stages=max(p - 2, 0)
    )


@dataclass(frozen=True)
class TwoBlocksReport:
    """Successful replay of the two-stack row-equivalence argument."""

    n: int
    s: int
    t: int
    x: str
    y: str


def _block_diag(
    field: CyclotomicField, size: int, lower: ExactMatrix
) -> ExactMatrix:
    top = ExactMatrix.identity(field, size)
    zero = field.zero()
    rows = [row + (zero,) * lower.ncols for row in top.rows]
    rows += [(zero,) * size + row for row in lower.rows]
    return ExactMatrix(field, tuple(rows), size + lower.ncols)


def two_blocks_check(
    x: Scalar, y: Scalar, n: int, s: int, t: int
) -> TwoBlocksReport:
    """Replay the row equivalence of two stacked power-Pascal blocks.

    B stacks the s-row block at x over the t-row block at y; B' replaces
    the lower block by the (y - x) block compressed through the shifted
    upper-triangular C.  The explicit transforming matrices are rebuilt and
    (U')^-1 (V')^-1 Q' B = B' is checked entrywise, along with each
    intermediate identity.  Requires x != y, both nonzero, s >= t >= 0,
    s + t <= n.
    """
    field = _common_field(x, y)
    xc, yc = _coerce(field, x), _coerce(field, y)
    if not xc or not yc:
        raise ValueError("x and y must be nonzero")
    if xc == yc:
        raise ValueError("x and y must differ")
    if not (s >= t >= 0 and s + t <= n and n >= 1):
        raise ValueError(
            f"need s >= t >= 0 and s + t <= n with n >= 1, got n={n}, s={s}, t={t}"
        )
    d = yc - xc

    b = a_prime_matrix(field, xc, s, n).stack(a_prime_matrix(field, yc, t, n))
    # C = [0 | C'] with C'[i][j] = binomial(s+j, s+i) * x^(j-i) above the diagonal.
    zero = field.zero()
    xs = _powers(xc, max(n - s, 1))
    c_rows = []
    for i in range(n - s):
        row = [zero] * s
        for j in range(n - s):
            if j >= i:
                row.append(xs[j - i] * rational_binomial(s + j, s + i))
            else:
                row.append(zero)
        c_rows.append(row)
    c = ExactMatrix.from_rows(field, c_rows) if n - s else ExactMatrix.zeros(
        field, 0, n
    )
    b_prime = a_prime_matrix(field, xc, s, n).stack(
        a_prime_matrix(field, d, t, n - s) * c
    )

    if t == 0:
        _assert_equal("degenerate stack (B = B')", b, b_prime)
        return TwoBlocksReport(n=n, s=s, t=t, x=str(xc), y=str(yc))

    # Q eliminates the upper block from the lower one.
    x_inv = xc.inverse()
    q_rows = []
    for i in range(t):
        row = []
        for j in range(s):
            if j < i:
                row.append(zero)
            else:
                row.append(
                    -((yc * x_inv) ** i)
                    * rational_binomial(j, i)
                    * ((d * x_inv) ** (j - i))
                )
        q_rows.append(row)
    q = ExactMatrix.from_rows(field, q_rows)
    q_prime_rows = [
        row + (zero,) * t for row in ExactMatrix.identity(field, s).rows
    ]
    ident_t = ExactMatrix.identity(field, t)
    q_prime_rows += [
        tuple(q.rows[i]) + tuple(ident_t.rows[i]) for i in range(t)
    ]
    q_prime = ExactMatrix(field, tuple(q_prime_rows), s + t)

    w_direct = ExactMatrix.from_rows(
        field,
        [
            [
                rational_binomial(s + j, i) * (yc ** i) * (d ** (s + j - i))
                for j in range(n - s)
            ]
            for i in range(t)
        ],
    )
    _assert_equal(
        "eliminated lower block (Q'B = [A'; W*C])",
        q_prime * b,
        a_prime_matrix(field, xc, s, n).stack(w_direct * c),
    )

    inner = a_matrix(field, d, s, 1, t, n - s)
    v = ExactMatrix.from_rows(
        field,
        [
            [
                (yc ** i) * (d ** (s - i)) if i == j else zero
                for j in range(t)
            ]
            for i in range(t)
        ],
    )
    _assert_equal("diagonal extraction (W = V*A)", v * inner, w_direct)

    u = _reduction_matrix(field, 1, t, n - s, replay=True) * _z_matrix(
        field, s, t
    ).inverse()
    _assert_equal(
        "inner block reduction (U*A = A')",
        u * inner,
        a_prime_matrix(field, d, t, n - s),
    )

    v_prime = _block_diag(field, s, v)
    u_prime = _block_diag(field, s, u.inverse())
    _assert_equal(
        "full chain ((U')^-1 (V')^-1 Q' B = B')",
        u_prime.inverse() * v_prime.inverse() * q_prime * b,
        b_prime,
    )
    if b.stack(b_prime).rank() != b.rank() or b.rank() != b_prime.rank():
        raise PascalIdentityError(
            "row spaces differ", -1, -1, field.zero(), field.zero()
        )
    return TwoBlocksReport(n=n, s=s, t=t, x=str(xc), y=str(yc))


def compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    """All ordered tuples of ``parts`` non-negative integers summing to total."""
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def random_rational(rng: random.Random, nonzero: bool = False) -> Fraction:
    """Seeded random rational with numerator in [-9, 9], denominator in [1, 9]."""
    while True:
        value = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        if value or not nonzero:
            return value


@dataclass(frozen=True)
class SweepFailure:
    kind: str
    params: str
    message: str


@dataclass(frozen=True)
class PascalSweepReport:
    max_k: int
    max_n: int
    samples: int
    proof_samples: int
    seed: int
    specs_checked: int
    factorizations_checked: int
    two_blocks_checked: int
    failures: tuple[SweepFailure, ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json_dict(self) -> dict:
        return {
            "max_k": self.max_k,
            "max_n": self.max_n,
            "samples": self.samples,
            "proof_samples": self.proof_samples,
            "seed": self.seed,
            "specs_checked": self.specs_checked,
            "factorizations_checked": self.factorizations_checked,
            "two_blocks_checked": self.two_blocks_checked,
            "failures": [
                {"kind": f.kind, "params": f.params, "message": f.message}
                for f in self.failures
            ],
            "ok": self.ok,
        }


def pascal_check(
    max_k: int, max_n: int, samples: int, seed: int, proof_samples: int = 50
) -> PascalSweepReport:
    """Seeded sweep: invertibility over all block shapes, plus proof replays.

    For every root order k <= max_k and every composition of every total
    N <= max_n into k blocks, draws ``samples`` random (z, w) pairs and
    checks the stacked determinant is nonzero; then replays the
    factorization and two-stack arguments on ``proof_samples`` random
    instances each.  Identical arguments produce identical reports.
    """
    rng = random.Random(seed)
    failures: list[SweepFailure] = []
    specs = 0
    for k in range(1, max_k + 1):
        for total in range(1, max_n + 1):
            for shape in compositions(total, k):
                for _ in range(samples):
                    z = random_rational(rng)
                    w = random_rational(rng, nonzero=True)
                    spec = PascalSpec(k, shape, z, w)
                    specs += 1
                    result = verify_invertible(spec)
                    if not result.invertible:
                        failures.append(
                            SweepFailure(
                                "invertibility",
                                f"k={k} blocks={shape} z={z} w={w}",
                                "determinant is zero",
                            )
                        )
    fact = 0
    for _ in range(proof_samples):
        p = rng.randint(1, 6)
        q = rng.randint(1, 6)
        x = random_rational(rng, nonzero=True)
        z = random_rational(rng)
        w = random_rational(rng, nonzero=True)
        fact += 1
        try:
            factorization_check(x, z, w, p, q)
        except PascalIdentityError as exc:
            failures.append(
                SweepFailure(
                    "factorization", f"x={x} z={z} w={w} p={p} q={q}", str(exc)
                )
            )
    twob = 0
    for _ in range(proof_samples):
        n = rng.randint(1, 6)
        s = rng.randint(0, n)
        t = rng.randint(0, min(s, n - s))
        x = random_rational(rng, nonzero=True)
        while True:
            y = random_rational(rng, nonzero=True)
            if y != x:
                break
        twob += 1
        try:
            two_blocks_check(x, y, n, s, t)
        except PascalIdentityError as exc:
            failures.append(
                SweepFailure(
                    "two-blocks", f"x={x} y={y} n={n} s={s} t={t}", str(exc)
                )
            )
    return PascalSweepReport(
        max_k=max_k,
        max_n=max_n,
        samples=samples,
        proof_samples=proof_samples,
        seed=seed,
        specs_checked=specs,
        factorizations_checked=fact,
        two_blocks_checked=twob,
        failures=tuple(failures),
    )
