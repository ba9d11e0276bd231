"""Bit-packed Pauli operators and stabilizer tableaux over GF(2).

Phase convention
----------------
A :class:`PauliOperator` with bit masks ``x``, ``z`` and phase exponent ``k``
is the operator

    i**k * prod_q X_q**x_q Z_q**z_q

with the X factor to the left of the Z factor on every qubit. Under this
convention ``Y = i X Z``, so the single-qubit ``Y`` has ``x = z = 1`` and
``k = 1``. An operator is Hermitian iff ``k + popcount(x & z)`` is even.

Bit ``q`` of a mask (as a Python ``int``) is qubit ``q``. Inside a
:class:`StabilizerTableau` the same masks are stored as little-endian arrays
of ``uint64`` words, one row per generator.

The tableau follows the Aaronson-Gottesman layout: rows ``0..n-1`` are
destabilizers, rows ``n..2n-1`` the stabilizer generators. Only pure states
are representable. All random draws come from an explicitly passed
``numpy.random.Generator``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "PauliOperator",
    "StabilizerTableau",
    "TableauIntegrityError",
    "commutes",
    "multiply",
    "apply_pauli",
    "measure",
    "measure_and_repair",
    "expectation",
    "canonical_form",
    "states_equal",
]


class TableauIntegrityError(ValueError):
    """Raised when a generator set is not a valid pure stabilizer state."""


def _n_words(n_qubits: int) -> int:
    return max(1, (n_qubits + 63) // 64)


def _int_to_words(value: int, n_words: int) -> np.ndarray:
    return np.frombuffer(value.to_bytes(8 * n_words, "little"), dtype="<u8").astype(np.uint64)


def _words_to_int(words: np.ndarray) -> int:
    return int.from_bytes(np.ascontiguousarray(words, dtype="<u8").tobytes(), "little")


def _popcount_rows(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


@dataclass(frozen=True)
class PauliOperator:
    """An n-qubit Pauli operator ``i**phase * X^x Z^z``.

    Attributes:
        n_qubits: number of qubits the operator acts on.
        x: X bit mask.
        z: Z bit mask.
        phase: exponent of ``i``, reduced mod 4.
    """

    n_qubits: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n_qubits < 0:
            raise ValueError("n_qubits must be non-negative")
        limit = 1 << self.n_qubits
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError(f"bit masks do not fit in {self.n_qubits} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, n_qubits: int) -> PauliOperator:
        return cls(n_qubits)

    @classmethod
    def x_type(cls, n_qubits: int, qubits: Iterable[int]) -> PauliOperator:
        """Product of X over ``qubits`` (repeated qubits cancel)."""
        mask = 0
        for q in qubits:
            mask ^= 1 << q
        return cls(n_qubits, x=mask)

    @classmethod
    def z_type(cls, n_qubits: int, qubits: Iterable[int]) -> PauliOperator:
        """Product of Z over ``qubits`` (repeated qubits cancel)."""
        mask = 0
        for q in qubits:
            mask ^= 1 << q
        return cls(n_qubits, z=mask)

    @classmethod
    def from_label(cls, label: str) -> PauliOperator:
        """Parse labels such as ``"XIZ"``, ``"-YY"`` or ``"+iZ_X"``.

        Letters are literal Pauli matrices (``Y`` is the Hermitian Y, not XZ);
        ``I`` and ``_`` are identities. Qubit 0 is the leftmost letter.
        """
        sign = 0
        body = label
        for prefix, k in (("+i", 1), ("-i", 3), ("i", 1), ("+", 0), ("-", 2)):
            if body.startswith(prefix):
                sign, body = k, body[len(prefix):]
                break
        x = z = 0
        n_y = 0
        for q, ch in enumerate(body):
            if ch in "I_":
                continue
            if ch == "X":
                x |= 1 << q
            elif ch == "Z":
                z |= 1 << q
            elif ch == "Y":
                x |= 1 << q
                z |= 1 << q
                n_y += 1
            else:
                raise ValueError(f"bad Pauli letter {ch!r} in {label!r}")
        return cls(len(body), x, z, sign + n_y)

    @classmethod
    def from_sparse(cls, n_qubits: int, ops: Mapping[int, str], sign: int = 1) -> PauliOperator:
        """Build a Hermitian operator from ``{qubit: "X"|"Y"|"Z"}``."""
        chars = ["I"] * n_qubits
        for q, p in ops.items():
            chars[q] = p
        return cls.from_label(("-" if sign < 0 else "") + "".join(chars))

    # -- properties -------------------------------------------------------

    @property
    def n_y(self) -> int:
        return (self.x & self.z).bit_count()

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def support(self) -> list[int]:
        mask = self.x | self.z
        return [q for q in range(self.n_qubits) if mask >> q & 1]

    def is_hermitian(self) -> bool:
        return (self.phase + self.n_y) % 2 == 0

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def sign(self) -> int:
        """Sign ``s`` with ``self = s * (product of literal X, Y, Z)``.

        Only defined for Hermitian operators.
        """
        if not self.is_hermitian():
            raise ValueError("sign is only defined for Hermitian operators")
        return 1 if (self.phase - self.n_y) % 4 == 0 else -1

    def label(self) -> str:
        """Inverse of :meth:`from_label`."""
        chars = []
        for q in range(self.n_qubits):
            bx, bz = self.x >> q & 1, self.z >> q & 1
            chars.append("IZXY"[2 * bx + bz])
        prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[(self.phase - self.n_y) % 4]
        return prefix + "".join(chars)

    def __repr__(self) -> str:
        return f"PauliOperator({self.label()!r})"

    def __mul__(self, other: PauliOperator) -> PauliOperator:
        return multiply(self, other)

    def __neg__(self) -> PauliOperator:
        return PauliOperator(self.n_qubits, self.x, self.z, self.phase + 2)

    def to_matrix(self) -> np.ndarray:
        """Dense ``2**n x 2**n`` matrix; qubit 0 is the leftmost tensor factor."""
        xm = np.array([[0, 1], [1, 0]], dtype=complex)
        zm = np.array([[1, 0], [0, -1]], dtype=complex)
        out = np.ones((1, 1), dtype=complex)
        for q in range(self.n_qubits):
            f = np.eye(2, dtype=complex)
            if self.x >> q & 1:
                f = f @ xm
            if self.z >> q & 1:
                f = f @ zm
            out = np.kron(out, f)
        return (1j**self.phase) * out


def _check_same_size(a: PauliOperator, b: PauliOperator) -> None:
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    """True iff ``a`` and ``b`` commute (symplectic product is zero)."""
    _check_same_size(a, b)
    return ((a.x & b.z).bit_count() + (a.z & b.x).bit_count()) % 2 == 0


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Exact group product ``a @ b``, phase included."""
    _check_same_size(a, b)
    # Z^z1 X^x2 = (-1)^{z1.x2} X^x2 Z^z1
    phase = a.phase + b.phase + 2 * (a.z & b.x).bit_count()
    return PauliOperator(a.n_qubits, a.x ^ b.x, a.z ^ b.z, phase)


class StabilizerTableau:
    """Pure stabilizer state with destabilizers, stored bit-packed.

    Treat instances as values: the module-level functions return new
    tableaux and never modify their inputs.
    """

    __slots__ = ("n_qubits", "_x", "_z", "_k")

    def __init__(self, n_qubits: int, x: np.ndarray, z: np.ndarray, k: np.ndarray):
        self.n_qubits = n_qubits
        self._x = x
        self._z = z
        self._k = k

    @classmethod
    def zero_state(cls, n_qubits: int) -> StabilizerTableau:
        """``|0...0>``: stabilizers ``Z_q``, destabilizers ``X_q``."""
        w = _n_words(n_qubits)
        x = np.zeros((2 * n_qubits, w), dtype=np.uint64)
        z = np.zeros((2 * n_qubits, w), dtype=np.uint64)
        for q in range(n_qubits):
            x[q, q // 64] |= np.uint64(1) << np.uint64(q % 64)
            z[n_qubits + q, q // 64] |= np.uint64(1) << np.uint64(q % 64)
        return cls(n_qubits, x, z, np.zeros(2 * n_qubits, dtype=np.int64))

    @classmethod
    def from_generators(cls, generators: Sequence[PauliOperator]) -> StabilizerTableau:
        """Build a tableau from ``n`` independent commuting Hermitian generators.

        Destabilizers are reconstructed by symplectic Gram-Schmidt.

        Raises:
            TableauIntegrityError: if the set is not a valid pure stabilizer group.
        """
        if not generators:
            raise TableauIntegrityError("empty generator list")
        n = generators[0].n_qubits
        if len(generators) != n:
            raise TableauIntegrityError(
                f"{len(generators)} generators for {n} qubits; only pure states are supported"
            )
        for g in generators:
            if g.n_qubits != n:
                raise TableauIntegrityError("generators act on different qubit counts")
            if not g.is_hermitian():
                raise TableauIntegrityError(f"non-Hermitian generator {g!r}")
        for i, a in enumerate(generators):
            for b in generators[i + 1:]:
                if not commutes(a, b):
                    raise TableauIntegrityError(f"{a!r} and {b!r} anticommute")
        stab = np.array([_bits(g.x, n) + _bits(g.z, n) for g in generators], dtype=bool).reshape(n, 2 * n)
        destab = _destabilizers(stab)
        w = _n_words(n)
        x = np.zeros((2 * n, w), dtype=np.uint64)
        z = np.zeros((2 * n, w), dtype=np.uint64)
        k = np.zeros(2 * n, dtype=np.int64)
        for i in range(n):
            dx, dz = _from_bits(destab[i, :n]), _from_bits(destab[i, n:])
            x[i], z[i] = _int_to_words(dx, w), _int_to_words(dz, w)
            k[i] = (dx & dz).bit_count() % 4
            g = generators[i]
            x[n + i], z[n + i] = _int_to_words(g.x, w), _int_to_words(g.z, w)
            k[n + i] = g.phase
        return cls(n, x, z, k)

    def copy(self) -> StabilizerTableau:
        return StabilizerTableau(self.n_qubits, self._x.copy(), self._z.copy(), self._k.copy())

    def _row(self, i: int) -> PauliOperator:
        return PauliOperator(
            self.n_qubits, _words_to_int(self._x[i]), _words_to_int(self._z[i]), int(self._k[i])
        )

    @property
    def generators(self) -> list[PauliOperator]:
        n = self.n_qubits
        return [self._row(n + i) for i in range(n)]

    @property
    def destabilizers(self) -> list[PauliOperator]:
        return [self._row(i) for i in range(self.n_qubits)]

    def _words(self, p: PauliOperator) -> tuple[np.ndarray, np.ndarray]:
        if p.n_qubits != self.n_qubits:
            raise ValueError(f"qubit count mismatch: {p.n_qubits} vs {self.n_qubits}")
        w = self._x.shape[1]
        return _int_to_words(p.x, w), _int_to_words(p.z, w)

    def _anticommuting(self, px: np.ndarray, pz: np.ndarray) -> np.ndarray:
        return (_popcount_rows((self._x & pz) ^ (self._z & px)) & 1).astype(bool)

    def _stabilizer_sign_exponent(self, px: np.ndarray, pz: np.ndarray, anti: np.ndarray) -> int:
        """Phase exponent of the product of stabilizers equal (up to phase) to p."""
        n = self.n_qubits
        rows = np.nonzero(anti[:n])[0] + n
        if rows.size == 0:
            return 0
        xs, zs = self._x[rows], self._z[rows]
        zpre = np.bitwise_xor.accumulate(zs, axis=0)
        zpre = np.vstack([np.zeros_like(zpre[:1]), zpre[:-1]])
        return int(self._k[rows].sum() + 2 * _popcount_rows(zpre & xs).sum()) % 4

    def __eq__(self, other) -> bool:
        if not isinstance(other, StabilizerTableau):
            return NotImplemented
        return states_equal(self, other)

    __hash__ = None

    def __repr__(self) -> str:
        if self.n_qubits <= 8:
            body = ", ".join(g.label() for g in self.generators)
            return f"StabilizerTableau<{body}>"
        return f"StabilizerTableau(n_qubits={self.n_qubits})"


def _bits(value: int, n: int) -> list[bool]:
    return [bool(value >> q & 1) for q in range(n)]


def _from_bits(bits: np.ndarray) -> int:
    out = 0
    for q in np.nonzero(bits)[0]:
        out |= 1 << int(q)
    return out


def _gf2_rank(mat: np.ndarray) -> int:
    m = mat.copy()
    rank = 0
    for c in range(m.shape[1]):
        rows = np.nonzero(m[rank:, c])[0]
        if rows.size == 0:
            continue
        r = rank + rows[0]
        m[[rank, r]] = m[[r, rank]]
        hit = m[:, c].copy()
        hit[rank] = False
        m[hit] ^= m[rank]
        rank += 1
        if rank == m.shape[0]:
            break
    return rank


def _destabilizers(stab: np.ndarray) -> np.ndarray:
    """Rows d_i with <d_i, s_j> = delta_ij and pairwise commuting d_i."""
    n = stab.shape[0]
    # <d, s> = d . (J s) with J swapping the x and z halves
    sj = np.hstack([stab[:, n:], stab[:, :n]])
    m = np.hstack([sj.copy(), np.eye(n, dtype=bool)])
    pivots = []
    rank = 0
    for c in range(2 * n):
        rows = np.nonzero(m[rank:, c])[0]
        if rows.size == 0:
            continue
        r = rank + rows[0]
        m[[rank, r]] = m[[r, rank]]
        hit = m[:, c].copy()
        hit[rank] = False
        m[hit] ^= m[rank]
        pivots.append(c)
        rank += 1
        if rank == n:
            break
    if rank < n:
        raise TableauIntegrityError("generators are not independent over GF(2)")
    t = m[:, 2 * n:]
    d = np.zeros((n, 2 * n), dtype=bool)
    for kk, c in enumerate(pivots):
        d[:, c] = t[kk, :]

    def omega(a, b):
        return bool((np.count_nonzero(a[:n] & b[n:]) + np.count_nonzero(a[n:] & b[:n])) % 2)

    for i in range(n):
        for j in range(i + 1, n):
            if omega(d[i], d[j]):
                d[j] ^= stab[i]
    return d


def apply_pauli(state: StabilizerTableau, p: PauliOperator) -> StabilizerTableau:
    """Conjugate the state by the Hermitian Pauli ``p``."""
    if not p.is_hermitian():
        raise ValueError(f"cannot apply non-Hermitian {p!r}")
    out = state.copy()
    _apply_inplace(out, p)
    return out


def _apply_inplace(t: StabilizerTableau, p: PauliOperator) -> None:
    n = t.n_qubits
    px, pz = t._words(p)
    anti = t._anticommuting(px, pz)
    anti[:n] = False
    t._k[anti] = (t._k[anti] + 2) % 4


def _rowsum_into(t: StabilizerTableau, targets: np.ndarray, src: int) -> None:
    """row_i <- row_i * row_src for every i in ``targets``."""
    if targets.size == 0:
        return
    extra = 2 * _popcount_rows(t._z[targets] & t._x[src])
    t._k[targets] = (t._k[targets] + t._k[src] + extra) % 4
    t._x[targets] ^= t._x[src]
    t._z[targets] ^= t._z[src]


def _measure_inplace(
    t: StabilizerTableau, p: PauliOperator, rng: np.random.Generator | None, outcome: int | None = None
) -> tuple[int, bool, PauliOperator | None]:
    """Measure ``p``. Returns (outcome, was_random, replaced generator)."""
    if not p.is_hermitian():
        raise ValueError(f"cannot measure non-Hermitian {p!r}")
    n = t.n_qubits
    px, pz = t._words(p)
    anti = t._anticommuting(px, pz)
    stab_hits = np.nonzero(anti[n:])[0]
    if stab_hits.size == 0:
        diff = (p.phase - t._stabilizer_sign_exponent(px, pz, anti)) % 4
        if diff % 2:
            raise TableauIntegrityError("measured operator has an imaginary eigenvalue")
        return (1 if diff == 0 else -1), False, None
    piv = n + int(stab_hits[0])
    old = t._row(piv)
    others = np.nonzero(anti)[0]
    others = others[others != piv]
    _rowsum_into(t, others, piv)
    if outcome is None:
        if rng is None:
            raise ValueError("a random generator is required for a random outcome")
        outcome = 1 if rng.integers(2) == 0 else -1
    t._x[piv - n] = t._x[piv]
    t._z[piv - n] = t._z[piv]
    t._k[piv - n] = t._k[piv]
    t._x[piv] = px
    t._z[piv] = pz
    t._k[piv] = (p.phase + (0 if outcome == 1 else 2)) % 4
    return outcome, True, old


def measure(
    state: StabilizerTableau, p: PauliOperator, rng: np.random.Generator
) -> tuple[int, StabilizerTableau]:
    """Projectively measure the Hermitian Pauli ``p``.

    A random outcome is drawn from ``rng`` only when ``p`` anticommutes with
    some generator; otherwise the outcome is the sign with which ``p`` lies
    in the stabilizer group and the state is unchanged.
    """
    out = state.copy()
    outcome, _, _ = _measure_inplace(out, p, rng)
    return outcome, out


def measure_and_repair(
    state: StabilizerTableau, p: PauliOperator, rng: np.random.Generator, target: int = 1
) -> tuple[int, StabilizerTableau]:
    """Measure ``p`` and, on the wrong outcome, repair towards ``target``.

    The repair applies the generator that ``p`` displaced. That generator
    anticommutes with ``p`` and commutes with everything that survived the
    measurement, so the final state is independent of the random draw.
    Returns the raw outcome and the repaired state.

    Raises:
        TableauIntegrityError: if ``p`` is already fixed at ``-target``.
    """
    out = state.copy()
    outcome, random, old = _measure_inplace(out, p, rng)
    if outcome != target:
        if not random:
            raise TableauIntegrityError(
                f"operator is deterministically {outcome:+d}; cannot repair to {target:+d}"
            )
        _apply_inplace(out, old)
    return outcome, out


def expectation(state: StabilizerTableau, p: PauliOperator) -> int:
    """+1/-1 if ``+p``/``-p`` is in the stabilizer group, 0 otherwise."""
    if not p.is_hermitian():
        raise ValueError(f"expectation of non-Hermitian {p!r}")
    n = state.n_qubits
    px, pz = state._words(p)
    anti = state._anticommuting(px, pz)
    if anti[n:].any():
        return 0
    diff = (p.phase - state._stabilizer_sign_exponent(px, pz, anti)) % 4
    return 1 if diff == 0 else -1


def _rref(state: StabilizerTableau) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reduced row echelon form of the stabilizer rows; X block first, qubit ascending."""
    n = state.n_qubits
    t = StabilizerTableau(n, state._x[n:].copy(), state._z[n:].copy(), state._k[n:].copy())
    rank = 0
    for block in (t._x, t._z):
        for q in range(n):
            col = (block[:, q // 64] >> np.uint64(q % 64)) & np.uint64(1)
            hits = np.nonzero(col[rank:])[0]
            if hits.size == 0:
                continue
            r = rank + int(hits[0])
            if r != rank:
                for arr in (t._x, t._z, t._k):
                    arr[[rank, r]] = arr[[r, rank]]
            col = (block[:, q // 64] >> np.uint64(q % 64)) & np.uint64(1)
            others = np.nonzero(col)[0]
            _rowsum_into(t, others[others != rank], rank)
            rank += 1
    if rank < n:
        raise TableauIntegrityError("dependent generator set")
    return t._x, t._z, t._k


def canonical_form(state: StabilizerTableau) -> StabilizerTableau:
    """Unique generator set for the state (full RREF, signs propagated)."""
    x, z, k = _rref(state)
    n = state.n_qubits
    gens = [PauliOperator(n, _words_to_int(x[i]), _words_to_int(z[i]), int(k[i])) for i in range(n)]
    return StabilizerTableau.from_generators(gens)


def states_equal(a: StabilizerTableau, b: StabilizerTableau) -> bool:
    """Equality of pure states up to global phase."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")
    ax, az, ak = _rref(a)
    bx, bz, bk = _rref(b)
    return bool(np.array_equal(ax, bx) and np.array_equal(az, bz) and np.array_equal(ak % 4, bk % 4))
