"""Random linear coding over GF(256) with incremental Gaussian elimination.

Field: GF(2^8) under the reduction polynomial x^8 + x^4 + x^3 + x^2 + 1
(0x11D), for which 2 is a primitive element.  Scalar arithmetic goes
through log/antilog tables; bulk payload arithmetic goes through a
precomputed 256x256 product table so combining and eliminating work on
whole byte vectors at once.

An encoded packet carries its batch index, K coefficients and the
combined payload.  A decoder ingests packets one by one, keeping its
rows in reduced row-echelon form, and can hand back the original K
packets as soon as its rank reaches K.
"""

from dataclasses import dataclass

import numpy as np

REDUCTION_POLY = 0x11D


def _build_tables() -> tuple[list[int], list[int]]:
    exp = [0] * 510
    log = [0] * 256
    x = 1
    for i in range(255):
        exp[i] = x
        log[x] = i
        x <<= 1
        if x & 0x100:
            x ^= REDUCTION_POLY
    for i in range(255, 510):
        exp[i] = exp[i - 255]
    return exp, log


_EXP, _LOG = _build_tables()


def gf_mul(a: int, b: int) -> int:
    """Product in GF(256)."""
    if a == 0 or b == 0:
        return 0
    return _EXP[_LOG[a] + _LOG[b]]


def gf_inv(a: int) -> int:
    """Multiplicative inverse in GF(256); 0 has none."""
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(256)")
    return _EXP[255 - _LOG[a]]


# Full product table for vectorized row operations: _MUL[c, v] multiplies
# every byte of v by the scalar c.
_MUL = np.array([[gf_mul(a, b) for b in range(256)] for a in range(256)], dtype=np.uint8)


@dataclass(frozen=True)
class CodedPacket:
    """One broadcast unit: batch index, K coefficients, combined payload."""

    batch: int
    coefficients: np.ndarray  # uint8, shape (K,)
    payload: np.ndarray       # uint8, shape (L,)


def _packet_matrix(packets) -> np.ndarray:
    if isinstance(packets, np.ndarray):
        mat = np.atleast_2d(packets).astype(np.uint8, copy=False)
    else:
        rows = [np.frombuffer(bytes(pkt), dtype=np.uint8) for pkt in packets]
        if len({r.size for r in rows}) > 1:
            raise ValueError("source packets must all have the same length")
        mat = np.vstack(rows)
    if mat.size == 0:
        raise ValueError("need at least one non-empty source packet")
    return mat


def combine_packets(coefficients, packets) -> np.ndarray:
    """Bytewise field combination sum_i c_i * packet_i."""
    mat = _packet_matrix(packets)
    coeffs = np.asarray(coefficients, dtype=np.uint8)
    if coeffs.shape != (mat.shape[0],):
        raise ValueError(f"expected {mat.shape[0]} coefficients, got {coeffs.shape}")
    return np.bitwise_xor.reduce(_MUL[coeffs[:, None], mat], axis=0)


def encode(packets, rng: np.random.Generator, batch: int = 0) -> CodedPacket:
    """Combine a batch of source packets under fresh uniform coefficients.

    The all-zero coefficient vector (probability 256**-K) is redrawn so
    every emitted packet is a genuine combination.
    """
    if isinstance(packets, np.ndarray) and packets.ndim == 2 and packets.dtype == np.uint8:
        mat = packets  # hot path for the simulator
    else:
        mat = _packet_matrix(packets)
    coeffs = rng.integers(0, 256, size=mat.shape[0], dtype=np.uint8)
    while not coeffs.any():
        coeffs = rng.integers(0, 256, size=mat.shape[0], dtype=np.uint8)
    return CodedPacket(batch, coeffs, np.bitwise_xor.reduce(_MUL[coeffs[:, None], mat], axis=0))


class DecoderState:
    """Incremental eliminator for one batch.

    Rows (coefficients || payload) stay in reduced row-echelon form: each
    stored row has a unit leading coefficient at its pivot column and
    zeros at every other pivot column, so an incoming packet is reduced
    in one vectorized pass and stored rows remain mutually reduced.
    rank == window means the batch is decodable.
    """

    def __init__(self, batch: int, window: int, packet_len: int):
        if window < 1 or packet_len < 1:
            raise ValueError("window and packet length must be positive")
        self.batch = batch
        self.window = window
        self.packet_len = packet_len
        self.rank = 0
        self._rows = np.zeros((window, window + packet_len), dtype=np.uint8)
        self._pivots = np.empty(window, dtype=np.intp)  # ascending; _pivots[i] is row i's pivot column

    def ingest(self, packet: CodedPacket) -> bool:
        """Fold one packet in; True iff it raised the rank."""
        if packet.batch != self.batch:
            raise ValueError(f"packet from batch {packet.batch}, decoder expects {self.batch}")
        if packet.coefficients.shape != (self.window,) or packet.payload.shape != (self.packet_len,):
            raise ValueError("packet shape does not match this decoder")
        row = np.empty(self.window + self.packet_len, dtype=np.uint8)
        row[: self.window] = packet.coefficients
        row[self.window:] = packet.payload
        rank = self.rank
        if rank:
            factors = row[self._pivots[:rank]]
            if factors.any():
                row ^= np.bitwise_xor.reduce(_MUL[factors[:, None], self._rows[:rank]], axis=0)
        nonzero = np.nonzero(row[: self.window])[0]
        if nonzero.size == 0:
            return False  # dependent on what we already hold
        lead = int(nonzero[0])
        row = _MUL[gf_inv(int(row[lead])), row]
        if rank:
            col = self._rows[:rank, lead].copy()
            self._rows[:rank] ^= _MUL[col[:, None], row[None, :]]
        pos = int(np.searchsorted(self._pivots[:rank], lead))
        self._rows[pos + 1 : rank + 1] = self._rows[pos:rank].copy()
        self._rows[pos] = row
        self._pivots[pos + 1 : rank + 1] = self._pivots[pos:rank].copy()
        self._pivots[pos] = lead
        self.rank = rank + 1
        return True

    def recover(self) -> list[bytes]:
        """The K original packets, in source order; needs full rank."""
        if self.rank < self.window:
            raise ValueError(f"rank {self.rank} < {self.window}: batch not yet decodable")
        # Full rank in reduced row-echelon form means the coefficient block
        # is the identity, so payload rows already sit in source order.
        return [self._rows[i, self.window:].tobytes() for i in range(self.window)]


@dataclass(frozen=True)
class CodecValidationReport:
    """Round-trip and rank statistics over independently coded batches."""

    n_batches: int
    window: int
    packet_len: int
    roundtrip_failures: int
    mean_extra_packets: float     # receptions beyond K needed for full rank
    exact_rank_fraction: float    # batches decoded with exactly K receptions

    @property
    def roundtrip_ok(self) -> bool:
        return self.roundtrip_failures == 0


def expected_extra_packets(window: int) -> float:
    """Analytic mean receptions beyond K until full rank (uniform coefficients).

    At rank r a fresh packet is dependent with probability
    (256**r - 1) / (256**K - 1); summing the geometric means over r gives
    about 0.0039 for any window of a few packets or more.
    """
    total = 0.0
    denom = 256.0**window - 1.0
    for r in range(window):
        dep = (256.0**r - 1.0) / denom
        total += dep / (1.0 - dep)
    return total


def run_codec_validation(window: int, packet_len: int, n_batches: int, seed: int = 0) -> CodecValidationReport:
    """Encode/decode `n_batches` random batches and collect rank statistics."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    failures = 0
    extras_total = 0
    exact = 0
    for _ in range(n_batches):
        source = rng.integers(0, 256, size=(window, packet_len), dtype=np.uint8)
        decoder = DecoderState(0, window, packet_len)
        received = 0
        while decoder.rank < window:
            received += 1
            decoder.ingest(encode(source, rng))
        extras_total += received - window
        exact += received == window
        recovered = decoder.recover()
        if any(recovered[i] != source[i].tobytes() for i in range(window)):
            failures += 1
    return CodecValidationReport(
        n_batches=n_batches,
        window=window,
        packet_len=packet_len,
        roundtrip_failures=failures,
        mean_extra_packets=extras_total / n_batches if n_batches else 0.0,
        exact_rank_fraction=exact / n_batches if n_batches else 0.0,
    )
