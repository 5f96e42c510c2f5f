"""
Bit-exact, self-delimiting container format.

Layout (gamma = Elias gamma, most significant bit first):

    fallback = 1:  1 | gamma(len(raw) + 1) | raw
    fallback = 0:  0 | gamma(n + 1) | gamma(k) | gamma(q) | gamma(alpha + 1)
                     | gamma(|L| + 1) | (gamma(index) | bit) * |L|
                     | gamma(|v| + 1) | v

followed by zero bits up to the next byte boundary. See docs/CONTAINER_FORMAT.md.
"""

from typing import List

from .errors import MalformedEncoding
from .models import Advice, BitString, Encoding


def gamma_length(value: int) -> int:
    """Bit cost of gamma(value)."""
    return 2 * value.bit_length() - 1


class BitWriter:
    """Append-only bit buffer."""

    def __init__(self):
        self.bits: List[int] = []

    def write_bit(self, bit: int) -> None:
        self.bits.append(1 if bit else 0)

    def write_bits(self, bits) -> None:
        self.bits.extend(bits)

    def write_gamma(self, value: int) -> None:
        if value < 1:
            raise ValueError(f"Elias gamma codes positive integers only, got {value}")
        width = value.bit_length()
        self.bits.extend([0] * (width - 1))
        self.bits.extend((value >> (width - 1 - j)) & 1 for j in range(width))

    def __len__(self) -> int:
        return len(self.bits)

    def to_bytes(self) -> bytes:
        padded = self.bits + [0] * (-len(self.bits) % 8)
        out = bytearray()
        for start in range(0, len(padded), 8):
            byte = 0
            for bit in padded[start:start + 8]:
                byte = (byte << 1) | bit
            out.append(byte)
        return bytes(out)


class BitReader:
    """Reads bits from a byte string; every overrun is a MalformedEncoding."""

    def __init__(self, data: bytes):
        self.data = bytes(data)
        self.total = len(self.data) * 8
        self.pos = 0

    def remaining(self) -> int:
        return self.total - self.pos

    def read_bit(self) -> int:
        if self.pos >= self.total:
            raise MalformedEncoding(f"truncated container at bit {self.pos}")
        byte = self.data[self.pos >> 3]
        bit = (byte >> (7 - (self.pos & 7))) & 1
        self.pos += 1
        return bit

    def read_bits(self, count: int) -> BitString:
        if count > self.remaining():
            raise MalformedEncoding(
                f"need {count} bits at bit {self.pos}, only {self.remaining()} left"
            )
        return BitString(tuple(self.read_bit() for _ in range(count)))

    def read_gamma(self) -> int:
        zeros = 0
        while self.read_bit() == 0:
            zeros += 1
        value = 1
        for _ in range(zeros):
            value = (value << 1) | self.read_bit()
        return value

    def finish(self) -> None:
        """Only zero padding up to the byte boundary may remain."""
        if self.remaining() >= 8:
            raise MalformedEncoding(f"{self.remaining()} trailing bits after container")
        while self.remaining():
            if self.read_bit():
                raise MalformedEncoding(f"non-zero padding bit at {self.pos - 1}")


def _write(enc: Encoding) -> BitWriter:
    writer = BitWriter()
    writer.write_bit(1 if enc.fallback else 0)
    if enc.fallback:
        writer.write_gamma(len(enc.raw) + 1)
        writer.write_bits(enc.raw)
        return writer

    writer.write_gamma(enc.n + 1)
    writer.write_gamma(enc.k)
    writer.write_gamma(enc.q)
    writer.write_gamma(enc.alpha.alpha + 1)
    writer.write_gamma(len(enc.light) + 1)
    for index, bit in enc.light:
        writer.write_gamma(index)
        writer.write_bit(bit)
    writer.write_gamma(len(enc.v) + 1)
    writer.write_bits(enc.v)
    return writer


def serialize(enc: Encoding) -> bytes:
    """Write the container MSB-first, zero-padded to a whole byte."""
    return _write(enc).to_bytes()


def encoded_bits(enc: Encoding) -> int:
    """Serialized length in bits before byte padding."""
    if enc.fallback:
        return 1 + gamma_length(len(enc.raw) + 1) + len(enc.raw)
    return (
        1
        + gamma_length(enc.n + 1)
        + gamma_length(enc.k)
        + gamma_length(enc.q)
        + gamma_length(enc.alpha.alpha + 1)
        + gamma_length(len(enc.light) + 1)
        + sum(gamma_length(index) + 1 for index, _ in enc.light)
        + gamma_length(len(enc.v) + 1)
        + len(enc.v)
    )


def container_bits(enc: Encoding) -> int:
    """Length of the serialized container in bits, byte padding included."""
    return -(-encoded_bits(enc) // 8) * 8


def deserialize(data: bytes) -> Encoding:
    """Parse a container; any deviation from the canonical layout is rejected."""
    reader = BitReader(data)
    if reader.read_bit():
        raw = reader.read_bits(reader.read_gamma() - 1)
        reader.finish()
        return Encoding.canonical(raw)

    n = reader.read_gamma() - 1
    k = reader.read_gamma()
    q = reader.read_gamma()
    alpha = reader.read_gamma() - 1
    count = reader.read_gamma() - 1
    light = []
    for _ in range(count):
        index = reader.read_gamma()
        light.append((index, reader.read_bit()))
    width = reader.read_gamma() - 1
    if width < 1:
        raise MalformedEncoding("v must hold at least one bit")
    v = reader.read_bits(width)
    reader.finish()
    return Encoding(
        fallback=False, v=v, light=tuple(light), alpha=Advice(alpha), n=n, k=k, q=q
    )
