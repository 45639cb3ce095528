#!/usr/bin/env python3
"""Writes snapshot_n16.bin with the standard struct module, independently of
the C++ writer. Every multi-byte value is packed little-endian explicitly.

    omega[i1, i2] = (i1 - 7.5) * (i2 + 1) / 16
    theta[i1, i2] = (i1 * 16 + i2) / 3
"""
import struct
import sys
from pathlib import Path

N = 16
T, MU, EPS0 = 0.625, 1e-3, 0.1


def main(out: Path) -> None:
    data = bytearray(b"BPL1")
    data += struct.pack("<II", 1, N)
    data += struct.pack("<ddd", T, MU, EPS0)
    for i1 in range(N):
        for i2 in range(N):
            data += struct.pack("<d", (i1 - 7.5) * (i2 + 1) / 16)
    for i1 in range(N):
        for i2 in range(N):
            data += struct.pack("<d", (i1 * 16 + i2) / 3)
    out.write_bytes(bytes(data))


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).with_name("snapshot_n16.bin"))
