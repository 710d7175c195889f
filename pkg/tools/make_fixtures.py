"""Regenerate the bundled JSON fixtures under src/qincompat/data/."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from qincompat.io import observable_to_json, povm_to_json
from qincompat.linalg import SX, SY, SZ
from qincompat.povm import depolarize, fourier_pair, pauli_povm, trine_qubit

OUT = Path(__file__).resolve().parents[1] / "src" / "qincompat" / "data"


def write(name: str, doc: dict) -> None:
    (OUT / f"{name}.json").write_text(json.dumps(doc) + "\n")


def main() -> None:
    OUT.mkdir(exist_ok=True)
    for axis in "xyz":
        write(f"sigma{axis}", povm_to_json(pauli_povm(axis)))
    for d in range(2, 6):
        A, B = fourier_pair(d)
        write(f"fourier{d}_a", povm_to_json(A))
        write(f"fourier{d}_b", povm_to_json(B))
    write("trine", povm_to_json(trine_qubit()))
    for axis in "xz":
        write(f"sigma{axis}_eta0.5", povm_to_json(depolarize(pauli_povm(axis), 0.5)))
    for name, op in (("obs_sigmax", SX), ("obs_sigmay", SY), ("obs_sigmaz", SZ)):
        write(name, observable_to_json(op))
    # +-1 observables on C^4: blocks at angles pi/2 and pi/6 about the z axis
    def axis(theta):
        return np.cos(theta) * SZ + np.sin(theta) * SX
    zero = np.zeros((2, 2))
    A4 = np.block([[SZ, zero], [zero, SZ]])
    B4 = np.block([[axis(np.pi / 2), zero], [zero, axis(np.pi / 6)]])
    write("block4_a", observable_to_json(A4))
    write("block4_b", observable_to_json(B4))


if __name__ == "__main__":
    main()
