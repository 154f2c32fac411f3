"""Self-describing binary checkpoint container.

Layout: magic "SCCK", uint32 format version, uint32 header length, UTF-8
JSON header, then the concatenated little-endian float64 parameter payload.
The header maps each parameter name to its shape and byte offset, so files
are readable without knowing the model that wrote them. Round-trips are
bit-exact.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from .tensor import Parameter

MAGIC = b"SCCK"
FORMAT_VERSION = 1


class CheckpointError(ValueError):
    pass


@dataclass
class Checkpoint:
    params: dict[str, np.ndarray]
    hyperparams: dict
    version: int

    def model_id(self) -> str:
        h = hashlib.sha256()
        h.update(json.dumps(self.hyperparams, sort_keys=True).encode())
        for name in sorted(self.params):
            h.update(name.encode())
            h.update(self.params[name].astype("<f8").tobytes())
        return h.hexdigest()[:12]


def save_checkpoint(path: str | Path, params, hyperparams: dict | None = None) -> None:
    """Write parameters (a name->array mapping or Parameter list) to `path`."""
    if not isinstance(params, Mapping):
        params = {p.name: p.data for p in params}
    entries = []
    blobs = []
    offset = 0
    for name in sorted(params):
        arr = np.ascontiguousarray(params[name], dtype="<f8")
        entries.append({"name": name, "shape": list(arr.shape),
                        "dtype": "<f8", "offset": offset,
                        "nbytes": arr.nbytes})
        blobs.append(arr.tobytes())
        offset += arr.nbytes
    header = json.dumps({"hyperparams": hyperparams or {},
                         "entries": entries}, sort_keys=True).encode()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", FORMAT_VERSION, len(header)))
        fh.write(header)
        for blob in blobs:
            fh.write(blob)


def load_checkpoint(path: str | Path) -> Checkpoint:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise CheckpointError(f"{path}: not a checkpoint file (bad magic)")
        version, header_len = struct.unpack("<II", fh.read(8))
        if version > FORMAT_VERSION:
            raise CheckpointError(f"{path}: unsupported format version {version}")
        header = json.loads(fh.read(header_len).decode())
        payload = fh.read()
    params: dict[str, np.ndarray] = {}
    for entry in header["entries"]:
        start = entry["offset"]
        raw = payload[start:start + entry["nbytes"]]
        arr = np.frombuffer(raw, dtype=entry["dtype"]).reshape(entry["shape"])
        params[entry["name"]] = arr.astype(np.float64)
    return Checkpoint(params=params, hyperparams=header["hyperparams"],
                      version=version)


def restore_parameters(checkpoint: Checkpoint, params: list[Parameter]) -> None:
    """Copy checkpoint values into matching named parameters."""
    for p in params:
        if p.name not in checkpoint.params:
            raise CheckpointError(f"checkpoint missing parameter {p.name!r}")
        src = checkpoint.params[p.name]
        if src.shape != p.data.shape:
            raise CheckpointError(
                f"parameter {p.name!r}: checkpoint shape {src.shape} != "
                f"model shape {p.data.shape}")
        p.data[...] = src
