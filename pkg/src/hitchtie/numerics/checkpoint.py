"""Checkpoint container: JSON manifest + raw little-endian float32 buffers.

Round-trips are bit-exact. Layout:
    8-byte magic | uint32 manifest length | manifest JSON (utf-8) | raw data
"""

from __future__ import annotations

import hashlib
import json
import struct

import numpy as np

MAGIC = b"HTCKPT01"
FORMAT_VERSION = 1


def architecture_hash(params):
    h = hashlib.sha256()
    for name in sorted(params):
        h.update(name.encode())
        h.update(str(tuple(params[name].shape)).encode())
    return h.hexdigest()[:16]


def save_checkpoint(path, params, seed=0, epoch=0, extra=None):
    entries = []
    blobs = []
    offset = 0
    for name in sorted(params):
        arr = np.ascontiguousarray(params[name].values, dtype="<f4")
        raw = arr.tobytes()
        entries.append({"name": name, "shape": list(arr.shape), "offset": offset, "nbytes": len(raw)})
        blobs.append(raw)
        offset += len(raw)
    manifest = {
        "format_version": FORMAT_VERSION,
        "architecture_hash": architecture_hash(params),
        "seed": seed,
        "epoch": epoch,
        "params": entries,
    }
    if extra:
        manifest["extra"] = extra
    mbytes = json.dumps(manifest, sort_keys=True).encode()
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<I", len(mbytes)))
        f.write(mbytes)
        for raw in blobs:
            f.write(raw)


def load_checkpoint(path):
    """Returns (manifest, dict name -> float32 ndarray)."""
    with open(path, "rb") as f:
        magic = f.read(8)
        if magic != MAGIC:
            raise ValueError(f"{path}: not a checkpoint file")
        (mlen,) = struct.unpack("<I", f.read(4))
        manifest = json.loads(f.read(mlen).decode())
        if manifest["format_version"] != FORMAT_VERSION:
            raise ValueError(f"unsupported checkpoint version {manifest['format_version']}")
        data = f.read()
    arrays = {}
    for e in manifest["params"]:
        raw = data[e["offset"] : e["offset"] + e["nbytes"]]
        arrays[e["name"]] = np.frombuffer(raw, dtype="<f4").reshape(e["shape"]).copy()
    return manifest, arrays


def restore_into(store, arrays, strict=True):
    """Copy loaded arrays into a ParamStore's tensors (shape-checked)."""
    for name, arr in arrays.items():
        if name not in store.params:
            if strict:
                raise KeyError(f"checkpoint parameter {name!r} not in model")
            continue
        p = store.params[name]
        if tuple(p.values.shape) != tuple(arr.shape):
            raise ValueError(f"shape mismatch for {name!r}: {p.values.shape} vs {arr.shape}")
        p.values[...] = arr
