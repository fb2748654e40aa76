"""Versioned binary checkpoint container.

Byte layout (all integers little-endian):

    bytes 0..7    magic ``EQGCKPT1``
    bytes 8..15   uint64 header length ``n``
    bytes 16..16+n  UTF-8 JSON header
    remainder     concatenated float64 little-endian payloads

The JSON header carries ``version``, the run config, the RNG state, the
epoch/step counters, Adam hyperparameters, and an ``entries`` list of
``{name, kind, shape, offset, count}`` records locating each payload.
``kind`` is one of ``param``, ``adam_m``, ``adam_v``. ``offset`` is in
float64 elements from the start of the payload region. Any language that
can read JSON and little-endian doubles can load a checkpoint.
"""

from __future__ import annotations

import json

import numpy as np

from .adam import AdamState
from .tensor import Tensor

MAGIC = b"EQGCKPT1"
FORMAT_VERSION = 1


def save_checkpoint(path, params, adam=None, rng_state=None, meta=None):
    """Write params (name -> Tensor) plus optional optimizer/RNG state."""
    entries = []
    payloads = []
    offset = 0

    def push(name, kind, arr):
        nonlocal offset
        arr = np.ascontiguousarray(arr, dtype="<f8")
        entries.append({"name": name, "kind": kind, "shape": list(arr.shape),
                        "offset": offset, "count": int(arr.size)})
        payloads.append(arr)
        offset += arr.size

    for name in sorted(params):
        push(name, "param", params[name].data)
    header = {"version": FORMAT_VERSION, "meta": meta or {}}
    if adam is not None:
        for name in sorted(adam.m):
            push(name, "adam_m", adam.m[name])
            push(name, "adam_v", adam.v[name])
        header["adam"] = {"lr": adam.lr, "beta1": adam.beta1, "beta2": adam.beta2,
                          "eps": adam.eps, "step": adam.step}
    if rng_state is not None:
        header["rng_state"] = rng_state
    header["entries"] = entries

    header_bytes = json.dumps(header).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(len(header_bytes).to_bytes(8, "little"))
        fh.write(header_bytes)
        for arr in payloads:
            fh.write(arr.tobytes())


def load_checkpoint(path):
    """Read a checkpoint; returns (params, adam_or_None, rng_state_or_None, meta)."""
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != MAGIC:
            raise ValueError(f"{path}: not a checkpoint file (bad magic {magic!r})")
        n = int.from_bytes(fh.read(8), "little")
        header = json.loads(fh.read(n).decode("utf-8"))
        if header.get("version") != FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported checkpoint version {header.get('version')}")
        payload = np.frombuffer(fh.read(), dtype="<f8")

    params = {}
    adam_m, adam_v = {}, {}
    for e in header["entries"]:
        arr = payload[e["offset"]:e["offset"] + e["count"]].reshape(e["shape"]).copy()
        if e["kind"] == "param":
            params[e["name"]] = Tensor(arr, requires_grad=True, name=e["name"])
        elif e["kind"] == "adam_m":
            adam_m[e["name"]] = arr
        elif e["kind"] == "adam_v":
            adam_v[e["name"]] = arr

    adam = None
    if "adam" in header:
        spec = header["adam"]
        adam = AdamState(params, lr=spec["lr"], beta1=spec["beta1"],
                         beta2=spec["beta2"], eps=spec["eps"])
        adam.step = spec["step"]
        adam.m = adam_m
        adam.v = adam_v
    return params, adam, header.get("rng_state"), header.get("meta", {})
