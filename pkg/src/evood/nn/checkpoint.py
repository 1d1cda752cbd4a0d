"""Model checkpoint container.

Layout (stable, versioned): a NumPy .npz archive holding
  - "__meta__": a 0-d unicode array with a JSON object
        {"format": "evood-checkpoint", "version": 1, "kind": "enn"|"msp",
         "arch": {...ArchSpec fields...}, "seed": int, ...extra keys...}
  - "param/<name>": one float64 array per model parameter.

Extra metadata commonly present: "class_names" (list of label strings)
and, for text models, "vocab" (id-ordered token list).
"""

import json
from pathlib import Path

import numpy as np

from ..errors import DataError
from .params import ArchSpec, ModelParams, validate_params
from .tensor import Tensor

FORMAT = "evood-checkpoint"
VERSION = 1


def save_checkpoint(path, kind: str, arch: ArchSpec, params: ModelParams, **extra) -> None:
    meta = {
        "format": FORMAT,
        "version": VERSION,
        "kind": kind,
        "arch": arch.to_dict(),
        "seed": params.seed,
        **extra,
    }
    arrays = {f"param/{name}": t.data for name, t in params.items()}
    arrays["__meta__"] = np.array(json.dumps(meta, sort_keys=True))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        np.savez(fh, **arrays)


def load_checkpoint(path):
    """Returns (kind, arch, params, meta)."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"checkpoint not found: {path}")
    with np.load(path, allow_pickle=False) as npz:
        if "__meta__" not in npz:
            raise DataError(f"{path} is not an evood checkpoint (no __meta__ entry)")
        meta = json.loads(str(npz["__meta__"]))
        if meta.get("format") != FORMAT:
            raise DataError(f"{path}: unexpected checkpoint format {meta.get('format')!r}")
        if meta.get("version") != VERSION:
            raise DataError(f"{path}: unsupported checkpoint version {meta.get('version')!r}")
        arch = ArchSpec.from_dict(meta["arch"])
        params = ModelParams(seed=meta.get("seed", 0))
        for key in npz.files:
            if key.startswith("param/"):
                params.register(key[len("param/"):], Tensor(npz[key]))
    validate_params(arch, params)
    return meta["kind"], arch, params, meta
