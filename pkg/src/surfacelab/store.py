"""Content-addressed result cache and run manifests.

Entries live under <root>/<kind>/<hash>.bin with a JSON sidecar holding
the key, version tag and sha256 checksum of the payload.  A checksum
mismatch is treated as a miss: the entry is recomputed and rewritten.
"""
from __future__ import annotations

import hashlib
import io
import json
import logging
import os
import platform
import sys
import time
from dataclasses import asdict, dataclass, field, is_dataclass
from pathlib import Path

import numpy as np

from . import __version__

log = logging.getLogger(__name__)

CACHE_ENV = "SURFACELAB_CACHE"
CACHE_VERSION = 1
KINDS = ("ball", "character-slice", "hom-samples", "phi", "projector")


def version_tag() -> str:
    return f"{__version__}+c{CACHE_VERSION}"


def default_root() -> Path:
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else Path.home() / ".cache" / "surfacelab"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)


def key_hash(kind: str, key: dict, version: str) -> str:
    return hashlib.sha256(canonical_json({"kind": kind, "key": key, "version": version}).encode()).hexdigest()


@dataclass
class CacheEntry:
    kind: str
    key: dict
    hash: str
    version: str
    path: str
    checksum: str


class CorruptEntry(RuntimeError):
    pass


class Store:
    def __init__(self, root: str | Path | None = None, version: str | None = None):
        self.root = Path(root) if root is not None else default_root()
        self.version = version or version_tag()
        self.consumed: list[CacheEntry] = []

    def _paths(self, kind: str, key: dict):
        if kind not in KINDS:
            raise ValueError(f"unknown cache kind {kind!r}")
        h = key_hash(kind, key, self.version)
        d = self.root / kind
        return h, d / f"{h}.bin", d / f"{h}.json"

    def put(self, kind: str, key: dict, payload: bytes) -> CacheEntry:
        h, data, meta = self._paths(kind, key)
        data.parent.mkdir(parents=True, exist_ok=True)
        tmp = data.with_suffix(".tmp")
        tmp.write_bytes(payload)
        tmp.replace(data)
        entry = CacheEntry(kind, key, h, self.version, str(data), hashlib.sha256(payload).hexdigest())
        meta.write_text(canonical_json(asdict(entry)))
        return entry

    def get(self, kind: str, key: dict) -> bytes | None:
        """Payload bytes, or None when absent.  Raises CorruptEntry on checksum mismatch."""
        h, data, meta = self._paths(kind, key)
        if not data.exists() or not meta.exists():
            return None
        info = json.loads(meta.read_text())
        payload = data.read_bytes()
        if hashlib.sha256(payload).hexdigest() != info.get("checksum") or info.get("version") != self.version:
            raise CorruptEntry(f"{kind} entry {h[:12]} failed verification")
        self.consumed.append(CacheEntry(**info))
        return payload

    def cached(self, kind: str, key: dict, compute, encode, decode):
        """decode(get) when valid, else compute, store and return."""
        try:
            raw = self.get(kind, key)
        except CorruptEntry as e:
            log.warning("%s; recomputing", e)
            raw = None
        if raw is not None:
            return decode(raw)
        value = compute()
        entry = self.put(kind, key, encode(value))
        self.consumed.append(entry)
        return value


# --- codecs for the cached kinds ---

def encode_json(obj) -> bytes:
    return canonical_json(obj).encode()


def decode_json(raw: bytes):
    return json.loads(raw.decode())


def encode_array(a: np.ndarray) -> bytes:
    buf = io.BytesIO()
    np.save(buf, a, allow_pickle=False)
    return buf.getvalue()


def decode_array(raw: bytes) -> np.ndarray:
    return np.load(io.BytesIO(raw), allow_pickle=False)


def ball_layers(store: Store, genus: int, radius: int) -> list[list[list[int]]]:
    from .words import shared_ball

    def compute():
        ball = shared_ball(genus)
        ball.extend_to(radius)
        return [[list(u) for u in layer] for layer in ball.layers[:radius + 1]]

    return store.cached("ball", {"genus": genus, "radius": radius}, compute, encode_json, decode_json)


def character_slice(store: Store, lam, n: int) -> dict:
    """Character values of lam |- n on every class."""
    from .symmetric import character_table

    def compute():
        T = character_table(n)
        row = T.index[tuple(lam)]
        return {"lam": list(lam), "n": n, "classes": [list(c) for c in T.parts],
                "chi": [int(v) for v in T.chi[row]]}

    return store.cached("character-slice", {"lam": list(lam), "n": n}, compute, encode_json, decode_json)


def hom_samples(store: Store, n: int, count: int, seed: int) -> np.ndarray:
    from .homs import RNG_NAME, sample_homs
    key = {"n": n, "count": count, "seed": seed, "rng": RNG_NAME}
    return store.cached("hom-samples", key, lambda: sample_homs(n, count, seed), encode_array, decode_array)


def phi_ratfn(store: Store, word: str, genus: int, B: int):
    from .expansion import phi_gamma
    from .ratfn import RationalFn
    from .words import parse_word
    key = {"word": word, "genus": genus, "B": B}
    return store.cached("phi", key, lambda: phi_gamma(parse_word(word, genus), B),
                        lambda r: encode_json(r.to_json()), lambda raw: RationalFn.from_json(decode_json(raw)))


def projector(store: Store, lam, n: int):
    from .sn_calculus import CassidyProjector, cassidy_projector

    def enc(p):
        return encode_json({"lam": list(p.lam), "n": p.n, "denom": p.denom, "numer": p.numer.tolist()})

    def dec(raw):
        d = decode_json(raw)
        return CassidyProjector(tuple(d["lam"]), d["n"], np.array(d["numer"], dtype=np.int64), d["denom"])

    return store.cached("projector", {"lam": list(lam), "n": n}, lambda: cassidy_projector(lam, n), enc, dec)


# --- manifests ---

def _jsonable(obj):
    if is_dataclass(obj):
        return asdict(obj)
    return obj


def write_manifest(out_dir: str | Path, command: str, config, artifacts: list[str], store: Store | None,
                   status: str, started: float, extra: dict | None = None) -> Path:
    from .homs import RNG_NAME
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    man = {
        "command": command,
        "status": status,
        "config": _jsonable(config),
        "version": __version__,
        "rng": RNG_NAME,
        "python": sys.version.split()[0],
        "platform": platform.platform(),
        "elapsed_s": round(time.time() - started, 3),
        "artifacts": sorted(artifacts),
        "cache": [{"kind": e.kind, "hash": e.hash, "version": e.version, "checksum": e.checksum}
                  for e in (store.consumed if store else [])],
    }
    if extra:
        man.update(extra)
    path = out / f"manifest-{command.replace(' ', '-')}.json"
    path.write_text(json.dumps(man, indent=2, sort_keys=True, default=str) + "\n")
    return path
