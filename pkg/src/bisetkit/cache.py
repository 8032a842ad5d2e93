"""On-disk pickle cache for per-group data.

Entries are addressed by the group's catalog spec (or, for anonymous groups,
a digest of its element list) together with the engine version.  Anything
unreadable or stale is ignored and recomputed.
"""

import hashlib
import logging
import os
import pickle
from pathlib import Path

from . import config

log = logging.getLogger(__name__)

ENV_VAR = "BISETKIT_CACHE_DIR"


def default_dir():
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "bisetkit"


def enable(path=None):
    config.CACHE_DIR = Path(path) if path else default_dir()


def disable():
    config.CACHE_DIR = None


def group_key(G):
    spec = getattr(G, "spec", None)
    if spec:
        ident = "spec:" + spec
    else:
        h = hashlib.sha256(repr(G.elements).encode()).hexdigest()
        ident = "elements:" + h
    return hashlib.sha256(f"{config.ENGINE_VERSION}|{ident}".encode()).hexdigest()[:32]


def _path(G, kind):
    return Path(config.CACHE_DIR) / f"{kind}-{group_key(G)}.pkl"


def load(G, kind):
    if config.CACHE_DIR is None:
        return None
    p = _path(G, kind)
    try:
        with open(p, "rb") as fh:
            payload = pickle.load(fh)
    except FileNotFoundError:
        return None
    except Exception as exc:  # corrupt entry: recompute
        log.warning("ignoring unreadable cache entry %s: %s", p, exc)
        return None
    if not isinstance(payload, dict) or payload.get("version") != config.ENGINE_VERSION \
            or payload.get("order") != G.order:
        return None
    config.STATS["cache_hits"] += 1
    return payload.get("data")


def store(G, kind, data):
    if config.CACHE_DIR is None:
        return
    p = _path(G, kind)
    try:
        p.parent.mkdir(parents=True, exist_ok=True)
        tmp = p.with_suffix(f".tmp{os.getpid()}")
        with open(tmp, "wb") as fh:
            pickle.dump({"version": config.ENGINE_VERSION, "order": G.order, "data": data}, fh)
        os.replace(tmp, p)
    except OSError as exc:
        log.warning("cache write failed for %s: %s", p, exc)


def load_lattice(G):
    return load(G, "lattice")


def store_lattice(G, lat):
    store(G, "lattice", lat)


def clear(path=None):
    root = Path(path) if path else (Path(config.CACHE_DIR) if config.CACHE_DIR else default_dir())
    n = 0
    if root.is_dir():
        for p in root.glob("*.pkl"):
            p.unlink()
            n += 1
    return n


def info(path=None):
    root = Path(path) if path else (Path(config.CACHE_DIR) if config.CACHE_DIR else default_dir())
    files = sorted(root.glob("*.pkl")) if root.is_dir() else []
    return {"directory": str(root), "entries": len(files),
            "bytes": sum(p.stat().st_size for p in files)}
