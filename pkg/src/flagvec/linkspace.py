"""Link-space keys, the relation generation budget, and the link-space store.

The store memoizes every quotient in memory and, when a cache directory is
configured, publishes each one to disk exactly once (write to a temporary
file, then atomic rename).
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .algebra import QuotientSpace, quotient_from_json, quotient_to_json
from .errors import InputError, InvariantError

FORMAT_VERSION = 1
GRAPH_ENUMERATION_LIMIT = 65536
CACHE_ENV = "FLAGVEC_CACHE_DIR"
DEFAULT_CACHE_DIR = ".flagvec-cache"

KINDS = ("igraph", "oriented", "boundary", "relation")


@dataclass(frozen=True, order=True)
class LinkSpaceKey:
    """Identifies one link space.

    ``i`` is the cell size (the arity ``n`` for relations), ``m`` the vertex
    count, ``depth`` the label length for boundary graphs or the placeholder
    depth for relations.
    """

    kind: str
    i: int
    m: int
    depth: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unknown link-space kind {self.kind!r}")
        if self.i < 0 or self.m < 0 or self.depth < 0:
            raise InputError(f"negative parameter in {self}")

    @property
    def slug(self) -> str:
        if self.kind == "relation":
            return f"relation-n{self.i}-d{self.depth}-m{self.m}"
        if self.kind == "boundary":
            return f"boundary-i{self.i}-m{self.m}-d{self.depth}"
        return f"{self.kind}-i{self.i}-m{self.m}"

    @property
    def tag(self) -> str:
        """Kind token used inside generic coordinate names."""
        if self.kind == "boundary":
            return f"boundary{self.depth}"
        if self.kind == "relation":
            return f"relation{self.i}"
        return self.kind

    def coordinate_name(self, k: int) -> str:
        if self.kind == "relation":
            return f"q:{self.tag}:{self.depth}:{self.m}:{k}"
        return f"q:{self.tag}:{self.i}:{self.m}:{k}"


@dataclass(frozen=True)
class RelationBudget:
    """Generation budget for relation link spaces.

    Family relations are taken in order of tuple count, then canonical
    digest; generation stops after ``max_relations`` relations, or earlier
    once ``window`` consecutive relations added no new generator rank.
    """

    max_relations: int = 12
    window: int = 6

    @property
    def tag(self) -> str:
        return f"b{self.max_relations}w{self.window}"


_BUILDERS: dict = {}


def register_builder(kind: str):
    def deco(fn):
        _BUILDERS[kind] = fn
        return fn

    return deco


class LinkSpaceStore:
    def __init__(self, cache_dir=None, budget: RelationBudget | None = None):
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.budget = budget or RelationBudget()
        self._spaces: dict = {}
        self.memo: dict = {}

    def cache_name(self, key: LinkSpaceKey) -> str:
        name = f"{key.slug}-v{FORMAT_VERSION}"
        if key.kind == "relation":
            name += f"-{self.budget.tag}"
        return name + ".json"

    def get(self, key: LinkSpaceKey) -> QuotientSpace:
        space = self._spaces.get(key)
        if space is not None:
            return space
        space = self._load(key)
        if space is None:
            builder = _BUILDERS.get(key.kind)
            if builder is None:
                raise InputError(f"no link-space builder registered for {key.kind!r}")
            space = builder(key, self)
            self._publish(key, space)
        self._spaces[key] = space
        return space

    def _load(self, key):
        if self.cache_dir is None:
            return None
        path = self.cache_dir / self.cache_name(key)
        if not path.exists():
            return None
        try:
            with open(path, encoding="ascii") as fh:
                data = json.load(fh)
            ok = data["key"] == key.slug and data["format_version"] == FORMAT_VERSION
            quotient = data["quotient"]
        except (ValueError, KeyError, TypeError) as exc:
            raise InvariantError(f"cache entry {path} is unreadable: {exc}") from exc
        if not ok:
            raise InvariantError(f"cache entry {path} does not match key {key.slug}")
        return quotient_from_json(quotient)

    def _publish(self, key, space):
        if self.cache_dir is None:
            return
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        path = self.cache_dir / self.cache_name(key)
        if path.exists():
            return
        payload = {
            "key": key.slug,
            "format_version": FORMAT_VERSION,
            "budget": self.budget.tag if key.kind == "relation" else None,
            "quotient": quotient_to_json(space),
        }
        fd, tmp = tempfile.mkstemp(dir=self.cache_dir, prefix=".tmp-", suffix=".json")
        with os.fdopen(fd, "w", encoding="ascii") as fh:
            json.dump(payload, fh, sort_keys=True, indent=1)
        os.replace(tmp, path)


_store = LinkSpaceStore()


def get_store() -> LinkSpaceStore:
    return _store


def configure(cache_dir=None, budget: RelationBudget | None = None) -> LinkSpaceStore:
    """Install a fresh store; all memoized spaces and vectors are dropped."""
    global _store
    _store = LinkSpaceStore(cache_dir=cache_dir, budget=budget)
    return _store


def link_space(key: LinkSpaceKey) -> QuotientSpace:
    return _store.get(key)
