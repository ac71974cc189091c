"""The bundled fixture corpus."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from pathlib import Path

from .fileformat import load
from .poset import SimplicialPoset

FIXTURE_DIR = Path(str(resources.files("sposet") / "fixtures"))


def names() -> list[str]:
    return sorted(p.stem for p in FIXTURE_DIR.glob("*.json"))


@lru_cache(maxsize=None)
def get(name: str) -> SimplicialPoset:
    path = FIXTURE_DIR / f"{name}.json"
    if not path.exists():
        raise KeyError(f"no bundled fixture {name!r}; choose from {', '.join(names())}")
    return load(path)


def small(max_faces: int = 12, max_vertices: int = 4) -> list[str]:
    """Fixtures with at most ``max_faces`` non-bottom elements and ``max_vertices`` vertices."""
    return [n for n in names() if len(get(n)) - 1 <= max_faces and get(n).n_vertices <= max_vertices]
