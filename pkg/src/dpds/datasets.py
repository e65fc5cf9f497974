"""Dataset acquisition: generator specs, download, cache, normalization.

Generator specs are compact strings, e.g. ``er:100:0.1:seed=7`` or
``planted:1000:20:0.05:seed=1``.  Fetched files are normalized to the
canonical edge-list format (dense ids, header line) and cached under
$DPDS_CACHE (default ~/.cache/dpds).
"""

from __future__ import annotations

import gzip
import os
import sys
import urllib.request
from pathlib import Path
from typing import Optional, Tuple

from .graph import Graph, generate_er, generate_planted, parse_edge_list, serialize_edge_list

CACHE_ENV = "DPDS_CACHE"

# name -> (download url, expected node count, expected edge count)
KNOWN_DATASETS = {
    "ca-GrQc": ("https://snap.stanford.edu/data/ca-GrQc.txt.gz", 5242, 14496),
    "ca-HepTh": ("https://snap.stanford.edu/data/ca-HepTh.txt.gz", 9877, 25998),
    "ca-HepPh": ("https://snap.stanford.edu/data/ca-HepPh.txt.gz", 12008, 118521),
    "ca-AstroPh": ("https://snap.stanford.edu/data/ca-AstroPh.txt.gz", 18772, 198110),
    "ca-CondMat": ("https://snap.stanford.edu/data/ca-CondMat.txt.gz", 23133, 93497),
    "email-Enron": ("https://snap.stanford.edu/data/email-Enron.txt.gz", 36692, 183831),
}


def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "dpds"


def is_generator_spec(spec: str) -> bool:
    return spec.split(":", 1)[0] in ("er", "planted")


def graph_from_spec(spec: str) -> Graph:
    """Build a graph from a generator spec string.

    Forms: ``er:<n>:<p>:seed=<s>`` and ``planted:<n>:<k>:<p>:seed=<s>``;
    the seed part is optional (default 0).
    """
    parts = spec.split(":")
    kind = parts[0]
    seed = 0
    if parts and parts[-1].startswith("seed="):
        seed = int(parts[-1][len("seed="):])
        parts = parts[:-1]
    try:
        if kind == "er":
            _, n, p = parts
            return generate_er(int(n), float(p), seed)
        if kind == "planted":
            _, n, k, p = parts
            return generate_planted(int(n), int(k), float(p), seed)
    except ValueError as exc:
        raise ValueError(f"bad generator spec {spec!r}: {exc}") from None
    raise ValueError(f"unknown generator kind {kind!r} in {spec!r}")


def load_graph(spec: str) -> Tuple[str, Graph]:
    """Resolve a dataset argument to (name, Graph).

    ``spec`` may be a generator spec, a file path, or a known dataset name
    already present in the cache.
    """
    if is_generator_spec(spec):
        return spec, graph_from_spec(spec)
    path = Path(spec)
    if path.exists():
        with open(path, "r", encoding="utf-8") as fh:
            return path.stem, parse_edge_list(fh)
    cached = cache_dir() / f"{spec}.txt"
    if cached.exists():
        with open(cached, "r", encoding="utf-8") as fh:
            return spec, parse_edge_list(fh)
    raise FileNotFoundError(
        f"dataset {spec!r} is neither a generator spec, an existing file, "
        f"nor a cached dataset (cache: {cache_dir()})"
    )


def fetch_dataset(
    name: str,
    url: Optional[str] = None,
    expect: Optional[Tuple[int, int]] = None,
    cache: Optional[Path] = None,
    force: bool = False,
) -> Tuple[Path, Graph]:
    """Download, normalize, and cache an edge-list dataset.

    Args:
        name: dataset name; known names resolve their URL and expected
            counts automatically.
        url: explicit download URL (``file://`` works too).
        expect: (nodes, edges) to verify after normalization; a mismatch is
            reported as a warning, not an error.
        cache: cache directory override.
        force: re-download even if the cached file exists.

    Returns:
        (path to the cached canonical edge list, parsed Graph).
    """
    known = KNOWN_DATASETS.get(name)
    if url is None:
        if known is None:
            raise ValueError(
                f"no known URL for dataset {name!r}; pass one explicitly"
            )
        url = known[0]
    if expect is None and known is not None:
        expect = (known[1], known[2])
    directory = Path(cache) if cache is not None else cache_dir()
    directory.mkdir(parents=True, exist_ok=True)
    target = directory / f"{name}.txt"
    if target.exists() and not force:
        with open(target, "r", encoding="utf-8") as fh:
            return target, parse_edge_list(fh)
    with urllib.request.urlopen(url) as resp:
        payload = resp.read()
    if url.endswith(".gz") or payload[:2] == b"\x1f\x8b":
        payload = gzip.decompress(payload)
    graph = parse_edge_list(payload.decode("utf-8"))
    if expect is not None and (graph.n, graph.m) != tuple(expect):
        print(
            f"warning: {name}: got n={graph.n}, m={graph.m}, "
            f"expected n={expect[0]}, m={expect[1]}",
            file=sys.stderr,
        )
    target.write_text(serialize_edge_list(graph), encoding="utf-8")
    return target, graph
