"""Bundled empirical networks (see ``data/README.md`` for provenance)."""

from __future__ import annotations

from importlib import resources

from .graph import Graph, load_edge_list


class MissingDatasetError(FileNotFoundError):
    """A referenced bundled dataset is not present in this installation."""


def _load_bundled(name: str) -> Graph:
    ref = resources.files("seedpol.data").joinpath(name)
    if not ref.is_file():
        raise MissingDatasetError(
            f"dataset file {name!r} is not bundled with this installation. "
            "See seedpol/data/README.md for provenance requirements and how "
            "to supply the file."
        )
    with ref.open("r") as fh:
        return load_edge_list(fh)


def karate_graph() -> Graph:
    """Zachary karate club network: 34 nodes, 78 edges."""
    return _load_bundled("karate.txt")


def dolphins_graph() -> Graph:
    """Doubtful Sound dolphin social network (62 nodes, 159 edges).

    Raises :class:`MissingDatasetError` unless ``data/dolphins.txt`` has been
    provided; the canonical file is not redistributed with the package.
    """
    return _load_bundled("dolphins.txt")


DATASETS = {"karate": karate_graph, "dolphins": dolphins_graph}


def by_name(name: str) -> Graph:
    try:
        loader = DATASETS[name]
    except KeyError:
        raise KeyError(
            f"unknown dataset {name!r}; available: {sorted(DATASETS)}"
        ) from None
    return loader()
