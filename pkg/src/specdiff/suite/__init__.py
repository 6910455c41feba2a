"""Bundled case-study suites: signatures, references, and seeded bugs.

Each suite pairs a signature file with reference implementations known
to agree and a set of single-fault variants known to disagree.  Look
implementations up by name; every lookup returns a fresh instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Mapping

from ..interp import Implementation
from ..sigdsl import Signature, parse_signature
from . import bst_map, counter, finite_set


class UnknownNameError(ValueError):
    """A suite or implementation name that is not registered."""


@dataclass(frozen=True)
class SuiteEntry:
    name: str
    signature: Signature
    signature_text: str
    implementations: Mapping[str, type]
    bug_variants: Mapping[str, tuple[type, str]] = field(default_factory=dict)
    reference: str = ""


def load_signature_text(name: str) -> str:
    """Read a bundled .sig file by suite name."""
    return resources.files(__package__).joinpath(f"{name}.sig").read_text("utf-8")


_REGISTRY: dict[str, SuiteEntry] | None = None


def _build_registry() -> dict[str, SuiteEntry]:
    entries = {}

    text = load_signature_text("finite_set")
    entries["finite_set"] = SuiteEntry(
        name="finite_set",
        signature=parse_signature(text),
        signature_text=text,
        implementations={
            "listset": finite_set.ListSet,
            "bstset": finite_set.BSTSet,
        },
        bug_variants={
            "insert_dup": (
                finite_set.BSTSetDupInsert,
                "insert fails to deduplicate, so size inflates",
            ),
            "remove_left": (
                finite_set.BSTSetRemoveLeft,
                "remove deletes only from the left subtree",
            ),
            "mem_strict": (
                finite_set.BSTSetMemStrict,
                "mem uses strict inequality at the node key",
            ),
        },
        reference="listset",
    )

    text = load_signature_text("bst_map")
    entries["bst_map"] = SuiteEntry(
        name="bst_map",
        signature=parse_signature(text),
        signature_text=text,
        implementations={"correct": bst_map.BstMap},
        bug_variants={
            "b1": (bst_map.MapInsertSingleton, "insert returns a singleton, discarding the tree"),
            "b2": (bst_map.MapInsertWrongSubtree, "insert branches to the wrong subtree"),
            "b3": (bst_map.MapInsertNoOverwrite, "insert fails to overwrite an existing key"),
            "b4": (bst_map.MapDeleteReversed, "delete reverses the key comparison"),
            "b5": (bst_map.MapDeleteDropsSubtree, "delete drops the deleted node's subtree"),
            "b6": (bst_map.MapUnionRightBiased, "union is right-biased on duplicate keys"),
            "b7": (bst_map.MapFindOffByOne, "find compares off by one"),
            "b8": (bst_map.MapKeysPreorder, "keys lists the tree in pre-order"),
        },
        reference="correct",
    )

    text = load_signature_text("counter")
    entries["counter"] = SuiteEntry(
        name="counter",
        signature=parse_signature(text),
        signature_text=text,
        implementations={
            "int_counter": counter.IntCounter,
            "list_counter": counter.ListCounter,
        },
        bug_variants={
            "saturating": (counter.SaturatingCounter, "the count saturates at 10"),
        },
        reference="int_counter",
    )

    return entries


def list_suites() -> list[SuiteEntry]:
    """The bundled suites, in a stable order."""
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = _build_registry()
    return list(_REGISTRY.values())


def get_suite(name: str) -> SuiteEntry:
    global _REGISTRY
    if _REGISTRY is None:
        _REGISTRY = _build_registry()
    entry = _REGISTRY.get(name)
    if entry is None:
        known = ", ".join(sorted(_REGISTRY))
        raise UnknownNameError(f"unknown suite {name!r} (available: {known})")
    return entry


def get_implementation(suite: str, impl: str) -> Implementation:
    """A fresh, reset instance of a named implementation or bug variant."""
    entry = get_suite(suite)
    cls = entry.implementations.get(impl)
    if cls is None and impl in entry.bug_variants:
        cls = entry.bug_variants[impl][0]
    if cls is None:
        known = ", ".join(sorted([*entry.implementations, *entry.bug_variants]))
        raise UnknownNameError(
            f"unknown implementation {impl!r} for suite {suite!r} (available: {known})"
        )
    instance = cls()
    instance.reset()
    return instance
