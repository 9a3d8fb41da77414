"""Hierarchical hiding-pattern catalog: queries, rendering and extension.

A catalog is an ordered forest of named nodes. Methods are classified by
stating the complete path from a root to the node that represents their
pattern; classification requires the path to end on a leaf. All values
are immutable; extension returns a new catalog.

Pattern names match byte-wise (case-sensitive, no normalization), may not
contain "/" (the textual path separator is " / ") and carry no leading or
trailing whitespace. Sibling order is author order and is preserved.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

PATH_SEPARATOR = " / "


class TaxonomyError(Exception):
    pass


class EmptyPathError(TaxonomyError):
    pass


class NotRenderableError(TaxonomyError):
    pass


class ParentNotFoundError(TaxonomyError):
    pass


class DuplicateChildError(TaxonomyError):
    pass


class InvalidNameError(TaxonomyError):
    pass


def _check_name(name: str) -> str:
    if not name:
        raise InvalidNameError("pattern name must be non-empty")
    if "/" in name:
        raise InvalidNameError(f"pattern name may not contain '/': {name!r}")
    if name != name.strip():
        raise InvalidNameError(f"pattern name has leading/trailing whitespace: {name!r}")
    return name


@dataclass(frozen=True)
class PatternNode:
    name: str
    children: tuple[PatternNode, ...] = ()

    def __post_init__(self) -> None:
        _check_name(self.name)
        seen = set()
        for child in self.children:
            if child.name in seen:
                raise DuplicateChildError(
                    f"duplicate child {child.name!r} under {self.name!r}"
                )
            seen.add(child.name)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def child(self, name: str) -> PatternNode | None:
        for node in self.children:
            if node.name == name:
                return node
        return None


@dataclass(frozen=True)
class PatternCatalog:
    roots: tuple[PatternNode, ...] = ()
    label: str | None = None

    def __post_init__(self) -> None:
        seen = set()
        for root in self.roots:
            if root.name in seen:
                raise DuplicateChildError(f"duplicate root {root.name!r}")
            seen.add(root.name)

    @property
    def is_empty(self) -> bool:
        return not self.roots

    def root(self, name: str) -> PatternNode | None:
        for node in self.roots:
            if node.name == name:
                return node
        return None


@dataclass(frozen=True)
class PatternPath:
    """A chain of node names from a root downward, or the unassigned marker.

    The unassigned marker encodes methods that cannot be tied to any
    pattern (for example carrier-independent key exchange schemes).
    """

    elements: tuple[str, ...] = ()
    unassigned: bool = False

    def __post_init__(self) -> None:
        if self.unassigned and self.elements:
            raise ValueError("an unassigned path carries no elements")
        for element in self.elements:
            _check_name(element)

    @classmethod
    def of(cls, *elements: str) -> PatternPath:
        return cls(elements=tuple(elements))

    @classmethod
    def from_text(cls, text: str) -> PatternPath:
        return cls(elements=tuple(text.split(PATH_SEPARATOR)))

    @property
    def text(self) -> str:
        if self.unassigned:
            return "unassigned"
        return PATH_SEPARATOR.join(self.elements)


UNASSIGNED = PatternPath(unassigned=True)


class ResolutionKind(Enum):
    LEAF = "leaf"
    INTERNAL = "internal"
    NOT_FOUND = "not-found"


@dataclass(frozen=True)
class Resolution:
    kind: ResolutionKind
    node: PatternNode | None = None
    # Index of the first element that fails to match, for NOT_FOUND.
    failed_index: int | None = None

    @property
    def is_leaf(self) -> bool:
        return self.kind is ResolutionKind.LEAF


def resolve_path(catalog: PatternCatalog, path: PatternPath) -> Resolution:
    """Walk ``path`` through ``catalog``.

    Returns a LEAF resolution when every element matches and the final
    node is childless, INTERNAL when the chain matches but the final node
    has children, and NOT_FOUND with the index of the first element that
    fails to match otherwise.
    """
    if path.unassigned or not path.elements:
        raise EmptyPathError("cannot resolve an empty or unassigned path")
    node = catalog.root(path.elements[0])
    if node is None:
        return Resolution(ResolutionKind.NOT_FOUND, failed_index=0)
    for index, name in enumerate(path.elements[1:], start=1):
        node = node.child(name)
        if node is None:
            return Resolution(ResolutionKind.NOT_FOUND, failed_index=index)
    kind = ResolutionKind.LEAF if node.is_leaf else ResolutionKind.INTERNAL
    return Resolution(kind, node=node)


def render_chain(path: PatternPath) -> str:
    """Render a path as the conventional root-to-leaf text block.

    Line 0 is the root name at column 0; line k is indented 4*(k-1)
    spaces followed by the four characters backquote-dash-dash-space and
    the element name. Lines are joined with a single newline and there is
    no trailing newline.
    """
    if path.unassigned or not path.elements:
        raise NotRenderableError("nothing to render for an empty or unassigned path")
    lines = [path.elements[0]]
    for depth, name in enumerate(path.elements[1:]):
        lines.append(" " * (4 * depth) + "`-- " + name)
    return "\n".join(lines)


def render_tree(catalog: PatternCatalog) -> str:
    """Render a whole catalog, siblings included.

    Non-last siblings are prefixed "|-- " and pass "|   " down to their
    descendants; last siblings are prefixed "`-- " and pass four spaces.
    Roots sit at column 0. A single-chain catalog renders identically to
    render_chain of that chain.
    """
    lines: list[str] = []

    def walk(node: PatternNode, continuation: str) -> None:
        for i, child in enumerate(node.children):
            last = i == len(node.children) - 1
            lines.append(continuation + ("`-- " if last else "|-- ") + child.name)
            walk(child, continuation + ("    " if last else "|   "))

    for root in catalog.roots:
        lines.append(root.name)
        walk(root, "")
    return "\n".join(lines)


def extend_catalog(catalog: PatternCatalog, parent: PatternPath, name: str) -> PatternCatalog:
    """Return a copy of ``catalog`` with a new childless node under ``parent``.

    The input catalog is left untouched. Raises ParentNotFoundError when
    the parent path does not resolve, DuplicateChildError when the parent
    already has a child of that name, InvalidNameError for a malformed
    name.
    """
    _check_name(name)
    resolution = resolve_path(catalog, parent)
    if resolution.kind is ResolutionKind.NOT_FOUND:
        raise ParentNotFoundError(f"parent path not in catalog: {parent.text}")

    def rebuild(node: PatternNode, remaining: tuple[str, ...]) -> PatternNode:
        if not remaining:
            if node.child(name) is not None:
                raise DuplicateChildError(
                    f"{node.name!r} already has a child named {name!r}"
                )
            return PatternNode(node.name, node.children + (PatternNode(name),))
        head, *tail = remaining
        children = tuple(
            rebuild(child, tuple(tail)) if child.name == head else child
            for child in node.children
        )
        return PatternNode(node.name, children)

    roots = tuple(
        rebuild(root, parent.elements[1:]) if root.name == parent.elements[0] else root
        for root in catalog.roots
    )
    return PatternCatalog(roots=roots, label=catalog.label)


def list_leaves(catalog: PatternCatalog) -> list[PatternPath]:
    """Every root-to-leaf path exactly once, in depth-first author order."""
    leaves: list[PatternPath] = []

    def walk(node: PatternNode, prefix: tuple[str, ...]) -> None:
        chain = prefix + (node.name,)
        if node.is_leaf:
            leaves.append(PatternPath(elements=chain))
            return
        for child in node.children:
            walk(child, chain)

    for root in catalog.roots:
        walk(root, ())
    return leaves


def iter_node_paths(catalog: PatternCatalog) -> list[PatternPath]:
    """Every root-to-node path (leaves and internals), depth-first."""
    paths: list[PatternPath] = []

    def walk(node: PatternNode, prefix: tuple[str, ...]) -> None:
        chain = prefix + (node.name,)
        paths.append(PatternPath(elements=chain))
        for child in node.children:
            walk(child, chain)

    for root in catalog.roots:
        walk(root, ())
    return paths


def _chain(*names: str) -> PatternNode:
    node = PatternNode(names[-1])
    for name in reversed(names[:-1]):
        node = PatternNode(name, (node,))
    return node


def seed_catalog() -> PatternCatalog:
    """The built-in starter catalog.

    It contains exactly the storage- and timing-channel chains that the
    worked example descriptions classify against; richer catalogs are
    loaded from user-supplied catalog files.
    """
    storage = PatternNode(
        "Network Covert Storage Channels",
        (
            PatternNode(
                "Modification of Non-Payload",
                (
                    _chain(
                        "Structure Preserving",
                        "Modification of an Attribute",
                        "Value Modulation",
                        "Least Significant Bit (LSB)",
                    ),
                    _chain(
                        "Structure Modifying",
                        "Sequence Pattern",
                        "Number of Elements Pattern",
                    ),
                ),
            ),
        ),
    )
    timing = PatternNode(
        "Network Covert Timing Channels",
        (PatternNode("Inter-arrival Time Pattern"),),
    )
    return PatternCatalog(roots=(storage, timing), label="seed")
