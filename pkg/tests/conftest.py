from __future__ import annotations

from pathlib import Path

import pytest

from nihdl import dsl, seed_catalog

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"
CORPUS_DIR = FIXTURES / "corpus"
SYNTHETIC_DIR = FIXTURES / "synthetic"
GAP_FILE = CORPUS_DIR / "descriptions" / "gap_channel.nihd"
DHCP_FILE = CORPUS_DIR / "descriptions" / "dhcp_options.nihd"
JOINT_FILE = FIXTURES / "joint_descriptions.nihd"
CATALOG_FILE = CORPUS_DIR / "catalog.nihc"


def parse_fixture(path: Path):
    doc, diags = dsl.parse_description(path.read_text(encoding="utf-8"), str(path))
    assert doc is not None, [d.render() for d in diags]
    return doc


@pytest.fixture(scope="session")
def catalog():
    return seed_catalog()


@pytest.fixture(scope="session")
def gap_doc():
    return parse_fixture(GAP_FILE)


@pytest.fixture(scope="session")
def gap_method(gap_doc):
    return gap_doc.methods[0]


@pytest.fixture(scope="session")
def dhcp_doc():
    return parse_fixture(DHCP_FILE)


@pytest.fixture(scope="session")
def dhcp_method(dhcp_doc):
    return dhcp_doc.methods[0]


@pytest.fixture(scope="session")
def joint_methods():
    return list(parse_fixture(JOINT_FILE).methods)
