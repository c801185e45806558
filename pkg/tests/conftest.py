from __future__ import annotations

import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
CONTRACTS = REPO_ROOT / "contracts"

sys.path.insert(0, str(Path(__file__).resolve().parent))


@pytest.fixture(scope="session")
def sales_contract_text() -> str:
    return (CONTRACTS / "sales-contract.rcl").read_text()


@pytest.fixture(scope="session")
def amended_contract_text() -> str:
    return (CONTRACTS / "sales-contract-amended.rcl").read_text()


@pytest.fixture(scope="session")
def simple_example_text() -> str:
    return (CONTRACTS / "simple-example.rcl").read_text()
