from typing import Iterable

import pytest

from algebra.auslander import build_algebra, build_ext_bimodule
from algebra.lattice import support_labels
from commands.lattice import LatticeRun, run_pipeline
from config.settings import CATEGORIES_DIR, ENUMERATION_BUDGET, NODE_BUDGET
from utils.category_io import load_category, type_a_category_file


def find_node(run: LatticeRun, labels: Iterable[str]) -> int:
    """Index of the node whose coordinate support is exactly `labels`"""
    wanted = set(labels)
    for idx in range(run.lattice.size):
        if set(support_labels(run.lattice.node(idx), run.labels)) == wanted:
            return idx
    raise AssertionError(f"No node with support {sorted(wanted)}")


@pytest.fixture(scope="session")
def categories_dir():
    return CATEGORIES_DIR


@pytest.fixture(scope="session")
def a3_category():
    return load_category(CATEGORIES_DIR / "a3_rr.json")


@pytest.fixture(scope="session")
def a3_bimodule(a3_category):
    return build_ext_bimodule(build_algebra(a3_category.indecs))


@pytest.fixture(scope="session")
def a3_run(a3_category):
    return run_pipeline(a3_category, ENUMERATION_BUDGET, NODE_BUDGET, oracles=True)


@pytest.fixture(scope="session")
def a3_rl_run():
    return run_pipeline(load_category(CATEGORIES_DIR / "a3_rl.json"), ENUMERATION_BUDGET, NODE_BUDGET, oracles=True)


@pytest.fixture(scope="session")
def a3_lr_run():
    return run_pipeline(load_category(CATEGORIES_DIR / "a3_lr.json"), ENUMERATION_BUDGET, NODE_BUDGET, oracles=True)


@pytest.fixture(scope="session")
def a2_run():
    return run_pipeline(load_category(CATEGORIES_DIR / "a2.json"), ENUMERATION_BUDGET, NODE_BUDGET, oracles=True)


@pytest.fixture(scope="session")
def a4_run():
    return run_pipeline(load_category(CATEGORIES_DIR / "a4_rrr.json"), ENUMERATION_BUDGET, NODE_BUDGET, oracles=False)


@pytest.fixture(scope="session")
def a3_p3_run():
    return run_pipeline(type_a_category_file(3, "RR", 3), ENUMERATION_BUDGET, NODE_BUDGET, oracles=True)
