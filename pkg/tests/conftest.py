import pytest

from dmkit import synthesize_tree, validate_tree

# The bundled 7-layer table (m=8, m_sb=4): 507 -> 640 bits, 320 PAM symbols.
SEVEN_LAYER_ROWS = [
    {"l": 7, "T": 1, "s": 5, "v": 5, "u": 12},
    {"l": 6, "t": 2, "T": 2, "r": 6, "s": 5, "v": 11, "u": 12},
    {"l": 5, "t": 2, "T": 4, "r": 6, "s": 5, "v": 11, "u": 12},
    {"l": 4, "t": 2, "T": 8, "r": 6, "s": 5, "v": 11, "u": 12},
    {"l": 3, "t": 2, "T": 16, "r": 6, "s": 5, "v": 11, "u": 12},
    {"l": 2, "t": 2, "T": 32, "r": 6, "s": 5, "v": 11, "u": 12},
    {"l": 1, "t": 2, "T": 64, "r": 6, "s": 3, "v": 9, "u": 10},
]

# Small trees whose codebooks can be enumerated exhaustively.
TREE2_ROWS = [
    {"l": 2, "T": 1, "s": 2, "v": 2, "u": 4},
    {"l": 1, "t": 2, "r": 2, "s": 1, "v": 3, "u": 4},
]
TREE3_ROWS = [
    {"l": 3, "T": 1, "s": 2, "v": 2, "u": 4},
    {"l": 2, "t": 2, "r": 2, "s": 2, "v": 4, "u": 4},
    {"l": 1, "t": 2, "r": 2, "s": 1, "v": 3, "u": 4},
]

# One-LUT trees: a shaping one (v < u) and a keep-everything one (v = u).
SINGLE_ROWS = [{"l": 1, "T": 1, "s": 2, "v": 2, "u": 4}]
KEEPALL_ROWS = [{"l": 1, "T": 1, "s": 4, "v": 4, "u": 4}]


@pytest.fixture(scope="session")
def full_spec():
    return validate_tree(SEVEN_LAYER_ROWS, 8, 4)


@pytest.fixture(scope="session")
def full_lutset(full_spec):
    return synthesize_tree(full_spec)


@pytest.fixture(scope="session")
def tree2_lutset():
    return synthesize_tree(validate_tree(TREE2_ROWS, 8, 4))


@pytest.fixture(scope="session")
def tree3_lutset():
    return synthesize_tree(validate_tree(TREE3_ROWS, 8, 4))


@pytest.fixture(scope="session")
def keepall_lutset():
    return synthesize_tree(validate_tree(KEEPALL_ROWS, 8, 4))
