"""Standard tables shipped as plain-text data files.

Files hold one integer per line.  The directory can be overridden with the
``NRPOLAR_DATA_DIR`` environment variable; the bundled copies are pinned by
SHA-256 and a mismatch is only tolerated for overridden directories.
"""
import hashlib
import os
from functools import lru_cache
from pathlib import Path

ENV_VAR = "NRPOLAR_DATA_DIR"

SEQUENCE_FILE = "q_seq_1024.txt"
INPUT_INTERLEAVER_FILE = "pi_il_max.txt"
SUB_BLOCK_FILE = "sub_block_p.txt"

CHECKSUMS = {
    SEQUENCE_FILE: "b85b2c48ec9502276cf8e7e3a204a98e466f494e19a242252b22950e71a6cc15",
    INPUT_INTERLEAVER_FILE: "fa881b91b19d05c729122beaca85bfda71dce36877508c44e87066dcc8f24c35",
    SUB_BLOCK_FILE: "dc2a3bf44d1feb1e683aa05c19f45c13e87bec5cc99f4be9da66f24ec3199698",
}

BUNDLED_DIR = Path(__file__).resolve().parent / "data"


def data_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    return Path(override) if override else BUNDLED_DIR


def data_path(name: str) -> Path:
    return data_dir() / name


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def read_ints(path) -> list[int]:
    with open(path) as fh:
        return [int(line) for line in fh if line.strip()]


@lru_cache(maxsize=None)
def _load_cached(name: str, directory: str) -> tuple[int, ...]:
    path = Path(directory) / name
    if Path(directory) == BUNDLED_DIR and sha256(path) != CHECKSUMS[name]:
        raise RuntimeError(f"bundled data file {name} fails its checksum")
    return tuple(read_ints(path))


def load_table(name: str) -> tuple[int, ...]:
    return _load_cached(name, str(data_dir()))
