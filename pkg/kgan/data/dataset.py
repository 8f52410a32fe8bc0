import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Union

from kgan.errors import DatasetError
from kgan.prng import Xorshift64Star, derive_seed
from .images import ImagePair
from .pgm import load_pgm, save_pgm
from .phantom import generate_phantom_pair

logger = logging.getLogger(__name__)

DEFAULT_TRAIN_FRACTION = 2.0 / 3.0
MANIFEST_NAME = "manifest.csv"
MANIFEST_COLUMNS = ("pair_id", "seed", "split", "path_a", "path_b")
# stream tag for the split shuffle, outside the range of pair indices
SPLIT_STREAM = 1 << 40


@dataclass(frozen=True)
class DatasetSplit:
    train: List[ImagePair]
    test: List[ImagePair]

    def __post_init__(self) -> None:
        overlap = {pair.pair_id for pair in self.train} & {pair.pair_id for pair in self.test}
        if overlap:
            raise DatasetError(reason=f"pairs {sorted(overlap)} are both in train and test")

    def __len__(self) -> int:
        return len(self.train) + len(self.test)

    def pairs(self) -> List[ImagePair]:
        return sorted(self.train + self.test, key=lambda pair: pair.pair_id)


def make_split(
    n_pairs: int, size: int, master_seed: int, train_fraction: float = DEFAULT_TRAIN_FRACTION
) -> DatasetSplit:
    """
    Generates `n_pairs` phantoms and splits them into train and test sets.

    Pair i is rendered from seed derive_seed(master_seed, i); membership is the
    first round(n * train_fraction) entries of a seeded shuffle. Both lists keep
    pair id order.
    """
    if n_pairs < 3:
        raise DatasetError(reason=f"at least 3 pairs are needed, got {n_pairs}")
    if not 0.0 < train_fraction < 1.0:
        raise DatasetError(reason=f"train fraction must be in (0, 1), got {train_fraction}")
    n_train = round(n_pairs * train_fraction)
    if not 0 < n_train < n_pairs:
        raise DatasetError(reason=f"train fraction {train_fraction} leaves an empty side for {n_pairs} pairs")

    pairs = [generate_phantom_pair(derive_seed(master_seed, index), size, index) for index in range(n_pairs)]
    order = Xorshift64Star(derive_seed(master_seed, SPLIT_STREAM)).permutation(range(n_pairs))
    train_ids = set(order[:n_train])
    split = DatasetSplit(
        train=[pair for pair in pairs if pair.pair_id in train_ids],
        test=[pair for pair in pairs if pair.pair_id not in train_ids],
    )
    logger.debug("Generated %d phantom pairs of size %d: %d train / %d test", n_pairs, size, n_train, len(split.test))
    return split


def pair_paths(pair_id: int):
    return f"pairs/{pair_id:04d}_a.pgm", f"pairs/{pair_id:04d}_b.pgm"


def save_dataset(split: DatasetSplit, directory: Union[str, Path]) -> Path:
    """Writes every pair as two PGM files plus `manifest.csv`; returns the manifest path."""
    root = Path(directory)
    (root / "pairs").mkdir(parents=True, exist_ok=True)
    test_ids = {pair.pair_id for pair in split.test}

    manifest = root / MANIFEST_NAME
    with manifest.open("w", newline="") as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(MANIFEST_COLUMNS)
        for pair in split.pairs():
            path_a, path_b = pair_paths(pair.pair_id)
            save_pgm(pair.modality_a, root / path_a)
            save_pgm(pair.modality_b, root / path_b)
            writer.writerow([pair.pair_id, pair.seed, "test" if pair.pair_id in test_ids else "train", path_a, path_b])
    return manifest


def load_dataset(directory: Union[str, Path]) -> DatasetSplit:
    root = Path(directory)
    manifest = root / MANIFEST_NAME
    if not manifest.is_file():
        raise DatasetError(reason=f"manifest `{manifest}` does not exist")

    train: List[ImagePair] = []
    test: List[ImagePair] = []
    with manifest.open(newline="") as stream:
        reader = csv.DictReader(stream)
        if tuple(reader.fieldnames or ()) != MANIFEST_COLUMNS:
            raise DatasetError(reason=f"manifest columns must be {','.join(MANIFEST_COLUMNS)}")
        for row in reader:
            if row["split"] not in ("train", "test"):
                raise DatasetError(reason=f"unknown split `{row['split']}` for pair {row['pair_id']}")
            pair = ImagePair(
                modality_a=load_pgm(root / row["path_a"]),
                modality_b=load_pgm(root / row["path_b"]),
                pair_id=int(row["pair_id"]),
                seed=int(row["seed"]),
            )
            (train if row["split"] == "train" else test).append(pair)
    return DatasetSplit(train, test)


def check_pairs(pairs: Sequence[ImagePair], size: int) -> None:
    if not pairs:
        raise DatasetError(reason="the image pair set is empty")
    for pair in pairs:
        if pair.modality_a.shape != (size, size):
            raise DatasetError(reason=f"pair {pair.pair_id} is {list(pair.modality_a.shape)}, expected {size}x{size}")


__all__ = [
    "DEFAULT_TRAIN_FRACTION",
    "MANIFEST_NAME",
    "MANIFEST_COLUMNS",
    "DatasetSplit",
    "make_split",
    "save_dataset",
    "load_dataset",
    "pair_paths",
    "check_pairs",
]
