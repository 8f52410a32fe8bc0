from .dataset import (
    DEFAULT_TRAIN_FRACTION,
    MANIFEST_COLUMNS,
    MANIFEST_NAME,
    DatasetSplit,
    check_pairs,
    load_dataset,
    make_split,
    save_dataset,
)
from .images import ImageGray, ImagePair, stack
from .pgm import decode_pgm, encode_pgm, load_pgm, save_pgm
from .phantom import PHANTOM_SIZES, generate_phantom_pair
from .transforms import augment_flip, resize_nearest

__all__ = [
    "DEFAULT_TRAIN_FRACTION",
    "MANIFEST_COLUMNS",
    "MANIFEST_NAME",
    "PHANTOM_SIZES",
    "DatasetSplit",
    "ImageGray",
    "ImagePair",
    "augment_flip",
    "check_pairs",
    "decode_pgm",
    "encode_pgm",
    "generate_phantom_pair",
    "load_dataset",
    "load_pgm",
    "make_split",
    "resize_nearest",
    "save_dataset",
    "save_pgm",
    "stack",
]
