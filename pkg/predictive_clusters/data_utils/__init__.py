# Expose the dataset API from this module
from .dataset import (
    CsvParseError,
    Dataset,
    DatasetError,
    DatasetNotFoundError,
    EmptyDatasetError,
    NORMALIZATION_MODES,
    TargetNotFoundError,
    dataset_summary,
    load_csv,
    make_two_blobs,
    normalize,
    outcome_sd,
    write_csv,
)

__all__ = [
    'CsvParseError',
    'Dataset',
    'DatasetError',
    'DatasetNotFoundError',
    'EmptyDatasetError',
    'NORMALIZATION_MODES',
    'TargetNotFoundError',
    'dataset_summary',
    'load_csv',
    'make_two_blobs',
    'normalize',
    'outcome_sd',
    'write_csv',
]
