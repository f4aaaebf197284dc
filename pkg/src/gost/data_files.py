"""Locations of the data files shipped with the package."""

from importlib import resources
from pathlib import Path

LEXICON_LANGS = ("en", "fr", "el")


def _data_dir() -> Path:
    return Path(str(resources.files("gost").joinpath("data")))


def default_lexicon_paths() -> list[Path]:
    return [_data_dir() / f"lexicon_{lang}.tsv" for lang in LEXICON_LANGS]


def pronoun_tables_path() -> Path:
    return _data_dir() / "pronouns.json"


def isco08_csv_path() -> Path:
    return _data_dir() / "isco08.csv"
