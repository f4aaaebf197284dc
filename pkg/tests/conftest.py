import pytest

from gost.data_files import default_lexicon_paths, isco08_csv_path
from gost.extract import CorpusDoc, build_gazetteer
from gost.genderid import load_gender_lexicon
from gost.graph import Graph
from gost.ingest import load_classification

from pathlib import Path

DATA = Path(__file__).parent / "data"

EXAMPLE1_TEXT = ("The doctor put the cast on my leg while talking to the nurses "
                 "about his new car.")


@pytest.fixture(scope="session")
def isco_graph():
    graph = Graph()
    load_classification(graph, isco08_csv_path())
    return graph


@pytest.fixture(scope="session")
def gazetteer(isco_graph):
    return build_gazetteer(isco_graph, default_lexicon_paths())


@pytest.fixture(scope="session")
def en_lexicon():
    return load_gender_lexicon("en")


@pytest.fixture(scope="session")
def el_lexicon():
    return load_gender_lexicon("el")


@pytest.fixture
def example1_doc():
    return CorpusDoc("ex1", "en", EXAMPLE1_TEXT)


@pytest.fixture
def doctor_graph():
    """Minimal 3-node hierarchy around medical doctors."""
    graph = Graph()
    graph.add_occupation("2", "Professionals", "Professionals apply concepts and theories.")
    graph.add_occupation("22", "Health Professionals", "Health professionals apply medicine.")
    graph.add_occupation("221", "Medical Doctors",
                         "Medical doctors diagnose and treat illness and injury.")
    return graph
