import os
from collections.abc import Iterator
from pathlib import Path

import hypothesis
import pytest

from dnfblock.constants import GraphFormat
from dnfblock.core.graph import DataGraph, load_graph

from .helpers import build_graph

hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.register_profile("ci", deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))

FIGURE1_TRIPLES = """\
# Actors, a director and a movie
John_Doe type Actor .
John_Doe type Guitarist .
John_Doe bornOn "03-01-1980" .
John_Doe actedIn Jurassic_Park_4 .
John_Doe marriedTo Christine_Doe .
Jane_Doe type Director .
Jane_Doe type Guitarist .
Jane_Doe bornOn "12-05-1980" .
Jane_Doe directed Jurassic_Park_4 .
Christine_Doe type Person .
Jurassic_Park_4 type Movie .
"""


@pytest.fixture
def figure1_path(tmp_path: Path) -> Path:
    path = tmp_path / "figure1.nt"
    path.write_text(FIGURE1_TRIPLES, "utf-8")
    return path


@pytest.fixture
def figure1(figure1_path: Path) -> DataGraph:
    return load_graph(figure1_path, GraphFormat.TRIPLES)


@pytest.fixture
def people() -> tuple[DataGraph, DataGraph]:
    """Two small graphs of people with names and birth dates; a_i corresponds to b_i for i < 4."""
    g1 = build_graph(
        {
            "a0": ("", ("Actor",)),
            "a1": ("", ("Actor",)),
            "a2": ("", ("Guitarist",)),
            "a3": ("", ("Guitarist",)),
            "a4": ("", ("Actor",)),
            "a0/name": ("Anna Berg", ()),
            "a1/name": ("Carl Dunn", ()),
            "a2/name": ("Eva Falk", ()),
            "a3/name": ("Gus Hale", ()),
            "a4/name": ("Ivy Jones", ()),
            "a0/born": ("01-02-1970", ()),
            "a1/born": ("03-04-1971", ()),
            "a2/born": ("05-06-1972", ()),
            "a3/born": ("07-08-1973", ()),
            "a4/born": ("09-10-1974", ()),
        },
        [(f"a{i}", "name", f"a{i}/name") for i in range(5)] + [(f"a{i}", "bornOn", f"a{i}/born") for i in range(5)],
    )
    g2 = build_graph(
        {
            "b0": ("", ("Director",)),
            "b1": ("", ("Director",)),
            "b2": ("", ("Guitarist",)),
            "b3": ("", ("Guitarist",)),
            "b4": ("", ("Director",)),
            "b0/name": ("Anna Berg", ()),
            "b1/name": ("Carl Dunn", ()),
            "b2/name": ("Eva Falk", ()),
            "b3/name": ("Gus Hale", ()),
            "b4/name": ("Kim Lund", ()),
            "b0/born": ("01-02-1970", ()),
            "b1/born": ("03-04-1971", ()),
            "b2/born": ("05-06-1972", ()),
            "b3/born": ("07-08-1973", ()),
            "b4/born": ("11-12-1975", ()),
        },
        [(f"b{i}", "name", f"b{i}/name") for i in range(5)] + [(f"b{i}", "birthDate", f"b{i}/born") for i in range(5)],
    )
    return g1, g2



@pytest.fixture
def project_dir(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Iterator[Path]:
    """Empty working directory with no ``DNFBLOCK_*`` variables; settings re-read from it."""
    from dnfblock.management.conf import PROJECT_CONF

    for name in list(os.environ):
        if name.startswith("DNFBLOCK_"):
            monkeypatch.delenv(name)
    directory = tmp_path / "project"
    directory.mkdir()
    monkeypatch.chdir(directory)
    PROJECT_CONF.reload(directory)
    yield directory
    PROJECT_CONF.reload()
