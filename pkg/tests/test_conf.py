from pathlib import Path

import pytest

from dnfblock.management.commands.config import config_table
from dnfblock.management.conf import PROJECT_CONF, ConfField
from dnfblock.management.settings import CONF_FIELDS, EXTRACTORS, LEARNER, RUNTIME

PYPROJECT = """\
[project]
name = "linkage-study"
version = "0.1.0"

[tool.dnfblock.learner]
epsilon = 0.7
max-terms = 4

[tool.dnfblock.extractors]
feos = ["ExactLabel"]
"""


def test_defaults_without_pyproject(project_dir: Path) -> None:
    assert LEARNER.epsilon == 0.9
    assert RUNTIME.threads == 0
    assert RUNTIME.log_level == "WARNING"
    assert "TokenizeString" in EXTRACTORS.feos


def test_toml_overrides_defaults(project_dir: Path) -> None:
    (project_dir / "pyproject.toml").write_text(PYPROJECT, "utf-8")
    PROJECT_CONF.reload(project_dir)
    assert LEARNER.epsilon == 0.7
    assert LEARNER.max_terms == 4
    assert LEARNER.max_term_size == 2
    assert EXTRACTORS.feos == ["ExactLabel"]


def test_environment_overrides_toml(project_dir: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    (project_dir / "pyproject.toml").write_text(PYPROJECT, "utf-8")
    monkeypatch.setenv("DNFBLOCK_EPSILON", "0.8")
    monkeypatch.setenv("DNFBLOCK_FEOS", "ExactLabel, TokenizeString")
    PROJECT_CONF.reload(project_dir)
    assert LEARNER.epsilon == 0.8
    assert EXTRACTORS.feos == ["ExactLabel", "TokenizeString"]


def test_dotenv_file(project_dir: Path) -> None:
    (project_dir / ".env").write_text("DNFBLOCK_THREADS=3\n", "utf-8")
    PROJECT_CONF.reload(project_dir)
    assert RUNTIME.threads == 3


def test_invalid_values(project_dir: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("DNFBLOCK_THREADS", "many")
    monkeypatch.setenv("DNFBLOCK_LOG_LEVEL", "LOUD")
    PROJECT_CONF.reload(project_dir)
    with pytest.raises(ValueError, match="threads"):
        _ = RUNTIME.threads
    with pytest.raises(ValueError, match="DNFBLOCK_LOG_LEVEL"):
        _ = RUNTIME.log_level


@pytest.mark.parametrize(
    ("value", "target", "expected"),
    [
        (None, int, 0),
        (None, list, []),
        ("2", int, 2),
        ("0.25", float, 0.25),
        ("a, b", list, ["a", "b"]),
        (7, str, "7"),
    ],
)
def test_convert_value(value: object, target: type, expected: object) -> None:
    assert ConfField.convert_value(value, target) == expected


def test_every_field_is_registered() -> None:
    envs = {field["env"] for field in CONF_FIELDS}
    assert {"DNFBLOCK_EPSILON", "DNFBLOCK_PURGE_CAP", "DNFBLOCK_SIM_THRESHOLD", "DNFBLOCK_LOG_LEVEL"} <= envs
    sections = [field["class"] for field in CONF_FIELDS]
    assert sections == sorted(sections)


def test_config_table_shows_resolved_values(project_dir: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("DNFBLOCK_PURGE_CAP", "250")
    PROJECT_CONF.reload(project_dir)
    text = config_table()
    line = next(line for line in text.splitlines() if line.startswith("DNFBLOCK_PURGE_CAP"))
    assert "tool.dnfblock.executor.purge-cap" in line
    assert line.split()[-2:] == ["1000", "250"]
    assert "| DNFBLOCK_EPSILON |" in config_table(markdown=True)
