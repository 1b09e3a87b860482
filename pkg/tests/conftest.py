from hypothesis import settings
import pytest

from arcsine.dsl import builtin_corpus

# exact arithmetic on growing integers has no useful per-example deadline
settings.register_profile("arcsine", max_examples=100, deadline=None)
settings.load_profile("arcsine")


@pytest.fixture(scope="session")
def corpus():
    return builtin_corpus()


@pytest.fixture
def identity_file(tmp_path):
    def write(text: str) -> str:
        path = tmp_path / "identities.txt"
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write
