import shutil

import pytest

from ballquot import data


@pytest.fixture
def data_copy(tmp_path):
    """A writable copy of the shipped data directory."""
    dst = tmp_path / "data"
    shutil.copytree(data.data_dir(), dst)
    return dst
