import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pscale.workload import LayerShape, Workload

ONE_LAYER_CSV = Path(__file__).parent / "one_layer.csv"


@pytest.fixture
def one_layer_csv():
    return ONE_LAYER_CSV


@pytest.fixture
def tiny_workload():
    return Workload(
        "tiny",
        (
            LayerShape("c1", 6, 6, 3, 3, 2, 8, 1, 1),
            LayerShape("c2", 6, 6, 1, 1, 8, 12, 2, 0),
            LayerShape("fc", 1, 1, 1, 1, 27, 10, 1, 0),
        ),
    )


@pytest.fixture
def tiny_csv(tmp_path, tiny_workload):
    from pscale.workload import serialize_layer_csv

    path = tmp_path / "tiny.csv"
    path.write_text(serialize_layer_csv(tiny_workload))
    return path
