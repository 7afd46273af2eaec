import os

import numpy as np
import pytest

# shared pinned vectors live in the simulator's test data; both
# packages check the same files so the duplicated stencil cannot drift
DATA = os.path.abspath(
    os.path.join(os.path.dirname(__file__), os.pardir, os.pardir,
                 "tests", "data")
)


def write_snapshot_text(path, values, L, t) -> None:
    values = np.asarray(values, dtype=np.float64)
    with open(path, "w") as fh:
        fh.write(f"ssfield v1 m={values.shape[0]} L={L!r} t={t!r}\n")
        for row in values:
            fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")


@pytest.fixture
def snapshot_writer():
    return write_snapshot_text


@pytest.fixture
def records_csv(tmp_path):
    """Exact power laws: roughness = 2 t^(1/3), F_h = 5 t^(-1/3) - 3."""
    t = np.linspace(0.5, 60.0, 120)
    rough = 2.0 * t ** (1.0 / 3.0)
    f_h = 5.0 * t ** (-1.0 / 3.0) - 3.0
    path = tmp_path / "records.csv"
    lines = [
        "# synthetic records for plot tests",
        "t,F_h,F_tilde,mass,roughness,iters,wall_ms",
    ]
    for tk, fk, rk in zip(t.tolist(), f_h.tolist(), rough.tolist()):
        lines.append(f"{tk!r},{fk!r},{fk!r},0.0,{rk!r},3,1.0")
    path.write_text("\n".join(lines) + "\n")
    return str(path)


@pytest.fixture
def pinned_snapshot():
    path = os.path.join(DATA, "pinned_snapshot.dat")
    assert os.path.isfile(path), "shared pinned snapshot missing"
    return path


@pytest.fixture
def pinned_laplacian():
    path = os.path.join(DATA, "pinned_laplacian.dat")
    assert os.path.isfile(path), "shared pinned laplacian missing"
    return path
