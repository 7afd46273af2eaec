"""Cross-package agreement with the simulator.

These tests import the simulator, which is always present in this
repository; they prove the two packages agree through the file
formats alone. The reverse dependency does not exist: the simulator
suite runs without this package installed.
"""

import os

import numpy as np

import ssfilm
from plotviz import laplacian_5pt, plot_loglog, read_snapshot


def _report(name, ok, detail):
    print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})",
          flush=True)
    return ok


def test_loglog_fit_agreement(tmp_path, capsys):
    """plot_loglog's printed (a, b) equals the simulator's own fit.

    A real run writes records.csv through the simulator; both packages
    then fit the same windowed series (roughness, and F_h shifted by
    L^2/4), and the results must agree to 1e-12.
    """
    g = ssfilm.GridSpec(m=16, L=3.2)
    params = ssfilm.SchemeParams(epsilon=0.1, s=1e-3, A=1 / 16)
    solver = ssfilm.SolverConfig(kind="psd", rel_tol=1e-9)
    records = ssfilm.run(ssfilm.init_random(g, seed=3), params, solver,
                         T=0.05)
    csv_path = str(tmp_path / "records.csv")
    ssfilm.write_records_csv(csv_path, records, provenance="agreement test")

    window = (0.01, 0.05)
    offset = 0.25 * g.L * g.L
    fits = plot_loglog(csv_path, str(tmp_path / "ll.png"), window=window,
                       energy_offset=offset)
    capsys.readouterr()

    t = [r.t for r in records]
    want = {
        "roughness": ssfilm.loglog_fit(t, [r.roughness for r in records],
                                       window),
        "energy": ssfilm.loglog_fit(t, [r.F_h + offset for r in records],
                                    window),
    }
    worst = max(
        max(abs(fits[k][0] - want[k][0]), abs(fits[k][1] - want[k][1]))
        for k in want
    )
    assert _report(
        "secondary-fit-agreement", worst <= 1e-12,
        f"worst |plot fit - simulator fit| = {worst:.3e} over "
        f"roughness and shifted energy, required <= 1e-12",
    )


def test_stencil_agreement_on_pinned_snapshot(pinned_snapshot):
    """Direct comparison on top of the shared file pin."""
    phi, _ = ssfilm.read_snapshot(pinned_snapshot)
    vals, L, _ = read_snapshot(pinned_snapshot)
    ours = laplacian_5pt(vals, L / vals.shape[0])
    theirs = ssfilm.laplacian(phi).values
    err = np.abs(ours - theirs).max() / np.abs(theirs).max()
    assert err <= 1e-12


def test_simulator_never_imports_this_package():
    """The simulator must stay runnable without plotviz installed."""
    src_dir = os.path.dirname(ssfilm.__file__)
    hits = []
    for name in sorted(os.listdir(src_dir)):
        if name.endswith(".py"):
            with open(os.path.join(src_dir, name)) as fh:
                if "plotviz" in fh.read():
                    hits.append(name)
    assert _report(
        "secondary-primary-independent", not hits,
        f"simulator sources referencing this package: {hits or 'none'}",
    )
