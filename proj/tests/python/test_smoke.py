import json
import math
import pathlib

import numpy as np
import pytest

import gdirac

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "fixtures"


def test_model_values():
    assert gdirac.model_f(0.0).real == pytest.approx(2.5566728533630877, abs=1e-12)
    assert gdirac.model_f(0.5).real == pytest.approx(16 / 9, abs=1e-12)
    doc = gdirac.builtin_model()
    cm = gdirac.model_matrices()
    assert gdirac.trace_dimension(doc) == 4
    assert gdirac.secular(doc, cm, 0.0).real == pytest.approx(3.42086100359, rel=1e-10)


def test_conditions_from_file():
    doc = gdirac.load_graph(str(FIXTURES / "lens.json"))
    cm = gdirac.assemble_AB(doc)
    rep = gdirac.check_selfadjoint(cm)
    assert rep["hermitian_compat"] and rep["rank_full"]
    A, B = np.asarray(cm.A), np.asarray(cm.B)
    assert np.abs(A @ B.conj().T - B @ A.conj().T).max() <= 1e-14


def test_weyl_herglotz():
    doc = gdirac.load_graph(str(FIXTURES / "model_star.json"))
    M = np.asarray(gdirac.weyl_matrix(doc, 0.3 + 0.7j))
    im = (M - M.conj().T) / 2j
    assert np.linalg.eigvalsh(im).min() >= -1e-12


def test_report_and_spectra():
    doc = gdirac.builtin_model()
    report = json.loads(gdirac.spectral_report_json(doc, gdirac.model_matrices(), samples=201, j_max=1))
    assert report["gap_roots"] == []
    assert report["essential"]["neg"][0] == "-inf"
    seg = gdirac.segment_spectrum(1.0, gdirac.PhysicalParams(0.5, 1.0), 2)
    assert seg["positive"][0] == pytest.approx(math.sqrt(0.25 + math.pi**2 / 4), rel=1e-12)


def test_discrete_interval():
    doc = gdirac.load_graph(str(FIXTURES / "interval.json"))
    eigs = gdirac.discrete_eigenvalues(doc, 1 / 200, -4.0, 4.0)
    assert eigs[0] == pytest.approx(-math.sqrt(0.25 + math.pi**2), rel=1e-3)
    assert gdirac.discrete_symmetry_residual(doc, 1 / 50) <= 1e-12


def test_interpolation_ratio():
    x = np.array([1.0, 2.0j, -0.5])
    assert gdirac.interpolation_ratio([1.0, 10.0, 300.0], x, 0.25) == pytest.approx(
        gdirac.interpolation_constant(0.25), rel=1e-9
    )


def test_errors():
    with pytest.raises(gdirac.ValidationError):
        gdirac.parse_graph("{")
    with pytest.raises(ValueError):
        gdirac.load_graph(str(FIXTURES / "missing.json"))
