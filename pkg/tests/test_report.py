import json

import pytest

from cmt.manifold import parity_check, reduce, solve_centre_manifold
from cmt.report import build_report, render_json
from cmt.spectral import eigen_split, linear_part, to_eigenbasis
from cmt.stability import classify_1d
from cmt.sysdsl import parse_system
from cmt.casestudies import PROTEIN


class TestRenderJson:
    def test_floats_pinned_to_17_digits(self):
        text = render_json({"x": 0.1, "y": 1.0, "z": 1.2345678901234567e-5})
        assert '"x": 0.10000000000000001' in text
        assert '"y": 1.0' in text
        parsed = json.loads(text)
        assert parsed["x"] == 0.1
        assert parsed["z"] == 1.2345678901234567e-5

    def test_structure_round_trips(self):
        doc = {
            "a": [1, 2.5, "s", None, True],
            "b": {"nested": [{"k": -0.25}]},
            "text": 'quote " and \\ and\nnewline',
        }
        assert json.loads(render_json(doc)) == doc

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            render_json({"x": float("nan")})
        with pytest.raises(ValueError):
            render_json({"x": float("inf")})

    def test_key_order_is_insertion_order(self):
        a = render_json({"first": 1, "second": 2})
        assert a.index('"first"') < a.index('"second"')


class TestStatus:
    def build(self, residual_max):
        spec = parse_system(PROTEIN)
        split = eigen_split(linear_part(spec), basis=spec.basis)
        ts = to_eigenbasis(spec, split)
        mani = solve_centre_manifold(ts, 2)
        red = reduce(ts, mani)
        return build_report(
            source_text=PROTEIN,
            spec=spec,
            split=split,
            transformed=ts,
            manifold=mani,
            residual_max=residual_max,
            reduced=red,
            verdict=classify_1d(red),
            parity=parity_check(ts, mani),
            radial=None,
            order=2,
            zero_tol=1e-9,
        )

    def test_ok_within_tolerance(self):
        assert self.build(1e-12)["status"] == "OK"

    def test_failed_above_tolerance(self):
        doc = self.build(1.0)
        assert doc["status"] == "FAILED"
        assert doc["diagnostics"]["residual_max"] == 1.0
