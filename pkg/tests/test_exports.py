import math

import numpy as np
import pytest

from rotcmc.angles import K_limit_cmin, K_one_sided_limits, b
from rotcmc.errors import DomainError, InvalidInputError, PoleProximityError
from rotcmc.exports import (
    SWEEP_COLUMNS,
    parse_profile_csv,
    render_obj,
    render_profile_csv,
    render_profile_json,
    render_profile_svg,
    render_sweep_csv,
    write_outputs,
)
from rotcmc.mesh import build_mesh, stereographic_project
from rotcmc.moduli import profile_polyline_pieces, solve_C_for_angle, \
    solve_H_for_axis_symmetry
from rotcmc.surface import SurfaceParams, c_min, fundamental_piece
from rotcmc.sweep import SweepSpec, sweep


@pytest.fixture(scope="module")
def sample_poly():
    return fundamental_piece(SurfaceParams(-0.6, 2.1), 64)


class TestProfileFiles:
    def test_csv_round_trip_bit_exact(self, sample_poly):
        text = render_profile_csv(sample_poly)
        back = parse_profile_csv(text, sample_poly.params)
        assert len(back) == len(sample_poly)
        for a, bpt in zip(sample_poly.points, back.points):
            assert (a.t, a.x, a.y) == (bpt.t, bpt.x, bpt.y)

    def test_csv_header_required(self, sample_poly):
        with pytest.raises(DomainError):
            parse_profile_csv("a,b,c\n1,2,3\n", sample_poly.params)

    def test_json_metadata(self, sample_poly):
        import json
        doc = json.loads(render_profile_json(sample_poly))
        assert doc["version"]
        assert doc["params"]["H"] == -0.6
        assert len(doc["points"]) == len(sample_poly)

    def test_svg_structure(self, sample_poly):
        svg = render_profile_svg(sample_poly)
        assert svg.count("<polyline") == 1
        assert svg.count("<circle") == 3
        assert 'viewBox="0 0 1000 1000"' in svg

    def test_write_outputs_and_io_error(self, sample_poly, tmp_path):
        out = tmp_path / "p.csv"
        write_outputs("csv", sample_poly, str(out))
        assert out.read_text().startswith("t,x,y")
        with pytest.raises(OSError) as exc:
            write_outputs("csv", sample_poly, str(tmp_path / "no" / "p.csv"))
        assert "p.csv" in str(exc.value)
        with pytest.raises(DomainError):
            write_outputs("obj", sample_poly, str(out))


class TestStereographic:
    def test_antipode_maps_to_origin(self):
        pole = np.array([0.0, 0.0, 0.0, 1.0])
        assert np.allclose(stereographic_project(-pole, pole), 0.0)

    def test_equator_maps_to_unit_sphere(self):
        pole = np.array([0.0, 0.0, 0.0, 1.0])
        for pt in ([1, 0, 0, 0], [0, 1, 0, 0],
                   [0.6, 0.0, 0.8, 0.0]):
            img = stereographic_project(np.array(pt, dtype=float), pole)
            assert np.linalg.norm(img) == pytest.approx(1.0, abs=1e-12)

    def test_pole_proximity(self):
        pole = np.array([0.0, 0.0, 0.0, 1.0])
        with pytest.raises(PoleProximityError):
            stereographic_project(pole * (1 - 1e-12), pole)

    def test_pole_must_be_unit(self):
        with pytest.raises(DomainError):
            stereographic_project(np.array([1.0, 0, 0, 0]),
                                  np.array([0.0, 0, 0, 2.0]))


class TestMesh:
    def test_counts_and_finiteness(self):
        m = build_mesh(SurfaceParams(0.3, 4.0), n_s=12, n_t=9, pieces=2)
        assert len(m.vertices) == 12 * 9
        assert len(m.faces) == 12 * 8
        assert np.all(np.isfinite(m.vertices))
        for f in m.faces:
            assert all(0 <= i < len(m.vertices) for i in f)

    def test_isoparametric_torus_rings(self):
        # each t-ring of the Clifford-type torus projects to a circle at
        # constant height: constant axial coordinate, constant ring radius
        m = build_mesh(SurfaceParams(0.0, c_min(0.0)), n_s=24, n_t=7)
        verts = m.vertices.reshape(7, 24, 3)
        for ring in verts:
            assert np.ptp(ring[:, 2]) < 1e-12
            assert np.ptp(np.hypot(ring[:, 0], ring[:, 1])) < 1e-12

    def test_embedded_solution_closes_in_t(self):
        H = 0.9074
        sol = solve_C_for_angle(H, 2 * math.pi / 3)
        m = build_mesh(SurfaceParams(H, sol.C), n_s=8, n_t=31, pieces=3)
        verts = m.vertices.reshape(31, 8, 3)
        assert np.max(np.linalg.norm(verts[0] - verts[-1], axis=1)) < 1e-6

    def test_axis_solution_closes_after_2m_pieces(self):
        # odd-m axis profiles close only after 2m periods
        sol = solve_H_for_axis_symmetry(3)
        m = build_mesh(SurfaceParams(sol.H, sol.C), n_s=6, n_t=37, pieces=6)
        verts = m.vertices.reshape(37, 6, 3)
        assert np.max(np.linalg.norm(verts[0] - verts[-1], axis=1)) < 1e-6

    def test_validation(self):
        p = SurfaceParams(0.0, 3.0)
        with pytest.raises(DomainError):
            build_mesh(p, 2, 8)
        with pytest.raises(DomainError):
            build_mesh(p, 8, 8, pole=(0, 0, 0, 2))

    def test_pole_on_surface_rejected(self):
        from rotcmc.surface import immersion_phi
        p = SurfaceParams(0.0, 2.5)
        pole = immersion_phi(p, 0.0, -p.period / 4.0)
        pole = tuple(pole / np.linalg.norm(pole))
        with pytest.raises(PoleProximityError):
            build_mesh(p, 16, 16, pole=pole)

    def test_obj_format(self):
        m = build_mesh(SurfaceParams(0.3, 4.0), n_s=5, n_t=4)
        text = render_obj(m)
        lines = text.strip().splitlines()
        v_lines = [ln for ln in lines if ln.startswith("v ")]
        f_lines = [ln for ln in lines if ln.startswith("f ")]
        assert len(v_lines) == 20
        assert len(f_lines) == 15
        for ln in f_lines:
            idx = [int(tok) for tok in ln.split()[1:]]
            assert len(idx) == 4
            assert all(1 <= i <= 20 for i in idx)
        assert set(ln.split()[0] for ln in lines) == {"v", "f"}


class TestSweep:
    def test_validation(self):
        with pytest.raises(InvalidInputError):
            SweepSpec(0, 1, 0, 0, 1, 1)
        with pytest.raises(InvalidInputError):
            SweepSpec(1, 0, 2, 0, 1, 2)
        with pytest.raises(InvalidInputError):
            SweepSpec(0, 1, 2, 0.0, 1, 2, c_mode="offset")
        with pytest.raises(InvalidInputError):
            SweepSpec(0, 1, 2, 0.1, 1, 2, outputs={"nope"})

    def test_minimal_row_range(self):
        spec = SweepSpec(0.0, 0.5, 1, 2.1, 30.0, 12, outputs={"K"})
        rows = sweep(spec)
        assert len(rows) == 12
        for row in rows:
            assert math.pi < row["K"] < math.pi * math.sqrt(2)

    def test_jump_visible_across_axis(self):
        # H = -1 row: C grid straddles the axis at C = 1
        spec = SweepSpec(-1.0, -0.999, 1, 0.85, 3.0, 10, outputs={"K"})
        rows = sweep(spec)
        below = [r["K"] for r in rows if r["side"] == "below_axis_C"]
        above = [r["K"] for r in rows if r["side"] == "above_axis_C"]
        assert below and above
        assert min(below) - max(above) >= 2 * math.pi - 1e-9

    def test_monotone_along_C_same_side(self):
        spec = SweepSpec(0.4, 0.5, 1, 0.05, 8.0, 15, c_mode="offset",
                         outputs={"K"})
        vals = [r["K"] for r in sweep(spec)]
        assert all(a > bb for a, bb in zip(vals, vals[1:]))

    def test_near_axis_cells_use_limits(self):
        H = -1.0
        left, right = K_one_sided_limits(H)
        spec = SweepSpec(H, -0.9999, 1, 1.0 - 1e-10, 1.0 + 1e-10, 3,
                         outputs={"K", "b"})
        rows = sweep(spec)
        assert rows[0]["side"] == "below_axis_C"
        assert rows[0]["K"] == pytest.approx(left, abs=1e-8)
        assert rows[1]["side"] == "axis"
        assert rows[1]["K"] == pytest.approx(b(H).value, abs=1e-10)
        assert rows[2]["side"] == "above_axis_C"
        assert rows[2]["K"] == pytest.approx(right, abs=1e-8)

    def test_invalid_cells_marked(self):
        spec = SweepSpec(0.0, 0.1, 1, 0.5, 1.0, 2, outputs={"K"})
        rows = sweep(spec)
        assert all(r["tag"] == "error:invalid-params" for r in rows)
        assert all(r["K"] == "" for r in rows)

    def test_outputs_populate_columns(self):
        spec = SweepSpec(-1.0, 1.0, 2, 0.3, 2.0, 2, c_mode="offset",
                         outputs={"K", "bounds", "classification"})
        rows = sweep(spec)
        for row in rows:
            assert row["m_HC"] != "" and row["M_HC"] != ""
            assert row["tag"] in ("presumed_dense", "closed", "isoparametric")

    def test_deterministic(self):
        spec = SweepSpec(-0.5, 0.5, 3, 0.2, 3.0, 4, c_mode="offset",
                         outputs={"K", "bounds"})
        assert sweep(spec) == sweep(spec)

    def test_csv_render(self):
        spec = SweepSpec(0.0, 0.5, 2, 2.5, 3.5, 2, outputs={"K", "bounds"})
        text = render_sweep_csv(sweep(spec))
        lines = text.strip().splitlines()
        assert lines[0] == ",".join(SWEEP_COLUMNS)
        assert len(lines) == 5
        # 17 significant digits round-trip
        cell = lines[1].split(",")[2]
        assert float(cell) == float(repr(float(cell)))

    def test_isoparametric_boundary_approached(self):
        # offset grid hugging c_min: K close to the closed-form limit
        spec = SweepSpec(0.3, 0.4, 1, 1e-8, 1e-7, 2, c_mode="offset",
                         outputs={"K"})
        rows = sweep(spec)
        assert rows[0]["K"] == pytest.approx(K_limit_cmin(0.3), abs=1e-3)
