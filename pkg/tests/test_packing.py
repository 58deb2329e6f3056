import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from granpack import distributions as dist
from granpack import fitting as fit
from granpack import packing as pk
from granpack.errors import DomainError, DomainTooSmall, FirstParticleFailed, RadiiExhausted


def const_model(r):
    return pk.RadiusModel(dist.Constant(r), "linear")


def lognormal_linear(mu=math.log(0.05), sigma=0.3):
    return pk.RadiusModel(dist.Lognormal(mu, sigma), "linear")


# -- domains ----------------------------------------------------------------------

def test_rectangle_area_exact():
    assert pk.Rectangle(3.0, 7.0).area == 21.0
    assert pk.parse_domain("20x12.5") == pk.Rectangle(20.0, 12.5)
    with pytest.raises(DomainError):
        pk.parse_domain("20")
    with pytest.raises(DomainError):
        pk.Rectangle(0.0, 1.0)


def test_polygon_orientation_and_area():
    cw = pk.Polygon(np.array([[0, 0], [0, 2], [3, 2], [3, 0]], float))
    assert cw.area == pytest.approx(6.0)
    v = cw.vertices
    assert np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1]) > 0


def test_polygon_rejects_bowtie():
    with pytest.raises(DomainError):
        pk.Polygon(np.array([[0, 0], [1, 1], [1, 0], [0, 1]], float))


def test_polygon_containment_is_edge_distance():
    tri = pk.Polygon(np.array([[0, 0], [4, 0], [0, 4]], float))
    # inradius of this right triangle is 4 - 2 sqrt2
    rin = 4 - 2 * math.sqrt(2)
    c = rin
    assert tri.contains_disk(c, c, rin - 1e-9)
    assert not tri.contains_disk(c, c, rin + 1e-6)
    assert not tri.contains_disk(3.0, 3.0, 0.01)


def test_domain_json_round_trip(tmp_path):
    poly = pk.Polygon(np.array([[0, 0], [2, 0], [2, 1], [1, 2], [0, 1]], float))
    back = pk.domain_from_json(poly.to_json())
    assert np.array_equal(back.vertices, poly.vertices)
    f = tmp_path / "p.csv"
    f.write_text("x_mm,y_mm\n0,0\n2,0\n2,1\n1,2\n0,1\n")
    assert pk.read_polygon(str(f)).area == pytest.approx(poly.area)


# -- grid index ---------------------------------------------------------------------

def test_empty_index():
    idx = pk.GridIndex((0, 0, 10, 10), 1.0)
    assert pk.grid_neighbors(idx, (5, 5), 3.0) == []


def test_adjacent_cells():
    idx = pk.GridIndex((0, 0, 10, 10), 1.0)
    pk.grid_insert(idx, 0, (0.9, 0.5, 0.05))
    pk.grid_insert(idx, 1, (1.1, 0.5, 0.05))
    assert pk.grid_neighbors(idx, (1.0, 0.5), 0.2) == [0, 1]


def test_grid_neighbors_superset_of_brute(rng):
    n = 1000
    x, y = rng.uniform(0, 50, n), rng.uniform(0, 50, n)
    r = rng.lognormal(math.log(0.5), 0.6, n)
    idx = pk.GridIndex((0, 0, 50, 50), pk.default_cell_size(r))
    for i in range(n):
        idx.insert(i, x[i], y[i], r[i])
    for _ in range(1000):
        qx, qy, qr = rng.uniform(0, 50), rng.uniform(0, 50), rng.lognormal(math.log(0.5), 0.6)
        truth = set(np.nonzero(np.hypot(x - qx, y - qy) < r + qr)[0].tolist())
        near = idx.neighbors(qx, qy, qr)
        assert truth <= set(near)
        # overlap decision through the index equals brute force
        dec = any(math.hypot(x[k] - qx, y[k] - qy) < r[k] + qr for k in near)
        assert dec == bool(truth)


# -- single-disk placement -----------------------------------------------------------

def test_try_place_easy():
    state = pk.PackingState(4)
    for seed in range(20):
        state = pk.PackingState(4)
        assert pk.ssi_try_place(pk.Rectangle(1, 1), None, state, 0.1, 100, np.random.default_rng(seed))
        assert state.count == 1 and 0.1 <= state.xs[0] <= 0.9


def test_try_place_impossible():
    state = pk.PackingState(4)
    idx = pk.GridIndex((0, 0, 1, 1), 1.2)
    assert not pk.ssi_try_place(pk.Rectangle(1, 1), idx, state, 0.6, 500, np.random.default_rng(0))
    assert state.count == 0 and idx.n_links == 0


# -- moments and N ----------------------------------------------------------------------

def test_linear_gamma_moments():
    m = pk.RadiusModel(dist.Gamma(2.0, 3.0), "linear")
    assert pk.radius_moments(m) == (6.0, 18.0)


def test_log_constant_moments():
    m = pk.RadiusModel(dist.Constant(2.0), "log", math.e, 0.001, 1.0)
    e, v = pk.radius_moments(m)
    assert e == pytest.approx(0.0005 * math.exp(3.0)) and v == 0.0


def test_log_normal_moments_match_closed_form():
    # a symmetric hyperbolic law with huge zeta is normal to within O(1/zeta),
    # so R = (ref/2) e^L is lognormal with closed-form moments
    mu, s, zeta = 5.0, 0.4, 1e4
    L = dist.Hyperbolic(0.0, zeta, s * math.sqrt(zeta), mu)
    e, v = pk.radius_moments(pk.RadiusModel(L, "log"))
    e_ref = 0.0005 * math.exp(mu + s**2 / 2)
    v_ref = e_ref**2 * math.expm1(s**2)
    assert e == pytest.approx(e_ref, rel=5e-3) and v == pytest.approx(v_ref, rel=5e-3)


def test_moments_reproducible():
    a = pk.radius_moments(pk.RadiusModel(dist.Gamma(4.0, 1.0), "log"))
    b = pk.radius_moments(pk.RadiusModel(dist.Gamma(4.0, 1.0), "log"))
    assert a == b


@pytest.mark.parametrize("area, eta, e, n", [(2 * math.pi, 0.5, 1.0, 1), (100 * math.pi, 0.0, 1.0, 100)])
def test_particle_count(area, eta, e, n):
    assert pk.estimate_particle_count(area, eta, (e, 0.0)) == n


def test_particle_count_too_small():
    with pytest.warns(DomainTooSmall):
        assert pk.estimate_particle_count(1.0, 0.5, (10.0, 0.0)) == 1


def test_scale_witness_relation():
    # N = 34688 at eta = 0.330 pins the box area through the estimator
    e, v = 0.02, 1e-4
    area = 34688 * math.pi * (v + e * e) / 0.67
    assert pk.estimate_particle_count(area, 0.330, (e, v)) == 34688


def test_achieved_porosity_basic():
    assert pk.achieved_porosity(np.array([]), 1.0) == 1.0
    assert pk.achieved_porosity(np.array([1.0]), 4 * math.pi) == pytest.approx(0.75)


def test_hyperbolic_not_allowed_linear():
    with pytest.raises(DomainError):
        pk.RadiusModel(dist.Hyperbolic(0, 1, 1, 0), "linear")


# -- full packings -------------------------------------------------------------------------

def test_equal_disks_stop_count():
    p = pk.sequential_pack(pk.Rectangle(100, 100), const_model(1.0), 0.99, rng=0)
    assert p.particle_count == math.ceil(100 / math.pi) == 32
    assert p.termination_reason == "target_reached"
    pk.verify_packing(p)


@pytest.mark.filterwarnings("ignore::granpack.errors.DomainTooSmall")
def test_tiny_target_one_particle():
    p = pk.sequential_pack(pk.Rectangle(100, 100), const_model(1.0), 0.9999, rng=1)
    assert p.particle_count == 1


def test_first_particle_fails():
    with pytest.raises(FirstParticleFailed, match="FAIL"):
        pk.sequential_pack(pk.Rectangle(1, 1), const_model(0.6), 0.5, rng=0, count=1)


def test_radii_exhausted_carries_packing():
    with pytest.raises(RadiiExhausted) as err:
        pk.sequential_pack(pk.Rectangle(50, 50), const_model(0.5), 0.5, K=1.5, rng=0, count=10)
    assert err.value.packing.particle_count == 15
    assert err.value.packing.termination_reason == "radii_exhausted"


@settings(max_examples=12, deadline=None)
@given(st.floats(0.5, 0.95), st.floats(0.05, 0.6), st.integers(0, 2**31))
def test_packing_invariants(eta, sigma, seed):
    model = lognormal_linear(sigma=sigma)
    p = pk.sequential_pack(pk.Rectangle(4, 4), model, eta, j_max=2000, rng=seed)
    pk.verify_packing(p, brute=True)
    # order preservation: placed radii are a prefix of the draws
    assert np.array_equal(p.r, p.radii_drawn[:p.particle_count])
    # strictly decreasing porosity sequence and bounded overshoot
    eta_i = 1 - np.cumsum(math.pi * p.r**2) / 16.0
    assert np.all(np.diff(eta_i) < 0)
    if p.termination_reason == "target_reached":
        assert p.achieved_porosity <= eta
        assert p.achieved_porosity >= eta - math.pi * p.r.max() ** 2 / 16.0
        assert eta_i[-2] > eta if p.particle_count > 1 else True


def test_polygon_packing():
    poly = pk.Polygon(np.array([[0, 0], [6, 0], [6, 3], [3, 6], [0, 3]], float))
    p = pk.sequential_pack(poly, lognormal_linear(math.log(0.1), 0.3), 0.6, j_max=3000, rng=7)
    pk.verify_packing(p, brute=True)
    assert p.achieved_porosity <= 0.6 + 1e-12 or p.termination_reason != "target_reached"


@pytest.mark.parametrize("seed", range(3))
def test_grid_and_brute_identical(seed):
    kw = dict(domain=pk.Rectangle(3, 3), model=lognormal_linear(sigma=0.5), eta=0.55, j_max=3000, rng=seed)
    a = pk.sequential_pack(use_grid=True, **kw)
    b = pk.sequential_pack(use_grid=False, **kw)
    assert np.array_equal(a.x, b.x) and np.array_equal(a.r, b.r)
    assert a.termination_reason == b.termination_reason


def test_deterministic_and_csv_round_trip():
    kw = dict(domain=pk.Rectangle(3, 3), model=lognormal_linear(), eta=0.6, rng=42)
    a, b = pk.sequential_pack(**kw), pk.sequential_pack(**kw)
    assert a.to_csv() == b.to_csv()
    x, y, r = pk.read_packing_csv(a.to_csv())
    assert np.array_equal(r, a.r) and len(a.to_csv().splitlines()) == a.particle_count + 1
    assert pk.achieved_porosity(r, a.domain.area) == pytest.approx(a.achieved_porosity, abs=1e-9)


def test_report_fields():
    p = pk.sequential_pack(pk.Rectangle(3, 3), lognormal_linear(), 0.8, rng=3)
    rep = p.report(model_ref={"family": "lognormal"})
    for key in ("target_porosity", "achieved_porosity", "particle_count", "seed", "domain",
                "model_ref", "j_max", "K", "termination_reason"):
        assert key in rep
    assert rep["seed"] == 3


def test_verify_detects_overlap():
    p = pk.sequential_pack(pk.Rectangle(3, 3), lognormal_linear(), 0.9, rng=5)
    p.x[1], p.y[1] = p.x[0], p.y[0]
    with pytest.raises(AssertionError):
        pk.verify_packing(p)


def test_kdtree_and_brute_agree(rng):
    x, y = rng.uniform(0, 10, 800), rng.uniform(0, 10, 800)
    r = rng.uniform(0.05, 0.3, 800)
    assert pk.overlapping_pairs(x, y, r) == pk.overlapping_pairs_brute(x, y, r)


def test_radius_law_adherence():
    # placed radii follow the generating law when rejection is negligible
    model = lognormal_linear(math.log(0.01), 0.3)
    law = model.size_model
    side = math.sqrt(1.05e4 * math.pi * (dist.variance(law) + dist.mean(law) ** 2) / 0.25)
    passes = 0
    for seed in range(50):
        p = pk.sequential_pack(pk.Rectangle(side, side), model, 0.75, rng=seed)
        assert p.particle_count >= 10**4
        passes += fit.chi_square_gof(p.r, law, n_params=0).p_value >= 0.01
    assert passes >= 45
