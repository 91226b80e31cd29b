import math

import numpy as np
import pytest

import layersplit as ls


def constant_scene(a=0.4, b=0.6):
    spec = ls.SceneSpec()
    spec.width = spec.height = 64
    spec.tissue1_rect = ls.CropWindow(4, 8, 36, 48)
    spec.tissue2_rect = ls.CropWindow(24, 8, 36, 48)
    spec.tissue1_texture = ls.Constant(a)
    spec.tissue2_texture = ls.Constant(b)
    spec.rng_seed = 7
    return spec


def test_compose_is_vectorized():
    assert ls.compose(0.4, 0.6) == pytest.approx(0.66784, abs=1e-12)
    z = ls.compose(np.array([0.0, 0.5, 1.0]), np.array([0.5, 0.5, 0.7]))
    np.testing.assert_allclose(z, [0.5, 0.65625, 1.0], atol=1e-15)
    assert ls.dz_dx(0.5, 0.5) == 0.4375
    assert ls.dz_dy(0.5, 0.5) == 0.375


def test_out_of_range_raises():
    with pytest.raises(ls.LayersplitError, match="DomainError"):
        ls.compose(1.5, 0.0)
    with pytest.raises(ValueError):
        ls.compose(-0.2, 0.0)


def test_gradient_single_pixel():
    one = np.full((1, 1), 0.5)
    p = ls.LayerPair(ls.CropWindow(0, 0, 1, 1), one, one, np.ones((1, 1), dtype=bool))
    gx, gy = ls.gradient(p, np.zeros((1, 1)))
    assert gx[0, 0] == 0.57421875
    assert gy[0, 0] == 0.4921875


def test_arrays_are_row_major_height_by_width():
    img = np.zeros((3, 5))
    img[1, 4] = 1.0
    mask = np.zeros((3, 5), dtype=bool)
    mask[1, 4] = True
    w = ls.bounding_window(mask)
    assert (w.x0, w.y0, w.width, w.height) == (4, 1, 1, 1)


def test_simulate_and_separate_constant_scene():
    case = ls.simulate_overlap(constant_scene())
    assert case["composite"].shape == (64, 64)
    overlap = case["overlap"]
    np.testing.assert_array_equal(case["composite"][overlap], ls.compose(0.4, 0.6))

    layers, virtual, report = ls.separate(case["composite"], overlap, case["n1"], case["n2"])
    assert report.stop_reason == "Converged"
    assert tuple(report.chosen_weights) == (1.0, 1.0)
    assert report.final_objective < 1e-12
    assert len(report.objective_trace) == report.iterations_run + 1
    np.testing.assert_allclose(layers.x, 0.4, atol=1e-9)
    np.testing.assert_allclose(layers.y, 0.6, atol=1e-9)

    m = ls.evaluate(layers.x, case["truth_x"], layers.valid)
    assert m.mse < 1e-18
    left, right = ls.render_layers(case["composite"], overlap, case["n1"], case["n2"], layers)
    assert left.shape == (64, 64)
    np.testing.assert_allclose(left[overlap], 0.4, atol=1e-9)
    np.testing.assert_allclose(right[overlap], 0.6, atol=1e-9)


def test_error_surface_planted_weights():
    rng = np.random.default_rng(3)
    tx = rng.uniform(0.0, 0.7, (16, 16))
    ty = rng.uniform(0.0, 0.9, (16, 16))
    obs = ls.compose(tx, ty)
    valid = np.ones((16, 16), dtype=bool)
    init = ls.LayerPair(ls.CropWindow(0, 0, 16, 16), tx / 0.7, ty / 0.9, valid)
    surface = ls.error_surface(init, obs)
    assert surface.values.shape == (101, 101)
    w1, w2 = ls.best_weights(surface)
    assert abs(w1 - 0.7) <= 0.01 + 1e-12
    assert abs(w2 - 0.9) <= 0.01 + 1e-12


def test_fill_hole_constant_and_threads():
    img = np.full((32, 32), 0.25)
    hole = np.zeros((32, 32), dtype=bool)
    hole[10:20, 12:22] = True
    np.testing.assert_array_equal(ls.fill_hole(img, hole, ~hole), img)

    noise = np.random.default_rng(5).uniform(size=(40, 40))
    hole = np.zeros((40, 40), dtype=bool)
    hole[12:28, 12:28] = True
    cfg = ls.InpaintConfig()
    cfg.rng_seed = 9
    ls.set_thread_count(1)
    a = ls.fill_hole(noise, hole, ~hole, cfg)
    ls.set_thread_count(3)
    b = ls.fill_hole(noise, hole, ~hole, cfg)
    ls.set_thread_count(0)
    np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(a[~hole], noise[~hole])


def test_validation_errors():
    case = ls.simulate_overlap(constant_scene())
    with pytest.raises(ls.LayersplitError, match="OverlappingMasks"):
        ls.separate(case["composite"], case["overlap"], case["n1"] | case["overlap"], case["n2"])
    cfg = ls.SolveConfig()
    cfg.alpha = 0.0
    with pytest.raises(ls.LayersplitError, match="ConfigError"):
        ls.separate(case["composite"], case["overlap"], case["n1"], case["n2"], solve_cfg=cfg)


def test_metrics_infinite_psnr():
    a = np.full((4, 4), 0.3)
    m = ls.evaluate(a, a, np.ones((4, 4), dtype=bool))
    assert m.mse == 0.0
    assert math.isinf(m.psnr)
