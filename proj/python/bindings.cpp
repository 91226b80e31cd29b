#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "layersplit/calibrate.hpp"
#include "layersplit/cli.hpp"
#include "layersplit/inpaint.hpp"
#include "layersplit/model.hpp"
#include "layersplit/parallel.hpp"
#include "layersplit/simulate.hpp"
#include "layersplit/solve.hpp"

namespace py = pybind11;
using namespace layersplit;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using BoolArray = py::array_t<bool, py::array::c_style | py::array::forcecast>;

Image2D to_image(const DoubleArray& a) {
  if (a.ndim() != 2) throw py::value_error("image must be a 2-D array");
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  return Image2D(w, h, std::vector<double>(a.data(), a.data() + a.size()));
}

Mask2D to_mask(const BoolArray& a) {
  if (a.ndim() != 2) throw py::value_error("mask must be a 2-D array");
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  std::vector<std::uint8_t> bits(a.data(), a.data() + a.size());
  return Mask2D(w, h, std::move(bits));
}

DoubleArray from_image(const Image2D& img) {
  DoubleArray out({img.height(), img.width()});
  std::copy(img.pixels().begin(), img.pixels().end(), out.mutable_data());
  return out;
}

BoolArray from_mask(const Mask2D& m) {
  BoolArray out({m.height(), m.width()});
  std::copy(m.bits().begin(), m.bits().end(), out.mutable_data());
  return out;
}

DoubleArray from_field(const std::vector<double>& v, int w, int h) {
  DoubleArray out({h, w});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

RegionSpec to_regions(const BoolArray& overlap, const BoolArray& n1,
                      const BoolArray& n2) {
  return {to_mask(overlap), to_mask(n1), to_mask(n2)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-layer overlap separation for grayscale microscopy images";
  m.attr("__version__") = kToolVersion;

  py::register_exception<Error>(m, "LayersplitError", PyExc_ValueError);

  m.def("set_thread_count", &set_thread_count, py::arg("n"));
  m.def("thread_count", &thread_count);

  py::class_<CropWindow>(m, "CropWindow")
      .def(py::init<>())
      .def(py::init([](int x0, int y0, int w, int h) { return CropWindow{x0, y0, w, h}; }),
           py::arg("x0"), py::arg("y0"), py::arg("width"), py::arg("height"))
      .def_readwrite("x0", &CropWindow::x0)
      .def_readwrite("y0", &CropWindow::y0)
      .def_readwrite("width", &CropWindow::width)
      .def_readwrite("height", &CropWindow::height)
      .def("__eq__", &CropWindow::operator==)
      .def("__repr__", [](const CropWindow& w) {
        return "CropWindow(" + std::to_string(w.x0) + ", " + std::to_string(w.y0) +
               ", " + std::to_string(w.width) + ", " + std::to_string(w.height) + ")";
      });

  m.def("bounding_window", [](const BoolArray& mask) { return bounding_window(to_mask(mask)); });
  m.def(
      "validate_regions",
      [](const DoubleArray& image, const BoolArray& overlap, const BoolArray& n1,
         const BoolArray& n2, int patch_size) {
        validate_regions(to_image(image), to_regions(overlap, n1, n2), patch_size);
      },
      py::arg("image"), py::arg("overlap"), py::arg("n1"), py::arg("n2"),
      py::arg("patch_size") = 7);

  // Forward model.
  m.def("compose", py::vectorize(&compose), py::arg("x"), py::arg("y"));
  m.def("dz_dx", py::vectorize(&dz_dx), py::arg("x"), py::arg("y"));
  m.def("dz_dy", py::vectorize(&dz_dy), py::arg("x"), py::arg("y"));

  py::class_<LayerPair>(m, "LayerPair")
      .def(py::init([](const CropWindow& window, const DoubleArray& x,
                       const DoubleArray& y, const BoolArray& valid) {
             LayerPair p{window, to_image(x), to_image(y), to_mask(valid)};
             check_layers(p);
             return p;
           }),
           py::arg("window"), py::arg("x"), py::arg("y"), py::arg("valid"))
      .def_readonly("window", &LayerPair::window)
      .def_property_readonly("x", [](const LayerPair& p) { return from_image(p.x); })
      .def_property_readonly("y", [](const LayerPair& p) { return from_image(p.y); })
      .def_property_readonly("valid", [](const LayerPair& p) { return from_mask(p.valid); });

  m.def("compose_field", [](const LayerPair& p) { return from_image(compose_field(p)); });
  m.def("objective", [](const LayerPair& p, const DoubleArray& observed) {
    return objective(p, to_image(observed));
  });
  m.def("gradient", [](const LayerPair& p, const DoubleArray& observed) {
    const Gradient g = gradient(p, to_image(observed));
    return py::make_tuple(from_field(g.gx, g.width, g.height),
                          from_field(g.gy, g.width, g.height));
  });

  // Inpainting.
  py::class_<InpaintConfig>(m, "InpaintConfig")
      .def(py::init<>())
      .def_readwrite("patch_size", &InpaintConfig::patch_size)
      .def_readwrite("em_iterations", &InpaintConfig::em_iterations)
      .def_readwrite("nnf_iterations", &InpaintConfig::nnf_iterations)
      .def_readwrite("pyramid_levels", &InpaintConfig::pyramid_levels)
      .def_readwrite("rng_seed", &InpaintConfig::rng_seed)
      .def_readwrite("random_search_decay", &InpaintConfig::random_search_decay);

  m.def(
      "fill_hole",
      [](const DoubleArray& image, const BoolArray& hole, const BoolArray& source,
         const InpaintConfig& cfg) {
        return from_image(fill_hole(to_image(image), to_mask(hole), to_mask(source), cfg));
      },
      py::arg("image"), py::arg("hole"), py::arg("source"),
      py::arg("cfg") = InpaintConfig{});
  m.def(
      "initialize_layers",
      [](const DoubleArray& image, const BoolArray& overlap, const BoolArray& n1,
         const BoolArray& n2, const InpaintConfig& cfg) {
        return initialize_layers(to_image(image), to_regions(overlap, n1, n2), cfg);
      },
      py::arg("image"), py::arg("overlap"), py::arg("n1"), py::arg("n2"),
      py::arg("cfg") = InpaintConfig{});

  // Calibration.
  py::class_<WeightPair>(m, "WeightPair")
      .def(py::init<>())
      .def(py::init([](double w1, double w2) { return WeightPair{w1, w2}; }))
      .def_readwrite("w1", &WeightPair::w1)
      .def_readwrite("w2", &WeightPair::w2)
      .def("__iter__", [](const WeightPair& w) {
        return py::iter(py::make_tuple(w.w1, w.w2));
      });

  py::class_<ErrorSurface>(m, "ErrorSurface")
      .def_readonly("grid_step", &ErrorSurface::grid_step)
      .def_readonly("n", &ErrorSurface::n)
      .def_property_readonly("values", [](const ErrorSurface& s) {
        return from_field(s.values, s.n, s.n);
      });

  m.def("apply_weights", &apply_weights, py::arg("layers"), py::arg("weights"));
  m.def(
      "error_surface",
      [](const LayerPair& p, const DoubleArray& observed, double step) {
        return error_surface(p, to_image(observed), step);
      },
      py::arg("layers"), py::arg("observed"), py::arg("grid_step") = 0.01);
  m.def("best_weights", &best_weights);

  // Descent and pipeline.
  py::class_<SolveConfig>(m, "SolveConfig")
      .def(py::init<>())
      .def_readwrite("alpha", &SolveConfig::alpha)
      .def_readwrite("epsilon", &SolveConfig::epsilon)
      .def_readwrite("max_iterations", &SolveConfig::max_iterations)
      .def_readwrite("clamp", &SolveConfig::clamp);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("iterations_run", &SolveReport::iterations_run)
      .def_readonly("objective_trace", &SolveReport::objective_trace)
      .def_property_readonly("stop_reason",
                             [](const SolveReport& r) { return std::string(to_string(r.stop_reason)); })
      .def_readonly("chosen_weights", &SolveReport::chosen_weights)
      .def_readonly("final_objective", &SolveReport::final_objective)
      .def_readonly("objective_evaluations", &SolveReport::objective_evaluations);

  m.def(
      "descend",
      [](const LayerPair& p, const DoubleArray& observed, const SolveConfig& cfg) {
        DescentResult r = descend(p, to_image(observed), cfg);
        return py::make_tuple(r.layers, r.report);
      },
      py::arg("layers"), py::arg("observed"), py::arg("cfg") = SolveConfig{});
  m.def(
      "separate",
      [](const DoubleArray& image, const BoolArray& overlap, const BoolArray& n1,
         const BoolArray& n2, const InpaintConfig& icfg, double grid_step,
         const SolveConfig& scfg) {
        SeparationResult r = separate(to_image(image), to_regions(overlap, n1, n2),
                                      icfg, grid_step, scfg);
        return py::make_tuple(r.layers, from_image(r.virtual_overlap), r.report);
      },
      py::arg("image"), py::arg("overlap"), py::arg("n1"), py::arg("n2"),
      py::arg("inpaint_cfg") = InpaintConfig{}, py::arg("grid_step") = 0.01,
      py::arg("solve_cfg") = SolveConfig{});
  m.def(
      "render_layers",
      [](const DoubleArray& image, const BoolArray& overlap, const BoolArray& n1,
         const BoolArray& n2, const LayerPair& p) {
        auto [a, b] = render_layers(to_image(image), to_regions(overlap, n1, n2), p);
        return py::make_tuple(from_image(a), from_image(b));
      });

  // Synthetic scenes.
  py::class_<texture::Constant>(m, "Constant")
      .def(py::init([](double v) { return texture::Constant{v}; }), py::arg("value"))
      .def_readwrite("value", &texture::Constant::value);
  py::enum_<texture::Orientation>(m, "Orientation")
      .value("Vertical", texture::Orientation::Vertical)
      .value("Horizontal", texture::Orientation::Horizontal);
  py::class_<texture::Stripes>(m, "Stripes")
      .def(py::init([](int period, double lo, double hi, texture::Orientation o) {
             return texture::Stripes{period, lo, hi, o};
           }),
           py::arg("period"), py::arg("lo"), py::arg("hi"),
           py::arg("orientation") = texture::Orientation::Vertical);
  py::class_<texture::Checker>(m, "Checker")
      .def(py::init([](int cell, double lo, double hi) { return texture::Checker{cell, lo, hi}; }),
           py::arg("cell"), py::arg("lo"), py::arg("hi"));
  py::class_<texture::FromImage>(m, "FromImage")
      .def(py::init([](const DoubleArray& a) { return texture::FromImage{to_image(a)}; }));

  py::class_<SceneSpec>(m, "SceneSpec")
      .def(py::init<>())
      .def_readwrite("width", &SceneSpec::width)
      .def_readwrite("height", &SceneSpec::height)
      .def_readwrite("tissue1_rect", &SceneSpec::tissue1_rect)
      .def_readwrite("tissue2_rect", &SceneSpec::tissue2_rect)
      .def_readwrite("tissue1_texture", &SceneSpec::tissue1_texture)
      .def_readwrite("tissue2_texture", &SceneSpec::tissue2_texture)
      .def_readwrite("noise_sigma", &SceneSpec::noise_sigma)
      .def_readwrite("rng_seed", &SceneSpec::rng_seed)
      .def_readwrite("neighborhood_margin", &SceneSpec::neighborhood_margin);

  m.def("simulate_overlap", [](const SceneSpec& spec) {
    const SyntheticCase c = simulate_overlap(spec);
    py::dict d;
    d["composite"] = from_image(c.composite);
    d["overlap"] = from_mask(c.regions.overlap);
    d["n1"] = from_mask(c.regions.n1);
    d["n2"] = from_mask(c.regions.n2);
    d["truth_x"] = from_image(c.truth_x);
    d["truth_y"] = from_image(c.truth_y);
    return d;
  });

  py::class_<Metrics>(m, "Metrics")
      .def_readonly("mse", &Metrics::mse)
      .def_readonly("psnr", &Metrics::psnr)
      .def_readonly("max_abs_error", &Metrics::max_abs_error);
  m.def("evaluate", [](const DoubleArray& rec, const DoubleArray& truth, const BoolArray& mask) {
    return evaluate(to_image(rec), to_image(truth), to_mask(mask));
  });
}
