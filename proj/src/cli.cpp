#include "layersplit/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "layersplit/io.hpp"
#include "layersplit/solve.hpp"

namespace layersplit::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigError: return kInvalidArguments;
    case ErrorCode::IoError: return kIoFailure;
    default: return kValidationFailure;
  }
}

// Paths in manifests are stored relative to the directory holding the
// manifest, so a run directory can be moved or compared as a whole.
std::string relative_to(const fs::path& path, const fs::path& dir) {
  return fs::absolute(path).lexically_normal()
      .lexically_relative(fs::absolute(dir).lexically_normal())
      .generic_string();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, dir.string() + ": " + ec.message());
}

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Flags for the commands that run the pipeline. Every flag mirrors a key of
// the --config JSON file; explicit flags win over the file.
struct PipelineFlags {
  std::optional<std::string> config;
  std::optional<std::string> image, overlap_mask, n1_mask, n2_mask, out;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha, epsilon, grid_step, search_decay;
  std::optional<int> max_iters, patch_size, em_iterations, nnf_iterations,
      pyramid_levels;

  void attach(CLI::App* app, bool with_solver) {
    app->add_option("--config", config, "JSON file with defaults for every flag");
    app->add_option("--image", image, "Input grayscale PNG");
    app->add_option("--overlap-mask", overlap_mask, "Overlap region mask PNG");
    app->add_option("--n1-mask", n1_mask, "Top tissue neighborhood mask PNG");
    app->add_option("--n2-mask", n2_mask, "Bottom tissue neighborhood mask PNG");
    app->add_option("--out", out, "Output directory");
    app->add_option("--seed", seed, "RNG seed");
    app->add_option("--grid-step", grid_step, "Weight grid spacing in (0, 0.5]");
    app->add_option("--patch-size", patch_size, "Inpainting patch size (odd)");
    app->add_option("--em-iterations", em_iterations, "Search/vote rounds per level");
    app->add_option("--nnf-iterations", nnf_iterations, "PatchMatch sweeps per round");
    app->add_option("--pyramid-levels", pyramid_levels, "0 = automatic");
    app->add_option("--search-decay", search_decay, "Random search radius decay");
    if (with_solver) {
      app->add_option("--alpha", alpha, "Descent step size");
      app->add_option("--epsilon", epsilon, "Stop when |dG| < epsilon");
      app->add_option("--max-iters", max_iters, "Descent iteration cap");
    }
  }
};

struct PipelineSettings {
  fs::path image, overlap_mask, n1_mask, n2_mask, out;
  std::uint64_t seed = 0;
  InpaintConfig inpaint;
  SolveConfig solve;
  double grid_step = 0.01;
};

template <class T>
T pick(const std::optional<T>& flag, const json& cfg, const char* key, T fallback) {
  if (flag) return *flag;
  if (cfg.contains(key)) {
    try {
      return cfg.at(key).get<T>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ConfigError,
                  std::string("config key ") + key + ": " + e.what());
    }
  }
  return fallback;
}

fs::path pick_path(const std::optional<std::string>& flag, const json& cfg,
                   const char* key, const fs::path& cfg_dir, bool required) {
  if (flag) return *flag;
  if (cfg.contains(key)) {
    fs::path p = cfg.at(key).get<std::string>();
    return p.is_relative() ? cfg_dir / p : p;
  }
  if (required) {
    throw Error(ErrorCode::ConfigError,
                std::string("missing required setting ") + key);
  }
  return {};
}

PipelineSettings resolve(const PipelineFlags& f) {
  json cfg = json::object();
  fs::path cfg_dir = ".";
  if (f.config) {
    cfg = io::load_json(*f.config);
    // A report.json from an earlier run is accepted as a config file.
    if (cfg.contains("manifest")) cfg = cfg.at("manifest");
    if (!cfg.is_object())
      throw Error(ErrorCode::ConfigError, "config file must hold a JSON object");
    cfg_dir = fs::path(*f.config).parent_path();
    if (cfg_dir.empty()) cfg_dir = ".";
  }

  PipelineSettings s;
  s.image = pick_path(f.image, cfg, "image", cfg_dir, true);
  s.overlap_mask = pick_path(f.overlap_mask, cfg, "overlap_mask", cfg_dir, true);
  s.n1_mask = pick_path(f.n1_mask, cfg, "n1_mask", cfg_dir, true);
  s.n2_mask = pick_path(f.n2_mask, cfg, "n2_mask", cfg_dir, true);
  if (!f.out) throw Error(ErrorCode::ConfigError, "missing required flag --out");
  s.out = *f.out;

  s.seed = pick(f.seed, cfg, "seed", std::uint64_t{0});
  s.grid_step = pick(f.grid_step, cfg, "grid_step", 0.01);
  s.inpaint.rng_seed = s.seed;
  s.inpaint.patch_size = pick(f.patch_size, cfg, "patch_size", s.inpaint.patch_size);
  s.inpaint.em_iterations =
      pick(f.em_iterations, cfg, "em_iterations", s.inpaint.em_iterations);
  s.inpaint.nnf_iterations =
      pick(f.nnf_iterations, cfg, "nnf_iterations", s.inpaint.nnf_iterations);
  s.inpaint.pyramid_levels =
      pick(f.pyramid_levels, cfg, "pyramid_levels", s.inpaint.pyramid_levels);
  s.inpaint.random_search_decay =
      pick(f.search_decay, cfg, "search_decay", s.inpaint.random_search_decay);
  s.solve.alpha = pick(f.alpha, cfg, "alpha", s.solve.alpha);
  s.solve.epsilon = pick(f.epsilon, cfg, "epsilon", s.solve.epsilon);
  s.solve.max_iterations = pick(f.max_iters, cfg, "max_iters", s.solve.max_iterations);

  validate(s.inpaint);
  validate(s.solve);
  if (!(s.grid_step > 0.0 && s.grid_step <= 0.5)) {
    throw Error(ErrorCode::ConfigError,
                "grid_step must lie in (0, 0.5], got " + full_precision(s.grid_step));
  }
  return s;
}

json manifest_json(const PipelineSettings& s, bool with_solver) {
  json m = {
      {"image", relative_to(s.image, s.out)},
      {"overlap_mask", relative_to(s.overlap_mask, s.out)},
      {"n1_mask", relative_to(s.n1_mask, s.out)},
      {"n2_mask", relative_to(s.n2_mask, s.out)},
      {"seed", s.seed},
      {"grid_step", s.grid_step},
      {"patch_size", s.inpaint.patch_size},
      {"em_iterations", s.inpaint.em_iterations},
      {"nnf_iterations", s.inpaint.nnf_iterations},
      {"pyramid_levels", s.inpaint.pyramid_levels},
      {"search_decay", s.inpaint.random_search_decay},
      {"tool_version", kToolVersion},
  };
  if (with_solver) {
    m["alpha"] = s.solve.alpha;
    m["epsilon"] = s.solve.epsilon;
    m["max_iters"] = s.solve.max_iterations;
  }
  return m;
}

struct LoadedInputs {
  Image2D image;
  RegionSpec regions;
};

LoadedInputs load_inputs(const PipelineSettings& s) {
  LoadedInputs in;
  in.image = io::read_image(s.image);
  in.regions.overlap = io::read_mask(s.overlap_mask);
  in.regions.n1 = io::read_mask(s.n1_mask);
  in.regions.n2 = io::read_mask(s.n2_mask);
  validate_regions(in.image, in.regions, s.inpaint.patch_size);
  return in;
}

json window_json(const CropWindow& w) {
  return {{"x0", w.x0}, {"y0", w.y0}, {"width", w.width}, {"height", w.height}};
}

int cmd_separate(const PipelineFlags& flags) {
  const PipelineSettings s = resolve(flags);
  const LoadedInputs in = load_inputs(s);
  const SeparationResult result =
      separate(in.image, in.regions, s.inpaint, s.grid_step, s.solve);

  ensure_dir(s.out);
  io::write_image(s.out / "layer_x.png", result.layers.x);
  io::write_image(s.out / "layer_y.png", result.layers.y);
  const auto [left, right] = render_layers(in.image, in.regions, result.layers);
  io::write_image(s.out / "rendered_left.png", left);
  io::write_image(s.out / "rendered_right.png", right);
  io::write_image(s.out / "virtual_overlap.png",
                  overlay_virtual(in.image, result.layers));

  const SolveReport& r = result.report;
  json report = {
      {"tool", "layersplit"},
      {"tool_version", kToolVersion},
      {"manifest", manifest_json(s, true)},
      {"window", window_json(result.layers.window)},
      {"model",
       {{"source_intensity", ModelConstants::source_intensity},
        {"absorption", ModelConstants::absorption},
        {"bounce_paths", ModelConstants::bounce_paths}}},
      {"report",
       {{"iterations_run", r.iterations_run},
        {"stop_reason", to_string(r.stop_reason)},
        {"chosen_weights", {{"w1", r.chosen_weights.w1}, {"w2", r.chosen_weights.w2}}},
        {"final_objective", r.final_objective},
        {"objective_evaluations", r.objective_evaluations},
        {"objective_trace", r.objective_trace}}},
  };
  io::write_text(s.out / "report.json", report.dump(2) + "\n");
  std::cout << "separate: " << r.iterations_run << " iterations, "
            << to_string(r.stop_reason) << ", weights (" << r.chosen_weights.w1
            << ", " << r.chosen_weights.w2 << "), G = " << r.final_objective
            << "\n";
  return kOk;
}

int cmd_surface(const PipelineFlags& flags) {
  const PipelineSettings s = resolve(flags);
  const LoadedInputs in = load_inputs(s);
  const LayerPair init = initialize_layers(in.image, in.regions, s.inpaint);
  const ErrorSurface surface =
      error_surface(init, crop(in.image, init.window), s.grid_step);
  const WeightPair best = best_weights(surface);

  ensure_dir(s.out);
  io::write_text(s.out / "surface.csv", io::surface_csv(surface));

  const int bi = static_cast<int>(std::lround(best.w1 / s.grid_step));
  const int bj = static_cast<int>(std::lround(best.w2 / s.grid_step));
  json out = {
      {"w1", best.w1},
      {"w2", best.w2},
      {"error", surface.at(std::min(bi, surface.n - 1), std::min(bj, surface.n - 1))},
      {"grid_step", s.grid_step},
      {"grid_size", surface.n},
      {"manifest", manifest_json(s, false)},
  };
  io::write_text(s.out / "best_weights.json", out.dump(2) + "\n");
  std::cout << "surface: best weights (" << best.w1 << ", " << best.w2 << ")\n";
  return kOk;
}

json texture_manifest(json tex, const fs::path& cfg_dir, const fs::path& out) {
  if (tex.value("kind", "") == "image") {
    fs::path p = tex.at("path").get<std::string>();
    if (p.is_relative()) p = cfg_dir / p;
    tex["path"] = relative_to(p, out);
  }
  return tex;
}

int cmd_simulate(const std::string& config, const std::string& out_dir,
                 const std::optional<std::uint64_t>& seed) {
  json scene_json = io::load_json(config);
  fs::path cfg_dir = fs::path(config).parent_path();
  if (cfg_dir.empty()) cfg_dir = ".";
  if (seed) scene_json["seed"] = *seed;
  const SceneSpec spec = io::scene_from_json(scene_json, cfg_dir);
  const SyntheticCase sc = simulate_overlap(spec);

  const fs::path out = out_dir;
  ensure_dir(out);
  io::write_image(out / "composite.png", sc.composite);
  io::write_mask(out / "mask_overlap.png", sc.regions.overlap);
  io::write_mask(out / "mask_n1.png", sc.regions.n1);
  io::write_mask(out / "mask_n2.png", sc.regions.n2);
  io::write_image(out / "truth_x.png", sc.truth_x);
  io::write_image(out / "truth_y.png", sc.truth_y);

  json scene = scene_json;
  scene["seed"] = spec.rng_seed;
  for (const char* t : {"tissue1", "tissue2"})
    scene[t]["texture"] = texture_manifest(scene[t]["texture"], cfg_dir, out);
  json manifest = {
      {"tool", "layersplit"},
      {"tool_version", kToolVersion},
      {"scene", scene},
      {"window", window_json(bounding_window(sc.regions.overlap))},
      // Lets the manifest double as a `separate --config` file.
      {"image", "composite.png"},
      {"overlap_mask", "mask_overlap.png"},
      {"n1_mask", "mask_n1.png"},
      {"n2_mask", "mask_n2.png"},
  };
  io::write_text(out / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "simulate: wrote " << spec.width << "x" << spec.height
            << " scene to " << out.string() << "\n";
  return kOk;
}

int cmd_evaluate(const std::string& recovered_path, const std::string& truth_path,
                 const std::string& mask_path, const std::string& out_dir) {
  const Image2D recovered = io::read_image(recovered_path);
  const Image2D truth = io::read_image(truth_path);
  Mask2D mask = io::read_mask(mask_path);
  // A full-image overlap mask is accepted for window-sized layers.
  if ((mask.width() != truth.width() || mask.height() != truth.height()) &&
      mask.any()) {
    const CropWindow w = bounding_window(mask);
    if (w.width == truth.width() && w.height == truth.height())
      mask = crop(mask, w);
  }
  const Metrics m = evaluate(recovered, truth, mask);

  json psnr = std::isinf(m.psnr) ? json("inf") : json(m.psnr);
  json out = {{"mse", m.mse}, {"psnr", psnr}, {"max_abs_error", m.max_abs_error}};
  ensure_dir(out_dir);
  io::write_text(fs::path(out_dir) / "metrics.json", out.dump(2) + "\n");
  std::cout << "mse=" << full_precision(m.mse) << " psnr="
            << (std::isinf(m.psnr) ? std::string("inf") : full_precision(m.psnr))
            << " max_abs_error=" << full_precision(m.max_abs_error) << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Separate two overlapping tissue layers in a grayscale image"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  PipelineFlags sep_flags;
  CLI::App* sep = app.add_subcommand("separate", "Recover both layers over the overlap");
  sep_flags.attach(sep, true);

  PipelineFlags surf_flags;
  CLI::App* surf = app.add_subcommand("surface", "Export the weight error surface");
  surf_flags.attach(surf, false);

  std::string sim_config, sim_out;
  std::optional<std::uint64_t> sim_seed;
  CLI::App* sim = app.add_subcommand("simulate", "Render a synthetic overlap scene");
  sim->add_option("--config", sim_config, "Scene JSON")->required();
  sim->add_option("--out", sim_out, "Output directory")->required();
  sim->add_option("--seed", sim_seed, "Override the scene seed");

  std::string ev_recovered, ev_truth, ev_mask, ev_out = ".";
  CLI::App* ev = app.add_subcommand("evaluate", "Compare a recovered layer to truth");
  ev->add_option("--recovered", ev_recovered, "Recovered layer PNG")->required();
  ev->add_option("--truth", ev_truth, "Ground-truth layer PNG")->required();
  ev->add_option("--mask", ev_mask, "Evaluation mask PNG")->required();
  ev->add_option("--out", ev_out, "Directory for metrics.json");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidArguments;
  }

  try {
    if (sep->parsed()) return cmd_separate(sep_flags);
    if (surf->parsed()) return cmd_surface(surf_flags);
    if (sim->parsed()) return cmd_simulate(sim_config, sim_out, sim_seed);
    if (ev->parsed()) return cmd_evaluate(ev_recovered, ev_truth, ev_mask, ev_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: IoError: " << e.what() << "\n";
    return kIoFailure;
  }
  return kInvalidArguments;
}

}  // namespace layersplit::cli
