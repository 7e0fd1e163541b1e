#include "btb/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "btb/bench.hpp"
#include "btb/color.hpp"
#include "btb/denoiser.hpp"
#include "btb/io.hpp"
#include "btb/iteration.hpp"
#include "btb/metrics.hpp"
#include "btb/noise.hpp"
#include "btb/rfn.hpp"
#include "btb/scene.hpp"
#include "btb/vortice.hpp"

namespace btb {
namespace {

std::optional<double> parse_delta(const std::string& text) {
  if (text == "auto") return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("--delta expects a number or 'auto', got '" + text + "'");
  }
  if (used != text.size()) throw ConfigError("--delta expects a number or 'auto', got '" + text + "'");
  return v;
}

// "0.8" or "0.9,0.7,0.5": one step size per iteration, the last one repeating.
StepSchedule parse_mu(const std::string& text) {
  std::vector<double> values;
  std::stringstream list(text);
  std::string item;
  while (std::getline(list, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ConfigError("--mu expects numbers separated by commas, got '" + text + "'");
    values.push_back(v);
  }
  if (values.empty()) throw ConfigError("--mu is empty");
  return StepSchedule(std::move(values));
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  return s;
}

void write_trace(const std::string& path, const IterationTrace& trace, const Image* ref) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace: " + path);
  out.precision(12);
  out << "iter,step_norm,psnr\n";
  for (std::size_t t = 1; t < trace.iterates.size(); ++t) {
    out << t << ',' << trace.step_norms[t - 1] << ',';
    if (ref != nullptr) out << psnr(*ref, trace.iterates[t]);
    out << '\n';
  }
}

// Images headed for an 8-bit file get clamped there anyway; raw output keeps
// the values as computed.
void save_output(const Image& img, const std::string& path) { save_image(img, path); }

struct SynthArgs {
  std::string kind;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::string scene_path;
  std::string clean_out;
  std::vector<std::string> files;
};

void run_synth(const SynthArgs& a) {
  if (a.kind == "tomogram") {
    if (a.files.size() != 1) throw ConfigError("synth tomogram takes one output path");
    const SceneConfig scene = a.scene_path.empty() ? default_scene() : load_scene(a.scene_path);
    const Tomogram tomo = synth_tomogram(scene, a.seed);
    save_output(tomo.speckled, a.files[0]);
    if (!a.clean_out.empty()) save_output(tomo.clean, a.clean_out);
    return;
  }
  if (a.files.size() != 2) throw ConfigError("synth " + a.kind + " takes an input and an output path");
  std::string spec = a.kind;
  if (a.kind == "awgn") {
    std::ostringstream s;
    s.precision(17);
    s << "awgn:" << a.sigma;
    spec = s.str();
  }
  const NoiseSpec noise = parse_noise_spec(spec, a.seed);
  if (is_color_file(a.files[0])) {
    ColorPlanes rgb = load_color_image(a.files[0]);
    for (std::size_t c = 0; c < 3; ++c) {
      NoiseSpec per_plane = noise;
      per_plane.seed = noise.seed + c;
      rgb[c] = apply_noise(rgb[c], per_plane);
    }
    save_color_image(rgb, a.files[1]);
    return;
  }
  save_output(apply_noise(load_image(a.files[0]), noise), a.files[1]);
}

struct BtbArgs {
  std::string input, output;
  std::string mode = "simple";
  std::string mu = "0.8";
  std::string engine = "nlm:patch=1,search=5,h=10";
  std::size_t max_iters = 40;
  std::string delta = "auto";
  std::string trace;
  std::string ref;
  double beta = 0.0;
  std::uint64_t seed = 0;
  std::string color = "luma";
};

IterationConfig make_iteration_config(const BtbArgs& a) {
  IterationConfig cfg;
  cfg.mode = parse_update_mode(a.mode);
  cfg.mu = parse_mu(a.mu);
  cfg.beta = a.beta;
  cfg.delta = parse_delta(a.delta);
  cfg.max_iters = a.max_iters;
  cfg.seed = a.seed;
  cfg.validate();
  return cfg;
}

void report_run(const IterationTrace& trace) {
  std::cerr << "iterations: " << trace.iters_run << " (stopped by " << to_string(trace.stopped_by) << ")\n";
}

void run_btb(const BtbArgs& a) {
  const IterationConfig cfg = make_iteration_config(a);
  const auto engine = parse_engine(a.engine);
  if (a.color != "luma" && a.color != "all") throw ConfigError("--color expects luma or all");

  if (is_color_file(a.input)) {
    ColorPlanes rgb = load_color_image(a.input);
    if (a.color == "luma") {
      ColorPlanes ycc = color_transform(rgb, ColorDirection::RgbToYcbcr);
      const IterationTrace trace = btb_run(ycc[0], *engine, cfg);
      report_run(trace);
      ycc[0] = trace.final_image();
      rgb = color_transform(ycc, ColorDirection::YcbcrToRgb);
    } else {
      for (auto& plane : rgb) {
        const IterationTrace trace = btb_run(plane, *engine, cfg);
        report_run(trace);
        plane = trace.final_image();
      }
    }
    save_color_image(rgb, a.output);
    return;
  }

  const Image y = load_image(a.input);
  const IterationTrace trace = btb_run(y, *engine, cfg);
  report_run(trace);
  std::optional<Image> ref;
  if (!a.ref.empty()) {
    ref = load_image(a.ref);
    std::cerr << "psnr: " << psnr(*ref, y) << " -> " << psnr(*ref, trace.final_image()) << " dB\n";
  }
  if (!a.trace.empty()) write_trace(a.trace, trace, ref ? &*ref : nullptr);
  save_output(trace.final_image(), a.output);
}

struct DespeckleArgs {
  std::string input, output;
  std::string algo = "vortice";
  double alpha = 0.4;
  double beta = 0.4;
  std::string window = "gaussian:15";
  double tau = 0.25;
  bool signed_variant = false;
  std::size_t iters = 5;
  std::string delta = "auto";
  std::string trace;
  std::string ref;
};

VorticeConfig make_vortice_config(const DespeckleArgs& a) {
  VorticeConfig cfg;
  cfg.rfn.kernel = parse_rfn_window(a.window, 2);
  cfg.rfn.tau = a.tau;
  cfg.rfn.signed_variant = a.signed_variant;
  cfg.alpha = a.alpha;
  cfg.beta = a.beta;
  cfg.delta = parse_delta(a.delta);
  cfg.max_iters = a.iters;
  cfg.validate();
  return cfg;
}

IterationTrace run_despeckle_algo(const std::string& algo, const Image& y, const VorticeConfig& cfg) {
  if (algo == "vortice") return vortice_run(y, cfg);
  if (algo == "focused") return speckle_focused_run(y, cfg);
  throw ConfigError("--algo expects vortice or focused");
}

void run_despeckle(const DespeckleArgs& a) {
  const VorticeConfig cfg = make_vortice_config(a);
  const Image y = load_image(a.input);
  const IterationTrace trace = run_despeckle_algo(a.algo, y, cfg);
  report_run(trace);
  std::cerr << "speckle level: " << speckle_level(y, cfg.rfn) << " -> " << speckle_level(trace.final_image(), cfg.rfn)
            << '\n';
  std::optional<Image> ref;
  if (!a.ref.empty()) {
    ref = load_image(a.ref);
    std::cerr << "psnr: " << psnr(*ref, y) << " -> " << psnr(*ref, trace.final_image()) << " dB\n";
  }
  if (!a.trace.empty()) write_trace(a.trace, trace, ref ? &*ref : nullptr);
  save_output(trace.final_image(), a.output);
}

struct RfnArgs {
  std::string input, output;
  std::string window = "gaussian:15";
  double tau = 0.25;
  bool signed_variant = false;
};

void run_rfn(const RfnArgs& a) {
  RfnConfig cfg;
  cfg.kernel = parse_rfn_window(a.window, 2);
  cfg.tau = a.tau;
  cfg.signed_variant = a.signed_variant;
  Image vis = rfn_visualization(load_image(a.input), cfg);
  double top = 0.0;
  for (double v : vis.pixels()) top = std::max(top, v);
  vis.set_peak(top > 0.0 ? top : 1.0);
  save_output(vis, a.output);
}

struct EvalArgs {
  std::string ref, test;
  std::string metrics = "psnr,ssim";
  bool csv = false;
  bool quantize = false;
};

void run_eval(const EvalArgs& a) {
  const Image ref = load_image(a.ref);
  Image test = load_image(a.test);
  test.set_peak(ref.peak());
  std::vector<std::pair<std::string, double>> results;
  std::stringstream list(a.metrics);
  std::string name;
  while (std::getline(list, name, ',')) {
    if (name == "psnr") {
      results.emplace_back(name, psnr(ref, test, a.quantize));
    } else if (name == "ssim") {
      results.emplace_back(name, a.quantize ? ssim(quantize_8bit(ref), quantize_8bit(test)) : ssim(ref, test));
    } else {
      throw ConfigError("unknown metric '" + name + "'");
    }
  }
  std::cout.precision(10);
  if (a.csv) {
    for (std::size_t i = 0; i < results.size(); ++i) std::cout << (i ? "," : "") << results[i].first;
    std::cout << '\n';
    for (std::size_t i = 0; i < results.size(); ++i) std::cout << (i ? "," : "") << results[i].second;
    std::cout << '\n';
  } else {
    for (const auto& [metric, value] : results) std::cout << metric << ": " << value << '\n';
  }
}

struct BenchArgs {
  std::string dir;
  std::string noise = "awgn:25";
  std::string method = "btb:simple";
  std::string engine = "nlm:patch=1,search=5,h=10";
  std::string mu = "0.8";
  std::size_t max_iters = 40;
  std::string delta = "auto";
  double alpha = 0.4;
  double beta = 0.4;
  std::string window = "gaussian:15";
  double tau = 0.25;
  std::string out;
  std::uint64_t seed = 0;
};

BenchMethod make_bench_method(const BenchArgs& a) {
  const std::string& m = a.method;
  if (m == "single") {
    std::shared_ptr<const DenoiserEngine> engine = parse_engine(a.engine);
    return {"single " + csv_safe(engine->describe()),
            [engine](const Image& noisy, std::uint64_t) { return MethodResult{engine->denoise(noisy), 1}; }};
  }
  if (m.rfind("btb", 0) == 0) {
    BtbArgs b;
    b.mode = m.size() > 4 && m[3] == ':' ? m.substr(4) : "simple";
    b.mu = a.mu;
    b.max_iters = a.max_iters;
    b.delta = a.delta;
    const IterationConfig cfg = make_iteration_config(b);
    std::shared_ptr<const DenoiserEngine> engine = parse_engine(a.engine);
    std::ostringstream id;
    id << "btb-" << to_string(cfg.mode) << " mu=" << csv_safe(a.mu) << " " << csv_safe(engine->describe());
    return {id.str(), [engine, cfg](const Image& noisy, std::uint64_t seed) {
              IterationConfig run_cfg = cfg;
              run_cfg.seed = seed;
              IterationTrace trace = btb_run(noisy, *engine, run_cfg);
              return MethodResult{trace.final_image(), trace.iters_run};
            }};
  }
  if (m == "vortice" || m == "focused") {
    DespeckleArgs d;
    d.alpha = a.alpha;
    d.beta = a.beta;
    d.window = a.window;
    d.tau = a.tau;
    d.iters = a.max_iters;
    d.delta = a.delta;
    const VorticeConfig cfg = make_vortice_config(d);
    std::ostringstream id;
    id << m << " alpha=" << a.alpha;
    if (m == "focused") id << " beta=" << a.beta;
    id << ' ' << a.window;
    return {id.str(), [m, cfg](const Image& noisy, std::uint64_t) {
              IterationTrace trace = run_despeckle_algo(m, noisy, cfg);
              return MethodResult{trace.final_image(), trace.iters_run};
            }};
  }
  throw ConfigError("--method expects single, btb[:mode], vortice or focused");
}

void run_bench(const BenchArgs& a) {
  const BenchMethod method = make_bench_method(a);
  const NoiseSpec noise = parse_noise_spec(a.noise, a.seed);
  const auto images = list_images(a.dir);
  if (images.empty()) throw IoError("no images in " + a.dir);
  const auto rows = run_benchmark(images, noise, method);
  if (a.out.empty()) {
    write_benchmark_csv(std::cout, rows);
  } else {
    std::ofstream out(a.out);
    if (!out) throw IoError("cannot write " + a.out);
    write_benchmark_csv(out, rows);
  }
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Fixed-point denoising and RFN despeckling toolkit"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Corrupt an image or simulate a speckled tomogram");
  s->add_option("kind", synth.kind, "awgn | poisson | speckle | tomogram")
      ->required()
      ->check(CLI::IsMember({"awgn", "poisson", "speckle", "tomogram"}));
  s->add_option("files", synth.files, "input and output (tomogram: output only)")->required();
  s->add_option("--sigma", synth.sigma, "AWGN standard deviation in pixel units");
  s->add_option("--seed", synth.seed, "random seed");
  s->add_option("--scene", synth.scene_path, "scene file (tomogram)");
  s->add_option("--clean", synth.clean_out, "also write the speckle-free reference (tomogram)");

  BtbArgs btb;
  auto* b = app.add_subcommand("btb", "Fixed-point denoising loop");
  b->add_option("input", btb.input)->required();
  b->add_option("output", btb.output)->required();
  b->add_option("--mode", btb.mode, "successive | simple | anchored | langevin")->capture_default_str();
  b->add_option("--mu", btb.mu, "step size, or a comma list with one per iteration")->capture_default_str();
  b->add_option("--engine", btb.engine, "denoiser spec")->capture_default_str();
  b->add_option("--max-iters", btb.max_iters)->capture_default_str();
  b->add_option("--delta", btb.delta, "step-norm stop threshold or 'auto'")->capture_default_str();
  b->add_option("--trace", btb.trace, "write iter,step_norm,psnr CSV");
  b->add_option("--ref", btb.ref, "clean reference for PSNR reporting");
  b->add_option("--beta", btb.beta, "Langevin noise scale")->capture_default_str();
  b->add_option("--seed", btb.seed)->capture_default_str();
  b->add_option("--color", btb.color, "luma | all")->capture_default_str();

  DespeckleArgs desp;
  auto* d = app.add_subcommand("despeckle", "RFN-based despeckling");
  d->add_option("input", desp.input)->required();
  d->add_option("output", desp.output)->required();
  d->add_option("--algo", desp.algo, "vortice | focused")->capture_default_str();
  d->add_option("--alpha", desp.alpha)->capture_default_str();
  d->add_option("--beta", desp.beta)->capture_default_str();
  d->add_option("--window", desp.window, "gaussian:L | rect:L")->capture_default_str();
  d->add_option("--tau", desp.tau)->capture_default_str();
  d->add_option("--signed", desp.signed_variant)->capture_default_str();
  d->add_option("--iters", desp.iters)->capture_default_str();
  d->add_option("--delta", desp.delta)->capture_default_str();
  d->add_option("--trace", desp.trace);
  d->add_option("--ref", desp.ref);

  RfnArgs rfn;
  auto* r = app.add_subcommand("rfn", "Write the |normalized - 1| map");
  r->add_option("input", rfn.input)->required();
  r->add_option("output", rfn.output)->required();
  r->add_option("--window", rfn.window)->capture_default_str();
  r->add_option("--tau", rfn.tau)->capture_default_str();
  r->add_option("--signed", rfn.signed_variant)->capture_default_str();

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Compare a test image with a reference");
  e->add_option("--ref", ev.ref)->required();
  e->add_option("--test", ev.test)->required();
  e->add_option("--metrics", ev.metrics)->capture_default_str();
  e->add_flag("--csv", ev.csv, "print a header line and a value line");
  e->add_flag("--quantize-metrics", ev.quantize, "score 8-bit rounded images");

  BenchArgs bench;
  auto* be = app.add_subcommand("bench", "Noise + restore + score every image in a directory");
  be->add_option("--dir", bench.dir)->required();
  be->add_option("--noise", bench.noise)->capture_default_str();
  be->add_option("--method", bench.method, "single | btb[:mode] | vortice | focused")->capture_default_str();
  be->add_option("--engine", bench.engine)->capture_default_str();
  be->add_option("--mu", bench.mu)->capture_default_str();
  be->add_option("--max-iters", bench.max_iters)->capture_default_str();
  be->add_option("--delta", bench.delta)->capture_default_str();
  be->add_option("--alpha", bench.alpha)->capture_default_str();
  be->add_option("--beta", bench.beta)->capture_default_str();
  be->add_option("--window", bench.window)->capture_default_str();
  be->add_option("--tau", bench.tau)->capture_default_str();
  be->add_option("--out", bench.out, "CSV path (stdout when omitted)");
  be->add_option("--seed", bench.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 2;
  }

  try {
    if (*s) run_synth(synth);
    else if (*b) run_btb(btb);
    else if (*d) run_despeckle(desp);
    else if (*r) run_rfn(rfn);
    else if (*e) run_eval(ev);
    else if (*be) run_bench(bench);
  } catch (const ConfigError& err) {
    std::cerr << "btb: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "btb: " << err.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace btb
