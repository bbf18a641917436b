#pragma once

// Command-line surface of the otmorph tool. Kept header-only so the test
// suites can drive it in-process.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "otmorph/selective.hpp"
#include "otmorph/synthetic.hpp"
#include "otmorph/token_io.hpp"
#include "otmorph/toydemo.hpp"
#include "otmorph/trajectory.hpp"

namespace otmorph::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kOutDirEnv = "OTMORPH_OUT_DIR";
inline constexpr const char* kDefaultOutDir = "otmorph_out";

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitIo = 3,
  kExitDimension = 4,
  kExitWeights = 5,
  kExitFormat = 6,
  kExitSolver = 7,
  kExitArgument = 8,
  kExitInternal = 70,
};

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return kExitIo;
    case ErrorCode::kDimensionMismatch: return kExitDimension;
    case ErrorCode::kInvalidWeights: return kExitWeights;
    case ErrorCode::kBadMagic:
    case ErrorCode::kTruncated:
    case ErrorCode::kMalformed: return kExitFormat;
    case ErrorCode::kSolverFailure: return kExitSolver;
    case ErrorCode::kInvalidArgument: return kExitArgument;
  }
  return kExitInternal;
}

/// Shortest round-trip decimal, always with a decimal point or exponent.
inline std::string format_real(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ec == std::errc() ? end : buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Everything needed to reproduce a run. Contains no timestamps or host
/// data, so a rerun produces the same bytes.
class RunManifest {
 public:
  RunManifest(std::string command, const std::vector<std::string>& argv) {
    doc_["tool"] = "otmorph";
    doc_["version"] = kToolVersion;
    doc_["command"] = std::move(command);
    doc_["argv"] = argv;
    doc_["config"] = ordered_json::object();
    doc_["inputs"] = ordered_json::array();
    doc_["outputs"] = ordered_json::array();
  }

  ordered_json& config() { return doc_["config"]; }
  ordered_json& operator[](const char* key) { return doc_[key]; }

  void add_input(const fs::path& path) {
    doc_["inputs"].push_back(
        {{"path", path.generic_string()}, {"fnv1a64", fnv1a64_hex(read_file_bytes(path))}});
  }
  void add_output(const fs::path& path) { doc_["outputs"].push_back(path.generic_string()); }

  void write(const fs::path& out_dir) const {
    write_file_bytes(out_dir / "manifest.json", doc_.dump(2) + "\n");
  }

 private:
  ordered_json doc_;
};

inline ordered_json barycenter_config_json(const BarycenterConfig& c) {
  return {{"max_iterations", c.max_iterations}, {"stop_threshold", c.stop_threshold},
          {"convergence_measure", "mean_squared_displacement"}};
}

inline ordered_json frame_diagnostics_json(const MorphTrajectory& t, const std::vector<std::string>& files) {
  auto frames = ordered_json::array();
  for (std::size_t a = 0; a < t.frames.size(); ++a) {
    frames.push_back({{"alpha", a},
                      {"beta", t.betas[a]},
                      {"iterations_used", t.diagnostics[a].iterations_used},
                      {"converged", t.diagnostics[a].converged},
                      {"objective", t.diagnostics[a].objective},
                      {"file", a < files.size() ? files[a] : ""}});
  }
  return frames;
}

inline ordered_json selection_json(const SelectionReport& r, bool with_decisions) {
  ordered_json j{{"tau", r.tau},
                 {"tokens", r.decisions.size()},
                 {"copied_from_source", r.copied_count()},
                 {"kept_barycenter", r.decisions.size() - r.copied_count()}};
  if (with_decisions) {
    auto list = ordered_json::array();
    for (const auto& d : r.decisions) {
      list.push_back({{"nearest_source", d.nearest_source},
                      {"nearest_target", d.nearest_target},
                      {"sim", d.sim},
                      {"kept_barycenter", d.kept_barycenter}});
    }
    j["decisions"] = std::move(list);
  }
  return j;
}

inline std::string indexed_name(const char* stem, std::size_t k, TokenFormat format) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%02zu", stem, k);
  return std::string(buf) + std::string(token_format_extension(format));
}

inline std::string tau_dir_name(double tau) { return "tau_" + format_real(tau); }

/// Built-in 2-D demo pair for the toy decoder: a five-lobed star morphing
/// into a twisted two-lobed blob.
inline std::pair<TokenSet, TokenSet> demo_pair(std::size_t n) {
  Matrix src(n, 2), tgt(n, 2);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    src(k, 0) = 0.45 * std::cos(5.0 * t);
    src(k, 1) = 0.0;
    tgt(k, 0) = 0.6 * std::cos(2.0 * t) - 0.2;
    tgt(k, 1) = 0.25 * std::sin(t);
  }
  return {TokenSet(std::move(src)), TokenSet(std::move(tgt))};
}

namespace detail {

struct MorphOptions {
  std::size_t frames = kDefaultIntermediateFrames;
  std::string init = "sequential";
  std::size_t max_iter = kDefaultMaxIterations;
  double tol = kDefaultStopThreshold;

  void attach(CLI::App* app) {
    app->add_option("--frames,-J", frames, "Intermediate frame count J (J+2 frames total)")
        ->capture_default_str();
    app->add_option("--init", init, "Initialization: sequential | linear-init | naive-lerp")
        ->capture_default_str();
    app->add_option("--max-iter", max_iter, "Barycenter iteration cap")->capture_default_str();
    app->add_option("--tol", tol, "Stop threshold (mean squared displacement)")->capture_default_str();
  }

  MorphConfig config() const {
    MorphConfig c;
    c.intermediate_frames = frames;
    const auto mode = parse_init_mode(init);
    if (!mode) throw ArgumentError("unknown --init mode '" + init + "'");
    c.init_mode = *mode;
    c.barycenter.max_iterations = max_iter;
    c.barycenter.stop_threshold = tol;
    c.barycenter.validate(2);
    return c;
  }

  ordered_json json() const {
    MorphConfig c = config();
    ordered_json j{{"J", frames}, {"frame_count", c.frame_count()}, {"init_mode", init_mode_name(c.init_mode)}};
    j["barycenter"] = barycenter_config_json(c.barycenter);
    auto betas = ordered_json::array();
    for (std::size_t a = 0; a < c.frame_count(); ++a) betas.push_back(c.beta(a));
    j["betas"] = std::move(betas);
    return j;
  }
};

struct OutputOptions {
  std::string out_dir;
  std::string format = "json";

  void attach(CLI::App* app) {
    app->add_option("--out-dir", out_dir, std::string("Output directory (default $") + kOutDirEnv +
                                              " or " + kDefaultOutDir + ")");
    app->add_option("--format", format, "Token file format: json | binary")->capture_default_str();
  }

  fs::path dir() const {
    if (!out_dir.empty()) return out_dir;
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
    return kDefaultOutDir;
  }

  TokenFormat token_format() const {
    const auto f = parse_token_format(format);
    if (!f) throw ArgumentError("unknown --format '" + format + "'");
    return *f;
  }
};

inline void check_tau(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ArgumentError("tau must lie in [0, 1]");
}

}  // namespace detail

/// Runs one CLI invocation. `args` excludes the program name. Returns the
/// process exit status; errors are reported as a single line on `err`:
///   otmorph: error code=<name> exit=<status> message="<text>"
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"otmorph: optimal-transport barycenter morphing of token sets", "otmorph"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  // dist
  std::string dist_a, dist_b;
  detail::OutputOptions dist_out;
  auto* dist = app.add_subcommand("dist", "Print the 2-Wasserstein distance between two token files");
  dist->add_option("A", dist_a)->required();
  dist->add_option("B", dist_b)->required();
  dist_out.attach(dist);

  // barycenter
  std::string bar_a, bar_b, bar_init = "source";
  double bar_beta = 0.5;
  detail::MorphOptions bar_opts;
  detail::OutputOptions bar_out;
  auto* bary = app.add_subcommand("barycenter", "Pairwise free-support barycenter at weight beta");
  bary->add_option("A", bar_a)->required();
  bary->add_option("B", bar_b)->required();
  bary->add_option("--beta", bar_beta, "Target weight in [0,1]")->required();
  bary->add_option("--init", bar_init, "Initial support: source | target | lerp | <token file>")
      ->capture_default_str();
  bary->add_option("--max-iter", bar_opts.max_iter)->capture_default_str();
  bary->add_option("--tol", bar_opts.tol)->capture_default_str();
  bar_out.attach(bary);

  // morph
  std::string mor_a, mor_b;
  double mor_tau = -1.0;
  detail::MorphOptions mor_opts;
  detail::OutputOptions mor_out;
  auto* morph = app.add_subcommand("morph", "Geometry trajectory (and optional texture selection)");
  morph->add_option("A", mor_a)->required();
  morph->add_option("B", mor_b)->required();
  mor_opts.attach(morph);
  auto* mor_tau_opt = morph->add_option("--tau", mor_tau, "Also emit selected texture tokens at this tau");
  mor_out.attach(morph);

  // texture-select
  std::string ts_z, ts_a, ts_b;
  double ts_tau = kDefaultTau;
  detail::OutputOptions ts_out;
  auto* tsel = app.add_subcommand("texture-select", "Similarity-gated token selection on one frame");
  tsel->add_option("Z", ts_z)->required();
  tsel->add_option("A", ts_a)->required();
  tsel->add_option("B", ts_b)->required();
  tsel->add_option("--tau", ts_tau)->capture_default_str();
  ts_out.attach(tsel);

  // sweep-tau
  std::string sw_a, sw_b;
  std::vector<double> sw_grid{0.2, 0.3, 0.4, 0.6, 0.8};
  detail::MorphOptions sw_opts;
  detail::OutputOptions sw_out;
  auto* sweep = app.add_subcommand("sweep-tau", "Texture selection over a grid of tau values");
  sweep->add_option("A", sw_a)->required();
  sweep->add_option("B", sw_b)->required();
  sweep->add_option("--grid", sw_grid, "Comma-separated tau values")->delimiter(',')->capture_default_str();
  sw_opts.attach(sweep);
  sw_out.attach(sweep);

  // gen-synthetic
  std::string gen_kind = "gaussian_blob";
  std::size_t gen_n = 16, gen_d = 2;
  std::uint64_t gen_seed = 0;
  detail::OutputOptions gen_out;
  auto* gen = app.add_subcommand("gen-synthetic", "Write a seeded synthetic token set (or pair)");
  gen->add_option("--kind", gen_kind, "gaussian_blob | two_cluster_swap_pair | ring")->capture_default_str();
  gen->add_option("--n", gen_n)->capture_default_str();
  gen->add_option("--d", gen_d)->capture_default_str();
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen_out.attach(gen);

  // demo
  std::vector<std::string> demo_files;
  std::size_t demo_n = 36;
  detail::MorphOptions demo_opts;
  detail::OutputOptions demo_out;
  auto* demo = app.add_subcommand("demo", "2-D morph rendered as an SVG strip via the toy decoder");
  demo->add_option("files", demo_files, "Optional source and target token files (d = 2)")->expected(0, 2);
  demo->add_option("--n", demo_n, "Token count of the built-in pair")->capture_default_str();
  demo_opts.attach(demo);
  demo_out.attach(demo);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "otmorph: error code=usage exit=" << kExitUsage << " message=\"" << msg << "\"\n";
    return kExitUsage;
  }

  try {
    if (dist->parsed()) {
      const fs::path dir = dist_out.dir();
      const TokenSet a = read_tokens(dist_a), b = read_tokens(dist_b);
      const double d = w2_distance(a, b);
      RunManifest manifest("dist", args);
      manifest.add_input(dist_a);
      manifest.add_input(dist_b);
      manifest["result"] = {{"w2", d}};
      manifest.write(dir);
      out << format_real(d) << "\n";
    } else if (bary->parsed()) {
      const fs::path dir = bar_out.dir();
      const TokenFormat format = bar_out.token_format();
      const TokenSet a = read_tokens(bar_a), b = read_tokens(bar_b);
      std::optional<TokenSet> init;
      if (bar_init == "source") {
        init = a;
      } else if (bar_init == "target") {
        init = b;
      } else if (bar_init == "lerp") {
        init = lerp_tokens(a, b, bar_beta);
      } else {
        init = read_tokens(bar_init);
      }
      BarycenterConfig cfg;
      cfg.max_iterations = bar_opts.max_iter;
      cfg.stop_threshold = bar_opts.tol;
      const auto result = pairwise_barycenter(a, b, bar_beta, *init, cfg);
      const std::string file = "barycenter" + std::string(token_format_extension(format));
      write_tokens(dir / file, result.support, format);

      RunManifest manifest("barycenter", args);
      manifest.add_input(bar_a);
      manifest.add_input(bar_b);
      if (bar_init != "source" && bar_init != "target" && bar_init != "lerp") manifest.add_input(bar_init);
      manifest.config() = barycenter_config_json(cfg);
      manifest.config()["beta"] = bar_beta;
      manifest.config()["init"] = bar_init;
      manifest.config()["format"] = bar_out.format;
      manifest["result"] = {{"iterations_used", result.iterations_used},
                            {"converged", result.converged},
                            {"objective", result.objective},
                            {"per_iteration_displacement", result.per_iteration_displacement}};
      manifest.add_output(file);
      manifest.write(dir);
      out << "iterations=" << result.iterations_used << " converged=" << (result.converged ? 1 : 0)
          << " objective=" << format_real(result.objective) << " out=" << (dir / file).generic_string()
          << "\n";
    } else if (morph->parsed()) {
      const fs::path dir = mor_out.dir();
      const TokenFormat format = mor_out.token_format();
      const bool with_texture = mor_tau_opt->count() > 0;
      if (with_texture) detail::check_tau(mor_tau);
      const MorphConfig cfg = mor_opts.config();
      const TokenSet a = read_tokens(mor_a), b = read_tokens(mor_b);
      const MorphTrajectory traj = morph_geometry(a, b, cfg);

      RunManifest manifest("morph", args);
      manifest.add_input(mor_a);
      manifest.add_input(mor_b);
      manifest.config() = mor_opts.json();
      manifest.config()["tau"] = with_texture ? ordered_json(mor_tau) : ordered_json(nullptr);
      manifest.config()["format"] = mor_out.format;

      std::vector<std::string> files;
      ordered_json index{{"frame_count", traj.frames.size()}, {"frames", ordered_json::array()}};
      for (std::size_t k = 0; k < traj.frames.size(); ++k) {
        files.push_back(indexed_name("frame", k, format));
        write_tokens(dir / files.back(), traj.frames[k], format);
        manifest.add_output(files.back());
        index["frames"].push_back({{"alpha", k}, {"beta", traj.betas[k]}, {"file", files.back()}});
      }
      if (with_texture) {
        const auto reports = morph_texture(traj, a, b, mor_tau);
        auto sel = ordered_json::array();
        for (std::size_t k = 0; k < reports.size(); ++k) {
          const std::string f = indexed_name("texture", k, format);
          write_tokens(dir / f, reports[k].output, format);
          manifest.add_output(f);
          index["frames"][k]["texture_file"] = f;
          sel.push_back(selection_json(reports[k], false));
        }
        manifest["texture"] = std::move(sel);
      }
      write_file_bytes(dir / "index.json", index.dump(2) + "\n");
      manifest.add_output("index.json");
      manifest["frames"] = frame_diagnostics_json(traj, files);
      manifest["steps"] = traj.steps;
      manifest["step_ratio"] = step_ratio(traj.steps);
      manifest.write(dir);
      out << "frames=" << traj.frames.size() << " step_ratio=" << format_real(step_ratio(traj.steps))
          << " out=" << dir.generic_string() << "\n";
    } else if (tsel->parsed()) {
      const fs::path dir = ts_out.dir();
      const TokenFormat format = ts_out.token_format();
      detail::check_tau(ts_tau);
      const TokenSet z = read_tokens(ts_z), a = read_tokens(ts_a), b = read_tokens(ts_b);
      const SelectionReport report = selective_texture_tokens(z, a, b, ts_tau);
      const std::string file = "selected" + std::string(token_format_extension(format));
      write_tokens(dir / file, report.output, format);
      write_file_bytes(dir / "selection.json", selection_json(report, true).dump(2) + "\n");
      RunManifest manifest("texture-select", args);
      manifest.add_input(ts_z);
      manifest.add_input(ts_a);
      manifest.add_input(ts_b);
      manifest.config() = {{"tau", ts_tau}, {"format", ts_out.format}};
      manifest.add_output(file);
      manifest.add_output("selection.json");
      manifest.write(dir);
      out << "copied=" << report.copied_count() << " kept=" << report.decisions.size() - report.copied_count()
          << " out=" << (dir / file).generic_string() << "\n";
    } else if (sweep->parsed()) {
      const fs::path dir = sw_out.dir();
      const TokenFormat format = sw_out.token_format();
      if (sw_grid.empty()) throw ArgumentError("--grid needs at least one tau");
      for (double t : sw_grid) detail::check_tau(t);
      const MorphConfig cfg = sw_opts.config();
      const TokenSet a = read_tokens(sw_a), b = read_tokens(sw_b);
      const MorphTrajectory traj = morph_geometry(a, b, cfg);

      RunManifest manifest("sweep-tau", args);
      manifest.add_input(sw_a);
      manifest.add_input(sw_b);
      manifest.config() = sw_opts.json();
      manifest.config()["grid"] = sw_grid;
      manifest.config()["format"] = sw_out.format;
      auto summary = ordered_json::array();
      for (double tau : sw_grid) {
        const std::string sub = tau_dir_name(tau);
        const auto reports = morph_texture(traj, a, b, tau);
        ordered_json report{{"tau", tau}, {"frames", ordered_json::array()}};
        std::size_t copied = 0;
        for (std::size_t k = 0; k < reports.size(); ++k) {
          const std::string f = sub + "/" + indexed_name("texture", k, format);
          write_tokens(dir / f, reports[k].output, format);
          manifest.add_output(f);
          auto fj = selection_json(reports[k], false);
          fj["file"] = f;
          report["frames"].push_back(std::move(fj));
          copied += reports[k].copied_count();
        }
        report["copied_from_source_total"] = copied;
        write_file_bytes(dir / sub / "report.json", report.dump(2) + "\n");
        manifest.add_output(sub + "/report.json");
        summary.push_back({{"tau", tau}, {"copied_from_source_total", copied}, {"report", sub + "/report.json"}});
        out << "tau=" << format_real(tau) << " copied=" << copied << "\n";
      }
      manifest["frames"] = frame_diagnostics_json(traj, {});
      manifest["sweep"] = std::move(summary);
      manifest.write(dir);
    } else if (gen->parsed()) {
      const fs::path dir = gen_out.dir();
      const TokenFormat format = gen_out.token_format();
      const auto kind = parse_synthetic_kind(gen_kind);
      if (!kind) throw ArgumentError("unknown --kind '" + gen_kind + "'");
      const auto sets = gen_synthetic(*kind, gen_n, gen_d, gen_seed);
      RunManifest manifest("gen-synthetic", args);
      manifest.config() = {{"kind", synthetic_kind_name(*kind)}, {"n", gen_n}, {"d", gen_d},
                           {"seed", gen_seed}, {"format", gen_out.format}};
      const std::string stem(synthetic_kind_name(*kind));
      const std::string ext(token_format_extension(format));
      std::vector<std::string> names;
      if (sets.size() == 1) {
        names = {stem + ext};
      } else {
        names = {stem + "_source" + ext, stem + "_target" + ext};
      }
      for (std::size_t k = 0; k < sets.size(); ++k) {
        write_tokens(dir / names[k], sets[k], format);
        manifest.add_output(names[k]);
        out << (dir / names[k]).generic_string() << "\n";
      }
      manifest.write(dir);
    } else if (demo->parsed()) {
      const fs::path dir = demo_out.dir();
      if (demo_files.size() == 1) throw ArgumentError("demo takes zero or two token files");
      const MorphConfig cfg = demo_opts.config();
      auto [a, b] = demo_files.empty() ? demo_pair(demo_n)
                                       : std::pair{read_tokens(demo_files[0]), read_tokens(demo_files[1])};
      if (a.dim() != 2 || b.dim() != 2) throw DimensionError("demo needs 2-D tokens");
      const MorphTrajectory traj = morph_geometry(a, b, cfg);
      std::vector<ToyShape> shapes;
      for (const auto& f : traj.frames) shapes.push_back(decode_tokens_to_shape(f));
      write_file_bytes(dir / "demo.svg", render_trajectory_svg(shapes));

      RunManifest manifest("demo", args);
      for (const auto& f : demo_files) manifest.add_input(f);
      manifest.config() = demo_opts.json();
      manifest.config()["builtin_pair_n"] = demo_files.empty() ? ordered_json(demo_n) : ordered_json(nullptr);
      manifest["frames"] = frame_diagnostics_json(traj, {});
      manifest["steps"] = traj.steps;
      manifest.add_output("demo.svg");
      manifest.write(dir);
      out << (dir / "demo.svg").generic_string() << "\n";
    }
  } catch (const Error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::replace(msg.begin(), msg.end(), '"', '\'');
    const int status = exit_code_for(e.code());
    err << "otmorph: error code=" << error_code_name(e.code()) << " exit=" << status << " message=\""
        << msg << "\"\n";
    return status;
  } catch (const fs::filesystem_error& e) {
    err << "otmorph: error code=io exit=" << kExitIo << " message=\"" << e.what() << "\"\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "otmorph: error code=internal exit=" << kExitInternal << " message=\"" << e.what() << "\"\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace otmorph::cli
