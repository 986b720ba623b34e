#include "artqr/cli/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "artqr/decode/detector.hpp"
#include "artqr/error.hpp"
#include "artqr/png_io.hpp"
#include "artqr/refine/refine.hpp"
#include "artqr/scan/scan.hpp"

namespace artqr::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sidecar_to_json(const qab::Blueprint& bp, const decode::DecodeParams& params) {
  const qr::CodeTarget& t = bp.reorganized;
  json u = json::array();
  for (int r = 0; r < t.n; ++r) {
    json row = json::array();
    for (int c = 0; c < t.n; ++c) row.push_back(bp.u(r, c));
    u.push_back(row);
  }
  std::string bits;
  bits.reserve(t.bits.size());
  for (auto b : t.bits) bits.push_back(b ? '1' : '0');
  const json j{{"n", bp.grid.n},
               {"a", bp.grid.a},
               {"eta", params.eta().value()},
               {"window", params.window()},
               {"version", t.version},
               {"ec_level", std::string(qr::to_string(t.ec_level))},
               {"mask", t.mask},
               {"origin", {bp.grid.origin_x, bp.grid.origin_y}},
               {"marker_style", std::string(qab::to_string(bp.marker_style))},
               {"u_map", u},
               {"reorganized", bits}};
  return j.dump(1);
}

Sidecar parse_sidecar(const std::string& json_text) {
  try {
    const json j = json::parse(json_text);
    Sidecar s;
    const int version = j.at("version").get<int>();
    const qr::Layout& lay = qr::layout_for(version);
    s.grid = {j.at("n").get<int>(), j.at("a").get<int>(), j.at("origin").at(0).get<int>(),
              j.at("origin").at(1).get<int>()};
    if (s.grid.n != lay.n) throw Error(ErrorCode::DimensionMismatch, "sidecar: n does not match version");
    s.eta = j.at("eta").get<double>();
    s.window = j.at("window").get<int>();
    s.marker_style = qab::parse_marker_style(j.value("marker_style", std::string("square")));
    qr::CodeTarget& t = s.reorganized;
    t.n = lay.n;
    t.version = version;
    t.ec_level = qr::parse_ec_level(j.at("ec_level").get<std::string>());
    t.mask = j.at("mask").get<int>();
    t.roles = lay.roles;
    const auto bits = j.at("reorganized").get<std::string>();
    if (bits.size() != lay.roles.size()) throw Error(ErrorCode::DimensionMismatch, "sidecar: bit string length");
    for (char ch : bits) {
      if (ch != '0' && ch != '1') throw Error(ErrorCode::InvalidArgument, "sidecar: bits must be 0/1");
      t.bits.push_back(ch == '1' ? 1 : 0);
    }
    for (const auto& row : j.at("u_map")) {
      for (const auto& v : row) s.u_map.push_back(v.get<int>());
    }
    if (s.u_map.size() != bits.size()) throw Error(ErrorCode::DimensionMismatch, "sidecar: u_map size");
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("sidecar: ") + e.what());
  }
}

namespace {

struct Shared {
  double eta = 0.6;
  int version = qr::kDefaultVersion;
  int module_px = 16;
  int window = 0;  // 0: a / 3
  std::optional<std::uint64_t> seed;
  std::string ec_level = "H";
  int mask = 0;
  std::string message;

  decode::DecodeParams params() const {
    return decode::DecodeParams(eta, window > 0 ? window : decode::DecodeParams::default_window(module_px));
  }
  qr::Message msg() const { return qr::Message::from_text(message, qr::parse_ec_level(ec_level), version); }
};

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw Error(ErrorCode::InvalidArgument, std::string("missing ") + what + " path");
  if (!fs::exists(path)) throw Error(ErrorCode::Io, std::string(what) + " not found: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) throw Error(ErrorCode::Io, "cannot write " + path);
}

std::string sidecar_path_for(const std::string& png) { return fs::path(png).replace_extension(".json").string(); }

void log_config(const CLI::App& app) {
  std::istringstream lines(app.config_to_str(true, false));
  for (std::string line; std::getline(lines, line);) {
    if (!line.empty()) std::cerr << "config: " << line << '\n';
  }
}

qab::Blueprint blueprint_from(const Sidecar& s, GrayImage image) {
  qab::Blueprint bp;
  bp.image = std::move(image);
  bp.grid = s.grid;
  bp.reorganized = s.reorganized;
  bp.u_map = s.u_map;
  bp.marker_style = s.marker_style;
  bp.grid.require_fits(bp.image);
  return bp;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Aesthetic QR blueprints, refinement and scanner simulation", "artqr"};
  app.set_config("--config", "", "Flat key=value file with flag defaults");
  app.require_subcommand(1);
  app.fallthrough();

  Shared sh;
  app.add_option("--eta", sh.eta, "Scanner strictness in (0, 1)")->capture_default_str();
  app.add_option("--version", sh.version, "QR version")->capture_default_str();
  app.add_option("--module-px", sh.module_px, "Module size a in pixels")->capture_default_str();
  app.add_option("--window", sh.window, "Sampling window x in pixels (default a/3)");
  app.add_option("--seed", sh.seed, "Seed for simulate (overrides scenario seeds)");
  app.add_option("--ec-level", sh.ec_level, "Error correction level L|M|Q|H")->capture_default_str();
  app.add_option("--mask", sh.mask, "Mask pattern 0..7")->capture_default_str();
  app.add_option("--message", sh.message, "Message text");

  std::string out_path;
  std::string sidecar;

  auto* encode = app.add_subcommand("encode", "Render the plain code as PNG");
  int quiet = 0;
  encode->add_option("--out", out_path, "Output PNG")->required();
  encode->add_option("--quiet-zone", quiet, "White border in modules")->capture_default_str();

  auto* blueprint = app.add_subcommand("blueprint", "Fuse a guidance image with the code");
  std::string guidance;
  std::string style = "square";
  int u_min = qab::kDefaultMinControl;
  blueprint->add_option("--guidance", guidance, "Guidance PNG")->required();
  blueprint->add_option("--out", out_path, "Output PNG")->required();
  blueprint->add_option("--sidecar", sidecar, "Sidecar JSON (default: next to --out)");
  blueprint->add_option("--marker-style", style, "square|cross")->capture_default_str();
  blueprint->add_option("--u-min", u_min, "Smallest control square")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Report error level and decode result");
  std::string image_path;
  verify->add_option("--image", image_path, "PNG to check")->required();
  verify->add_option("--sidecar", sidecar, "Sidecar JSON with the module grid");

  auto* refine_cmd = app.add_subcommand("refine", "Refine a stylized image toward scannability");
  std::string stylized;
  std::string blueprint_png;
  std::string trace_path;
  refine::RefineConfig rcfg;
  refine::LossWeights weights;
  refine_cmd->add_option("--stylized", stylized, "Stylized PNG (gray or RGB)")->required();
  refine_cmd->add_option("--blueprint", blueprint_png, "Blueprint PNG")->required();
  refine_cmd->add_option("--sidecar", sidecar, "Blueprint sidecar JSON (default: next to --blueprint)");
  refine_cmd->add_option("--out", out_path, "Output PNG")->required();
  refine_cmd->add_option("--trace", trace_path, "Trace CSV (default: next to --out)");
  refine_cmd->add_option("--iterations", rcfg.iterations, "Adam steps")->capture_default_str();
  refine_cmd->add_option("--lr", rcfg.learning_rate, "Learning rate on luminance scaled to [0, 1]")->capture_default_str();
  refine_cmd->add_option("--lambda1", weights.lambda1, "Marker loss weight")->capture_default_str();
  refine_cmd->add_option("--lambda2", weights.lambda2, "Code loss weight")->capture_default_str();
  refine_cmd->add_option("--lambda3", weights.lambda3, "Harmonizing loss weight")->capture_default_str();
  refine_cmd->add_option("--margin", rcfg.code_margin, "Code loss margin in gray levels")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Synthetic scanning campaign");
  std::string scenarios_path;
  simulate->add_option("--image", image_path, "PNG to scan")->required();
  simulate->add_option("--scenarios", scenarios_path, "JSON array of scenarios")->required();
  simulate->add_option("--out", out_path, "Report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  log_config(app);

  try {
    const decode::DecodeParams params = sh.params();

    if (*encode) {
      const qr::CodeTarget t = qr::encode_message(sh.msg(), sh.mask);
      write_png(out_path, decode::render_target(t, sh.module_px, quiet));
      std::cout << "wrote " << out_path << " (" << t.n << "x" << t.n << " modules)\n";
      return 0;
    }

    if (*blueprint) {
      require_file(guidance, "guidance image");
      const GrayImage guide = read_png(guidance).to_gray();
      qab::BlueprintOptions opts;
      opts.module_px = sh.module_px;
      opts.mask = sh.mask;
      opts.u_min = u_min;
      opts.style = qab::parse_marker_style(style);
      const qab::Blueprint bp = qab::make_blueprint(guide, sh.msg(), params, opts);
      if (sidecar.empty()) sidecar = sidecar_path_for(out_path);
      write_png(out_path, bp.image);
      write_text(sidecar, sidecar_to_json(bp, params));
      std::cout << "wrote " << out_path << " and " << sidecar << '\n';
      std::cout << "e = " << decode::error_level(bp.image, bp.reorganized, bp.grid, params) << '\n';
      return 0;
    }

    if (*verify) {
      require_file(image_path, "image");
      const GrayImage img = read_png(image_path).to_gray();
      std::optional<Sidecar> side;
      if (!sidecar.empty()) {
        require_file(sidecar, "sidecar");
        side = parse_sidecar(read_text(sidecar));
      }
      const decode::DecodeParams vp =
          side && sh.window == 0 ? decode::DecodeParams(sh.eta, decode::DecodeParams::default_window(side->grid.a))
                                 : params;
      if (side) std::cout << "e = " << decode::error_level(img, side->reorganized, side->grid, vp) << '\n';
      const decode::DecodeReport rep = decode::standard_decode_report(img, vp);
      if (!side) {
        if (rep.grid) {
          const decode::DecodeParams gp = sh.window == 0 ? vp.with_window(decode::DecodeParams::default_window(rep.grid->a)) : vp;
          std::cout << "e = " << decode::error_level(img, rep.corrected, *rep.grid, gp) << '\n';
        } else {
          std::cout << "e = n/a (code is not on an axis-aligned pixel grid)\n";
        }
      }
      std::cout << "decoded: " << rep.message.text() << '\n';
      std::cout << "corrected errors: " << rep.corrected_errors << '\n';
      if (!sh.message.empty() && rep.message.bytes != sh.msg().bytes) {
        std::cerr << "error: decoded message differs from --message\n";
        return 1;
      }
      return 0;
    }

    if (*refine_cmd) {
      require_file(stylized, "stylized image");
      require_file(blueprint_png, "blueprint image");
      if (sidecar.empty()) sidecar = sidecar_path_for(blueprint_png);
      require_file(sidecar, "sidecar");
      const Sidecar side = parse_sidecar(read_text(sidecar));
      const qab::Blueprint bp = blueprint_from(side, read_png(blueprint_png).to_gray());
      rcfg.params = sh.window > 0 ? decode::DecodeParams(sh.eta, sh.window)
                                  : decode::DecodeParams(sh.eta, decode::DecodeParams::default_window(side.grid.a));
      const PngImage in = read_png(stylized);
      refine::RefineResult res;
      if (in.is_color()) {
        refine::RefineColorResult color = refine::refine_image(in.to_rgb(), bp, weights, rcfg);
        write_png(out_path, color.image);
        res = std::move(color.luma);
      } else {
        res = refine::refine_image(in.to_gray(), bp, weights, rcfg);
        write_png(out_path, res.image);
      }
      if (trace_path.empty()) trace_path = fs::path(out_path).replace_extension(".csv").string();
      std::ostringstream csv;
      refine::write_trace_csv(csv, res.trace);
      write_text(trace_path, csv.str());
      std::cout << "wrote " << out_path << " and " << trace_path << '\n';
      std::cout << "e = " << res.e << " (best iteration " << res.best_iteration << " of " << res.iterations_run << ")\n";
      return 0;
    }

    if (*simulate) {
      require_file(image_path, "image");
      require_file(scenarios_path, "scenario file");
      if (sh.message.empty()) throw Error(ErrorCode::InvalidArgument, "simulate needs --message");
      const GrayImage img = read_png(image_path).to_gray();
      auto scenarios = scan::parse_scenarios(read_text(scenarios_path));
      if (sh.seed) {
        for (auto& s : scenarios) s.seed = *sh.seed;
      }
      const scan::CampaignReport rep = scan::run_campaign(img, sh.msg(), scenarios, params);
      write_text(out_path, scan::report_to_json(rep));
      scan::write_table(std::cout, rep);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::Io ? 2 : 1;
  }
  return 1;
}

}  // namespace artqr::cli
