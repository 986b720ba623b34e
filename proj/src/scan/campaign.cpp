#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "artqr/error.hpp"
#include "artqr/scan/scan.hpp"

namespace artqr::scan {

using nlohmann::json;

namespace {

bool decodes_to(const GrayImage& img, const qr::Message& expected, const decode::DecodeParams& params) {
  try {
    return decode::standard_decode(img, params).bytes == expected.bytes;
  } catch (const Error&) {
    return false;
  }
}

json to_json(const Scenario& s) {
  return {{"display_size_cm", s.display_size_cm}, {"angle_deg", s.angle_deg},     {"dpi", s.dpi},
          {"noise_sigma", s.noise_sigma},         {"blur_radius", s.blur_radius}, {"trials", s.trials},
          {"seed", s.seed},                       {"display_dpi", s.display_dpi}};
}

Scenario from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "scenario entries must be JSON objects");
  Scenario s;
  s.display_size_cm = j.value("display_size_cm", s.display_size_cm);
  s.angle_deg = j.value("angle_deg", s.angle_deg);
  s.dpi = j.value("dpi", s.dpi);
  s.noise_sigma = j.value("noise_sigma", s.noise_sigma);
  s.blur_radius = j.value("blur_radius", s.blur_radius);
  s.trials = j.value("trials", s.trials);
  s.seed = j.value("seed", s.seed);
  s.display_dpi = j.value("display_dpi", s.display_dpi);
  s.validate();
  return s;
}

}  // namespace

CampaignReport run_campaign(const GrayImage& img, const qr::Message& expected, std::span<const Scenario> scenarios,
                            const decode::DecodeParams& params) {
  if (scenarios.empty()) throw Error(ErrorCode::InvalidArgument, "run_campaign: no scenarios");
  CampaignReport report;
  for (const Scenario& sc : scenarios) {
    const GrayImage base = project(img, sc);
    CampaignRow row{sc, 0, sc.trials, 0.0};
    if (sc.noise_sigma == 0) {
      // Without noise every trial sees the same raster.
      row.successes = decodes_to(base.quantized(), expected, params) ? sc.trials : 0;
    } else {
      for (int t = 0; t < sc.trials; ++t) {
        std::mt19937_64 rng = trial_rng(sc.seed, t);
        if (decodes_to(add_noise(base, sc.noise_sigma, rng), expected, params)) ++row.successes;
      }
    }
    row.rate = static_cast<double>(row.successes) / row.trials;
    report.rows.push_back(row);
  }
  return report;
}

std::vector<Scenario> scenario_grid(std::span<const double> sizes_cm, std::span<const double> angles_deg,
                                    const Scenario& base) {
  std::vector<Scenario> out;
  for (double size : sizes_cm) {
    for (double angle : angles_deg) {
      Scenario s = base;
      s.display_size_cm = size;
      s.angle_deg = angle;
      out.push_back(s);
    }
  }
  return out;
}

std::vector<Scenario> parse_scenarios(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("scenario file: ") + e.what());
  }
  if (!j.is_array()) throw Error(ErrorCode::InvalidArgument, "scenario file must hold a JSON array");
  std::vector<Scenario> out;
  try {
    for (const json& item : j) out.push_back(from_json(item));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("scenario file: ") + e.what());
  }
  return out;
}

std::string scenarios_to_json(std::span<const Scenario> scenarios) {
  json j = json::array();
  for (const Scenario& s : scenarios) j.push_back(to_json(s));
  return j.dump(2);
}

std::string report_to_json(const CampaignReport& report) {
  json rows = json::array();
  for (const CampaignRow& r : report.rows) {
    rows.push_back({{"scenario", to_json(r.scenario)}, {"successes", r.successes}, {"trials", r.trials}, {"rate", r.rate}});
  }
  return json{{"rows", rows}}.dump(2);
}

void write_table(std::ostream& out, const CampaignReport& report) {
  out << std::left << std::setw(10) << "size_cm" << std::setw(8) << "angle" << std::setw(8) << "dpi" << std::setw(8)
      << "noise" << std::setw(8) << "blur" << std::setw(12) << "successes" << "rate\n";
  for (const CampaignRow& r : report.rows) {
    std::ostringstream succ;
    succ << r.successes << '/' << r.trials;
    out << std::left << std::setw(10) << r.scenario.display_size_cm << std::setw(8) << r.scenario.angle_deg
        << std::setw(8) << r.scenario.dpi << std::setw(8) << r.scenario.noise_sigma << std::setw(8)
        << r.scenario.blur_radius << std::setw(12) << succ.str() << std::fixed << std::setprecision(3) << r.rate
        << std::defaultfloat << '\n';
  }
}

}  // namespace artqr::scan
