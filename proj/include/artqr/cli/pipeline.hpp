#pragma once

#include <string>
#include <vector>

#include "artqr/decode/sampler.hpp"
#include "artqr/qab/qab.hpp"

namespace artqr::cli {

/// Grid geometry and module layout written next to a blueprint PNG.
struct Sidecar {
  decode::ModuleGrid grid;
  qr::CodeTarget reorganized;
  std::vector<int> u_map;
  qab::MarkerStyle marker_style = qab::MarkerStyle::Square;
  double eta = 0.6;
  int window = 5;
};

std::string sidecar_to_json(const qab::Blueprint& bp, const decode::DecodeParams& params);
Sidecar parse_sidecar(const std::string& json_text);

/// Entry point of the artqr tool. Returns 0 on success, 1 on domain errors and
/// 2 on I/O errors.
int run_cli(int argc, const char* const* argv);

}  // namespace artqr::cli
