#pragma once

#include <span>
#include <string>
#include <vector>

#include "capinn/net/mlp.hpp"
#include "capinn/net/params.hpp"

#include "json.hpp"

namespace capinn::net {

nlohmann::json spec_to_json(const MlpSpec& spec);
MlpSpec spec_from_json(const nlohmann::json& j);

// Container format shared by parameter and optimizer-state files: one JSON
// header line, then the payload as little-endian float64.
void write_container(const std::string& path, const nlohmann::json& header,
                     std::span<const double> payload);
nlohmann::json read_container(const std::string& path, std::vector<double>& payload);

void save_params(const std::string& path, const MlpSpec& spec, const ParamSet& params);
ParamSet load_params(const std::string& path, MlpSpec* spec_out = nullptr);

}  // namespace capinn::net
