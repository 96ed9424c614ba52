#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hlsys/closed_forms.hpp"
#include "hlsys/exponents.hpp"
#include "hlsys/hls.hpp"
#include "hlsys/radial.hpp"
#include "hlsys/solver.hpp"
#include "hlsys/symmetry.hpp"

namespace hlsys {

inline constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a(const void* data, std::size_t len);
std::uint64_t fnv1a(const std::string& s);
std::string hex64(std::uint64_t v);

/// Profile CSV (columns r,value) plus a JSON sidecar {A, gamma, R_max, n}
/// at path + ".json".
void write_profile_csv(const std::string& path, const RadialFunction& f, int dim);
RadialFunction read_profile_csv(const std::string& path, int* dim_out = nullptr);

/// Column-oriented CSV writer.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

nlohmann::json to_json(const ExponentConfig& cfg);
ExponentConfig config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BubbleReport& r);
nlohmann::json to_json(const SingularReport& r);
nlohmann::json to_json(const ResidualReport& r);
nlohmann::json to_json(const DecayReport& r);
nlohmann::json to_json(const SolverReport& r);
nlohmann::json to_json(const AscentReport& r);
nlohmann::json to_json(const SymmetryReport& r, int dim);
nlohmann::json to_json(const ProbeParams& p);

} // namespace hlsys
