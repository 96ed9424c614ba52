#include "hlsys/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hlsys {

std::uint64_t fnv1a(const void* data, std::size_t len) {
    const unsigned char* b = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= b[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a(const std::string& s) { return fnv1a(s.data(), s.size()); }

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

void write_profile_csv(const std::string& path, const RadialFunction& f, int dim) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_profile_csv: cannot open " + path);
    out << "r,value\n";
    char buf[64];
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", f.grid->nodes[i], f.values[i]);
        out << buf;
    }
    if (!out) throw std::runtime_error("write_profile_csv: write failed for " + path);

    nlohmann::json side;
    side["A"] = f.tail.A;
    side["gamma"] = f.tail.gamma;
    side["R_max"] = f.grid->r_max;
    side["n"] = dim;
    std::ofstream sout(path + ".json");
    sout << side.dump(2) << "\n";
}

RadialFunction read_profile_csv(const std::string& path, int* dim_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_profile_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_profile_csv: empty file " + path);
    std::vector<double> rs, vals;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("read_profile_csv: malformed row in " + path);
        rs.push_back(std::stod(line.substr(0, comma)));
        vals.push_back(std::stod(line.substr(comma + 1)));
    }
    RadialFunction f;
    f.grid = grid_from_nodes(std::move(rs));
    f.values = std::move(vals);

    std::ifstream side(path + ".json");
    if (side) {
        nlohmann::json j;
        side >> j;
        f.tail.A = j.value("A", 0.0);
        f.tail.gamma = j.value("gamma", 0.0);
        if (!(f.tail.gamma > 0)) f.tail = TailModel{};
        if (dim_out) *dim_out = j.value("n", 0);
    } else if (dim_out) {
        *dim_out = 0;
    }
    return f;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size())
        throw std::invalid_argument("write_csv: header/column count mismatch");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    for (std::size_t c = 0; c < header.size(); ++c)
        out << header[c] << (c + 1 < header.size() ? ',' : '\n');
    std::size_t rows = 0;
    for (const auto& col : columns) rows = std::max(rows, col.size());
    char buf[48];
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (r < columns[c].size()) {
                std::snprintf(buf, sizeof buf, "%.17g", columns[c][r]);
                out << buf;
            }
            out << (c + 1 < columns.size() ? ',' : '\n');
        }
    }
}

nlohmann::json to_json(const ExponentConfig& cfg) {
    return {{"n", cfg.n}, {"alpha", cfg.alpha}, {"p", cfg.p}, {"q", cfg.q}};
}

ExponentConfig config_from_json(const nlohmann::json& j) {
    const int n = j.at("n").get<int>();
    const double alpha = j.at("alpha").get<double>();
    if (j.contains("p")) {
        ExponentConfig cfg = make_config(n, alpha, j.at("p").get<double>());
        if (j.contains("q")) {
            const double q = j.at("q").get<double>();
            if (std::fabs(q - cfg.q) > 1e-9 * std::max(1.0, std::fabs(cfg.q)))
                throw std::invalid_argument("config_from_json: supplied q violates the critical relation");
        }
        return cfg;
    }
    if (j.contains("p0")) return make_config_from_p0(n, alpha, j.at("p0").get<double>());
    throw std::invalid_argument("config_from_json: need p or p0");
}

nlohmann::json to_json(const BubbleReport& r) {
    return {{"ratio_mean", r.ratio_mean}, {"ratio_spread", r.ratio_spread},
            {"samples", r.radii.size()}};
}

nlohmann::json to_json(const SingularReport& r) {
    return {{"c_u", r.pair.c_u},         {"c_v", r.pair.c_v},
            {"exponent_u", r.pair.exp_u}, {"exponent_v", r.pair.exp_v},
            {"gamma_u", r.gamma_u},       {"gamma_v", r.gamma_v},
            {"flat_u", r.flat_u},         {"flat_v", r.flat_v},
            {"residual", r.residual},
            {"annulus", {r.annulus_lo, r.annulus_hi}}};
}

nlohmann::json to_json(const ResidualReport& r) {
    return {{"sup_u", r.sup_u}, {"sup_v", r.sup_v}, {"lp_u", r.lp_u},
            {"lq_v", r.lq_v},   {"max_rel", r.max_rel()}};
}

nlohmann::json to_json(const DecayReport& r) {
    return {{"gamma_u", r.gamma_u}, {"gamma_v", r.gamma_v}, {"drop_u", r.drop_u},
            {"drop_v", r.drop_v},   {"decays", r.decays}};
}

nlohmann::json to_json(const SolverReport& r) {
    return {{"converged", r.converged},
            {"iterations", r.iterations},
            {"final_change", r.change_history.empty() ? 0.0 : r.change_history.back()},
            {"damping_final", r.damping_final},
            {"damping_halved", r.damping_halved},
            {"amplitude", r.amplitude},
            {"residual", to_json(r.residual)},
            {"decay", to_json(r.decay)}};
}

nlohmann::json to_json(const AscentReport& r) {
    return {{"final_j", r.final_j},
            {"half_steps", r.half_steps},
            {"converged", r.converged}};
}

nlohmann::json to_json(const SymmetryReport& r, int dim) {
    nlohmann::json center = nlohmann::json::array();
    nlohmann::json err = nlohmann::json::array();
    nlohmann::json lp = nlohmann::json::array();
    nlohmann::json lm = nlohmann::json::array();
    for (int a = 0; a < dim; ++a) {
        center.push_back(r.center[a]);
        err.push_back(r.center_err[a]);
        lp.push_back(r.lambda_plus[a]);
        lm.push_back(r.lambda_minus[a]);
    }
    return {{"center", center},
            {"center_err", err},
            {"lambda_plus", lp},
            {"lambda_minus", lm},
            {"radial_decrease", r.radial_decrease},
            {"worst_violation", r.worst_violation},
            {"violation_at", {r.violation_at[0], r.violation_at[1], r.violation_at[2]}}};
}

nlohmann::json to_json(const ProbeParams& p) {
    return {{"dim", p.dim}, {"alpha", p.alpha}, {"beta", p.beta}, {"r", p.r},
            {"a", p.a},     {"b", p.b},         {"R", p.R},       {"p", p.p}};
}

} // namespace hlsys
