#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commsuccess/errors.hpp"
#include "commsuccess/model.hpp"

namespace commsuccess {

// Pipeline configuration, loadable from a TOML-like key = value file.
struct PipelineConfig {
    int k_min = 10;
    int k_max = 100;
    int k_step = 10;
    std::vector<double> lambda_grid = default_lambda_grid();
    int folds = 10;
    std::uint64_t seed = 1;
    double split_fraction = 0.8;
    int success_months = 24;  // horizon for the monthly partition
    double qualification_days = 90.0;

    std::vector<int> k_values() const {
        if (k_min < 1 || k_step < 1 || k_max < k_min)
            throw ConfigError("invalid k range: " + std::to_string(k_min) + ".." +
                              std::to_string(k_max) + " step " + std::to_string(k_step));
        std::vector<int> ks;
        for (int k = k_min; k <= k_max; k += k_step) ks.push_back(k);
        return ks;
    }
};

inline PipelineConfig load_config(std::istream& in) {
    PipelineConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: missing '=' on line " + std::to_string(lineno));
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "k_min") cfg.k_min = std::stoi(value);
            else if (key == "k_max") cfg.k_max = std::stoi(value);
            else if (key == "k_step") cfg.k_step = std::stoi(value);
            else if (key == "folds") cfg.folds = std::stoi(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "split_fraction") cfg.split_fraction = std::stod(value);
            else if (key == "success_months") cfg.success_months = std::stoi(value);
            else if (key == "qualification_days") cfg.qualification_days = std::stod(value);
            else if (key == "lambda_grid") {
                cfg.lambda_grid.clear();
                std::stringstream ss(value);
                std::string item;
                while (std::getline(ss, item, ',')) cfg.lambda_grid.push_back(std::stod(item));
                if (cfg.lambda_grid.empty()) throw ConfigError("config: empty lambda_grid");
            } else {
                throw ConfigError("config: unknown key '" + key + "' on line " +
                                  std::to_string(lineno));
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("config: bad value for '" + key + "' on line " +
                              std::to_string(lineno));
        }
    }
    return cfg;
}

inline PipelineConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return load_config(in);
}

}  // namespace commsuccess
