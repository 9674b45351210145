#pragma once

#include <map>
#include <optional>
#include <string>

#include "saptvqe/sapt.hpp"

namespace saptvqe {

// Key-value job configuration. The file format is a TOML subset: [section]
// headers, `key = value` pairs, `#` comments, double-quoted strings, plain
// numbers and booleans. Grammar in docs/formats.md.
struct JobConfig {
    std::string dimer_xyz_path;
    std::string basis_path;
    std::string basis_name;
    MethodSpec method_a, method_b;
    int charge_a = 0, charge_b = 0;
    bool run_supermolecular = false;
    bool run_naive_oracle = false;
    bool run_measurement_plan = false;
    std::string output_path = "sapt_report.json";
};

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Flat section.key -> raw string value view of a TOML-subset document.
std::map<std::string, std::string> parse_key_values(const std::string& text);

JobConfig parse_job_config(const std::string& text);

// Resolves relative paths against the config file's directory and loads
// geometry and basis data.
SaptJob load_job(const JobConfig& config, const std::string& config_dir);

} // namespace saptvqe
