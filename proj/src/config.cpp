#include "saptvqe/config.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace saptvqe {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s, int lineno) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    if (!s.empty() && (s.front() == '"' || s.back() == '"'))
        throw ConfigError("unbalanced quotes on line " + std::to_string(lineno));
    return s;
}

int to_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("expected an integer for " + key + ", got '" + v + "'");
    }
}

double to_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("expected a number for " + key + ", got '" + v + "'");
    }
}

bool to_bool(const std::string& v, const std::string& key) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("expected true/false for " + key + ", got '" + v + "'");
}

MethodSpec parse_method(const std::map<std::string, std::string>& kv, const std::string& section,
                        std::uint64_t default_seed) {
    MethodSpec spec;
    spec.seed = default_seed;
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(section + "." + key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };
    const auto method = get("method");
    if (!method) throw ConfigError("missing " + section + ".method");
    if (*method == "rhf") {
        spec.kind = MethodSpec::Kind::Rhf;
    } else if (*method == "casci") {
        spec.kind = MethodSpec::Kind::Casci;
    } else if (*method == "vqe") {
        spec.kind = MethodSpec::Kind::Vqe;
    } else {
        throw ConfigError("unknown method '" + *method + "' in " + section);
    }
    if (auto v = get("n_below")) spec.n_below = to_int(*v, section + ".n_below");
    if (auto v = get("n_above")) spec.n_above = to_int(*v, section + ".n_above");
    if (auto v = get("k")) spec.layers = to_int(*v, section + ".k");
    if (auto v = get("gtol")) spec.gradient_tolerance = to_double(*v, section + ".gtol");
    if (auto v = get("max_iter")) spec.max_iterations = to_int(*v, section + ".max_iter");
    if (auto v = get("seed"))
        spec.seed = static_cast<std::uint64_t>(to_int(*v, section + ".seed"));
    if (auto v = get("init")) {
        if (*v == "rhf" || *v == "zeros") {
            spec.init = VqeInit::Reference;
        } else if (*v == "random") {
            spec.init = VqeInit::Random;
        } else {
            throw ConfigError("unknown init '" + *v + "' in " + section);
        }
    }
    if (spec.layers < 1) throw ConfigError(section + ".k must be >= 1");
    if (spec.n_below < 0 || spec.n_above < 0)
        throw ConfigError(section + " window extents must be >= 0");
    if (spec.gradient_tolerance <= 0)
        throw ConfigError(section + ".gtol must be positive");
    if (spec.max_iterations < 1) throw ConfigError(section + ".max_iter must be >= 1");
    return spec;
}

} // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip comments outside quotes
        bool quoted = false;
        std::string stripped;
        for (char c : line) {
            if (c == '"') quoted = !quoted;
            if (c == '#' && !quoted) break;
            stripped.push_back(c);
        }
        const std::string t = trim(stripped);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("malformed section header on line " + std::to_string(lineno));
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError("empty section name on line " + std::to_string(lineno));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value on line " + std::to_string(lineno));
        const std::string key = trim(t.substr(0, eq));
        const std::string value = unquote(trim(t.substr(eq + 1)), lineno);
        if (key.empty()) throw ConfigError("empty key on line " + std::to_string(lineno));
        const std::string full = section.empty() ? key : section + "." + key;
        if (kv.count(full)) throw ConfigError("duplicate key '" + full + "'");
        kv[full] = value;
    }
    return kv;
}

JobConfig parse_job_config(const std::string& text) {
    const auto kv = parse_key_values(text);
    // reject monomer sections beyond the two expected ones
    for (const auto& [key, value] : kv) {
        (void)value;
        if (key.rfind("monomer", 0) == 0) {
            const std::string sec = key.substr(0, key.find('.'));
            if (sec != "monomer1" && sec != "monomer2")
                throw ConfigError("unexpected section '" + sec +
                                  "': exactly two monomers are supported");
        }
    }
    JobConfig config;
    auto require = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw ConfigError("missing required key '" + key + "'");
        return it->second;
    };
    config.dimer_xyz_path = require("system.geometry");
    config.basis_path = require("system.basis_file");
    if (auto it = kv.find("system.basis"); it != kv.end()) config.basis_name = it->second;
    if (auto it = kv.find("system.charge_a"); it != kv.end())
        config.charge_a = to_int(it->second, "system.charge_a");
    if (auto it = kv.find("system.charge_b"); it != kv.end())
        config.charge_b = to_int(it->second, "system.charge_b");
    std::uint64_t seed = 0;
    if (auto it = kv.find("system.seed"); it != kv.end())
        seed = static_cast<std::uint64_t>(to_int(it->second, "system.seed"));
    config.method_a = parse_method(kv, "monomer1", seed);
    config.method_b = parse_method(kv, "monomer2", seed);
    if (auto it = kv.find("output.path"); it != kv.end()) config.output_path = it->second;
    if (auto it = kv.find("output.run_supermolecular"); it != kv.end())
        config.run_supermolecular = to_bool(it->second, "output.run_supermolecular");
    if (auto it = kv.find("output.run_naive_oracle"); it != kv.end())
        config.run_naive_oracle = to_bool(it->second, "output.run_naive_oracle");
    if (auto it = kv.find("output.run_measurement_plan"); it != kv.end())
        config.run_measurement_plan = to_bool(it->second, "output.run_measurement_plan");
    return config;
}

SaptJob load_job(const JobConfig& config, const std::string& config_dir) {
    namespace fs = std::filesystem;
    auto resolve = [&](const std::string& p) {
        fs::path path(p);
        if (path.is_relative()) path = fs::path(config_dir) / path;
        return path.string();
    };
    auto read_file = [](const std::string& p) {
        std::ifstream in(p);
        if (!in) throw ConfigError("cannot open '" + p + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    SaptJob job;
    job.dimer = parse_dimer_xyz(read_file(resolve(config.dimer_xyz_path)));
    job.dimer.monomer_a.net_charge = config.charge_a;
    job.dimer.monomer_b.net_charge = config.charge_b;
    const std::string basis_text = read_file(resolve(config.basis_path));
    job.basis_a = parse_basis(basis_text, job.dimer.monomer_a);
    job.basis_b = parse_basis(basis_text, job.dimer.monomer_b);
    job.basis_name = config.basis_name.empty()
                         ? std::filesystem::path(config.basis_path).stem().string()
                         : config.basis_name;
    job.method_a = config.method_a;
    job.method_b = config.method_b;
    job.run_supermolecular = config.run_supermolecular;
    job.run_naive_oracle = config.run_naive_oracle;
    job.run_measurement_plan = config.run_measurement_plan;
    return job;
}

} // namespace saptvqe
