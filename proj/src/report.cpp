#include "saptvqe/report.hpp"

#include <chrono>
#include <fstream>

#include "json.hpp"

namespace saptvqe {

std::string report_to_json(const SAPTReport& report, bool include_timestamp) {
    nlohmann::ordered_json j;
    j["geometry_hash"] = report.geometry_hash;
    j["basis"] = report.basis_name;
    j["monomer1"] = {{"source", report.source_a},
                     {"scf_energy", report.scf_energy_a},
                     {"total_energy", report.monomer_energy_a},
                     {"vqe_iterations", report.vqe_iterations_a},
                     {"vqe_gradient_norm", report.vqe_gradient_a}};
    j["monomer2"] = {{"source", report.source_b},
                     {"scf_energy", report.scf_energy_b},
                     {"total_energy", report.monomer_energy_b},
                     {"vqe_iterations", report.vqe_iterations_b},
                     {"vqe_gradient_norm", report.vqe_gradient_b}};
    j["E_pol1"] = report.e_pol1;
    j["E_exch1"] = report.e_exch1;
    j["E_pol1_plus_E_exch1"] = report.e_pol1 + report.e_exch1;
    j["terms"] = {{"T1", report.terms.t1},
                  {"T2", report.terms.t2},
                  {"T3", report.terms.t3},
                  {"T4", report.terms.t4},
                  {"T5", report.terms.t5}};
    if (report.supermolecular_interaction)
        j["supermolecular_interaction"] = *report.supermolecular_interaction;
    if (report.naive_exchange) j["naive_exchange_oracle"] = *report.naive_exchange;
    if (report.measurement_plan_energy)
        j["measurement_plan_electrostatic"] = *report.measurement_plan_energy;
    j["timings"] = {{"total_seconds", report.seconds_total},
                    {"integrals_seconds", report.seconds_integrals},
                    {"monomers_seconds", report.seconds_monomers}};
    if (include_timestamp) {
        const auto now = std::chrono::system_clock::now();
        j["timestamp_unix"] =
            std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    }
    return j.dump(2) + "\n";
}

void write_report(const SAPTReport& report, const std::string& path, bool include_timestamp) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report to '" + path + "'");
    out << report_to_json(report, include_timestamp);
}

} // namespace saptvqe
