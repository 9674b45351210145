#pragma once

#include <string>

#include "saptvqe/sapt.hpp"

namespace saptvqe {

// JSON serialization of a SAPT report; schema documented in
// docs/formats.md. `include_timestamp` exists so reruns can be compared
// byte for byte.
std::string report_to_json(const SAPTReport& report, bool include_timestamp = true);

void write_report(const SAPTReport& report, const std::string& path,
                  bool include_timestamp = true);

} // namespace saptvqe
