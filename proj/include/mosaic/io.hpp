#pragma once

#include <string>

#include "mosaic/complexity.hpp"
#include "mosaic/evaluate.hpp"
#include "mosaic/fisher.hpp"
#include "mosaic/types.hpp"

#include <nlohmann/json_fwd.hpp>

namespace mosaic {

// Raw data CSV: header y1,...,yp, one nonnegative-integer row per
// observation.
IntMatrix read_data_csv(const std::string& path);
void write_data_csv(const std::string& path, const IntMatrix& data);

// Sample CSV: one row per retained draw; columns mu_1..mu_p,
// sigma_1_1..sigma_p_p, then sigma_1_2..sigma_(p-1)_p in row-major pair
// order. Doubles are printed with 17 significant digits so reruns are
// byte-identical and values round-trip exactly.
void write_samples_csv(const std::string& path, const ParameterDraws& draws);
ParameterDraws read_samples_csv(const std::string& path);

void write_truth_json(const std::string& path, const Parameters& truth);
Parameters read_truth_json(const std::string& path);

void write_report_json(const std::string& path, const EvalReport& report);
void write_fisher_json(const std::string& path, const FisherDiagnostic& diag);
void write_complexity_csv(const std::string& path,
                          const ComplexityReport& report);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& value);

std::string format_double(double v);

}  // namespace mosaic
