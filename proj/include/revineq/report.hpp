#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "revineq/trials.hpp"
#include "revineq/verify.hpp"

namespace revineq {

nlohmann::ordered_json to_json(const VerificationReport& report);
nlohmann::ordered_json to_json(const EstimateRecord& record);

/// Fixed sweep.csv columns.
const std::vector<std::string>& csv_columns();

/// One sweep.csv row: either an evaluated report or a skipped/failed point
/// described by its parameters and a status message.
struct SweepRow {
  std::string inequality;
  InequalityParams params;
  std::optional<VerificationReport> report;
  std::string status = "ok";
};

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const SweepRow& row);

/// trace.csv: eval, restart, one column per parameter, ratio, stderr,
/// constant, status.
void write_trace_csv(std::ostream& out, const EstimateRecord& record);

/// Shortest round-trip decimal for a double ("nan", "inf", "-inf" for
/// non-finite values).
std::string format_double(double v);

}  // namespace revineq
