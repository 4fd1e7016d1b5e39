#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "eegshift/harness.hpp"

namespace eegshift {

/// Malformed or incomplete results CSV.
class ResultsFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CsvWriteOptions {
  /// Wall-clock times vary run to run; without this the column holds "NA".
  bool include_timing = false;
};

/// Header: combo,model,mean_acc,std,mean_time_s,converged,config_hash
/// One row per (combo, model), combos in PA-PA, LG-LG, PA-LG, LG-PA order.
void write_results_csv(std::ostream& out, const ResultMatrix& m, const CsvWriteOptions& opts = {});

/// Accepts the file written above; config_hash column optional. Every model must
/// appear in all four combos. Throws ResultsFormatError.
ResultMatrix read_results_csv(std::istream& in);

/// Four per-combo tables (rows by descending accuracy) and the summary grid with averages.
void write_markdown_report(std::ostream& out, const ResultMatrix& m, bool include_timing = false);

/// Models x combos accuracy grid with an Average row.
void write_summary_table(std::ostream& out, const ResultMatrix& m);

/// Per-model drops in percentage points plus the averages and the gap.
void write_gap_report(std::ostream& out, const GapReport& gap, const std::string& config_hash);

/// "Average 94.2 92.4 90.0 91.9": per-combo model averages, in percent.
std::string summary_average_line(const ResultMatrix& m);

}  // namespace eegshift
