#include "eegshift/results_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

namespace eegshift {

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string pct(double fraction) { return fmt("%.1f", 100.0 * fraction); }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s, const std::string& what, std::size_t line_no) {
  if (s == "NA") return std::nan("");
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ResultsFormatError("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
  }
}

double combo_average(const ResultMatrix& m, Combo c) {
  double s = 0.0;
  for (const ResultCell& cell : m.cells[static_cast<std::size_t>(c)]) s += cell.mean_accuracy;
  return m.models.empty() ? 0.0 : s / static_cast<double>(m.models.size());
}

std::string combo_title(Combo c) {
  switch (c) {
    case Combo::PA_PA: return "Trained and tested on pro-antisaccade (PA-PA)";
    case Combo::LG_LG: return "Trained and tested on large grid (LG-LG)";
    case Combo::PA_LG: return "Trained on pro-antisaccade, tested on large grid (PA-LG)";
    case Combo::LG_PA: return "Trained on large grid, tested on pro-antisaccade (LG-PA)";
  }
  return "";
}

}  // namespace

void write_results_csv(std::ostream& out, const ResultMatrix& m, const CsvWriteOptions& opts) {
  out << "combo,model,mean_acc,std,mean_time_s,converged,config_hash\n";
  for (Combo c : kAllCombos) {
    for (const ResultCell& cell : m.cells[static_cast<std::size_t>(c)]) {
      out << combo_name(c) << ',' << display_name(cell.model) << ',' << fmt("%.6f", cell.mean_accuracy) << ','
          << (cell.converged ? fmt("%.6e", cell.std_accuracy) : std::string("NA")) << ','
          << (opts.include_timing ? fmt("%.6f", cell.mean_seconds) : std::string("NA")) << ','
          << (cell.converged ? "true" : "false") << ',' << m.config_hash << '\n';
    }
  }
}

ResultMatrix read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ResultsFormatError("results CSV is empty");
  const auto header = split_csv_line(line);
  const std::vector<std::string> required = {"combo", "model", "mean_acc", "std", "mean_time_s", "converged"};
  if (header.size() < required.size() || !std::equal(required.begin(), required.end(), header.begin())) {
    throw ResultsFormatError("unexpected results CSV header: " + line);
  }
  const bool has_hash = header.size() >= 7 && header[6] == "config_hash";

  std::map<std::pair<ModelKind, Combo>, ResultCell> cells;
  std::vector<ModelKind> order;
  std::string config_hash;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) throw ResultsFormatError("line " + std::to_string(line_no) + ": wrong field count");
    Combo combo;
    ModelKind model;
    try {
      combo = parse_combo(f[0]);
      model = parse_model_kind(f[1]);
    } catch (const std::invalid_argument& e) {
      throw ResultsFormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
    ResultCell cell;
    cell.model = model;
    cell.mean_accuracy = parse_number(f[2], "mean_acc", line_no);
    if (!(cell.mean_accuracy >= 0.0 && cell.mean_accuracy <= 1.0)) {
      throw ResultsFormatError("line " + std::to_string(line_no) + ": mean_acc must be a fraction in [0, 1]");
    }
    cell.std_accuracy = parse_number(f[3], "std", line_no);
    cell.mean_seconds = parse_number(f[4], "mean_time_s", line_no);
    if (f[5] == "true") cell.converged = true;
    else if (f[5] == "false") cell.converged = false;
    else throw ResultsFormatError("line " + std::to_string(line_no) + ": converged must be true or false");
    if (std::isnan(cell.std_accuracy)) cell.converged = false;
    if (has_hash && config_hash.empty()) config_hash = f[6];
    if (!cells.emplace(std::make_pair(model, combo), cell).second) {
      throw ResultsFormatError("line " + std::to_string(line_no) + ": duplicate row for " + f[0] + " / " + f[1]);
    }
    if (std::find(order.begin(), order.end(), model) == order.end()) order.push_back(model);
  }
  if (cells.empty()) throw ResultsFormatError("results CSV has no data rows");

  ResultMatrix m;
  m.config_hash = config_hash;
  for (ModelKind k : kAllModels) {
    if (std::find(order.begin(), order.end(), k) != order.end()) m.models.push_back(k);
  }
  for (ModelKind k : m.models) {
    for (Combo c : kAllCombos) {
      auto it = cells.find({k, c});
      if (it == cells.end()) {
        throw ResultsFormatError("missing " + std::string(combo_name(c)) + " row for " + std::string(display_name(k)));
      }
      m.cells[static_cast<std::size_t>(c)].push_back(it->second);
    }
  }
  return m;
}

std::string summary_average_line(const ResultMatrix& m) {
  std::string s = "Average";
  for (Combo c : kAllCombos) s += " " + pct(combo_average(m, c));
  return s;
}

void write_markdown_report(std::ostream& out, const ResultMatrix& m, bool include_timing) {
  if (!m.config_hash.empty()) out << "<!-- config_hash: " << m.config_hash << " -->\n\n";
  for (Combo c : kAllCombos) {
    std::vector<ResultCell> rows = m.cells[static_cast<std::size_t>(c)];
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ResultCell& a, const ResultCell& b) { return a.mean_accuracy > b.mean_accuracy; });
    out << "### " << combo_title(c) << "\n\n";
    out << "| Model | Accuracy (%) | Standard Deviation | Mean Run time (s) |\n";
    out << "|---|---|---|---|\n";
    for (const ResultCell& cell : rows) {
      const bool have_time = include_timing && std::isfinite(cell.mean_seconds);
      out << "| " << display_name(cell.model) << " | " << pct(cell.mean_accuracy) << " | "
          << (cell.converged && std::isfinite(cell.std_accuracy) ? fmt("%.3g", cell.std_accuracy) : std::string("N/A"))
          << " | " << (have_time ? fmt("%.3f", cell.mean_seconds) : std::string("N/A")) << " |\n";
    }
    out << '\n';
  }
  out << "### Summary: accuracy of left-right classification\n\n";
  write_summary_table(out, m);
}

void write_summary_table(std::ostream& out, const ResultMatrix& m) {
  out << "| Models | PA-PA (%) | LG-LG (%) | PA-LG (%) | LG-PA (%) |\n";
  out << "|---|---|---|---|---|\n";
  for (std::size_t k = 0; k < m.models.size(); ++k) {
    out << "| " << display_name(m.models[k]);
    for (Combo c : kAllCombos) out << " | " << pct(m.cells[static_cast<std::size_t>(c)][k].mean_accuracy);
    out << " |\n";
  }
  out << "| Average";
  for (Combo c : kAllCombos) out << " | " << pct(combo_average(m, c));
  out << " |\n";
}

void write_gap_report(std::ostream& out, const GapReport& gap, const std::string& config_hash) {
  out << "# config_hash=" << config_hash << '\n';
  out << "model,drop_pa_pp,drop_lg_pp\n";
  for (const ModelGap& g : gap.per_model) {
    out << display_name(g.model) << ',' << fmt("%.2f", 100.0 * g.drop_pa) << ',' << fmt("%.2f", 100.0 * g.drop_lg) << '\n';
  }
  out << "avg_drop_pa_pp=" << fmt("%.4f", 100.0 * gap.avg_drop_pa) << '\n';
  out << "avg_drop_lg_pp=" << fmt("%.4f", 100.0 * gap.avg_drop_lg) << '\n';
  out << "gap_pp=" << fmt("%.4f", 100.0 * gap.gap) << '\n';
  out << "summary: PA-trained models dropped " << fmt("%.1f", 100.0 * gap.avg_drop_pa)
      << " pp after covariate shift; LG-trained models dropped " << fmt("%.1f", 100.0 * gap.avg_drop_lg) << " pp\n";
}

}  // namespace eegshift
