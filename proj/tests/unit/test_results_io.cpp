#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "eegshift/results_io.hpp"

using namespace eegshift;

namespace {

ResultMatrix sample_matrix() {
  ResultMatrix m;
  m.models = {ModelKind::XGBoostStyle, ModelKind::RbfSVC};
  m.config_hash = "00000000deadbeef";
  double acc = 0.9;
  for (Combo c : kAllCombos) {
    for (ModelKind k : m.models) {
      ResultCell cell;
      cell.model = k;
      cell.mean_accuracy = acc;
      cell.std_accuracy = 0.0125;
      cell.mean_seconds = 0.5;
      cell.converged = k != ModelKind::RbfSVC || c != Combo::LG_PA;
      m.cells[static_cast<std::size_t>(c)].push_back(cell);
      acc -= 0.01;
    }
  }
  return m;
}

std::string to_csv(const ResultMatrix& m, bool timing = false) {
  std::ostringstream out;
  write_results_csv(out, m, CsvWriteOptions{timing});
  return out.str();
}

ResultMatrix from_csv(const std::string& text) {
  std::istringstream in(text);
  return read_results_csv(in);
}

const char* kHeader = "combo,model,mean_acc,std,mean_time_s,converged\n";

}  // namespace

TEST(ResultsCsv, Layout) {
  const std::string csv = to_csv(sample_matrix());
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "combo,model,mean_acc,std,mean_time_s,converged,config_hash");
  std::getline(in, line);
  EXPECT_EQ(line, "PA-PA,XGBoost,0.900000,1.250000e-02,NA,true,00000000deadbeef");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 7u);
  EXPECT_NE(csv.find("LG-PA,RBF SVC,0.830000,NA,NA,false"), std::string::npos);
  EXPECT_NE(to_csv(sample_matrix(), true).find(",0.500000,"), std::string::npos);
}

TEST(ResultsCsv, RoundTrip) {
  const ResultMatrix m = sample_matrix();
  const ResultMatrix back = from_csv(to_csv(m, true));
  EXPECT_EQ(back.models, m.models);
  EXPECT_EQ(back.config_hash, m.config_hash);
  for (Combo c : kAllCombos)
    for (ModelKind k : m.models) {
      EXPECT_NEAR(back.at(c, k).mean_accuracy, m.at(c, k).mean_accuracy, 1e-9);
      EXPECT_EQ(back.at(c, k).converged, m.at(c, k).converged);
      EXPECT_NEAR(back.at(c, k).mean_seconds, 0.5, 1e-9);
    }
  EXPECT_EQ(to_csv(back, true), to_csv(m, true));
}

TEST(ResultsCsv, RejectsMalformedInput) {
  EXPECT_THROW(from_csv(""), ResultsFormatError);
  EXPECT_THROW(from_csv(kHeader), ResultsFormatError);
  EXPECT_THROW(from_csv("a,b,c\n"), ResultsFormatError);
  EXPECT_THROW(from_csv(std::string(kHeader) + "PA-PA,XGBoost,0.9,0,NA\n"), ResultsFormatError);
  EXPECT_THROW(from_csv(std::string(kHeader) + "XX-PA,XGBoost,0.9,0,NA,true\n"), ResultsFormatError);
  EXPECT_THROW(from_csv(std::string(kHeader) + "PA-PA,Lasso,0.9,0,NA,true\n"), ResultsFormatError);
  EXPECT_THROW(from_csv(std::string(kHeader) + "PA-PA,XGBoost,97.9,0,NA,true\n"), ResultsFormatError);
  EXPECT_THROW(from_csv(std::string(kHeader) + "PA-PA,XGBoost,abc,0,NA,true\n"), ResultsFormatError);
  EXPECT_THROW(from_csv(std::string(kHeader) + "PA-PA,XGBoost,0.9,0,NA,maybe\n"), ResultsFormatError);
  // three of four combos only
  EXPECT_THROW(from_csv(std::string(kHeader) + "PA-PA,XGBoost,0.9,0,NA,true\nLG-LG,XGBoost,0.9,0,NA,true\n"
                                               "PA-LG,XGBoost,0.9,0,NA,true\n"),
               ResultsFormatError);
  const std::string full = std::string(kHeader) + "PA-PA,XGBoost,0.9,0,NA,true\nLG-LG,XGBoost,0.9,0,NA,true\n"
                                                  "PA-LG,XGBoost,0.9,0,NA,true\nLG-PA,XGBoost,0.9,0,NA,true\n";
  EXPECT_NO_THROW(from_csv(full));
  EXPECT_THROW(from_csv(full + "PA-PA,XGBoost,0.8,0,NA,true\n"), ResultsFormatError);
}

TEST(Markdown, TablesSortedAndSingleModel) {
  ResultMatrix m = sample_matrix();
  // give RBF SVC the higher PA-PA accuracy so it must be listed first
  m.cells[0][1].mean_accuracy = 0.95;
  std::ostringstream out;
  write_markdown_report(out, m);
  const std::string md = out.str();
  const auto section = md.find("(PA-PA)");
  ASSERT_NE(section, std::string::npos);
  EXPECT_LT(md.find("| RBF SVC | 95.0", section), md.find("| XGBoost | 90.0", section));
  EXPECT_NE(md.find("| RBF SVC | 83.0 | N/A | N/A |"), std::string::npos);
  EXPECT_NE(md.find("| Average | 92.5 | 87.5 | 85.5 | 83.5 |"), std::string::npos);

  const std::string one = std::string(kHeader) + "PA-PA,GaussianNB,0.9,0,NA,true\nLG-LG,GaussianNB,0.8,0,NA,true\n"
                                                 "PA-LG,GaussianNB,0.7,0,NA,true\nLG-PA,GaussianNB,0.6,0,NA,true\n";
  std::ostringstream single;
  write_markdown_report(single, from_csv(one));
  std::size_t rows = 0;
  for (std::size_t p = single.str().find("| GaussianNB |"); p != std::string::npos;
       p = single.str().find("| GaussianNB |", p + 1))
    ++rows;
  EXPECT_EQ(rows, 5u);  // four per-combo tables plus the summary grid
  EXPECT_EQ(summary_average_line(from_csv(one)), "Average 90.0 80.0 70.0 60.0");
}

TEST(GapReport, Format) {
  GapReport g;
  g.per_model.push_back(ModelGap{ModelKind::XGBoostStyle, 0.045, -0.01});
  g.avg_drop_pa = 0.041625;
  g.avg_drop_lg = 0.005125;
  g.gap = 0.0365;
  std::ostringstream out;
  write_gap_report(out, g, "abc");
  const std::string s = out.str();
  EXPECT_NE(s.find("XGBoost,4.50,-1.00"), std::string::npos);
  EXPECT_NE(s.find("avg_drop_pa_pp=4.1625"), std::string::npos);
  EXPECT_NE(s.find("gap_pp=3.6500"), std::string::npos);
  EXPECT_NE(s.find("dropped 4.2 pp"), std::string::npos);
  EXPECT_NE(s.find("dropped 0.5 pp"), std::string::npos);
}
