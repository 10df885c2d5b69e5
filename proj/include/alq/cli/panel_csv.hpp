#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "alq/model.hpp"
#include "alq/simgen.hpp"

namespace alq::cli {

/// Reads the long-format panel schema `subject,y,x1..xk[,s1..sl]`.
/// Rows may interleave subjects; they are grouped in first-seen order.
/// Without s-columns every row gets s = (1).
PanelDataset parse_panel_csv(const std::filesystem::path& path);
PanelDataset parse_panel_csv(std::istream& in);

void write_panel_csv(std::ostream& out, const PanelDataset& data);

/// A row of new covariates for prediction. `y` is optional in the input.
struct CovariateRow {
  std::string subject_id;
  Eigen::VectorXd x;
  Eigen::VectorXd s;
};

struct CovariateTable {
  Index k = 0;
  Index l = 0;
  std::vector<CovariateRow> rows;
};

/// Same schema as the panel file with `y` optional. An empty file yields an
/// empty table.
CovariateTable parse_covariate_csv(std::istream& in);

/// Raw trial records, schema `subject,y,baseline,age,trt,visit`.
std::vector<ProgabideRecord> parse_progabide_csv(std::istream& in);

/// Numeric table with a header line, as written by the CSV exporters.
struct NumericTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

NumericTable read_numeric_csv(std::istream& in);

}  // namespace alq::cli
