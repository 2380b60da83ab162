// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "lgp/app/config.hpp"
#include "lgp/model.hpp"

namespace lgp::app {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index or -1.
  int find(const std::string& name) const;
};

// Comma separated, first line a header, no quoting. Blank lines are skipped.
CsvTable read_csv(const std::filesystem::path& path);

// Parses a full cell as a double ("inf", "-inf" accepted). Errors name the
// row (1-based, header excluded) and the column.
double parse_cell(const std::string& cell, std::size_t row, const std::string& column);

// Reads y, covariates and optional coordinates. Censoring comes from
// paired `y_lo`, `y_hi` columns (a row with both cells empty is observed
// exactly); ordinal responses from an integer y plus a `y_max` column.
// Covariates default to every column that is none of these.
Dataset ingest_csv(const std::filesystem::path& path, const DataConfig& config);

// Writes y, covariates (raw scale) and any extra integer column.
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data,
                       const Eigen::MatrixXd& raw_x,
                       const std::vector<std::pair<std::string, std::vector<int>>>& extra = {});

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(long v);
  CsvWriter& operator<<(int v) { return *this << static_cast<long>(v); }
  CsvWriter& operator<<(std::size_t v) { return *this << static_cast<long>(v); }
  CsvWriter& operator<<(const std::string& v);
  void end_row();

 private:
  void sep();
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

std::string format_number(double v);

}  // namespace lgp::app
