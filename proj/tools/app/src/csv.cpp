// Apache License, Version 2.0, refer to LICENSE.txt

#include "lgp/app/csv.hpp"

#include <fmt/format.h>

#include <boost/algorithm/string.hpp>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include "lgp/errors.hpp"

namespace lgp::app {

int CsvTable::find(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return static_cast<int>(k);
  }
  return -1;
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  boost::split(cells, line, boost::is_any_of(","));
  for (auto& c : cells) boost::trim(c);
  return cells;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (boost::trim_copy(line).empty()) continue;
    auto cells = split_row(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      std::set<std::string> seen;
      for (const auto& h : t.header) {
        if (h.empty()) throw DomainError(path.string() + ": empty column name in header");
        if (!seen.insert(h).second) {
          throw DomainError(path.string() + ": duplicate column '" + h + "'");
        }
      }
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw DomainError(fmt::format("{}: line {} has {} cells, header has {}", path.string(),
                                    line_no, cells.size(), t.header.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  if (t.header.empty()) throw DomainError(path.string() + ": empty file");
  if (t.rows.empty()) throw DomainError(path.string() + ": no data rows");
  return t;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
  const double inf = std::numeric_limits<double>::infinity();
  if (cell == "inf" || cell == "+inf") return inf;
  if (cell == "-inf") return -inf;
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (!cell.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw DomainError(fmt::format("row {}, column '{}': non-numeric cell '{}'", row, column,
                                  cell));
  }
  return v;
}

Dataset ingest_csv(const std::filesystem::path& path, const DataConfig& config) {
  const CsvTable t = read_csv(path);
  auto require = [&](const std::string& name) {
    const int k = t.find(name);
    if (k < 0) throw DomainError(path.string() + ": missing column '" + name + "'");
    return static_cast<std::size_t>(k);
  };

  const std::size_t ycol = require(config.response);
  const int lo_col = t.find("y_lo");
  const int hi_col = t.find("y_hi");
  const int max_col = t.find("y_max");
  if ((lo_col < 0) != (hi_col < 0)) {
    throw DomainError(path.string() + ": censoring needs both y_lo and y_hi columns");
  }
  if (lo_col >= 0 && max_col >= 0) {
    throw DomainError(path.string() + ": censored and ordinal columns cannot be combined");
  }

  std::set<std::string> reserved = {config.response, "y_lo", "y_hi", "y_max"};
  for (const auto& c : config.coordinates) reserved.insert(c);
  std::vector<std::string> covariates = config.covariates;
  if (covariates.empty()) {
    for (const auto& h : t.header) {
      if (!reserved.count(h)) covariates.push_back(h);
    }
  }
  if (covariates.empty()) throw DomainError(path.string() + ": no covariate columns");

  const auto n = static_cast<Eigen::Index>(t.rows.size());
  const auto p = static_cast<Eigen::Index>(covariates.size());
  Dataset d;
  d.response_name = config.response;
  d.covariate_names = covariates;
  d.y.resize(n);
  d.x.resize(n, p);
  std::vector<std::size_t> xcols;
  for (const auto& c : covariates) xcols.push_back(require(c));
  std::vector<std::size_t> ccols;
  for (const auto& c : config.coordinates) ccols.push_back(require(c));
  if (!ccols.empty()) d.coords.resize(n, static_cast<Eigen::Index>(ccols.size()));
  if (lo_col >= 0) d.censoring.resize(static_cast<std::size_t>(n));
  if (max_col >= 0) d.ordinal_max.resize(static_cast<std::size_t>(n));

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = t.rows[static_cast<std::size_t>(i)];
    const std::size_t r = static_cast<std::size_t>(i) + 1;
    for (Eigen::Index k = 0; k < p; ++k) {
      d.x(i, k) = parse_cell(row[xcols[static_cast<std::size_t>(k)]], r,
                             covariates[static_cast<std::size_t>(k)]);
    }
    for (std::size_t k = 0; k < ccols.size(); ++k) {
      d.coords(i, static_cast<Eigen::Index>(k)) =
          parse_cell(row[ccols[k]], r, config.coordinates[k]);
    }
    if (lo_col >= 0) {
      const std::string& lo = row[static_cast<std::size_t>(lo_col)];
      const std::string& hi = row[static_cast<std::size_t>(hi_col)];
      if (lo.empty() != hi.empty()) {
        throw DomainError(fmt::format("row {}: y_lo and y_hi must both be set or both empty", r));
      }
      if (!lo.empty()) {
        d.censoring[static_cast<std::size_t>(i)] =
            Interval{parse_cell(lo, r, "y_lo"), parse_cell(hi, r, "y_hi")};
      }
    }
    const std::string& ycell = row[ycol];
    const bool censored = lo_col >= 0 && d.censoring[static_cast<std::size_t>(i)].has_value();
    if (censored && (ycell.empty() || ycell == "NA")) {
      d.y[i] = std::numeric_limits<double>::quiet_NaN();
    } else {
      d.y[i] = parse_cell(ycell, r, config.response);
    }
    if (max_col >= 0) {
      const double m = parse_cell(row[static_cast<std::size_t>(max_col)], r, "y_max");
      if (m != std::floor(m)) throw DomainError(fmt::format("row {}: y_max must be an integer", r));
      d.ordinal_max[static_cast<std::size_t>(i)] = static_cast<int>(m);
    }
  }
  if (config.standardize) d.standardization = standardize_columns(d.x);
  d.validate();
  return d;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return fmt::format("{}", v);
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data,
                       const Eigen::MatrixXd& raw_x,
                       const std::vector<std::pair<std::string, std::vector<int>>>& extra) {
  std::vector<std::string> header = {data.response_name};
  for (Eigen::Index k = 0; k < raw_x.cols(); ++k) {
    header.push_back(static_cast<std::size_t>(k) < data.covariate_names.size()
                         ? data.covariate_names[static_cast<std::size_t>(k)]
                         : fmt::format("x{}", k + 1));
  }
  for (const auto& e : extra) header.push_back(e.first);
  CsvWriter w(path, header);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    w << data.y[i];
    for (Eigen::Index k = 0; k < raw_x.cols(); ++k) w << raw_x(i, k);
    for (const auto& e : extra) w << e.second[static_cast<std::size_t>(i)];
    w.end_row();
  }
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path), columns_(header.size()) {
  if (!out_) throw IoError("cannot write '" + path.string() + "'");
  out_ << boost::join(header, ",") << '\n';
}

void CsvWriter::sep() {
  if (filled_ >= columns_) throw IoError(path_.string() + ": too many cells in row");
  if (filled_ > 0) out_ << ',';
  ++filled_;
}

CsvWriter& CsvWriter::operator<<(double v) {
  sep();
  out_ << format_number(v);
  return *this;
}

CsvWriter& CsvWriter::operator<<(long v) {
  sep();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& v) {
  sep();
  out_ << v;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw IoError(path_.string() + ": short row");
  out_ << '\n';
  filled_ = 0;
  if (!out_) throw IoError("write failed on '" + path_.string() + "'");
}

}  // namespace lgp::app
