#include "scpp/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace scpp {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool is_missing(const std::string& s) {
  return s.empty() || s == "?" || s == "NA" || s == "na" || s == "NaN" || s == "nan" ||
         s == "N/A";
}

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

LabeledDataset load_and_standardize(const std::string& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) {
    throw IngestError("cannot open input file: " + path, 0, 0);
  }
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    rows.push_back(split_csv(line));
  }
  if (rows.empty()) throw DegenerateData("load: file has no data rows");

  // header when no cell of the first line parses as a number
  bool has_header = true;
  for (const auto& cell : rows.front()) {
    double tmp;
    if (parse_double(cell, tmp)) {
      has_header = false;
      break;
    }
  }
  std::vector<std::string> header;
  size_t first_data = 0;
  if (has_header) {
    header = rows.front();
    first_data = 1;
  }
  if (first_data >= rows.size()) throw DegenerateData("load: header only, no data rows");
  const size_t n_cols = rows[first_data].size();

  Index label_idx = -1;
  if (!label_column.empty()) {
    if (has_header) {
      const auto it = std::find(header.begin(), header.end(), label_column);
      if (it != header.end()) label_idx = static_cast<Index>(it - header.begin());
    }
    if (label_idx < 0) {
      double as_num;
      if (parse_double(label_column, as_num) && as_num >= 0 && as_num < double(n_cols)) {
        label_idx = static_cast<Index>(as_num);
      } else {
        throw IngestError("load: label column '" + label_column + "' not found", 0, 0);
      }
    }
  }

  LabeledDataset ds;
  std::vector<Vector> kept;
  const Index d_raw = static_cast<Index>(n_cols) - (label_idx >= 0 ? 1 : 0);
  if (d_raw < 1) throw DegenerateData("load: no feature columns");

  for (size_t r = first_data; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    if (cells.size() != n_cols) {
      throw IngestError("load: ragged row " + std::to_string(r + 1), static_cast<Index>(r + 1), 0);
    }
    bool missing = false;
    Vector x(d_raw);
    Index f = 0;
    std::string label;
    for (size_t c = 0; c < n_cols; ++c) {
      if (static_cast<Index>(c) == label_idx) {
        label = cells[c];
        continue;
      }
      if (is_missing(cells[c])) {
        missing = true;
        continue;
      }
      double v;
      if (!parse_double(cells[c], v)) {
        throw IngestError("load: unparseable cell '" + cells[c] + "' at row " +
                              std::to_string(r + 1) + ", column " + std::to_string(c + 1),
                          static_cast<Index>(r + 1), static_cast<Index>(c + 1));
      }
      x[f++] = v;
    }
    if (missing) {
      ++ds.dropped_rows;
      continue;
    }
    kept.push_back(std::move(x));
    if (label_idx >= 0) ds.truth.push_back(label);
  }
  const Index n = static_cast<Index>(kept.size());
  if (n < 2) throw DegenerateData("load: fewer than 2 complete rows");

  Matrix X(d_raw, n);
  for (Index i = 0; i < n; ++i) X.col(i) = kept[i];

  std::vector<std::string> names(d_raw);
  for (Index f = 0, c = 0; c < static_cast<Index>(n_cols); ++c) {
    if (c == label_idx) continue;
    names[f] = has_header ? header[c] : "f" + std::to_string(c);
    ++f;
  }

  // divide by the sample standard deviation; drop constant features
  std::vector<Index> keep_rows;
  for (Index fidx = 0; fidx < d_raw; ++fidx) {
    const double mean = X.row(fidx).mean();
    const double var = (X.row(fidx).array() - mean).square().sum() / double(n - 1);
    if (var > 0.0) {
      X.row(fidx) /= std::sqrt(var);
      keep_rows.push_back(fidx);
    } else {
      ds.dropped_features.push_back(names[fidx]);
    }
  }
  if (keep_rows.empty()) throw DegenerateData("load: all features are constant");

  ds.data.resize(static_cast<Index>(keep_rows.size()), n);
  ds.feature_names.clear();
  for (size_t r = 0; r < keep_rows.size(); ++r) {
    ds.data.row(static_cast<Index>(r)) = X.row(keep_rows[r]);
    ds.feature_names.push_back(names[keep_rows[r]]);
  }
  return ds;
}

}  // namespace scpp
