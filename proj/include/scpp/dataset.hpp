#pragma once

#include <string>
#include <vector>

#include "scpp/types.hpp"

namespace scpp {

struct LabeledDataset {
  Matrix data;                              // d x N, per-feature unit variance
  std::vector<std::string> truth;           // empty when no label column
  std::vector<std::string> feature_names;   // after dropping constant features
  Index dropped_rows = 0;                   // rows removed for missing cells
  std::vector<std::string> dropped_features;  // zero-variance features
};

// Reads a comma-delimited numeric file (header optional, detected when no
// cell of the first line parses as a number) and divides every feature by
// its sample standard deviation; the mean is left untouched. Rows with
// missing cells ("", "?", "NA", "NaN") are dropped and counted;
// zero-variance features are dropped with a warning. `label_column` selects
// the class column by header name or 0-based index ("" = none).
// Throws IngestError (unparseable cell, unreadable file) and DegenerateData
// (no usable rows or features).
LabeledDataset load_and_standardize(const std::string& path, const std::string& label_column = "");

}  // namespace scpp
