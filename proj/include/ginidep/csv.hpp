#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "ginidep/estimators.hpp"

namespace ginidep {

// Raw RFC-4180 content: quoted fields may contain separators, doubled quotes
// and line breaks. A UTF-8 byte order mark before the header is ignored.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(std::istream& in);

// Resolves a label selector: an exact header name wins, otherwise a 0-based
// column index written in decimal.
std::size_t resolve_column(const std::vector<std::string>& header, const std::string& selector);

struct LoadOptions {
  bool drop_small_classes = false;
};

struct LoadResult {
  LabeledDataset data;
  std::vector<std::string> warnings;
};

// Every column except the label must be numeric. Row numbers in error
// messages count data rows from 1 (the header is not a row). Label codes
// follow the sorted order of the label strings.
LoadResult load_csv(std::istream& in, const std::string& label_column,
                    const LoadOptions& options = {});
LoadResult load_csv(const std::filesystem::path& path, const std::string& label_column,
                    const LoadOptions& options = {});

// Quotes a field when it contains a separator, quote or line break.
std::string csv_escape(const std::string& field);

}  // namespace ginidep
