#include "ginidep/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "ginidep/error.hpp"

namespace ginidep {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  if (text.empty()) {
    return false;
  }
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

}  // namespace

CsvTable parse_csv(std::istream& in) {
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (content.rfind("\xEF\xBB\xBF", 0) == 0) {
    content.erase(0, 3);
  }

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    // A line holding nothing at all is skipped rather than read as one empty field.
    if (!(record.size() == 1 && record.front().empty() && !field_started)) {
      records.push_back(std::move(record));
    }
    record.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') {
          ++line;
        }
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          throw InvalidInput("CSV line " + std::to_string(line) +
                             ": quote inside an unquoted field");
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        if (i + 1 < content.size() && content[i + 1] == '\n') {
          break;
        }
        end_record();
        ++line;
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) {
    throw InvalidInput("CSV ends inside a quoted field");
  }
  if (field_started || !field.empty() || !record.empty()) {
    end_record();
  }
  if (records.empty()) {
    throw InvalidInput("CSV input is empty");
  }

  CsvTable table;
  table.header = std::move(records.front());
  table.rows.assign(std::make_move_iterator(records.begin() + 1),
                    std::make_move_iterator(records.end()));
  return table;
}

std::size_t resolve_column(const std::vector<std::string>& header, const std::string& selector) {
  const auto named = std::find(header.begin(), header.end(), selector);
  if (named != header.end()) {
    return static_cast<std::size_t>(named - header.begin());
  }
  std::size_t index = 0;
  const auto [ptr, ec] = std::from_chars(selector.data(), selector.data() + selector.size(), index);
  if (ec == std::errc() && ptr == selector.data() + selector.size() && !selector.empty()) {
    if (index >= header.size()) {
      throw InvalidInput("label column index " + selector + " is out of range (" +
                         std::to_string(header.size()) + " columns)");
    }
    return index;
  }
  throw InvalidInput("no column named '" + selector + "'");
}

LoadResult load_csv(std::istream& in, const std::string& label_column,
                    const LoadOptions& options) {
  const CsvTable table = parse_csv(in);
  const std::size_t width = table.header.size();
  const std::size_t label_index = resolve_column(table.header, label_column);
  if (width < 2) {
    throw InvalidInput("CSV needs a label column and at least one feature column");
  }

  std::vector<std::size_t> feature_columns;
  LoadResult result;
  for (std::size_t c = 0; c < width; ++c) {
    if (c != label_index) {
      feature_columns.push_back(c);
      result.data.feature_names.push_back(table.header[c]);
    }
  }

  const std::size_t q = feature_columns.size();
  std::vector<double> values;
  values.reserve(table.rows.size() * q);
  std::vector<std::string> raw_labels;
  raw_labels.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = "row " + std::to_string(r + 1);
    if (row.size() != width) {
      throw InvalidInput(where + ": expected " + std::to_string(width) + " fields, found " +
                         std::to_string(row.size()));
    }
    const std::string_view label = trim(row[label_index]);
    if (label.empty()) {
      throw InvalidInput(where + ": empty label in column '" + table.header[label_index] + "'");
    }
    raw_labels.emplace_back(label);
    for (std::size_t c : feature_columns) {
      double v = 0.0;
      if (!parse_double(row[c], v)) {
        throw InvalidInput(where + ", column '" + table.header[c] + "': cannot parse '" + row[c] +
                           "' as a finite number");
      }
      values.push_back(v);
    }
  }
  if (raw_labels.empty()) {
    throw InvalidInput("CSV has a header but no data rows");
  }

  std::map<std::string, std::size_t> counts;
  for (const auto& l : raw_labels) {
    ++counts[l];
  }
  std::vector<std::string> small;
  for (const auto& [name, count] : counts) {
    if (count < 2) {
      small.push_back(name);
    }
  }
  std::vector<bool> keep(raw_labels.size(), true);
  if (!small.empty()) {
    std::string list;
    for (const auto& s : small) {
      list += (list.empty() ? "" : ", ") + s;
    }
    if (options.drop_small_classes) {
      result.warnings.push_back("dropped classes with fewer than 2 rows: " + list);
      for (std::size_t r = 0; r < raw_labels.size(); ++r) {
        keep[r] = counts[raw_labels[r]] >= 2;
      }
      for (const auto& s : small) {
        counts.erase(s);
      }
    } else {
      result.warnings.push_back("classes with fewer than 2 rows: " + list);
    }
  }

  std::map<std::string, int> codes;
  for (const auto& [name, count] : counts) {
    codes.emplace(name, static_cast<int>(result.data.label_names.size()));
    result.data.label_names.push_back(name);
  }
  std::vector<double> kept_values;
  kept_values.reserve(values.size());
  for (std::size_t r = 0; r < raw_labels.size(); ++r) {
    if (!keep[r]) {
      continue;
    }
    result.data.labels.push_back(codes.at(raw_labels[r]));
    kept_values.insert(kept_values.end(), values.begin() + static_cast<std::ptrdiff_t>(r * q),
                       values.begin() + static_cast<std::ptrdiff_t>((r + 1) * q));
  }
  result.data.features = Matrix(result.data.labels.size(), q, std::move(kept_values));
  return result;
}

LoadResult load_csv(const std::filesystem::path& path, const std::string& label_column,
                    const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidInput("cannot open input file '" + path.string() + "'");
  }
  return load_csv(in, label_column, options);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out += "\"\"";
    } else {
      out.push_back(c);
    }
  }
  out += '"';
  return out;
}

}  // namespace ginidep
