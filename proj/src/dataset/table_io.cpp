#include "afrrcast/dataset/table_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "afrrcast/errors.hpp"

namespace afrrcast {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

namespace {

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
  if (cell.empty()) return kMissing;
  double value = 0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
    throw DataError("row " + std::to_string(row) + ", column '" + column +
                    "': cannot parse number '" + cell + "'");
  return value;
}

}  // namespace

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

TimeTable load_table(const std::filesystem::path& path, const Manifest& manifest) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw DataError("empty data file: " + path.string());
  const std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 2)
    throw DataError("data file needs a timestamp column plus data columns: " + path.string());

  std::unordered_map<std::string, std::size_t> file_pos;
  for (std::size_t i = 1; i < header.size(); ++i) file_pos.emplace(header[i], i);

  // Manifest order wins; a declared column absent from the file is an error.
  std::vector<std::size_t> source_of;
  for (const auto& meta : manifest.columns) {
    auto it = file_pos.find(meta.name);
    if (it == file_pos.end())
      throw DataError("column '" + meta.name + "' declared in manifest is missing from " +
                      path.string());
    source_of.push_back(it->second);
  }

  std::vector<UnixSeconds> index;
  std::vector<std::vector<double>> columns(manifest.columns.size());

  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++row;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw DataError("row " + std::to_string(row) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(cells.size()));
    UnixSeconds t;
    try {
      t = parse_utc(cells[0]);
    } catch (const DataError& e) {
      throw DataError("row " + std::to_string(row) + ": " + e.what());
    }
    if (!on_quarter_hour_grid(t))
      throw DataError("row " + std::to_string(row) + ": timestamp " + cells[0] +
                      " is off the 15-minute grid");
    if (!index.empty() && t - index.back() != kSlotSeconds)
      throw DataError("row " + std::to_string(row) + ": timestamp " + cells[0] +
                      " does not follow the previous row by 15 minutes");
    index.push_back(t);
    for (std::size_t c = 0; c < source_of.size(); ++c)
      columns[c].push_back(parse_cell(cells[source_of[c]], row, manifest.columns[c].name));
  }

  for (std::size_t c = 0; c < manifest.columns.size(); ++c) {
    const auto& meta = manifest.columns[c];
    const bool flip = (meta.name == manifest.target_positive && manifest.sign_flip_positive) ||
                      (meta.name == manifest.target_negative && manifest.sign_flip_negative);
    if (flip)
      for (double& v : columns[c])
        if (!is_missing(v)) v = -v;
  }

  return TimeTable(std::move(index), manifest.columns, std::move(columns));
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string table_to_csv(const TimeTable& table) {
  std::ostringstream buf;
  buf << "timestamp";
  for (const auto& name : table.names()) buf << ',' << csv_escape(name);
  buf << '\n';
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    buf << format_utc(table.index()[r]);
    for (std::size_t c = 0; c < table.n_cols(); ++c) {
      buf << ',';
      const double v = table.col(c)[r];
      if (!is_missing(v)) buf << format_double(v);
    }
    buf << '\n';
  }
  return buf.str();
}

void save_table(const TimeTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write data file: " + path.string());
  out << table_to_csv(table);
  if (!out) throw DataError("failed writing " + path.string());
}

}  // namespace afrrcast
