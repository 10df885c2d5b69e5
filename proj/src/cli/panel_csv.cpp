#include "alq/cli/panel_csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>

#include "alq/diagnostics.hpp"
#include "alq/errors.hpp"

namespace alq::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_real(std::string_view field, std::int64_t line, const std::string& column) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw InputError("column '" + column + "': '" + std::string(field) + "' is not a number", line);
  }
  return value;
}

std::int64_t parse_count(std::string_view field, std::int64_t line, const std::string& column) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw InputError("column '" + column + "': '" + std::string(field) + "' is not an integer count",
                     line);
  }
  return value;
}

// Numbered column family such as x1..xk: returns the column positions in
// numeric order, rejecting gaps.
std::vector<std::size_t> numbered_columns(const std::map<int, std::size_t>& found, char prefix) {
  std::vector<std::size_t> positions;
  int expected = 1;
  for (const auto& [number, pos] : found) {
    if (number != expected) {
      throw InputError(std::string("column ") + prefix + std::to_string(expected) + " is missing");
    }
    positions.push_back(pos);
    ++expected;
  }
  return positions;
}

struct Layout {
  std::size_t subject = 0;
  std::optional<std::size_t> y;
  std::vector<std::size_t> x;
  std::vector<std::size_t> s;
  std::vector<std::string> names;
};

Layout read_layout(std::string_view header_line, bool y_required) {
  Layout layout;
  std::optional<std::size_t> subject;
  std::map<int, std::size_t> xs;
  std::map<int, std::size_t> ss;
  const auto fields = split(header_line);
  for (std::size_t c = 0; c < fields.size(); ++c) {
    const std::string name(fields[c]);
    layout.names.push_back(name);
    if (name == "subject") {
      subject = c;
    } else if (name == "y") {
      layout.y = c;
    } else if (name.size() > 1 && (name[0] == 'x' || name[0] == 's')) {
      int number = 0;
      const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), number);
      if (ec != std::errc() || ptr != name.data() + name.size() || number < 1) {
        throw InputError("unknown column '" + name + "'", 1);
      }
      auto& family = name[0] == 'x' ? xs : ss;
      if (!family.emplace(number, c).second) throw InputError("duplicate column '" + name + "'", 1);
    } else {
      throw InputError("unknown column '" + name + "'", 1);
    }
  }
  if (!subject) throw InputError("missing required column 'subject'", 1);
  if (y_required && !layout.y) throw InputError("missing required column 'y'", 1);
  if (xs.empty()) throw InputError("missing fixed-effect columns 'x1'..", 1);
  layout.subject = *subject;
  layout.x = numbered_columns(xs, 'x');
  layout.s = numbered_columns(ss, 's');
  return layout;
}

struct ParsedRow {
  std::string subject;
  std::optional<std::int64_t> y;
  Eigen::RowVectorXd x;
  Eigen::RowVectorXd s;
};

ParsedRow read_row(const Layout& layout, std::string_view line, std::int64_t line_no) {
  const auto fields = split(line);
  if (fields.size() != layout.names.size()) {
    throw InputError("expected " + std::to_string(layout.names.size()) + " fields, found " +
                         std::to_string(fields.size()),
                     line_no);
  }
  ParsedRow row;
  row.subject = std::string(fields[layout.subject]);
  if (row.subject.empty()) throw InputError("empty subject id", line_no);
  if (layout.y) row.y = parse_count(fields[*layout.y], line_no, "y");
  row.x.resize(static_cast<Index>(layout.x.size()));
  for (std::size_t c = 0; c < layout.x.size(); ++c) {
    row.x[c] = parse_real(fields[layout.x[c]], line_no, layout.names[layout.x[c]]);
  }
  if (layout.s.empty()) {
    row.s = Eigen::RowVectorXd::Ones(1);
  } else {
    row.s.resize(static_cast<Index>(layout.s.size()));
    for (std::size_t c = 0; c < layout.s.size(); ++c) {
      row.s[c] = parse_real(fields[layout.s[c]], line_no, layout.names[layout.s[c]]);
    }
  }
  return row;
}

// Skips leading blank lines and returns the first non-blank one, or an empty
// string at end of input. `line_no` tracks the physical line count.
std::string read_header(std::istream& in, std::int64_t& line_no) {
  std::string header;
  while (std::getline(in, header)) {
    ++line_no;
    if (!trim(header).empty()) return header;
  }
  return {};
}

template <typename Each>
void scan_data_lines(std::istream& in, std::int64_t line_no, Each&& each) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    each(std::string_view(line), line_no);
  }
}

}  // namespace

PanelDataset parse_panel_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_panel_csv(in);
}

PanelDataset parse_panel_csv(std::istream& in) {
  std::int64_t line_no = 0;
  const std::string header = read_header(in, line_no);
  if (header.empty()) throw InputError("input is empty");
  const Layout layout = read_layout(header, true);

  std::vector<std::string> order;
  std::map<std::string, std::vector<ParsedRow>> grouped;
  scan_data_lines(in, line_no, [&](std::string_view line, std::int64_t at) {
    ParsedRow row = read_row(layout, line, at);
    auto [it, inserted] = grouped.try_emplace(row.subject);
    if (inserted) order.push_back(row.subject);
    it->second.push_back(std::move(row));
  });

  PanelDataset data;
  data.k = static_cast<Index>(layout.x.size());
  data.l = layout.s.empty() ? 1 : static_cast<Index>(layout.s.size());
  for (const auto& id : order) {
    const auto& rows = grouped.at(id);
    SubjectBlock subject;
    subject.subject_id = id;
    const auto n = static_cast<Index>(rows.size());
    subject.x.resize(n, data.k);
    subject.s.resize(n, data.l);
    for (Index j = 0; j < n; ++j) {
      subject.y.push_back(*rows[j].y);
      subject.x.row(j) = rows[j].x;
      subject.s.row(j) = rows[j].s;
    }
    data.subjects.push_back(std::move(subject));
  }
  return data;
}

void write_panel_csv(std::ostream& out, const PanelDataset& data) {
  out << "subject,y";
  for (Index c = 1; c <= data.k; ++c) out << ",x" << c;
  for (Index c = 1; c <= data.l; ++c) out << ",s" << c;
  out << '\n';
  for (const auto& subject : data.subjects) {
    for (Index j = 0; j < subject.size(); ++j) {
      out << subject.subject_id << ',' << subject.y[j];
      for (Index c = 0; c < data.k; ++c) out << ',' << format_double(subject.x(j, c));
      for (Index c = 0; c < data.l; ++c) out << ',' << format_double(subject.s(j, c));
      out << '\n';
    }
  }
}

CovariateTable parse_covariate_csv(std::istream& in) {
  CovariateTable table;
  std::int64_t line_no = 0;
  const std::string header = read_header(in, line_no);
  if (header.empty()) return table;
  const Layout layout = read_layout(header, false);
  table.k = static_cast<Index>(layout.x.size());
  table.l = layout.s.empty() ? 1 : static_cast<Index>(layout.s.size());
  scan_data_lines(in, line_no, [&](std::string_view line, std::int64_t at) {
    ParsedRow row = read_row(layout, line, at);
    table.rows.push_back({row.subject, row.x.transpose(), row.s.transpose()});
  });
  return table;
}

std::vector<ProgabideRecord> parse_progabide_csv(std::istream& in) {
  std::vector<ProgabideRecord> records;
  std::map<std::string, std::size_t> column;
  std::int64_t line_no = 0;
  const std::string header = read_header(in, line_no);
  if (header.empty()) throw InputError("input is empty");
  const auto names = split(header);
  for (std::size_t c = 0; c < names.size(); ++c) column.emplace(std::string(names[c]), c);
  for (const char* required : {"subject", "y", "baseline", "age", "trt", "visit"}) {
    if (!column.contains(required)) {
      throw InputError(std::string("missing required column '") + required + "'", 1);
    }
  }
  const std::size_t width = names.size();

  scan_data_lines(in, line_no, [&](std::string_view line, std::int64_t at) {
    const auto fields = split(line);
    if (fields.size() != width) {
      throw InputError("expected " + std::to_string(width) + " fields, found " +
                           std::to_string(fields.size()),
                       at);
    }
    ProgabideRecord rec;
    rec.subject_id = std::string(fields[column.at("subject")]);
    rec.seizures = parse_count(fields[column.at("y")], at, "y");
    rec.baseline = parse_real(fields[column.at("baseline")], at, "baseline");
    rec.age = parse_real(fields[column.at("age")], at, "age");
    rec.treatment = static_cast<int>(parse_count(fields[column.at("trt")], at, "trt"));
    rec.visit = static_cast<int>(parse_count(fields[column.at("visit")], at, "visit"));
    records.push_back(std::move(rec));
  });
  return records;
}

NumericTable read_numeric_csv(std::istream& in) {
  NumericTable table;
  std::int64_t line_no = 0;
  const std::string header = read_header(in, line_no);
  if (header.empty()) return table;
  for (auto name : split(header)) table.header.emplace_back(name);
  scan_data_lines(in, line_no, [&](std::string_view line, std::int64_t at) {
    const auto fields = split(line);
    if (fields.size() != table.header.size()) throw InputError("ragged row", at);
    std::vector<double> row;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      row.push_back(parse_real(fields[c], at, table.header[c]));
    }
    table.rows.push_back(std::move(row));
  });
  return table;
}

}  // namespace alq::cli
