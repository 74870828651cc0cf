#include "regpath/front_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace regpath {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s, int line_no, std::string_view column) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw SchemaError("front csv line " + std::to_string(line_no) + ": bad value '" + s +
                      "' in column " + std::string(column));
  }
  return v;
}

std::optional<double> to_optional(const std::string& s, int line_no, std::string_view column) {
  if (s.empty()) return std::nullopt;
  return to_double(s, line_no, column);
}

}  // namespace

void write_front_csv(std::ostream& os, const FrontArchive& archive) {
  for (std::size_t i = 0; i < kFrontCsvColumns.size(); ++i)
    os << (i ? "," : "") << kFrontCsvColumns[i];
  os << '\n';
  const auto prec = os.precision(17);
  auto opt = [&os](const std::optional<double>& v) {
    os << ',';
    if (v) os << *v;
  };
  for (const auto& p : archive.points()) {
    os << p.index << ',' << to_string(p.direction) << ',' << p.f1_train << ',' << p.g2 << ','
       << p.l1_unscaled;
    opt(p.f1_test);
    opt(p.acc_train);
    opt(p.acc_test);
    os << ',' << p.grad_evals_cum << '\n';
  }
  os.precision(prec);
}

void write_front_csv(const std::filesystem::path& path, const FrontArchive& archive) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_front_csv(out, archive);
}

FrontArchive read_front_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw SchemaError("front csv: empty input");
  const auto header = split_line(line);
  const std::vector<std::string> expected(kFrontCsvColumns.begin(), kFrontCsvColumns.end());
  if (header != expected) {
    std::string missing, unexpected;
    for (const auto& c : expected) {
      if (std::find(header.begin(), header.end(), c) == header.end()) missing += " " + c;
    }
    for (const auto& c : header) {
      if (std::find(expected.begin(), expected.end(), c) == expected.end()) unexpected += " " + c;
    }
    std::string msg = "front csv: header does not match schema;";
    msg += " missing:" + (missing.empty() ? std::string(" none") : missing);
    msg += "; unexpected:" + (unexpected.empty() ? std::string(" none") : unexpected);
    if (missing.empty() && unexpected.empty()) msg += "; columns are out of order";
    throw SchemaError(msg);
  }

  FrontArchive archive;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_line(line);
    if (cells.size() != expected.size()) {
      throw SchemaError("front csv line " + std::to_string(line_no) + ": expected " +
                        std::to_string(expected.size()) + " fields, got " +
                        std::to_string(cells.size()));
    }
    ParetoPoint p;
    p.index = static_cast<Index>(to_double(cells[0], line_no, "index"));
    const auto dir = direction_from_string(cells[1]);
    if (!dir) {
      throw SchemaError("front csv line " + std::to_string(line_no) + ": unknown direction '" +
                        cells[1] + "'");
    }
    p.direction = *dir;
    p.f1_train = to_double(cells[2], line_no, "f1_train");
    p.g2 = to_double(cells[3], line_no, "g2_scaled");
    p.l1_unscaled = to_double(cells[4], line_no, "l1_unscaled");
    p.f1_test = to_optional(cells[5], line_no, "f1_test");
    p.acc_train = to_optional(cells[6], line_no, "acc_train");
    p.acc_test = to_optional(cells[7], line_no, "acc_test");
    p.grad_evals_cum = static_cast<std::int64_t>(to_double(cells[8], line_no, "grad_evals_cum"));
    archive.append_raw(std::move(p));
  }
  return archive;
}

FrontArchive read_front_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_front_csv(in);
}

}  // namespace regpath
