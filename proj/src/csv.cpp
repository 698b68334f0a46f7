// Copyright 2026 The fedsmd Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fedsmd/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fedsmd/error.hpp"

namespace fedsmd {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_real(const std::string& s, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw IoError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

unsigned long long parse_count(const std::string& s, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw IoError("csv line " + std::to_string(line) + ": bad integer '" + s + "'");
  }
  return v;
}

template <typename Row, typename Fn>
std::vector<Row> parse_rows(std::string_view text, const char* header,
                            std::size_t columns, Fn&& make) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw IoError("csv: unexpected header");
  }
  std::vector<Row> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != columns) {
      throw IoError("csv line " + std::to_string(line_no) + ": expected " +
                    std::to_string(columns) + " columns");
    }
    rows.push_back(make(cells, line_no));
  }
  return rows;
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = kSummaryHeader;
  out += '\n';
  for (const SummaryRow& r : rows) {
    out += r.sweep_param + ',' + format_real(r.value) + ',' +
           std::to_string(r.repetition) + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.horizon) + ',' + format_real(r.global_error) + ',' +
           format_real(r.final_consensus_max) + ',' +
           format_real(r.mean_clip_fraction) + ',' + format_real(r.fitted_slope) + '\n';
  }
  return out;
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
  std::string out = kCurveHeader;
  out += '\n';
  for (const CurvePoint& p : curve) {
    out += std::to_string(p.t) + ',' + format_real(p.f_gap_avg_clients) + ',' +
           format_real(p.consensus_max) + ',' + format_real(p.consensus_bound) + ',' +
           format_real(p.alpha_t) + ',' + format_real(p.lambda_t) + ',' +
           format_real(p.clip_fraction) + '\n';
  }
  return out;
}

std::vector<SummaryRow> parse_summary_csv(std::string_view text) {
  return parse_rows<SummaryRow>(
      text, kSummaryHeader, 9, [](const std::vector<std::string>& c, std::size_t l) {
        SummaryRow r;
        r.sweep_param = c[0];
        r.value = parse_real(c[1], l);
        r.repetition = parse_count(c[2], l);
        r.seed = parse_count(c[3], l);
        r.horizon = parse_count(c[4], l);
        r.global_error = parse_real(c[5], l);
        r.final_consensus_max = parse_real(c[6], l);
        r.mean_clip_fraction = parse_real(c[7], l);
        r.fitted_slope = parse_real(c[8], l);
        return r;
      });
}

std::vector<CurvePoint> parse_curve_csv(std::string_view text) {
  return parse_rows<CurvePoint>(
      text, kCurveHeader, 7, [](const std::vector<std::string>& c, std::size_t l) {
        CurvePoint p;
        p.t = parse_count(c[0], l);
        p.f_gap_avg_clients = parse_real(c[1], l);
        p.consensus_max = parse_real(c[2], l);
        p.consensus_bound = parse_real(c[3], l);
        p.alpha_t = parse_real(c[4], l);
        p.lambda_t = parse_real(c[5], l);
        p.clip_fraction = parse_real(c[6], l);
        return p;
      });
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string plot_script(const std::string& sweep_param,
                        const std::vector<SweepPoint>& points) {
  std::string out;
  out += "# gnuplot -persist " + std::string(sweep_param == "none" ? "plot.gp" : "plot_" + sweep_param + ".gp") + "\n";
  out += "set datafile separator ','\n";
  out += "set logscale xy\n";
  out += "set xlabel 't'\n";
  out += "set ylabel 'global average optimization error'\n";
  out += "set key top right\n";
  out += "plot \\\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::string file = std::filesystem::path(points[i].curve_file).filename().string();
    const std::string title = sweep_param == "none"
                                  ? std::string("run")
                                  : sweep_param + " = " + value_token(points[i].value);
    out += "  '" + file + "' using 1:2 skip 1 with lines title '" + title + "'";
    out += i + 1 < points.size() ? ", \\\n" : "\n";
  }
  return out;
}

}  // namespace fedsmd
