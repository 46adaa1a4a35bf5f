#include "happrs/io/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "happrs/core/error.hpp"

namespace happrs::io {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error(ErrorKind::NumericalError, "cannot format number");
  return std::string(buf, end);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  return out;
}

double parse_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorKind::Io, "trace line " + std::to_string(line) + ": bad number \"" +
                                   std::string(s) + "\"");
  return v;
}

std::size_t parse_count(std::string_view s, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorKind::Io, "trace line " + std::to_string(line) + ": bad count \"" +
                                   std::string(s) + "\"");
  return v;
}

}  // namespace

void write_trace(const std::vector<StepRecord>& trace, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << kTraceHeader << '\n';
  for (const auto& r : trace) {
    out << r.k << ',' << format_double(r.t_x) << ',' << format_double(r.t_y) << ','
        << format_double(r.norm_dx) << ',' << format_double(r.norm_dy) << ','
        << format_double(r.L_beta) << ',' << format_double(r.L_hat) << ','
        << format_double(r.feas_inf) << ',' << format_double(r.kkt_inf) << ','
        << format_double(r.ofv) << ',' << r.backtracks_x << ',' << r.backtracks_y << ','
        << format_double(r.elapsed * 1000.0) << '\n';
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

std::vector<StepRecord> read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader)
    throw Error(ErrorKind::Io, path.string() + ": missing or unexpected trace header");
  std::vector<StepRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string_view> cols;
    std::string_view rest(line);
    for (;;) {
      auto comma = rest.find(',');
      cols.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cols.size() != 13)
      throw Error(ErrorKind::Io, "trace line " + std::to_string(lineno) + ": expected 13 columns");
    StepRecord r;
    r.k = parse_count(cols[0], lineno);
    r.t_x = parse_double(cols[1], lineno);
    r.t_y = parse_double(cols[2], lineno);
    r.norm_dx = parse_double(cols[3], lineno);
    r.norm_dy = parse_double(cols[4], lineno);
    r.L_beta = parse_double(cols[5], lineno);
    r.L_hat = parse_double(cols[6], lineno);
    r.feas_inf = parse_double(cols[7], lineno);
    r.kkt_inf = parse_double(cols[8], lineno);
    r.ofv = parse_double(cols[9], lineno);
    r.backtracks_x = parse_count(cols[10], lineno);
    r.backtracks_y = parse_count(cols[11], lineno);
    r.elapsed = parse_double(cols[12], lineno) / 1000.0;
    out.push_back(r);
  }
  return out;
}

void write_baseline_trace(const std::vector<GdStep>& trace, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "k,objective,grad_inf,step,backtracks,elapsed_ms\n";
  for (const auto& s : trace) {
    out << s.k << ',' << format_double(s.objective) << ',' << format_double(s.grad_inf) << ','
        << format_double(s.step) << ',' << s.backtracks << ',' << format_double(s.elapsed * 1000.0)
        << '\n';
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

}  // namespace happrs::io
