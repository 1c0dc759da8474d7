#include "actseq/trace.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <vector>

namespace actseq {

namespace {

std::string format_time(double t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", t);
  return buf;
}

// Splits on commas that are not inside brackets.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '[') {
      ++depth;
    } else if (c == ']') {
      --depth;
    } else if (c == ',' && depth == 0) {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(line.substr(start));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::uint64_t parse_u64(std::string_view s, std::size_t line_no, const char* what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw trace_error(line_no, std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return value;
}

double parse_time(std::string_view s, std::size_t line_no) {
  std::string buf(s);
  char* end = nullptr;
  double value = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size()) {
    throw trace_error(line_no, "bad time '" + buf + "'");
  }
  return value;
}

vector_clock parse_clock(std::string_view s, std::size_t line_no) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw trace_error(line_no, "bad vector clock '" + std::string(s) + "'");
  }
  s = s.substr(1, s.size() - 2);
  std::vector<std::uint64_t> entries;
  if (!s.empty()) {
    std::size_t start = 0;
    while (true) {
      std::size_t comma = s.find(',', start);
      auto piece = trim(s.substr(start, comma - start));
      entries.push_back(parse_u64(piece, line_no, "clock entry"));
      if (comma == std::string_view::npos) {
        break;
      }
      start = comma + 1;
    }
  }
  return vector_clock(std::move(entries));
}

} // namespace

std::string render_trace_line(const message& msg) {
  std::string out;
  if (msg.is_control()) {
    out += "CTL,";
    out += format_time(msg.send_time);
    out += ',' + std::to_string(msg.from) + ',' + std::to_string(msg.to);
    out += ",0,0,";
    out += to_string(msg.control().clock);
    out += ",[]";
  } else {
    const auto& chk = msg.checking();
    out += "CHK,";
    out += format_time(msg.send_time);
    out += ',' + std::to_string(msg.from) + ',' + std::to_string(msg.to);
    out += ',' + std::to_string(chk.seq) + ',' + std::to_string(chk.ga_id) + ',';
    out += to_string(chk.lo);
    out += ',';
    out += to_string(chk.hi);
  }
  return out;
}

std::string render_trace(const std::vector<message>& trace) {
  std::string out;
  for (const auto& msg : trace) {
    out += render_trace_line(msg);
    out += '\n';
  }
  return out;
}

message parse_trace_line(std::string_view line, std::size_t line_no) {
  auto fields = split_fields(line);
  if (fields.size() != 8) {
    throw trace_error(line_no, "expected 8 fields, got " +
                                   std::to_string(fields.size()));
  }
  for (auto& f : fields) {
    f = trim(f);
  }
  message msg;
  msg.send_time = parse_time(fields[1], line_no);
  msg.from = static_cast<process_id>(parse_u64(fields[2], line_no, "sender"));
  msg.to = static_cast<process_id>(parse_u64(fields[3], line_no, "recipient"));
  if (fields[0] == "CTL") {
    msg.body = control_payload{parse_clock(fields[6], line_no)};
  } else if (fields[0] == "CHK") {
    checking_payload chk;
    chk.seq = parse_u64(fields[4], line_no, "seq");
    chk.ga_id = static_cast<std::uint32_t>(parse_u64(fields[5], line_no, "ga_id"));
    chk.lo = parse_clock(fields[6], line_no);
    chk.hi = parse_clock(fields[7], line_no);
    msg.body = std::move(chk);
  } else {
    throw trace_error(line_no, "unknown record kind '" + std::string(fields[0]) + "'");
  }
  return msg;
}

std::vector<message> parse_trace(std::string_view text) {
  std::vector<message> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(
        start, nl == std::string_view::npos ? text.size() - start : nl - start);
    ++line_no;
    auto trimmed = trim(line);
    if (!trimmed.empty() && trimmed.front() != '#') {
      out.push_back(parse_trace_line(trimmed, line_no));
    }
    if (nl == std::string_view::npos) {
      break;
    }
    start = nl + 1;
  }
  return out;
}

} // namespace actseq
