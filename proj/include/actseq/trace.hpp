#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "actseq/agent.hpp"

namespace actseq {

/// Message trace, one record per line:
///
///   kind,time,from,to,seq,ga_id,vc_lo,vc_hi
///
/// kind is CTL or CHK; vector clocks render as bracketed integer lists.
/// Control messages carry their payload clock in vc_lo, with seq and ga_id 0
/// and vc_hi empty. Times are fixed six-decimal seconds so traces diff and
/// compare bytewise.

struct trace_error : std::runtime_error {
  trace_error(std::size_t line_no, const std::string& what)
      : std::runtime_error("trace line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
  std::size_t line = 0;
};

std::string render_trace_line(const message& msg);
std::string render_trace(const std::vector<message>& trace);

/// Parses one line. `line_no` is used for diagnostics only.
message parse_trace_line(std::string_view line, std::size_t line_no);

/// Parses a whole trace; blank lines and lines starting with '#' are skipped.
std::vector<message> parse_trace(std::string_view text);

} // namespace actseq
