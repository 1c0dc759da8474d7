#include "actseq/activity.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace actseq {

bool intervals_overlap(const timed_interval& a, const timed_interval& b) {
  return happened_before(a.lo, b.hi) && happened_before(b.lo, a.hi);
}

bool global_activity_spec::contains(process_id pid) const {
  return std::binary_search(members.begin(), members.end(), pid);
}

constraint_spec::constraint_spec(std::vector<global_activity_spec> activities)
    : activities_(std::move(activities)) {
  if (activities_.empty()) {
    throw constraint_error("constraint needs at least one global activity");
  }
  std::set<process_id> seen;
  process_id max_pid = 0;
  for (std::size_t i = 0; i < activities_.size(); ++i) {
    auto& ga = activities_[i];
    ga.ga_id = static_cast<std::uint32_t>(i + 1);
    if (ga.members.empty()) {
      throw constraint_error("global activity " + std::to_string(ga.ga_id) +
                             " has no member processes");
    }
    std::sort(ga.members.begin(), ga.members.end());
    for (process_id pid : ga.members) {
      if (pid == 0) {
        throw constraint_error("process indices start at 1");
      }
      if (!seen.insert(pid).second) {
        throw constraint_error("process " + std::to_string(pid) +
                               " appears more than once; member sets must be "
                               "disjoint");
      }
      max_pid = std::max(max_pid, pid);
    }
  }
  if (seen.size() != max_pid) {
    for (process_id pid = 1; pid <= max_pid; ++pid) {
      if (!seen.count(pid)) {
        throw constraint_error("member sets must cover every process 1..n; "
                               "process " +
                               std::to_string(pid) + " is missing");
      }
    }
  }
  process_count_ = max_pid;
}

const global_activity_spec& constraint_spec::activity(std::uint32_t ga_id) const {
  if (ga_id == 0 || ga_id > activities_.size()) {
    throw constraint_error("unknown global activity id " + std::to_string(ga_id));
  }
  return activities_[ga_id - 1];
}

const global_activity_spec& constraint_spec::activity_of(process_id pid) const {
  for (const auto& ga : activities_) {
    if (ga.contains(pid)) {
      return ga;
    }
  }
  throw constraint_error("process " + std::to_string(pid) +
                         " belongs to no global activity");
}

namespace {

struct cursor {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw constraint_error("constraint syntax error at offset " +
                           std::to_string(pos) + ": " + what);
  }
};

ga_kind parse_kind(cursor& c) {
  c.skip_ws();
  auto rest = c.text.substr(c.pos);
  if (rest.substr(0, 3) == "AND") {
    c.pos += 3;
    return ga_kind::all_of;
  }
  if (rest.substr(0, 2) == "OR") {
    c.pos += 2;
    return ga_kind::any_of;
  }
  c.fail("expected AND or OR");
}

process_id parse_index(cursor& c) {
  c.skip_ws();
  std::size_t start = c.pos;
  std::uint64_t value = 0;
  while (c.pos < c.text.size() &&
         std::isdigit(static_cast<unsigned char>(c.text[c.pos]))) {
    value = value * 10 + static_cast<std::uint64_t>(c.text[c.pos] - '0');
    if (value > 1'000'000) {
      c.fail("process index too large");
    }
    ++c.pos;
  }
  if (c.pos == start) {
    c.fail("expected a process index");
  }
  if (value == 0) {
    c.fail("process indices start at 1");
  }
  return static_cast<process_id>(value);
}

global_activity_spec parse_activity(cursor& c) {
  global_activity_spec ga;
  ga.kind = parse_kind(c);
  if (!c.eat('(')) {
    c.fail("expected '('");
  }
  ga.members.push_back(parse_index(c));
  while (c.eat(',')) {
    ga.members.push_back(parse_index(c));
  }
  if (!c.eat(')')) {
    c.fail("expected ',' or ')'");
  }
  return ga;
}

} // namespace

constraint_spec parse_constraint(std::string_view text) {
  cursor c{text};
  std::vector<global_activity_spec> activities;
  activities.push_back(parse_activity(c));
  while (!c.done()) {
    if (!c.eat('<')) {
      c.fail("expected '<' between global activities");
    }
    activities.push_back(parse_activity(c));
  }
  return constraint_spec(std::move(activities));
}

std::string render_constraint(const constraint_spec& spec) {
  std::string out;
  for (std::size_t i = 0; i < spec.activities().size(); ++i) {
    const auto& ga = spec.activities()[i];
    if (i != 0) {
      out += " < ";
    }
    out += ga.kind == ga_kind::all_of ? "AND(" : "OR(";
    for (std::size_t j = 0; j < ga.members.size(); ++j) {
      if (j != 0) {
        out += ',';
      }
      out += std::to_string(ga.members[j]);
    }
    out += ')';
  }
  return out;
}

} // namespace actseq
