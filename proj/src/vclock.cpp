#include "actseq/vclock.hpp"

#include <algorithm>
#include <stdexcept>

namespace actseq {

vector_clock vector_clock::zeros(std::size_t process_count) {
  if (process_count == 0) {
    throw std::invalid_argument("vector_clock: process count must be at least 1");
  }
  return vector_clock(std::vector<std::uint64_t>(process_count, 0));
}

vector_clock::vector_clock(std::initializer_list<std::uint64_t> entries)
    : entries_(entries) {}

vector_clock::vector_clock(std::vector<std::uint64_t> entries)
    : entries_(std::move(entries)) {}

std::uint64_t vector_clock::at(process_id pid) const {
  if (pid == 0 || pid > entries_.size()) {
    throw std::out_of_range("vector_clock: process index out of range");
  }
  return entries_[pid - 1];
}

vector_clock vector_clock::incremented(process_id pid) const {
  if (pid == 0 || pid > entries_.size()) {
    throw std::out_of_range("vector_clock: process index out of range");
  }
  vector_clock out = *this;
  ++out.entries_[pid - 1];
  return out;
}

namespace {

void require_same_width(const vector_clock& a, const vector_clock& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("vector_clock: width mismatch");
  }
}

} // namespace

vector_clock merge(const vector_clock& a, const vector_clock& b) {
  require_same_width(a, b);
  std::vector<std::uint64_t> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::max(a.entries()[i], b.entries()[i]);
  }
  return vector_clock(std::move(out));
}

bool leq(const vector_clock& a, const vector_clock& b) {
  require_same_width(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.entries()[i] > b.entries()[i]) {
      return false;
    }
  }
  return true;
}

bool happened_before(const vector_clock& a, const vector_clock& b) {
  return leq(a, b) && a != b;
}

bool concurrent(const vector_clock& a, const vector_clock& b) {
  require_same_width(a, b);
  return a != b && !happened_before(a, b) && !happened_before(b, a);
}

std::string to_string(const vector_clock& vc) {
  std::string out = "[";
  for (std::size_t i = 0; i < vc.size(); ++i) {
    if (i != 0) {
      out += ',';
    }
    out += std::to_string(vc.entries()[i]);
  }
  out += ']';
  return out;
}

} // namespace actseq
