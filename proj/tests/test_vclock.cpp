#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "actseq/simnet.hpp"
#include "actseq/vclock.hpp"

using namespace actseq;

namespace {

// Random clocks with small entries so comparable pairs actually occur.
vector_clock random_clock(rng_stream& rng, std::size_t width) {
  std::vector<std::uint64_t> entries(width);
  for (auto& e : entries) {
    e = static_cast<std::uint64_t>(rng.uniform01() * 4.0);
  }
  return vector_clock(std::move(entries));
}

} // namespace

TEST_CASE("zero clocks") {
  CHECK(vector_clock::zeros(4) == vector_clock{0, 0, 0, 0});
  CHECK(vector_clock::zeros(1) == vector_clock{0});
  CHECK_THROWS_AS(vector_clock::zeros(0), std::invalid_argument);
}

TEST_CASE("increment") {
  CHECK(vector_clock{0, 0, 0, 0}.incremented(1) == vector_clock{1, 0, 0, 0});
  CHECK(vector_clock{2, 1, 0, 0}.incremented(2) == vector_clock{2, 2, 0, 0});
  CHECK_THROWS_AS(vector_clock{5}.incremented(2), std::out_of_range);
  CHECK_THROWS_AS(vector_clock{5}.incremented(0), std::out_of_range);
}

TEST_CASE("merge") {
  CHECK(merge(vector_clock{2, 1, 0, 0}, vector_clock{1, 3, 0, 0}) ==
        vector_clock{2, 3, 0, 0});
  CHECK(merge(vector_clock{0, 0}, vector_clock{0, 0}) == vector_clock{0, 0});
  CHECK_THROWS_AS(merge(vector_clock{1, 2}, vector_clock{1, 2, 3}),
                  std::invalid_argument);
}

TEST_CASE("happened_before") {
  CHECK(happened_before(vector_clock{1, 0, 0, 0}, vector_clock{2, 1, 0, 0}));
  CHECK_FALSE(happened_before(vector_clock{2, 0}, vector_clock{0, 2}));
  CHECK_FALSE(happened_before(vector_clock{1, 1}, vector_clock{1, 1}));
  CHECK_THROWS_AS(happened_before(vector_clock{1}, vector_clock{1, 2}),
                  std::invalid_argument);
}

TEST_CASE("leq") {
  CHECK(leq(vector_clock{2, 1, 0, 0}, vector_clock{2, 1, 1, 1}));
  CHECK(leq(vector_clock{1, 1}, vector_clock{1, 1}));
  CHECK_FALSE(leq(vector_clock{2, 0}, vector_clock{1, 5}));
}

TEST_CASE("concurrent") {
  CHECK(concurrent(vector_clock{2, 0}, vector_clock{0, 2}));
  CHECK_FALSE(concurrent(vector_clock{1, 0}, vector_clock{2, 0}));
  CHECK_FALSE(concurrent(vector_clock{1, 1}, vector_clock{1, 1}));
}

TEST_CASE("partial order laws on random clocks") {
  auto rng = rng_stream::derive(2024, 0xc10c);
  for (int i = 0; i < 2000; ++i) {
    auto a = random_clock(rng, 4);
    auto b = random_clock(rng, 4);
    auto c = random_clock(rng, 4);

    CHECK_FALSE(happened_before(a, a)); // irreflexive
    if (happened_before(a, b)) {
      CHECK_FALSE(happened_before(b, a)); // antisymmetric
    }
    if (happened_before(a, b) && happened_before(b, c)) {
      CHECK(happened_before(a, c)); // transitive
    }
    if (a != b) {
      int holds = (happened_before(a, b) ? 1 : 0) +
                  (happened_before(b, a) ? 1 : 0) + (concurrent(a, b) ? 1 : 0);
      CHECK(holds == 1); // trichotomy on distinct clocks
    }
  }
}

TEST_CASE("merge is the least upper bound") {
  auto rng = rng_stream::derive(7, 0x1b);
  for (int i = 0; i < 2000; ++i) {
    auto a = random_clock(rng, 3);
    auto b = random_clock(rng, 3);
    auto c = random_clock(rng, 3);
    auto m = merge(a, b);

    CHECK(leq(a, m));
    CHECK(leq(b, m));
    if (leq(a, c) && leq(b, c)) {
      CHECK(leq(m, c)); // least among upper bounds
    }
    CHECK(merge(a, b) == merge(b, a));
    CHECK(merge(merge(a, b), c) == merge(a, merge(b, c)));
    CHECK(merge(a, a) == a);
  }
}

TEST_CASE("rendering") {
  CHECK(to_string(vector_clock{1, 0, 2}) == "[1,0,2]");
  CHECK(to_string(vector_clock{}) == "[]");
}
