#include <doctest.h>

#include <complex>

#include "mpcsm/oracles.hpp"

using namespace mpcsm;

TEST_CASE("exact oracle") {
    CHECK(oracle::naive_exact("abracadabra", "abra").positions == std::vector<std::uint64_t>{1, 8});
    CHECK(oracle::naive_exact("abc", "abc").positions == std::vector<std::uint64_t>{1});
    CHECK(oracle::naive_exact("ab", "abc").positions.empty());
}

TEST_CASE("'?' oracle") {
    CHECK(oracle::naive_question("abracadabra", "a?a").positions == std::vector<std::uint64_t>{4, 6});
    CHECK(oracle::naive_question("abcd", "??").positions == std::vector<std::uint64_t>{1, 2, 3});
    CHECK(oracle::naive_question("abracadabra", "bra") == oracle::naive_exact("abracadabra", "bra"));
}

TEST_CASE("'+' oracle") {
    CHECK_FALSE(oracle::naive_plus_spans("bookkeeper", "oo+k+ee+").empty());
    CHECK(oracle::naive_plus_spans("bookkeeper", "oo+kee+").empty());
    SpanSet want;
    for (auto i : oracle::naive_exact("abababa", "aba").positions) want.insert({i, i + 2});
    CHECK(oracle::naive_plus_spans("abababa", "aba") == want);
    CHECK(oracle::naive_plus_spans("aaa", "a+") == SpanSet{{1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}});
}

TEST_CASE("'*' oracle") {
    CHECK(oracle::naive_star("", "*"));
    CHECK(oracle::naive_star("xyz", "*"));
    CHECK_FALSE(oracle::naive_star("", "a*"));
    CHECK(oracle::naive_star("abracadabra", "abr*ra"));
    CHECK(oracle::naive_star("abracadabra", "abracadabra"));
    CHECK_FALSE(oracle::naive_star("abracadabra", "abracadabr"));
}

TEST_CASE("convolution oracle") {
    CHECK(oracle::naive_convolution(std::vector<std::int64_t>{1, 2}, {3, 4}) == std::vector<std::int64_t>{3, 10, 8});
    CHECK(oracle::naive_convolution(std::vector<std::int64_t>{5, 6, 7}, {1}) == std::vector<std::int64_t>{5, 6, 7});
    CHECK(oracle::naive_convolution(std::vector<std::int64_t>{0, 0}, {3, 4}) == std::vector<std::int64_t>{0, 0, 0});
    const auto c = oracle::naive_convolution(std::vector<std::complex<double>>{{0, 1}}, {{0, 1}});
    CHECK(c.at(0) == std::complex<double>(-1, 0));
}
