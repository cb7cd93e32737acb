#include <doctest.h>

#include <random>

#include "mpcsm/oracles.hpp"
#include "mpcsm/plus.hpp"

using namespace mpcsm;

TEST_CASE("run-length encoding") {
    CHECK(rle_encode_text("aabcccddad").to_string() == "a[2] b[1] c[3] d[2] a[1] d[1]");
    CHECK(rle_encode("ab+ccc+").to_string() == "a[1] b[1+] c[3+]");
    CHECK(rle_encode("o+o+k+ee+p").to_string() == "o[2+] k[1+] e[2+] p[1]");
    CHECK(rle_encode_text("bookkeeper").to_string() == "b[1] o[2] k[2] e[2] p[1] e[1] r[1]");
    CHECK(rle_encode("a\\+").to_string() == "a[1] +[1]");
}

TEST_CASE("distributed run-length encoding") {
    MpcContext four(MpcConfig{16, 0.5});
    REQUIRE(four.machines() == 4);
    CHECK(rle_encode_distributed(four, "aaaa").to_string() == "a[4]");
    CHECK(four.metrics().rounds == 1);
    for (double x : {0.2, 0.35, 0.5}) {
        MpcContext ctx(MpcConfig{10, x});
        CHECK(rle_encode_distributed(ctx, "aabcccddad") == rle_encode_text("aabcccddad"));
    }
    std::mt19937_64 g(5);
    for (int it = 0; it < 100; ++it) {
        std::string s;
        const std::size_t n = 1 + g() % 500;
        while (s.size() < n) s += std::string(1 + g() % 6, static_cast<char>('a' + g() % 3));
        MpcContext ctx(MpcConfig{s.size(), 0.1 + 0.4 * (g() % 5) / 4.0});
        REQUIRE(rle_encode_distributed(ctx, s) == rle_encode_text(s));
    }
}

TEST_CASE("greater-than and subset matching") {
    MpcContext ctx(MpcConfig{5, 0.5});
    CHECK(greater_than_match(ctx, {3, 1, 4, 1, 5}, {1, 4}).positions == std::vector<std::uint64_t>{2, 4});
    MpcContext z(MpcConfig{5, 0.5});
    CHECK(greater_than_match(z, {3, 1, 4, 1, 5}, {0, 0}).positions.size() == 4);

    const auto [ts, ps] = reduce_gtm_to_subset({2}, {1});
    CHECK(ts == SubsetVector{{0, 1, 2}});
    CHECK(ps == SubsetVector{{1}});
    CHECK(reduce_gtm_to_subset({0}, {0}).first == SubsetVector{{0}});

    MpcContext s(MpcConfig{3, 0.5});
    CHECK(subset_match(s, {{1, 2}, {1}, {2, 3}}, {{1}, {2}}).positions == std::vector<std::uint64_t>{2});
    MpcContext e(MpcConfig{3, 0.5});
    CHECK(subset_match(e, {{1, 2}, {1}, {2, 3}}, {{}, {}}).positions == std::vector<std::uint64_t>{1, 2});

    std::mt19937_64 g(8);
    for (int it = 0; it < 200; ++it) {
        const std::size_t n = 1 + g() % 40, m = 1 + g() % 5;
        std::vector<std::uint64_t> t(n), p(m);
        for (auto& v : t) v = g() % 21;
        for (auto& v : p) v = g() % 21;
        // Sets {0..T_i} grow with the values, not with n; at a handful of positions that exceeds S.
        MpcConfig loose{n, 0.5};
        loose.enforce = Enforce::record_only;
        MpcContext c(loose);
        REQUIRE(greater_than_match(c, t, p) == oracle::naive_greater_than(t, p));

        auto set = [&] {
            SymbolSet out;
            for (Word sym = 0; sym < 6; ++sym)
                if (g() % 3 == 0 && out.size() < 3) out.push_back(sym);
            return out;
        };
        SubsetVector ts2(n), ps2(m);
        for (auto& v : ts2) v = set();
        for (auto& v : ps2) v = set();
        std::vector<std::vector<std::uint64_t>> to(ts2.begin(), ts2.end()), po(ps2.begin(), ps2.end());
        MpcContext c2(loose);
        REQUIRE(subset_match(c2, ts2, ps2) == oracle::naive_subset(to, po));
    }
}

TEST_CASE("'+' matching") {
    for (auto pl : {PlusPipeline::direct_subset, PlusPipeline::letters_counts_gtm}) {
        MpcContext a(MpcConfig{10, 0.5});
        const auto r = match_plus(a, "bookkeeper", "oo+k+ee+", pl);
        CHECK_FALSE(r.alignments.empty());
        CHECK(r.spans() == oracle::naive_plus_spans("bookkeeper", "oo+k+ee+"));
        CHECK(a.metrics().rounds == 6);

        MpcContext b(MpcConfig{10, 0.5});
        CHECK(match_plus(b, "bookkeeper", "oo+kee+", pl).alignments.empty());

        MpcContext c(MpcConfig{10, 0.5});
        CHECK(match_plus(c, "bookkeeper", "o+o+k+ee+p", pl).spans() ==
              oracle::naive_plus_spans("bookkeeper", "o+o+k+ee+p"));
    }
}

TEST_CASE("'+' matching against the oracle") {
    std::mt19937_64 g(21);
    for (int it = 0; it < 300; ++it) {
        std::string t;
        const std::size_t n = 1 + g() % 60;
        while (t.size() < n) t += std::string(1 + g() % 4, static_cast<char>('a' + g() % 3));
        std::string p;
        const std::size_t m = 1 + g() % 6;
        for (std::size_t k = 0; k < m; ++k) {
            p += static_cast<char>('a' + g() % 3);
            if (g() % 2) p += '+';
        }
        const auto want = oracle::naive_plus_spans(t, p);
        for (auto pl : {PlusPipeline::direct_subset, PlusPipeline::letters_counts_gtm}) {
            MpcConfig cfg{t.size(), 0.5};
            cfg.enforce = Enforce::record_only;
            MpcContext ctx(cfg);
            REQUIRE(match_plus(ctx, t, p, pl).spans() == want);
        }
    }
}

TEST_CASE("'+' report JSON round-trips") {
    PlusMatchReport r;
    r.alignments.push_back({2, 2, 2, 7, 7});
    r.alignments.push_back({5, 9, 11, 12, 20});
    const std::string s = to_json(r);
    CHECK(plus_report_from_json(s) == r);
    CHECK(to_json(plus_report_from_json(s)) == s);
}
