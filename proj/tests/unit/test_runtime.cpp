#include <doctest.h>

#include <numeric>

#include "mpcsm/runtime.hpp"

using namespace mpcsm;

namespace {

MpcConfig tight(std::uint64_t n) {
    MpcConfig c{n, 0.5, 1.0, 0};
    return c;
}

std::vector<Word> iota_words(std::size_t k) {
    std::vector<Word> v(k);
    std::iota(v.begin(), v.end(), Word{0});
    return v;
}

}  // namespace

TEST_CASE("machine count and capacity follow n^x and n^(1-x)") {
    MpcContext ctx(tight(1024));
    CHECK(ctx.machines() == 32);
    CHECK(ctx.capacity() == 32);

    MpcContext one(MpcConfig{1, 0.5});
    CHECK(one.machines() == 1);
    CHECK(one.capacity() >= 1);

    CHECK_THROWS_AS(MpcContext(MpcConfig{1000000, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(MpcContext(MpcConfig{0, 0.5}), std::invalid_argument);
}

TEST_CASE("scatter_input partitions contiguously") {
    MpcContext ctx(tight(16));
    REQUIRE(ctx.machines() == 4);
    const auto w = iota_words(8);
    ctx.scatter_input(w, "in", 2);
    for (std::size_t i = 0; i < 4; ++i) CHECK(ctx.state(i).at("in") == std::vector<Word>{2 * i, 2 * i + 1});

    ctx.scatter_input(iota_words(7), "ragged", 2);
    CHECK(ctx.state(3).at("ragged").size() == 1);

    CHECK_THROWS_AS(ctx.scatter_input(iota_words(9), "over", 2), BudgetViolation);
    CHECK(ctx.metrics().rounds == 0);
}

TEST_CASE("rounds, messages and receive budget") {
    MpcContext ctx(tight(16));
    const auto S = ctx.capacity();

    SUBCASE("identity program sends nothing") {
        ctx.scatter_input(iota_words(16), "in");
        const auto before = ctx.state(2);
        ctx.run_round([](Machine&) {});
        CHECK(ctx.state(2) == before);
        ctx.exchange();
        CHECK(ctx.metrics().rounds == 1);
        CHECK(ctx.metrics().peak_round_receive_words == 0);
    }
    SUBCASE("every machine sends one word to machine 0") {
        MpcContext roomy(MpcConfig{16, 0.5});
        roomy.run_round([](Machine& me) { me.send(0, 1, {me.id()}); });
        roomy.exchange();
        CHECK(roomy.inbox(0).size() == roomy.machines());
        CHECK(roomy.inbox(1).empty());
    }
    SUBCASE("messages are buffered until the exchange") {
        ctx.run_round([](Machine& me) {
            if (me.id() == 3) me.send(0, 1, {me.id()});
        });
        CHECK(ctx.inbox(0).empty());
        ctx.exchange();
        CHECK(ctx.inbox(0).size() == 1);
    }
    SUBCASE("exactly S words to one machine is allowed") {
        ctx.run_round([&](Machine& me) {
            if (me.id() == 1) me.send(0, 1, std::vector<Word>(S - kRoutingWords, 7));
        });
        ctx.exchange();
        CHECK(ctx.metrics().peak_round_receive_words == S);
        CHECK(ctx.metrics().violations.empty());
    }
    SUBCASE("S + 1 words to one machine is a receive violation") {
        // Two senders, each within its own budget.
        ctx.run_round([&](Machine& me) {
            if (me.id() == 1) me.send(0, 1, std::vector<Word>(S / 2 - kRoutingWords, 7));
            if (me.id() == 2) me.send(0, 1, std::vector<Word>(S - S / 2 + 1 - kRoutingWords, 7));
        });
        try {
            ctx.exchange();
            FAIL("expected a violation");
        } catch (const BudgetViolation& e) {
            CHECK(e.violation().kind == ViolationKind::receive);
            CHECK(e.violation().machine == 0);
        }
    }
    SUBCASE("allocating S + 1 words names the machine") {
        try {
            ctx.run_round([&](Machine& me) {
                if (me.id() == 2) me.state().buf("big").assign(S + 1, 0);
            });
            FAIL("expected a violation");
        } catch (const BudgetViolation& e) {
            CHECK(e.violation().kind == ViolationKind::memory);
            CHECK(e.violation().machine == 2);
        }
    }
}

TEST_CASE("metrics accumulate") {
    MpcConfig cfg = tight(16);
    cfg.enforce = Enforce::record_only;
    MpcContext ctx(cfg);
    CHECK(ctx.metrics() == MetricsReport{});
    for (int r = 0; r < 3; ++r) ctx.exchange();
    CHECK(ctx.metrics().rounds == 3);
    ctx.run_round([&](Machine& me) {
        if (me.id() == 0) me.state().buf("big").assign(ctx.capacity() + 5, 0);
    });
    CHECK(ctx.metrics().violations.size() == 1);
}

TEST_CASE("metrics JSON round-trips") {
    MetricsReport m;
    m.rounds = 7;
    m.peak_machine_memory_words = 120;
    m.peak_round_receive_words = 64;
    m.total_work_ops = 9000;
    m.violations.push_back({3, 1, ViolationKind::receive, 99});
    const std::string s = to_json(m);
    CHECK(metrics_from_json(s) == m);
    CHECK(to_json(metrics_from_json(s)) == s);
}

TEST_CASE("balanced layout and gather") {
    MpcContext ctx(MpcConfig{100, 0.5});
    const auto data = iota_words(37);
    const auto tl = scatter_balanced(ctx, data, "x");
    CHECK(tl.block * ctx.machines() >= 37);
    CHECK(gather(ctx, "x") == data);
    for (std::uint64_t p = 0; p < 37; ++p) {
        const auto o = tl.owner(p);
        CHECK(tl.begin(o) <= p);
        CHECK(p < tl.end(o));
    }
}

TEST_CASE("sample sort orders records in three exchanges") {
    MpcConfig cfg{4096, 0.5};
    MpcContext ctx(cfg);
    std::vector<Word> recs;
    std::uint64_t s = 12345;
    for (int k = 0; k < 1500; ++k) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        recs.push_back(s >> 40);
        recs.push_back(k);
    }
    // Blocks must hold whole records.
    ctx.scatter_input(recs, "r", 2 * ((recs.size() / 2 + ctx.machines() - 1) / ctx.machines()));
    sample_sort(ctx, "r", 2);
    CHECK(ctx.metrics().rounds == 3);
    const auto out = gather(ctx, "r");
    REQUIRE(out.size() == recs.size());
    std::vector<std::pair<Word, Word>> a, b;
    for (std::size_t t = 0; t < recs.size(); t += 2) {
        a.emplace_back(recs[t], recs[t + 1]);
        b.emplace_back(out[t], out[t + 1]);
    }
    std::sort(a.begin(), a.end());
    CHECK(a == b);
}
