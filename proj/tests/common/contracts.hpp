#pragma once

// Measures the exchange count of every algorithm and compares it with the pinned constants.
// Shared by the unit suite and the acceptance binary.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus.hpp"
#include "mpcsm/exact_match.hpp"
#include "mpcsm/fft.hpp"
#include "mpcsm/plus.hpp"
#include "mpcsm/question.hpp"
#include "mpcsm/star.hpp"

namespace contracts {

using namespace mpcsm;

inline nlohmann::json load_golden() {
    std::ifstream in(std::string(MPCSM_GOLDEN_DIR) + "/round_contracts.json");
    if (!in) throw std::runtime_error("golden file missing");
    return nlohmann::json::parse(in);
}

inline std::uint64_t ceil_log2(std::uint64_t v) {
    std::uint64_t k = 0;
    while ((std::uint64_t{1} << k) < v) ++k;
    return k;
}

struct Drift {
    std::string what;
    std::uint64_t measured;
    std::uint64_t pinned;
};

// Runs each algorithm at a few sizes; any mismatch with the golden constants is returned.
inline std::vector<Drift> check_round_contracts(const std::vector<std::uint64_t>& sizes) {
    const auto g = load_golden();
    std::vector<Drift> out;
    auto expect_eq = [&](const std::string& what, std::uint64_t got, std::uint64_t want) {
        if (got != want) out.push_back({what, got, want});
    };
    auto expect_le = [&](const std::string& what, std::uint64_t got, std::uint64_t bound) {
        if (got > bound) out.push_back({what, got, bound});
    };
    for (std::uint64_t n : sizes) {
        const std::string t = corpus::random_text(n, 4, n);
        const std::string ns = " n=" + std::to_string(n);
        {
            MpcContext c(MpcConfig{n, 0.5});
            match_small_pattern(c, t, t.substr(n / 3, 4));
            expect_eq("exact_small" + ns, c.metrics().rounds, g["exact_small"]);
        }
        {
            MpcContext c(MpcConfig{n, 0.5});
            match_large_pattern(c, t, t.substr(n / 4, n / 2), HashParams::seeded(1));
            expect_eq("exact_large" + ns, c.metrics().rounds, g["exact_large"]);
        }
        {
            MpcContext c(MpcConfig{n, 0.5});
            ComplexVector a(n);
            for (std::uint64_t k = 0; k < n; ++k) a[k] = static_cast<double>(t[k]);
            mpc_fft(c, a);
            expect_eq("mpc_fft" + ns, c.metrics().rounds, g["mpc_fft"]);
        }
        {
            MpcContext c(MpcConfig{n, 0.5});
            ComplexVector a(n / 2, 1.0), b(n / 2, 2.0);
            mpc_convolution(c, a, b);
            expect_eq("mpc_convolution" + ns, c.metrics().rounds, g["mpc_convolution"]);
        }
        {
            MpcContext c(MpcConfig{n, 0.5});
            match_question(c, t, corpus::pattern_for_mode("q", t, n));
            expect_eq("question" + ns, c.metrics().rounds, g["question"]);
        }
        {
            MpcContext c(MpcConfig{n, 0.5});
            match_plus(c, t, corpus::pattern_for_mode("plus", t, n));
            expect_eq("plus" + ns, c.metrics().rounds, g["plus"]);
            expect_le("plus ceiling" + ns, c.metrics().rounds, g["plus_ceiling"]);
        }
        for (double x : {0.3, 0.5}) {
            MpcContext c(MpcConfig{n, x});
            star_match_dp(c, t, corpus::pattern_for_mode("star-dp", t, n));
            const std::uint64_t bound = g["star_dp"]["log2_machines_coefficient"].get<std::uint64_t>() *
                                            ceil_log2(c.machines()) +
                                        g["star_dp"]["constant"].get<std::uint64_t>();
            // Every machine holds text here, so the bound is attained exactly.
            expect_eq("star_dp x=" + std::to_string(x) + ns, c.metrics().rounds, bound);
        }
        {
            MpcContext c(MpcConfig{n, 0.5});
            const auto in = corpus::generate(corpus::Kind::prefix_free_star, n, n);
            star_match_nonprefix(c, in.text, in.pattern);
            const std::uint64_t bound =
                g["star_nonprefix"]["log2_n_coefficient"].get<std::uint64_t>() * ceil_log2(n) +
                g["star_nonprefix"]["constant"].get<std::uint64_t>();
            expect_le("star_nonprefix" + ns, c.metrics().rounds, bound);
        }
    }
    return out;
}

}  // namespace contracts
