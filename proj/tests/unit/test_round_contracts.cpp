#include <doctest.h>

#include "../common/contracts.hpp"

TEST_CASE("exchange counts match the pinned constants") {
    const auto drift = contracts::check_round_contracts({1u << 10, 1u << 12, 1u << 14});
    for (const auto& d : drift) MESSAGE(d.what << ": measured " << d.measured << ", pinned " << d.pinned);
    CHECK(drift.empty());
}

TEST_CASE("golden file has every contract") {
    const auto g = contracts::load_golden();
    for (auto k : {"exact_small", "exact_large", "mpc_fft", "mpc_convolution", "question", "plus", "plus_ceiling",
                   "star_dp", "star_nonprefix"})
        CHECK(g.contains(k));
    CHECK(g["plus"].get<int>() <= g["plus_ceiling"].get<int>());
}
