#pragma once

#include <algorithm>

#include "mpcsm/exact_match.hpp"
#include "mpcsm/fft.hpp"
#include "mpcsm/runtime.hpp"

namespace mpcsm::detail {

// Reads the first convolution output ("conv0"), keeps entries offset + stride * i0 that pass
// `decide`, and routes each hit i0 + 1 to the owner of text position i0. One exchange.
template <class Decide>
MatchSet compact_hits(MpcContext& ctx, const DistributedConvolution& d, std::uint64_t n, std::uint64_t m,
                      std::uint64_t offset, std::uint64_t stride, Decide decide) {
    const auto tl = BlockLayout::balanced(n, ctx.machines());
    ctx.run_round([&](Machine& me) {
        const std::size_t q = me.id();
        if (q >= d.shape.machines) return;
        std::vector<std::vector<Word>> out(me.machines());
        const auto& blk = me.state().at("conv0");
        const std::size_t width = blk.size() / d.shape.per_machine;
        for (std::size_t u = 0; u < d.shape.per_machine; ++u) {
            const std::uint64_t k = q * d.shape.per_machine + u;
            if (k < offset || (k - offset) % stride != 0) continue;
            const std::uint64_t i0 = (k - offset) / stride;
            if (i0 + m > n) continue;
            if (decide(&blk[u * width])) out[tl.owner(i0)].push_back(i0 + 1);
        }
        me.add_work(d.shape.per_machine);
        me.state().erase("conv0");
        for (std::size_t dst = 0; dst < out.size(); ++dst)
            if (!out[dst].empty()) me.send(dst, 0, std::move(out[dst]));
    });
    ctx.exchange();
    ctx.run_round([&](Machine& me) {
        auto& hits = me.state().buf("matches");
        hits.clear();
        for (const auto& msg : me.inbox()) hits.insert(hits.end(), msg.payload.begin(), msg.payload.end());
        std::sort(hits.begin(), hits.end());
    });
    MatchSet r{n, m, {}};
    for (Word w : gather(ctx, "matches")) r.positions.push_back(w);
    for (std::size_t i = 0; i < ctx.machines(); ++i) ctx.state(i).erase("matches");
    return r;
}

}  // namespace mpcsm::detail
