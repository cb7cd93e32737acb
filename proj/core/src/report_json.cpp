#include <json.hpp>

#include "mpcsm/plus.hpp"
#include "mpcsm/runtime.hpp"

namespace mpcsm {

using Json = nlohmann::ordered_json;

namespace {

const char* kind_name(ViolationKind k) { return k == ViolationKind::memory ? "memory" : "receive"; }

ViolationKind kind_from(const std::string& s) {
    if (s == "memory") return ViolationKind::memory;
    if (s == "receive") return ViolationKind::receive;
    throw std::invalid_argument("unknown violation kind: " + s);
}

}  // namespace

std::string to_json(const MetricsReport& m) {
    Json j;
    j["rounds"] = m.rounds;
    j["peak_machine_memory_words"] = m.peak_machine_memory_words;
    j["peak_round_receive_words"] = m.peak_round_receive_words;
    j["total_work_ops"] = m.total_work_ops;
    j["violations"] = Json::array();
    for (const auto& v : m.violations) {
        j["violations"].push_back(
            {{"round", v.round}, {"machine", v.machine}, {"kind", kind_name(v.kind)}, {"amount", v.amount}});
    }
    return j.dump();
}

MetricsReport metrics_from_json(const std::string& text) {
    Json j = Json::parse(text);
    MetricsReport m;
    m.rounds = j.at("rounds").get<std::uint64_t>();
    m.peak_machine_memory_words = j.at("peak_machine_memory_words").get<std::uint64_t>();
    m.peak_round_receive_words = j.at("peak_round_receive_words").get<std::uint64_t>();
    m.total_work_ops = j.at("total_work_ops").get<std::uint64_t>();
    for (const auto& v : j.at("violations")) {
        m.violations.push_back({v.at("round").get<std::uint64_t>(), v.at("machine").get<std::size_t>(),
                                kind_from(v.at("kind").get<std::string>()), v.at("amount").get<std::uint64_t>()});
    }
    return m;
}

std::string to_json(const PlusMatchReport& r) {
    Json j = Json::array();
    for (const auto& a : r.alignments)
        j.push_back({{"block_index", a.block_index},
                     {"min_start", a.min_start},
                     {"max_start", a.max_start},
                     {"min_end", a.min_end},
                     {"max_end", a.max_end}});
    return j.dump();
}

PlusMatchReport plus_report_from_json(const std::string& text) {
    PlusMatchReport r;
    for (const auto& a : Json::parse(text))
        r.alignments.push_back({a.at("block_index").get<std::uint64_t>(), a.at("min_start").get<std::uint64_t>(),
                                a.at("max_start").get<std::uint64_t>(), a.at("min_end").get<std::uint64_t>(),
                                a.at("max_end").get<std::uint64_t>()});
    return r;
}

}  // namespace mpcsm
