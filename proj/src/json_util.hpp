#pragma once

// Box <-> JSON helpers shared by the serializers. Bounds are numbers or the
// strings "inf" / "-inf"; null also means unbounded.

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "qcx/common.hpp"

namespace qcx {

inline nlohmann::json box_to_json(const Box& b) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& iv : b) {
        nlohmann::json side = nlohmann::json::array();
        side.push_back(std::isfinite(iv.lo) ? nlohmann::json(iv.lo) : nlohmann::json("-inf"));
        side.push_back(std::isfinite(iv.hi) ? nlohmann::json(iv.hi) : nlohmann::json("inf"));
        arr.push_back(side);
    }
    return arr;
}

inline double json_bound(const nlohmann::json& j, double fallback) {
    if (j.is_number()) return j.get<double>();
    if (j.is_null()) return fallback;
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    throw std::invalid_argument("bad interval bound in box JSON");
}

inline Box box_from_json_value(const nlohmann::json& arr) {
    if (!arr.is_array()) throw std::invalid_argument("box JSON must be an array of [lo, hi]");
    Box b;
    for (const auto& side : arr) {
        if (!side.is_array() || side.size() != 2)
            throw std::invalid_argument("box JSON must be an array of [lo, hi]");
        Interval iv{json_bound(side[0], -kInf), json_bound(side[1], kInf)};
        if (!(iv.lo < iv.hi)) throw std::invalid_argument("empty interval in box JSON");
        b.push_back(iv);
    }
    return b;
}

}  // namespace qcx
