#pragma once

// JSON and CSV emitters.  Output is deterministic: keys are sorted and no clocks are read.

#include "repnorm.hpp"
#include "text.hpp"

#include <nlohmann/json.hpp>

#include <sstream>
#include <string>
#include <vector>

namespace scatter {

using Json = nlohmann::json;

inline constexpr int schema_version = 1;

template <WordProblemGroup H>
Json to_json(const SteinElt<H>& f) {
    Json out = Json::array();
    for (const auto& [s, c] : f.terms)
        out.push_back({{"term", s.str()}, {"coeff", to_string(c)}, {"region", region_name(f.region)}});
    return out;
}

template <WordProblemGroup H>
Json to_json(const BSteinElt<H>& f) {
    const char* r = f.restrict == BRestrict::B ? "B" : f.restrict == BRestrict::F ? "F" : "full";
    Json out = Json::array();
    for (const auto& [k, c] : f.terms)
        out.push_back({{"term", "chi(" + k.first.str() + ";" + k.second.str() + ")"}, {"coeff", to_string(c)}, {"region", r}});
    return out;
}

inline Json to_json(const NormEstimate& e) {
    Json out{{"lower", e.lower}, {"radius", e.radius}, {"iterations", e.iterations}};
    out["upper"] = e.upper ? Json(*e.upper) : Json(nullptr);
    return out;
}

template <WordProblemGroup H>
Json to_json(const SupportStratum<H>& s) {
    return {{"pattern", s.pattern_str()}, {"germ", "[" + s.base.str() + ", " + word_str<H>(s.representative) + "]"},
            {"value", to_string(s.value)}, {"interior", s.interior}};
}

template <WordProblemGroup H>
Json to_json(const OpenWitness<H>& w) {
    Json ex = Json::array();
    for (const auto& k : w.excluded) ex.push_back(k.str());
    return {{"h", w.h.str()}, {"channel", w.channel}, {"excluded", ex}, {"floor", to_string(w.floor)}};
}

inline Json to_json(const ProfileRow& r) {
    return {{"n", r.n}, {"m", r.m ? Json(*r.m) : Json("inf")}, {"sup_dist", to_string(r.sup_dist)},
            {"upper_bound", r.upper}, {"lower_bound", r.lower}};
}

/// Full-precision decimal for CSV cells.
inline std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

inline std::string profile_csv(const std::vector<ProfileRow>& rows) {
    std::string out = "n,m,sup_dist,upper_bound,lower_bound\n";
    for (const auto& r : rows)
        out += std::to_string(r.n) + "," + (r.m ? std::to_string(*r.m) : std::string("inf")) + "," + to_string(r.sup_dist) + "," +
               fmt_double(r.upper) + "," + fmt_double(r.lower) + "\n";
    return out;
}

}  // namespace scatter
