#pragma once

#include <set>
#include <string>
#include <vector>

#include "commsuccess/errors.hpp"

namespace commsuccess {

enum class FeatureFamily { VolumeSpeed, Distribution, UserComposition, Linguistic, Social, Parents };

inline const char* family_name(FeatureFamily f) {
    switch (f) {
        case FeatureFamily::VolumeSpeed: return "volume_speed";
        case FeatureFamily::Distribution: return "distribution";
        case FeatureFamily::UserComposition: return "user_composition";
        case FeatureFamily::Linguistic: return "linguistic";
        case FeatureFamily::Social: return "social";
        case FeatureFamily::Parents: return "parents";
    }
    throw ConfigError("bad feature family");
}

inline FeatureFamily family_from_name(const std::string& name) {
    for (auto f : {FeatureFamily::VolumeSpeed, FeatureFamily::Distribution,
                   FeatureFamily::UserComposition, FeatureFamily::Linguistic, FeatureFamily::Social,
                   FeatureFamily::Parents})
        if (name == family_name(f)) return f;
    throw ConfigError("unknown feature family: " + name);
}

// Named real-valued features for one community at one k. Names appear in a
// deterministic order fixed by the extraction code, identical across
// communities for a given configuration. Values are always finite; degenerate
// inputs produce 0 plus an entry in `flagged` so the model stage can impute.
struct FeatureVector {
    std::string community;
    int k = 0;
    std::vector<std::string> names;
    std::vector<double> values;
    std::vector<FeatureFamily> families;
    std::set<std::string> flagged;

    void add(FeatureFamily family, std::string name, double value, bool flag = false) {
        if (flag) flagged.insert(name);
        names.push_back(std::move(name));
        values.push_back(value);
        families.push_back(family);
    }

    std::size_t size() const { return names.size(); }
};

// Big Five trait columns an external personality-inference step would join
// in; reserved so the name registry stays stable.
inline const std::vector<std::string>& reserved_feature_names() {
    static const std::vector<std::string> names = {
        "big5_extraversion", "big5_conscientiousness", "big5_neuroticism", "big5_agreeableness",
        "big5_openness"};
    return names;
}

}  // namespace commsuccess
