#include <fstream>
#include <istream>

#include <json.hpp>

#include "dualchan/planner.hpp"

namespace dualchan::planner {

// Profile files are JSON:
// {
//   "channel_id": "B",
//   "band_ghz": [660, 695],
//   "entries": [
//     {"modulation": "BPSK", "distance_cm": 200, "ber": 0.01},
//     ...
//   ]
// }
// Distances must be strictly increasing per modulation.

ChannelProfile ChannelProfile::parse(std::istream& in, const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ProfileError("profile " + origin + ": " + e.what());
    }

    try {
        ChannelProfile profile(doc.at("channel_id").get<std::string>(),
                               {doc.at("band_ghz").at(0).get<double>(),
                                doc.at("band_ghz").at(1).get<double>()});

        std::map<Modulation, std::vector<BerSample>> grids;
        for (const auto& entry : doc.at("entries")) {
            const auto name = entry.at("modulation").get<std::string>();
            const auto modulation = modulation_from_string(name);
            if (!modulation) {
                throw ProfileError("profile " + origin + ": unknown modulation '" + name + "'");
            }
            grids[*modulation].push_back(
                {entry.at("distance_cm").get<double>(), entry.at("ber").get<double>()});
        }
        for (auto& [modulation, samples] : grids) {
            profile.add_samples(modulation, std::move(samples));
        }
        return profile;
    } catch (const nlohmann::json::exception& e) {
        throw ProfileError("profile " + origin + ": " + e.what());
    }
}

ChannelProfile ChannelProfile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ProfileError("profile: cannot open '" + path + "'");
    }
    return parse(in, path);
}

} // namespace dualchan::planner
