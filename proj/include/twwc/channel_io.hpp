#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "twwc/channel.hpp"

namespace twwc {

using json = nlohmann::json;

// Channel document: {"x1","x2","y1","y2","z","p"} with p nested [x1][x2][y1][y2][z].
// nlohmann emits shortest round-trip decimals, so save/load is bit-exact.
inline json channel_to_json(const Channel& ch) {
    json jp = json::array();
    for (int a = 0; a < ch.x1; ++a) {
        json ja = json::array();
        for (int b = 0; b < ch.x2; ++b) {
            json jb = json::array();
            for (int c = 0; c < ch.y1; ++c) {
                json jc = json::array();
                for (int d = 0; d < ch.y2; ++d) {
                    json jd = json::array();
                    for (int e = 0; e < ch.z; ++e) jd.push_back(ch.at(a, b, c, d, e));
                    jc.push_back(std::move(jd));
                }
                jb.push_back(std::move(jc));
            }
            ja.push_back(std::move(jb));
        }
        jp.push_back(std::move(ja));
    }
    return json{{"x1", ch.x1}, {"x2", ch.x2}, {"y1", ch.y1}, {"y2", ch.y2}, {"z", ch.z}, {"p", jp}};
}

inline Channel channel_from_json(const json& j) {
    for (const char* k : {"x1", "x2", "y1", "y2", "z", "p"})
        if (!j.contains(k)) throw ParseError(std::string("channel document: missing field ") + k);
    Channel ch(j.at("x1").get<int>(), j.at("x2").get<int>(), j.at("y1").get<int>(),
               j.at("y2").get<int>(), j.at("z").get<int>());
    const json& jp = j.at("p");
    auto dim_check = [](const json& arr, int want, const char* what) {
        if (!arr.is_array() || int(arr.size()) != want)
            throw DimensionError(std::string("channel document: ") + what + " has wrong length");
    };
    dim_check(jp, ch.x1, "p");
    for (int a = 0; a < ch.x1; ++a) {
        dim_check(jp[a], ch.x2, "p[x1]");
        for (int b = 0; b < ch.x2; ++b) {
            dim_check(jp[a][b], ch.y1, "p[x1][x2]");
            for (int c = 0; c < ch.y1; ++c) {
                dim_check(jp[a][b][c], ch.y2, "p[x1][x2][y1]");
                for (int d = 0; d < ch.y2; ++d) {
                    dim_check(jp[a][b][c][d], ch.z, "p[x1][x2][y1][y2]");
                    for (int e = 0; e < ch.z; ++e) {
                        const json& v = jp[a][b][c][d][e];
                        if (!v.is_number()) throw ParseError("channel document: non-numeric entry");
                        ch.at(a, b, c, d, e) = v.get<double>();
                    }
                }
            }
        }
    }
    ch.validate();
    return ch;
}

inline Channel load_channel(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("channel document: ") + e.what());
    }
    return channel_from_json(j);
}

inline std::string save_channel(const Channel& ch) { return channel_to_json(ch).dump(2) + "\n"; }

inline Channel load_channel_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open channel file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return load_channel(ss.str());
}

inline json dist_to_json(const InputDistribution& d) {
    return json{{"pV1", d.pV1},
                {"pX1givenV1", d.pX1givenV1},
                {"pV2", d.pV2},
                {"pX2givenV2", d.pX2givenV2}};
}

inline InputDistribution dist_from_json(const json& j) {
    for (const char* k : {"pV1", "pX1givenV1", "pV2", "pX2givenV2"})
        if (!j.contains(k)) throw ParseError(std::string("distribution document: missing field ") + k);
    InputDistribution d;
    d.pV1 = j.at("pV1").get<std::vector<double>>();
    d.pX1givenV1 = j.at("pX1givenV1").get<std::vector<std::vector<double>>>();
    d.pV2 = j.at("pV2").get<std::vector<double>>();
    d.pX2givenV2 = j.at("pX2givenV2").get<std::vector<std::vector<double>>>();
    d.validate();
    return d;
}

inline InputDistribution load_dist(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("distribution document: ") + e.what());
    }
    return dist_from_json(j);
}

inline InputDistribution load_dist_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open distribution file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return load_dist(ss.str());
}

}  // namespace twwc
