#include "ccfm/core/config_io.hpp"

#include "ccfm/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace ccfm::core {

using nlohmann::json;

namespace {

double number(const json& obj, const char* key) {
    if (!obj.contains(key)) throw InvalidConfig(std::string("missing field \"") + key + "\"");
    const auto& value = obj.at(key);
    if (!value.is_number()) throw InvalidConfig(std::string("field \"") + key + "\" must be a number");
    return value.get<double>();
}

} // namespace

PlatoonConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& err) {
        throw InvalidConfig(std::string("config is not valid JSON: ") + err.what());
    }
    if (!doc.is_object()) throw InvalidConfig("config must be a JSON object");

    PlatoonConfig config;
    if (!doc.contains("vehicles") || !doc["vehicles"].is_array())
        throw InvalidConfig("missing array \"vehicles\"");
    for (const auto& item : doc["vehicles"]) {
        if (!item.is_object()) throw InvalidConfig("each vehicle must be an object");
        config.vehicles.push_back({number(item, "alpha"), number(item, "tau"), number(item, "b")});
    }
    const double n = number(doc, "N");
    if (n != static_cast<double>(config.vehicles.size()))
        throw InvalidConfig("\"N\" does not match the number of vehicles");

    config.m = number(doc, "m");
    config.l = number(doc, "l");
    if (!doc.contains("leader") || !doc["leader"].is_object())
        throw InvalidConfig("missing object \"leader\"");
    const auto& leader = doc["leader"];
    config.leader.v_eq = number(leader, "v_eq");
    if (!leader.contains("ramp") || leader["ramp"].is_null()) {
        config.leader = LeaderProfile::settled(config.leader.v_eq);
    } else {
        config.leader.ramp = number(leader, "ramp");
    }
    config.kappa = doc.contains("kappa") ? number(doc, "kappa") : 1.0;

    validate(config);
    return config;
}

PlatoonConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string to_json(const PlatoonConfig& config) {
    json doc;
    doc["N"] = config.size();
    doc["vehicles"] = json::array();
    for (const auto& veh : config.vehicles) {
        doc["vehicles"].push_back({{"alpha", veh.alpha}, {"tau", veh.tau}, {"b", veh.b}});
    }
    doc["m"] = config.m;
    doc["l"] = config.l;
    doc["leader"] = {{"v_eq", config.leader.v_eq}};
    doc["leader"]["ramp"] = config.leader.is_settled() ? json(nullptr) : json(config.leader.ramp);
    doc["kappa"] = config.kappa;
    return doc.dump(2);
}

} // namespace ccfm::core
