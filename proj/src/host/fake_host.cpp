#include "plweb/host.hpp"

#include <json.hpp>

namespace plweb::host {

namespace {

Value convert(const nlohmann::json& j, const std::map<std::string, Object::Function>& functions)
{
    switch (j.type()) {
    case nlohmann::json::value_t::null:
        return Null{};
    case nlohmann::json::value_t::boolean:
        return j.get<bool>();
    case nlohmann::json::value_t::number_integer:
    case nlohmann::json::value_t::number_unsigned:
    case nlohmann::json::value_t::number_float:
        return j.get<double>();
    case nlohmann::json::value_t::string:
        return j.get<std::string>();
    case nlohmann::json::value_t::array: {
        std::vector<Value> items;
        for (const auto& e : j)
            items.push_back(convert(e, functions));
        return Object::array(std::move(items));
    }
    case nlohmann::json::value_t::object: {
        if (j.size() == 1 && j.contains("$function")) {
            std::string name = j["$function"].get<std::string>();
            auto it = functions.find(name);
            if (it == functions.end())
                throw std::invalid_argument("unknown scripted function: " + name);
            return Object::function(name, it->second);
        }
        ObjectPtr o = Object::record();
        for (const auto& [k, v] : j.items())
            o->set(k, convert(v, functions));
        return o;
    }
    default:
        return Undefined{};
    }
}

} // namespace

std::shared_ptr<FakeHost> FakeHost::from_json(const std::string& json_text,
                                              const std::map<std::string, Object::Function>& functions)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("bad host fixture: ") + e.what());
    }
    if (!doc.is_object())
        throw std::invalid_argument("host fixture must be a JSON object");
    auto host = std::make_shared<FakeHost>();
    for (const auto& [k, v] : doc.items())
        host->global()->set(k, convert(v, functions));
    return host;
}

} // namespace plweb::host
