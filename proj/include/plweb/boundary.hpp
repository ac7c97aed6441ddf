#pragma once

#include "plweb/dom.hpp"
#include "plweb/engine.hpp"
#include "plweb/host.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <memory>
#include <string>

namespace plweb {

// JSON message endpoint for embedders that cannot hold C++ objects (a web
// page, another process). Every request is {"op": ..., ...} and every reply
// carries "ok". Host objects never cross: bindings that hold one come back
// as {"$handle": N, "kind": K} and stay alive in a per-session table until
// released.
//
// ops: create_session, destroy_session, consult, query, answer,
// record_tree, set_flag, get_flag, release, dispatch_event.
class Boundary {
public:
    using HostFactory = std::function<std::shared_ptr<host::HostBridge>(const nlohmann::json& config)>;
    using DocumentFactory = std::function<std::shared_ptr<dom::DocumentHost>(const nlohmann::json& config)>;

    Boundary();

    // Used by create_session when the request has "host" / "document".
    // Defaults build a FakeHost from the JSON and a VirtualDocument from a
    // markup string.
    void register_host(HostFactory f) { host_factory_ = std::move(f); }
    void register_document(DocumentFactory f) { document_factory_ = std::move(f); }

    nlohmann::json handle(const nlohmann::json& request);
    std::string handle_text(const std::string& request);

    Session* session(std::uint64_t id);

private:
    struct Entry {
        std::shared_ptr<Session> session;
        std::string output;
        host::HandleTable handles;
    };

    nlohmann::json create_session(const nlohmann::json& r);
    nlohmann::json consult(Entry& e, const nlohmann::json& r);
    nlohmann::json query(Entry& e, const nlohmann::json& r);
    nlohmann::json answer(Entry& e);
    nlohmann::json record_tree(Entry& e, const nlohmann::json& r);
    nlohmann::json set_flag(Entry& e, const nlohmann::json& r);
    nlohmann::json get_flag(Entry& e, const nlohmann::json& r);
    nlohmann::json dispatch_event(Entry& e, const nlohmann::json& r);
    nlohmann::json binding_value(Entry& e, const Term& t);

    std::map<std::uint64_t, Entry> sessions_;
    std::uint64_t next_id_ = 0;
    HostFactory host_factory_;
    DocumentFactory document_factory_;
};

} // namespace plweb
