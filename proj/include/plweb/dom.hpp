#pragma once

#include "plweb/host.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace plweb {
class Session;
}

namespace plweb::dom {

using NodeRef = host::ObjectPtr;

// What the dom predicates need from a document. The virtual document below
// implements it in memory; a browser embedding implements it over the page.
class DocumentHost {
public:
    enum class Selector { id, class_name, tag };
    enum class Position { append, before, after };
    using Listener = std::function<void(const NodeRef& event)>;

    virtual ~DocumentHost() = default;

    virtual bool is_node(const NodeRef& n) const = 0;
    // Matching elements in document order.
    virtual std::vector<NodeRef> query_by(Selector s, const std::string& key) = 0;
    virtual NodeRef parent(const NodeRef& n) = 0;
    virtual std::vector<NodeRef> children(const NodeRef& n) = 0;
    virtual NodeRef create_element(const std::string& tag) = 0;
    // append: child becomes the last child of anchor; before/after: child
    // becomes anchor's sibling. Returns false without changing anything when
    // child is already attached or the insertion would create a cycle.
    virtual bool insert(const NodeRef& child, const NodeRef& anchor, Position pos) = 0;

    virtual std::optional<host::Value> get_attribute(const NodeRef& n, const std::string& name) = 0;
    virtual void set_attribute(const NodeRef& n, const std::string& name, const host::Value& v) = 0;
    virtual std::optional<std::string> get_style(const NodeRef& n, const std::string& name) = 0;
    virtual void set_style(const NodeRef& n, const std::string& name, const std::string& v) = 0;
    // Inner markup.
    virtual std::string get_content(const NodeRef& n) = 0;
    virtual void set_content(const NodeRef& n, const std::string& markup) = 0;

    virtual bool has_class(const NodeRef& n, const std::string& c) = 0;
    virtual void add_class(const NodeRef& n, const std::string& c) = 0;
    virtual void remove_class(const NodeRef& n, const std::string& c) = 0;

    virtual bool visible(const NodeRef& n) = 0;
    virtual void set_visible(const NodeRef& n, bool v) = 0;

    virtual std::uint64_t add_listener(const NodeRef& n, const std::string& type, Listener l) = 0;
    virtual void remove_listener(const NodeRef& n, std::uint64_t token) = 0;
    virtual std::optional<host::Value> event_property(const NodeRef& event, const std::string& name) = 0;
    virtual void prevent_default(const NodeRef& event) = 0;
};

class Node : public host::Object {
public:
    static std::shared_ptr<Node> element(std::string tag);
    static std::shared_ptr<Node> text(std::string content);

    bool is_text() const { return is_text_; }

    std::optional<host::Value> get(std::string_view name) const override;
    std::vector<std::string> keys() const override;

    std::string tag;
    std::string content; // text nodes
    std::vector<std::pair<std::string, host::Value>> attributes;
    std::vector<std::pair<std::string, std::string>> style; // insertion order
    std::vector<std::string> classes;                       // insertion order
    std::vector<std::shared_ptr<Node>> children;
    std::weak_ptr<Node> parent;

private:
    Node(bool is_text) : host::Object(is_text ? "text" : "element"), is_text_(is_text) {}
    bool is_text_;
};

class Event : public host::Object {
public:
    static std::shared_ptr<Event> create(std::string type);

    bool default_prevented = false;

private:
    Event() : host::Object("event") {}
};

// Minimal markup reader: elements, attributes (quoted or bare), text,
// comments, void elements and the five common entities.
std::vector<std::shared_ptr<Node>> parse_markup(const std::string& text);
std::string serialize(const Node& n);       // outer markup
std::string serialize_inner(const Node& n); // inner markup

class VirtualDocument : public DocumentHost, public std::enable_shared_from_this<VirtualDocument> {
public:
    // <html><head></head><body>markup</body></html> unless the markup has
    // its own html element.
    static std::shared_ptr<VirtualDocument> from_markup(const std::string& markup);

    std::shared_ptr<Node> root() const { return root_; }
    std::shared_ptr<Node> body() const;

    // Fires an event at target; listeners on target run first, then on its
    // ancestors. Handlers may run later (the dom predicates queue them on the
    // executor), so inspect the returned event after running it.
    std::shared_ptr<Event> dispatch(const NodeRef& target, const std::string& type,
                                    const std::map<std::string, host::Value>& properties = {});

    // Structural problems (empty when the tree is consistent).
    std::vector<std::string> audit() const;
    // Serialized document for before/after comparisons.
    std::string snapshot() const { return serialize(*root_); }
    std::size_t listener_count() const;

    bool is_node(const NodeRef& n) const override;
    std::vector<NodeRef> query_by(Selector s, const std::string& key) override;
    NodeRef parent(const NodeRef& n) override;
    std::vector<NodeRef> children(const NodeRef& n) override;
    NodeRef create_element(const std::string& tag) override;
    bool insert(const NodeRef& child, const NodeRef& anchor, Position pos) override;
    std::optional<host::Value> get_attribute(const NodeRef& n, const std::string& name) override;
    void set_attribute(const NodeRef& n, const std::string& name, const host::Value& v) override;
    std::optional<std::string> get_style(const NodeRef& n, const std::string& name) override;
    void set_style(const NodeRef& n, const std::string& name, const std::string& v) override;
    std::string get_content(const NodeRef& n) override;
    void set_content(const NodeRef& n, const std::string& markup) override;
    bool has_class(const NodeRef& n, const std::string& c) override;
    void add_class(const NodeRef& n, const std::string& c) override;
    void remove_class(const NodeRef& n, const std::string& c) override;
    bool visible(const NodeRef& n) override;
    void set_visible(const NodeRef& n, bool v) override;
    std::uint64_t add_listener(const NodeRef& n, const std::string& type, Listener l) override;
    void remove_listener(const NodeRef& n, std::uint64_t token) override;
    std::optional<host::Value> event_property(const NodeRef& event, const std::string& name) override;
    void prevent_default(const NodeRef& event) override;

private:
    struct ListenerEntry {
        std::weak_ptr<Node> node;
        std::string type;
        Listener fn;
        std::uint64_t token;
    };

    void track(const std::shared_ptr<Node>& n);

    std::shared_ptr<Node> root_;
    std::vector<std::weak_ptr<Node>> all_;
    std::vector<ListenerEntry> listeners_;
    std::uint64_t next_token_ = 0;
};

std::shared_ptr<Node> as_node(const NodeRef& n);

// Document used by a session's dom predicates; an empty virtual document is
// created on first use.
std::shared_ptr<DocumentHost> document_of(Session& s);
void set_document(Session& s, std::shared_ptr<DocumentHost> doc);

} // namespace plweb::dom
