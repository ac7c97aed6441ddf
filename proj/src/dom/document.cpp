#include "plweb/dom.hpp"
#include "plweb/engine.hpp"

#include <algorithm>
#include <unordered_set>

namespace plweb::dom {

std::shared_ptr<Node> Node::element(std::string tag)
{
    std::shared_ptr<Node> n(new Node(false));
    n->tag = std::move(tag);
    return n;
}

std::shared_ptr<Node> Node::text(std::string content)
{
    std::shared_ptr<Node> n(new Node(true));
    n->content = std::move(content);
    return n;
}

namespace {

std::string text_content(const Node& n)
{
    if (n.is_text())
        return n.content;
    std::string out;
    for (const auto& c : n.children)
        out += text_content(*c);
    return out;
}

std::string joined_classes(const Node& n)
{
    std::string out;
    for (const auto& c : n.classes)
        out += (out.empty() ? "" : " ") + c;
    return out;
}

std::string style_text(const Node& n)
{
    std::string out;
    for (const auto& [k, v] : n.style)
        out += (out.empty() ? "" : " ") + k + ": " + v + ";";
    return out;
}

template <typename F>
void walk(const std::shared_ptr<Node>& n, F&& f)
{
    if (n->is_text())
        return;
    f(n);
    for (const auto& c : n->children)
        walk(c, f);
}

} // namespace

std::optional<host::Value> Node::get(std::string_view name) const
{
    if (is_text_) {
        if (name == "textContent" || name == "nodeValue")
            return content;
        return std::nullopt;
    }
    if (name == "tagName")
        return tag;
    if (name == "className")
        return joined_classes(*this);
    if (name == "innerHTML")
        return serialize_inner(*this);
    if (name == "textContent")
        return text_content(*this);
    for (const auto& [k, v] : attributes)
        if (k == name)
            return v;
    return std::nullopt;
}

std::vector<std::string> Node::keys() const
{
    std::vector<std::string> out;
    if (is_text_)
        return {"textContent"};
    for (const auto& [k, v] : attributes)
        out.push_back(k);
    out.insert(out.end(), {"tagName", "className", "innerHTML", "textContent"});
    return out;
}

std::shared_ptr<Event> Event::create(std::string type)
{
    std::shared_ptr<Event> e(new Event());
    e->set("type", std::move(type));
    return e;
}

std::shared_ptr<Node> as_node(const NodeRef& n)
{
    return std::dynamic_pointer_cast<Node>(n);
}

std::shared_ptr<VirtualDocument> VirtualDocument::from_markup(const std::string& markup)
{
    auto doc = std::make_shared<VirtualDocument>();
    auto top = parse_markup(markup);
    auto html_it = std::find_if(top.begin(), top.end(), [](const auto& n) { return !n->is_text() && n->tag == "html"; });
    if (html_it != top.end()) {
        doc->root_ = *html_it;
    } else {
        doc->root_ = Node::element("html");
        auto head = Node::element("head");
        auto body = Node::element("body");
        head->parent = doc->root_;
        body->parent = doc->root_;
        doc->root_->children = {head, body};
        for (auto& n : top) {
            n->parent = body;
            body->children.push_back(n);
        }
    }
    doc->track(doc->root_);
    return doc;
}

void VirtualDocument::track(const std::shared_ptr<Node>& n)
{
    if (all_.size() > 64 && all_.size() % 64 == 0)
        all_.erase(std::remove_if(all_.begin(), all_.end(), [](const auto& w) { return w.expired(); }), all_.end());
    all_.push_back(n);
    for (const auto& c : n->children)
        track(c);
}

std::shared_ptr<Node> VirtualDocument::body() const
{
    std::shared_ptr<Node> found;
    walk(root_, [&](const std::shared_ptr<Node>& n) {
        if (!found && n->tag == "body")
            found = n;
    });
    return found;
}

bool VirtualDocument::is_node(const NodeRef& n) const
{
    auto node = as_node(n);
    return node && !node->is_text();
}

std::vector<NodeRef> VirtualDocument::query_by(Selector s, const std::string& key)
{
    std::vector<NodeRef> out;
    walk(root_, [&](const std::shared_ptr<Node>& n) {
        bool hit = false;
        switch (s) {
        case Selector::id: {
            auto v = n->get("id");
            hit = v && host::describe(*v) == key;
            break;
        }
        case Selector::class_name:
            hit = std::find(n->classes.begin(), n->classes.end(), key) != n->classes.end();
            break;
        case Selector::tag:
            hit = n->tag == key;
            break;
        }
        if (hit)
            out.push_back(n);
    });
    return out;
}

NodeRef VirtualDocument::parent(const NodeRef& n)
{
    auto node = as_node(n);
    return node ? node->parent.lock() : nullptr;
}

std::vector<NodeRef> VirtualDocument::children(const NodeRef& n)
{
    std::vector<NodeRef> out;
    if (auto node = as_node(n))
        for (const auto& c : node->children)
            if (!c->is_text())
                out.push_back(c);
    return out;
}

NodeRef VirtualDocument::create_element(const std::string& tag)
{
    auto n = Node::element(tag);
    track(n);
    return n;
}

bool VirtualDocument::insert(const NodeRef& child_ref, const NodeRef& anchor_ref, Position pos)
{
    auto child = as_node(child_ref);
    auto anchor = as_node(anchor_ref);
    if (!child || !anchor || child == root_ || !child->parent.expired())
        return false;
    std::shared_ptr<Node> target = pos == Position::append ? anchor : anchor->parent.lock();
    if (!target || target->is_text())
        return false;
    for (auto p = target; p; p = p->parent.lock())
        if (p == child)
            return false;
    auto& list = target->children;
    auto at = list.end();
    if (pos != Position::append) {
        at = std::find(list.begin(), list.end(), anchor);
        if (at == list.end())
            return false;
        if (pos == Position::after)
            ++at;
    }
    list.insert(at, child);
    child->parent = target;
    return true;
}

std::optional<host::Value> VirtualDocument::get_attribute(const NodeRef& n, const std::string& name)
{
    auto node = as_node(n);
    if (!node)
        return std::nullopt;
    if (name == "class")
        return node->classes.empty() ? std::nullopt : std::optional<host::Value>(joined_classes(*node));
    if (name == "style")
        return node->style.empty() ? std::nullopt : std::optional<host::Value>(style_text(*node));
    for (const auto& [k, v] : node->attributes)
        if (k == name)
            return v;
    return std::nullopt;
}

void VirtualDocument::set_attribute(const NodeRef& n, const std::string& name, const host::Value& v)
{
    auto node = as_node(n);
    if (!node)
        return;
    if (name == "class" || name == "style") {
        // Reparse through the markup reader's attribute rules.
        auto tmp = parse_markup("<x " + name + "=\"" + host::describe(v) + "\">");
        if (name == "class")
            node->classes = tmp.empty() ? std::vector<std::string>{} : tmp[0]->classes;
        else
            node->style = tmp.empty() ? std::vector<std::pair<std::string, std::string>>{} : tmp[0]->style;
        return;
    }
    for (auto& [k, old] : node->attributes) {
        if (k == name) {
            old = v;
            return;
        }
    }
    node->attributes.emplace_back(name, v);
}

std::optional<std::string> VirtualDocument::get_style(const NodeRef& n, const std::string& name)
{
    auto node = as_node(n);
    if (!node)
        return std::nullopt;
    for (const auto& [k, v] : node->style)
        if (k == name)
            return v;
    return std::nullopt;
}

void VirtualDocument::set_style(const NodeRef& n, const std::string& name, const std::string& v)
{
    auto node = as_node(n);
    if (!node)
        return;
    for (auto& [k, old] : node->style) {
        if (k == name) {
            old = v;
            return;
        }
    }
    node->style.emplace_back(name, v);
}

std::string VirtualDocument::get_content(const NodeRef& n)
{
    auto node = as_node(n);
    return node ? serialize_inner(*node) : std::string();
}

void VirtualDocument::set_content(const NodeRef& n, const std::string& markup)
{
    auto node = as_node(n);
    if (!node || node->is_text())
        return;
    for (auto& c : node->children)
        c->parent.reset();
    node->children = parse_markup(markup);
    for (auto& c : node->children) {
        c->parent = node;
        track(c);
    }
}

bool VirtualDocument::has_class(const NodeRef& n, const std::string& c)
{
    auto node = as_node(n);
    return node && std::find(node->classes.begin(), node->classes.end(), c) != node->classes.end();
}

void VirtualDocument::add_class(const NodeRef& n, const std::string& c)
{
    auto node = as_node(n);
    if (node && !has_class(n, c))
        node->classes.push_back(c);
}

void VirtualDocument::remove_class(const NodeRef& n, const std::string& c)
{
    if (auto node = as_node(n))
        node->classes.erase(std::remove(node->classes.begin(), node->classes.end(), c), node->classes.end());
}

bool VirtualDocument::visible(const NodeRef& n)
{
    auto d = get_style(n, "display");
    return !d || *d != "none";
}

void VirtualDocument::set_visible(const NodeRef& n, bool v)
{
    auto node = as_node(n);
    if (!node)
        return;
    if (v)
        node->style.erase(std::remove_if(node->style.begin(), node->style.end(),
                                         [](const auto& kv) { return kv.first == "display" && kv.second == "none"; }),
                          node->style.end());
    else
        set_style(n, "display", "none");
}

std::uint64_t VirtualDocument::add_listener(const NodeRef& n, const std::string& type, Listener l)
{
    auto node = as_node(n);
    if (!node)
        return 0;
    listeners_.push_back({node, type, std::move(l), ++next_token_});
    return next_token_;
}

void VirtualDocument::remove_listener(const NodeRef&, std::uint64_t token)
{
    listeners_.erase(std::remove_if(listeners_.begin(), listeners_.end(),
                                    [token](const ListenerEntry& e) { return e.token == token; }),
                     listeners_.end());
}

std::size_t VirtualDocument::listener_count() const
{
    return listeners_.size();
}

std::shared_ptr<Event> VirtualDocument::dispatch(const NodeRef& target, const std::string& type,
                                                 const std::map<std::string, host::Value>& properties)
{
    auto ev = Event::create(type);
    for (const auto& [k, v] : properties)
        ev->set(k, v);
    ev->set("target", target);
    std::vector<Listener> to_call;
    for (auto n = as_node(target); n; n = n->parent.lock())
        for (const auto& e : listeners_)
            if (e.type == type && e.node.lock() == n)
                to_call.push_back(e.fn);
    for (auto& fn : to_call)
        fn(ev);
    return ev;
}

std::optional<host::Value> VirtualDocument::event_property(const NodeRef& event, const std::string& name)
{
    auto ev = std::dynamic_pointer_cast<Event>(event);
    if (!ev)
        return std::nullopt;
    return ev->get(name);
}

void VirtualDocument::prevent_default(const NodeRef& event)
{
    if (auto ev = std::dynamic_pointer_cast<Event>(event))
        ev->default_prevented = true;
}

std::vector<std::string> VirtualDocument::audit() const
{
    std::vector<std::string> problems;
    std::size_t limit = all_.size() + 1;
    for (const auto& w : all_) {
        auto n = w.lock();
        if (!n)
            continue;
        std::string name = n->is_text() ? "#text" : "<" + n->tag + ">";
        if (auto p = n->parent.lock()) {
            auto c = std::count(p->children.begin(), p->children.end(), n);
            if (c != 1)
                problems.push_back(name + " appears " + std::to_string(c) + " times among its parent's children");
        }
        std::unordered_set<const Node*> seen;
        for (auto c : n->children) {
            if (c->parent.lock() != n)
                problems.push_back(name + " has a child whose parent link points elsewhere");
            if (!seen.insert(c.get()).second)
                problems.push_back(name + " lists a child twice");
        }
        std::size_t steps = 0;
        for (auto p = n->parent.lock(); p; p = p->parent.lock()) {
            if (++steps > limit || p == n) {
                problems.push_back(name + " is on a parent cycle");
                break;
            }
        }
    }
    if (root_->parent.lock())
        problems.push_back("root has a parent");
    return problems;
}

namespace {

struct DocumentSlot {
    std::shared_ptr<DocumentHost> doc;
};

} // namespace

std::shared_ptr<DocumentHost> document_of(Session& s)
{
    auto* slot = s.extension<DocumentSlot>();
    if (!slot) {
        auto fresh = std::make_shared<DocumentSlot>();
        fresh->doc = VirtualDocument::from_markup("");
        s.set_extension(fresh);
        return fresh->doc;
    }
    return slot->doc;
}

void set_document(Session& s, std::shared_ptr<DocumentHost> doc)
{
    auto slot = std::make_shared<DocumentSlot>();
    slot->doc = std::move(doc);
    s.set_extension(slot);
}

} // namespace plweb::dom
