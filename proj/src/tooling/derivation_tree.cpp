#include "plweb/tooling.hpp"

#include <json.hpp>

#include <stdexcept>
#include <unordered_map>

namespace plweb {

namespace {

const WriteOptions tree_write{true, false, true, 0};

std::string render_goal(Session& s, const GoalList& goal, const BindingChain& bindings)
{
    std::string out;
    for (const Term& t : goal_terms(goal, bindings)) {
        if (!out.empty())
            out += ", ";
        out += render_term(t, tree_write, s.operators(), 999);
    }
    return out.empty() ? "true" : out;
}

std::string dot_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

class Recorder {
public:
    Recorder(Session& s, DerivationTree& tree) : session_(s), tree_(tree) {}

    void pushed(const PointPtr& p)
    {
        std::optional<std::size_t> parent;
        if (auto up = p->parent.lock()) {
            auto it = ids_.find(up->serial);
            if (it != ids_.end())
                parent = it->second;
        }
        // catch/3 markers are bookkeeping; their children hang off the
        // marker's own parent.
        if (p->catch_frame) {
            ids_[p->serial] = parent;
            return;
        }
        TreeNode n;
        n.id = tree_.nodes.size();
        n.parent = parent;
        n.bindings = p->substitution();
        n.subst = format_bindings(session_, n.bindings, tree_write);
        if (p->is_error()) {
            n.kind = TreeNode::Kind::error;
            n.goal = render_term(*p->error, tree_write, session_.operators());
        } else if (p->is_answer()) {
            n.kind = TreeNode::Kind::answer;
            n.goal = "□";
        } else {
            n.goal = render_goal(session_, p->goal, p->bindings);
        }
        ids_[p->serial] = n.id;
        tree_.nodes.push_back(std::move(n));
    }

    void pruned(const PointPtr& p)
    {
        auto it = ids_.find(p->serial);
        if (it == ids_.end() || !it->second || p->catch_frame)
            return;
        TreeNode& n = tree_.nodes[*it->second];
        if (n.kind == TreeNode::Kind::interior)
            n.kind = TreeNode::Kind::cut_pruned;
    }

private:
    Session& session_;
    DerivationTree& tree_;
    std::unordered_map<std::uint64_t, std::optional<std::size_t>> ids_;
};

} // namespace

std::string_view tree_kind_name(TreeNode::Kind k)
{
    switch (k) {
    case TreeNode::Kind::interior: return "interior";
    case TreeNode::Kind::answer: return "answer";
    case TreeNode::Kind::error: return "error";
    case TreeNode::Kind::cut_pruned: return "cut_pruned";
    }
    return "interior";
}

std::vector<const TreeNode*> DerivationTree::answers() const
{
    std::vector<const TreeNode*> out;
    for (const auto& n : nodes)
        if (n.kind == TreeNode::Kind::answer)
            out.push_back(&n);
    return out;
}

DerivationTree record_tree(Thread& thread, std::size_t max_answers)
{
    Session& session = thread.session();
    DerivationTree tree;
    tree.answer_cap = max_answers;
    if (!thread.query_goal().empty())
        tree.goal_text = render_term(thread.query_goal(), tree_write, session.operators());

    auto recorder = std::make_shared<Recorder>(session, tree);
    for (const auto& p : thread.points())
        recorder->pushed(p);
    thread.set_observer(ThreadObserver{[recorder](const PointPtr& p) { recorder->pushed(p); },
                                       [recorder](const PointPtr& p) { recorder->pruned(p); }});

    std::size_t found = 0;
    while (found < max_answers) {
        std::optional<Answer> got;
        thread.answer([&got](const Answer& a) { got = a; });
        session.executor().run_until([&got] { return got.has_value(); });
        if (!got || !got->is_success())
            break;
        ++found;
    }
    thread.set_observer(std::nullopt);
    thread.cut(0);
    return tree;
}

std::string export_tree(const DerivationTree& tree, std::string_view format)
{
    if (format == "json") {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& n : tree.nodes) {
            nodes.push_back({{"id", n.id},
                             {"parent", n.parent ? nlohmann::json(*n.parent) : nlohmann::json(nullptr)},
                             {"goal", n.goal},
                             {"subst", n.subst},
                             {"kind", tree_kind_name(n.kind)}});
        }
        nlohmann::json doc{{"version", tree.version},
                           {"goal_text", tree.goal_text},
                           {"answer_cap", tree.answer_cap},
                           {"nodes", nodes}};
        return doc.dump(2);
    }
    if (format == "dot") {
        std::string out = "digraph derivation {\n  node [shape=box, fontname=\"monospace\"];\n";
        for (const auto& n : tree.nodes) {
            out += "  n" + std::to_string(n.id) + " [label=\"" + (n.goal == "□" ? n.goal : dot_escape(n.goal)) +
                   (n.subst.empty() ? "" : "\\n" + dot_escape(n.subst)) + "\"";
            switch (n.kind) {
            case TreeNode::Kind::answer: out += ", shape=ellipse, peripheries=2"; break;
            case TreeNode::Kind::error: out += ", color=red"; break;
            case TreeNode::Kind::cut_pruned: out += ", style=dashed"; break;
            case TreeNode::Kind::interior: break;
            }
            out += "];\n";
        }
        for (const auto& n : tree.nodes)
            if (n.parent)
                out += "  n" + std::to_string(*n.parent) + " -> n" + std::to_string(n.id) + ";\n";
        out += "}\n";
        return out;
    }
    throw std::invalid_argument("unsupported tree format: " + std::string(format));
}

} // namespace plweb
