#pragma once

#include "plweb/engine.hpp"
#include "plweb/writer.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace plweb {

// "X = [], Y = [a,b,c]" for success, "true." for a success without visible
// bindings, "false." for failure, "uncaught exception: <ball>." for errors.
std::string format_answer(Session& session, const Answer& answer, const WriteOptions& options = {});

// Just the bindings part ("X = a, Y = b"); empty when nothing is bound.
std::string format_bindings(Session& session, const Substitution& bindings,
                            const WriteOptions& options = {});

struct TreeNode {
    enum class Kind { interior, answer, error, cut_pruned };
    std::size_t id = 0;
    std::optional<std::size_t> parent;
    std::string goal;  // "□" for answers
    std::string subst; // bindings of the original goal variables
    Kind kind = Kind::interior;
    Substitution bindings;
};

std::string_view tree_kind_name(TreeNode::Kind k);

struct DerivationTree {
    int version = 1;
    std::string goal_text;
    std::vector<TreeNode> nodes; // creation order; ids are indexes
    std::size_t answer_cap = 0;

    std::vector<const TreeNode*> answers() const;
};

// Drives the queried thread until max_answers answers, exhaustion, an error
// or the inference limit, recording every choice point. The thread's stack
// is left empty afterwards.
DerivationTree record_tree(Thread& thread, std::size_t max_answers);

// format is "json" or "dot"; std::invalid_argument otherwise.
std::string export_tree(const DerivationTree& tree, std::string_view format);

struct ReplOptions {
    WriteOptions write;
    std::string prompt = "?- ";
};

// Interactive loop. Returns the process exit code.
int run_repl(Session& session, std::istream& in, std::ostream& out, const ReplOptions& options = {});

} // namespace plweb
