// plweb: batch runner and interactive top level.
#include "plweb/dom.hpp"
#include "plweb/engine.hpp"
#include "plweb/host.hpp"
#include "plweb/tooling.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace plweb;

namespace {

std::optional<std::string> slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool is_syntax_error(const Term& ball)
{
    return ball.has_functor(Symbol("error"), 2) && ball.arg(0).has_functor(Symbol("syntax_error"), 1);
}

std::string show(Session& s, const Term& t)
{
    return render_term(t, {true, false, true, 0}, s.operators());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"plweb - an embeddable Prolog interpreter"};
    std::vector<std::string> consult_files;
    std::string goal, tree_out, vfs_path, host_path, html_path;
    std::size_t answers = 0, tree_answers = 10;
    std::uint64_t limit = 100000;
    std::optional<std::uint64_t> seed;
    bool quoted = false;

    app.add_option("--consult", consult_files, "Program file to load (repeatable)");
    app.add_option("--goal", goal, "Goal to run in batch mode");
    app.add_option("--answers", answers, "Maximum number of answers (default: all)");
    app.add_option("--limit", limit, "Inference budget per answer request");
    app.add_option("--seed", seed, "Seed for the random library");
    app.add_option("--tree", tree_out, "Write the derivation tree of --goal (.json or .dot)");
    app.add_option("--tree-answers", tree_answers, "Answer cap for --tree");
    app.add_flag("--quoted", quoted, "Quote atoms in answers");
    app.add_option("--vfs", vfs_path, "JSON image of a virtual file system");
    app.add_option("--host", host_path, "JSON object graph for the js module");
    app.add_option("--html", html_path, "Markup loaded into the document used by the dom module");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    SessionOptions options;
    options.max_inferences = limit;
    options.seed = seed;
    try {
        if (!vfs_path.empty()) {
            auto text = slurp(vfs_path);
            if (!text) {
                std::cerr << "plweb: cannot read " << vfs_path << "\n";
                return 2;
            }
            options.file_system = VirtualFileSystem::from_json(*text);
        } else {
            options.file_system = std::make_shared<RealFileSystem>();
        }
    } catch (const std::exception& e) {
        std::cerr << "plweb: " << e.what() << "\n";
        return 2;
    }
    auto session = Session::create(options);
    session->set_output([](std::string_view s) { std::cout << s << std::flush; });

    try {
        if (!host_path.empty()) {
            auto text = slurp(host_path);
            if (!text) {
                std::cerr << "plweb: cannot read " << host_path << "\n";
                return 2;
            }
            host::set_bridge(*session, host::FakeHost::from_json(*text));
        }
        if (!html_path.empty()) {
            auto text = slurp(html_path);
            if (!text) {
                std::cerr << "plweb: cannot read " << html_path << "\n";
                return 2;
            }
            dom::set_document(*session, dom::VirtualDocument::from_markup(*text));
        }
    } catch (const std::exception& e) {
        std::cerr << "plweb: " << e.what() << "\n";
        return 2;
    }

    for (const auto& file : consult_files) {
        bool done = false;
        std::optional<Term> error;
        session->consult(Source::path(file), [&](const std::optional<Term>& e) {
            error = e;
            done = true;
        });
        session->executor().run_until([&] { return done; });
        for (const auto& w : session->warnings())
            std::cerr << "warning: " << w << "\n";
        if (error) {
            std::cerr << file << ": " << show(*session, *error) << "\n";
            return is_syntax_error(*error) ? 2 : 1;
        }
        if (session->halted())
            return session->exit_code();
    }

    WriteOptions write;
    write.quoted = quoted;

    if (goal.empty()) {
        ReplOptions ro;
        ro.write = write;
        return run_repl(*session, std::cin, std::cout, ro);
    }

    auto thread = session->thread();
    bool ready = false;
    std::optional<Term> error;
    thread->query(goal, [&](const std::optional<Term>& e) {
        error = e;
        ready = true;
    });
    session->executor().run_until([&] { return ready; });
    if (error) {
        std::cerr << "goal: " << show(*session, *error) << "\n";
        return is_syntax_error(*error) ? 2 : 1;
    }

    if (!tree_out.empty()) {
        DerivationTree tree = record_tree(*thread, tree_answers);
        bool dot = tree_out.size() > 4 && tree_out.compare(tree_out.size() - 4, 4, ".dot") == 0;
        std::ofstream out(tree_out, std::ios::binary);
        out << export_tree(tree, dot ? "dot" : "json");
        if (!out) {
            std::cerr << "plweb: cannot write " << tree_out << "\n";
            return 1;
        }
        for (const TreeNode* leaf : tree.answers())
            std::cout << (leaf->subst.empty() ? "true." : leaf->subst) << "\n";
        return 0;
    }

    int status = 0;
    for (std::size_t n = 0; answers == 0 || n < answers; ++n) {
        std::optional<Answer> got;
        thread->answer([&](const Answer& a) { got = a; });
        session->executor().run_until([&] { return got.has_value(); });
        if (!got || session->halted())
            break;
        std::cout << format_answer(*session, *got, write) << "\n";
        if (got->kind == Answer::Kind::error) {
            status = 1;
            break;
        }
        if (got->kind == Answer::Kind::failure)
            break;
        // Without a cap, an exhausted budget would be reported forever.
        if (got->kind == Answer::Kind::limit && answers == 0)
            break;
    }
    if (session->halted())
        return session->exit_code();
    return status;
}
