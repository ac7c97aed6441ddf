#include "plweb/dom.hpp"

#include <algorithm>
#include <cctype>

namespace plweb::dom {

namespace {

bool is_void(const std::string& tag)
{
    static const char* names[] = {"area", "base", "br", "col", "embed", "hr", "img", "input",
                                  "link", "meta", "source", "track", "wbr"};
    return std::any_of(std::begin(names), std::end(names), [&](const char* n) { return tag == n; });
}

std::string lower(std::string s)
{
    for (char& c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string decode_entities(const std::string& s)
{
    static const std::pair<const char*, char> table[] = {
        {"&lt;", '<'}, {"&gt;", '>'}, {"&amp;", '&'}, {"&quot;", '"'}, {"&#39;", '\''}, {"&apos;", '\''}};
    std::string out;
    for (std::size_t i = 0; i < s.size();) {
        bool hit = false;
        if (s[i] == '&') {
            for (const auto& [name, ch] : table) {
                std::string_view n(name);
                if (s.compare(i, n.size(), n) == 0) {
                    out += ch;
                    i += n.size();
                    hit = true;
                    break;
                }
            }
        }
        if (!hit)
            out += s[i++];
    }
    return out;
}

std::string escape(const std::string& s, bool attribute)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"':
            if (attribute) {
                out += "&quot;";
                break;
            }
            [[fallthrough]];
        default: out += c;
        }
    }
    return out;
}

void apply_attribute(Node& n, const std::string& name, const std::string& value)
{
    if (name == "class") {
        std::size_t i = 0;
        while (i < value.size()) {
            while (i < value.size() && std::isspace(static_cast<unsigned char>(value[i])))
                ++i;
            std::size_t j = i;
            while (j < value.size() && !std::isspace(static_cast<unsigned char>(value[j])))
                ++j;
            if (j > i) {
                std::string c = value.substr(i, j - i);
                if (std::find(n.classes.begin(), n.classes.end(), c) == n.classes.end())
                    n.classes.push_back(c);
            }
            i = j;
        }
        return;
    }
    if (name == "style") {
        std::size_t i = 0;
        while (i < value.size()) {
            std::size_t semi = value.find(';', i);
            std::string decl = value.substr(i, semi == std::string::npos ? std::string::npos : semi - i);
            auto colon = decl.find(':');
            if (colon != std::string::npos) {
                auto trim = [](std::string s) {
                    auto b = s.find_first_not_of(" \t\n");
                    auto e = s.find_last_not_of(" \t\n");
                    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
                };
                std::string k = trim(decl.substr(0, colon)), v = trim(decl.substr(colon + 1));
                if (!k.empty())
                    n.style.emplace_back(k, v);
            }
            if (semi == std::string::npos)
                break;
            i = semi + 1;
        }
        return;
    }
    n.attributes.emplace_back(name, value);
}

class MarkupReader {
public:
    explicit MarkupReader(const std::string& s) : s_(s) {}

    std::vector<std::shared_ptr<Node>> run()
    {
        std::vector<std::shared_ptr<Node>> top;
        std::vector<std::shared_ptr<Node>> open;
        auto add = [&](std::shared_ptr<Node> n) {
            if (open.empty()) {
                top.push_back(n);
            } else {
                n->parent = open.back();
                open.back()->children.push_back(n);
            }
        };
        while (i_ < s_.size()) {
            if (s_.compare(i_, 4, "<!--") == 0) {
                auto end = s_.find("-->", i_ + 4);
                i_ = end == std::string::npos ? s_.size() : end + 3;
            } else if (s_.compare(i_, 2, "<!") == 0 || s_.compare(i_, 2, "<?") == 0) {
                auto end = s_.find('>', i_);
                i_ = end == std::string::npos ? s_.size() : end + 1;
            } else if (s_.compare(i_, 2, "</") == 0) {
                i_ += 2;
                std::string name = lower(read_name());
                auto end = s_.find('>', i_);
                i_ = end == std::string::npos ? s_.size() : end + 1;
                // Close up to the matching element; stray end tags are ignored.
                for (std::size_t k = open.size(); k-- > 0;) {
                    if (open[k]->tag == name) {
                        open.resize(k);
                        break;
                    }
                }
            } else if (s_[i_] == '<' && i_ + 1 < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_ + 1]))) {
                ++i_;
                auto n = Node::element(lower(read_name()));
                bool self_closing = read_attributes(*n);
                add(n);
                if (!self_closing && !is_void(n->tag))
                    open.push_back(n);
            } else {
                std::size_t start = i_;
                ++i_;
                while (i_ < s_.size() && s_[i_] != '<')
                    ++i_;
                add(Node::text(decode_entities(s_.substr(start, i_ - start))));
            }
        }
        return top;
    }

private:
    std::string read_name()
    {
        std::size_t start = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '-' ||
                                  s_[i_] == '_' || s_[i_] == ':'))
            ++i_;
        return s_.substr(start, i_ - start);
    }

    void skip_space()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
            ++i_;
    }

    // Returns true for "/>".
    bool read_attributes(Node& n)
    {
        for (;;) {
            skip_space();
            if (i_ >= s_.size())
                return false;
            if (s_[i_] == '>') {
                ++i_;
                return false;
            }
            if (s_.compare(i_, 2, "/>") == 0) {
                i_ += 2;
                return true;
            }
            std::string name = lower(read_name());
            if (name.empty()) {
                ++i_;
                continue;
            }
            skip_space();
            std::string value;
            if (i_ < s_.size() && s_[i_] == '=') {
                ++i_;
                skip_space();
                if (i_ < s_.size() && (s_[i_] == '"' || s_[i_] == '\'')) {
                    char q = s_[i_++];
                    auto end = s_.find(q, i_);
                    if (end == std::string::npos)
                        end = s_.size();
                    value = decode_entities(s_.substr(i_, end - i_));
                    i_ = std::min(end + 1, s_.size());
                } else {
                    std::size_t start = i_;
                    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '>')
                        ++i_;
                    value = decode_entities(s_.substr(start, i_ - start));
                }
            }
            apply_attribute(n, name, value);
        }
    }

    const std::string& s_;
    std::size_t i_ = 0;
};

} // namespace

std::vector<std::shared_ptr<Node>> parse_markup(const std::string& text)
{
    return MarkupReader(text).run();
}

std::string serialize_inner(const Node& n)
{
    std::string out;
    for (const auto& c : n.children)
        out += serialize(*c);
    return out;
}

std::string serialize(const Node& n)
{
    if (n.is_text())
        return escape(n.content, false);
    std::string out = "<" + n.tag;
    for (const auto& [k, v] : n.attributes)
        out += " " + k + "=\"" + escape(host::describe(v), true) + "\"";
    if (!n.classes.empty()) {
        out += " class=\"";
        for (std::size_t i = 0; i < n.classes.size(); ++i)
            out += (i ? " " : "") + escape(n.classes[i], true);
        out += "\"";
    }
    if (!n.style.empty()) {
        out += " style=\"";
        for (std::size_t i = 0; i < n.style.size(); ++i)
            out += (i ? " " : "") + escape(n.style[i].first + ": " + n.style[i].second + ";", true);
        out += "\"";
    }
    out += ">";
    if (is_void(n.tag) && n.children.empty())
        return out;
    return out + serialize_inner(n) + "</" + n.tag + ">";
}

} // namespace plweb::dom
