#include "plweb/reader.hpp"

namespace plweb {

OpClass op_class(OpType t)
{
    switch (t) {
    case OpType::fy:
    case OpType::fx:
        return OpClass::prefix;
    case OpType::xf:
    case OpType::yf:
        return OpClass::postfix;
    default:
        return OpClass::infix;
    }
}

std::optional<OpType> parse_op_type(std::string_view s)
{
    static constexpr std::pair<std::string_view, OpType> names[] = {
        {"xfx", OpType::xfx}, {"xfy", OpType::xfy}, {"yfx", OpType::yfx}, {"fy", OpType::fy},
        {"fx", OpType::fx},   {"xf", OpType::xf},   {"yf", OpType::yf},
    };
    for (auto [n, t] : names)
        if (n == s)
            return t;
    return std::nullopt;
}

std::string_view op_type_name(OpType t)
{
    switch (t) {
    case OpType::xfx: return "xfx";
    case OpType::xfy: return "xfy";
    case OpType::yfx: return "yfx";
    case OpType::fy: return "fy";
    case OpType::fx: return "fx";
    case OpType::xf: return "xf";
    case OpType::yf: return "yf";
    }
    return "?";
}

OperatorTable::OperatorTable()
{
    add(":-", 1200, OpType::xfx);
    add("-->", 1200, OpType::xfx);
    add(":-", 1200, OpType::fx);
    add("?-", 1200, OpType::fx);
    add("dynamic", 1150, OpType::fx);
    add("discontiguous", 1150, OpType::fx);
    add("initialization", 1150, OpType::fx);
    add("multifile", 1150, OpType::fx);
    add(";", 1100, OpType::xfy);
    add("|", 1100, OpType::xfy);
    add("->", 1050, OpType::xfy);
    add("*->", 1050, OpType::xfy);
    add(",", 1000, OpType::xfy);
    add("\\+", 900, OpType::fy);
    for (auto n : {"=", "\\=", "==", "\\==", "@<", "@>", "@=<", "@>=", "=..", "is", "=:=", "=\\=", "<", ">",
                   "=<", ">=", "=@=", "\\=@="})
        add(n, 700, OpType::xfx);
    add(":", 200, OpType::xfy);
    add("+", 500, OpType::yfx);
    add("-", 500, OpType::yfx);
    add("/\\", 500, OpType::yfx);
    add("\\/", 500, OpType::yfx);
    add("xor", 500, OpType::yfx);
    for (auto n : {"*", "/", "//", "rem", "mod", "div", "<<", ">>"})
        add(n, 400, OpType::yfx);
    add("**", 200, OpType::xfx);
    add("^", 200, OpType::xfy);
    add("-", 200, OpType::fy);
    add("+", 200, OpType::fy);
    add("\\", 200, OpType::fy);
    add("$", 1, OpType::fx);
}

void OperatorTable::add(std::string_view name, int priority, OpType type)
{
    OpClass cls = op_class(type);
    auto key = std::make_pair(std::string(name), cls);
    if (priority == 0) {
        table_.erase(key);
        return;
    }
    // One infix-or-postfix definition per name.
    if (cls == OpClass::infix)
        table_.erase({std::string(name), OpClass::postfix});
    else if (cls == OpClass::postfix)
        table_.erase({std::string(name), OpClass::infix});
    table_[key] = OpDef{priority, type};
}

namespace {
std::optional<OpDef> lookup(const std::map<std::pair<std::string, OpClass>, OpDef>& t, std::string_view name,
                            OpClass cls)
{
    auto it = t.find({std::string(name), cls});
    if (it == t.end())
        return std::nullopt;
    return it->second;
}
} // namespace

std::optional<OpDef> OperatorTable::prefix(std::string_view name) const { return lookup(table_, name, OpClass::prefix); }
std::optional<OpDef> OperatorTable::infix(std::string_view name) const { return lookup(table_, name, OpClass::infix); }
std::optional<OpDef> OperatorTable::postfix(std::string_view name) const { return lookup(table_, name, OpClass::postfix); }

bool OperatorTable::is_op(std::string_view name) const
{
    return prefix(name) || infix(name) || postfix(name);
}

std::vector<OperatorTable::Entry> OperatorTable::entries() const
{
    std::vector<Entry> out;
    for (const auto& [key, def] : table_)
        out.push_back({key.first, def});
    return out;
}

} // namespace plweb
