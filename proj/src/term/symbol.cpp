#include "plweb/term.hpp"

#include <memory>
#include <mutex>
#include <string>
#include <unordered_set>

namespace plweb {

namespace {

struct Pool {
    std::mutex mu;
    std::unordered_set<std::string> texts;
};

Pool& pool()
{
    static Pool p;
    return p;
}

} // namespace

Symbol::Symbol(std::string_view text)
{
    auto& p = pool();
    std::lock_guard lock(p.mu);
    // unordered_set nodes are stable, so the address identifies the text.
    text_ = &*p.texts.emplace(text).first;
}

namespace sym {
#define PLWEB_SYMBOL(fn, text)   \
    Symbol fn()                  \
    {                            \
        static const Symbol s{text}; \
        return s;                \
    }
PLWEB_SYMBOL(nil, "[]")
PLWEB_SYMBOL(dot, ".")
PLWEB_SYMBOL(comma, ",")
PLWEB_SYMBOL(true_, "true")
PLWEB_SYMBOL(fail, "fail")
PLWEB_SYMBOL(curly, "{}")
PLWEB_SYMBOL(colon, ":")
PLWEB_SYMBOL(clause_neck, ":-")
PLWEB_SYMBOL(minus, "-")
PLWEB_SYMBOL(error, "error")
#undef PLWEB_SYMBOL
} // namespace sym

std::string VarId::text() const
{
    if (serial == 0)
        return name.str();
    return name.str() + std::to_string(serial);
}

} // namespace plweb
