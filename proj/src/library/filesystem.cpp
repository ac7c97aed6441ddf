#include "plweb/filesystem.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace plweb {

std::string VirtualFileSystem::normalize(const std::string& path)
{
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(path);
    while (std::getline(in, part, '/')) {
        if (part.empty() || part == ".")
            continue;
        if (part == "..") {
            if (!parts.empty())
                parts.pop_back();
            continue;
        }
        parts.push_back(part);
    }
    std::string out;
    for (const auto& p : parts)
        out += "/" + p;
    return out.empty() ? "/" : out;
}

std::shared_ptr<VirtualFileSystem> VirtualFileSystem::from_json(const std::string& json_text)
{
    auto fs = std::make_shared<VirtualFileSystem>();
    auto doc = nlohmann::json::parse(json_text);
    if (!doc.is_object())
        throw std::invalid_argument("file system fixture must be a JSON object");
    for (auto& [path, content] : doc.items()) {
        if (content.is_null())
            fs->make_directory(path);
        else
            fs->write(path, content.get<std::string>(), false);
    }
    return fs;
}

std::optional<std::string> VirtualFileSystem::read(const std::string& path) const
{
    auto it = files_.find(normalize(path));
    if (it == files_.end())
        return std::nullopt;
    return it->second;
}

bool VirtualFileSystem::write(const std::string& path, const std::string& content, bool append)
{
    std::string p = normalize(path);
    if (p == "/" || is_directory(p))
        return false;
    if (append)
        files_[p] += content;
    else
        files_[p] = content;
    return true;
}

bool VirtualFileSystem::exists(const std::string& path) const
{
    std::string p = normalize(path);
    return files_.count(p) > 0 || is_directory(p);
}

bool VirtualFileSystem::is_directory(const std::string& path) const
{
    std::string p = normalize(path);
    if (p == "/" || directories_.count(p))
        return true;
    std::string prefix = p + "/";
    auto it = files_.lower_bound(prefix);
    if (it != files_.end() && it->first.compare(0, prefix.size(), prefix) == 0)
        return true;
    auto dit = directories_.lower_bound(prefix);
    return dit != directories_.end() && dit->first.compare(0, prefix.size(), prefix) == 0;
}

bool VirtualFileSystem::remove(const std::string& path)
{
    std::string p = normalize(path);
    if (files_.erase(p))
        return true;
    return directories_.erase(p) > 0;
}

bool VirtualFileSystem::make_directory(const std::string& path)
{
    std::string p = normalize(path);
    if (files_.count(p))
        return false;
    directories_[p] = true;
    return true;
}

std::optional<std::vector<std::string>> VirtualFileSystem::list(const std::string& path) const
{
    std::string p = normalize(path);
    if (!is_directory(p))
        return std::nullopt;
    std::string prefix = p == "/" ? "/" : p + "/";
    std::set<std::string> names;
    auto collect = [&](const std::string& key) {
        if (key.compare(0, prefix.size(), prefix) != 0 || key.size() == prefix.size())
            return;
        std::string rest = key.substr(prefix.size());
        names.insert(rest.substr(0, rest.find('/')));
    };
    for (const auto& [k, v] : files_)
        collect(k);
    for (const auto& [k, v] : directories_)
        collect(k);
    return std::vector<std::string>(names.begin(), names.end());
}

std::optional<std::string> RealFileSystem::read(const std::string& path) const
{
    std::ifstream in(path, std::ios::binary);
    if (!in || std::filesystem::is_directory(path))
        return std::nullopt;
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

bool RealFileSystem::write(const std::string& path, const std::string& content, bool append)
{
    std::ofstream out(path, append ? std::ios::binary | std::ios::app : std::ios::binary | std::ios::trunc);
    if (!out)
        return false;
    out << content;
    return static_cast<bool>(out);
}

bool RealFileSystem::exists(const std::string& path) const
{
    std::error_code ec;
    return std::filesystem::exists(path, ec);
}

bool RealFileSystem::is_directory(const std::string& path) const
{
    std::error_code ec;
    return std::filesystem::is_directory(path, ec);
}

bool RealFileSystem::remove(const std::string& path)
{
    std::error_code ec;
    return std::filesystem::remove(path, ec);
}

bool RealFileSystem::make_directory(const std::string& path)
{
    std::error_code ec;
    return std::filesystem::create_directory(path, ec);
}

std::optional<std::vector<std::string>> RealFileSystem::list(const std::string& path) const
{
    std::error_code ec;
    if (!std::filesystem::is_directory(path, ec))
        return std::nullopt;
    std::vector<std::string> names;
    for (const auto& e : std::filesystem::directory_iterator(path, ec))
        names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

} // namespace plweb
