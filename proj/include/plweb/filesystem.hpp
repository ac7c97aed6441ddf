#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace plweb {

// Storage behind consult/1 and the os module's file predicates.
class FileSystem {
public:
    virtual ~FileSystem() = default;
    virtual std::optional<std::string> read(const std::string& path) const = 0;
    virtual bool write(const std::string& path, const std::string& content, bool append) = 0;
    virtual bool exists(const std::string& path) const = 0;
    virtual bool is_directory(const std::string& path) const = 0;
    virtual bool remove(const std::string& path) = 0;
    virtual bool make_directory(const std::string& path) = 0;
    // Entry names (not paths) directly under a directory, sorted.
    virtual std::optional<std::vector<std::string>> list(const std::string& path) const = 0;
};

// In-memory store. Paths are normalized to absolute `/a/b` form; parent
// directories are implied by the files below them.
class VirtualFileSystem : public FileSystem {
public:
    VirtualFileSystem() = default;

    // Fixture image: a JSON object mapping paths to file contents.
    static std::shared_ptr<VirtualFileSystem> from_json(const std::string& json_text);

    std::optional<std::string> read(const std::string& path) const override;
    bool write(const std::string& path, const std::string& content, bool append) override;
    bool exists(const std::string& path) const override;
    bool is_directory(const std::string& path) const override;
    bool remove(const std::string& path) override;
    bool make_directory(const std::string& path) override;
    std::optional<std::vector<std::string>> list(const std::string& path) const override;

    static std::string normalize(const std::string& path);

private:
    std::map<std::string, std::string> files_;
    std::map<std::string, bool> directories_;
};

// Host file system via std::filesystem (CLI default).
class RealFileSystem : public FileSystem {
public:
    std::optional<std::string> read(const std::string& path) const override;
    bool write(const std::string& path, const std::string& content, bool append) override;
    bool exists(const std::string& path) const override;
    bool is_directory(const std::string& path) const override;
    bool remove(const std::string& path) override;
    bool make_directory(const std::string& path) override;
    std::optional<std::vector<std::string>> list(const std::string& path) const override;
};

} // namespace plweb
