#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace benchkit {

/// Read-only view of a directory tree. Implementations must be safe for
/// concurrent const calls.
class FileSystem {
public:
    virtual ~FileSystem() = default;

    virtual bool exists(const std::filesystem::path& p) const = 0;
    virtual bool is_directory(const std::filesystem::path& p) const = 0;
    /// Throws IoError when the file is missing or unreadable.
    virtual std::string read_file(const std::filesystem::path& p) const = 0;
    /// Names (not full paths) of direct children, sorted.
    virtual std::vector<std::string> list_directory(const std::filesystem::path& p) const = 0;
    virtual std::filesystem::path canonical(const std::filesystem::path& p) const = 0;
};

class DiskFileSystem final : public FileSystem {
public:
    bool exists(const std::filesystem::path& p) const override;
    bool is_directory(const std::filesystem::path& p) const override;
    std::string read_file(const std::filesystem::path& p) const override;
    std::vector<std::string> list_directory(const std::filesystem::path& p) const override;
    std::filesystem::path canonical(const std::filesystem::path& p) const override;
};

/// In-memory tree keyed by normalized absolute path; directories are implied by files.
class MemoryFileSystem final : public FileSystem {
public:
    void add_file(const std::filesystem::path& p, std::string contents);
    void add_directory(const std::filesystem::path& p);

    bool exists(const std::filesystem::path& p) const override;
    bool is_directory(const std::filesystem::path& p) const override;
    std::string read_file(const std::filesystem::path& p) const override;
    std::vector<std::string> list_directory(const std::filesystem::path& p) const override;
    std::filesystem::path canonical(const std::filesystem::path& p) const override;

private:
    static std::string key(const std::filesystem::path& p);

    std::map<std::string, std::string> files_;
    std::map<std::string, bool> dirs_;
};

/// Writes `contents` to a sibling temp file then renames it over `target`.
void write_file_atomic(const std::filesystem::path& target, const std::string& contents);

}  // namespace benchkit
