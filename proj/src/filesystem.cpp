#include "benchkit/filesystem.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>

#include "benchkit/error.hpp"

namespace benchkit {

namespace fs = std::filesystem;

bool DiskFileSystem::exists(const fs::path& p) const {
    std::error_code ec;
    return fs::exists(p, ec);
}

bool DiskFileSystem::is_directory(const fs::path& p) const {
    std::error_code ec;
    return fs::is_directory(p, ec);
}

std::string DiskFileSystem::read_file(const fs::path& p) const {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + p.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw IoError("error while reading " + p.string());
    }
    return buffer.str();
}

std::vector<std::string> DiskFileSystem::list_directory(const fs::path& p) const {
    std::error_code ec;
    fs::directory_iterator it(p, ec);
    if (ec) {
        throw IoError("cannot list " + p.string() + ": " + ec.message());
    }
    std::vector<std::string> names;
    for (const auto& entry : it) {
        names.push_back(entry.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

fs::path DiskFileSystem::canonical(const fs::path& p) const {
    std::error_code ec;
    auto c = fs::weakly_canonical(p, ec);
    if (ec) {
        return fs::absolute(p).lexically_normal();
    }
    return c;
}

std::string MemoryFileSystem::key(const fs::path& p) {
    auto normal = fs::path("/" / p).lexically_normal().generic_string();
    while (normal.size() > 1 && normal.back() == '/') {
        normal.pop_back();
    }
    return normal;
}

void MemoryFileSystem::add_file(const fs::path& p, std::string contents) {
    const auto k = key(p);
    files_[k] = std::move(contents);
    add_directory(fs::path(k).parent_path());
}

void MemoryFileSystem::add_directory(const fs::path& p) {
    auto current = fs::path(key(p));
    while (true) {
        dirs_[current.generic_string()] = true;
        if (current == current.root_path()) {
            break;
        }
        current = current.parent_path();
    }
}

bool MemoryFileSystem::exists(const fs::path& p) const {
    const auto k = key(p);
    return files_.count(k) != 0 || dirs_.count(k) != 0;
}

bool MemoryFileSystem::is_directory(const fs::path& p) const {
    return dirs_.count(key(p)) != 0;
}

std::string MemoryFileSystem::read_file(const fs::path& p) const {
    auto it = files_.find(key(p));
    if (it == files_.end()) {
        throw IoError("cannot read " + p.generic_string());
    }
    return it->second;
}

std::vector<std::string> MemoryFileSystem::list_directory(const fs::path& p) const {
    const auto k = key(p);
    if (dirs_.count(k) == 0) {
        throw IoError("cannot list " + p.generic_string());
    }
    std::vector<std::string> names;
    auto collect = [&](const std::string& child) {
        fs::path cp(child);
        if (cp != fs::path(k) && cp.parent_path().generic_string() == k) {
            names.push_back(cp.filename().string());
        }
    };
    for (const auto& [path, _] : files_) {
        collect(path);
    }
    for (const auto& [path, _] : dirs_) {
        collect(path);
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    return names;
}

fs::path MemoryFileSystem::canonical(const fs::path& p) const {
    return fs::path(key(p));
}

void write_file_atomic(const fs::path& target, const std::string& contents) {
    auto tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write " + tmp.string());
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw IoError("error while writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place at " + target.string());
    }
}

}  // namespace benchkit
