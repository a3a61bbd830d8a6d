#pragma once

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include "ordboost/dataset.hpp"

namespace ordboost {

enum class WineColor { Red, White };

inline std::string to_string(WineColor color) { return color == WineColor::Red ? "red" : "white"; }

inline WineColor wine_color_from_string(const std::string& s) {
    if (s == "red") return WineColor::Red;
    if (s == "white") return WineColor::White;
    throw std::invalid_argument("unknown wine color: '" + s + "' (expected red or white)");
}

// Cache directory: --cache-dir wins, else ORDBOOST_CACHE, else ./.ordboost_cache.
inline std::filesystem::path default_cache_dir() {
    if (const char* env = std::getenv("ORDBOOST_CACHE"); env && *env) return env;
    return ".ordboost_cache";
}

namespace detail {

constexpr const char* kWineHost = "archive.ics.uci.edu";

inline std::string wine_remote_path(WineColor color) {
    return std::string("/ml/machine-learning-databases/wine-quality/winequality-") + to_string(color) +
           ".csv";
}

// Advisory lock on the cache directory so concurrent downloads serialize.
class CacheLock {
public:
    explicit CacheLock(const std::filesystem::path& cache_dir) {
        auto lock_path = cache_dir / ".lock";
        fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd_ >= 0) ::flock(fd_, LOCK_EX);
    }
    ~CacheLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }
    CacheLock(const CacheLock&) = delete;
    CacheLock& operator=(const CacheLock&) = delete;

private:
    int fd_ = -1;
};

inline void download_wine_csv(WineColor color, const std::filesystem::path& target) {
    const std::string url = std::string("https://") + kWineHost + wine_remote_path(color);
    httplib::SSLClient client(kWineHost);
    client.set_connection_timeout(30);
    client.set_read_timeout(60);
    client.set_follow_location(true);
    auto res = client.Get(wine_remote_path(color));
    if (!res || res->status != 200)
        throw std::runtime_error("failed to download " + url +
                                 (res ? " (HTTP " + std::to_string(res->status) + ")"
                                      : " (connection error)"));

    // Write byte-exact to a temp file, then rename into place.
    auto tmp = target;
    tmp += ".part";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write cache file: " + tmp.string());
        out.write(res->body.data(), static_cast<std::streamsize>(res->body.size()));
        if (!out) throw std::runtime_error("failed writing cache file: " + tmp.string());
    }
    std::filesystem::rename(tmp, target);

    nlohmann::json meta;
    meta["source_url"] = url;
    meta["downloaded_at"] = static_cast<long long>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
    std::ofstream mout(target.string() + ".meta.json");
    mout << meta.dump(2) << '\n';
}

}  // namespace detail

inline std::filesystem::path wine_cache_file(WineColor color, const std::filesystem::path& cache_dir) {
    return cache_dir / (std::string("winequality-") + to_string(color) + ".csv");
}

// UCI wine-quality loader with local caching. Downloads the semicolon-
// delimited CSV once, stores it byte-exact, and on every call parses the 11
// physicochemical features plus the `quality` column (shifted to start at 0).
// A corrupted cache file surfaces as a parse error and is never overwritten.
inline OrdinalDataset load_wine_quality(WineColor color,
                                        const std::filesystem::path& cache_dir = default_cache_dir()) {
    std::filesystem::create_directories(cache_dir);
    const auto cache_file = wine_cache_file(color, cache_dir);
    {
        detail::CacheLock lock(cache_dir);
        if (!std::filesystem::exists(cache_file)) detail::download_wine_csv(color, cache_file);
    }
    auto ds = load_csv(cache_file, "quality", ';');
    // Structural validation against the parsed header, not hard-coded counts.
    bool has_alcohol = false;
    for (const auto& name : ds.feature_names)
        if (name == "alcohol") has_alcohol = true;
    if (!has_alcohol)
        throw std::runtime_error("wine-quality cache file " + cache_file.string() +
                                 " has unexpected columns");
    return ds;
}

}  // namespace ordboost
