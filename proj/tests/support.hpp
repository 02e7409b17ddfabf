#pragma once

#include "logkg/annotator.hpp"
#include "logkg/dataset.hpp"

#include <filesystem>
#include <random>
#include <string>

namespace logkg::test {

inline std::filesystem::path fixture_path(const std::string& name) {
    return std::filesystem::path(LOGKG_TEST_DIR) / "fixtures" / name;
}

inline std::string fixture_text(const std::string& name) { return read_file(fixture_path(name)); }

inline ReferenceDataset fixture_dataset() { return annotate_corpus(read_corpus(fixture_path("openstack_50.log"))); }

/// The POST /servers line of the API log (second line of the fixture).
inline const std::string& post_line() {
    static const std::string line =
        "nova-api.log.1.2017-05-17_12:02:19 2017-05-16 18:57:49.073 25749 INFO nova.osapi_compute.wsgi.server "
        "[req-0550be32-0499-40f3-b0cf-4aab2629052b 113d3a99c3da401fbd62cc2caa5b96d2 "
        "54fadb412c4e40cdbaed9335e4c35a9e - - -] 10.11.10.1 \"POST /v2/54fadb412c4e40cdbaed9335e4c35a9e/servers "
        "HTTP/1.1\" status: 202 len: 733 time: 0.4947891";
    return line;
}

/// Golden text without its trailing newline.
inline std::string golden_ttl() {
    auto text = fixture_text("golden_servers_post.ttl");
    while (!text.empty() && text.back() == '\n') text.pop_back();
    return text;
}

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path_ = std::filesystem::temp_directory_path() / ("logkg-test-" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace logkg::test
