#include "fixtures.hpp"

#include "subcollect/archive.hpp"
#include "subcollect/digest.hpp"
#include "subcollect/error.hpp"

#include <doctest.h>

#include <thread>

using namespace subcollect;

namespace {
std::vector<fixtures::Page> sample_pages() {
    return {{"http://a.de/", "20010101000000", fixtures::html_page("first")},
            {"http://a.de/", "20030101000000", fixtures::html_page("second")},
            {"http://b.de/x", "20020101000000", std::string("\x00\x01\xff binary", 10), "image/png"},
            {"http://c.de/", "20040101000000", fixtures::html_page("fourth")}};
}
}  // namespace

TEST_CASE("fetch returns the bytes written into the fixture") {
    fixtures::TempDir dir;
    const auto pages = sample_pages();
    const auto entries = fixtures::write_warc(dir.path(), "a.warc", pages, true);
    REQUIRE(entries.size() == pages.size());
    const Archive archive(dir.path());
    for (std::size_t i = 0; i < pages.size(); ++i) {
        const Snapshot s = archive.fetch(entries[i]);
        CHECK(s.body == pages[i].body);
        CHECK(sha256_hex(s.body) == entries[i].digest);
        CHECK(s.ref.original_url == pages[i].url);
    }
    CHECK(archive.counter().fetches == pages.size());
}

TEST_CASE("fetch counts one access and the stored length") {
    fixtures::TempDir dir;
    const auto entries = fixtures::write_warc(dir.path(), "a.warc", sample_pages());
    const Archive archive(dir.path());
    archive.fetch(entries[0]);
    archive.fetch(entries[0]);
    CHECK(archive.counter().fetches == 2);
    CHECK(archive.counter().bytes_read == 2 * entries[0].length);
}

TEST_CASE("tampered record is reported as corruption") {
    fixtures::TempDir dir;
    const auto entries = fixtures::write_warc(dir.path(), "a.warc", sample_pages());
    std::string bytes = fixtures::read_file(dir / "a.warc");
    const auto pos = bytes.find("first");
    REQUIRE(pos != std::string::npos);
    bytes[pos] = 'F';
    fixtures::write_file(dir / "a.warc", bytes);
    const Archive archive(dir.path());
    CHECK_THROWS_AS(archive.fetch(entries[0]), CorruptionError);
    CHECK_NOTHROW(archive.fetch(entries[1]));
}

TEST_CASE("out-of-range or missing records are I/O errors") {
    fixtures::TempDir dir;
    auto entries = fixtures::write_warc(dir.path(), "a.warc", sample_pages());
    const Archive archive(dir.path());
    IndexEntry beyond = entries.back();
    beyond.offset += 100000;
    CHECK_THROWS_AS(archive.fetch(beyond), IoError);
    IndexEntry missing = entries.front();
    missing.file_id = "nope.warc";
    CHECK_THROWS_AS(archive.fetch(missing), IoError);
    CHECK(archive.counter().fetches == 0);
}

TEST_CASE("read_raw returns the stored record") {
    fixtures::TempDir dir;
    const auto entries = fixtures::write_warc(dir.path(), "a.warc", sample_pages(), true);
    const Archive archive(dir.path());
    const std::string file = fixtures::read_file(dir / "a.warc");
    for (const auto& e : entries) CHECK(archive.read_raw(e) == file.substr(e.offset, e.length));
}

TEST_CASE("concurrent fetches are counted exactly") {
    fixtures::TempDir dir;
    const auto entries = fixtures::write_warc(dir.path(), "a.warc", sample_pages());
    const Archive archive(dir.path());
    std::vector<std::jthread> threads;
    for (int t = 0; t < 4; ++t)
        threads.emplace_back([&] {
            for (int i = 0; i < 25; ++i)
                for (const auto& e : entries) archive.fetch(e);
        });
    threads.clear();
    CHECK(archive.counter().fetches == 4 * 25 * entries.size());
}
