#include "fixtures.hpp"

#include "subcollect/digest.hpp"
#include "subcollect/url.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <stdexcept>

namespace fixtures {

namespace {
std::atomic<unsigned> counter{0};
}

TempDir::TempDir() {
    std::random_device rd;
    const auto base = fs::temp_directory_path();
    for (;;) {
        auto candidate = base / ("subcollect-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
        if (fs::create_directory(candidate)) {
            path_ = candidate;
            return;
        }
    }
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

std::string iso_date(const std::string& ts) {
    return ts.substr(0, 4) + "-" + ts.substr(4, 2) + "-" + ts.substr(6, 2) + "T" + ts.substr(8, 2) + ":" +
           ts.substr(10, 2) + ":" + ts.substr(12, 2) + "Z";
}

std::string response_record(const Page& page) {
    subcollect::WarcRecordSpec spec;
    spec.type = "response";
    spec.target_uri = page.url;
    spec.date = iso_date(page.timestamp14);
    spec.content_type = "application/http; msgtype=response";
    spec.block = subcollect::make_http_response(page.status, {{"Content-Type", page.content_type}}, page.body);
    return subcollect::make_warc_record(spec);
}

std::string request_record(const std::string& url, const std::string& ts) {
    subcollect::WarcRecordSpec spec;
    spec.type = "request";
    spec.target_uri = url;
    spec.date = iso_date(ts);
    spec.content_type = "application/http; msgtype=request";
    spec.block = "GET / HTTP/1.1\r\nHost: example\r\n\r\n";
    return subcollect::make_warc_record(spec);
}

std::string html_page(const std::string& text, const std::vector<std::string>& links) {
    std::string html = "<html><head><title>t</title></head><body><p>" + text + "</p>";
    for (const auto& link : links) html += "<a href=\"" + link + "\">link</a>";
    html += "</body></html>";
    return html;
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<subcollect::IndexEntry> write_warc(const fs::path& dir, const std::string& file_name,
                                               const std::vector<Page>& pages, bool mixed_gzip) {
    std::string bytes;
    for (std::size_t i = 0; i < pages.size(); ++i) {
        std::string record = response_record(pages[i]);
        bytes += (mixed_gzip && i % 2 == 1) ? subcollect::gzip_member(record) : record;
    }
    write_file(dir / file_name, bytes);
    return subcollect::ingest_warc(bytes, file_name).entries;
}

subcollect::IndexEntry entry(const std::string& url, const std::string& ts, const std::string& mime) {
    subcollect::IndexEntry e;
    e.canonical_url = subcollect::canonicalize_url(url);
    e.original_url = e.canonical_url;
    e.timestamp14 = ts;
    e.mime = mime;
    e.http_status = 200;
    e.digest = subcollect::sha256_hex(e.canonical_url + " " + ts);
    e.file_id = "none.warc";
    return e;
}

}  // namespace fixtures
