#include "fixtures.hpp"

#include "subcollect/error.hpp"
#include "subcollect/warc.hpp"

#include <doctest.h>

using namespace subcollect;

TEST_CASE("records round-trip through the reader, plain and gzipped") {
    const std::string a = fixtures::response_record({"http://a.de/", "20050101000000", "<p>alpha</p>"});
    const std::string b = fixtures::request_record("http://a.de/", "20050101000000");
    const std::string c = fixtures::response_record({"http://b.de/", "20060101000000", "beta"});
    const std::string file = a + gzip_member(b) + c;

    WarcReader reader(file);
    auto r1 = reader.next();
    auto r2 = reader.next();
    auto r3 = reader.next();
    CHECK_FALSE(reader.next().has_value());
    REQUIRE(r1);
    REQUIRE(r2);
    REQUIRE(r3);

    CHECK(r1->offset == 0);
    CHECK(r1->length == a.size());
    CHECK_FALSE(r1->gzipped);
    CHECK(r1->header("warc-type") == "response");
    CHECK(r2->offset == a.size());
    CHECK(r2->gzipped);
    CHECK(r2->header("WARC-Type") == "request");
    CHECK(r3->offset == r2->offset + r2->length);
    CHECK(r3->offset + r3->length == file.size());

    auto http = parse_http_response(r3->block);
    REQUIRE(http);
    CHECK(http->status == 200);
    CHECK(http->body == "beta");

    const WarcRecord again = parse_warc_record(std::string_view(file).substr(r2->offset, r2->length), r2->offset);
    CHECK(again.block == r2->block);
}

TEST_CASE("truncated record names its offset") {
    const std::string a = fixtures::response_record({"http://a.de/", "20050101000000", "x"});
    const std::string b = fixtures::response_record({"http://b.de/", "20050101000000", "yyyyyyyy"});
    const std::string file = a + b.substr(0, b.size() - 12);
    WarcReader reader(file);
    CHECK(reader.next().has_value());
    try {
        reader.next();
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find(std::to_string(a.size())) != std::string::npos);
    }
}

TEST_CASE("empty input yields no records") {
    WarcReader reader("");
    CHECK_FALSE(reader.next().has_value());
}

TEST_CASE("http response parsing") {
    auto r = parse_http_response("HTTP/1.1 404 Not Found\r\nContent-Type: text/html\r\nContent-Length: 3\r\n\r\nabcdef");
    REQUIRE(r);
    CHECK(r->status == 404);
    CHECK(r->body == "abc");
    CHECK(find_header(r->headers, "content-type") == "text/html");
    CHECK_FALSE(parse_http_response("GET / HTTP/1.1\r\n\r\n").has_value());
}

TEST_CASE("content type helpers") {
    CHECK(media_type("Text/HTML; charset=ISO-8859-1") == "text/html");
    CHECK(media_type("") == "application/octet-stream");
    CHECK(charset_param("text/html; charset=\"utf-8\"") == "utf-8");
    CHECK_FALSE(charset_param("text/html").has_value());
    CHECK(is_html_media_type("application/xhtml+xml"));
    CHECK_FALSE(is_html_media_type("image/png"));
}
