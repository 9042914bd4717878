#include "subcollect/error.hpp"
#include "subcollect/timestamp.hpp"

#include <doctest.h>

using namespace subcollect;

TEST_CASE("timestamp14 validation") {
    CHECK(is_valid_timestamp14("20051130143000"));
    CHECK(is_valid_timestamp14("20000229000000"));
    CHECK_FALSE(is_valid_timestamp14("19000229000000"));
    CHECK_FALSE(is_valid_timestamp14("2005113014300"));
    CHECK_FALSE(is_valid_timestamp14("20051330143000"));
    CHECK_FALSE(is_valid_timestamp14("20051130246000"));
    CHECK_FALSE(is_valid_timestamp14("2005113014300x"));
    CHECK_THROWS_AS(timestamp14_to_epoch("bad"), ValidationError);
}

TEST_CASE("epoch conversion round-trips") {
    CHECK(timestamp14_to_epoch("19700101000000") == 0);
    CHECK(timestamp14_to_epoch("20000101000100") - timestamp14_to_epoch("20000101000000") == 60);
    CHECK(timestamp14_to_epoch("20010101000000") - timestamp14_to_epoch("20000101000000") == 366 * 86400);
    for (const char* ts : {"19940101000000", "20051130143000", "20131231235959", "19691231235959"})
        CHECK(epoch_to_timestamp14(timestamp14_to_epoch(ts)) == ts);
}

TEST_CASE("iso8601 to timestamp14") {
    CHECK(iso8601_to_timestamp14("2005-11-30T14:30:00Z") == "20051130143000");
    CHECK(iso8601_to_timestamp14("2005-11-30T14:30:00.123Z") == "20051130143000");
    CHECK_FALSE(iso8601_to_timestamp14("2005-11-30 14:30:00").has_value());
    CHECK_FALSE(iso8601_to_timestamp14("2005-02-30T14:30:00Z").has_value());
}

TEST_CASE("timestamp_year") {
    CHECK(timestamp_year("19991231235959") == 1999);
}
