#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "prodnet/partitions.hpp"

using namespace prodnet;

TEST_CASE("bell numbers count the enumerated partitions") {
    CHECK(bell_number(1) == 1);
    CHECK(bell_number(2) == 2);
    CHECK(bell_number(3) == 5);
    CHECK(bell_number(4) == 15);
    CHECK(bell_number(5) == 52);
    CHECK(bell_number(6) == 203);
    for (int n = 1; n <= 6; ++n)
        CHECK(enumerate_partitions(n, 6).size() == bell_number(n));
}

TEST_CASE("three-element partitions are exactly the five canonical ones") {
    const auto all = enumerate_partitions(3, 6);
    REQUIRE(all.size() == 5);
    CHECK(all[0] == Partition{{0, 1, 2}});
    CHECK(all[1] == Partition{{0, 1}, {2}});
    CHECK(all[2] == Partition{{0, 2}, {1}});
    CHECK(all[3] == Partition{{0}, {1, 2}});
    CHECK(all[4] == Partition{{0}, {1}, {2}});
}

TEST_CASE("every enumerated partition is valid and distinct") {
    const auto all = enumerate_partitions(5, 6);
    for (const auto& q : all) CHECK(is_partition_of(q, 5));
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j) CHECK(all[i] != all[j]);
}

TEST_CASE("block index inverts the partition") {
    const Partition q{{0, 2}, {1}};
    const auto idx = block_index(q, 3);
    CHECK(idx == std::vector<int>{0, 1, 0});
    CHECK_THROWS_AS(block_index(Partition{{0}}, 2), std::invalid_argument);
}

TEST_CASE("caps and degenerate inputs are rejected") {
    CHECK_THROWS_AS(enumerate_partitions(7, 6), std::domain_error);
    CHECK_THROWS_AS(enumerate_partitions(0, 6), std::invalid_argument);
    CHECK_FALSE(is_partition_of(Partition{{0}, {0, 1}}, 2));
    CHECK_FALSE(is_partition_of(Partition{{0}, {}}, 1));
}
