#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "drift/frames.hpp"
#include "drift/rng.hpp"
#include "helpers.hpp"

using namespace drift;

namespace {

LocalizationTable random_table(int records, std::int64_t total_frames, std::uint64_t seed) {
    Rng rng(seed);
    LocalizationTable table;
    table.total_frames = total_frames;
    for (int i = 0; i < records; ++i) {
        LocalizationRecord rec;
        rec.x1 = rng.next_double();
        rec.x2 = rng.next_double();
        rec.frame = 1 + static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(total_frames)));
        table.records.push_back(rec);
    }
    return table;
}

std::filesystem::path temp_dir(const char* tag) {
    auto dir = std::filesystem::temp_directory_path() / (std::string("driftcorr_test_") + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("single record lands in its pixel") {
    LocalizationTable table;
    table.total_frames = 1;
    table.records.push_back({0.5, 0.5, 1});
    BinResult r = bin_localizations(table, 1, 2);
    CHECK(r.rejected == 0);
    CHECK(r.stack.T == 1);
    CHECK(r.stack.frames[0](1, 1) == 1.0);
    CHECK(r.stack.frames[0](0, 0) == 0.0);
    CHECK(r.stack.counts[0] == 1);
}

TEST_CASE("empty table bins to zero frames") {
    LocalizationTable table;
    table.total_frames = 4;
    BinResult r = bin_localizations(table, 4, 8);
    CHECK(r.stack.T == 4);
    for (int t = 0; t < 4; ++t) {
        CHECK(r.stack.counts[static_cast<std::size_t>(t)] == 0);
        CHECK(grid_sum(r.stack.frames[static_cast<std::size_t>(t)]) == 0.0);
    }
}

TEST_CASE("raw frames group by ceil(t' T / T')") {
    LocalizationTable table;
    table.total_frames = 40;
    for (std::int64_t f = 1; f <= 40; ++f) table.records.push_back({0.1, 0.1, f});
    BinResult r = bin_localizations(table, 4, 4);
    for (int t = 0; t < 4; ++t) CHECK(r.stack.counts[static_cast<std::size_t>(t)] == 10);

    // the paper-scale grouping: 40,000 raw frames into 2,000 histograms
    LocalizationTable big;
    big.total_frames = 40000;
    big.records.push_back({0.2, 0.2, 1});      // -> bin 1
    big.records.push_back({0.2, 0.2, 20});     // -> bin 1
    big.records.push_back({0.2, 0.2, 21});     // -> bin 2
    big.records.push_back({0.2, 0.2, 40000});  // -> bin 2000
    BinResult rb = bin_localizations(big, 2000, 4);
    CHECK(rb.stack.counts[0] == 2);
    CHECK(rb.stack.counts[1] == 1);
    CHECK(rb.stack.counts[1999] == 1);
}

TEST_CASE("coordinates at exactly one are rejected, not wrapped") {
    LocalizationTable table;
    table.total_frames = 1;
    table.records.push_back({1.0, 0.5, 1});
    table.records.push_back({0.5, 0.25, 1});
    table.records.push_back({-0.1, 0.5, 1});
    BinResult r = bin_localizations(table, 1, 4);
    CHECK(r.rejected == 2);
    CHECK(r.stack.counts[0] == 1);
}

TEST_CASE("binning validates the frame split") {
    LocalizationTable table = random_table(10, 10, 1);
    CHECK_THROWS_AS(bin_localizations(table, 20, 8), std::invalid_argument);
    CHECK_THROWS_AS(bin_localizations(table, 3, 8), std::invalid_argument);
    CHECK_THROWS_AS(bin_localizations(table, 0, 8), std::invalid_argument);
    table.records.push_back({0.5, 0.5, 11});
    CHECK_THROWS_AS(bin_localizations(table, 5, 8), std::invalid_argument);
}

TEST_CASE("total mass equals accepted record count") {
    LocalizationTable table = random_table(500, 20, 9);
    table.records.push_back({1.0, 0.2, 3});  // rejected
    BinResult r = bin_localizations(table, 5, 16);
    CHECK(r.rejected == 1);
    CHECK(grid_sum(superimpose(r.stack)) == doctest::Approx(500.0));
    std::int64_t total = 0;
    for (auto c : r.stack.counts) total += c;
    CHECK(total == 500);
}

TEST_CASE("binning is order independent") {
    LocalizationTable table = random_table(300, 12, 33);
    BinResult a = bin_localizations(table, 4, 8);
    Rng rng(5);
    for (std::size_t i = table.records.size(); i > 1; --i)
        std::swap(table.records[i - 1], table.records[rng.next_below(i)]);
    BinResult b = bin_localizations(table, 4, 8);
    for (int t = 0; t < 4; ++t) {
        CHECK(a.stack.counts[static_cast<std::size_t>(t)] ==
              b.stack.counts[static_cast<std::size_t>(t)]);
        CHECK(a.stack.frames[static_cast<std::size_t>(t)] ==
              b.stack.frames[static_cast<std::size_t>(t)]);
    }
}

TEST_CASE("rebinning with T = T' is the identity grouping") {
    LocalizationTable table = random_table(200, 8, 77);
    BinResult r = bin_localizations(table, 8, 8);
    std::vector<std::int64_t> per_frame(8, 0);
    for (const auto& rec : table.records) ++per_frame[static_cast<std::size_t>(rec.frame - 1)];
    for (int t = 0; t < 8; ++t) CHECK(r.stack.counts[static_cast<std::size_t>(t)] == per_frame[static_cast<std::size_t>(t)]);
}

TEST_CASE("superimpose sums frames") {
    Image f = testutil::random_grid(8, 2);
    FrameStack two = testutil::dense_stack({f, f});
    Image sum = superimpose(two);
    for (std::size_t i = 0; i < sum.size(); ++i) CHECK(sum[i] == doctest::Approx(2.0 * f[i]));

    FrameStack zeros = make_empty_stack(3, 4);
    CHECK(grid_sum(superimpose(zeros)) == 0.0);

    FrameStack hot = make_empty_stack(3, 4);
    hot.frames[0](1, 2) = 1.0;
    hot.frames[1](0, 0) = 1.0;
    hot.frames[2](3, 3) = 1.0;
    Image h = superimpose(hot);
    CHECK(h(1, 2) == 1.0);
    CHECK(h(0, 0) == 1.0);
    CHECK(h(3, 3) == 1.0);
    CHECK(grid_sum(h) == 3.0);
}

TEST_CASE("directory format round-trips bit-exactly") {
    auto dir = temp_dir("dir_roundtrip");
    FrameStack stack = make_empty_stack(3, 4);
    Rng rng(12);
    for (auto& f : stack.frames)
        for (double& v : f.data()) v = (rng.next_double() - 0.5) * 1e3 * rng.next_double();
    stack.frames[0](0, 0) = 1e-17;
    stack.frames[1](2, 3) = -0.0;
    stack.counts = {5, 0, 123456789};
    write_stack_dir(dir, stack);
    FrameStack back = read_stack_dir(dir);
    CHECK(back.T == stack.T);
    CHECK(back.N == stack.N);
    CHECK(back.counts == stack.counts);
    for (int t = 0; t < 3; ++t)
        for (std::size_t i = 0; i < stack.frames[0].size(); ++i) {
            double a = stack.frames[static_cast<std::size_t>(t)][i];
            double b = back.frames[static_cast<std::size_t>(t)][i];
            CHECK(std::memcmp(&a, &b, sizeof a) == 0);
        }
    std::filesystem::remove_all(dir);
}

TEST_CASE("binary format round-trips bit-exactly") {
    auto dir = temp_dir("bin_roundtrip");
    FrameStack stack = make_empty_stack(2, 8);
    Rng rng(13);
    for (auto& f : stack.frames)
        for (double& v : f.data()) v = rng.next_double() * 3.0 - 1.0;
    stack.counts = {7, 9};
    auto file = dir / "stack.drft";
    write_stack_binary(file, stack);
    FrameStack back = read_stack_binary(file);
    CHECK(back.counts == stack.counts);
    for (int t = 0; t < 2; ++t)
        for (std::size_t i = 0; i < stack.frames[0].size(); ++i) {
            double a = stack.frames[static_cast<std::size_t>(t)][i];
            double b = back.frames[static_cast<std::size_t>(t)][i];
            CHECK(std::memcmp(&a, &b, sizeof a) == 0);
        }

    FrameStack via_any = read_stack(file);
    CHECK(via_any.T == 2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("localization table io round-trips") {
    auto dir = temp_dir("table_io");
    LocalizationTable table = random_table(50, 10, 21);
    auto file = dir / "locs.csv";
    write_localization_table(file, table);
    LocalizationTable back = read_localization_table(file);
    REQUIRE(back.records.size() == table.records.size());
    for (std::size_t i = 0; i < table.records.size(); ++i) {
        CHECK(back.records[i].x1 == table.records[i].x1);
        CHECK(back.records[i].x2 == table.records[i].x2);
        CHECK(back.records[i].frame == table.records[i].frame);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("corrupt files are reported") {
    auto dir = temp_dir("bad_files");
    std::ofstream(dir / "locs.csv") << "a,b\n";
    CHECK_THROWS_AS(read_localization_table(dir / "locs.csv"), std::runtime_error);
    std::ofstream(dir / "stack.drft") << "NOPE";
    CHECK_THROWS_AS(read_stack_binary(dir / "stack.drft"), std::runtime_error);
    CHECK_THROWS_AS(read_grid_text(dir / "missing.txt"), std::runtime_error);
    std::filesystem::remove_all(dir);
}
