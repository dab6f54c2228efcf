#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

#include "pfloc/errors.hpp"
#include "pfloc/io.hpp"
#include "pfloc/parallel.hpp"
#include "pfloc/random.hpp"
#include "pfloc/stats.hpp"

using namespace pfloc;

TEST(Random, SubstreamsAreDistinctAndStable) {
    const RandomStream master(1234);
    std::set<std::uint64_t> firsts;
    for (std::uint64_t i = 0; i < 100; ++i) {
        RandomStream a = master.substream(i);
        RandomStream b = master.substream(i);
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        firsts.insert(x);
    }
    EXPECT_EQ(firsts.size(), 100u);
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Random, UniformOpenInterval) {
    RandomStream rng(5);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform_open();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 100000.0, 0.5, 0.005);
}

TEST(Stats, QuantileType7) {
    const std::vector<double> x{1, 2, 3, 4, 5};
    EXPECT_EQ(quantile_sorted(x, 0.0), 1.0);
    EXPECT_EQ(quantile_sorted(x, 1.0), 5.0);
    EXPECT_DOUBLE_EQ(quantile_sorted(x, 0.3), 2.2);
    EXPECT_DOUBLE_EQ(quantile(std::vector<double>{4, 1, 3, 2}, 0.5), 2.5);
    EXPECT_THROW((void)quantile_sorted(x, 1.5), ParameterError);
    EXPECT_THROW((void)quantile_sorted(std::vector<double>{}, 0.5), ParameterError);
    EXPECT_EQ(median(std::vector<double>{3, 1, 2}), 2.0);
    EXPECT_EQ(median_abs_deviation(std::vector<double>{1, 2, 3, 4, 100}), 1.0);
}

TEST(Stats, CompensatedSum) {
    std::vector<double> x{1e16, 1.0, -1e16, 1.0};
    EXPECT_EQ(compensated_sum(x), 2.0);
}

TEST(Parallel, CoversEveryIndexOnceAndRethrows) {
    for (std::size_t threads : {1u, 4u}) {
        set_thread_limit(threads);
        std::vector<std::atomic<int>> hits(1000);
        parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
        for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
        EXPECT_THROW(parallel_for(50, [](std::size_t i) {
                         if (i == 17) throw std::runtime_error("boom");
                     }),
                     std::runtime_error);
    }
    set_thread_limit(0);
}

TEST(Io, DoubleRoundTrip) {
    RandomStream rng(6);
    for (int i = 0; i < 10000; ++i) {
        const double x = std::ldexp(rng.uniform_open() - 0.5, static_cast<int>(rng.next_u64() % 200) - 100);
        EXPECT_EQ(io::parse_double(io::format_double(x)).value(), x);
    }
    EXPECT_TRUE(std::isnan(io::parse_double(io::format_double(std::nan(""))).value()));
    EXPECT_EQ(io::parse_double("-inf").value(), -std::numeric_limits<double>::infinity());
    EXPECT_FALSE(io::parse_double("1.5x").has_value());
    EXPECT_FALSE(io::parse_double("").has_value());
    EXPECT_EQ(io::parse_double(" 2.5 ").value(), 2.5);
}

TEST(Io, CsvSplit) {
    EXPECT_EQ(io::split_csv_line(" a, \"b\" ,c"), (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(io::split_csv_line("1,,3"), (std::vector<std::string>{"1", "", "3"}));
    EXPECT_EQ(io::split_csv_line("x\r"), (std::vector<std::string>{"x"}));
}
