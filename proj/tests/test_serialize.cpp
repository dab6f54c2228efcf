#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "pfloc/errors.hpp"
#include "pfloc/random.hpp"
#include "pfloc/serialize.hpp"

using namespace pfloc;
using nlohmann::json;

namespace {

PeriodicSeries par_series(std::uint64_t seed, std::size_t cycles) {
    Eigen::MatrixXd phi(2, 1);
    phi << 0.8, -0.3;
    RandomStream rng(seed);
    return gen_parma(PeriodicModel::par(phi, StableParams(1.7, 1.0)), cycles, rng);
}

void expect_same(const std::vector<double>& a, const std::vector<double>& b) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::isnan(a[i])) {
            EXPECT_TRUE(std::isnan(b[i]));
        } else {
            EXPECT_EQ(a[i], b[i]);
        }
    }
}

}  // namespace

TEST(TableCsv, RoundTripIsBitExact) {
    RandomStream master(81);
    for (int r = 0; r < 20; ++r) {
        const auto s = par_series(master.next_u64(), 50);
        const FlocParams fp(0.7, 0.8, 1.7);
        const auto t = compute_table(s, Measure::pefloacvf, lags_plus_minus(4), fp);
        std::stringstream io;
        write_table_csv(io, t);
        const auto back = read_table_csv(io, Measure::pefloacvf, fp);
        EXPECT_EQ(back.period, t.period);
        EXPECT_EQ(back.lags, t.lags);
        EXPECT_EQ(back.values, t.values);
        EXPECT_EQ(back.fp, fp);
    }
}

TEST(TableCsv, WithBandsLayout) {
    const auto s = par_series(82, 100);
    const auto lags = lags_positive(2);
    const auto fp = pacf_params(0.6, 1.7);
    const auto t = compute_table(s, Measure::peflopacf, lags, fp);
    const auto b = null_bands(Measure::peflopacf, 1.7, 200, 2, lags, fp, 0.99, 200, 3);
    std::stringstream io;
    write_table_csv(io, t, b);
    std::string header;
    std::getline(io, header);
    EXPECT_EQ(header, "v,h,value,lower,upper");
    io.seekg(0);
    const auto back = read_table_csv(io, Measure::peflopacf, fp);
    EXPECT_EQ(back.values, t.values);

    NullBands other = b;
    other.lags = {1, 3};
    std::ostringstream sink;
    EXPECT_THROW(write_table_csv(sink, t, other), ShapeError);
}

TEST(TableCsv, MalformedInput) {
    std::istringstream wrong_header("a,b,c\n1,1,0.5\n");
    EXPECT_THROW((void)read_table_csv(wrong_header, Measure::pefloacf, FlocParams(0.8, 0.8, 2.0)), IngestionError);
    std::istringstream hole("v,h,value\n1,1,0.5\n1,2,0.1\n2,1,0.3\n");
    EXPECT_THROW((void)read_table_csv(hole, Measure::pefloacf, FlocParams(0.8, 0.8, 2.0)), IngestionError);
    std::istringstream junk("v,h,value\n1,1,abc\n");
    try {
        (void)read_table_csv(junk, Measure::pefloacf, FlocParams(0.8, 0.8, 2.0));
        FAIL();
    } catch (const IngestionError& e) {
        EXPECT_EQ(e.row(), 2u);
    }
}

TEST(BandsCsv, RoundTrip) {
    const auto b = null_bands(Measure::pefloacf, 1.7, 200, 2, lags_plus_minus(3), FlocParams(0.8, 0.8, 1.7), 0.95, 300, 4);
    std::stringstream io;
    write_bands_csv(io, b);
    const auto back = read_bands_csv(io);
    EXPECT_EQ(back.lags, b.lags);
    EXPECT_EQ(back.lower, b.lower);
    EXPECT_EQ(back.upper, b.upper);
}

TEST(Json, TableAndBandsRoundTrip) {
    const auto s = par_series(83, 100);
    auto t = compute_table(s, Measure::pefloacf, lags_plus_minus(3), FlocParams(0.8, 0.8, 1.7));
    t.values[2] = std::nan("");
    SeasonalLagTable back;
    from_json(json::parse(json(t).dump()), back);
    EXPECT_EQ(back.measure, t.measure);
    EXPECT_EQ(back.lags, t.lags);
    EXPECT_EQ(back.fp, t.fp);
    expect_same(back.values, t.values);

    const auto b = null_bands(Measure::pefloacf, 1.7, 200, 2, lags_plus_minus(2), FlocParams::unbounded(1.0, 1.0), 0.9, 200, 5);
    NullBands bb;
    from_json(json::parse(json(b).dump()), bb);
    EXPECT_EQ(bb.lower, b.lower);
    EXPECT_EQ(bb.upper, b.upper);
    EXPECT_EQ(bb.fp, b.fp);
    EXPECT_TRUE(std::isinf(bb.fp.moment_bound()));
    EXPECT_EQ(bb.nt, b.nt);
}

TEST(Json, ResultsRoundTrip) {
    const auto s = par_series(84, 200);
    const auto test = portmanteau_test(s, 1.7, FlocParams(0.8, 0.8, 1.7), 3, 0.05, 200, 6);
    PortmanteauResult t2;
    from_json(json::parse(json(test).dump()), t2);
    EXPECT_EQ(t2.kappa, test.kappa);
    EXPECT_EQ(t2.critical_value, test.critical_value);
    EXPECT_EQ(t2.reject_by_season, test.reject_by_season);
    EXPECT_EQ(t2.fp, test.fp);

    const auto order = identify_par_order(s, 1.7, 0.6, 4, 0.99, 200, 7);
    OrderResult o2;
    from_json(json::parse(json(order).dump()), o2);
    EXPECT_EQ(o2.seasonal, order.seasonal);
    EXPECT_EQ(o2.flags, order.flags);
    EXPECT_EQ(o2.values, order.values);
    EXPECT_EQ(o2.bands.lower, order.bands.lower);

    const auto fit = fit_par_yw(s, order.seasonal, pacf_params(0.6, 1.7));
    ParFit f2;
    from_json(json::parse(json(fit).dump()), f2);
    EXPECT_EQ(f2.coeffs, fit.coeffs);
    EXPECT_EQ(f2.residuals, fit.residuals);
    EXPECT_EQ(f2.orders, fit.orders);
}

TEST(TextTables, Layout) {
    const auto s = par_series(85, 200);
    const auto test = portmanteau_test(s, 1.7, FlocParams(0.8, 0.8, 1.7), 3, 0.05, 200, 8);
    const auto text = format_portmanteau_table(test);
    EXPECT_NE(text.find("kappa_v"), std::string::npos);
    EXPECT_NE(text.find("critical region"), std::string::npos);
    EXPECT_NE(text.find(", inf)"), std::string::npos);

    ParFit fit;
    fit.period = 3;
    fit.orders = {1, 0, 2};
    fit.coeffs = {{0.3621}, {}, {0.1, -0.1761}};
    const auto ft = format_fit_table(fit);
    EXPECT_NE(ft.find("0.3621"), std::string::npos);
    EXPECT_NE(ft.find("-0.1761"), std::string::npos);
    EXPECT_NE(ft.find("phi_2(v)"), std::string::npos);
}
