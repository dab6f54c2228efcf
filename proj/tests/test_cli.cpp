#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("pfloc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int run(const std::string& args) const {
        const std::string cmd = std::string(PFLOC_CLI) + " " + args + " > " + (dir_ / "stdout.txt").string() +
                                " 2> " + (dir_ / "stderr.txt").string();
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    [[nodiscard]] std::string read(const std::string& name) const {
        std::ifstream in(dir_ / name);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    }

    [[nodiscard]] std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST_F(Cli, SimulateWritesSeriesAndManifest) {
    ASSERT_EQ(run("simulate --family par --T 2 --phi 0.8,-0.3 --alpha 1.7 --nt 1000 --seed 1 -o " + path("m2.csv")), 0);
    const auto csv = read("m2.csv");
    EXPECT_EQ(count_lines(csv), 1001u);
    EXPECT_EQ(csv.rfind("t,season,value\n", 0), 0u);
    const auto manifest = nlohmann::json::parse(read("m2.csv.manifest.json"));
    EXPECT_EQ(manifest.at("command"), "simulate");
    EXPECT_EQ(manifest.at("parameters").at("seed"), 1);
    EXPECT_EQ(manifest.at("parameters").at("nt"), 1000);

    ASSERT_EQ(run("simulate --family ipd --T 2 --sigma 1,2 --alpha 1.7 --nt 1000 -o " + path("m1.csv")), 0);
    EXPECT_EQ(count_lines(read("m1.csv")), 1001u);
}

TEST_F(Cli, SameSeedSameBytes) {
    ASSERT_EQ(run("simulate --family pma --T 2 --theta 0.8,-0.3 --alpha 1.7 --nt 200 --seed 9 -o " + path("a.csv")), 0);
    ASSERT_EQ(run("simulate --family pma --T 2 --theta 0.8,-0.3 --alpha 1.7 --nt 200 --seed 9 -o " + path("b.csv")), 0);
    EXPECT_EQ(read("a.csv"), read("b.csv"));
    ASSERT_EQ(run("replicate --figure power-par --nt 100 --reps 5 --m 100 --coefs 0.1,0.9 --seed 4 --output-dir " +
                  path("r1")), 0);
    ASSERT_EQ(run("replicate --figure power-par --nt 100 --reps 5 --m 100 --coefs 0.1,0.9 --seed 4 --output-dir " +
                  path("r2")), 0);
    const auto grid = read("r1/power-par_nt100.csv");
    EXPECT_EQ(grid, read("r2/power-par_nt100.csv"));
    EXPECT_EQ(grid.rfind("coef1,coef2,power_sub1,power_sub2,power_total\n", 0), 0u);
    EXPECT_EQ(count_lines(grid), 5u);
}

TEST_F(Cli, NonCausalModelFails) {
    EXPECT_NE(run("simulate --family par --T 1 --phi 1.2 --alpha 1.7 --nt 100 -o " + path("x.csv")), 0);
    EXPECT_NE(read("stderr.txt").find("causal"), std::string::npos);
    EXPECT_FALSE(fs::exists(dir_ / "x.csv"));
}

TEST_F(Cli, MeasureTestIdentifyFit) {
    ASSERT_EQ(run("simulate --family par --T 2 --phi 0.8,-0.3 --alpha 1.7 --nt 1000 --seed 2 -o " + path("s.csv")), 0);

    ASSERT_EQ(run("measure -i " + path("s.csv") + " --T 2 --measure pefloacf --A 0.8 --B 0.8 --hmax 3 -o " +
                  path("eta.csv")), 0);
    const auto eta = read("eta.csv");
    EXPECT_NE(eta.find("1,0,1\n"), std::string::npos);
    EXPECT_NE(eta.find("2,0,1\n"), std::string::npos);
    EXPECT_EQ(count_lines(eta), 1u + 2u * 7u);

    ASSERT_EQ(run("measure -i " + path("s.csv") + " --T 2 --measure peflopacf --B 0.6 --alpha 1.7 --hmax 3 --bands --m 200 -o " +
                  path("zeta.csv")), 0);
    EXPECT_EQ(read("zeta.csv").rfind("v,h,value,lower,upper\n", 0), 0u);

    ASSERT_EQ(run("test -i " + path("s.csv") + " --T 2 --alpha 1.7 --m 300 -o " + path("t.json")), 0);
    EXPECT_NE(read("stdout.txt").find("critical region"), std::string::npos);
    EXPECT_TRUE(nlohmann::json::parse(read("t.json")).at("reject_any").get<bool>());

    ASSERT_EQ(run("identify -i " + path("s.csv") + " --T 2 --family par --alpha 1.7 --m 300 -o " + path("o.json")), 0);
    const auto orders = nlohmann::json::parse(read("o.json")).at("seasonal");
    ASSERT_EQ(orders.size(), 2u);
    EXPECT_EQ(orders.at(0), 1);
    EXPECT_GE(orders.at(1).get<int>(), 1);

    ASSERT_EQ(run("fit -i " + path("s.csv") + " --T 2 --alpha 1.7 --m 300 -o " + path("f.json")), 0);
    const auto fit = nlohmann::json::parse(read("f.json"));
    EXPECT_NEAR(fit.at("fit").at("coefficients").at(0).at(0).get<double>(), 0.8, 0.15);
    EXPECT_TRUE(fs::exists(dir_ / "f.json.manifest.json"));
}

TEST_F(Cli, BadInputsExitNonZero) {
    std::ofstream(dir_ / "bad.csv") << "value\n1\nfoo\n";
    EXPECT_NE(run("measure -i " + path("bad.csv") + " --T 1 -o " + path("out.csv")), 0);
    EXPECT_NE(read("stderr.txt").find("line 3"), std::string::npos);
    EXPECT_NE(run("test -i " + path("missing.csv") + " --T 2"), 0);
    EXPECT_NE(run("simulate --family nope --T 1 --nt 10 -o " + path("y.csv")), 0);
}
