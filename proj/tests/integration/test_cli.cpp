#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "evguard/dataset.hpp"

namespace fs = std::filesystem;

#ifndef EVGUARD_CLI_PATH
#error "EVGUARD_CLI_PATH must name the evguard binary"
#endif

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("evguard_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    Result run(const std::string& args) {
        const auto out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
        const std::string cmd = "cd '" + dir_.string() + "' && '" EVGUARD_CLI_PATH "' " + args + " >'" +
                                out.string() + "' 2>'" + err.string() + "'";
        const int raw = std::system(cmd.c_str());
        const int status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
        return {status, slurp(out), slurp(err)};
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, SimulateImpactTwelveLiars) {
    const auto r = run("simulate-impact --liars 12 --beta 0.2 --capacity 2160 --seed 7");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "n_liars,beta,capacity,p_honest,p_liar,avg_unused");
    EXPECT_NE(r.out.find("\n12,0.200000,2160.000000,0.000000,1.000000,"), std::string::npos);
    EXPECT_NE(r.err.find("impact_seed=7"), std::string::npos);
}

TEST_F(Cli, SimulateImpactSweepRows) {
    const auto r = run("simulate-impact --liars 10:12 --beta 0.2,0.8 --capacity 1080,2160");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1 + 3 * 2 * 2);
}

TEST_F(Cli, BuildDatasetThenBalance) {
    auto r = run("build-dataset --evs 64 --days 24 --out data.csv");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto ds = evguard::read_csv(dir_ / "data.csv");
    EXPECT_EQ(ds.count(evguard::Label::Honest), 1536u);
    EXPECT_EQ(ds.count(evguard::Label::Lying), 6144u);
    EXPECT_TRUE(fs::exists(dir_ / "data.csv.provenance"));

    const auto before = slurp(dir_ / "data.csv");
    r = run("balance --in data.csv --out balanced.csv");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(slurp(dir_ / "data.csv"), before);
    const auto bal = evguard::read_csv(dir_ / "balanced.csv");
    EXPECT_EQ(bal.count(evguard::Label::Lying), 6144u);
    EXPECT_NEAR(static_cast<double>(bal.count(evguard::Label::Honest)), 6144.0, 1536.0 / 2);
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
    std::ofstream(dir_ / "run.cfg") << "liars=12\nbeta=0.8\nseed=3\n";
    const auto r = run("simulate-impact --config run.cfg --beta 0.2");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("\n12,0.200000,"), std::string::npos);
    EXPECT_NE(r.err.find("impact_seed=3"), std::string::npos);
}

TEST_F(Cli, UnknownSubcommandFails) { EXPECT_NE(run("frobnicate").status, 0); }

TEST_F(Cli, UnknownKeyFails) { EXPECT_NE(run("simulate-impact --bogus 3").status, 0); }

TEST_F(Cli, UnknownConfigKeyFails) {
    std::ofstream(dir_ / "bad.cfg") << "bogus=1\n";
    const auto r = run("simulate-impact --config bad.cfg");
    EXPECT_NE(r.status, 0);
    EXPECT_NE(r.err.find("bogus"), std::string::npos);
}

TEST_F(Cli, MissingFileFails) {
    const auto r = run("balance --in nowhere.csv --out x.csv");
    EXPECT_NE(r.status, 0);
    EXPECT_NE(r.err.find("nowhere.csv"), std::string::npos);
    EXPECT_FALSE(fs::exists(dir_ / "x.csv"));
}

TEST_F(Cli, ReportSchemaMismatchFails) {
    std::ofstream(dir_ / "impact.csv") << "a,b,c\n1,2,3\n";
    EXPECT_NE(run("report --impact_in impact.csv").status, 0);
}

TEST_F(Cli, InvalidValueFails) {
    EXPECT_NE(run("simulate-impact --liars 101").status, 0);
    EXPECT_NE(run("simulate-impact --beta 1.5").status, 0);
}

TEST_F(Cli, TracePipeline) {
    auto r = run("gen-traces --evs 2 --days 1 --out_dir traces");
    ASSERT_EQ(r.status, 0) << r.err;
    ASSERT_TRUE(fs::exists(dir_ / "traces" / "ev001.txt"));
    r = run("ingest --in traces/ev000.txt --out minutes.csv");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto text = slurp(dir_ / "minutes.csv");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1441);
    r = run("build-dataset --traces-dir traces --days 1 --out ds.csv");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(evguard::read_csv(dir_ / "ds.csv").size(), 2u * 5u);
}

TEST_F(Cli, FullPipelineIsByteIdentical) {
    std::ofstream(dir_ / "small.cfg") << "evs=6\ndays=4\nmodel=mlp\nlayers=1\nneurons=8\nepochs=2\n"
                                         "population=4\ngenerations=1\ntune_epochs=1\nseed=11\n";
    std::vector<std::string> outputs;
    for (const std::string run_dir : {"a", "b"}) {
        fs::create_directories(dir_ / run_dir);
        const std::string c = "--config small.cfg";
        const std::string p = run_dir + "/";
        for (const std::string& step :
             {"build-dataset " + c + " --out " + p + "dataset.csv",
              "split " + c + " --in " + p + "dataset.csv --train_out " + p + "train.csv --test_out " + p + "test.csv",
              "balance " + c + " --in " + p + "train.csv --out " + p + "train_balanced.csv",
              "train " + c + " --in " + p + "train_balanced.csv --model_out " + p + "model.txt --history_out " + p +
                  "history.csv",
              "evaluate " + c + " --model_in " + p + "model.txt --in " + p + "test.csv --metrics_out " + p +
                  "metrics.csv --roc_out " + p + "roc.csv",
              "tune " + c + " --in " + p + "train_balanced.csv --archive_out " + p + "archive.csv",
              "simulate-impact " + c + " --liars 0:20:5 --out " + p + "impact.csv",
              "report " + c + " --impact_in " + p + "impact.csv --metrics_in " + p + "metrics.csv --out " + p +
                  "report.csv"}) {
            const auto r = run(step);
            ASSERT_EQ(r.status, 0) << step << "\n" << r.err;
        }
    }
    for (const auto& entry : fs::directory_iterator(dir_ / "a")) {
        const auto name = entry.path().filename();
        EXPECT_EQ(slurp(entry.path()), slurp(dir_ / "b" / name)) << name;
    }
    EXPECT_TRUE(fs::exists(dir_ / "a" / "report.csv"));
}
