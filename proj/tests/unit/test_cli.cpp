#include "vms/cli.hpp"
#include "vms/mesh.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = vms::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("vms_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        unsetenv("VMS_WORKERS");
    }
    void TearDown() override
    {
        fs::remove_all(dir_);
        unsetenv("VMS_WORKERS");
    }
    fs::path dir_;
};

std::string manifest_value(const std::string& manifest, const std::string& key)
{
    std::istringstream in(manifest);
    std::string line;
    const std::string prefix = key + " = ";
    while (std::getline(in, line)) {
        if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
    }
    return {};
}

}  // namespace

TEST_F(CliTest, MeshGenerateAndReload)
{
    const auto file = dir_ / "box.vmsh";
    fs::create_directories(dir_);
    auto r = run({"mesh", "--box", "3", "--div", "4", "--out", file.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("125 nodes, 384 elements"), std::string::npos) << r.out;
    const auto m = vms::load_mesh(file);
    EXPECT_EQ(m.num_elements(), 384);

    r = run({"mesh", "--in", (fs::path(VMS_TEST_DATA) / "cube4.msh").string(), "--format", "gmsh"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("384 elements"), std::string::npos);
}

TEST_F(CliTest, SolveWritesOutputs)
{
    const auto r = run({"solve", "--case", "lid3d", "--div", "3", "--re", "100", "--out", dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("converged in"), std::string::npos);
    for (const char* f : {"solution.vtk", "trace.csv", "centerline.csv", "manifest.txt"}) {
        EXPECT_TRUE(fs::exists(dir_ / f)) << f;
    }
    const auto manifest = slurp(dir_ / "manifest.txt");
    EXPECT_EQ(manifest_value(manifest, "case"), "lid3d");
    EXPECT_EQ(manifest_value(manifest, "elements"), "162");
    EXPECT_EQ(manifest_value(manifest, "reynolds"), "100");
    EXPECT_EQ(manifest_value(manifest, "workers"), "1");
    EXPECT_EQ(slurp(dir_ / "centerline.csv").substr(0, 22), "coordinate,vx,vy,vz,p\n");
}

TEST_F(CliTest, OutputIsDeterministicAcrossRunsAndWorkers)
{
    std::vector<std::string> centerlines;
    for (const char* w : {"1", "1", "3"}) {
        const auto out = dir_ / (std::string("w") + w + std::to_string(centerlines.size()));
        const auto r = run({"solve", "--div", "3", "--workers", w, "--out", out.string()});
        ASSERT_EQ(r.code, 0) << r.err;
        centerlines.push_back(slurp(out / "centerline.csv"));
        EXPECT_EQ(slurp(out / "trace.csv"), slurp(dir_ / "w10" / "trace.csv"));
    }
    EXPECT_EQ(centerlines[0], centerlines[1]);
    EXPECT_EQ(centerlines[0], centerlines[2]);
}

TEST_F(CliTest, WorkersFromEnvironment)
{
    setenv("VMS_WORKERS", "2", 1);
    auto r = run({"solve", "--div", "2", "--out", (dir_ / "env").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(manifest_value(slurp(dir_ / "env" / "manifest.txt"), "workers"), "2");
    r = run({"solve", "--div", "2", "--workers", "3", "--out", (dir_ / "flag").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(manifest_value(slurp(dir_ / "flag" / "manifest.txt"), "workers"), "3");
    setenv("VMS_WORKERS", "many", 1);
    r = run({"solve", "--div", "2", "--out", (dir_ / "bad").string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("VMS_WORKERS"), std::string::npos);
}

TEST_F(CliTest, VerifyPasses)
{
    const auto r = run({"verify"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST_F(CliTest, IncompleteContinuationFails)
{
    const auto r = run({"continue", "--div", "3", "--schedule", "100,400", "--max-newton", "1", "--out",
                        dir_.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("continuation stopped at Re = 100"), std::string::npos) << r.err;
    EXPECT_NE(slurp(dir_ / "continuation.csv").find("100,0,"), std::string::npos);
    EXPECT_EQ(manifest_value(slurp(dir_ / "manifest.txt"), "last_converged_reynolds"), "none");
}

TEST_F(CliTest, ContinuationReportsEachStage)
{
    const auto r = run({"continue", "--div", "3", "--schedule", "50,100", "--out", dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("last converged Re = 100"), std::string::npos) << r.out;
    const auto csv = slurp(dir_ / "continuation.csv");
    EXPECT_NE(csv.find("50,1,"), std::string::npos);
    EXPECT_NE(csv.find("100,1,"), std::string::npos);
}

TEST_F(CliTest, TransientWritesStepTable)
{
    const auto r = run({"transient", "--case", "lid3d", "--div", "2", "--dt", "0.1", "--steps", "2", "--vtk-every",
                        "1", "--out", dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto steps = slurp(dir_ / "steps.csv");
    EXPECT_EQ(steps.substr(0, steps.find('\n')), "step,time,newton_iterations,residual,p_min,p_min_x,p_min_y,p_min_z");
    EXPECT_TRUE(fs::exists(dir_ / "solution_00002.vtk"));
}

TEST_F(CliTest, PerfReportsMatchingMatrices)
{
    const auto r = run({"perf", "--div", "3", "--workers-list", "1,2", "--repeats", "1", "--out", dir_.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("max matrix difference across worker counts 0"), std::string::npos) << r.out;
    EXPECT_TRUE(fs::exists(dir_ / "perf.csv"));
}

TEST_F(CliTest, UsageErrorsExitTwo)
{
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"simulate"}).code, 2);
    EXPECT_EQ(run({"solve", "--div", "x"}).code, 2);
    EXPECT_EQ(run({"solve", "--path", "schur"}).code, 2);
    EXPECT_EQ(run({"solve", "--re", "10", "--nu", "0.1", "--out", dir_.string()}).code, 2);
    EXPECT_EQ(run({"solve", "--solver", "cg", "--out", dir_.string()}).code, 2);
    EXPECT_EQ(run({"solve", "--case", "/nonexistent.ini"}).code, 2);
    EXPECT_EQ(run({"continue", "--schedule", "400,100", "--out", dir_.string()}).code, 2);
    EXPECT_EQ(run({"mesh", "--box", "4"}).code, 2);
    EXPECT_EQ(run({"transient", "--case", "jet", "--div", "4", "--out", dir_.string()}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}
