#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "palqa/codec.hpp"
#include "palqa/testimages.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(PALQA_CLI_PATH) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void put(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("palqa_cli_" + std::to_string(::getpid()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
        put(dir_ / "flat.pgm", palqa::write_pgm(palqa::GrayImage(16, 16, 128)));
        put(dir_ / "nat.pgm", palqa::write_pgm(palqa::corpus::natural(64, 48, 5)));
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
    EXPECT_EQ(run("encode " + path("missing.pgm") + " -o " + path("x.palq")).code, 1);
    EXPECT_EQ(run("encode " + path("flat.pgm") + " -q 0 -o " + path("x.palq")).code, 1);
    EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, EncodeFlatImage) {
    const auto r = run("encode " + path("flat.pgm") + " -q 8 -o " + path("f.palq"));
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("b_total=0\n"), std::string::npos);
    EXPECT_NE(r.out.find("gpp=0\n"), std::string::npos);
    EXPECT_EQ(fs::file_size(path("f.palq")), palqa::kHeaderBytes);
}

TEST_F(Cli, EncodeDecodeMatchesLibrary) {
    ASSERT_EQ(run("encode " + path("nat.pgm") + " -q 16 --export-circuit -o " + path("n.palq")).code, 0);
    ASSERT_EQ(run("decode " + path("n.palq") + " -o " + path("n.pgm")).code, 0);
    const auto img = palqa::corpus::natural(64, 48, 5);
    const auto expected = palqa::write_pgm(palqa::classical_reference(img, 16));
    EXPECT_EQ(slurp(path("n.pgm")), std::string(expected.begin(), expected.end()));
}

TEST_F(Cli, CorruptPayloadIsFormatError) {
    ASSERT_EQ(run("encode " + path("nat.pgm") + " -o " + path("c.palq")).code, 0);
    auto bytes = slurp(path("c.palq"));
    bytes[3] = 'X';
    put(path("c.palq"), std::vector<std::uint8_t>(bytes.begin(), bytes.end()));
    EXPECT_EQ(run("decode " + path("c.palq") + " -o " + path("c.pgm")).code, 2);
    put(path("bad.pgm"), {'P', '2', '\n'});
    EXPECT_EQ(run("encode " + path("bad.pgm") + " -o " + path("b.palq")).code, 2);
}

TEST_F(Cli, RdSweepCsv) {
    const auto r = run("rd-sweep " + path("nat.pgm") + " -q 8,16 --methods palqa,nzneqr");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind(std::string(palqa::kRdCsvHeader) + "\n", 0), 0U);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
    ASSERT_EQ(run("rd-sweep " + path("nat.pgm") + " -q 8 --csv " + path("rd.csv")).code, 0);
    EXPECT_EQ(slurp(path("rd.csv")).rfind(palqa::kRdCsvHeader, 0), 0U);
    EXPECT_EQ(run("rd-sweep " + path("nat.pgm") + " --methods wavelet").code, 1);
    EXPECT_EQ(run("rd-sweep " + path("nat.pgm") + " -q 8,x").code, 1);
}

TEST_F(Cli, ExportCircuitDeterministic) {
    const auto a = run("export-circuit " + path("nat.pgm") + " -q 8 --block 3");
    const auto b = run("export-circuit " + path("nat.pgm") + " -q 8 --block 3");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out.rfind("qubits 17\n", 0), 0U);
    EXPECT_EQ(run("export-circuit " + path("nat.pgm") + " --block 999").code, 1);
    const auto z = run("export-circuit " + path("nat.pgm") + " --method zscneqr --block 3 -o " + path("z.txt"));
    ASSERT_EQ(z.code, 0);
    EXPECT_EQ(slurp(path("z.txt")).rfind("qubits 17\n", 0), 0U);
}

TEST_F(Cli, VerifyPassAndTamper) {
    const auto ok = run("verify " + path("nat.pgm") + " -q 8 --block 5");
    EXPECT_EQ(ok.code, 0);
    EXPECT_NE(ok.out.find("result=pass"), std::string::npos);
    const auto bad = run("verify " + path("nat.pgm") + " -q 8 --block 5 --tamper");
    EXPECT_EQ(bad.code, 3);
    EXPECT_NE(bad.out.find("result=fail"), std::string::npos);
}
