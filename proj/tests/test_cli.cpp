#include <doctest.h>

#include "finsler/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace finsler;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome call(std::vector<std::string> args) {
    args.insert(args.begin(), "finsler_verify");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("exit-code contract") {
    auto r = call({"classify", "--metric", "class1", "--param", "a=2", "--f", "exp(x1)", "--points", "50", "--seed", "7"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("\"verdict\": \"Landsberg, non-Berwald\"") != std::string::npos);

    r = call({"classify", "--metric", "class1", "--param", "a=2", "--f", "3", "--expect", "berwald", "--points", "20"});
    CHECK(r.code == cli::kOk);
    r = call({"classify", "--metric", "class1", "--param", "a=2", "--f", "3", "--points", "20"});
    CHECK(r.code == cli::kMismatch);
    CHECK(r.err.find("verdict mismatch") != std::string::npos);

    r = call({"classify", "--metric", "randers_control", "--quadratic", "euclid", "--points", "20"});
    CHECK(r.code == cli::kOk);
    r = call({"classify", "--metric", "alpha", "--quadratic", "euclid", "--points", "20"});
    CHECK(r.code == cli::kOk);

    r = call({"classify", "--metric", "class2", "--param", "a=1"});
    CHECK(r.code == cli::kError);
    CHECK(r.err.find("singular metric: det(g)=") != std::string::npos);
}

TEST_CASE("configuration errors exit with 1") {
    CHECK(call({"classify", "--metric", "class1", "--param", "a=2", "--f", "exp(x1"}).code == cli::kError);
    CHECK(call({"classify", "--metric", "class1", "--param", "a=2", "--f", "x1"}).code == cli::kError);
    CHECK(call({"classify", "--metric", "nonesuch"}).code == cli::kError);
    CHECK(call({"classify", "--metric", "class1", "--param", "a"}).code == cli::kError);
    CHECK(call({"classify", "--metric", "class1", "--param", "a=2", "--x-range", "1"}).code == cli::kError);
    CHECK(call({"classify", "--metric", "class1", "--param", "a=2", "--tol-profile", "lax"}).code == cli::kError);
    CHECK(call({"classify", "--metric", "class1", "--param", "a=2", "--dim", "4", "--quadratic", "product"}).code ==
          cli::kError);
    CHECK(call({"classify", "--metric", "class1", "--param", "a=2", "--quadratic", "1,2,2,1,0"}).code == cli::kError);
    CHECK(call({"classify"}).code == cli::kError);
    CHECK(call({}).code == cli::kError);
}

TEST_CASE("reports are byte-identical for identical runs") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto a = dir / "finsler_cli_a.json";
    const auto b = dir / "finsler_cli_b.json";
    const std::vector<std::string> base{"classify", "--metric", "class4", "--param", "p=3", "--param", "q=1",
                                        "--f", "1 + x1^2/4", "--quadratic", "mixed4", "--points", "25", "--seed", "42"};
    auto args = base;
    args.insert(args.end(), {"--out", a.string()});
    CHECK(call(args).code == cli::kOk);
    args = base;
    args.insert(args.end(), {"--out", b.string()});
    CHECK(call(args).code == cli::kOk);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).find("\"f\": \"1 + x1^2 / 4\"") != std::string::npos);

    args = base;
    args.insert(args.end(), {"--csv"});
    const auto csv = call(args);
    CHECK(csv.out.rfind("index,x1,", 0) == 0);
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST_CASE("list and custom quadratic forms") {
    const auto r = call({"list"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("example31") != std::string::npos);
    CHECK(r.out.find("class4") != std::string::npos);

    CHECK(call({"classify", "--metric", "class1", "--param", "a=2", "--quadratic", "2,0.5,0.5,1", "--points", "20"}).code ==
          cli::kOk);
    CHECK(call({"classify", "--metric", "alpha", "--dim", "5", "--points", "10"}).code == cli::kOk);
    CHECK(call({"classify", "--metric", "class3", "--param", "a=2", "--oracle-ad", "--points", "10"}).code == cli::kOk);
    CHECK(call({"classify", "--metric", "class1", "--param", "a=2", "--x-range", "0,1", "--points", "10",
                "--tol-profile", "strict"}).code == cli::kOk);
}
