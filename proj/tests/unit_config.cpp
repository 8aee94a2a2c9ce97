#include "doctest.h"

#include "magband/config.hpp"
#include "magband/errors.hpp"
#include "magband/report.hpp"
#include "magband/version.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using namespace magband;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_path(const char* name) {
    return std::string("/tmp/magband_test_") + name + "." + std::to_string(::getpid());
}

} // namespace

TEST_CASE("config parses sections, comments, and whitespace") {
    Config c = Config::from_string(
        "# leading comment\n"
        "top = 1\n"
        "[Model]\n"
        "  Nu = 3   ; trailing comment\n"
        "ell=2\n"
        "\n"
        "[run]\n"
        "workers = 4\n");
    CHECK(c.get_num("top", 0.0) == 1.0);
    CHECK(c.get_int("model.nu", 0) == 3);   // section and key are case folded
    CHECK(c.get_int("model.ell", 0) == 2);
    CHECK(c.get_int("run.workers", 0) == 4);
    CHECK(c.get_num("absent", -7.0) == -7.0);
}

TEST_CASE("config rejects malformed input") {
    CHECK_THROWS_AS(Config::from_string("[model\nnu=2\n"), InvalidInput);
    CHECK_THROWS_AS(Config::from_string("just a bare line\n"), InvalidInput);
    CHECK_THROWS_AS(Config::from_string("= 3\n"), InvalidInput);
    Config c = Config::from_string("[a]\nx = fast\nn = 1.5\nb = maybe\nl = 1,zz\n");
    CHECK_THROWS_AS(c.get_num("a.x", 0.0), InvalidInput);
    CHECK_THROWS_AS(c.get_int("a.n", 0), InvalidInput);
    CHECK_THROWS_AS(c.get_bool("a.b", false), InvalidInput);
    CHECK_THROWS_AS(c.get_list("a.l", {}), InvalidInput);
    CHECK_THROWS_AS(Config::from_file("/nonexistent/path.ini"), InvalidInput);
}

TEST_CASE("config booleans and lists") {
    Config c = Config::from_string("t1=yes\nt2=ON\nf1=0\nf2=No\nlist = 1, 2.5 ,3e2,\n");
    CHECK(c.get_bool("t1", false));
    CHECK(c.get_bool("t2", false));
    CHECK_FALSE(c.get_bool("f1", true));
    CHECK_FALSE(c.get_bool("f2", true));
    std::vector<double> l = c.get_list("list", {});
    REQUIRE(l.size() == 3);
    CHECK(l[0] == 1.0);
    CHECK(l[1] == 2.5);
    CHECK(l[2] == 300.0);
    CHECK(c.get_list("absent", {9.0}) == std::vector<double>{9.0});
}

TEST_CASE("config hash is canonical and order independent") {
    Config empty;
    CHECK(empty.hash() == "cbf29ce484222325"); // frozen: identifies unconfigured runs
    Config a = Config::from_string("[m]\nx=1\ny=2\n");
    Config b = Config::from_string("# different text, same content\n[m]\ny=2\nx = 1\n");
    CHECK(a.canonical() == b.canonical());
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);
    Config d = Config::from_string("[m]\nx=1\ny=3\n");
    CHECK(a.hash() != d.hash());
}

TEST_CASE("environment overrides use the tool prefix") {
    ::setenv("MAGBAND_MODEL_NU", "5", 1);
    ::setenv("MAGBAND_RUN_WORKERS", "2", 1);
    ::setenv("OTHER_MODEL_NU", "9", 1);
    Config c = Config::from_string("[model]\nnu=2\n");
    c.apply_env();
    CHECK(c.get_int("model.nu", 0) == 5);       // env wins over the file
    CHECK(c.get_int("run.workers", 0) == 2);    // env can introduce keys
    CHECK(c.get_int("other.model", -1) == -1);  // foreign prefixes are ignored
    ::unsetenv("MAGBAND_MODEL_NU");
    ::unsetenv("MAGBAND_RUN_WORKERS");
    ::unsetenv("OTHER_MODEL_NU");
}

TEST_CASE("csv numeric cells round trip through text") {
    for (double v : {0.1, -3.0, 1.2345678912345678e-300, 6.02e23, 2.2896e-52}) {
        CHECK(std::stod(CsvWriter::num(v)) == v);
    }
}

TEST_CASE("csv escaping quotes exactly the cells that need it") {
    CHECK(CsvWriter::escape("plain") == "plain");
    CHECK(CsvWriter::escape("a,b") == "\"a,b\"");
    CHECK(CsvWriter::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(CsvWriter::escape("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("csv writer emits the reproducibility trailer on every row") {
    std::string path = temp_path("csv");
    {
        CsvWriter w(path, {"x", "y"}, "deadbeefdeadbeef", "demo");
        w.row({1.0, 2.0});
        w.row_cells({CsvWriter::num(3.0), "a,b"});
        CHECK_THROWS_AS(w.row({1.0}), InvalidInput); // width mismatch
    }
    std::string text = slurp(path);
    CHECK(text == "x,y,config_hash,tool_version,op_id\n"
                  "1,2,deadbeefdeadbeef," + std::string(kVersion) + ",demo\n"
                  "3,\"a,b\",deadbeefdeadbeef," + std::string(kVersion) + ",demo\n");
    std::remove(path.c_str());
}

TEST_CASE("csv writer refuses unwritable paths") {
    CHECK_THROWS_AS(CsvWriter("/nonexistent/dir/file.csv", {"x"}, "h", "op"), InvalidInput);
}

TEST_CASE("run summary serializes every schema field") {
    RunSummary s;
    s.subcommand = "demo";
    s.config_hash = "cbf29ce484222325";
    s.exit_code = 3;
    s.workers = 2;
    s.quick = true;
    s.elapsed_seconds = 1.25;
    s.artifacts["main.csv"] = "/tmp/out/main.csv";
    s.metrics["value"] = 41.5;
    s.notes.push_back("note one");

    std::string path = temp_path("summary");
    write_summary(path, s);
    nlohmann::json j = nlohmann::json::parse(slurp(path));
    CHECK(j["schema_version"] == kSummarySchemaVersion);
    CHECK(j["tool_version"] == std::string(kVersion));
    CHECK(j["subcommand"] == "demo");
    CHECK(j["config_hash"] == "cbf29ce484222325");
    CHECK(j["exit_code"] == 3);
    CHECK(j["workers"] == 2);
    CHECK(j["quick"] == true);
    CHECK(j["elapsed_seconds"] == 1.25);
    CHECK(j["artifacts"]["main.csv"] == "/tmp/out/main.csv");
    CHECK(j["metrics"]["value"] == 41.5);
    CHECK(j["notes"][0] == "note one");
    std::remove(path.c_str());
}
