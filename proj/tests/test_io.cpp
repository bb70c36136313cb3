#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "hlz/config.hpp"
#include "hlz/report.hpp"

using namespace hlz;

TEST_SUITE("io") {
  TEST_CASE("numbers round trip through 17 digits") {
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) {
      CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  }

  TEST_CASE("JSON and CSV carry the same digits") {
    Record r;
    r.add("name", std::string("a,b")).add("x", 0.1).add("n", std::int64_t{3}).add("ok", true)
        .add("inputs", NamedValues{{"T", 1000.0}, {"U", 0.5}});
    CHECK(to_json(r) == R"({"name":"a,b","x":0.10000000000000001,"n":3,"ok":true,"inputs":{"T":1000,"U":0.5}})");
    CHECK(csv_header(r) == "name,x,n,ok,inputs");
    CHECK(to_csv(r) == "\"a,b\",0.10000000000000001,3,true,T=1000;U=0.5");
  }

  TEST_CASE("non-finite values are null in JSON") {
    Record r;
    r.add("v", std::numeric_limits<double>::quiet_NaN());
    CHECK(to_json(r) == R"({"v":null})");
    CHECK(to_csv(r) == "nan");
  }

  TEST_CASE("CSV writer repeats the header when the keys change") {
    std::ostringstream os;
    RecordWriter w(os, OutputFormat::csv);
    Record a, b;
    a.add("x", 1.0);
    b.add("y", 2.0);
    w.write(a);
    w.write(a);
    w.write(b);
    CHECK(os.str() == "x\n1\n1\ny\n2\n");
  }

  TEST_CASE("formula reports become flat records") {
    FormulaReport f;
    f.formula_id = FormulaId::F4_3;
    f.inputs = {{"T", 1e4}};
    f.lhs = 1.0;
    f.rhs = 2.0;
    f.ratio = 0.5;
    f.verdict = Verdict::trend_ok;
    CHECK(to_json(to_record(f)) ==
          R"({"formula_id":"F4_3","inputs":{"T":10000},"lhs":1,"rhs":2,"ratio":0.5,"envelope":1,"K":5,"verdict":"trend_ok"})");
  }

  TEST_CASE("config precedence: file, then environment") {
    const auto path = std::filesystem::temp_directory_path() / "hlz_test_config.txt";
    {
      std::ofstream f(path);
      f << "# comment\n\nepsilon=0.02\ntol=1e-9\nrs_terms=3\n";
    }
    Config c;
    load_config_file(c, path.string());
    CHECK(c.epsilon == 0.02);
    CHECK(c.rs_terms == 3);
    ::setenv("HLZ_TOL", "1e-7", 1);
    apply_environment(c);
    ::unsetenv("HLZ_TOL");
    CHECK(c.tol == 1e-7);
    CHECK(c.epsilon == 0.02);
    std::filesystem::remove(path);
  }

  TEST_CASE("config text round trips") {
    Config c;
    c.epsilon = 0.015;
    c.mu.coeff = 8.0;
    c.checkpoint_path = "/tmp/x.csv";
    c.threads = 4;
    const auto path = std::filesystem::temp_directory_path() / "hlz_test_roundtrip.txt";
    {
      std::ofstream f(path);
      f << to_text(c);
    }
    Config d;
    load_config_file(d, path.string());
    CHECK(to_text(d) == to_text(c));
    std::filesystem::remove(path);
  }

  TEST_CASE("config rejects unknown keys and bad values") {
    Config c;
    CHECK_THROWS_AS(set_config_value(c, "nope", "1"), ConfigError);
    CHECK_THROWS_AS(set_config_value(c, "tol", "abc"), ConfigError);
    c.epsilon = 0.5;
    CHECK_THROWS_AS(validate(c), ConfigError);
  }
}
