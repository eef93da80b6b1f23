#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "xiboot/errors.hpp"
#include "xiboot/io.hpp"

using namespace xiboot;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& content) {
    static int counter = 0;
    path = "xiboot_io_test_" + std::to_string(counter++) + ".txt";
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("comma separated with header") {
  const TempFile f("x,y\n1.0,2.0\n3.5,-4.25\n");
  const XyData d = read_xy_file(f.path);
  REQUIRE(d.x.size() == 2);
  CHECK(d.x[0] == 1.0);
  CHECK(d.y[1] == -4.25);
}

TEST_CASE("tab and whitespace separation") {
  const TempFile tabs("1\t2\n3\t4\n");
  const XyData dt = read_xy_file(tabs.path);
  CHECK(dt.x == std::vector<double>{1.0, 3.0});

  const TempFile spaces("  1.5   2.5\n 3.5  4.5 \n");
  const XyData ds = read_xy_file(spaces.path);
  CHECK(ds.y == std::vector<double>{2.5, 4.5});
}

TEST_CASE("crlf, blank lines and a BOM are tolerated") {
  const TempFile f("\xEF\xBB\xBFx,y\r\n1,2\r\n\r\n3,4\r\n");
  const XyData d = read_xy_file(f.path);
  CHECK(d.x == std::vector<double>{1.0, 3.0});
  CHECK(d.y == std::vector<double>{2.0, 4.0});
}

TEST_CASE("malformed rows report the line number") {
  const TempFile f("1,2\n3,abc\n5,6\n");
  CHECK_THROWS_WITH_AS(read_xy_file(f.path), doctest::Contains("line 2"), io_error);
  const TempFile g("1,2\n3\n");
  CHECK_THROWS_AS(read_xy_file(g.path), io_error);
}

TEST_CASE("too few rows is a parameter error") {
  const TempFile f("1,2\n");
  CHECK_THROWS_AS(read_xy_file(f.path), parameter_error);
  const TempFile onlyheader("x,y\n");
  CHECK_THROWS_AS(read_xy_file(onlyheader.path), parameter_error);
}

TEST_CASE("missing file is an io error") {
  CHECK_THROWS_AS(read_xy_file("definitely_not_here.csv"), io_error);
}
