#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "cqw/error.hpp"
#include "cqw/io.hpp"
#include "cqw/types.hpp"

using namespace cqw;
namespace fs = std::filesystem;

TEST_CASE("format_double round-trips") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-2.0) == "-2");
  CHECK(std::stod(format_double(kPi)) == kPi);
  CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("parse_angle") {
  CHECK(parse_angle("0.785") == 0.785);
  CHECK(parse_angle("pi") == kPi);
  CHECK(parse_angle("PI") == kPi);
  CHECK(parse_angle("-pi/3") == doctest::Approx(-kPi / 3).epsilon(1e-15));
  CHECK(parse_angle("2pi/5") == doctest::Approx(2 * kPi / 5).epsilon(1e-15));
  CHECK(parse_angle("3*pi/4") == doctest::Approx(3 * kPi / 4).epsilon(1e-15));
  CHECK(parse_angle("0.25pi") == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(parse_angle("5/32 pi") == doctest::Approx(5 * kPi / 32).epsilon(1e-15));
  CHECK(parse_angle(" 1e-3 ") == 1e-3);
  CHECK(parse_angle("-0.5") == -0.5);
  for (const char* bad : {"", "abc", "pi/0", "1/0", "pix", "pi*2", "nan", "--1"})
    CHECK_THROWS_AS(parse_angle(bad), Error);
  try {
    parse_angle("bogus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParse);
  }
}

TEST_CASE("text files and the artifact log") {
  const fs::path dir = fs::temp_directory_path() / "cqw_test_io";
  fs::remove_all(dir);
  write_text_file(dir / "sub" / "a.txt", "hello\n");
  CHECK(read_text_file(dir / "sub" / "a.txt") == "hello\n");
  CHECK_THROWS_AS(read_text_file(dir / "missing.txt"), Error);

  ArtifactLog log(dir);
  log.write("b.csv", "abc");
  log.write("c.csv", "");
  REQUIRE(log.files().size() == 2);
  CHECK(log.files()[0].first == "b.csv");
  CHECK(log.files()[0].second == sha256_hex("abc"));
  CHECK(read_text_file(dir / "b.csv") == "abc");
  fs::remove_all(dir);
}
