#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <sstream>

#include "pom/io.hpp"
#include "pom/sampler.hpp"

using namespace pom;

TEST_SUITE("io") {
  TEST_CASE("doubles round trip through text") {
    Rng rng(1);
    for (int k = 0; k < 1000; ++k) {
      const double v = rng.uniform(-10, 10) * std::pow(10.0, rng.uniform(-20, 20));
      CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK_THROWS_AS((void)parse_double("1.5x"), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_integer("3.0"), std::invalid_argument);
    CHECK(split_csv("a,,b").size() == 3);
  }

  TEST_CASE("configurations round trip exactly in CSV and binary") {
    Rng rng(2);
    const TorusLattice l(6);
    const SpinConfig c = random_config(36, rng);
    std::stringstream csv;
    write_config_csv(csv, l, c);
    CHECK(read_config_csv(csv, l) == c);
    std::stringstream bin;
    write_config_binary(bin, l, c);
    CHECK(read_config_binary(bin, l) == c);
  }

  TEST_CASE("malformed configuration files are rejected") {
    const TorusLattice l(2);
    std::stringstream header("x,y,theta\n");
    CHECK_THROWS((void)read_config_csv(header, l));
    std::stringstream dup("x,y,angle\n0,0,0\n0,0,1\n1,0,0\n1,1,0\n");
    CHECK_THROWS((void)read_config_csv(dup, l));
    std::stringstream missing("x,y,angle\n0,0,0\n");
    CHECK_THROWS((void)read_config_csv(missing, l));
    std::stringstream outside("x,y,angle\n0,0,0\n1,0,0\n0,1,0\n2,1,0\n");
    CHECK_THROWS((void)read_config_csv(outside, l));
    std::stringstream bad_magic("XXXX");
    CHECK_THROWS((void)read_config_binary(bad_magic, l));
    std::stringstream wrong_n;
    write_config_binary(wrong_n, TorusLattice(4), SpinConfig(16));
    CHECK_THROWS((void)read_config_binary(wrong_n, l));
  }

  TEST_CASE("records round trip") {
    const TorusLattice l(4);
    const Couplings cp{1, 1, 3};
    SamplerSpec spec;
    spec.sweeps = 50;
    spec.thermalization = 10;
    const auto rec = run_chain(l, cp, spec, SpinConfig(16, 0.4));
    std::stringstream s;
    write_records_csv(s, rec);
    std::string header;
    std::getline(std::stringstream(s.str()), header);
    CHECK(header == kRecordHeader);
    CHECK(read_records_csv(s) == rec);
    std::stringstream bad(std::string(kRecordHeader) + "\n1,2,3\n");
    CHECK_THROWS((void)read_records_csv(bad));
  }
}
