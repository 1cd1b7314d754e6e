#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "qent/state_io.hpp"

namespace {

using qent::ComplexMatrix;

TEST(StateJson, ParsesBipartite) {
  const auto f = qent::parse_state_json(
      R"({"dims":[2,2],"re":[[0.25,0,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]],)"
      R"("im":[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]})");
  EXPECT_TRUE(f.bipartite());
  EXPECT_EQ(f.state.matrix(), 0.25 * ComplexMatrix::identity(4));
  EXPECT_EQ(f.as_bipartite().dA(), 2u);
}

TEST(StateJson, SingleSystemIsNotBipartite) {
  const auto f = qent::parse_state_json(R"({"dims":[2],"re":[[1,0],[0,0]],"im":[[0,0],[0,0]]})");
  EXPECT_FALSE(f.bipartite());
  EXPECT_THROW(f.as_bipartite(), qent::ParseError);
}

TEST(StateJson, ImaginaryParts) {
  const auto f = qent::parse_state_json(R"({"dims":[2],"re":[[0.5,0],[0,0.5]],"im":[[0,-0.25],[0.25,0]]})");
  EXPECT_EQ(f.state.matrix()(0, 1), (qent::Complex{0.0L, -0.25L}));
}

TEST(StateJson, Malformed) {
  EXPECT_THROW(qent::parse_state_json("{\"dims\": [2"), qent::ParseError);
  EXPECT_THROW(qent::parse_state_json(R"({"dims":[2],"re":[[1,0],[0,0]]})"), qent::ParseError);
  EXPECT_THROW(qent::parse_state_json(R"({"dims":[0],"re":[],"im":[]})"), qent::ParseError);
  EXPECT_THROW(qent::parse_state_json(R"({"dims":[2],"re":[[1,0]],"im":[[0,0]]})"), qent::ParseError);
  EXPECT_THROW(qent::parse_state_json(R"({"dims":[2],"re":[[1,"a"],[0,0]],"im":[[0,0],[0,0]]})"), qent::ParseError);
  EXPECT_THROW(qent::parse_state_json(R"({"dims":[2,2,2],"re":[],"im":[]})"), qent::ParseError);
}

TEST(StateJson, InvalidDensityIsParseError) {
  EXPECT_THROW(qent::parse_state_json(R"({"dims":[2],"re":[[1,0],[0,1]],"im":[[0,0],[0,0]]})"), qent::ParseError);
}

TEST(StateJson, RoundTripIsExact) {
  const auto s = qent::BipartiteState(qent::random_density(4, 12), 2, 2);
  const auto back = qent::parse_state_json(qent::state_to_json(s));
  ASSERT_EQ(back.dims, (std::vector<std::size_t>{2, 2}));
  // 17 significant digits round-trip every double
  EXPECT_LT(static_cast<double>(qent::frobenius_distance(back.state.matrix(), s.matrix())), 1e-15);
}

TEST(StateJson, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "qent_state_io_test.json";
  const auto rho = qent::random_density(3, 2);
  qent::write_state_file(path.string(), qent::state_to_json(rho));
  const auto f = qent::read_state_file(path.string());
  EXPECT_EQ(f.dims, (std::vector<std::size_t>{3}));
  std::filesystem::remove(path);
  EXPECT_THROW(qent::read_state_file(path.string()), qent::ParseError);
}

TEST(FormatDouble, SeventeenDigits) {
  EXPECT_EQ(qent::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(qent::format_double(0.1, 12), "0.1");
  EXPECT_EQ(qent::format_double(1.0), "1");
}

}  // namespace
