#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "sosl1/approx.hpp"
#include "sosl1/error.hpp"
#include "sosl1/io.hpp"
#include "support.hpp"

namespace sosl1 {
namespace {

std::size_t parse_error_line(std::string_view text) {
  try {
    io::parse_text(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return static_cast<std::size_t>(-1);
}

TEST(TextFormat, ParsesMotzkinLike) {
  const auto f = io::parse_text(
      "# motzkin-like\n"
      "n 2\n"
      "1 4 2\n"
      "1 2 4\n"
      "\n"
      "-1 2 2\n"
      "0.037037037037037035 0 0\n");
  EXPECT_EQ(f, motzkin_like());
}

TEST(TextFormat, HeaderOptional) {
  const auto f = io::parse_text("2.5 1 0 3\n");
  EXPECT_EQ(f.nvars(), 3u);
  EXPECT_EQ(f.coefficient(Monomial{1, 0, 3}), 2.5);
}

TEST(TextFormat, HeaderOnlyIsZero) {
  const auto f = io::parse_text("n 4\n");
  EXPECT_EQ(f.nvars(), 4u);
  EXPECT_TRUE(f.is_zero());
}

TEST(TextFormat, Errors) {
  EXPECT_EQ(parse_error_line("n 2\n1 2 x\n"), 2u);
  EXPECT_EQ(parse_error_line("n 2\n1 2\n"), 2u);
  EXPECT_EQ(parse_error_line("n 2\n1 1 1\n# c\n2 1 1\n"), 4u);
  EXPECT_EQ(parse_error_line("n 1\nabc 1\n"), 2u);
  EXPECT_EQ(parse_error_line("1 -1\n"), 1u);
  EXPECT_EQ(parse_error_line("1 2\nn 1\n"), 2u);
  EXPECT_EQ(parse_error_line(""), 0u);
  EXPECT_EQ(parse_error_line("n 0\n"), 1u);
}

TEST(TextFormat, ErrorMessageHasLine) {
  try {
    io::parse_text("n 1\n1 1\n2 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::strstr(e.what(), "line 3"), nullptr);
  }
}

TEST(JsonFormat, Parses) {
  const auto f = io::parse_json(R"({"n": 2, "terms": [{"c": 1.5, "e": [2, 0]}, {"c": -1, "e": [0, 1]}]})");
  EXPECT_EQ(f, Polynomial(2, {{Monomial{2, 0}, 1.5}, {Monomial{0, 1}, -1.0}}));
}

TEST(JsonFormat, Errors) {
  EXPECT_THROW(io::parse_json("{"), ParseError);
  EXPECT_THROW(io::parse_json(R"({"terms": []})"), ParseError);
  EXPECT_THROW(io::parse_json(R"({"n": 2, "terms": [{"c": 1, "e": [1]}]})"), ParseError);
  EXPECT_THROW(io::parse_json(R"({"n": 1, "terms": [{"c": 1, "e": [-1]}]})"), ParseError);
  EXPECT_THROW(io::parse_json(R"({"n": 1, "terms": [{"c": 1, "e": [1]}, {"c": 2, "e": [1]}]})"),
               ParseError);
  EXPECT_THROW(io::parse_json(R"({"n": 1, "terms": [{"c": "x", "e": [1]}]})"), ParseError);
}

TEST(Format, AutoDetect) {
  const auto a = io::parse_polynomial("  {\"n\": 1, \"terms\": [{\"c\": 3, \"e\": [2]}]}");
  const auto b = io::parse_polynomial("3 2\n");
  EXPECT_EQ(a, b);
}

TEST(Format, RoundTripIsBitExact) {
  std::mt19937_64 rng(401);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + t % 4;
    const auto f = testing::random_polynomial(rng, n, 5);
    EXPECT_EQ(io::parse_text(io::to_text(f)), f);
    EXPECT_EQ(io::parse_json(io::to_json(f)), f);
  }
  EXPECT_EQ(io::parse_text(io::to_text(motzkin_like())), motzkin_like());
}

TEST(Format, FormatDouble) {
  EXPECT_EQ(io::format_double(0.5), "5.0000000000000000e-01");
  EXPECT_EQ(std::stod(io::format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Format, MissingFileIsError) {
  EXPECT_THROW(io::read_polynomial_file("/nonexistent/poly.txt"), Error);
}

TEST(ResultJson, RoundTripVerifiesAndIsStable) {
  const auto f = motzkin_like();
  const auto r = best_l1_sos_approximation(f, 3);
  const std::string doc = io::result_to_json(r);
  const auto back = io::result_from_json(doc);
  EXPECT_EQ(back.rho, r.rho);
  EXPECT_EQ(back.lambda, r.lambda);
  EXPECT_EQ(back.g, r.g);
  EXPECT_EQ(back.y_star.values(), r.y_star.values());
  EXPECT_EQ(back.gram.dense(), r.gram.dense());
  EXPECT_TRUE(verify(back, f, 3).all_passed());
  EXPECT_EQ(io::result_to_json(back), doc);
  EXPECT_EQ(io::result_to_json(best_l1_sos_approximation(f, 3)), doc);
}

TEST(ResultJson, KeyOrder) {
  const auto r = best_l1_sos_approximation(Polynomial(1, {{Monomial{2}, -1.0}}), 1);
  const std::string doc = io::result_to_json(r);
  const char* keys[] = {"\"nvars\"", "\"half_degree\"", "\"form\"", "\"lambda\"", "\"rho\"",
                        "\"g\"", "\"y_star\"", "\"gram\"", "\"certificate\"",
                        "\"solver_report\"", "\"warnings\""};
  std::size_t last = 0;
  for (const char* k : keys) {
    const auto pos = doc.find(k);
    ASSERT_NE(pos, std::string::npos) << k;
    EXPECT_GE(pos, last) << k;
    last = pos;
  }
}

TEST(ResultJson, Malformed) {
  EXPECT_THROW(io::result_from_json("{}"), ParseError);
  EXPECT_THROW(io::result_from_json("[1, 2]"), ParseError);
}

TEST(Table, Layout) {
  const std::string t = io::render_table({{3, {5.4433e-3, 5.3675e-3, 5.3675e-3}, 1.617838e-2},
                                          {4, {2.3864e-4, 9.3586e-4, 9.3586e-4}, 2.110355e-3}});
  EXPECT_EQ(t,
            "d | lambda*                          | rho_d\n"
            "--+----------------------------------+-----------\n"
            "3 | 10^-3 x (5.4433, 5.3675, 5.3675) | 1.6178e-02\n"
            "4 | 10^-4 x (2.3864, 9.3586, 9.3586) | 2.1104e-03\n");
}

TEST(Render, SosCheck) {
  const auto yes = is_sos(Polynomial(1, {{Monomial{0}, 1.0}, {Monomial{2}, 1.0}}), 1);
  EXPECT_EQ(io::render_sos_check(yes).rfind("SOS\n", 0), 0u);
  const auto no = is_sos(Polynomial::constant(1, -1.0), 1);
  EXPECT_EQ(io::render_sos_check(no).rfind("NOT SOS", 0), 0u);
}

}  // namespace
}  // namespace sosl1
