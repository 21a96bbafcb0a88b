#include <gtest/gtest.h>

#include <filesystem>
#include <functional>
#include <fstream>

#include "ssbkit/io.hpp"

using namespace ssb;
namespace fs = std::filesystem;

namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("ssbkit_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                       "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string write(const std::string& name, const std::string& text) {
    auto p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir;
};

std::string error_field(const std::function<void()>& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.details().value("field", std::string("")) + "|" + e.what();
  }
  return "no error";
}

}  // namespace

using IoFiles = TempDir;

TEST_F(IoFiles, LieAlgebraFileFillsAntisymmetricPartners) {
  auto path = write("so3.json", R"({"dim": 3, "basis": ["a", "b", "c"],
    "c": [["a", "b", "c", 1], [1, 2, 0, "1"], ["c", "a", "b", "1/1"]],
    "split": {"h": ["c"], "f": ["a", "b"]}})");
  auto loaded = io::load_algebra(path);
  EXPECT_EQ(loaded.algebra->constants(), catalog_algebra("so3")->constants());
  EXPECT_EQ(loaded.algebra->name(), "so3");
  ASSERT_TRUE(loaded.algebra->canonical_split());
  EXPECT_EQ(loaded.algebra->canonical_split()->f, (std::vector<std::size_t>{0, 1}));
  EXPECT_FALSE(loaded.rep);
}

TEST_F(IoFiles, GradedFileUsesSymmetricOddPairs) {
  auto path = write("s.json", R"({"dim": 2, "basis": ["Z", "Q"], "grading": [0, 1], "c": [["Q", "Q", "Z", 1]]})");
  auto loaded = io::load_algebra(path);
  EXPECT_TRUE(loaded.algebra->is_graded());
  EXPECT_EQ(loaded.algebra->constants()(1, 1, 0), Rational(1));
}

TEST_F(IoFiles, ErrorsNameFileAndField) {
  auto missing_c = write("a.json", R"({"dim": 2})");
  auto msg = error_field([&] { io::load_algebra(missing_c); });
  EXPECT_NE(msg.find("c|"), std::string::npos) << msg;
  EXPECT_NE(msg.find("a.json"), std::string::npos) << msg;

  auto bad_label = write("b.json", R"({"dim": 2, "basis": ["x", "y"], "c": [["x", "w", "y", 1]]})");
  msg = error_field([&] { io::load_algebra(bad_label); });
  EXPECT_NE(msg.find("unknown label 'w'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("b.json: c[0]"), std::string::npos) << msg;

  auto bad_value = write("c.json", R"({"dim": 2, "c": [[0, 1, 0, "1/0"]]})");
  msg = error_field([&] { io::load_algebra(bad_value); });
  EXPECT_NE(msg.find("c.json: c[0]"), std::string::npos) << msg;

  auto syntax = write("d.json", R"({"dim": )");
  msg = error_field([&] { io::load_algebra(syntax); });
  EXPECT_NE(msg.find("d.json: JSON syntax error"), std::string::npos) << msg;

  auto dim = write("e.json", R"({"dim": -1, "c": []})");
  msg = error_field([&] { io::load_algebra(dim); });
  EXPECT_EQ(msg.substr(0, 4), "dim|") << msg;

  // Valid syntax, invalid algebra: Jacobi fails.
  auto jacobi = write("f.json", R"({"dim": 3, "c": [[0, 1, 1, 1], [0, 2, 2, 1], [1, 2, 0, 1]]})");
  EXPECT_THROW(io::load_algebra(jacobi), ValidationError);
  EXPECT_THROW(io::load_algebra((dir / "absent.json").string()), ValidationError);
}

TEST_F(IoFiles, StarAlgebraAndStateFiles) {
  auto alg = write("c2.json", R"({"dim": 2, "basis": ["p", "q"], "m": [[0, 0, 0, 1], [1, 1, 1, 1]],
    "star": [[1, 0], [0, 1]], "unit": [1, 1], "rep": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]})");
  auto a = io::load_star_algebra(alg);
  EXPECT_EQ(a.dim(), 2u);
  EXPECT_TRUE(a.has_defining_rep());
  auto st = write("f.json", R"({"values": ["1/4", [0.75, 0]]})");
  auto f = io::load_state(a, st);
  EXPECT_EQ(f.values(0), Complex(0.25, 0));
  EXPECT_EQ(f.values(1), Complex(0.75, 0));
  auto bad_state = write("g.json", R"({"values": [1]})");
  auto msg = error_field([&] { io::load_state(a, bad_state); });
  EXPECT_EQ(msg.substr(0, 7), "values|") << msg;
  auto aut = write("u.json", R"({"unitary": [[0, 1], [1, 0]]})");
  auto rho = io::load_automorphism(a, aut);
  EXPECT_TRUE(validate_automorphism(a, rho).ok());
  EXPECT_NEAR(std::abs(rho.map(1, 0) - 1.0), 0.0, 1e-15);
}

TEST_F(IoFiles, GroupAndMultiplierFiles) {
  auto grp = write("z2.json", R"({"order": 2, "cayley": [[0, 1], [1, 0]], "labels": ["e", "s"], "subgroup": ["e"]})");
  auto g = io::load_group(grp);
  EXPECT_EQ(g.group.order(), 2u);
  EXPECT_EQ(g.subgroup, std::vector<std::size_t>{0});
  auto mult = write("k.json", R"({"angles": [[0, 0], [0, "1/2"]]})");
  auto k = io::load_multiplier(g.group, mult);
  EXPECT_EQ(k.angle(1, 1), Rational(1, 2));
  auto numeric = write("v.json", R"({"values": [[1, 1], [1, [-1, 0]]]})");
  EXPECT_FALSE(io::load_multiplier(g.group, numeric).is_exact());
  auto wrong = write("w.json", R"({"angles": [[0]]})");
  auto msg = error_field([&] { io::load_multiplier(g.group, wrong); });
  EXPECT_EQ(msg.substr(0, 7), "angles|") << msg;
  auto bad_order = write("o.json", R"({"order": 3, "cayley": [[0, 1], [1, 0]]})");
  msg = error_field([&] { io::load_group(bad_order); });
  EXPECT_EQ(msg.substr(0, 6), "order|") << msg;
  auto bad_labels = write("l.json", R"({"cayley": [[0, 1], [1, 0]], "labels": [1, 2]})");
  msg = error_field([&] { io::load_group(bad_labels); });
  EXPECT_EQ(msg.substr(0, 7), "labels|") << msg;
}

TEST(IoText, ParseElementForms) {
  auto h = catalog_algebra("heisenberg3");
  EXPECT_EQ(io::parse_element(h, "X=1/2, y=-3"), ExactElement(h, {Rational(1, 2), -3, 0}));
  EXPECT_EQ(io::parse_element(h, "-Z"), ExactElement(h, {0, 0, -1}));
  EXPECT_EQ(io::parse_element(h, "X,X"), ExactElement(h, {2, 0, 0}));
  EXPECT_TRUE(io::parse_element(h, "0").is_zero());
  EXPECT_THROW(io::parse_element(h, "W=1"), ValidationError);
  EXPECT_THROW(io::parse_element(h, "X=abc"), ValidationError);
  EXPECT_THROW(io::parse_element(h, "X,,Y"), ValidationError);
}

TEST(IoText, ListsAndNumbers) {
  auto s3 = catalog_group("s3");
  EXPECT_EQ(io::parse_group_elements(s3, "e,(12),5"), (std::vector<std::size_t>{0, 1, 5}));
  EXPECT_THROW(io::parse_group_elements(s3, "9"), ValidationError);
  EXPECT_THROW(io::parse_group_elements(s3, "99999999999999999999999"), ValidationError);
  EXPECT_EQ(io::parse_doubles("0.1, 1e-3"), (std::vector<double>{0.1, 1e-3}));
  EXPECT_THROW(io::parse_doubles("1x"), ValidationError);
  EXPECT_EQ(io::parse_basis_indices(*catalog_algebra("so3"), "I3,f1"), (std::vector<std::size_t>{2, 0}));
}

TEST(IoText, DigestsAreStable) {
  EXPECT_EQ(io::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(io::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(io::input_digest("so3"), io::sha256_hex("catalog:so3"));
}

TEST(IoText, JsonCleansTinyValues) {
  EXPECT_EQ(io::clean(1e-15), 0.0);
  EXPECT_EQ(io::clean(-2e-14), -2e-14);
  auto j = io::to_json(Complex(1e-17, -0.5));
  EXPECT_EQ(j[0], 0.0);
  EXPECT_EQ(j[1], -0.5);
  auto h = catalog_algebra("heisenberg3");
  EXPECT_EQ(io::to_json(ExactElement(h, {Rational(1, 3), 0, -2})), (io::json{"1/3", "0", "-2"}));
}
