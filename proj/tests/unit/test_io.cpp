#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "loopspace/error.hpp"
#include "loopspace/io.hpp"
#include "support.hpp"

using namespace loopspace;
using testing_support::Rand;
using testing_support::random_loop;
using testing_support::random_section;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Io, LoopRoundTripIsExact) {
  Rand r(1);
  const SampledLoop g = random_loop(EmbeddedManifold::sphere2(), r, 16);
  EXPECT_EQ(io::loop_from_json(io::loop_to_json(g)), g);
}

TEST(Io, LoopCsvLayout) {
  const SampledLoop g = SampledLoop::constant(Eigen::Vector2d(0.5, -1.0), 8);
  std::istringstream in(io::loop_to_csv(g));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x_1,x_2");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 8);
}

TEST(Io, SectionAndPathRoundTrip) {
  Rand r(2);
  const auto s = EmbeddedManifold::sphere2();
  const SampledLoop base = random_loop(s, r, 16);
  const TangentSection sec = random_section(s, base, r, 0.5);
  const TangentSection back = io::section_from_json(s, io::section_to_json(sec));
  EXPECT_EQ(back.base(), sec.base());
  EXPECT_EQ(back.vectors(), sec.vectors());

  const LoopPath path(s, {base, random_loop(s, r, 16), random_loop(s, r, 16)}, 0.75);
  const LoopPath p2 = io::path_from_json(s, io::path_to_json(path));
  ASSERT_EQ(p2.intervals(), 2);
  EXPECT_EQ(p2.duration(), 0.75);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(p2.at(i), path.at(i));
}

TEST(Io, ChartRoundTrip) {
  Rand r(3);
  const auto t = EmbeddedManifold::torus2();
  const Chart c(random_loop(t, r, 16), LocalAdditionSpec::standard(t));
  const Chart back = io::chart_from_json(io::chart_to_json(c));
  EXPECT_EQ(back.center(), c.center());
  EXPECT_EQ(back.manifold().kind(), ManifoldKind::Torus);
  EXPECT_EQ(back.addition().epsilon, c.addition().epsilon);
  EXPECT_EQ(back.addition().compression.gain, c.addition().compression.gain);
}

TEST(Io, MatrixLoopRoundTrip) {
  const MatrixLoop g = MatrixLoop::from_function(2, 8, [](double t) {
    Eigen::MatrixXcd m(2, 2);
    m << std::complex<double>(t, 1.0 / 3.0), 2.0, std::polar(1.0, t), -t;
    return m;
  });
  const MatrixLoop back = io::matrix_loop_from_json(io::matrix_loop_to_json(g));
  ASSERT_EQ(back.resolution(), 8);
  for (int j = 0; j < 8; ++j) EXPECT_EQ(back.at(j), g.at(j));
}

TEST(Io, SingularValuesCsv) {
  const Eigen::Vector3d v(3.0, 2.0, 0.5);
  EXPECT_EQ(io::singular_values_to_csv(v), "j,value\n1,3\n2,2\n3,0.5\n");
}

TEST(Io, ParseErrors) {
  EXPECT_EQ(kind_of([] { (void)io::loop_from_json("{not json"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { (void)io::loop_from_json(R"({"dim":2,"n":8})"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { (void)io::loop_from_json(R"({"dim":2,"n":8,"samples":[[1,2]]})"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { (void)io::chart_from_json(R"({"manifold":"klein"})"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { (void)io::matrix_loop_from_json(R"({"size":"two"})"); }), ErrorKind::ParseError);
}

TEST(Io, FilesRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "loopspace_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  io::write_file(dir / "a.txt", "hello\n");
  EXPECT_EQ(io::read_file(dir / "a.txt"), "hello\n");
  EXPECT_THROW((void)io::read_file(dir / "missing.txt"), Error);
  std::filesystem::remove_all(dir.parent_path());
}
