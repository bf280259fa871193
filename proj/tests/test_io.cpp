#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include <shm/io.hpp>
#include <shm/train.hpp>
#include <shm/verify.hpp>

#include "support/fixtures.hpp"

using shm::Matrix;
using shm::Vector;

TEST_CASE("loads a small labeled dataset") {
  std::istringstream in("x1,x2,y1,y2,d\n1,2,3,4,1\n5,6,7,8,-1\n");
  const shm::TrainingSet ts = shm::load_dataset(in);
  CHECK(ts.input_dim() == 2);
  CHECK(ts.output_dim() == 2);
  CHECK(ts.size() == 2);
  CHECK(ts.x(0, 1) == 5.0);
  CHECK(ts.y(1, 0) == 4.0);
  CHECK(ts.d[0] == 1);
  CHECK(ts.d[1] == -1);
}

TEST_CASE("header order does not matter") {
  std::istringstream in("d,y1,x1,x2,y2\n1,3,1,2,4\n-1,7,5,6,8\n");
  const shm::TrainingSet ts = shm::load_dataset(in);
  CHECK(ts.x(0, 0) == 1.0);
  CHECK(ts.x(1, 0) == 2.0);
  CHECK(ts.y(0, 0) == 3.0);
  CHECK(ts.y(1, 0) == 4.0);
}

TEST_CASE("loader error paths") {
  {
    std::istringstream in("x1,y1,d\n1,2,0\n3,4,1\n");
    CHECK_THROWS_WITH(shm::load_dataset(in), Catch::Matchers::ContainsSubstring("line 2"));
  }
  {
    std::istringstream in("x1,y1,d\n1,2\n");
    CHECK_THROWS_AS(shm::load_dataset(in), shm::RaggedRow);
  }
  {
    std::istringstream in("x1,y1,d\n1,abc,1\n");
    CHECK_THROWS_AS(shm::load_dataset(in), shm::ParseError);
  }
  {
    std::istringstream in("x1,frog,d\n1,2,1\n");
    CHECK_THROWS_AS(shm::load_dataset(in), shm::ParseError);
  }
  {
    std::istringstream in("x1,y1\n1,2\n");  // labels required for training
    CHECK_THROWS_AS(shm::load_dataset(in), shm::ParseError);
  }
  {
    std::istringstream in("x1,x3,y1,d\n1,2,3,1\n");  // gap in x numbering
    CHECK_THROWS_AS(shm::load_dataset(in), shm::ParseError);
  }
  CHECK_THROWS_AS(shm::load_dataset("/nonexistent/file.csv"), shm::IoError);
}

TEST_CASE("features without labels are fine for prediction input") {
  std::istringstream in("x1,y1\n1,2\n3,4\n");
  const shm::FeatureSet fs = shm::load_features(in, false);
  CHECK(fs.size() == 2);
  CHECK(fs.d.empty());
}

TEST_CASE("the embedded dataset round-trips losslessly through CSV") {
  const shm::TrainingSet& ts = shm::appendix_dataset();
  std::stringstream buf;
  shm::save_dataset(ts, buf);
  const shm::TrainingSet back = shm::load_dataset(buf);
  REQUIRE(back.size() == 16);
  CHECK(shm::max_abs_diff(back.x, ts.x) == 0.0);
  CHECK(shm::max_abs_diff(back.y, ts.y) == 0.0);
  for (std::size_t i = 0; i < 16; ++i) CHECK(back.d[i] == ts.d[i]);
}

TEST_CASE("model round-trip reproduces decision values bit for bit") {
  const shm::Model model =
      shm::train(shm::appendix_dataset(), shm::KernelSpec::linear());
  std::stringstream buf;
  shm::save_model(model, buf);
  const shm::Model back = shm::load_model(buf);

  const shm::TrainingSet& ts = shm::appendix_dataset();
  for (std::size_t i = 0; i < ts.size(); ++i)
    CHECK(shm::decide(model, ts.x.col(i), ts.y.col(i)) ==
          shm::decide(back, ts.x.col(i), ts.y.col(i)));

  shmtest::Rng rng(6601);
  for (int rep = 0; rep < 100; ++rep) {
    const Vector x = shmtest::random_vector(rng, 2, -10, 10);
    const Vector y = shmtest::random_vector(rng, 2, -15, 15);
    CHECK(shm::decide(model, x, y) == shm::decide(back, x, y));
  }
}

TEST_CASE("kernel model round-trip") {
  shm::TrainConfig cfg;
  cfg.qp_mode = shm::QpMode::kkt;  // rbf needs both label signs among supports
  const shm::Model model =
      shm::train(shm::appendix_dataset(), shm::KernelSpec::rbf(0.05), cfg);
  std::stringstream buf;
  shm::save_model(model, buf);
  const shm::Model back = shm::load_model(buf);
  CHECK(back.mode == shm::ModelMode::kernel_expansion);
  CHECK(back.supports.size() == model.supports.size());

  shmtest::Rng rng(6602);
  for (int rep = 0; rep < 50; ++rep) {
    const Vector x = shmtest::random_vector(rng, 2, -10, 10);
    const Vector y = shmtest::random_vector(rng, 2, -15, 15);
    CHECK(shm::decide(model, x, y) == shm::decide(back, x, y));
  }
}

TEST_CASE("model file error paths") {
  {
    std::istringstream in("shm-model format_version 0\n");
    CHECK_THROWS_AS(shm::load_model(in), shm::VersionMismatch);
  }
  {
    std::istringstream in("not-a-model 1\n");
    CHECK_THROWS_AS(shm::load_model(in), shm::VersionMismatch);
  }
  {
    // truncated: supports promised but missing, and no end marker
    std::istringstream in(
        "shm-model format_version 1\nmode linear-explicit\nkernel linear\n"
        "m 1\nz 1\nb 0\ninv_xxt 1\nw 1\nw0 0\nsupports 2\n");
    CHECK_THROWS_AS(shm::load_model(in), shm::CorruptField);
  }
  {
    std::istringstream in(
        "shm-model format_version 1\nmode linear-explicit\nkernel linear\n"
        "m 1\nz 1\nb zero\n");
    CHECK_THROWS_AS(shm::load_model(in), shm::CorruptField);
  }
  CHECK_THROWS_AS(shm::load_model("/nonexistent/model.shm"), shm::IoError);
}

TEST_CASE("prediction rows follow the input order") {
  const shm::Model model =
      shm::train(shm::appendix_dataset(), shm::KernelSpec::linear());
  std::istringstream in("x1,x2,y1,y2\n-7.94,-2.94,-10.17,-0.92\n-8.05,2.09,9.93,0.97\n");
  const shm::FeatureSet fs = shm::load_features(in, false);
  std::ostringstream out;
  shm::write_predictions(model, fs, out);

  std::istringstream lines(out.str());
  std::string header, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  CHECK(header == "h,label");
  CHECK(row1.substr(row1.find(',') + 1) == "-1");
  CHECK(row2.substr(row2.find(',') + 1) == "1");
  const double h1 = std::stod(row1.substr(0, row1.find(',')));
  CHECK(std::abs(h1 - -2.5363) < 1e-3);
}
