#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>

#include <shm/shm.hpp>

namespace {

// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 I/O or parse error, 4 numerical failure.
constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

shm::KernelSpec parse_kernel(const std::string& text) {
  if (text == "linear") return shm::KernelSpec::linear();
  if (text.rfind("poly:", 0) == 0) {
    const std::string rest = text.substr(5);
    const auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw CLI::ValidationError("--kernel", "expected poly:D:R");
    return shm::KernelSpec::polynomial(std::stoi(rest.substr(0, colon)),
                                       std::stod(rest.substr(colon + 1)));
  }
  if (text.rfind("rbf:", 0) == 0)
    return shm::KernelSpec::rbf(std::stod(text.substr(4)));
  throw CLI::ValidationError("--kernel", "expected linear, poly:D:R or rbf:G");
}

double parse_c(const std::string& text) {
  if (text == "inf" || text == "INF" || text == "Inf" || text == "infinity")
    return std::numeric_limits<double>::infinity();
  const double c = std::stod(text);
  if (!(c > 0.0)) throw CLI::ValidationError("--c", "must be positive or inf");
  return c;
}

int cmd_train(const std::string& data, const std::string& kernel_text,
              const std::string& c_text, const std::string& qp_mode,
              double ridge, const std::string& out) {
  shm::TrainingSet ts = shm::load_dataset(data);
  if (ts.input_dim() > ts.size())
    std::cerr << "warning: more input features (" << ts.input_dim()
              << ") than examples (" << ts.size()
              << "); the covariance will need regularization\n";
  shm::TrainConfig cfg;
  cfg.c = parse_c(c_text);
  cfg.ridge = ridge;
  if (qp_mode == "script")
    cfg.qp_mode = shm::QpMode::script;
  else if (qp_mode == "kkt")
    cfg.qp_mode = shm::QpMode::kkt;
  else
    throw CLI::ValidationError("--qp-mode", "expected script or kkt");

  const shm::Model model = shm::train(ts, parse_kernel(kernel_text), cfg);
  shm::save_model(model, out);
  std::cout << "trained " << shm::to_string(model.mode) << " model: "
            << model.supports.size() << " support vectors, b = "
            << shm::format_double(model.b)
            << ", dual objective = " << shm::format_double(model.meta.qp_objective)
            << "\nsaved to " << out << "\n";
  return kExitOk;
}

int cmd_predict(const std::string& model_path, const std::string& data,
                const std::string& out) {
  const shm::Model model = shm::load_model(model_path);
  const shm::FeatureSet fs = shm::load_features(data);
  std::ofstream os(out);
  if (!os) throw shm::IoError("cannot open '" + out + "' for writing");
  shm::write_predictions(model, fs, os);
  os.flush();
  if (!os) throw shm::IoError("failed writing '" + out + "'");
  std::cout << "wrote " << fs.size() << " predictions to " << out << "\n";
  return kExitOk;
}

int cmd_hyperplanes(const std::string& model_path) {
  const shm::Model model = shm::load_model(model_path);
  const auto lines = shm::supporting_hyperplanes(model);
  std::cout << "index";
  for (std::size_t t = 0; t < model.output_dim; ++t) std::cout << ",A" << t + 1;
  std::cout << ",C\n";
  for (const auto& line : lines) {
    std::cout << line.support_index + 1;  // training points count from 1
    for (double a : line.normal) std::cout << "," << shm::format_double(a);
    std::cout << "," << shm::format_double(line.offset) << "\n";
  }
  return kExitOk;
}

int cmd_svd_report(const std::string& data, std::size_t samples, std::uint64_t seed) {
  const shm::TrainingSet ts = shm::load_dataset(data);
  const shm::GramProjector gp = shm::projector(ts.x);
  const shm::Matrix k = shm::kernel_matrix(ts.y, shm::KernelSpec::linear());
  const shm::ReducedProblem rp = shm::reduce(gp, ts.d, k);
  const shm::ConsistencyReport rep =
      shm::consistency_report(rp, gp, ts.d, k, samples, seed);

  std::cout << "svd-report\n";
  std::cout << "  rank " << rep.rank << "\n";
  std::cout << "  samples " << rep.samples << "\n";
  std::cout << "  seed " << rep.seed << "\n";
  std::cout << "  max-gap " << shm::format_double(rep.max_gap) << "\n";
  std::cout << "  mean-gap " << shm::format_double(rep.mean_gap) << "\n";
  std::cout << "  sign-convention largest-entry-positive\n";
  std::cout << "  status " << (rep.pass ? "PASS" : "FAIL") << "\n";
  if (rep.rank > 1 && !rep.pass)
    std::cout << "  note reduced and full objectives differ for rank > 1; the\n"
                 "       substitution keeps only the diagonal SVD terms\n";
  return kExitOk;
}

int cmd_verify_appendix() {
  const shm::VerifyReport rep = shm::verify_appendix();
  for (const shm::VerifyCheck& c : rep.checks)
    std::printf("%-4s %-55s delta %-12.3e tol %-9.0e\n", c.pass ? "ok" : "FAIL",
                c.name.c_str(), c.delta, c.tol);
  std::printf("train time %.3f s\n", rep.train_seconds);
  std::printf("%s\n", rep.pass ? "PASS" : "FAIL");
  return rep.pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"supporting hyperplane machine"};
  app.require_subcommand(1);

  std::string data, out, model_path;
  std::string kernel_text = "linear";
  std::string c_text = "inf";
  std::string qp_mode = "script";
  double ridge = 0.0;
  std::size_t samples = 200;
  std::uint64_t seed = 1;

  auto* train = app.add_subcommand("train", "fit a model on a CSV dataset");
  train->add_option("--data", data, "dataset CSV (x1..xm, y1..yZ, d)")->required();
  train->add_option("--kernel", kernel_text, "linear | poly:D:R | rbf:G");
  train->add_option("--c", c_text, "soft-margin bound, or inf for hard margin");
  train->add_option("--qp-mode", qp_mode, "script | kkt");
  train->add_option("--ridge", ridge, "covariance ridge (0 = auto)");
  train->add_option("--out", out, "model file to write")->required();

  auto* predict = app.add_subcommand("predict", "decision values for a dataset");
  predict->add_option("--model", model_path, "model file")->required();
  predict->add_option("--data", data, "dataset CSV (d column optional)")->required();
  predict->add_option("--out", out, "prediction CSV to write")->required();

  auto* hyper = app.add_subcommand("hyperplanes",
                                   "per-support-vector line coefficients as CSV");
  hyper->add_option("--model", model_path, "model file")->required();

  auto* svd = app.add_subcommand("svd-report",
                                 "reduced-vs-full dual objective consistency");
  svd->add_option("--data", data, "dataset CSV")->required();
  svd->add_option("--samples", samples, "number of random multiplier samples");
  svd->add_option("--seed", seed, "sampler seed");

  auto* verify = app.add_subcommand("verify-appendix",
                                    "replicate the built-in worked example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(train))
      return cmd_train(data, kernel_text, c_text, qp_mode, ridge, out);
    if (app.got_subcommand(predict)) return cmd_predict(model_path, data, out);
    if (app.got_subcommand(hyper)) return cmd_hyperplanes(model_path);
    if (app.got_subcommand(svd)) return cmd_svd_report(data, samples, seed);
    if (app.got_subcommand(verify)) return cmd_verify_appendix();
  } catch (const shm::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const shm::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const shm::BadLabel& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const shm::RaggedRow& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const shm::VersionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const shm::CorruptField& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const shm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
