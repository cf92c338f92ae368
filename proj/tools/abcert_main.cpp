#include <CLI11.hpp>

#include "abcert/cli.hpp"

using abcert::cli::RunConfig;

int main(int argc, char** argv) {
  CLI::App app{"exact-rational certificate verifier and abc-triple counter"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string command;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--jobs", cfg.jobs, "worker threads for leaf verification / enumeration")
        ->check(CLI::Range(1, 64));
    sub->add_option("--out", cfg.out_path, "write data to this file instead of stdout");
  };

  CLI::App* verify = app.add_subcommand("verify", "verify a certificate at an exact theta");
  verify->add_option("--cert", cfg.cert_path, "certificate file")->required();
  verify->add_option("--theta", cfg.theta, "target exponent as an exact fraction p/q")->required();
  verify->add_option("--format", cfg.format, "report format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  add_common(verify);
  verify->callback([&] { command = "verify"; });

  CLI::App* optimize = app.add_subcommand("optimize", "bisect the critical exponent");
  optimize->add_option("--cert", cfg.cert_path, "certificate file")->required();
  optimize->add_option("--lo", cfg.lo, "bracket low end (must fail)");
  optimize->add_option("--hi", cfg.hi, "bracket high end (must pass)");
  optimize->add_option("--tol", cfg.tol, "bracket width tolerance");
  optimize->add_flag("--per-leaf", cfg.per_leaf, "also bisect each leaf's threshold");
  add_common(optimize);
  optimize->callback([&] { command = "optimize"; });

  CLI::App* cover = app.add_subcommand("cover", "check the plane cover of the final subcases");
  cover->add_option("--theta", cfg.theta, "target exponent as an exact fraction p/q")->required();
  add_common(cover);
  cover->callback([&] { command = "cover"; });

  CLI::App* count = app.add_subcommand("count", "enumerate abc triples and count N_lambda(X)");
  count->add_option("--limit", cfg.limit, "upper bound X")->required();
  count->add_option("--lambda", cfg.lambda, "exponent lambda as an exact fraction p/q");
  count->add_option("--strategy", cfg.strategy, "exhaustive or filtered")
      ->check(CLI::IsMember({"exhaustive", "filtered"}));
  count->add_option("--format", cfg.format, "csv (triples) or json (count report)")
      ->check(CLI::IsMember({"csv", "json", "text"}));
  add_common(count);
  count->callback([&] { command = "count"; });

  CLI::App* stats = app.add_subcommand("stats", "dyadic exponent statistics of the triples");
  stats->add_option("--limit", cfg.limit, "upper bound X")->required();
  stats->add_option("--lambda", cfg.lambda, "exponent lambda as an exact fraction p/q");
  stats->add_option("--strategy", cfg.strategy, "exhaustive or filtered")
      ->check(CLI::IsMember({"exhaustive", "filtered"}));
  stats->add_option("--grid-width", cfg.grid_width, "dyadic cell width")
      ->check(CLI::PositiveNumber);
  add_common(stats);
  stats->callback([&] { command = "stats"; });

  CLI::App* selftest = app.add_subcommand("selftest", "run the invariant suites");
  selftest->add_flag("--quick", cfg.quick, "reduced sample sizes");
  selftest->add_option("--cert", cfg.cert_path, "also cross-check this certificate file");
  add_common(selftest);
  selftest->callback([&] { command = "selftest"; });

  CLI::App* emit = app.add_subcommand("emit-cert", "write the built-in certificate");
  add_common(emit);
  emit->callback([&] { command = "emit-cert"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : abcert::cli::kExitUsage;
  }

  try {
    if (command == "verify") return abcert::cli::cmd_verify(cfg);
    if (command == "optimize") return abcert::cli::cmd_optimize(cfg);
    if (command == "cover") return abcert::cli::cmd_cover(cfg);
    if (command == "count") return abcert::cli::cmd_count(cfg);
    if (command == "stats") return abcert::cli::cmd_count(cfg, /*stats_only=*/true);
    if (command == "selftest") return abcert::cli::cmd_selftest(cfg);
    if (command == "emit-cert") return abcert::cli::cmd_emit_cert(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return abcert::cli::kExitUsage;
  }
  return abcert::cli::kExitUsage;
}
