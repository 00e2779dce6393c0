// torus-nls: command-line front end for the lab scenarios.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tnls/errors.hpp"
#include "tnls/lab/config.hpp"
#include "tnls/lab/scenarios.hpp"

namespace {

enum Exit { kPass = 0, kPropertyFailure = 1, kConfigError = 2, kNumericFailure = 3 };

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "experiment config file")->required();
  sub->add_option("--out", o.out, "output directory (default out/<scenario>)");
  sub->add_option("--seed", o.seed, "seed override");
  sub->add_option("--threads", o.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
}

int run(const std::string& scenario, const std::string& verb, const Options& o) {
  using namespace tnls;
  try {
    lab::Config cfg = lab::Config::load(o.config);
    if (verb.empty()) cfg.set("", "scenario", scenario);
    if (o.seed) cfg.set("", "seed", std::to_string(*o.seed));
    const std::string out = o.out.empty() ? "out/" + (verb.empty() ? scenario : "profiles_" + verb) : o.out;
    const lab::RunSummary s = lab::run_scenario(cfg, out, o.threads, verb);
    for (const auto& c : s.report["checks"]) {
      std::printf("%-4s %s: %s %s %s\n", c["passed"].get<bool>() ? "ok" : "FAIL",
                  c["name"].get<std::string>().c_str(), c["value"].dump().c_str(),
                  c["relation"].get<std::string>().c_str(), c["bound"].dump().c_str());
    }
    std::printf("%s -> %s (%.2f s)\n", s.passed ? "passed" : "failed", out.c_str(), s.seconds);
    return s.passed ? kPass : kPropertyFailure;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kConfigError;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "invalid request: %s\n", e.what());
    return kConfigError;
  } catch (const GeometryError& e) {
    std::fprintf(stderr, "geometry error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kNumericFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cubic NLS on rectangular 4-tori: experiments and diagnostics"};
  app.require_subcommand(1);
  Options opts;
  std::string chosen, verb;

  const char* scenarios[][2] = {
      {"evolve", ""},         {"trapping", ""},       {"strichartz", ""},
      {"bilinear", ""},       {"extinction", ""},     {"profile-suite", "profile_suite"},
      {"stability", ""},      {"blowup-probe", "blowup_probe"},
      {"ground-state", "ground_state"}, {"norms", ""},
  };
  for (auto& s : scenarios) {
    CLI::App* sub = app.add_subcommand(s[0], std::string("run the ") + s[0] + " scenario");
    if (*s[1]) sub->alias(s[1]);
    add_common(sub, opts);
    sub->callback([&chosen, name = std::string(s[0])] { chosen = name; });
  }
  CLI::App* profiles = app.add_subcommand("profiles", "profile constructions: make, extinction, kernel, extract");
  profiles->require_subcommand(1);
  for (const char* v : {"make", "extinction", "kernel", "extract"}) {
    CLI::App* sub = profiles->add_subcommand(v, std::string("profiles ") + v);
    add_common(sub, opts);
    sub->callback([&chosen, &verb, name = std::string(v)] {
      chosen = "profiles";
      verb = name;
    });
  }
  app.add_subcommand("schema", "print the config schema")->callback([] {
    std::cout << tnls::lab::schema_reference();
    std::exit(0);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }
  return run(chosen, verb, opts);
}
