// umbilic: verify curvature identities of totally umbilical hypersurfaces,
// estimate holonomy, and search for umbilical hypersurfaces on the catalogue
// of explicit charts.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "umb/report.hpp"
#include "umb/search.hpp"
#include "umb/suites.hpp"
#include "umb/zoo.hpp"

namespace {

struct GlobalOpts {
  int samples = 50;
  std::uint64_t seed = 1;
  double tolerance = -1.0;  // < 0: per-identity defaults
  std::string out;
  std::string format = "markdown";
  bool serial = false;
};

umb::SuiteOptions to_suite_options(const GlobalOpts& g,
                                   const std::map<std::string, double>& file_overrides) {
  umb::SuiteOptions opt;
  opt.samples = static_cast<std::size_t>(g.samples);
  opt.seed = g.seed;
  opt.exec = g.serial ? umb::Exec::Serial : umb::Exec::Parallel;
  opt.tolerance_overrides = file_overrides;
  if (g.tolerance > 0) opt.tolerance_overrides["*"] = g.tolerance;
  return opt;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw umb::DomainError("cannot open output path: " + out_path);
  os << text;
}

void emit_report(const umb::VerificationReport& rep, const GlobalOpts& g) {
  std::string text;
  if (g.format == "json")
    text = umb::to_json(rep).dump(2) + "\n";
  else if (g.format == "markdown")
    text = umb::to_markdown(rep);
  else
    text = umb::to_json(rep).dump(2) + "\n\n" + umb::to_markdown(rep);
  emit(text, g.out);
}

/// Accepts either a catalogue expression or a path to a JSON spec file.
struct LoadedManifold {
  umb::zoo::SpecPtr spec;
  std::map<std::string, double> tolerance_overrides;
  int sample_count = -1;
  std::uint64_t seed = 0;
  bool has_file_env = false;
};

LoadedManifold load_manifold(const std::string& arg) {
  LoadedManifold out;
  if (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json") {
    if (!std::filesystem::exists(arg))
      throw umb::DomainError("spec file not found: " + arg);
    const umb::zoo::SpecFile f = umb::zoo::load_spec_file(arg);
    out.spec = f.spec;
    out.tolerance_overrides = f.tolerance_overrides;
    out.sample_count = f.sample_count;
    out.seed = f.seed;
    out.has_file_env = true;
    return out;
  }
  out.spec = umb::zoo::build_from_string(arg);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coordinate-chart verification of umbilical hypersurface identities"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOpts g;
  app.add_option("--samples", g.samples, "sample points per sweep (default 50)");
  app.add_option("--seed", g.seed, "deterministic sample/loop seed (default 1)");
  app.add_option("--tolerance", g.tolerance,
                 "global tolerance override applied to every identity");
  app.add_option("--out", g.out, "write the report to this path instead of stdout");
  app.add_option("--format", g.format, "json | markdown | both (default markdown)")
      ->check(CLI::IsMember({"json", "markdown", "both"}));
  app.add_flag("--serial", g.serial, "disable the OpenMP sweep kernels");

  std::string manifold_arg;
  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "run residual suites over a manifold");
  verify->add_option("manifold", manifold_arg, "catalogue expression or spec file")
      ->required();
  verify->add_option("--suite", suite, "fundamental | killing | cone | all")
      ->check(CLI::IsMember({"fundamental", "killing", "cone", "all"}));

  std::string hol_manifold;
  int degree = 2;
  auto* hol = app.add_subcommand("holonomy", "estimate the holonomy algebra and fixed forms");
  hol->add_option("manifold", hol_manifold, "catalogue expression or spec file")->required();
  hol->add_option("--degree", degree, "fixed-form degree to scan (default 2)");

  std::string search_config_path;
  auto* search = app.add_subcommand("search", "derivative-free umbilic search from a config");
  search->add_option("config", search_config_path, "search configuration (JSON)")->required();

  auto* listz = app.add_subcommand("list-zoo", "list catalogue entries");

  CLI11_PARSE(app, argc, argv);

  try {
    if (listz->parsed()) {
      for (const std::string& name : umb::zoo::names()) std::cout << name << "\n";
      for (const std::string& name : umb::family_names())
        std::cout << "family: " << name << "\n";
      return 0;
    }

    if (verify->parsed()) {
      const LoadedManifold lm = load_manifold(manifold_arg);
      GlobalOpts eff = g;
      if (lm.has_file_env) {
        // explicit command-line flags win over the spec file's environment
        if (lm.sample_count > 0 && app.count("--samples") == 0) eff.samples = lm.sample_count;
        if (app.count("--seed") == 0 && lm.seed != 0) eff.seed = lm.seed;
      }
      const umb::SuiteOptions opt = to_suite_options(eff, lm.tolerance_overrides);
      umb::VerificationReport rep;
      if (suite == "fundamental")
        rep = umb::fundamental_suite(*lm.spec, opt);
      else if (suite == "killing")
        rep = umb::killing_suite(*lm.spec, opt);
      else if (suite == "cone")
        rep = umb::cone_suite(*lm.spec, opt);
      else
        rep = umb::all_suites(*lm.spec, opt);
      emit_report(rep, eff);
      return rep.exit_code();
    }

    if (hol->parsed()) {
      const LoadedManifold lm = load_manifold(hol_manifold);
      const umb::SuiteOptions opt = to_suite_options(g, lm.tolerance_overrides);
      const umb::VerificationReport rep = umb::holonomy_report(*lm.spec, degree, opt);
      emit_report(rep, g);
      return rep.exit_code();
    }

    if (search->parsed()) {
      const umb::SearchConfig cfg = umb::load_search_config(search_config_path);
      const umb::HypersurfaceFamily family = umb::make_family(cfg.family, cfg.param_dim);
      const umb::SearchResult result =
          umb::optimize(family, cfg.opt, g.serial ? umb::Exec::Serial : umb::Exec::Parallel);
      std::string text;
      if (g.format == "json")
        text = umb::search_result_json(cfg, result).dump(2) + "\n";
      else if (g.format == "markdown")
        text = umb::search_result_markdown(cfg, result);
      else
        text = umb::search_result_json(cfg, result).dump(2) + "\n\n" +
               umb::search_result_markdown(cfg, result);
      emit(text, g.out);
      // searches report outcomes, not pass/fail; exploratory probes always
      // exit 0, positive controls exit 1 when they fail to converge
      if (cfg.exploratory) return 0;
      return result.verdict == "converged_to_umbilical" ? 0 : 1;
    }
  } catch (const umb::UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 3;
  } catch (const umb::PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const umb::DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
