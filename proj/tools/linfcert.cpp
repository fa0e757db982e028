#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "linf/cli.hpp"

namespace {

void add_common(CLI::App* sub, linf::cli::RunOptions& opt, std::string& config, std::string& out,
                std::uint64_t& seed, linf::Index& budget, std::string& space) {
  sub->add_option("--config", config, "run configuration (JSON)");
  sub->add_option("--seed", seed, "seed for randomized samples (overrides the config)");
  sub->add_option("--out", out, "report path (default: stdout)");
  sub->add_option("--budget", budget, "witness and classification scan budget");
  sub->add_option("--space", space, "space spec, e.g. fdlp:dim=2,p=2");
  sub->callback([sub, &opt] { opt.command = sub->get_name(); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified isometric embeddings into l-infinity avoiding c"};
  app.set_version_flag("--version", LINF_VERSION);
  app.require_subcommand(1);

  linf::cli::RunOptions opt;
  std::string config, out, space;
  std::uint64_t seed = 0;
  linf::Index budget = 0;

  add_common(app.add_subcommand("embed", "interleaved embedding certificates"), opt, config, out,
             seed, budget, space);
  add_common(app.add_subcommand("extend", "extension of a subspace D avoiding D + c"), opt, config,
             out, seed, budget, space);
  auto* classify = app.add_subcommand("classify", "three-valued membership in c");
  add_common(classify, opt, config, out, seed, budget, space);
  classify->add_option("--seq", opt.sequences, "sequence spec, e.g. periodic:-1,1");
  add_common(app.add_subcommand("suite", "every certificate for a configuration"), opt, config,
             out, seed, budget, space);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : linf::cli::kExitConfig;
  }

  for (auto* sub : app.get_subcommands()) {
    if (sub->count("--config")) opt.config = config;
    if (sub->count("--seed")) opt.seed = seed;
    if (sub->count("--budget")) opt.budget = budget;
    if (sub->count("--space")) opt.space = space;
  }

  try {
    const auto result = linf::cli::run(opt);
    std::ostream& table = out.empty() ? std::cerr : std::cout;
    for (const auto& line : result.summary) table << line << '\n';
    const std::string text = result.report.dump(2) + "\n";
    if (out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out);
      if (!f) throw linf::Error(linf::ErrorKind::IOError, "cannot write report '" + out + "'");
      f << text;
    }
    return result.exit_code;
  } catch (const linf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return linf::cli::kExitConfig;
  }
}
