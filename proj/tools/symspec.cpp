// symspec: page tables and verification reports for symplectic models.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "symspec/cli.hpp"

namespace cli = symspec::cli;

int main(int argc, char** argv) {
  CLI::App app{"Symplectic spectral sequence calculator"};
  app.require_subcommand(1);

  cli::RunConfig config;
  std::string format = "table";
  std::string suites;
  int max_page = -1;

  auto* models = app.add_subcommand("models", "Builtin models");
  models->add_subcommand("list", "List builtin model names");
  models->require_subcommand(1);

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", config.model_source, "Builtin model name or JSON model file")->required();
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));
  };

  auto* cohomology = app.add_subcommand("cohomology", "Betti numbers and powers of omega");
  add_model(cohomology);
  add_format(cohomology);

  auto* pages = app.add_subcommand("pages", "Dimension tables of the spectral sequence pages");
  add_model(pages);
  add_format(pages);
  pages->add_option("--max-page", max_page, "Last page to print (default n+1)")->check(CLI::NonNegativeNumber);

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  add_model(verify);
  add_format(verify);
  verify->add_option("--suites", suites, "Comma-separated: eq1,hodge-lepage,props,thm1,stab,harmonic,symmetry")
      ->required();

  auto* harmonic = app.add_subcommand("harmonic", "Decide harmonicity three ways");
  add_model(harmonic);
  add_format(harmonic);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsage;
  }

  if (models->parsed()) config.command = cli::Command::models;
  else if (cohomology->parsed()) config.command = cli::Command::cohomology;
  else if (pages->parsed()) config.command = cli::Command::pages;
  else if (verify->parsed()) config.command = cli::Command::verify;
  else config.command = cli::Command::harmonic;

  try {
    config.format = cli::parse_format(format);
    if (verify->parsed()) config.suites = cli::parse_suites(suites);
  } catch (const symspec::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return cli::kUsage;
  }
  if (max_page >= 0) config.max_page = max_page;

  cli::Outcome outcome = cli::execute(config);
  std::cout << outcome.out;
  std::cerr << outcome.err;
  return outcome.exit_code;
}
