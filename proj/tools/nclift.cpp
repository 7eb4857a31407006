#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nclift/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact toolkit for noncontextual polytopes and inequality lifting"};
  app.require_subcommand(1);

  nclift::cli::Options options;
  app.add_option("--cap-vertices", options.cap_vertices,
                 "Abort enumeration beyond this many vertices")
      ->capture_default_str();

  std::string file;
  std::string name;
  std::string certificate;

  auto* info = app.add_subcommand("info", "Summarize a scenario file");
  info->add_option("scenario", file, "Scenario JSON file")->required();

  auto* check = app.add_subcommand("check", "Validity and facet report for an inequality file");
  check->add_option("inequality", file, "Inequality JSON file")->required();
  check->add_flag("--saturating", options.list_saturating, "List saturating assignments");
  check->add_option("--emit-certificate", certificate,
                    "Write a saturating-basis certificate to this file");

  auto* lift = app.add_subcommand("lift", "Run a lift plan file");
  lift->add_option("plan", file, "Lift plan JSON file")->required();
  lift->add_flag("--verify", options.verify, "Re-check every emitted inequality");
  lift->add_option("--out-dir", options.out_dir, "Directory for emitted inequality files")
      ->capture_default_str();

  auto* reproduce = app.add_subcommand("reproduce", "Run a bundled demonstration pipeline");
  reproduce
      ->add_option("name", name,
                   "One of: chsh-antiheptagon, kcbs-c5-3out, fig2-caseII, fig1-gallery")
      ->required();

  auto* membership = app.add_subcommand("noncontextual", "Membership test for a correlation file");
  membership->add_option("correlation", file, "Correlation JSON file")->required();
  membership->add_option("--emit-certificate", certificate,
                         "Write the weights or separating inequality to this file");

  CLI11_PARSE(app, argc, argv);
  if (!certificate.empty()) options.certificate_path = certificate;

  try {
    nclift::Json report;
    if (info->parsed()) {
      report = nclift::cli::info(file, options);
    } else if (check->parsed()) {
      report = nclift::cli::check(file, options);
    } else if (lift->parsed()) {
      report = nclift::cli::lift(file, options);
    } else if (reproduce->parsed()) {
      report = nclift::cli::reproduce(name, options);
    } else {
      report = nclift::cli::noncontextual(file, options);
    }
    std::cout << report.dump(2) << '\n';
    return nclift::cli::exit_code(report);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
