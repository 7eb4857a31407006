#pragma once

#include <optional>
#include <string>

#include "nclift/io.hpp"

namespace nclift::cli {

struct Options {
  std::size_t cap_vertices = default_vertex_cap;
  std::optional<std::string> certificate_path;
  bool verify = false;            // lift: re-check every emitted inequality
  bool list_saturating = false;   // check: include saturating assignments
  std::string out_dir = ".";      // lift: where output inequalities go
};

/// Scenario summary: contexts, dimensions, vertex count, induced cycle.
Json info(const std::string& scenario_file, const Options& options);

/// Validity / saturation / facet report for an inequality file.
Json check(const std::string& inequality_file, const Options& options);

/// Runs a lift plan, writing one inequality file per terminal choice branch.
Json lift(const std::string& plan_file, const Options& options);

/// Canned demonstration pipelines with per-assertion pass/fail reporting.
/// Names: chsh-antiheptagon, kcbs-c5-3out, fig2-caseII, fig1-gallery.
Json reproduce(const std::string& name, const Options& options);

/// Membership test for a correlation file, with certificate.
Json noncontextual(const std::string& correlation_file, const Options& options);

/// 0 when the report carries no failed assertion, 1 otherwise.
int exit_code(const Json& report);

}  // namespace nclift::cli
