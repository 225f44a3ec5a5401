#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gdm/pipeline.hpp"
#include "gdm/reference.hpp"

namespace {

enum Exit { kOk = 0, kDomain = 1, kValidation = 2, kIo = 3 };

struct Inputs {
  std::string session;  // "-" reads stdin
  std::vector<std::string> round_csv;
};

struct Overrides {
  std::optional<double> eta;
  std::optional<double> alpha;
  bool normalize_rows = false;
};

void print_issues(const std::vector<gdm::Issue>& issues, const char* prefix) {
  for (const auto& i : issues) std::cerr << prefix << gdm::describe(i) << "\n";
}

gdm::ValidatedSession read_inputs(const Inputs& in) {
  gdm::ValidatedSession v = in.session == "-" ? gdm::load_session(std::cin) : gdm::load_session(in.session);
  for (const auto& path : in.round_csv) {
    const int index = static_cast<int>(v.session.rounds.size()) + 1;
    v.session.rounds.push_back(gdm::round_from_csv(std::filesystem::path(path), v.session, index, &v.warnings));
  }
  return v;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary | std::ios::trunc);
  if (!f || !(f << text) || !f.flush()) throw gdm::IoError("cannot write " + out);
}

std::string render(const gdm::DecisionReport& r, const std::string& format) {
  return format == "json" ? gdm::canonical_report(r) : gdm::render_report_table(r);
}

int cmd_validate(const Inputs& in) {
  const auto v = read_inputs(in);
  print_issues(v.warnings, "warning: ");
  std::cout << "valid: " << v.session.experts.size() << " experts, " << v.session.alternatives.size()
            << " alternatives, " << v.session.rounds.size() << " rounds, status "
            << gdm::to_string(v.session.status) << "\n";
  return kOk;
}

int cmd_run(const Inputs& in, const Overrides& o, const std::string& format, const std::string& out) {
  auto v = read_inputs(in);
  if (o.eta) v.session.eta = *o.eta;
  if (o.alpha) v.session.alpha = *o.alpha;
  const auto report = gdm::run_pipeline(v.session, {.normalize_rows = o.normalize_rows});
  print_issues(report.warnings, "warning: ");
  emit(render(report, format), out);
  return kOk;
}

int cmd_report(const std::string& path, const std::string& format, const std::string& out) {
  const auto report = gdm::load_report(path);
  emit(render(report, format), out);
  return kOk;
}

int cmd_reproduce(const Overrides& o, const std::string& format, const std::string& out) {
  gdm::Session s = gdm::reference::example_session();
  if (o.eta) s.eta = *o.eta;
  if (o.alpha) s.alpha = *o.alpha;
  const auto report = gdm::run_pipeline(s, {.normalize_rows = o.normalize_rows});
  const auto rows = gdm::reference::reproduction_rows(report);
  std::size_t passed = 0;
  for (const auto& r : rows) passed += r.pass ? 1 : 0;

  if (format == "json") {
    gdm::Json doc{{"eta", s.eta}, {"alpha", s.alpha}, {"normalize_rows", o.normalize_rows}};
    gdm::Json list = gdm::Json::array();
    for (const auto& r : rows) {
      gdm::Json item{{"name", r.name}, {"pass", r.pass}};
      if (!r.printed.empty()) {
        item["printed"] = r.printed;
        gdm::Json computed = gdm::Json::array();
        for (double x : r.computed) computed.push_back(gdm::round12(x));
        item["computed"] = std::move(computed);
        item["tolerance"] = r.tolerance;
      }
      if (!r.detail.empty()) item["detail"] = r.detail;
      list.push_back(std::move(item));
    }
    doc["rows"] = std::move(list);
    doc["ledger_entries"] = report.discrepancies.size();
    emit(doc.dump(2) + "\n", out);
    return kOk;
  }

  std::ostringstream text;
  char line[256];
  std::snprintf(line, sizeof line, "Reference example (eta=%g, alpha=%g, normalize_rows=%s)\n\n", s.eta, s.alpha,
                o.normalize_rows ? "yes" : "no");
  text << line;
  for (const auto& r : rows) {
    text << (r.pass ? "  match  " : "  differ ") << r.name;
    if (!r.printed.empty()) {
      text << "\n           printed ";
      for (double x : r.printed) {
        std::snprintf(line, sizeof line, " %.3f", x);
        text << line;
      }
      text << "\n           computed";
      for (double x : r.computed) {
        std::snprintf(line, sizeof line, " %.3f", x);
        text << line;
      }
      std::snprintf(line, sizeof line, "  (tolerance %g)", r.tolerance);
      text << line;
    }
    if (!r.detail.empty()) text << "\n           " << r.detail;
    text << "\n";
  }
  text << "\n" << passed << "/" << rows.size() << " comparisons match; " << report.discrepancies.size()
       << " ledger entries explain the published discrepancies\n";
  emit(text.str(), out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group decision making over two-dimensional uncertain linguistic evaluations"};
  app.require_subcommand(1);

  Inputs inputs;
  Overrides overrides;
  std::string format = "table";
  std::string out;
  std::string report_path;

  auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("--session", inputs.session, "Session JSON file, or - for stdin")->required();
    sub->add_option("--round-csv", inputs.round_csv, "Append a round from CSV (expert,alternative,a,b,c,d)");
  };
  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--eta", overrides.eta, "Weight of the uncertainty-based expert weights, in [0, 1]");
    sub->add_option("--alpha", overrides.alpha, "Aggregation exponent, nonzero");
    sub->add_flag("--normalize-rows", overrides.normalize_rows, "Normalize expectation rows before fitting");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "table"}));
    sub->add_option("--out", out, "Write output to a file instead of stdout");
  };

  auto* validate = app.add_subcommand("validate", "Check a session document and any extra rounds");
  add_inputs(validate);
  auto* run = app.add_subcommand("run", "Run the decision pipeline and print the report");
  add_inputs(run);
  add_overrides(run);
  add_output(run);
  auto* report = app.add_subcommand("report", "Render a saved report");
  report->add_option("--report", report_path, "Report JSON file")->required();
  add_output(report);
  auto* reproduce = app.add_subcommand("reproduce-paper", "Compare the bundled example against its published tables");
  add_overrides(reproduce);
  add_output(reproduce);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (*validate) return cmd_validate(inputs);
    if (*run) return cmd_run(inputs, overrides, format, out);
    if (*report) return cmd_report(report_path, format, out);
    return cmd_reproduce(overrides, format, out);
  } catch (const gdm::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    print_issues(e.issues(), "  ");
    return kValidation;
  } catch (const gdm::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const gdm::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const gdm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  }
}
