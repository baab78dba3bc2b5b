// Command line driver: parse a model, run its reduction script, check fixtures, emit a report.
#include <CLI11.hpp>
#include <iostream>
#include <vector>

#include "cartan/errors.hpp"
#include "cartan/model_file.hpp"
#include "cartan/report.hpp"

namespace {

enum Exit { ok = 0, parse_failure = 1, pipeline_failure = 2, fixture_mismatch = 3 };

struct Options {
  std::string model;
  bool check = false;
  std::string emit = "text";
  std::string stage;
  bool list_stages = false;
};

void add_options(CLI::App& app, Options& o) {
  app.add_option("--model,model", o.model, "model file");
  app.add_flag("--check-fixtures", o.check, "compare computed tables against the model's fixtures");
  app.add_option("--emit", o.emit, "report format")->check(CLI::IsMember({"text", "machine", "latex"}));
  app.add_option("--stage", o.stage, "stop after absorbing this stage and dump the transcript so far");
  app.add_flag("--list-stages", o.list_stages, "print the stage names of the script and exit");
}

int run(const Options& o) {
  using namespace cartan;
  if (o.model.empty()) {
    std::cerr << "cartan: no model file given\n";
    return parse_failure;
  }
  ModelFile m;
  try {
    m = load_model(o.model);
  } catch (const ParseError& e) {
    std::cerr << "cartan: " << e.what() << "\n";
    return parse_failure;
  }
  if (o.list_stages) {
    for (const auto& s : m.stage_names) std::cout << s << "\n";
    return ok;
  }
  if (!o.stage.empty()) {
    bool known = false;
    for (const auto& s : m.stage_names) known |= s == o.stage;
    if (!known) {
      std::cerr << "cartan: unknown stage '" << o.stage << "'\n";
      return parse_failure;
    }
  }
  Transcript t = run_pipeline(m.input, o.stage);
  const bool failed = !t.error.empty();
  const Report r = make_report(m, std::move(t), o.check);
  std::cout << emit(r, parse_format(o.emit));
  if (failed) {
    std::cerr << "cartan: " << o.model << ": script line " << r.transcript->failed_line << ": " << r.transcript->error
              << "\n";
    return pipeline_failure;
  }
  if (o.check && o.stage.empty() && r.count(Verdict::fail) > 0) return fixture_mismatch;
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cartan equivalence method for CR model manifolds"};
  Options o;
  add_options(app, o);
  // "cartan run MODEL ..." and "cartan MODEL ..." are the same command.
  std::vector<char*> args(argv, argv + argc);
  if (args.size() > 1 && std::string(args[1]) == "run") args.erase(args.begin() + 1);
  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : parse_failure;
  }
  return run(o);
}
