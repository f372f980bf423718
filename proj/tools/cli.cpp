// Copyright 2026 The rulegrid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rulegrid/batch.hpp"
#include "rulegrid/client.hpp"
#include "rulegrid/engine.hpp"
#include "rulegrid/eval.hpp"
#include "rulegrid/level_io.hpp"
#include "rulegrid/levelgen.hpp"
#include "rulegrid/plan.hpp"
#include "rulegrid/render.hpp"
#include "rulegrid/report.hpp"
#include "rulegrid/solver.hpp"

namespace rulegrid::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public Error {
 public:
  using Error::Error;
};

// Values that may come from --config; explicit flags override them.
struct Settings {
  GenConfig gen;
  SearchLimits limits;
  std::string render_config;
  std::string endpoint_config;
  int verbosity = 1;
};

template <typename T>
void take(const json& obj, const char* key, T& slot) {
  if (obj.contains(key)) slot = obj.at(key).get<T>();
}

Settings load_settings(const std::string& path) {
  Settings s;
  if (path.empty()) return s;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in);
    for (const auto& [key, value] : doc.items()) {
      if (key == "generator") {
        for (const auto& [k, v] : value.items()) {
          if (k != "width" && k != "height" && k != "max_attempts" && k != "max_states") {
            throw UsageError("config: unknown key generator." + k);
          }
        }
        take(value, "width", s.gen.width);
        take(value, "height", s.gen.height);
        take(value, "max_attempts", s.gen.max_attempts);
        take(value, "max_states", s.gen.limits.max_states);
      } else if (key == "solver") {
        for (const auto& [k, v] : value.items()) {
          if (k != "max_states" && k != "max_depth") {
            throw UsageError("config: unknown key solver." + k);
          }
        }
        take(value, "max_states", s.limits.max_states);
        take(value, "max_depth", s.limits.max_depth);
      } else if (key == "render_config") {
        s.render_config = value.get<std::string>();
      } else if (key == "endpoint_config") {
        s.endpoint_config = value.get<std::string>();
      } else if (key == "verbosity") {
        s.verbosity = value.get<int>();
      } else {
        throw UsageError("config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
  return s;
}

std::string find_config_flag(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.starts_with("--config=")) return a.substr(9);
  }
  return {};
}

EnvFamily family_or_throw(const std::string& name) {
  const auto f = parse_env_family(name);
  if (!f) {
    std::string known;
    for (EnvFamily k : all_families()) known += " " + to_string(k);
    throw UsageError("unknown family '" + name + "'; known:" + known);
  }
  return *f;
}

std::vector<EnvFamily> families_or_throw(const std::string& list) {
  std::vector<EnvFamily> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(family_or_throw(item));
  }
  if (out.empty()) throw UsageError("empty family list");
  return out;
}

std::vector<std::uint64_t> seeds_or_throw(const std::string& list) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad seed '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("empty seed list");
  return out;
}

LevelFile load_level(const std::string& path) {
  if (!fs::is_regular_file(path)) throw UsageError("no such level file: " + path);
  try {
    return read_level_file(path);
  } catch (const LevelFormatError& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const IllegalOverlapError& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const OutOfBoundsError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

RenderConfig load_render_config(const std::string& path) {
  if (path.empty()) return RenderConfig{};
  return read_render_config(path);
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string file_safe(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.' && c != '_') {
      c = '_';
    }
  }
  return s;
}

std::optional<Action> key_action(std::istream& in, int c) {
  switch (c) {
    case 'U': case 'w': case 'k': return Action::kUp;
    case 'D': case 's': case 'j': return Action::kDown;
    case 'L': case 'a': case 'h': return Action::kLeft;
    case 'R': case 'd': case 'l': return Action::kRight;
    case 0x1b: {
      // Arrow keys arrive as ESC [ A..D.
      if (in.peek() != '[') return std::nullopt;
      in.get();
      switch (in.get()) {
        case 'A': return Action::kUp;
        case 'B': return Action::kDown;
        case 'C': return Action::kRight;
        case 'D': return Action::kLeft;
        default: return std::nullopt;
      }
    }
    default:
      return std::nullopt;
  }
}

int cmd_generate(const Settings& s, const std::string& family_name,
                 std::uint64_t seed, int count, const std::string& out_dir,
                 bool previews, std::ostream& out) {
  const EnvFamily family = family_or_throw(family_name);
  if (count < 0) throw UsageError("--count must be >= 0");
  const RenderConfig render = load_render_config(s.render_config);
  fs::create_directories(out_dir);

  std::vector<GenerationRequest> requests;
  for (int i = 0; i < count; ++i) requests.push_back({family, seed + static_cast<std::uint64_t>(i)});
  const std::vector<LevelSpec> levels = generate_all(requests, s.gen, Execution::kParallel);

  json manifest = {{"generator_version", kGeneratorVersion},
                   {"family", to_string(family)},
                   {"base_seed", seed},
                   {"count", count},
                   {"width", s.gen.width},
                   {"height", s.gen.height},
                   {"levels", json::array()}};
  for (const LevelSpec& level : levels) {
    const std::string stem = to_string(family) + "-" + std::to_string(level.seed);
    write_level_file(fs::path(out_dir) / (stem + ".level"), to_level_file(level));
    if (previews) {
      write_bytes(fs::path(out_dir) / (stem + ".png"), render_png(level.grid, render));
      write_text(fs::path(out_dir) / (stem + ".txt"), render_ascii(level.grid, render));
    }
    manifest["levels"].push_back(
        {{"file", stem + ".level"}, {"seed", level.seed}, {"gold", format_plan(level.gold)}});
    out << stem << ".level  " << format_plan(level.gold) << "\n";
  }
  write_text(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
  return kOk;
}

int cmd_solve(const Settings& s, const std::string& path, std::ostream& out) {
  const LevelFile file = load_level(path);
  if (game_status(file.grid) == GameStatus::kWon) {
    throw UsageError(path + ": level is already won");
  }
  const SolveResult r = solve(file.grid, s.limits);
  switch (r.status) {
    case SolveStatus::kSolved:
      out << format_plan(r.solution->plan) << "\n";
      out << "actions: " << format_actions(r.solution->actions) << "\n";
      out << "states: " << r.states_expanded << "\n";
      return kOk;
    case SolveStatus::kUnsolvable:
      out << "UNSOLVABLE\n";
      return kNegative;
    case SolveStatus::kLimitExceeded:
      out << "LIMIT_EXCEEDED\n";
      return kLimit;
  }
  return kFailure;
}

int cmd_validate(const Settings& s, const std::string& path,
                 const std::string& plan_text, std::ostream& out) {
  const LevelFile file = load_level(path);
  std::string text = plan_text;
  if (text.empty()) {
    if (!file.gold) throw UsageError("no --plan given and the level has no gold plan");
    text = *file.gold;
  }
  Plan plan = [&] {
    try {
      return parse_plan(text);
    } catch (const Error& e) {
      throw UsageError(std::string("plan: ") + e.what());
    }
  }();
  if (game_status(file.grid) == GameStatus::kWon) {
    throw UsageError(path + ": level is already won");
  }
  const Validation v = validate_plan(file.grid, plan, s.limits);
  if (v.valid) {
    out << "VALID\n";
    out << "witness: " << format_actions(v.witness) << "\n";
    return kOk;
  }
  out << "INVALID (" << to_string(v.reason) << ")\n";
  return v.reason == Validation::Reason::kLimitExceeded ? kLimit : kNegative;
}

struct EvalFlags {
  std::string endpoint;
  std::string test_family;
  std::string in_context;
  int examples = 10;
  int samples = 5;
  std::string seeds = "0,1,2,3,4";
  int parallelism = 1;
  std::string out_dir = "runs";
  std::string template_path;
};

int cmd_eval(const Settings& s, const EvalFlags& f, std::ostream& out,
             std::ostream& err) {
  const auto read_endpoint = [](const std::string& path) {
    try {
      return read_endpoint_config(path);
    } catch (const Error& e) {
      throw UsageError(path + ": " + e.what());
    }
  };
  ModelEndpoint endpoint;
  if (!s.endpoint_config.empty()) {
    endpoint = read_endpoint(s.endpoint_config);
  } else if (const auto builtin = builtin_endpoint(f.endpoint)) {
    endpoint = *builtin;
  } else if (!f.endpoint.empty() && fs::exists(f.endpoint)) {
    endpoint = read_endpoint(f.endpoint);
  } else {
    throw UsageError("--endpoint must be mock-oracle, mock-random or a config file");
  }
  const int verbosity = s.verbosity;
  LogFn log = [&err, verbosity](std::string_view m) {
    if (verbosity > 0) err << "rulegrid: " << m << "\n";
  };
  // Credentials are checked before any generation work.
  std::unique_ptr<ModelClient> client = make_client(endpoint, log);

  Protocol protocol;
  protocol.test_family = family_or_throw(f.test_family);
  protocol.in_context_families =
      f.in_context.empty() ? std::vector<EnvFamily>{protocol.test_family}
                           : families_or_throw(f.in_context);
  protocol.n_examples = f.examples;
  protocol.samples = f.samples;
  protocol.seeds = seeds_or_throw(f.seeds);
  protocol.parallelism = f.parallelism;
  if (protocol.n_examples < 1 || protocol.samples < 1 || protocol.parallelism < 1) {
    throw UsageError("--examples, --samples and --parallelism must be >= 1");
  }

  EvalOptions options;
  options.gen = s.gen;
  options.render = load_render_config(s.render_config);
  if (!f.template_path.empty()) {
    std::ifstream in(f.template_path, std::ios::binary);
    if (!in) throw UsageError("cannot open template " + f.template_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    options.prompt_template = buf.str();
  }
  const PromptTemplate tmpl = parse_prompt_template(options.prompt_template);

  fs::create_directories(f.out_dir);
  const std::string stem =
      file_safe(endpoint.display_name()) + "__" + to_string(protocol.test_family);
  const fs::path records_path = fs::path(f.out_dir) / (stem + ".jsonl");
  fs::remove(records_path);

  json in_context = json::array();
  for (EnvFamily fam : protocol.in_context_families) in_context.push_back(to_string(fam));
  const json manifest = {
      {"generator_version", kGeneratorVersion},
      {"template_hash", tmpl.hash},
      {"endpoint", json::parse(format_endpoint_config(endpoint))},
      {"protocol",
       {{"in_context_families", in_context},
        {"test_family", to_string(protocol.test_family)},
        {"n_examples", protocol.n_examples},
        {"samples", protocol.samples},
        {"seeds", protocol.seeds},
        {"parallelism", protocol.parallelism}}},
      {"generator", {{"width", s.gen.width}, {"height", s.gen.height}}},
      {"render", json::parse(format_render_config(options.render))},
      {"records", records_path.filename().string()}};
  write_text(fs::path(f.out_dir) / (stem + ".manifest.json"), manifest.dump(2) + "\n");

  RecordSink sink(records_path);
  const std::vector<EvalRecord> records = evaluate(*client, endpoint, protocol, options, sink);
  const EvalReport report = aggregate(records);
  out << render_report(report, ReportFormat::kTable);
  if (verbosity > 0) err << "rulegrid: records in " << records_path.string() << "\n";
  return kOk;
}

int cmd_report(const std::string& in_path, const std::string& format_name,
               const std::string& group_name, std::ostream& out) {
  const auto format = parse_report_format(format_name);
  if (!format) throw UsageError("--format must be table, csv, json or latex");
  const auto group = parse_group_by(group_name);
  if (!group) throw UsageError("--group-by must be model or model-family");
  if (!fs::exists(in_path)) throw UsageError("no such file or directory: " + in_path);
  const std::vector<EvalRecord> records = read_records(in_path);
  if (records.empty()) throw UsageError("no records found in " + in_path);
  out << render_report(aggregate(records, *group), *format);
  return kOk;
}

int cmd_play(const Settings& s, const std::string& path, std::istream& in,
             std::ostream& out) {
  const LevelFile file = load_level(path);
  const RenderConfig render = load_render_config(s.render_config);
  GridState grid = file.grid;
  std::vector<RuleEvent> trace;
  int steps = 0;
  out << render_ascii(grid, render);
  if (game_status(grid) == GameStatus::kWon) {
    out << "WON\n";
    return kOk;
  }
  int c;
  while ((c = in.get()) != std::char_traits<char>::eof()) {
    if (c == 'q' || c == 'Q') {
      out << "quit\n";
      return kOk;
    }
    const auto action = key_action(in, c);
    if (!action) continue;
    const PropertyTable table = property_table(grid);
    const bool controllable = std::any_of(
        grid.entities().begin(), grid.entities().end(), [&](const Entity& e) {
          return e.kind.is_object() && table.has(e.kind.object(), PropertyKind::kYou);
        });
    if (!controllable) {
      out << "no controllable object\n";
      continue;
    }
    StepResult r = step(grid, *action, steps++);
    grid = std::move(r.next);
    out << to_string(*action) << "\n" << render_ascii(grid, render);
    for (const RuleEvent& e : r.events) {
      out << to_string(e) << "\n";
      trace.push_back(e);
    }
    if (r.status == GameStatus::kWon) {
      out << "WON\n";
      out << "plan: " << format_plan(lift_trace(trace, *winning_object_kind(grid))) << "\n";
      return kOk;
    }
  }
  return kOk;
}

int cmd_render(const Settings& s, const std::string& path,
               const std::string& png_path, bool ascii, std::ostream& out) {
  const LevelFile file = load_level(path);
  const RenderConfig render = load_render_config(s.render_config);
  if (!png_path.empty()) write_bytes(png_path, render_png(file.grid, render));
  if (ascii || png_path.empty()) out << render_ascii(file.grid, render);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"rulegrid: rule-manipulation grid puzzles, solver and evaluation harness"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  int verbose = 0;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON settings file (docs/cli.md)");
  app.add_flag("-v,--verbose", verbose, "More logging");
  app.add_flag("-q,--quiet", quiet, "Less logging");

  Settings s;
  try {
    s = load_settings(find_config_flag(argc, argv));
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  std::optional<int> width, height, max_attempts, max_depth;
  std::optional<std::size_t> max_states;
  std::string render_config;
  const auto add_limits = [&](CLI::App* sub) {
    sub->add_option("--max-states", max_states, "Solver state budget");
    sub->add_option("--max-depth", max_depth, "Solver depth budget");
  };
  const auto add_gen = [&](CLI::App* sub) {
    sub->add_option("--width", width, "Grid width");
    sub->add_option("--height", height, "Grid height");
    sub->add_option("--max-attempts", max_attempts, "Re-roll budget per level");
  };
  const auto add_render = [&](CLI::App* sub) {
    sub->add_option("--render-config", render_config, "Palette JSON file");
  };

  std::string family;
  std::uint64_t seed = 0;
  int count = 1;
  std::string out_dir = "levels";
  bool no_previews = false;
  auto* gen = app.add_subcommand("generate", "Generate levels of one family");
  gen->add_option("--family", family, "Family name")->required();
  gen->add_option("--seed", seed, "First seed; level i uses seed + i");
  gen->add_option("--count", count, "Number of levels");
  gen->add_option("--out", out_dir, "Output directory");
  gen->add_flag("--no-previews", no_previews, "Skip PNG and ASCII previews");
  add_gen(gen);
  add_render(gen);

  std::string level_path;
  auto* solve_cmd = app.add_subcommand("solve", "Print the gold plan of a level");
  solve_cmd->add_option("level", level_path, "Level file")->required();
  add_limits(solve_cmd);

  std::string plan_text;
  auto* validate_cmd = app.add_subcommand("validate", "Check a plan against a level");
  validate_cmd->add_option("level", level_path, "Level file")->required();
  validate_cmd->add_option("--plan", plan_text, "Plan text (default: the file's gold)");
  add_limits(validate_cmd);

  EvalFlags ef;
  std::string endpoint_config;
  auto* eval_cmd = app.add_subcommand("eval", "Run the evaluation protocol");
  eval_cmd->add_option("--endpoint", ef.endpoint, "mock-oracle, mock-random or a config file");
  eval_cmd->add_option("--endpoint-config", endpoint_config, "Endpoint JSON file");
  eval_cmd->add_option("--test-family", ef.test_family, "Test family")->required();
  eval_cmd->add_option("--in-context", ef.in_context,
                       "Comma-separated in-context families (default: test family)");
  eval_cmd->add_option("--examples", ef.examples, "In-context examples per prompt");
  eval_cmd->add_option("--samples", ef.samples, "Test levels per seed");
  eval_cmd->add_option("--seeds", ef.seeds, "Comma-separated seeds");
  eval_cmd->add_option("--parallelism", ef.parallelism, "Concurrent queries");
  eval_cmd->add_option("--out", ef.out_dir, "Output directory");
  eval_cmd->add_option("--template", ef.template_path, "Prompt template file");
  add_gen(eval_cmd);
  add_render(eval_cmd);

  std::string report_in, report_format = "table", group_by = "model-family";
  auto* report_cmd = app.add_subcommand("report", "Aggregate evaluation records");
  report_cmd->add_option("--in", report_in, "Records file or directory")->required();
  report_cmd->add_option("--format", report_format, "table, csv, json or latex");
  report_cmd->add_option("--group-by", group_by, "model-family or model");

  auto* play_cmd = app.add_subcommand("play", "Play a level from stdin keys");
  play_cmd->add_option("level", level_path, "Level file")->required();
  add_render(play_cmd);

  std::string png_path;
  bool ascii = false;
  auto* render_cmd = app.add_subcommand("render", "Render a level");
  render_cmd->add_option("level", level_path, "Level file")->required();
  render_cmd->add_option("--png", png_path, "Write a PNG here");
  render_cmd->add_flag("--ascii", ascii, "Print ASCII (default without --png)");
  add_render(render_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  if (width) s.gen.width = *width;
  if (height) s.gen.height = *height;
  if (max_attempts) s.gen.max_attempts = *max_attempts;
  if (max_states) s.limits.max_states = *max_states;
  if (max_depth) s.limits.max_depth = *max_depth;
  if (!render_config.empty()) s.render_config = render_config;
  if (!endpoint_config.empty()) s.endpoint_config = endpoint_config;
  s.verbosity += verbose;
  if (quiet) s.verbosity = 0;

  try {
    if (*gen) return cmd_generate(s, family, seed, count, out_dir, !no_previews, out);
    if (*solve_cmd) return cmd_solve(s, level_path, out);
    if (*validate_cmd) return cmd_validate(s, level_path, plan_text, out);
    if (*eval_cmd) return cmd_eval(s, ef, out, err);
    if (*report_cmd) return cmd_report(report_in, report_format, group_by, out);
    if (*play_cmd) return cmd_play(s, level_path, in, out);
    if (*render_cmd) return cmd_render(s, level_path, png_path, ascii, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const TemplateError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const AuthError& e) {
    err << "error: " << e.what() << "\n";
    return kAuth;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace rulegrid::cli
