// racg: word combinatorics and divergence experiments for right-angled
// Coxeter groups. See README.md for the file formats and examples.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "racg/experiment.hpp"

namespace {

using namespace racg;

double parse_fraction(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return std::stod(s);
  const double num = std::stod(s.substr(0, slash));
  const double den = std::stod(s.substr(slash + 1));
  if (den == 0) throw invalid_parameter("zero denominator in '" + s + "'");
  return num / den;
}

std::pair<int, int> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos)
    throw invalid_parameter("expected <lo>:<hi>, got '" + s + "'");
  return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  out << text;
}

// Config-key/value pairs captured from explicit command-line flags; applied
// on top of the preset and any config file, in that order.
struct FlagOverrides {
  std::vector<std::pair<CLI::Option*, std::string>> keyed;
  std::string config_path;

  void bind(CLI::App* sub, std::vector<std::string>& storage) {
    // storage must outlive parsing; one slot per option
    static constexpr struct {
      const char* flag;
      const char* key;
      const char* help;
    } kOpts[] = {
        {"--graph", "graph", "graph selector: gamma:<m> | omega:<m> | file:<path>"},
        {"--geodesic", "geodesic", "geodesic kind: periodic | gamma | support"},
        {"--word", "word", "periodic word, whitespace-separated generator names"},
        {"--type", "type", "support-ray wall type (generator name)"},
        {"--type-b", "type_b", "second support-ray type for pair mode"},
        {"--m", "m", "family parameter m"},
        {"--t", "t", "exponent t as p/q (e.g. 2/1, 3/2)"},
        {"--r-min", "r_min", "smallest radius"},
        {"--r-max", "r_max", "largest radius"},
        {"--cap-radius", "cap_radius", "search cap radius (0 = 4r per radius)"},
        {"--cap-nodes", "cap_nodes", "max stored search states"},
        {"--stab-delta", "stab_delta", "cap_radius increment for the stabilization re-run"},
        {"--window-lo", "window_lo", "lower-divergence window start"},
        {"--window-hi", "window_hi", "lower-divergence window end"},
        {"--fit-min", "fit_min", "fit range start"},
        {"--fit-max", "fit_max", "fit range end"},
        {"--expected-exponent", "expected", "expected growth exponent"},
        {"--tol", "tol", "exponent tolerance"},
        {"--out", "out", "output directory"},
        {"--workers", "workers", "worker thread count"},
    };
    storage.resize(std::size(kOpts) + 4);
    std::size_t i = 0;
    for (const auto& o : kOpts) {
      CLI::Option* opt = sub->add_option(o.flag, storage[i], o.help);
      keyed.emplace_back(opt, o.key);
      ++i;
    }
    CLI::Option* dot = sub->add_flag("--emit-dot", "write a DOT illustration");
    keyed.emplace_back(dot, "emit_dot");
    sub->add_option("--config", config_path, "key = value config file");
  }

  void apply(ExperimentConfig& cfg, const std::vector<std::string>& storage) const {
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    std::size_t i = 0;
    for (const auto& [opt, key] : keyed) {
      if (opt->count() > 0) {
        if (std::string(key) == "emit_dot")
          apply_config_kv(cfg, key, "1");
        else
          apply_config_kv(cfg, key, storage[i]);
      }
      ++i;
    }
  }
};

int cmd_experiment(const std::string& preset, const FlagOverrides& flags,
                   const std::vector<std::string>& storage) {
  ExperimentConfig cfg = experiment_preset(preset);
  flags.apply(cfg, storage);
  ExperimentResult res = run_experiment(cfg);
  std::cout << res.report;
  if (!res.csv_path.empty())
    std::cout << "\nwrote " << res.csv_path << " and " << res.report_path << "\n";
  return 0;
}

int cmd_div(ExperimentMode mode, const FlagOverrides& flags,
            const std::vector<std::string>& storage, int single_r) {
  ExperimentConfig cfg;
  cfg.mode = mode;
  cfg.out_dir.clear();  // stdout unless --out given
  if (mode == ExperimentMode::Gersten) cfg.graph = "gamma:1";
  flags.apply(cfg, storage);
  if (single_r >= 0) {
    cfg.r_min = cfg.r_max = single_r;
    cfg.fit_min = cfg.fit_max = single_r;
  }
  ExperimentResult res = run_experiment(cfg);
  if (single_r >= 0 && res.samples.size() == 1) {
    const auto& s = res.samples[0];
    if (s.status == SearchStatus::Found)
      std::cout << s.value << "\n";
    else
      std::cout << to_string(s.status) << "\n";
    return 0;
  }
  if (cfg.out_dir.empty())
    std::cout << res.csv;
  else
    std::cout << res.report << "\nwrote " << res.csv_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"word combinatorics and geodesic divergence measurements in "
               "right-angled Coxeter groups"};
  app.require_subcommand(1);

  // graph gen|validate|dot
  CLI::App* graph = app.add_subcommand("graph", "defining-graph utilities");
  graph->require_subcommand(1);
  std::string family = "gamma:1", graph_sel = "gamma:1", out_path;
  CLI::App* graph_gen = graph->add_subcommand("gen", "emit a graph file");
  graph_gen->add_option("--family", family, "gamma:<m> | omega:<m>")->required();
  graph_gen->add_option("--out", out_path, "output file (default stdout)");
  CLI::App* graph_validate = graph->add_subcommand("validate", "check a graph");
  graph_validate->add_option("--graph", graph_sel, "graph selector")->required();
  CLI::App* graph_dot = graph->add_subcommand("dot", "render the defining graph");
  graph_dot->add_option("--graph", graph_sel, "graph selector")->required();
  graph_dot->add_option("--out", out_path, "output file (default stdout)");

  // word reduce|geodesic|walls
  CLI::App* word = app.add_subcommand("word", "word-problem utilities");
  word->require_subcommand(1);
  std::string word_text, start_text;
  CLI::App* word_reduce = word->add_subcommand("reduce", "print the normal form");
  CLI::App* word_geodesic = word->add_subcommand("geodesic", "is the word geodesic?");
  CLI::App* word_walls = word->add_subcommand("walls", "walls crossed by the word");
  for (CLI::App* sub : {word_reduce, word_geodesic, word_walls}) {
    sub->add_option("--graph", graph_sel, "graph selector")->required();
    sub->add_option("--word", word_text, "whitespace-separated generator names")
        ->required();
  }
  word_walls->add_option("--start", start_text, "starting element (default e)");

  // ball
  CLI::App* ball_cmd = app.add_subcommand("ball", "enumerate a metric ball");
  int ball_radius = 2;
  std::uint64_t ball_cap = 1'000'000;
  std::string ball_center, ball_dot;
  bool ball_list = false;
  ball_cmd->add_option("--graph", graph_sel, "graph selector")->required();
  ball_cmd->add_option("--R", ball_radius, "ball radius")->required();
  ball_cmd->add_option("--center", ball_center, "center element (default e)");
  ball_cmd->add_option("--cap-nodes", ball_cap, "enumeration cap");
  ball_cmd->add_option("--emit-dot", ball_dot, "write DOT to this file");
  ball_cmd->add_flag("--list", ball_list, "print every element");

  // div pair|geodesic|lower|gersten
  CLI::App* div = app.add_subcommand("div", "divergence measurements");
  div->require_subcommand(1);
  std::vector<std::string> stor_pair, stor_geo, stor_lower, stor_gersten;
  FlagOverrides flags_pair, flags_geo, flags_lower, flags_gersten;
  int r_pair = -1, r_geo = -1, r_lower = -1, r_gersten = -1;
  CLI::App* div_pair_cmd = div->add_subcommand("pair", "divergence of two support rays");
  flags_pair.bind(div_pair_cmd, stor_pair);
  div_pair_cmd->add_option("--r", r_pair, "single radius (overrides r-min/r-max)");
  CLI::App* div_geo_cmd = div->add_subcommand("geodesic", "divergence of a bi-infinite geodesic");
  flags_geo.bind(div_geo_cmd, stor_geo);
  div_geo_cmd->add_option("--r", r_geo, "single radius (overrides r-min/r-max)");
  CLI::App* div_lower_cmd = div->add_subcommand("lower", "lower divergence over a window");
  flags_lower.bind(div_lower_cmd, stor_lower);
  div_lower_cmd->add_option("--r", r_lower, "single radius (overrides r-min/r-max)");
  CLI::App* div_gersten_cmd = div->add_subcommand("gersten", "Gersten divergence of the graph");
  flags_gersten.bind(div_gersten_cmd, stor_gersten);
  div_gersten_cmd->add_option("--r", r_gersten, "single radius (overrides r-min/r-max)");

  // fit
  CLI::App* fit_cmd = app.add_subcommand("fit", "log-log exponent fit of a sample CSV");
  std::string fit_in, fit_range = "0:0", fit_expected, fit_out;
  double fit_tol = 0.5;
  fit_cmd->add_option("--in", fit_in, "input samples.csv")->required();
  fit_cmd->add_option("--fit-range", fit_range, "radius range lo:hi");
  fit_cmd->add_option("--expected-exponent", fit_expected, "expected exponent (p/q or decimal)");
  fit_cmd->add_option("--tol", fit_tol, "tolerance for the expected exponent");
  fit_cmd->add_option("--out", fit_out, "write the report here as well");

  // experiment <preset>
  CLI::App* exp_cmd = app.add_subcommand("experiment", "run a bundled experiment preset");
  std::string preset;
  std::vector<std::string> stor_exp;
  FlagOverrides flags_exp;
  exp_cmd->add_option("preset", preset, "one of: paper-flat paper-alpha paper-gamma "
                                        "paper-ldiv paper-freeproduct paper-gersten")
      ->required();
  flags_exp.bind(exp_cmd, stor_exp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (graph_gen->parsed()) {
      DefiningGraph g = resolve_graph(family);
      const std::string text = serialize_graph(g);
      if (out_path.empty())
        std::cout << text;
      else
        write_text(out_path, text);
      return 0;
    }
    if (graph_validate->parsed()) {
      DefiningGraph g = resolve_graph(graph_sel);
      std::cout << "generators: " << g.size() << "\nedges: " << g.edge_count()
                << "\ntriangle-free: " << (g.is_triangle_free() ? "true" : "false")
                << "\n";
      return 0;
    }
    if (graph_dot->parsed()) {
      DefiningGraph g = resolve_graph(graph_sel);
      const std::string text = graph_to_dot(g);
      if (out_path.empty())
        std::cout << text;
      else
        write_text(out_path, text);
      return 0;
    }
    if (word_reduce->parsed() || word_geodesic->parsed() || word_walls->parsed()) {
      DefiningGraph g = resolve_graph(graph_sel);
      const Word w = parse_word(g, word_text);
      if (word_reduce->parsed()) {
        NormalForm nf = reduce(g, w);
        std::cout << (nf.is_identity() ? "e" : nf.str()) << "\n";
      } else if (word_geodesic->parsed()) {
        std::cout << (is_geodesic_word(g, w) ? "true" : "false") << "\n";
      } else {
        NormalForm start = reduce(g, parse_word(g, start_text));
        auto walls = crossing_walls(g, start, w);
        std::unordered_set<std::size_t> seen;
        bool distinct = true;
        for (const auto& wall : walls) {
          std::cout << g.name(wall.type) << ": "
                    << (wall.reflection.is_identity() ? "e" : wall.reflection.str())
                    << "\n";
          if (!seen.insert(wall.reflection.hash()).second) distinct = false;
        }
        std::cout << "distinct: " << (distinct ? "true" : "false") << "\n";
      }
      return 0;
    }
    if (ball_cmd->parsed()) {
      DefiningGraph g = resolve_graph(graph_sel);
      NormalForm center = reduce(g, parse_word(g, ball_center));
      BallMap b = ball(g, center, ball_radius, ball_cap);
      auto sizes = b.sphere_sizes();
      std::size_t total = 0;
      for (std::size_t r = 0; r < sizes.size(); ++r) {
        total += sizes[r];
        std::cout << "r=" << r << " sphere=" << sizes[r] << " ball=" << total << "\n";
      }
      if (ball_list)
        for (const auto& [nf, d] : b.items)
          std::cout << d << ": " << (nf.is_identity() ? "e" : nf.str()) << "\n";
      if (!ball_dot.empty()) write_text(ball_dot, ball_to_dot(g, b));
      return 0;
    }
    if (div_pair_cmd->parsed())
      return cmd_div(ExperimentMode::DivPair, flags_pair, stor_pair, r_pair);
    if (div_geo_cmd->parsed())
      return cmd_div(ExperimentMode::DivGeodesic, flags_geo, stor_geo, r_geo);
    if (div_lower_cmd->parsed())
      return cmd_div(ExperimentMode::LowerDiv, flags_lower, stor_lower, r_lower);
    if (div_gersten_cmd->parsed())
      return cmd_div(ExperimentMode::Gersten, flags_gersten, stor_gersten, r_gersten);
    if (fit_cmd->parsed()) {
      auto samples = read_csv(fit_in);
      auto [lo, hi] = parse_range(fit_range);
      if (lo == 0 && hi == 0) {
        for (const auto& s : samples) {
          lo = lo == 0 ? s.r : std::min(lo, s.r);
          hi = std::max(hi, s.r);
        }
      }
      FitReport rep = loglog_fit(samples, lo, hi);
      std::ostringstream out;
      out << "slope = " << rep.slope << "\nintercept = " << rep.intercept
          << "\nr_squared = " << rep.r_squared << "\nrange = [" << lo << ", " << hi
          << "]\nsamples used = " << rep.sample_count << " (excluded " << rep.excluded
          << ")\n";
      for (const auto& w : rep.warnings) out << "warning: " << w << "\n";
      if (!fit_expected.empty()) {
        ExponentVerdict v = compare_exponent(rep, parse_fraction(fit_expected), fit_tol);
        out << "expected exponent = " << v.expected << " (tol " << v.tol
            << "): " << (v.pass ? "pass" : "FAIL") << "\n";
      }
      std::cout << out.str();
      if (!fit_out.empty()) write_text(fit_out, out.str());
      return 0;
    }
    if (exp_cmd->parsed()) return cmd_experiment(preset, flags_exp, stor_exp);
  } catch (const invalid_parameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.what() == std::string() ? 1 : (std::string(e.what()).find("unknown experiment preset") != std::string::npos ? 2 : 1);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
