#include "racg/experiment.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace racg {

namespace {

constexpr const char* kAuto = "auto";

void parallel_for(int workers, std::size_t njobs, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || njobs <= 1) {
    for (std::size_t i = 0; i < njobs; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= njobs) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int count = std::min<int>(workers, static_cast<int>(njobs));
  pool.reserve(count);
  for (int i = 0; i < count; ++i) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

ExperimentConfig experiment_preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.preset = name;
  if (name == "paper-flat") {
    cfg.mode = ExperimentMode::DivGeodesic;
    cfg.graph = "gamma:1";
    cfg.geodesic = "periodic";
    cfg.word = "a_0 b_0";
    cfg.m = 1;
    cfg.r_min = 1;
    cfg.r_max = 8;
    cfg.fit_min = 2;
    cfg.fit_max = 8;
    cfg.expected_exponent = 1.0;
  } else if (name == "paper-alpha") {
    cfg.mode = ExperimentMode::DivGeodesic;
    cfg.graph = kAuto;  // gamma:m
    cfg.geodesic = "periodic";
    cfg.word = kAuto;  // a_m b_m
    cfg.m = 2;
    cfg.r_min = 2;
    cfg.r_max = 8;
    cfg.fit_min = 2;
    cfg.fit_max = 8;
  } else if (name == "paper-gamma") {
    cfg.mode = ExperimentMode::DivGeodesic;
    cfg.graph = kAuto;
    cfg.geodesic = "gamma";
    cfg.m = 3;
    cfg.t = "2/1";
    cfg.r_min = 2;
    cfg.r_max = 6;
    cfg.fit_min = 2;
    cfg.fit_max = 6;
  } else if (name == "paper-ldiv") {
    cfg.mode = ExperimentMode::LowerDiv;
    cfg.graph = kAuto;
    cfg.geodesic = "gamma";
    cfg.m = 3;
    cfg.t = "2/1";
    cfg.r_min = 2;
    cfg.r_max = 5;
    cfg.window_lo = -10;
    cfg.window_hi = 10;
  } else if (name == "paper-freeproduct") {
    cfg.mode = ExperimentMode::FreeProductCompare;
    cfg.graph = "omega:3";
    cfg.geodesic = "periodic";
    cfg.word = "G2.a_2 G2.b_2";
    cfg.compare_graph = "gamma:2";
    cfg.compare_word = "a_2 b_2";
    cfg.m = 2;
    cfg.r_min = 1;
    cfg.r_max = 4;
  } else if (name == "paper-gersten") {
    cfg.mode = ExperimentMode::Gersten;
    cfg.graph = "gamma:1";
    cfg.m = 1;
    cfg.r_min = 1;
    cfg.r_max = 4;
    cfg.fit_min = 1;
    cfg.fit_max = 4;
    cfg.expected_exponent = 1.0;
  } else {
    throw invalid_parameter("unknown experiment preset: " + name);
  }
  return cfg;
}

std::vector<std::string> experiment_preset_names() {
  return {"paper-flat", "paper-alpha", "paper-gamma",
          "paper-ldiv", "paper-freeproduct", "paper-gersten"};
}

void apply_config_kv(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value) {
  auto to_int = [&](const std::string& v) {
    try {
      return std::stoll(v);
    } catch (const std::exception&) {
      throw invalid_parameter("config key '" + key + "': not an integer: " + v);
    }
  };
  if (key == "graph") cfg.graph = value;
  else if (key == "geodesic") cfg.geodesic = value;
  else if (key == "word") cfg.word = value;
  else if (key == "type") cfg.support_type = value;
  else if (key == "type_b") cfg.support_type_b = value;
  else if (key == "m") cfg.m = static_cast<int>(to_int(value));
  else if (key == "t") cfg.t = value;
  else if (key == "r_min") cfg.r_min = static_cast<int>(to_int(value));
  else if (key == "r_max") cfg.r_max = static_cast<int>(to_int(value));
  else if (key == "cap_radius") cfg.cap_radius = static_cast<int>(to_int(value));
  else if (key == "cap_nodes") cfg.cap_nodes = static_cast<std::uint64_t>(to_int(value));
  else if (key == "stab_delta") cfg.stab_delta = static_cast<int>(to_int(value));
  else if (key == "window_lo") cfg.window_lo = to_int(value);
  else if (key == "window_hi") cfg.window_hi = to_int(value);
  else if (key == "fit_min") cfg.fit_min = static_cast<int>(to_int(value));
  else if (key == "fit_max") cfg.fit_max = static_cast<int>(to_int(value));
  else if (key == "expected") cfg.expected_exponent = std::stod(value);
  else if (key == "tol") cfg.tol = std::stod(value);
  else if (key == "out") cfg.out_dir = value;
  else if (key == "workers") cfg.workers = static_cast<int>(to_int(value));
  else if (key == "emit_dot") cfg.emit_dot = value == "true" || value == "1";
  else if (key == "compare_graph") cfg.compare_graph = value;
  else if (key == "compare_word") cfg.compare_word = value;
  else throw invalid_parameter("unknown config key: " + key);
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto eq = line.find('=');
    std::string key, value;
    if (eq == std::string::npos) {
      std::istringstream ls(line);
      if (!(ls >> key)) continue;  // blank
      throw parse_error("expected 'key = value'", line_no);
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    key = trim(line.substr(0, eq));
    value = trim(line.substr(eq + 1));
    if (key.empty()) throw parse_error("empty key", line_no);
    apply_config_kv(cfg, key, value);
  }
}

DefiningGraph resolve_graph(const std::string& selector) {
  if (selector.rfind("gamma:", 0) == 0)
    return build_gamma(std::stoi(selector.substr(6)));
  if (selector.rfind("omega:", 0) == 0)
    return build_omega(std::stoi(selector.substr(6)));
  if (selector.rfind("file:", 0) == 0) {
    const std::string path = selector.substr(5);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open graph file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
  }
  throw invalid_parameter("bad graph selector '" + selector +
                          "' (want gamma:<m>, omega:<m> or file:<path>)");
}

GeodesicSpec resolve_geodesic(const DefiningGraph& g, const ExperimentConfig& cfg) {
  if (cfg.geodesic == "periodic")
    return GeodesicSpec::periodic(g, parse_word(g, cfg.word));
  if (cfg.geodesic == "gamma")
    return GeodesicSpec::gamma(g, cfg.m, parse_exponent(cfg.t));
  if (cfg.geodesic == "support")
    return GeodesicSpec::support_ray(g, g.id(cfg.support_type));
  throw invalid_parameter("bad geodesic selector '" + cfg.geodesic +
                          "' (want periodic, gamma or support)");
}

namespace {

ExperimentConfig finalize(ExperimentConfig cfg) {
  if (cfg.graph == kAuto) cfg.graph = "gamma:" + std::to_string(cfg.m);
  if (cfg.word == kAuto)
    cfg.word = "a_" + std::to_string(cfg.m) + " b_" + std::to_string(cfg.m);
  if (!cfg.expected_exponent) {
    if (cfg.preset == "paper-alpha") cfg.expected_exponent = double(cfg.m);
    if (cfg.preset == "paper-gamma") {
      const RationalExponent t = parse_exponent(cfg.t);
      cfg.expected_exponent = double(cfg.m) - 1.0 + double(t.q) / double(t.p);
    }
  }
  if (cfg.fit_min == 0) cfg.fit_min = cfg.r_min;
  if (cfg.fit_max == 0) cfg.fit_max = cfg.r_max;
  if (cfg.r_min > cfg.r_max) throw invalid_parameter("empty radius range");
  if (cfg.workers < 1) throw invalid_parameter("workers must be >= 1");
  return cfg;
}

SearchCaps caps_from(const ExperimentConfig& cfg) {
  SearchCaps caps;
  caps.cap_radius = cfg.cap_radius;  // 0 = auto per radius
  caps.cap_nodes = cfg.cap_nodes;
  caps.stabilization_delta = cfg.stab_delta;
  return caps;
}

std::string config_echo(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "preset = " << (cfg.preset.empty() ? "(none)" : cfg.preset) << "\n"
      << "mode = "
      << (cfg.mode == ExperimentMode::DivGeodesic      ? "div-geodesic"
          : cfg.mode == ExperimentMode::DivPair        ? "div-pair"
          : cfg.mode == ExperimentMode::LowerDiv       ? "div-lower"
          : cfg.mode == ExperimentMode::Gersten        ? "div-gersten"
                                                       : "freeproduct-compare")
      << "\n"
      << "graph = " << cfg.graph << "\n"
      << "geodesic = " << cfg.geodesic << "\n";
  if (!cfg.word.empty()) out << "word = " << cfg.word << "\n";
  if (!cfg.support_type.empty()) out << "type = " << cfg.support_type << "\n";
  if (!cfg.support_type_b.empty()) out << "type_b = " << cfg.support_type_b << "\n";
  out << "m = " << cfg.m << "\n"
      << "t = " << cfg.t << "\n"
      << "r_min = " << cfg.r_min << "\n"
      << "r_max = " << cfg.r_max << "\n"
      << "cap_radius = " << cfg.cap_radius << " (0 = 4r per radius)\n"
      << "cap_nodes = " << cfg.cap_nodes << "\n"
      << "stab_delta = " << cfg.stab_delta << "\n";
  if (cfg.mode == ExperimentMode::LowerDiv)
    out << "window = [" << cfg.window_lo << ", " << cfg.window_hi << "]\n";
  out << "fit_range = [" << cfg.fit_min << ", " << cfg.fit_max << "]\n";
  if (cfg.expected_exponent)
    out << "expected = " << *cfg.expected_exponent << "\n";
  out << "tol = " << cfg.tol << "\n"
      << "workers = " << cfg.workers << "\n";
  if (cfg.mode == ExperimentMode::FreeProductCompare)
    out << "compare_graph = " << cfg.compare_graph << "\n"
        << "compare_word = " << cfg.compare_word << "\n";
  return out.str();
}

std::vector<DivergenceSample> sweep_div(const DefiningGraph& g,
                                        const ExperimentConfig& cfg,
                                        const std::string& graph_selector,
                                        const std::string& word) {
  std::vector<int> radii;
  for (int r = cfg.r_min; r <= cfg.r_max; ++r) radii.push_back(r);
  std::vector<DivergenceSample> samples(radii.size());
  ExperimentConfig local = cfg;
  local.word = word;
  parallel_for(cfg.workers, radii.size(), [&](std::size_t i) {
    GeodesicSpec spec = resolve_geodesic(g, local);
    DivergenceSample s = cfg.mode == ExperimentMode::LowerDiv
                             ? lower_divergence(spec, radii[i], cfg.window_lo,
                                                cfg.window_hi, caps_from(cfg))
                             : div_geodesic(spec, radii[i], caps_from(cfg));
    s.graph_label = graph_selector;
    if (!s.m && g.family().kind != FamilyKind::Custom) s.m = g.family().m;
    samples[i] = std::move(s);
  });
  return samples;
}

std::vector<DivergenceSample> sweep_gersten(const DefiningGraph& g,
                                            const ExperimentConfig& cfg) {
  std::vector<int> radii;
  for (int r = cfg.r_min; r <= cfg.r_max; ++r) radii.push_back(r);
  std::vector<DivergenceSample> samples(radii.size());
  parallel_for(cfg.workers, radii.size(), [&](std::size_t i) {
    GerstenReport rep = gersten_divergence(g, radii[i], caps_from(cfg));
    rep.sample.graph_label = cfg.graph;
    if (g.family().kind != FamilyKind::Custom) rep.sample.m = g.family().m;
    samples[i] = std::move(rep.sample);
  });
  return samples;
}

std::vector<DivergenceSample> sweep_pair(const DefiningGraph& g,
                                         const ExperimentConfig& cfg) {
  if (cfg.support_type.empty() || cfg.support_type_b.empty())
    throw invalid_parameter("pair mode needs type and type_b support-ray selectors");
  std::vector<int> radii;
  for (int r = cfg.r_min; r <= cfg.r_max; ++r) radii.push_back(r);
  std::vector<DivergenceSample> samples(radii.size());
  parallel_for(cfg.workers, radii.size(), [&](std::size_t i) {
    GeodesicSpec a = GeodesicSpec::support_ray(g, g.id(cfg.support_type));
    GeodesicSpec b = GeodesicSpec::support_ray(g, g.id(cfg.support_type_b));
    DivergenceSample s = div_pair(a, b, radii[i], caps_from(cfg));
    s.graph_label = cfg.graph;
    if (!s.m && g.family().kind != FamilyKind::Custom) s.m = g.family().m;
    samples[i] = std::move(s);
  });
  return samples;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& raw) {
  const ExperimentConfig cfg = finalize(raw);
  ExperimentResult result;
  DefiningGraph g = resolve_graph(cfg.graph);

  switch (cfg.mode) {
    case ExperimentMode::DivGeodesic:
    case ExperimentMode::LowerDiv:
      result.samples = sweep_div(g, cfg, cfg.graph, cfg.word);
      break;
    case ExperimentMode::DivPair:
      result.samples = sweep_pair(g, cfg);
      break;
    case ExperimentMode::Gersten:
      result.samples = sweep_gersten(g, cfg);
      break;
    case ExperimentMode::FreeProductCompare: {
      result.samples = sweep_div(g, cfg, cfg.graph, cfg.word);
      DefiningGraph g2 = resolve_graph(cfg.compare_graph);
      ExperimentConfig sub = cfg;
      sub.graph = cfg.compare_graph;
      result.compare_samples = sweep_div(g2, sub, cfg.compare_graph, cfg.compare_word);
      for (std::size_t i = 0; i < result.samples.size(); ++i) {
        const auto& a = result.samples[i];
        const auto& b = result.compare_samples[i];
        if (a.status != b.status || (a.status == SearchStatus::Found && a.value != b.value))
          result.compare_equal = false;
      }
      break;
    }
  }

  result.csv = samples_to_csv(result.samples);

  std::ostringstream rep;
  rep << "racgdiv experiment report\n=========================\n"
      << config_echo(cfg) << "\n--- samples ---\n";
  for (const auto& s : result.samples) {
    rep << "r=" << s.r << " status=" << to_string(s.status);
    if (s.status == SearchStatus::Found) rep << " value=" << s.value;
    rep << " stabilized=" << (s.stabilized ? "true" : "false")
        << " nodes=" << s.nodes_explored;
    if (s.min_t) rep << " min_t=" << *s.min_t;
    rep << "\n";
  }

  if (cfg.mode == ExperimentMode::FreeProductCompare) {
    rep << "\n--- free-product comparison (" << cfg.compare_graph << ") ---\n";
    for (std::size_t i = 0; i < result.compare_samples.size(); ++i) {
      const auto& a = result.samples[i];
      const auto& b = result.compare_samples[i];
      rep << "r=" << b.r << " value=" << (b.status == SearchStatus::Found
                                              ? std::to_string(b.value)
                                              : to_string(b.status))
          << " match=" << ((a.status == b.status && a.value == b.value) ? "yes" : "NO")
          << "\n";
    }
    rep << "all radii match: " << (result.compare_equal ? "yes" : "NO") << "\n";
  }

  if (cfg.mode == ExperimentMode::LowerDiv) {
    rep << "\n--- value(r)/r (superlinear evidence) ---\n";
    for (const auto& s : result.samples)
      if (s.status == SearchStatus::Found)
        rep << "r=" << s.r << " value/r=" << double(s.value) / double(s.r) << "\n";
  }

  try {
    result.fit = loglog_fit(result.samples, cfg.fit_min, cfg.fit_max);
    rep << "\n--- log-log fit over [" << cfg.fit_min << ", " << cfg.fit_max << "] ---\n"
        << "slope = " << result.fit->slope << "\nintercept = " << result.fit->intercept
        << "\nr_squared = " << result.fit->r_squared
        << "\nsamples used = " << result.fit->sample_count
        << " (excluded " << result.fit->excluded << ")\n";
    for (const auto& w : result.fit->warnings) rep << "warning: " << w << "\n";
    if (cfg.expected_exponent) {
      result.exponent_verdict =
          compare_exponent(*result.fit, *cfg.expected_exponent, cfg.tol);
      rep << "expected exponent = " << *cfg.expected_exponent << " (tol " << cfg.tol
          << "): " << (result.exponent_verdict->pass ? "pass" : "FAIL") << "\n";
    }
  } catch (const insufficient_data& e) {
    rep << "\nno fit: " << e.what() << "\n";
  }

  result.report = rep.str();

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    result.csv_path = (std::filesystem::path(cfg.out_dir) / "samples.csv").string();
    result.report_path = (std::filesystem::path(cfg.out_dir) / "report.txt").string();
    std::ofstream csv(result.csv_path, std::ios::binary);
    csv << result.csv;
    std::ofstream report(result.report_path, std::ios::binary);
    report << result.report;
    if (cfg.mode == ExperimentMode::FreeProductCompare) {
      std::ofstream cmp((std::filesystem::path(cfg.out_dir) / "samples_compare.csv").string(),
                        std::ios::binary);
      cmp << samples_to_csv(result.compare_samples);
    }
    if (cfg.emit_dot && !result.samples.empty()) {
      // small-scale illustration: ball around the basepoint with one
      // optimal avoidant path overlaid, at the smallest swept radius
      try {
        GeodesicSpec spec = resolve_geodesic(g, cfg);
        const int r = cfg.r_min;
        SearchCaps caps = caps_from(cfg);
        if (caps.cap_radius == 0) caps.cap_radius = SearchCaps::defaults_for_radius(r).cap_radius;
        std::vector<NormalForm> path;
        avoidant_path_traced(g, spec.vertex(0), r, spec.vertex(-r), spec.vertex(r),
                             caps, path);
        BallMap b = ball(g, spec.vertex(0), std::min(caps.cap_radius, r + 2), 200000);
        std::ofstream dot((std::filesystem::path(cfg.out_dir) / "ball.dot").string(),
                          std::ios::binary);
        dot << ball_to_dot(g, b, &path);
      } catch (const std::exception&) {
        // DOT output is best-effort illustration only
      }
    }
  }
  return result;
}

}  // namespace racg
