#include "racg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace racg {

FitReport loglog_fit(const std::vector<DivergenceSample>& samples, int r_min, int r_max) {
  FitReport rep;
  rep.r_min = r_min;
  rep.r_max = r_max;
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : samples) {
    if (s.r < r_min || s.r > r_max) continue;
    if (s.status != SearchStatus::Found || !s.stabilized || s.value <= 0 || s.r <= 0) {
      ++rep.excluded;
      std::ostringstream w;
      w << "excluded r=" << s.r << " (" << to_string(s.status)
        << (s.stabilized ? "" : ", unstabilized") << ")";
      rep.warnings.push_back(w.str());
      continue;
    }
    pts.emplace_back(std::log(double(s.r)), std::log(double(s.value)));
  }
  rep.sample_count = pts.size();
  if (pts.size() < 3)
    throw insufficient_data("loglog_fit needs at least 3 usable samples, got " +
                            std::to_string(pts.size()));
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double n = double(pts.size());
  const double denom = n * sxx - sx * sx;
  rep.slope = (n * sxy - sx * sy) / denom;
  rep.intercept = (sy - rep.slope * sx) / n;
  const double ss_tot = syy - sy * sy / n;
  double ss_res = 0;
  for (auto [x, y] : pts) {
    const double e = y - (rep.slope * x + rep.intercept);
    ss_res += e * e;
  }
  rep.r_squared = ss_tot > 0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  return rep;
}

DominationVerdict dominates_check(const Series& f, const Series& g,
                                  double A, double B, double C) {
  DominationVerdict v;
  v.a = A;
  v.b = B;
  v.c = C;
  Series gs = g;
  std::sort(gs.begin(), gs.end());
  bool any = false;
  for (const auto& [x, fx] : f) {
    if (x <= C) continue;
    // g evaluated at the nearest sampled radius >= A x
    auto it = std::lower_bound(gs.begin(), gs.end(), std::make_pair(A * x, -1e300));
    if (it == gs.end())
      throw insufficient_data("dominates_check: no g sample at radius >= " +
                              std::to_string(A * x));
    any = true;
    if (fx > it->second + B * x) {
      v.holds = false;
      v.counterexample_x = x;
      return v;
    }
  }
  if (!any)
    throw insufficient_data("dominates_check: no f samples beyond threshold C");
  v.holds = true;
  return v;
}

ExponentVerdict compare_exponent(const FitReport& report, double expected, double tol) {
  ExponentVerdict v;
  v.slope = report.slope;
  v.expected = expected;
  v.tol = tol;
  v.pass = std::abs(report.slope - expected) <= tol;
  return v;
}

namespace {

std::string csv_escape(const std::string& s) {
  // Fields never contain commas by construction; keep them that way.
  std::string out = s;
  std::replace(out.begin(), out.end(), ',', ';');
  return out;
}

}  // namespace

std::string samples_to_csv(const std::vector<DivergenceSample>& samples) {
  std::ostringstream out;
  out << "graph,geodesic,m,t,r,status,value,cap_radius,cap_nodes,nodes_explored,"
         "stabilized,min_t\n";
  for (const auto& s : samples) {
    out << csv_escape(s.graph_label) << ',' << csv_escape(s.geodesic_label) << ',';
    if (s.m) out << *s.m;
    out << ',';
    if (s.t) out << s.t->str();
    out << ',' << s.r << ',' << to_string(s.status) << ',';
    if (s.status == SearchStatus::Found) out << s.value;
    out << ',' << s.caps.cap_radius << ',' << s.caps.cap_nodes << ','
        << s.nodes_explored << ',' << (s.stabilized ? "true" : "false") << ',';
    if (s.min_t) out << *s.min_t;
    out << '\n';
  }
  return out.str();
}

void write_csv(const std::vector<DivergenceSample>& samples, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open for writing: " + path);
  out << samples_to_csv(samples);
  if (!out) throw io_error("write failed: " + path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

SearchStatus status_from_string(const std::string& s, int line_no) {
  if (s == "found") return SearchStatus::Found;
  if (s == "budget") return SearchStatus::NotFoundWithinBudget;
  if (s == "infinite") return SearchStatus::Infinite;
  throw parse_error("unknown status '" + s + "'", line_no);
}

}  // namespace

std::vector<DivergenceSample> parse_csv(std::istream& in) {
  std::vector<DivergenceSample> out;
  std::string line;
  int line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    auto f = split_csv_line(line);
    if (f.size() != 12) throw parse_error("expected 12 CSV fields", line_no);
    DivergenceSample s;
    s.graph_label = f[0];
    s.geodesic_label = f[1];
    if (!f[2].empty()) s.m = std::stoi(f[2]);
    if (!f[3].empty()) s.t = parse_exponent(f[3]);
    s.r = std::stoi(f[4]);
    s.status = status_from_string(f[5], line_no);
    if (!f[6].empty()) s.value = std::stoll(f[6]);
    s.caps.cap_radius = std::stoi(f[7]);
    s.caps.cap_nodes = std::stoull(f[8]);
    s.nodes_explored = std::stoull(f[9]);
    s.stabilized = f[10] == "true";
    if (!f[11].empty()) s.min_t = std::stoi(f[11]);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<DivergenceSample> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for reading: " + path);
  return parse_csv(in);
}

}  // namespace racg
