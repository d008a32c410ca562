#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "curlstab/problems.hpp"

namespace curlstab {

enum class ProblemKind { Hcurl, Hdiv, CurlOnly, TraceOnly };

inline const char* kind_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Hcurl: return "hcurl";
    case ProblemKind::Hdiv: return "hdiv";
    case ProblemKind::CurlOnly: return "curl_only";
    case ProblemKind::TraceOnly: return "trace_only";
  }
  return "?";
}

inline ProblemKind parse_kind(const std::string& name) {
  for (ProblemKind k : {ProblemKind::Hcurl, ProblemKind::Hdiv, ProblemKind::CurlOnly, ProblemKind::TraceOnly})
    if (name == kind_name(k)) return k;
  throw ConfigError("unknown problem kind '" + name + "'");
}

/// "flatten": (0,0,0),(1,0,0),(0,1,0),(1/3,1/3,a); "needle": (0,0,0),(a,0,0),(0,a,0),(0,0,1).
inline Tetrahedron shape_family(const std::string& name, double parameter) {
  if (!(parameter > 0.0)) throw DegenerateTetrahedron("shape_family: parameter must be positive");
  if (parameter > 1.0) throw Error("shape_family: parameter must lie in (0, 1]");
  if (name == "flatten")
    return build_tetrahedron({Point(0, 0, 0), Point(1, 0, 0), Point(0, 1, 0), Point(1.0 / 3, 1.0 / 3, parameter)});
  if (name == "needle")
    return build_tetrahedron({Point(0, 0, 0), Point(parameter, 0, 0), Point(0, parameter, 0), Point(0, 0, 1)});
  throw Error("shape_family: unknown family '" + name + "'");
}

struct TetSpec {
  std::string id;
  Tetrahedron tet;
};

struct SweepConfig {
  std::vector<TetSpec> tetrahedra;
  int p_min = 0;
  int p_max = 6;
  std::vector<int> subset_sizes{0, 1, 2, 3, 4};
  bool full_subsets = false;
  int trials = 10;
  std::uint64_t seed = 1;
  int delta = 3;
  std::vector<ProblemKind> kinds{ProblemKind::Hcurl, ProblemKind::Hdiv, ProblemKind::CurlOnly,
                                 ProblemKind::TraceOnly};
  bool zero_data = false;
  int threads = 1;
  std::string output;

  void validate() const {
    if (tetrahedra.empty()) throw ConfigError("config: no tetrahedra");
    if (trials < 1) throw ConfigError("config: trials must be >= 1");
    if (p_min < 0 || p_max < p_min) throw ConfigError("config: need 0 <= p_min <= p_max");
    if (delta < 0) throw ConfigError("config: delta must be >= 0");
    if (p_max + delta > kMaxDegree)
      throw ConfigError("config: p_max + delta exceeds the maximum degree " + std::to_string(kMaxDegree));
    if (threads < 1) throw ConfigError("config: threads must be >= 1");
    if (kinds.empty()) throw ConfigError("config: no problem kinds");
    for (int s : subset_sizes)
      if (s < 0 || s > 4) throw ConfigError("config: subset sizes must lie in 0..4");
  }

  /// Face bitmasks covered by the sweep, increasing.
  std::vector<int> face_subsets() const {
    std::vector<int> masks;
    for (int mask = 0; mask < 16; ++mask) {
      const int size = __builtin_popcount(static_cast<unsigned>(mask));
      if (std::find(subset_sizes.begin(), subset_sizes.end(), size) == subset_sizes.end()) continue;
      // one representative per size: the first `size` faces
      if (!full_subsets && mask != (1 << size) - 1) continue;
      masks.push_back(mask);
    }
    return masks;
  }
};

inline SweepConfig parse_sweep_config(const nlohmann::json& j) {
  SweepConfig c;
  try {
    static const char* known[] = {"tetrahedra", "p_min",  "p_max",     "subset_sizes", "full_subsets", "trials",
                                  "seed",       "delta",  "kinds",     "zero_data",    "threads",      "output"};
    for (const auto& item : j.items())
      if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return item.key() == k; }) ==
          std::end(known))
        throw ConfigError("config: unknown key '" + item.key() + "'");
    if (!j.contains("tetrahedra")) throw ConfigError("config: missing 'tetrahedra'");
    for (const auto& t : j.at("tetrahedra")) {
      TetSpec spec;
      if (t.contains("vertices")) {
        const auto& v = t.at("vertices");
        if (v.size() != 4) throw ConfigError("config: a tetrahedron needs 4 vertices");
        std::array<Point, 4> pts;
        for (int i = 0; i < 4; ++i) {
          if (v[i].size() != 3) throw ConfigError("config: vertices need 3 coordinates");
          pts[i] = Point(v[i][0].get<double>(), v[i][1].get<double>(), v[i][2].get<double>());
        }
        spec.tet = build_tetrahedron(pts);
        spec.id = t.value("id", "custom" + std::to_string(c.tetrahedra.size()));
      } else {
        const std::string family = t.value("family", "");
        if (family == "reference") {
          spec.tet = reference_tetrahedron();
          spec.id = t.value("id", std::string("reference"));
        } else {
          const double a = t.at("parameter").get<double>();
          spec.tet = shape_family(family, a);
          char buf[64];
          std::snprintf(buf, sizeof buf, "%s(%g)", family.c_str(), a);
          spec.id = t.value("id", std::string(buf));
        }
      }
      c.tetrahedra.push_back(std::move(spec));
    }
    c.p_min = j.value("p_min", c.p_min);
    c.p_max = j.value("p_max", c.p_max);
    if (j.contains("subset_sizes")) c.subset_sizes = j.at("subset_sizes").get<std::vector<int>>();
    c.full_subsets = j.value("full_subsets", c.full_subsets);
    c.trials = j.value("trials", c.trials);
    c.seed = j.value("seed", c.seed);
    c.delta = j.value("delta", c.delta);
    if (j.contains("kinds")) {
      c.kinds.clear();
      for (const auto& k : j.at("kinds")) c.kinds.push_back(parse_kind(k.get<std::string>()));
    }
    c.zero_data = j.value("zero_data", c.zero_data);
    c.threads = j.value("threads", c.threads);
    c.output = j.value("output", c.output);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const DegenerateTetrahedron& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  return parse_sweep_config(j);
}

struct SweepRecord {
  std::string tet_id;
  double kappa_K = 0.0;
  int p = 0;
  int face_subset = 0;
  int trial = 0;
  ProblemKind kind = ProblemKind::Hcurl;
  double discrete_norm = 0.0;
  double reference_norm = 0.0;
  double ratio = 1.0;
  double feasibility_residual = 0.0;
  int rank = 0;
  double wall_time_ms = 0.0;
  double scale = 1.0;
  double reference_prev_norm = 0.0;
  double enrichment_increase = 0.0;  // largest relative increase of the norm from degree q to q + 1
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

inline const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols{
      "tet_id",        "kappa_K", "p",    "face_subset",  "trial",         "problem_kind",
      "discrete_norm", "reference_norm",  "ratio",        "feasibility_residual", "rank",
      "wall_time_ms",  "scale",   "reference_prev_norm",  "enrichment_increase",  "status"};
  return cols;
}

struct SweepSummary {
  std::string tet_id;
  ProblemKind kind = ProblemKind::Hcurl;
  double kappa_K = 0.0;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double slope = 0.0;         // least squares of log(max ratio at p) against p
  double growth = 1.0;        // max over p of (max ratio at p) / (max ratio at the first p)
  std::vector<std::pair<int, double>> max_ratio_by_p;
  int records = 0;
  int failed = 0;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<SweepSummary> summaries;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t master, std::size_t tet, int p, int subset, int trial) {
  std::uint64_t s = splitmix64(master);
  for (std::uint64_t v : {static_cast<std::uint64_t>(tet), static_cast<std::uint64_t>(p),
                          static_cast<std::uint64_t>(subset), static_cast<std::uint64_t>(trial)})
    s = splitmix64(s ^ v);
  return s;
}

inline std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return s;
}

struct NormSequence {
  std::vector<double> norms;  // degrees p .. p + delta
  MinResult discrete;
};

inline void fill_norms(SweepRecord& r, const NormSequence& seq, double scale) {
  r.discrete_norm = seq.discrete.norm;
  r.reference_norm = seq.norms.back();
  r.reference_prev_norm = seq.norms.size() > 1 ? seq.norms[seq.norms.size() - 2] : seq.norms.back();
  r.feasibility_residual = seq.discrete.residual;
  r.rank = static_cast<int>(seq.discrete.rank);
  r.scale = scale;
  if (r.reference_norm > 0.0) {
    r.ratio = r.discrete_norm / r.reference_norm;
  } else {
    r.ratio = r.discrete_norm > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  double increase = 0.0;
  for (std::size_t i = 1; i < seq.norms.size(); ++i)
    increase = std::max(increase, (seq.norms[i] - seq.norms[i - 1]) / scale);
  r.enrichment_increase = increase;
}

template <typename Solve>
NormSequence norm_sequence(int p, int delta, Solve&& solve) {
  NormSequence seq;
  seq.discrete = solve(p);
  seq.norms.push_back(seq.discrete.norm);
  for (int q = p + 1; q <= p + delta; ++q) seq.norms.push_back(solve(q).norm);
  return seq;
}

inline SweepRecord run_one(const SweepConfig& config, std::size_t tet_index, const ElementPtr& element, int p,
                           int mask, int trial, ProblemKind kind) {
  SweepRecord r;
  r.tet_id = config.tetrahedra[tet_index].id;
  r.kappa_K = element->tet().kappa();
  r.p = p;
  r.face_subset = mask;
  r.trial = trial;
  r.kind = kind;
  const std::uint64_t seed = trial_seed(config.seed, tet_index, p, mask, trial);
  const std::vector<int> faces = faces_of_mask(mask);
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (kind) {
      case ProblemKind::Hcurl:
      case ProblemKind::CurlOnly: {
        HcurlProblem problem = generate_compatible_hcurl_data(element, p, faces, seed);
        if (config.zero_data) {
          problem.r_K.setZero();
          for (auto& v : problem.r_F.values) v.setZero();
        }
        const auto seq = norm_sequence(p, config.delta, [&](int q) { return solve_min_hcurl(problem, q); });
        fill_norms(r, seq, problem.scale());
        break;
      }
      case ProblemKind::TraceOnly: {
        HcurlProblem problem = generate_curl_free_trace_data(element, p, faces, seed);
        if (config.zero_data)
          for (auto& v : problem.r_F.values) v.setZero();
        const auto seq = norm_sequence(
            p, config.delta, [&](int q) { return solve_min_trace_only(problem.element, p, problem.r_F, q); });
        fill_norms(r, seq, problem.scale());
        break;
      }
      case ProblemKind::Hdiv: {
        HdivProblem problem = generate_compatible_hdiv_data(element, p, faces, seed);
        if (config.zero_data) {
          problem.r_K.setZero();
          for (auto& v : problem.r_F) v.setZero();
        }
        const auto seq = norm_sequence(p, config.delta, [&](int q) { return solve_min_hdiv(problem, q); });
        fill_norms(r, seq, problem.scale());
        break;
      }
    }
  } catch (const std::exception& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.discrete_norm = r.reference_norm = r.ratio = r.feasibility_residual = nan;
    r.reference_prev_norm = r.enrichment_increase = nan;
    r.rank = -1;
    r.status = "failed: " + sanitize(e.what());
  }
  r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline bool canonical_less(const SweepRecord& a, const SweepRecord& b, const std::map<std::string, std::size_t>& order) {
  const std::size_t ta = order.at(a.tet_id), tb = order.at(b.tet_id);
  if (ta != tb) return ta < tb;
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.p != b.p) return a.p < b.p;
  if (a.face_subset != b.face_subset) return a.face_subset < b.face_subset;
  return a.trial < b.trial;
}

inline double least_squares_slope(const std::vector<std::pair<int, double>>& series) {
  if (series.size() < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : series) {
    mx += x;
    my += std::log(y);
  }
  mx /= static_cast<double>(series.size());
  my /= static_cast<double>(series.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [x, y] : series) {
    sxy += (x - mx) * (std::log(y) - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace detail

/// Summary per (tet, kind) over successful records.
inline std::vector<SweepSummary> summarize(const std::vector<SweepRecord>& records) {
  std::vector<SweepSummary> out;
  std::map<std::pair<std::string, ProblemKind>, std::size_t> index;
  std::vector<std::map<int, double>> by_p;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.tet_id, r.kind);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      SweepSummary s;
      s.tet_id = r.tet_id;
      s.kind = r.kind;
      s.kappa_K = r.kappa_K;
      s.min_ratio = std::numeric_limits<double>::infinity();
      out.push_back(s);
      by_p.emplace_back();
    }
    SweepSummary& s = out[it->second];
    ++s.records;
    if (!r.ok()) {
      ++s.failed;
      continue;
    }
    s.max_ratio = std::max(s.max_ratio, r.ratio);
    s.min_ratio = std::min(s.min_ratio, r.ratio);
    double& m = by_p[it->second][r.p];
    m = std::max(m, r.ratio);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    SweepSummary& s = out[i];
    s.max_ratio_by_p.assign(by_p[i].begin(), by_p[i].end());
    s.slope = detail::least_squares_slope(s.max_ratio_by_p);
    if (!s.max_ratio_by_p.empty()) {
      const double first = s.max_ratio_by_p.front().second;
      for (const auto& [p, m] : s.max_ratio_by_p) s.growth = std::max(s.growth, m / first);
    }
    if (s.min_ratio == std::numeric_limits<double>::infinity()) s.min_ratio = 0.0;
  }
  return out;
}

/// Runs every (tet, p, subset, trial, kind) cell. curl_only runs on the empty
/// subset only and trace_only on nonempty subsets only.
inline SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  struct Task {
    std::size_t tet;
    int p, mask, trial;
    ProblemKind kind;
  };
  std::vector<ElementPtr> elements;
  std::map<std::string, std::size_t> order;
  for (std::size_t t = 0; t < config.tetrahedra.size(); ++t) {
    elements.push_back(make_element(config.tetrahedra[t].tet));
    if (!order.emplace(config.tetrahedra[t].id, t).second)
      throw ConfigError("config: duplicate tetrahedron id '" + config.tetrahedra[t].id + "'");
  }
  std::vector<Task> tasks;
  for (std::size_t t = 0; t < elements.size(); ++t)
    for (int p = config.p_min; p <= config.p_max; ++p)
      for (int mask : config.face_subsets())
        for (ProblemKind kind : config.kinds) {
          if (kind == ProblemKind::CurlOnly && mask != 0) continue;
          if (kind == ProblemKind::TraceOnly && mask == 0) continue;
          for (int trial = 0; trial < config.trials; ++trial) tasks.push_back({t, p, mask, trial, kind});
        }

  SweepResult result;
  result.records.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      result.records[i] = detail::run_one(config, t.tet, elements[t.tet], t.p, t.mask, t.trial, t.kind);
    }
  };
  const int nthreads = std::min<int>(config.threads, static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::sort(result.records.begin(), result.records.end(),
            [&](const SweepRecord& a, const SweepRecord& b) { return detail::canonical_less(a, b, order); });
  result.summaries = summarize(result.records);
  return result;
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  const auto& cols = sweep_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& r : records) {
    os << detail::sanitize(r.tet_id) << ',' << format_double(r.kappa_K) << ',' << r.p << ',' << r.face_subset << ','
       << r.trial << ',' << kind_name(r.kind) << ',' << format_double(r.discrete_norm) << ','
       << format_double(r.reference_norm) << ',' << format_double(r.ratio) << ','
       << format_double(r.feasibility_residual) << ',' << r.rank << ',' << format_double(r.wall_time_ms) << ','
       << format_double(r.scale) << ',' << format_double(r.reference_prev_norm) << ','
       << format_double(r.enrichment_increase) << ',' << r.status << '\n';
  }
}

inline void write_summary_csv(std::ostream& os, const std::vector<SweepSummary>& summaries) {
  os << "tet_id,problem_kind,kappa_K,records,failed,min_ratio,max_ratio,slope,growth\n";
  for (const auto& s : summaries)
    os << detail::sanitize(s.tet_id) << ',' << kind_name(s.kind) << ',' << format_double(s.kappa_K) << ','
       << s.records << ',' << s.failed << ',' << format_double(s.min_ratio) << ',' << format_double(s.max_ratio)
       << ',' << format_double(s.slope) << ',' << format_double(s.growth) << '\n';
}

/// Writes the record CSV to `path` and the summary next to it (<stem>.summary.csv).
inline std::string write_sweep_files(const std::string& path, const SweepResult& result) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_sweep_csv(out, result.records);
  std::filesystem::path summary(path);
  summary.replace_extension(".summary.csv");
  std::ofstream sout(summary);
  if (!sout) throw Error("cannot write " + summary.string());
  write_summary_csv(sout, result.summaries);
  return summary.string();
}

/// Reads a record CSV back (numeric columns plus tet_id, kind and status).
inline std::vector<SweepRecord> read_sweep_csv(std::istream& is) {
  std::vector<SweepRecord> records;
  std::string line;
  if (!std::getline(is, line)) return records;
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) header.push_back(cell);
  }
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error("sweep CSV: missing column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_tet = column("tet_id"), c_kappa = column("kappa_K"), c_p = column("p"),
                    c_mask = column("face_subset"), c_trial = column("trial"), c_kind = column("problem_kind"),
                    c_disc = column("discrete_norm"), c_ref = column("reference_norm"), c_ratio = column("ratio"),
                    c_res = column("feasibility_residual"), c_rank = column("rank"), c_ms = column("wall_time_ms");
  const auto optional_column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? header.size() : static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_status = optional_column("status");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() < header.size() - (c_status < header.size() ? 1 : 0))
      throw Error("sweep CSV: short row: " + line);
    SweepRecord r;
    r.tet_id = cells[c_tet];
    r.kappa_K = std::stod(cells[c_kappa]);
    r.p = std::stoi(cells[c_p]);
    r.face_subset = std::stoi(cells[c_mask]);
    r.trial = std::stoi(cells[c_trial]);
    r.kind = parse_kind(cells[c_kind]);
    r.discrete_norm = std::stod(cells[c_disc]);
    r.reference_norm = std::stod(cells[c_ref]);
    r.ratio = std::stod(cells[c_ratio]);
    r.feasibility_residual = std::stod(cells[c_res]);
    r.rank = std::stoi(cells[c_rank]);
    r.wall_time_ms = std::stod(cells[c_ms]);
    if (c_status < cells.size()) r.status = cells[c_status];
    records.push_back(r);
  }
  return records;
}

/// Per (tet, kind): ratio-vs-p series (max and median over trials and
/// subsets) as <tet>_<kind>.csv plus a line chart <tet>_<kind>.svg.
/// Returns the written paths.
inline std::vector<std::string> emit_plots(const std::string& csv_path, const std::string& out_dir) {
  std::ifstream in(csv_path);
  if (!in) throw Error("emit_plots: cannot open " + csv_path);
  const std::vector<SweepRecord> records = read_sweep_csv(in);
  std::vector<std::string> written;
  if (records.empty()) return written;
  std::filesystem::create_directories(out_dir);

  std::map<std::pair<std::string, std::string>, std::map<int, std::vector<double>>> groups;
  for (const auto& r : records)
    if (r.ok() && std::isfinite(r.ratio)) groups[{r.tet_id, kind_name(r.kind)}][r.p].push_back(r.ratio);

  for (const auto& [key, series] : groups) {
    std::string stem = key.first + "_" + key.second;
    for (char& c : stem)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' && c != '-') c = '_';
    const std::filesystem::path base = std::filesystem::path(out_dir) / stem;

    std::vector<std::array<double, 3>> rows;  // p, max, median
    for (auto [p, values] : series) {
      std::sort(values.begin(), values.end());
      const std::size_t n = values.size();
      const double median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
      rows.push_back({static_cast<double>(p), values.back(), median});
    }
    {
      std::ofstream out(base.string() + ".csv");
      out << "p,max_ratio,median_ratio\n";
      for (const auto& r : rows)
        out << static_cast<int>(r[0]) << ',' << format_double(r[1]) << ',' << format_double(r[2]) << '\n';
      written.push_back(base.string() + ".csv");
    }
    {
      const double W = 480, H = 320, L = 60, B = 40, T = 30, R = 20;
      double pmin = rows.front()[0], pmax = rows.back()[0], ymax = 1.0;
      for (const auto& r : rows) ymax = std::max(ymax, r[1]);
      ymax *= 1.1;
      if (pmax == pmin) pmax = pmin + 1;
      auto X = [&](double p) { return L + (W - L - R) * (p - pmin) / (pmax - pmin); };
      auto Y = [&](double y) { return H - B - (H - B - T) * y / ymax; };
      std::ofstream out(base.string() + ".svg");
      out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
      out << "<text x=\"" << L << "\" y=\"20\" font-size=\"14\">" << key.first << " " << key.second
          << ": discrete / reference</text>\n";
      out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
          << "\" stroke=\"black\"/>\n";
      out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
          << "\" stroke=\"black\"/>\n";
      out << "<line x1=\"" << L << "\" y1=\"" << Y(1.0) << "\" x2=\"" << W - R << "\" y2=\"" << Y(1.0)
          << "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
      for (int column : {1, 2}) {
        out << "<polyline fill=\"none\" stroke=\"" << (column == 1 ? "crimson" : "steelblue") << "\" points=\"";
        for (const auto& r : rows) out << X(r[0]) << ',' << Y(r[column]) << ' ';
        out << "\"/>\n";
        for (const auto& r : rows)
          out << "<circle cx=\"" << X(r[0]) << "\" cy=\"" << Y(r[column]) << "\" r=\"3\" fill=\""
              << (column == 1 ? "crimson" : "steelblue") << "\"/>\n";
      }
      for (const auto& r : rows)
        out << "<text x=\"" << X(r[0]) - 4 << "\" y=\"" << H - B + 16 << "\" font-size=\"11\">"
            << static_cast<int>(r[0]) << "</text>\n";
      out << "<text x=\"5\" y=\"" << Y(1.0) + 4 << "\" font-size=\"11\">1</text>\n";
      out << "<text x=\"5\" y=\"" << Y(ymax / 1.1) + 4 << "\" font-size=\"11\">" << format_double(ymax / 1.1).substr(0, 6)
          << "</text>\n";
      out << "<text x=\"" << W - 140 << "\" y=\"" << T + 10
          << "\" font-size=\"11\" fill=\"crimson\">max</text>\n<text x=\"" << W - 100 << "\" y=\"" << T + 10
          << "\" font-size=\"11\" fill=\"steelblue\">median</text>\n";
      out << "</svg>\n";
      written.push_back(base.string() + ".svg");
    }
  }
  return written;
}

}  // namespace curlstab
