#include "edgealloc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "edgealloc/datasets.hpp"
#include "json.hpp"

namespace edgealloc {

namespace {

double mean_of(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double sample_stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double s = 0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

double ci999_halfwidth(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const boost::math::students_t dist(static_cast<double>(xs.size() - 1));
  const double t = boost::math::quantile(dist, 1.0 - 0.001 / 2.0);
  return t * sample_stddev(xs) / std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace

Instance random_instance(int n_algorithms, int n_edge, SeededRng& rng) {
  if (n_algorithms < 1) fail(Errc::ConfigError, "need at least one algorithm");

  std::vector<AlgorithmSpec> specs;
  for (int i = 0; i < n_algorithms; ++i) {
    AlgorithmSpec s;
    s.id = 2 + i;
    const double edge_t = rng.uniform_range(0.2, 2.0);
    s.exec_by_class[NodeClass::Edge] = edge_t;
    s.exec_by_class[NodeClass::Fog] = edge_t * rng.uniform_range(0.3, 0.7);
    s.exec_by_class[NodeClass::Cloud] = edge_t * rng.uniform_range(0.1, 0.4);
    s.input_internal_bits = std::floor(rng.uniform_range(0, 20000));
    s.output_bits = std::floor(rng.uniform_range(100, 20000));
    s.processing_bytes = std::floor(rng.uniform_range(1e5, 1e7));
    if (rng.uniform() < 0.2)
      s.input_external_bits = std::floor(rng.uniform_range(8e4, 8e6));
    specs.push_back(std::move(s));
  }
  std::vector<std::pair<AlgorithmId, AlgorithmId>> edges;
  for (int i = 0; i < n_algorithms; ++i)
    for (int j = i + 1; j < n_algorithms; ++j)
      if (rng.uniform() < 0.4) edges.emplace_back(2 + i, 2 + j);

  LinkClassTable table;
  auto random_params = [&] {
    LinkClassParams p;
    p.base_latency_s = rng.uniform_range(0.01, 0.5);
    p.delay.mu = rng.uniform_range(0.0, 0.3);
    p.delay.sigma = rng.uniform_range(0.0, 0.3);
    return p;
  };
  table.entries[{NodeClass::Cloud, NodeClass::Fog}] = random_params();
  table.entries[{NodeClass::Fog, NodeClass::Cloud}] = random_params();
  table.entries[{NodeClass::Fog, NodeClass::Edge}] = random_params();
  table.entries[{NodeClass::Edge, NodeClass::Fog}] = random_params();
  table.entries[{NodeClass::Edge, NodeClass::Edge}] = random_params();

  Instance inst;
  inst.graph =
      lift_to_semilattice(AlgorithmGraph(std::move(specs), std::move(edges)));
  inst.arch = generate_architecture(n_edge, rng, table);
  inst.profile = MemoryProfile::from_graph(inst.graph);
  return inst;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  const AlgorithmGraph& graph = cfg.graph ? *cfg.graph : paper_graph();
  const MemoryProfile& profile = cfg.profile ? *cfg.profile : paper_profile();
  const LinkClassTable& links = cfg.links ? *cfg.links : paper_tab2p();
  if (cfg.reps_per_arch < 1)
    fail(Errc::ConfigError, "reps_per_arch must be >= 1");

  std::vector<SweepRow> rows;
  for (int n : cfg.n_range) {
    SeededRng batch_rng =
        SeededRng(cfg.seed).derive(0x6261746368ULL ^ static_cast<std::uint64_t>(n));
    const int max_archs = cfg.archs_per_n > 0 ? cfg.archs_per_n : n + 5;
    const std::vector<Architecture> archs =
        nonisomorphic_batch(n, batch_rng, links, max_archs);

    struct ArchStats {
      bool failed = false;
      std::string error;
      std::vector<double> ours, baseline;
      std::vector<double> ours_time, baseline_time;
    };

    // Architectures evaluated concurrently; rows joined in index order.
    std::vector<std::future<ArchStats>> futures;
    for (std::size_t ai = 0; ai < archs.size(); ++ai) {
      futures.push_back(std::async(std::launch::async, [&, ai] {
        ArchStats st;
        try {
          for (int rep = 0; rep < cfg.reps_per_arch; ++rep) {
            const std::uint64_t stream =
                (static_cast<std::uint64_t>(n) << 40) ^
                (static_cast<std::uint64_t>(ai) << 20) ^
                static_cast<std::uint64_t>(rep);
            SeededRng rep_rng = SeededRng(cfg.seed).derive(stream);
            const Architecture frozen = archs[ai].with_frozen_delays(rep_rng);
            SolveResult ours =
                solve(graph, frozen, profile, cfg.objective, cfg.seed);
            SolveResult base = solve_baseline_li2018(graph, frozen, profile,
                                                     cfg.objective, cfg.seed);
            st.ours.push_back(ours.distance);
            st.baseline.push_back(base.distance);
            st.ours_time.push_back(ours.wall_time_s);
            st.baseline_time.push_back(base.wall_time_s);
          }
        } catch (const std::exception& e) {
          st.failed = true;
          st.error = e.what();
        }
        return st;
      }));
    }

    std::vector<double> ours_means, base_means;
    std::vector<double> ours_reps, base_reps;  // per-rep, single-arch case
    std::vector<double> ours_times, base_times;
    for (std::size_t ai = 0; ai < futures.size(); ++ai) {
      ArchStats st = futures[ai].get();
      if (st.failed) {
        std::cerr << "sweep: n=" << n << " architecture " << ai
                  << " failed: " << st.error << "\n";
        continue;
      }
      ours_means.push_back(mean_of(st.ours));
      base_means.push_back(mean_of(st.baseline));
      ours_reps.insert(ours_reps.end(), st.ours.begin(), st.ours.end());
      base_reps.insert(base_reps.end(), st.baseline.begin(), st.baseline.end());
      ours_times.insert(ours_times.end(), st.ours_time.begin(),
                        st.ours_time.end());
      base_times.insert(base_times.end(), st.baseline_time.begin(),
                        st.baseline_time.end());
    }
    if (ours_means.empty()) {
      std::cerr << "sweep: n=" << n << " produced no results\n";
      continue;
    }

    // Spread statistics come from per-architecture means; with a single
    // architecture the repetitions are the only source of spread.
    const std::vector<double>& ours_spread =
        ours_means.size() > 1 ? ours_means : ours_reps;
    const std::vector<double>& base_spread =
        base_means.size() > 1 ? base_means : base_reps;

    const double ours_time = cfg.measure_time ? mean_of(ours_times) : 0.0;
    const double base_time = cfg.measure_time ? mean_of(base_times) : 0.0;
    rows.push_back({n, "ours", mean_of(ours_means), sample_stddev(ours_spread),
                    ci999_halfwidth(ours_spread), ours_time});
    rows.push_back({n, "baseline", mean_of(base_means),
                    sample_stddev(base_spread), ci999_halfwidth(base_spread),
                    base_time});
  }
  return rows;
}

ScalabilityReport run_scalability(const ScalabilityConfig& cfg) {
  if (cfg.min_nodes < 3)
    fail(Errc::ConfigError,
         "scalability grid needs at least 3 nodes (one robot, fog, cloud)");
  if (cfg.max_algorithms < cfg.min_algorithms || cfg.max_nodes < cfg.min_nodes)
    fail(Errc::ConfigError, "empty scalability grid");

  ScalabilityReport report;
  for (int na = cfg.min_algorithms; na <= cfg.max_algorithms; ++na) {
    for (int nn = cfg.min_nodes; nn <= cfg.max_nodes; ++nn) {
      std::vector<double> times;
      for (int rep = 0; rep < std::max(1, cfg.reps); ++rep) {
        const std::uint64_t stream = (static_cast<std::uint64_t>(na) << 40) ^
                                     (static_cast<std::uint64_t>(nn) << 20) ^
                                     static_cast<std::uint64_t>(rep);
        SeededRng rng = SeededRng(cfg.seed).derive(stream);
        const Instance inst = random_instance(na, nn - 2, rng);
        const SolveResult r =
            solve(inst.graph, inst.arch, inst.profile, cfg.objective);
        times.push_back(r.wall_time_s);
      }
      report.points.push_back({na, nn, mean_of(times)});
    }
  }

  // Log-log regression over whichever grid axes actually vary.
  const bool vary_alg = cfg.max_algorithms > cfg.min_algorithms;
  const bool vary_nodes = cfg.max_nodes > cfg.min_nodes;
  const std::size_t k = (vary_alg ? 1u : 0u) + (vary_nodes ? 1u : 0u);
  const std::size_t m = report.points.size();
  if (k == 0 || m < k + 2) return report;

  // Ordinary least squares via normal equations (at most 3x3).
  const std::size_t dims = k + 1;
  std::vector<std::vector<double>> xtx(dims, std::vector<double>(dims, 0));
  std::vector<double> xty(dims, 0);
  double y_mean = 0;
  std::vector<double> ys;
  for (const ScalabilityPoint& p : report.points) {
    const double y = std::log(std::max(p.mean_solve_time_s, 1e-9));
    ys.push_back(y);
    y_mean += y;
    std::vector<double> x{1.0};
    if (vary_alg) x.push_back(std::log(static_cast<double>(p.n_algorithms)));
    if (vary_nodes) x.push_back(std::log(static_cast<double>(p.n_nodes)));
    for (std::size_t i = 0; i < dims; ++i) {
      xty[i] += x[i] * y;
      for (std::size_t j = 0; j < dims; ++j) xtx[i][j] += x[i] * x[j];
    }
  }
  y_mean /= static_cast<double>(m);

  // Gaussian elimination with partial pivoting.
  std::vector<double> beta = xty;
  {
    auto a = xtx;
    for (std::size_t col = 0; col < dims; ++col) {
      std::size_t pivot = col;
      for (std::size_t r = col + 1; r < dims; ++r)
        if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
      std::swap(a[col], a[pivot]);
      std::swap(beta[col], beta[pivot]);
      if (std::abs(a[col][col]) < 1e-12) return report;  // singular design
      for (std::size_t r = 0; r < dims; ++r) {
        if (r == col) continue;
        const double f = a[r][col] / a[col][col];
        for (std::size_t c = col; c < dims; ++c) a[r][c] -= f * a[col][c];
        beta[r] -= f * beta[col];
      }
    }
    for (std::size_t i = 0; i < dims; ++i) beta[i] /= a[i][i];
  }

  double ss_tot = 0, ss_res = 0;
  std::size_t idx = 0;
  for (const ScalabilityPoint& p : report.points) {
    std::vector<double> x{1.0};
    if (vary_alg) x.push_back(std::log(static_cast<double>(p.n_algorithms)));
    if (vary_nodes) x.push_back(std::log(static_cast<double>(p.n_nodes)));
    double fit = 0;
    for (std::size_t i = 0; i < dims; ++i) fit += beta[i] * x[i];
    const double y = ys[idx++];
    ss_tot += (y - y_mean) * (y - y_mean);
    ss_res += (y - fit) * (y - fit);
  }
  if (ss_tot <= 0) return report;

  report.regression_done = true;
  report.intercept = beta[0];
  std::size_t bi = 1;
  report.coef_algorithms = vary_alg ? beta[bi++] : 0;
  report.coef_nodes = vary_nodes ? beta[bi++] : 0;
  report.r_squared = 1.0 - ss_res / ss_tot;

  const double df2 = static_cast<double>(m - k - 1);
  if (report.r_squared < 1.0 && df2 > 0) {
    const double f = (report.r_squared / static_cast<double>(k)) /
                     ((1.0 - report.r_squared) / df2);
    const boost::math::fisher_f fdist(static_cast<double>(k), df2);
    report.p_value = 1.0 - boost::math::cdf(fdist, f);
  } else {
    report.p_value = 0.0;
  }
  return report;
}

std::string format_tables(const std::vector<SweepRow>& rows, TableFormat f) {
  if (f == TableFormat::Csv) {
    std::string out = "n,method,mean_distance,stddev,ci_999,mean_solve_time_s\n";
    for (const SweepRow& r : rows)
      out += fmt::format("{},{},{},{},{},{}\n", r.n, r.method, r.mean_distance,
                         r.stddev, r.ci_999, r.mean_solve_time_s);
    return out;
  }
  nlohmann::json j = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    j.push_back({{"n", r.n},
                 {"method", r.method},
                 {"mean_distance", r.mean_distance},
                 {"stddev", r.stddev},
                 {"ci_999", r.ci_999},
                 {"mean_solve_time_s", r.mean_solve_time_s}});
  }
  return j.dump(2) + "\n";
}

void emit_tables(const std::vector<SweepRow>& rows, TableFormat f,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::IoError, "cannot write " + path);
  out << format_tables(rows, f);
  if (!out) fail(Errc::IoError, "write to " + path + " failed");
}

std::vector<SweepRow> parse_tables(const std::string& text, TableFormat f) {
  std::vector<SweepRow> rows;
  if (f == TableFormat::Json) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_array())
      fail(Errc::ConfigError, "result table JSON must be an array");
    for (const auto& e : j) {
      SweepRow r;
      r.n = e.at("n").get<int>();
      r.method = e.at("method").get<std::string>();
      r.mean_distance = e.at("mean_distance").get<double>();
      r.stddev = e.at("stddev").get<double>();
      r.ci_999 = e.at("ci_999").get<double>();
      r.mean_solve_time_s = e.at("mean_solve_time_s").get<double>();
      rows.push_back(std::move(r));
    }
    return rows;
  }
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      continue;  // header
    }
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 6)
      fail(Errc::ConfigError, "malformed CSV row: " + line);
    SweepRow r;
    r.n = std::stoi(fields[0]);
    r.method = fields[1];
    r.mean_distance = std::stod(fields[2]);
    r.stddev = std::stod(fields[3]);
    r.ci_999 = std::stod(fields[4]);
    r.mean_solve_time_s = std::stod(fields[5]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace edgealloc
