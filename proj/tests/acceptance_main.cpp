// End-to-end acceptance gate. Each numbered criterion prints exactly one
// PASS/FAIL line; the process exits nonzero if any fail. Tolerances are
// pinned here, not configurable.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "vitalclust/cluster/dbscan.hpp"
#include "vitalclust/cluster/kmeans.hpp"
#include "vitalclust/cluster/kmedoids.hpp"
#include "vitalclust/cluster/sbd.hpp"
#include "vitalclust/core/hash.hpp"
#include "vitalclust/core/rng.hpp"
#include "vitalclust/core/textio.hpp"
#include "vitalclust/ingest/csv.hpp"
#include "vitalclust/ingest/synthetic.hpp"
#include "vitalclust/pipeline/config.hpp"
#include "vitalclust/pipeline/run.hpp"
#include "vitalclust/prognosis/bootstrap.hpp"
#include "vitalclust/prognosis/report.hpp"
#include "vitalclust/validity/indices.hpp"

using namespace vitalclust;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kTol = 1e-9;

int g_failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
  std::printf("criterion %d  %-42s %s%s%s\n", idx, name, pass ? "PASS" : "FAIL",
              detail.empty() ? "" : "  ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

features::FeatureMatrix make_matrix(const oracle::Points& pts) {
  features::FeatureMatrix m;
  const auto d = pts.empty() ? 0 : pts[0].size();
  m.values.resize(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(d));
  char buf[16];
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::snprintf(buf, sizeof buf, "p%04zu", i);
    m.patient_ids.push_back(buf);
    for (std::size_t j = 0; j < d; ++j)
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pts[i][j];
  }
  for (std::size_t j = 0; j < d; ++j) m.feature_names.push_back("f" + std::to_string(j));
  return m;
}

// ---------------------------------------------------------------------------
// 1. Library indices/distances against brute-force references.

void criterion_oracles() {
  const auto t0 = Clock::now();
  std::string fail;

  for (int rep = 0; rep < 110 && fail.empty(); ++rep) {
    SeededRng rng(hash64(101, static_cast<std::uint64_t>(rep)));
    const int k = 2 + static_cast<int>(rng.uniform_index(3));
    const std::size_t n =
        static_cast<std::size_t>(k) + 4 + rng.uniform_index(45);
    const std::size_t d = 1 + rng.uniform_index(5);
    oracle::Points pts(n, oracle::Point(d));
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = i < static_cast<std::size_t>(k)
                      ? static_cast<int>(i)
                      : static_cast<int>(rng.uniform_index(static_cast<std::size_t>(k)));
      for (auto& v : pts[i]) v = 4.0 * labels[i] + rng.normal();
    }
    Eigen::MatrixXd x(n, d);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < d; ++j)
        x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pts[i][j];
    if (std::abs(validity::chi(x, labels) - oracle::chi(pts, labels)) > kTol)
      fail = "chi mismatch, instance " + std::to_string(rep);
    if (std::abs(validity::dbi(x, labels) - oracle::dbi(pts, labels)) > kTol)
      fail = "dbi mismatch, instance " + std::to_string(rep);
  }

  for (int rep = 0; rep < 110 && fail.empty(); ++rep) {
    SeededRng rng(hash64(102, static_cast<std::uint64_t>(rep)));
    const std::size_t n = 5 + rng.uniform_index(46);
    const int k = 2 + static_cast<int>(rng.uniform_index(4));
    std::vector<int> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform01() < 0.1 ? -1 : static_cast<int>(rng.uniform_index(static_cast<std::size_t>(k)));
      b[i] = rng.uniform01() < 0.1 ? -1 : static_cast<int>(rng.uniform_index(static_cast<std::size_t>(k)));
    }
    if (std::abs(validity::ari(a, b) - oracle::ari(a, b)) > kTol)
      fail = "ari mismatch, instance " + std::to_string(rep);
  }

  for (int rep = 0; rep < 110 && fail.empty(); ++rep) {
    SeededRng rng(hash64(103, static_cast<std::uint64_t>(rep)));
    const std::size_t n = 5 + rng.uniform_index(46);
    const std::size_t d = 2 + rng.uniform_index(4);
    oracle::Points pts(n, oracle::Point(d));
    for (auto& p : pts)
      for (auto& v : p) v = 10.0 * rng.uniform01();
    const double eps = 0.3 + 1.8 * rng.uniform01();
    const int min_pts = 2 + static_cast<int>(rng.uniform_index(5));

    cluster::ClusterParams params;
    params.algorithm = cluster::Algorithm::DBSCAN;
    params.eps = eps;
    params.min_pts = min_pts;
    const auto model = cluster::dbscan_fit(make_matrix(pts), params, 1);
    if (model.label_values() != oracle::dbscan(pts, eps, min_pts))
      fail = "dbscan mismatch, instance " + std::to_string(rep);
  }

  for (int rep = 0; rep < 110 && fail.empty(); ++rep) {
    SeededRng rng(hash64(104, static_cast<std::uint64_t>(rep)));
    const std::size_t t = 2 + rng.uniform_index(11);
    std::vector<double> xs(t), ys(t);
    for (auto& v : xs) v = rng.normal();
    for (auto& v : ys) v = rng.normal();
    Eigen::VectorXd xe = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(t));
    Eigen::VectorXd ye = Eigen::Map<Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(t));
    const auto got = cluster::sbd(xe, ye);
    const auto want = oracle::sbd(xs, ys);
    if (std::abs(got.distance - want.distance) > kTol || got.best_shift != want.shift)
      fail = "sbd mismatch, instance " + std::to_string(rep);
  }

  const double elapsed = seconds_since(t0);
  if (fail.empty() && elapsed >= 30.0)
    fail = "too slow: " + std::to_string(elapsed) + " s";
  char detail[96];
  std::snprintf(detail, sizeof detail, "(110 instances per check, %.1f s)", elapsed);
  report(1, "indices and distances match brute force", fail.empty(),
         fail.empty() ? detail : fail);
}

// ---------------------------------------------------------------------------
// 2. Hand-computed fixtures, exact.

void criterion_fixtures() {
  std::string fail;

  Eigen::MatrixXd quad(4, 1);
  quad << 0, 2, 10, 12;
  const std::vector<int> pair_labels{0, 0, 1, 1};
  // Between = 2*(5-6)^2 + 2*(11-6)^2 = 100, within = 4 * 1^2.
  if (validity::chi(quad, pair_labels) != 50.0) fail = "chi fixture != 50";
  // Spreads 1 and 1, centroid gap 10.
  if (validity::dbi(quad, pair_labels) != 0.2) fail = "dbi fixture != 0.2";

  oracle::Points line{{0}, {1}, {9}, {10}};
  cluster::ClusterParams params;
  params.k = 2;
  params.seed = 1;
  params.n_init = 10;
  const auto model = cluster::kmeans_fit(make_matrix(line), params, 1);
  if (model.inertia != 1.0)
    fail = "kmeans inertia on {0,1,9,10} is " + std::to_string(model.inertia);

  const std::map<int, double> curve{{1, 100}, {2, 60}, {3, 20}, {4, 18}, {5, 17}};
  if (validity::elbow_select_k(curve) != 3) fail = "elbow fixture != 3";

  report(2, "hand-computed fixtures exact", fail.empty(), fail);
}

// ---------------------------------------------------------------------------
// 3. Planted-cluster recovery through the full pipeline.

// Stable / deteriorating / erratic archetypes; adjacent baselines sit at
// least five noise SDs apart on every channel, and trend and variability
// separate the groups as well.
ingest::SyntheticSpec recovery_spec(int per_group, std::uint64_t seed,
                                    double era_frac) {
  ingest::SyntheticSpec spec;
  spec.seed = seed;
  spec.era_fraction_validation = era_frac;
  const double baselines[3][5] = {{36.0, 70, 95, 12, 99},
                                  {37.25, 95, 80, 18, 96},
                                  {38.5, 120, 65, 24, 93}};
  const double slopes[3][5] = {{0, 0, 0, 0, 0},
                               {0.1, 1.5, -1.0, 0.5, -0.3},
                               {-0.08, -1.0, 0.8, -0.4, 0.2}};
  const double noise[3][5] = {{0.15, 3.0, 2.0, 0.8, 0.4},
                              {0.20, 4.0, 2.5, 1.0, 0.5},
                              {0.25, 5.0, 3.0, 1.2, 0.6}};
  const double icu[3] = {0.03, 0.06, 0.09};
  const double hosp[3] = {0.08, 0.12, 0.16};
  for (int g = 0; g < 3; ++g) {
    ingest::SubgroupSpec sub;
    sub.n_patients = per_group;
    sub.icu_death_prob = icu[g];
    sub.hospital_death_prob = hosp[g];
    for (int c = 0; c < kNumChannels; ++c) {
      sub.channels[static_cast<std::size_t>(c)].baseline = baselines[g][c];
      sub.channels[static_cast<std::size_t>(c)].slope = slopes[g][c];
      sub.channels[static_cast<std::size_t>(c)].noise_std = noise[g][c];
    }
    spec.subgroups.push_back(sub);
  }
  return spec;
}

fs::path write_cohort(const ingest::SyntheticCohort& synth, const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("vt_accept_" + tag);
  fs::create_directories(dir);
  ingest::write_timeseries_csv(synth.cohort.series, dir / "timeseries.csv");
  std::vector<StaticRecord> statics;
  for (const auto& s : synth.cohort.series)
    statics.push_back(synth.cohort.statics.at(s.patient_id));
  ingest::write_static_csv(statics, dir / "static.csv");
  return dir;
}

double truth_ari(const std::vector<std::pair<std::string, int>>& labels,
                 const std::map<std::string, int>& truth) {
  std::vector<int> got, want;
  for (const auto& [id, l] : labels) {
    got.push_back(l);
    want.push_back(truth.at(id));
  }
  return validity::ari(got, want);
}

void criterion_recovery() {
  const auto t0 = Clock::now();
  std::string fail;

  // ~1000 development + ~250 validation patients per subgroup.
  const auto synth = ingest::generate_synthetic_cohort(recovery_spec(1250, 4242, 0.2));
  const fs::path data = write_cohort(synth, "recovery");
  const fs::path out = fs::temp_directory_path() / "vt_accept_recovery_out";
  fs::remove_all(out);

  const std::string config_text = std::string("{") +
      "\"timeseries_csv\": \"" + (data / "timeseries.csv").string() + "\", " +
      "\"static_csv\": \"" + (data / "static.csv").string() + "\", " +
      "\"out_dir\": \"" + out.string() + "\", " +
      "\"seed\": 7, \"bootstrap_b\": 50, \"k_min\": 2, \"k_max\": 6}";

  double dev_ari = 0, val_ari = 0;
  int chosen_k = 0;
  std::size_t dev_n = 0, val_n = 0;
  try {
    const auto cfg = pipeline::parse_config(config_text, "acceptance");
    const auto art = pipeline::cmd_run(cfg, config_text, 1);
    chosen_k = art.validity.chosen_k;
    dev_n = art.dev_labels.size();
    val_n = art.val_labels.size();
    dev_ari = truth_ari(art.dev_labels, synth.true_subgroup);
    val_ari = truth_ari(art.val_labels, synth.true_subgroup);
  } catch (const std::exception& e) {
    fail = std::string("pipeline failed: ") + e.what();
  }

  const double elapsed = seconds_since(t0);
  if (fail.empty() && chosen_k != 3)
    fail = "sweep chose k=" + std::to_string(chosen_k);
  if (fail.empty() && dev_ari < 0.9)
    fail = "dev ari " + std::to_string(dev_ari);
  if (fail.empty() && val_ari < 0.9)
    fail = "frozen val ari " + std::to_string(val_ari);
  if (fail.empty() && elapsed >= 60.0)
    fail = "too slow: " + std::to_string(elapsed) + " s";

  char detail[128];
  std::snprintf(detail, sizeof detail,
                "(k=3, dev ari %.3f over %zu, val ari %.3f over %zu, %.1f s)",
                dev_ari, dev_n, val_ari, val_n, elapsed);
  report(3, "planted subgroups recovered end to end", fail.empty(),
         fail.empty() ? detail : fail);
}

// ---------------------------------------------------------------------------
// 4. Mortality ranking reproduction across 100 seeds.

bool g_weighted_identity_ok = true;

void check_weighted_identity(const prognosis::PrognosisReport& rep) {
  for (const auto& era : rep.eras) {
    std::size_t icu = 0, hosp = 0, n = 0;
    for (const auto& st : era.subgroups) {
      icu += st.icu_deaths;
      hosp += st.hosp_deaths;
      n += st.n;
      if (!st.empty &&
          (st.icu_mean != static_cast<double>(st.icu_deaths) / static_cast<double>(st.n) ||
           st.hosp_mean != static_cast<double>(st.hosp_deaths) / static_cast<double>(st.n)))
        g_weighted_identity_ok = false;
    }
    if (icu != era.overall.icu_deaths || hosp != era.overall.hosp_deaths ||
        n != era.overall.n)
      g_weighted_identity_ok = false;
  }
}

void criterion_prognosis_ranking() {
  const auto t0 = Clock::now();
  // Planted per-subgroup death probabilities; subgroup 2 carries the
  // highest hospital risk, subgroups 1 and 2 sit above the overall ICU rate.
  const double icu[3] = {0.049, 0.047, 0.024};
  const double hosp[3] = {0.088, 0.109, 0.087};

  int hits = 0;
  for (int s = 0; s < 100; ++s) {
    ingest::SyntheticSpec spec;
    spec.seed = hash64(400, static_cast<std::uint64_t>(s));
    spec.era_fraction_validation = 0.0;
    for (int g = 0; g < 3; ++g) {
      ingest::SubgroupSpec sub;
      sub.n_patients = 2000;
      sub.icu_death_prob = icu[g];
      sub.hospital_death_prob = hosp[g];
      for (int c = 0; c < kNumChannels; ++c) {
        sub.channels[static_cast<std::size_t>(c)].baseline = 80;
        sub.channels[static_cast<std::size_t>(c)].noise_std = 1;
      }
      spec.subgroups.push_back(sub);
    }
    const auto synth = ingest::generate_synthetic_cohort(spec);

    // Planted membership as labels: this criterion scores the report, not
    // the clustering.
    std::vector<std::pair<std::string, int>> labels;
    for (const auto& series : synth.cohort.series)
      labels.emplace_back(series.patient_id,
                          synth.true_subgroup.at(series.patient_id));
    const auto rep = prognosis::subgroup_report(labels, {}, synth.cohort.statics,
                                                25, spec.seed, 1);
    check_weighted_identity(rep);

    const auto& era = rep.eras.at(0);
    const bool hosp_top = !era.hosp_ranking.empty() && era.hosp_ranking[0] == 2;
    const bool icu_above =
        era.subgroups.at(0).icu_mean > era.overall.icu_mean &&
        era.subgroups.at(1).icu_mean > era.overall.icu_mean;
    if (hosp_top && icu_above) ++hits;
  }

  char detail[96];
  std::snprintf(detail, sizeof detail, "(%d of 100 seeds, %.1f s)", hits,
                seconds_since(t0));
  report(4, "mortality rankings reproduced across seeds", hits >= 95, detail);
}

// ---------------------------------------------------------------------------
// 5. Worker-count determinism through the CLI.

int shell(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void criterion_determinism() {
  std::string fail;
  const auto synth = ingest::generate_synthetic_cohort(recovery_spec(60, 99, 0.3));
  const fs::path data = write_cohort(synth, "det");
  const fs::path out_a = fs::temp_directory_path() / "vt_accept_det_a";
  const fs::path out_b = fs::temp_directory_path() / "vt_accept_det_b";
  fs::remove_all(out_a);
  fs::remove_all(out_b);

  const fs::path cfg = data / "config.json";
  textio::write_text_file(cfg, std::string("{") +
      "\"timeseries_csv\": \"" + (data / "timeseries.csv").string() + "\", " +
      "\"static_csv\": \"" + (data / "static.csv").string() + "\", " +
      "\"seed\": 13, \"bootstrap_b\": 200, \"k_min\": 2, \"k_max\": 4, " +
      "\"n_init\": 4, \"algorithms\": [\"kmeans\", \"kmedoids\"]}");

  const std::string base = std::string(VITALCLUST_CLI_PATH) +
                           " run --config " + cfg.string();
  if (shell(base + " --workers 1 --out " + out_a.string() + " >/dev/null 2>&1") != 0)
    fail = "run with --workers 1 failed";
  if (fail.empty() &&
      shell(base + " --workers 4 --out " + out_b.string() + " >/dev/null 2>&1") != 0)
    fail = "run with --workers 4 failed";
  if (fail.empty()) {
    const std::string a = textio::read_text_file(out_a / "manifest.json");
    const std::string b = textio::read_text_file(out_b / "manifest.json");
    if (a != b) fail = "manifests differ between worker counts";
  }
  report(5, "outputs byte-identical across --workers", fail.empty(), fail);
}

// ---------------------------------------------------------------------------
// 6. Algorithm invariants.

void criterion_invariants() {
  std::string fail;

  for (int run = 0; run < 50 && fail.empty(); ++run) {
    SeededRng rng(hash64(601, static_cast<std::uint64_t>(run)));
    const std::size_t n = 20 + rng.uniform_index(41);
    const std::size_t d = 2 + rng.uniform_index(5);
    const int k = 2 + static_cast<int>(rng.uniform_index(4));
    oracle::Points pts(n, oracle::Point(d));
    for (auto& p : pts)
      for (auto& v : p) v = 10.0 * rng.normal();
    const auto matrix = make_matrix(pts);

    cluster::ClusterParams params;
    params.k = k;
    params.seed = hash64(602, static_cast<std::uint64_t>(run));
    params.n_init = 1;
    const auto km = cluster::kmeans_fit(matrix, params, 1);
    for (std::size_t i = 1; i < km.inertia_trace.size(); ++i)
      if (km.inertia_trace[i] > km.inertia_trace[i - 1] + kTol)
        fail = "lloyd inertia rose, run " + std::to_string(run);

    params.algorithm = cluster::Algorithm::KMedoids;
    const auto pam = cluster::kmedoids_fit(matrix, params, 1);
    for (std::size_t i = 1; i < pam.swap_cost_trace.size(); ++i)
      if (pam.swap_cost_trace[i] >= pam.swap_cost_trace[i - 1])
        fail = "pam swap did not lower cost, run " + std::to_string(run);
  }

  for (int rep = 0; rep < 1000 && fail.empty(); ++rep) {
    SeededRng rng(hash64(603, static_cast<std::uint64_t>(rep)));
    const std::size_t t = 2 + rng.uniform_index(29);
    Eigen::VectorXd x(static_cast<Eigen::Index>(t)), y(static_cast<Eigen::Index>(t));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x[i] = rng.normal();
      y[i] = rng.normal();
    }
    const auto xy = cluster::sbd(x, y);
    const auto yx = cluster::sbd(y, x);
    if (std::abs(xy.distance - yx.distance) > kTol)
      fail = "sbd asymmetric, pair " + std::to_string(rep);
    if (xy.distance < -kTol || xy.distance > 2.0 + kTol)
      fail = "sbd out of range, pair " + std::to_string(rep);
    const auto self = cluster::sbd(x, x);
    if (std::abs(self.distance) > 1e-12 || self.best_shift != 0)
      fail = "sbd self-distance nonzero, pair " + std::to_string(rep);
  }

  // Weighted-mean identity on fresh random reports (criterion 4's reports
  // were checked as they were produced).
  for (int rep = 0; rep < 20 && fail.empty(); ++rep) {
    SeededRng rng(hash64(604, static_cast<std::uint64_t>(rep)));
    std::vector<std::pair<std::string, int>> labels;
    std::unordered_map<std::string, StaticRecord> statics;
    const int k = 2 + static_cast<int>(rng.uniform_index(3));
    const std::size_t n = 30 + rng.uniform_index(80);
    for (std::size_t i = 0; i < n; ++i) {
      StaticRecord r;
      r.patient_id = "q" + std::to_string(i);
      r.age = 40;
      r.gender = "M";
      r.icu_death = rng.uniform01() < 0.2;
      r.hospital_death = r.icu_death || rng.uniform01() < 0.15;
      const int label = rng.uniform01() < 0.1
                            ? -1
                            : static_cast<int>(rng.uniform_index(static_cast<std::size_t>(k)));
      labels.emplace_back(r.patient_id, label);
      statics.emplace(r.patient_id, r);
    }
    check_weighted_identity(
        prognosis::subgroup_report(labels, {}, statics, 50, 7, 1));
  }
  if (fail.empty() && !g_weighted_identity_ok)
    fail = "weighted-mean mortality identity violated";

  report(6, "algorithm invariant suites hold", fail.empty(), fail);
}

// ---------------------------------------------------------------------------
// 7. Bootstrap standard error sanity.

void criterion_bootstrap() {
  const auto est =
      prognosis::mortality_bootstrap({true, false, false, false}, 10000, 17);
  const double analytic = 0.2165;  // sqrt(p(1-p)/n), p=1/4, n=4
  const bool pass = std::abs(est.se - analytic) <= 0.10 * analytic;
  char detail[64];
  std::snprintf(detail, sizeof detail, "(se %.4f vs %.4f analytic)", est.se, analytic);
  report(7, "bootstrap SE matches analytic value", pass, detail);
}

}  // namespace

int main() {
  criterion_oracles();
  criterion_fixtures();
  criterion_recovery();
  criterion_prognosis_ranking();
  criterion_determinism();
  criterion_invariants();
  criterion_bootstrap();
  if (g_failures > 0) std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
