// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "circtrade/alias_table.hpp"
#include "circtrade/artifacts.hpp"
#include "circtrade/cluster.hpp"
#include "circtrade/detect.hpp"
#include "circtrade/embedder.hpp"
#include "circtrade/pipeline.hpp"
#include "circtrade/synth.hpp"
#include "circtrade/walker.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "tempdir.hpp"

#include "json.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace circtrade;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a) {
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

// 1. Planted rings in the default scenario are recovered and flagged.
Outcome ring_recovery_scenario() {
  fixtures::TempDir dir("accept-rings");
  const auto sc = generate_scenario(ScenarioConfig{});
  write_transactions(dir / "transactions.csv", sc.table);

  PipelineConfig cfg;
  cfg.input = dir / "transactions.csv";
  cfg.out_dir = dir / "out";
  cfg.threads = 1;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_pipeline(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const auto scores = evaluate(r.clusters, sc.truth);
  const auto rings = sc.truth.rings();
  std::size_t recovered = 0, recovered_flagged = 0;
  for (const auto& ring : rings) {
    for (const auto& c : r.communities) {
      if (jaccard(c.members, ring) < 0.5) continue;
      ++recovered;
      bool flagged = false;
      for (const auto& cyc : r.cycles.cycles) flagged |= cyc.flagged && cyc.community == c.id;
      recovered_flagged += flagged;
      break;
    }
  }
  const bool pass = scores.ari_ring_members >= 0.8 && scores.ring_recall >= 0.8 && recovered > 0 &&
                    recovered_flagged == recovered && secs < 120.0;
  return {pass, fmt("ring-member ARI %.4f (>= 0.8), recall %.2f (>= 0.8), %zu/%zu recovered rings flagged, "
                    "%d clusters, %.1f s (< 120)",
                    scores.ari_ring_members, scores.ring_recall, recovered_flagged, recovered,
                    r.clusters.cluster_count, secs)};
}

// 2. DBSCAN equals a brute-force reference on random instances.
Outcome dbscan_oracle() {
  std::mt19937_64 rng(2002);
  std::normal_distribution<double> g(0.0, 1.0);
  int matched = 0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = 1 + rng() % 200, d = 1 + rng() % 16;
    const std::size_t centers = 1 + rng() % 5;
    std::vector<std::vector<double>> c(centers, std::vector<double>(d));
    for (auto& v : c)
      for (double& x : v) x = g(rng);
    const double spread = std::uniform_real_distribution<double>(0.02, 1.0)(rng);
    DenseMatrix m(n, d);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& base = c[rng() % centers];
      for (std::size_t k = 0; k < d; ++k) m(i, k) = base[k] + spread * g(rng);
    }
    const DbscanConfig cfg{std::uniform_real_distribution<double>(0.0, 0.5)(rng), 1 + rng() % 10};
    matched += dbscan(m, cfg).labels == oracle::dbscan(m, cfg.eps, cfg.min_pts);
  }
  return {matched == trials, fmt("%d/%d instances identical to the brute-force reference", matched, trials)};
}

// 3. Analytic SGNS gradients against central differences.
Outcome gradient_check() {
  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  auto vec = [&](std::size_t d) {
    Vec v(d);
    for (double& x : v) x = u(rng);
    return v;
  };
  const double h = 1e-5;
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 2 + rng() % 63;
    Vec c = vec(d), x = vec(d);
    std::vector<Vec> negs(1 + rng() % 10);
    for (auto& n : negs) n = vec(d);
    const auto grad = sgns_gradients(c, x, negs);
    auto probe = [&](Vec& v, const Vec& analytic) {
      for (std::size_t k = 0; k < d; ++k) {
        const double saved = v[k];
        v[k] = saved + h;
        const double up = sgns_pair_loss(c, x, negs);
        v[k] = saved - h;
        const double down = sgns_pair_loss(c, x, negs);
        v[k] = saved;
        const double numeric = (up - down) / (2 * h);
        worst = std::max(worst, std::abs(numeric - analytic[k]) /
                                    std::max({std::abs(numeric), std::abs(analytic[k]), 1e-6}));
      }
    };
    probe(c, grad.center);
    probe(x, grad.context);
    for (std::size_t i = 0; i < negs.size(); ++i) probe(negs[i], grad.negatives[i]);
  }
  return {worst < 1e-4, fmt("worst per-coordinate relative error %.3g over 100 instances (< 1e-4)", worst)};
}

// 4. Alias tables reproduce their target distributions.
Outcome alias_fidelity() {
  std::mt19937_64 rng(4004);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> w(1 + rng() % 16);
    double total = 0;
    for (double& x : w) total += x = u(rng);
    const AliasTable table(w);
    Rng draw(derive_seed(77, static_cast<std::uint64_t>(t), 0));
    std::vector<double> counts(w.size());
    const int draws = 1'000'000;
    for (int i = 0; i < draws; ++i) counts[table.sample(draw)] += 1;
    double tv = 0;
    for (std::size_t i = 0; i < w.size(); ++i) tv += std::abs(counts[i] / draws - w[i] / total);
    worst = std::max(worst, tv / 2);
  }
  return {worst < 0.005, fmt("worst total-variation distance %.5f over 20 vectors x 1e6 draws (< 0.005)", worst)};
}

// 5. Second-order walk bias on a path, and p = q = 1 against first-order steps.
Outcome walk_bias() {
  const auto path = fixtures::path3();
  WalkConfig cfg;
  cfg.p = 1.0;
  cfg.q = 0.5;
  const Node2VecSampler biased(path, cfg);
  Rng rng(5005);
  const int steps = 100'000;
  int back = 0;
  for (int i = 0; i < steps; ++i) back += biased.step(0, 1, rng) == 0;
  const double f_back = static_cast<double>(back) / steps, f_out = 1.0 - f_back;
  const bool freq_ok = std::abs(f_back - 1.0 / 3) <= 0.01 && std::abs(f_out - 2.0 / 3) <= 0.01;

  const auto g = fixtures::ten_nodes();
  WalkConfig flat;
  flat.p = flat.q = 1.0;
  const Node2VecSampler sampler(g, flat);
  double stat = 0;
  std::size_t dof = 0;
  for (DealerId v = 0; v < g.node_count(); ++v) {
    const auto nb = g.neighbors(v);
    std::vector<double> second(nb.size()), first(nb.size());
    for (int i = 0; i < 10'000; ++i) {
      const DealerId prev = nb[static_cast<std::size_t>(i) % nb.size()];
      second[std::lower_bound(nb.begin(), nb.end(), sampler.step(prev, v, rng)) - nb.begin()] += 1;
      first[std::lower_bound(nb.begin(), nb.end(), sampler.first_step(v, rng)) - nb.begin()] += 1;
    }
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const double e = (second[k] + first[k]) / 2;
      stat += ((second[k] - e) * (second[k] - e) + (first[k] - e) * (first[k] - e)) / e;
    }
    dof += nb.size() - 1;
  }
  const double critical = boost::math::quantile(boost::math::chi_squared(static_cast<double>(dof)), 0.99);
  return {freq_ok && stat < critical,
          fmt("path frequencies (%.4f, %.4f) vs (1/3, 2/3) +- 0.01; chi-square %.2f < %.2f (dof %zu, alpha 0.01)",
              f_back, f_out, stat, critical, dof)};
}

// 6. Three-stage chain tax arithmetic.
Outcome tax_arithmetic() {
  const std::vector<Transaction> chain{{0, 1, 0, 1000}, {1, 2, 10, 1200}, {2, 3, 20, 1500}};
  const double a = expected_tax_liability(0, chain, 0.10), b = expected_tax_liability(1, chain, 0.10),
               c = expected_tax_liability(2, chain, 0.10);
  return {a == 100.0 && b == 20.0 && c == 30.0 && a + b + c == 150.0,
          fmt("liabilities %g/%g/%g, total %g (expected 100/20/30, 150)", a, b, c, a + b + c)};
}

// 7. Cycle enumeration against exhaustive search.
Outcome cycle_oracle() {
  std::mt19937_64 rng(7007);
  int matched = 0;
  std::size_t total_cycles = 0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = 2 + rng() % 14;
    std::vector<Transaction> txs;
    const std::size_t m = rng() % (4 * n + 1);
    for (std::size_t i = 0; i < m; ++i) {
      const auto s = static_cast<DealerId>(rng() % n);
      const auto b = static_cast<DealerId>((s + 1 + rng() % (n - 1)) % n);
      txs.push_back({s, b, static_cast<Minutes>(rng() % (20 * 1440)), static_cast<Rupees>(1000 + rng() % 40)});
    }
    const SalesFlowGraph g(n, txs);
    const auto community = extract_communities(ClusterAssignment{std::vector<int>(n, 0), 1}, g).at(0);
    const CycleConfig cfg{2 + rng() % 5, static_cast<Minutes>((1 + rng() % 25) * 1440), 0.02};
    const auto report = detect_cycles(community, cfg);
    std::set<std::vector<std::size_t>> found;
    for (const auto& c : report.cycles) {
      std::vector<std::size_t> e(c.edges.begin(), c.edges.end());
      std::sort(e.begin(), e.end());
      found.insert(e);
    }
    total_cycles += found.size();
    matched += found.size() == report.cycles.size() && found == oracle::cycles(txs, cfg.max_len, cfg.window);
  }
  return {matched == trials,
          fmt("%d/%d communities match exhaustive enumeration (%zu cycles total)", matched, trials, total_cycles)};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + CIRCTRADE_CLI + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

// 8. Two deterministic CLI runs give identical artifact hashes.
Outcome determinism() {
  fixtures::TempDir dir("accept-determinism");
  const auto data = "\"" + dir.path().string() + "\"";
  if (run_cli("synth --out-dir " + data + " --seed 42") != 0) return {false, "synth failed"};
  const auto tx = "\"" + (dir / "transactions.csv").string() + "\"";
  for (const char* run : {"a", "b"})
    if (run_cli("pipeline --deterministic --seed 7 --input " + tx + " --out-dir \"" + (dir / run).string() + "\"") != 0)
      return {false, std::string("pipeline run ") + run + " failed"};
  const auto a = read_json(dir / "a" / "manifest.json")["artifacts"];
  const auto b = read_json(dir / "b" / "manifest.json")["artifacts"];
  return {a == b && a.size() == 5, fmt("%zu artifact hashes, identical: %s", a.size(), a == b ? "yes" : "no")};
}

// 9. Barbell cliques separate in embedding space under default settings.
Outcome barbell_structure() {
  const auto g = fixtures::barbell();
  PipelineConfig cfg;
  cfg.propagate();
  const auto emb = train(generate_walks(g, cfg.walk), g.node_count(), cfg.embed);
  auto cosine = [&](std::size_t i, std::size_t j) {
    const auto a = emb.input.row(i), b = emb.input.row(j);
    double d = 0, na = 0, nb = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      d += a[k] * b[k];
      na += a[k] * a[k];
      nb += b[k] * b[k];
    }
    return d / std::sqrt(na * nb);
  };
  double intra = 0, inter = 0;
  int ni = 0, nx = 0;
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = i + 1; j < 10; ++j) {
      if ((i < 5) == (j < 5)) {
        intra += cosine(i, j);
        ++ni;
      } else {
        inter += cosine(i, j);
        ++nx;
      }
    }
  intra /= ni;
  inter /= nx;
  return {intra - inter >= 0.2, fmt("intra %.4f - inter %.4f = %.4f (>= 0.2), %zu dims", intra, inter,
                                    intra - inter, emb.dims())};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"planted ring recovery", ring_recovery_scenario},
      {"dbscan reference", dbscan_oracle},
      {"sgns gradient check", gradient_check},
      {"alias sampler fidelity", alias_fidelity},
      {"walk bias", walk_bias},
      {"tax arithmetic", tax_arithmetic},
      {"cycle enumeration reference", cycle_oracle},
      {"determinism", determinism},
      {"barbell embedding structure", barbell_structure},
  };
  int failures = 0, k = 0;
  for (const auto& [name, check] : criteria) {
    ++k;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", k, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", k - failures, k);
  return failures == 0 ? 0 : 1;
}
