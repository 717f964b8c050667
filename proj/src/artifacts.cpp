#include "circtrade/artifacts.hpp"

#include "circtrade/error.hpp"

#include <openssl/evp.h>

#include "json.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace circtrade {

namespace {

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write failure on " + path.string());
}

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

template <class T>
T to_number(const std::string& s, std::size_t line) {
  T value{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ParseError(line, "bad number '" + s + "'");
  return value;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Reads the "# nodes N" header line.
std::size_t read_node_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing '# nodes N' header");
  strip_cr(line);
  constexpr std::string_view prefix = "# nodes ";
  if (line.rfind(prefix, 0) != 0) throw ParseError(1, "missing '# nodes N' header");
  return to_number<std::size_t>(line.substr(prefix.size()), 1);
}

}  // namespace

void write_edge_list(const fs::path& path, const WeightedGraph& g) {
  auto out = open_out(path);
  out << "# nodes " << g.node_count() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << ' ' << fmt_double(e.weight) << '\n';
  finish(out, path);
}

WeightedGraph read_edge_list(const fs::path& path) {
  auto in = open_in(path);
  const std::size_t n = read_node_header(in);
  std::vector<WeightedEdge> edges;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line, ' ');
    if (f.size() != 3) throw ParseError(line_no, "expected 'u v weight'");
    const auto u = to_number<DealerId>(f[0], line_no), v = to_number<DealerId>(f[1], line_no);
    if (u >= n || v >= n) throw ParseError(line_no, "node id exceeds declared node count");
    edges.push_back({u, v, to_number<double>(f[2], line_no)});
  }
  try {
    return WeightedGraph::from_edges(n, edges);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

void write_walks(const fs::path& path, const WalkCorpus& corpus, std::size_t node_count) {
  auto out = open_out(path);
  out << "# nodes " << node_count << '\n';
  for (const auto& w : corpus.walks) {
    for (std::size_t i = 0; i < w.size(); ++i) out << (i ? " " : "") << w[i];
    out << '\n';
  }
  finish(out, path);
}

WalkFile read_walks(const fs::path& path) {
  auto in = open_in(path);
  WalkFile wf;
  wf.node_count = read_node_header(in);
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    Walk w;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) w.push_back(to_number<DealerId>(tok, line_no));
    wf.corpus.walks.push_back(std::move(w));
  }
  return wf;
}

void write_embeddings(const fs::path& path, const DenseMatrix& vectors) {
  auto out = open_out(path);
  out << "dealer_id";
  for (std::size_t k = 0; k < vectors.cols(); ++k) out << ",dim_" << k;
  out << '\n';
  for (std::size_t i = 0; i < vectors.rows(); ++i) {
    out << i;
    for (double x : vectors.row(i)) out << ',' << fmt_double(x);
    out << '\n';
  }
  finish(out, path);
}

DenseMatrix read_embeddings(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing embedding header");
  strip_cr(line);
  const auto header = split(line, ',');
  if (header.empty() || header[0] != "dealer_id") throw ParseError(1, "embedding header must start with dealer_id");
  const std::size_t d = header.size() - 1;
  for (std::size_t k = 0; k < d; ++k)
    if (header[k + 1] != "dim_" + std::to_string(k)) throw ParseError(1, "unexpected column '" + header[k + 1] + "'");

  std::vector<std::vector<double>> rows;
  std::vector<bool> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != d + 1) throw ParseError(line_no, "expected " + std::to_string(d + 1) + " fields");
    const auto id = to_number<std::size_t>(f[0], line_no);
    if (id >= rows.size()) {
      rows.resize(id + 1);
      seen.resize(id + 1, false);
    }
    if (seen[id]) throw ParseError(line_no, "duplicate dealer_id " + f[0]);
    seen[id] = true;
    rows[id].resize(d);
    for (std::size_t k = 0; k < d; ++k) rows[id][k] = to_number<double>(f[k + 1], line_no);
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw ParseError(0, "embedding for dealer_id " + std::to_string(i) + " missing");
  DenseMatrix m(rows.size(), d);
  for (std::size_t i = 0; i < rows.size(); ++i) std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  return m;
}

void write_clusters(const fs::path& path, const ClusterAssignment& assignment) {
  auto out = open_out(path);
  out << "dealer_id,cluster_label\n";
  for (std::size_t i = 0; i < assignment.labels.size(); ++i) out << i << ',' << assignment.labels[i] << '\n';
  finish(out, path);
}

ClusterAssignment read_clusters(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing cluster header");
  strip_cr(line);
  if (line != "dealer_id,cluster_label") throw ParseError(1, "cluster header must be dealer_id,cluster_label");
  ClusterAssignment a;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 2) throw ParseError(line_no, "expected dealer_id,cluster_label");
    if (to_number<std::size_t>(f[0], line_no) != a.labels.size())
      throw ParseError(line_no, "dealer ids must be listed in order 0..n-1");
    const int label = to_number<int>(f[1], line_no);
    if (label < -1) throw ParseError(line_no, "cluster label must be >= -1");
    a.labels.push_back(label);
    a.cluster_count = std::max(a.cluster_count, label + 1);
  }
  return a;
}

void write_projection(const fs::path& path, const DenseMatrix& coords, const ClusterAssignment& assignment) {
  if (coords.rows() != assignment.labels.size()) throw LengthMismatch("projection and labels differ in length");
  auto out = open_out(path);
  out << "dealer_id,x,y,cluster_label\n";
  for (std::size_t i = 0; i < coords.rows(); ++i)
    out << i << ',' << fmt_double(coords(i, 0)) << ',' << fmt_double(coords(i, 1)) << ',' << assignment.labels[i]
        << '\n';
  finish(out, path);
}

void write_dealers(const fs::path& path, const DealerRegistry& registry) {
  auto out = open_out(path);
  out << "dealer_id,name\n";
  for (std::size_t i = 0; i < registry.size(); ++i) out << i << ',' << registry.name(static_cast<DealerId>(i)) << '\n';
  finish(out, path);
}

std::vector<std::string> read_dealers(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> names;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(line_no, "expected dealer_id,name");
    if (to_number<std::size_t>(line.substr(0, comma), line_no) != names.size())
      throw ParseError(line_no, "dealer ids must be listed in order 0..n-1");
    names.push_back(line.substr(comma + 1));
  }
  return names;
}

void write_cycles(const fs::path& path, const CycleReport& report) {
  auto out = open_out(path);
  for (const auto& c : report.cycles) {
    nlohmann::ordered_json j;
    j["community"] = c.community;
    j["nodes"] = c.nodes;
    j["amounts"] = c.amounts;
    j["spread"] = c.spread;
    j["window_minutes"] = c.time_span;
    j["flagged"] = c.flagged;
    out << j.dump() << '\n';
  }
  finish(out, path);
}

void write_ground_truth(const fs::path& path, const GroundTruth& truth, const DealerRegistry& registry) {
  nlohmann::ordered_json j;
  j["dealers"] = registry.names();
  auto membership = nlohmann::json::array();
  for (const auto& r : truth.ring_membership) membership.push_back(r ? nlohmann::json(*r) : nlohmann::json(nullptr));
  j["ring_membership"] = std::move(membership);
  auto cycles = nlohmann::ordered_json::array();
  for (const auto& c : truth.planted_cycles) {
    nlohmann::ordered_json cj;
    cj["ring"] = c.ring;
    cj["nodes"] = c.nodes;
    cj["amounts"] = c.amounts;
    cj["timestamps"] = c.timestamps;
    cycles.push_back(std::move(cj));
  }
  j["planted_cycles"] = std::move(cycles);
  auto out = open_out(path);
  out << j.dump(1) << '\n';
  finish(out, path);
}

GroundTruthFile read_ground_truth(const fs::path& path) {
  auto in = open_in(path);
  GroundTruthFile gt;
  try {
    const auto j = nlohmann::json::parse(in);
    gt.dealers = j.at("dealers").get<std::vector<std::string>>();
    for (const auto& r : j.at("ring_membership"))
      gt.truth.ring_membership.push_back(r.is_null() ? std::nullopt : std::optional<int>(r.get<int>()));
    if (gt.truth.ring_membership.size() != gt.dealers.size())
      throw ParseError(0, "ring_membership and dealers differ in length");
    for (const auto& cj : j.at("planted_cycles")) {
      PlantedCycle c;
      c.ring = cj.at("ring").get<int>();
      c.nodes = cj.at("nodes").get<std::vector<DealerId>>();
      c.amounts = cj.at("amounts").get<std::vector<Rupees>>();
      c.timestamps = cj.at("timestamps").get<std::vector<Minutes>>();
      gt.truth.planted_cycles.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
  return gt;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

}  // namespace circtrade
