// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#include "asim/snapshot.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "asim/errors.hpp"

namespace asim {

namespace {

constexpr std::string_view kMagic = "ASIM-SNAPSHOT";
constexpr std::string_view kChecksumTag = "checksum ";

void put_real(std::string& out, double x) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  out.append(buf.data(), ptr);
}

template <typename T>
void put_uint(std::string& out, T x) {
  std::array<char, 24> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  out.append(buf.data(), ptr);
}

std::string hex16(std::uint64_t x) {
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx",
                static_cast<unsigned long long>(x));
  return std::string(buf.data(), 16);
}

// Whitespace tokenizer over one line with typed reads.
class Fields {
 public:
  Fields(std::string_view line, std::size_t line_no)
      : line_(line), line_no_(line_no) {}

  std::string_view word() {
    while (pos_ < line_.size() && line_[pos_] == ' ') ++pos_;
    const std::size_t start = pos_;
    while (pos_ < line_.size() && line_[pos_] != ' ') ++pos_;
    if (start == pos_) fail("unexpected end of record");
    return line_.substr(start, pos_ - start);
  }

  void expect(std::string_view tag) {
    if (word() != tag) fail("expected '" + std::string(tag) + "'");
  }

  template <typename T>
  T uint() {
    const auto w = word();
    T value{};
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), value);
    if (ec != std::errc{} || ptr != w.data() + w.size()) fail("bad integer");
    return value;
  }

  double real() {
    const auto w = word();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), value);
    if (ec != std::errc{} || ptr != w.data() + w.size()) fail("bad real");
    return value;
  }

  double keyed_real(std::string_view key) {
    const auto w = word();
    if (w.substr(0, key.size()) != key || w.size() <= key.size() ||
        w[key.size()] != '=') {
      fail("expected " + std::string(key) + "=");
    }
    const auto v = w.substr(key.size() + 1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
    if (ec != std::errc{} || ptr != v.data() + v.size()) fail("bad real");
    return value;
  }

  std::string_view rest() const { return line_.substr(pos_); }

  bool at_end() {
    while (pos_ < line_.size() && line_[pos_] == ' ') ++pos_;
    return pos_ == line_.size();
  }

  void end() {
    while (pos_ < line_.size() && line_[pos_] == ' ') ++pos_;
    if (pos_ != line_.size()) fail("trailing data");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw SnapshotError("snapshot line " + std::to_string(line_no_) + ": " +
                        what);
  }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

// Body without trailer, after verifying the trailer.
std::string_view verified_body(std::string_view text) {
  if (text.empty() || text.back() != '\n') {
    throw SnapshotError("snapshot truncated: missing final newline");
  }
  const std::size_t last = text.rfind('\n', text.size() - 2);
  const std::size_t trailer_at = last == std::string_view::npos ? 0 : last + 1;
  const std::string_view trailer =
      text.substr(trailer_at, text.size() - 1 - trailer_at);
  if (trailer.substr(0, kChecksumTag.size()) != kChecksumTag) {
    throw SnapshotError("snapshot truncated: missing checksum trailer");
  }
  const std::string_view body = text.substr(0, trailer_at);
  const std::string expected(trailer.substr(kChecksumTag.size()));
  if (expected != hex16(fnv1a64(body))) {
    throw SnapshotError("snapshot checksum mismatch");
  }
  return body;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string snapshot_text(const NetworkState& state) {
  std::string out;
  const ModelParams& p = state.params();
  const PopulationGrid& grid = state.grid();

  out += kMagic;
  out += ' ';
  put_uint(out, kSnapshotVersion);
  out += "\nparams av_degree=";
  put_real(out, p.av_degree);
  out += " extent_cost=";
  put_real(out, p.extent_cost);
  out += " base_income=";
  put_real(out, p.base_income);
  out += " pop_distr_exp=";
  put_real(out, p.pop_distr_exp);
  out += " wickedness=";
  put_real(out, p.avg_wickedness);
  out += " traffic_period=";
  put_uint(out, p.traffic_period);
  out += " income_coeff=";
  put_real(out, p.income_coeff);
  out += " link_retry_factor=";
  put_real(out, p.link_retry_factor);
  out += " extent_upkeep=";
  put_real(out, p.extent_upkeep);
  out += p.shared_population ? " shared_population=1" : " shared_population=0";
  out += "\nstep ";
  put_uint(out, state.step());
  out += "\ngrid ";
  put_uint(out, grid.width());
  out += ' ';
  put_uint(out, grid.height());
  out += "\nrng ";
  out += state.rng().state();
  out += "\nagents ";
  put_uint(out, state.agent_count());
  out += '\n';

  for (LocationId loc = 0; loc < grid.size(); ++loc) {
    const auto occ = state.occupants(loc);
    out += "loc ";
    put_uint(out, loc);
    out += ' ';
    put_uint(out, grid.population(loc));
    out += ' ';
    put_uint(out, occ.size());
    for (AgentId id : occ) {
      out += ' ';
      put_uint(out, id);
    }
    out += '\n';
  }

  for (const Agent& a : state.agents()) {
    out += "agent ";
    put_uint(out, a.id);
    out += ' ';
    put_uint(out, a.created_at);
    out += ' ';
    put_real(out, a.money);
    out += ' ';
    put_real(out, a.wickedness_rate);
    out += ' ';
    put_real(out, a.transit_share);
    out += ' ';
    put_uint(out, a.locations.size());
    for (LocationId loc : a.locations) {
      out += ' ';
      put_uint(out, loc);
    }
    out += ' ';
    put_uint(out, a.links.size());
    for (AgentId id : a.links) {
      out += ' ';
      put_uint(out, id);
    }
    out += '\n';
  }

  const std::string digest = hex16(fnv1a64(out));
  out += kChecksumTag;
  out += digest;
  out += '\n';
  return out;
}

void save_snapshot(const NetworkState& state, std::ostream& out) {
  out << snapshot_text(state);
  if (!out) throw std::runtime_error("failed writing snapshot");
}

void save_snapshot(const NetworkState& state, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  save_snapshot(state, out);
}

NetworkState parse_snapshot(std::string_view text) {
  // Check the magic first so foreign files get a clear message.
  if (text.substr(0, kMagic.size()) != kMagic) {
    throw SnapshotError("not an ASIM snapshot");
  }
  {
    const std::size_t eol = text.find('\n');
    Fields header(text.substr(0, eol), 1);
    header.expect(kMagic);
    const int version = header.uint<int>();
    if (version != kSnapshotVersion) {
      throw SnapshotError("unsupported snapshot version " +
                          std::to_string(version) + " (expected " +
                          std::to_string(kSnapshotVersion) + ")");
    }
  }
  const std::string_view body = verified_body(text);

  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos < body.size();) {
    const std::size_t eol = body.find('\n', pos);
    lines.push_back(body.substr(pos, eol - pos));
    pos = eol + 1;
  }
  std::size_t at = 1;
  auto next = [&](std::string_view tag) {
    if (at >= lines.size()) {
      throw SnapshotError("snapshot truncated before '" + std::string(tag) + "'");
    }
    Fields f(lines[at], at + 1);
    ++at;
    f.expect(tag);
    return f;
  };

  ModelParams params;
  {
    Fields f = next("params");
    params.av_degree = f.keyed_real("av_degree");
    params.extent_cost = f.keyed_real("extent_cost");
    params.base_income = f.keyed_real("base_income");
    params.pop_distr_exp = f.keyed_real("pop_distr_exp");
    params.avg_wickedness = f.keyed_real("wickedness");
    const double period = f.keyed_real("traffic_period");
    params.traffic_period = static_cast<Step>(period);
    params.income_coeff = f.keyed_real("income_coeff");
    params.link_retry_factor = f.keyed_real("link_retry_factor");
    params.extent_upkeep = f.keyed_real("extent_upkeep");
    // Older snapshots end at extent_upkeep and used shared cells.
    if (!f.at_end()) {
      const double shared = f.keyed_real("shared_population");
      if (shared != 0.0 && shared != 1.0) f.fail("shared_population must be 0 or 1");
      params.shared_population = shared == 1.0;
    }
    f.end();
  }
  Fields step_f = next("step");
  const auto step = step_f.uint<Step>();
  step_f.end();
  Fields grid_f = next("grid");
  const auto width = grid_f.uint<std::uint32_t>();
  const auto height = grid_f.uint<std::uint32_t>();
  grid_f.end();
  Fields rng_f = next("rng");
  const std::string rng_state(rng_f.rest());
  Fields count_f = next("agents");
  const auto n_agents = count_f.uint<std::size_t>();
  count_f.end();

  const std::size_t cells = std::size_t{width} * height;
  std::vector<std::uint64_t> populations(cells);
  std::vector<std::vector<AgentId>> occupancy(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    Fields f = next("loc");
    if (f.uint<std::size_t>() != c) f.fail("location records out of order");
    populations[c] = f.uint<std::uint64_t>();
    const auto k = f.uint<std::size_t>();
    occupancy[c].reserve(k);
    for (std::size_t i = 0; i < k; ++i) occupancy[c].push_back(f.uint<AgentId>());
    f.end();
  }

  std::vector<Agent> agents(n_agents);
  for (std::size_t i = 0; i < n_agents; ++i) {
    Fields f = next("agent");
    Agent& a = agents[i];
    a.id = f.uint<AgentId>();
    if (a.id != i) f.fail("agent records out of order");
    a.created_at = f.uint<Step>();
    a.money = f.real();
    a.wickedness_rate = f.real();
    a.transit_share = f.real();
    const auto m = f.uint<std::size_t>();
    a.locations.reserve(m);
    for (std::size_t j = 0; j < m; ++j) a.locations.push_back(f.uint<LocationId>());
    const auto k = f.uint<std::size_t>();
    a.links.reserve(k);
    for (std::size_t j = 0; j < k; ++j) a.links.push_back(f.uint<AgentId>());
    f.end();
  }
  if (at != lines.size()) throw SnapshotError("unexpected records after agents");

  try {
    return NetworkState::restore(
        PopulationGrid(width, height, std::move(populations)), params, step,
        rng_state, std::move(agents), std::move(occupancy));
  } catch (const ConfigError& e) {
    throw SnapshotError(std::string("snapshot has invalid configuration: ") +
                        e.what());
  }
}

NetworkState load_snapshot(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_snapshot(buf.str());
}

NetworkState load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open snapshot " + path.string());
  return load_snapshot(in);
}

std::string snapshot_id(std::string_view text) {
  return hex16(fnv1a64(verified_body(text)));
}

}  // namespace asim
