// Copyright 2026 The ASIM Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "asim/errors.hpp"
#include "asim/growth.hpp"
#include "asim/snapshot.hpp"
#include "fixtures.hpp"

namespace asim {
namespace {

NetworkState grown(std::size_t n, std::uint64_t seed = 5) {
  NetworkState s(build_grid(8, 8, -1.0, 20'000, seed), ModelParams{}, seed);
  grow_to(s, n);
  return s;
}

TEST(Snapshot, RoundTripSmallState) {
  auto s = testing::line3(0.25, 0.1, 0.0);
  s.set_money(1, 3.75);
  s.set_transit_share(2, 0.125);
  const auto text = snapshot_text(s);
  EXPECT_EQ(text.rfind("ASIM-SNAPSHOT 1\n", 0), 0u);
  EXPECT_EQ(parse_snapshot(text), s);
}

TEST(Snapshot, RoundTripKeepsPopulationMode) {
  ModelParams p;
  p.shared_population = false;
  auto s = testing::empty_state({40, 60}, p);
  s.add_agent(0, 0.2);
  const auto back = parse_snapshot(snapshot_text(s));
  EXPECT_FALSE(back.params().shared_population);
  EXPECT_EQ(back, s);
}

TEST(Snapshot, MissingPopulationModeMeansShared) {
  auto s = testing::line3();
  auto text = snapshot_text(s);
  const auto key = text.find(" shared_population=1");
  ASSERT_NE(key, std::string::npos);
  text.erase(key, std::string(" shared_population=1").size());
  text.erase(text.rfind("checksum "));
  char sum[17];
  std::snprintf(sum, sizeof sum, "%016llx",
                static_cast<unsigned long long>(fnv1a64(text)));
  text += "checksum " + std::string(sum) + "\n";
  EXPECT_TRUE(parse_snapshot(text).params().shared_population);
}

TEST(Snapshot, RoundTripGrownStateIsBitExact) {
  const auto s = grown(300);
  const auto text = snapshot_text(s);
  const auto back = parse_snapshot(text);
  EXPECT_EQ(back, s);
  EXPECT_EQ(snapshot_text(back), text);
}

TEST(Snapshot, ReplayFromLoadedStateMatchesStraightRun) {
  NetworkState straight(build_grid(8, 8, -1.0, 20'000, 2), ModelParams{}, 2);
  NetworkState split = straight;
  grow_to(straight, 110);
  grow_to(split, 100);
  std::stringstream buf;
  save_snapshot(split, buf);
  NetworkState resumed = load_snapshot(buf);
  grow_to(resumed, 110);
  EXPECT_EQ(resumed, straight);
}

TEST(Snapshot, FileRoundTrip) {
  const auto s = grown(50);
  const auto path = std::filesystem::temp_directory_path() / "asim_snapshot_test.snap";
  save_snapshot(s, path);
  EXPECT_EQ(load_snapshot(path), s);
  std::filesystem::remove(path);
  EXPECT_THROW(load_snapshot(path), SnapshotError);
}

TEST(Snapshot, CorruptByteFailsChecksum) {
  auto text = snapshot_text(grown(40));
  const auto pos = text.find("agent 7 ");
  ASSERT_NE(pos, std::string::npos);
  text[pos + 6] = '8';
  EXPECT_THROW(parse_snapshot(text), SnapshotError);
}

TEST(Snapshot, TruncationAndVersion) {
  const auto text = snapshot_text(grown(20));
  EXPECT_THROW(parse_snapshot(text.substr(0, text.size() / 2)), SnapshotError);
  EXPECT_THROW(parse_snapshot(""), SnapshotError);
  auto bumped = text;
  bumped.replace(0, 15, "ASIM-SNAPSHOT 9");
  EXPECT_THROW(parse_snapshot(bumped), SnapshotError);
}

TEST(Snapshot, IdIsTrailerChecksum) {
  const auto text = snapshot_text(testing::line3());
  const auto id = snapshot_id(text);
  EXPECT_EQ(id.size(), 16u);
  EXPECT_NE(text.find("checksum " + id), std::string::npos);
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
}

}  // namespace
}  // namespace asim
