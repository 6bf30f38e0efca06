#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "mpp/mpa.hpp"
#include "mpp/rng.hpp"
#include "oracles.hpp"

using namespace mpp;

namespace {

MpaConfig tiny_config() {
  MpaConfig c;
  c.speed_levels = {0.0, 0.4};
  c.steering_levels = {-0.15, 0.0, 0.15};
  c.horizon = 3;
  return c;
}

const MotionPrimitiveAutomaton& small_mpa() {
  static const MotionPrimitiveAutomaton mpa =
      MotionPrimitiveAutomaton::generate(MpaConfig::small_vehicle());
  return mpa;
}

std::vector<int> outgoing_of(const MotionPrimitiveAutomaton& mpa, int q) {
  std::vector<int> ids;
  for (int id = 0; id < static_cast<int>(mpa.primitives().size()); ++id)
    if (mpa.primitive(id).from == q) ids.push_back(id);
  return ids;
}

}  // namespace

TEST_CASE("level grid spans all speed/steering pairs") {
  const auto& mpa = small_mpa();
  CHECK(mpa.n_states() == 20);
  // One level of change per step in each dimension: sum over states of
  // (speed options) * (steering options) = (2+3+3+2) * (2+3+3+3+2).
  CHECK(mpa.primitives().size() == 130);
  const int q = mpa.state_index(0.8, -0.15);
  CHECK(mpa.state(q).speed == 0.8);
  CHECK(mpa.state(q).steering == -0.15);
  CHECK_THROWS_AS(mpa.state_index(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("config validation") {
  MpaConfig c = tiny_config();
  c.speed_levels = {0.1, 0.4};
  CHECK_THROWS_AS(MotionPrimitiveAutomaton::generate(c), std::invalid_argument);
  c = tiny_config();
  c.steering_levels = {0.15, -0.15};
  CHECK_THROWS_AS(MotionPrimitiveAutomaton::generate(c), std::invalid_argument);
  // Top speed needs three deceleration steps but the horizon has two.
  c = MpaConfig::small_vehicle();
  c.horizon = 2;
  CHECK_THROWS_AS(MotionPrimitiveAutomaton::generate(c), std::invalid_argument);
  // Speed gap exceeds what one step of max deceleration can shed, so the
  // fast states can never stop.
  c = tiny_config();
  c.speed_levels = {0.0, 0.8};
  CHECK_THROWS_AS(MotionPrimitiveAutomaton::generate(c), std::invalid_argument);
}

TEST_CASE("primitives start at the origin and hit their levels exactly") {
  const auto mpa = MotionPrimitiveAutomaton::generate(tiny_config());
  for (const MotionPrimitive& mp : mpa.primitives()) {
    REQUIRE(mp.states.size() ==
            static_cast<std::size_t>(mpa.config().trajectory_samples + 1));
    const VehicleState& first = mp.states.front();
    CHECK(first.x == 0.0);
    CHECK(first.y == 0.0);
    CHECK(first.heading == 0.0);
    CHECK(first.speed == mpa.state(mp.from).speed);
    CHECK(first.steering == mpa.state(mp.from).steering);
    CHECK(mp.states.back().speed == mpa.state(mp.to).speed);
    CHECK(mp.states.back().steering == mpa.state(mp.to).steering);
    const double dv = mpa.state(mp.to).speed - mpa.state(mp.from).speed;
    CHECK(std::abs(dv) <= mpa.config().max_accel * mpa.config().step_duration + 1e-9);
    CHECK(mp.input.accel == doctest::Approx(dv / mpa.config().step_duration));
  }
}

TEST_CASE("standstill states carry an exact self loop") {
  const auto mpa = MotionPrimitiveAutomaton::generate(tiny_config());
  for (int q = 0; q < mpa.n_states(); ++q) {
    if (!mpa.is_final(q)) {
      CHECK_THROWS_AS(mpa.standstill_primitive(q), std::invalid_argument);
      continue;
    }
    const int id = mpa.standstill_primitive(q);
    const MotionPrimitive& mp = mpa.primitive(id);
    CHECK(mp.from == q);
    CHECK(mp.to == q);
    CHECK(mp.input.accel == 0.0);
    CHECK(mp.input.steer_rate == 0.0);
    CHECK(mp.states.back().x == 0.0);
    CHECK(mp.states.back().y == 0.0);
    CHECK(mp.states.back().heading == 0.0);
  }
}

TEST_CASE("braking distances count level-down steps") {
  const auto& mpa = small_mpa();
  CHECK(mpa.steps_to_stop(mpa.state_index(0.0, 0.3)) == 0);
  CHECK(mpa.steps_to_stop(mpa.state_index(0.4, 0.0)) == 1);
  CHECK(mpa.steps_to_stop(mpa.state_index(0.8, -0.3)) == 2);
  CHECK(mpa.steps_to_stop(mpa.state_index(1.2, 0.15)) == 3);
}

TEST_CASE("admissible transitions keep the stop guarantee") {
  const auto& mpa = small_mpa();
  const int h = mpa.config().horizon;
  for (int q = 0; q < mpa.n_states(); ++q) {
    for (int l = 0; l < h; ++l) {
      std::vector<int> expected;
      for (int id : outgoing_of(mpa, q))
        if (mpa.steps_to_stop(mpa.primitive(id).to) <= h - (l + 1))
          expected.push_back(id);
      CHECK(mpa.admissible(q, l) == expected);
    }
    // The last step may only enter standstill states.
    for (int id : mpa.admissible(q, h - 1))
      CHECK(mpa.is_final(mpa.primitive(id).to));
  }
}

TEST_CASE("every full-horizon chain ends at standstill") {
  const auto mpa = MotionPrimitiveAutomaton::generate(tiny_config());
  const int h = mpa.config().horizon;
  std::uint64_t chains = 0;
  const auto recurse = [&](auto&& self, int q, int depth) -> void {
    if (depth == h) {
      ++chains;
      CHECK(mpa.is_final(q));
      return;
    }
    for (int id : mpa.admissible(q, depth))
      self(self, mpa.primitive(id).to, depth + 1);
  };
  for (int q = 0; q < mpa.n_states(); ++q) recurse(recurse, q, 0);
  CHECK(chains > 0);
}

TEST_CASE("occupancy hulls the sampled footprints") {
  const auto& mpa = small_mpa();
  for (const MotionPrimitive& mp : mpa.primitives()) {
    REQUIRE(mp.occupancy.vertices.size() >= 4);
    // Uninflated body corners at the first and last pose lie inside.
    for (const VehicleState& s : {mp.states.front(), mp.states.back()}) {
      const ConvexPolygon box = footprint(mpa.config().vehicle, s);
      for (const Vec2& v : box.vertices)
        CHECK(point_in_polygon(mp.occupancy, v, 1e-9));
    }
  }
}

TEST_CASE("single-state automaton reaches exactly its own footprint") {
  MpaConfig c;
  c.speed_levels = {0.0};
  c.steering_levels = {0.0};
  const auto mpa = MotionPrimitiveAutomaton::generate(c);
  REQUIRE(mpa.n_states() == 1);
  REQUIRE(mpa.primitives().size() == 1);
  const ConvexPolygon expected =
      footprint(c.vehicle, {0.0, 0.0, 0.0, 0.0, 0.0}, c.occupancy_margin);
  REQUIRE(mpa.reachable(0).size() == static_cast<std::size_t>(c.horizon));
  for (const ConvexPolygon& poly : mpa.reachable(0)) {
    for (const Vec2& v : poly.vertices)
      CHECK(point_in_polygon(expected, v, 1e-9));
    for (const Vec2& v : expected.vertices)
      CHECK(point_in_polygon(poly, v, 1e-9));
  }
}

TEST_CASE("reachable sets cover random admissible chains") {
  const auto& mpa = small_mpa();
  for (const int q0 : {mpa.state_index(0.0, 0.0), mpa.state_index(1.2, 0.0),
                       mpa.state_index(0.8, 0.3)}) {
    SplitMix64 rng(mix_seed(0x6d6f6eull, q0));
    for (int trial = 0; trial < 100; ++trial) {
      const std::vector<int> chain = oracle::random_chain(mpa, q0, rng);
      VehicleState pose{0.0, 0.0, 0.0, mpa.state(q0).speed,
                        mpa.state(q0).steering};
      for (std::size_t l = 0; l < chain.size(); ++l) {
        const MotionPrimitive& mp = mpa.primitive(chain[l]);
        const ConvexPolygon occ =
            transform(mp.occupancy, {pose.x, pose.y}, pose.heading);
        for (const Vec2& v : occ.vertices)
          CHECK(point_in_polygon(mpa.reachable(q0)[l], v, 1e-7));
        pose = chain_pose(pose, mp.states.back());
      }
    }
  }
}

TEST_CASE("serialization round trip preserves the automaton") {
  const auto mpa = MotionPrimitiveAutomaton::generate(tiny_config());
  const std::string text = mpa.to_json().dump();
  const auto back =
      MotionPrimitiveAutomaton::from_json(nlohmann::json::parse(text));
  REQUIRE(back.n_states() == mpa.n_states());
  REQUIRE(back.primitives().size() == mpa.primitives().size());
  for (int q = 0; q < mpa.n_states(); ++q) {
    CHECK(back.state(q).speed == mpa.state(q).speed);
    CHECK(back.state(q).steering == mpa.state(q).steering);
    CHECK(back.steps_to_stop(q) == mpa.steps_to_stop(q));
    for (int l = 0; l < mpa.config().horizon; ++l)
      CHECK(back.admissible(q, l) == mpa.admissible(q, l));
    REQUIRE(back.reachable(q).size() == mpa.reachable(q).size());
    for (std::size_t l = 0; l < mpa.reachable(q).size(); ++l)
      CHECK(back.reachable(q)[l].vertices == mpa.reachable(q)[l].vertices);
  }
  for (std::size_t id = 0; id < mpa.primitives().size(); ++id) {
    CHECK(back.primitive(id).from == mpa.primitive(id).from);
    CHECK(back.primitive(id).to == mpa.primitive(id).to);
    CHECK(back.primitive(id).states.back().x == mpa.primitive(id).states.back().x);
  }
}
