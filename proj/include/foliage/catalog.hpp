#pragma once

// Built-in scenarios, including the four pillowcase connected sums, and the
// expected outcome rows checked by `foliage examples`.

#include <foliage/error.hpp>
#include <foliage/scenario.hpp>
#include <foliage/surgery.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace foliage {

inline const std::map<std::string, std::string>& builtin_scenarios() {
  static const std::map<std::string, std::string> k = {
      {"torus-dtheta", R"([model T]
orbifold = torus
theta = 1
phi = 0
)"},
      {"torus-rational", R"([model T]
orbifold = torus
theta = 2
phi = 3
)"},
      {"torus-rank-one", R"([model T]
orbifold = torus
theta = 1
phi = 2
)"},
      {"torus-irrational", R"([symbols]
p = sqrt(2)
q = sqrt(3)

[model T]
orbifold = torus
theta = p
phi = q
)"},
      {"pillowcase-ex1", R"(# dtheta on one pillowcase, an irrational form on the other, kind A
[symbols]
p = sqrt(2)
q = sqrt(3)

[model left]
orbifold = pillowcase
theta = 1
phi = 0
override = true

[model right]
orbifold = pillowcase
theta = p
phi = q
override = true

[surgery ex1]
kind = A
left = left
right = right
left_region = circle
left_window = 1/5, 4/5
left_center = 1/8, 1/8
right_region = special
right_window = 0, 1
right_center = 1/8, 1/8
right_shift = 0
tube_levels = 1/3, 1/2
)"},
      {"pillowcase-ex2", R"(# equal irrational forms, tube with both saddles on one level
[symbols]
p = sqrt(2)
q = sqrt(3)

[model left]
orbifold = pillowcase
theta = p
phi = q
override = true

[model right]
orbifold = pillowcase
theta = p
phi = q
override = true

[surgery ex2]
kind = C
left = left
right = right
left_region = special
left_window = 1/4, 1/2
right_region = special
right_window = 1/4, 1/2
right_shift = 0
tube_levels = 1/3, 1/3
)"},
      {"pillowcase-ex3", R"(# four independent coefficients, disjoint windows, kind B
[symbols]
p1 = sqrt(2)
q1 = sqrt(3)
p2 = sqrt(5)
q2 = sqrt(7)

[model left]
orbifold = pillowcase
theta = p1
phi = q1
override = true

[model right]
orbifold = pillowcase
theta = p2
phi = q2
override = true

[surgery ex3]
kind = B
left = left
right = right
left_region = special
left_window = 1, 3/2
right_region = special
right_window = 0, 1/2
right_shift = 0
tube_levels = 5/4, 1/4
)"},
      {"pillowcase-ex4", R"(# coprime integer form and an irrational multiple, windows meeting every leaf twice
[symbols]
a = sqrt(2)

[model left]
orbifold = pillowcase
theta = 2
phi = 3
override = true

[model right]
orbifold = pillowcase
theta = 2*a
phi = 3*a
override = true

[surgery ex4]
kind = A
left = left
right = right
left_region = circle
left_window = 0, 4
right_region = circle
right_window = 0, 4
right_shift = 0
tube_levels = 1/10, 16/5
)"},
      {"torus-b-chain", R"(# two rational tori joined by a tube: every leaf compact
[model left]
orbifold = torus
theta = 2
phi = 3

[model right]
orbifold = torus
theta = 1
phi = 0

[surgery chain]
kind = B
left = left
right = right
left_region = circle
left_window = 1/2, 3/4
right_region = circle
right_window = 0, 1/4
right_shift = 0
tube_levels = 5/8, 1/8
)"},
      {"torus-c-compact", R"(# level-coincident tube between two rational tori
[model left]
orbifold = torus
theta = 1
phi = 0

[model right]
orbifold = torus
theta = 1
phi = 1

[surgery join]
kind = C
left = left
right = right
left_region = circle
left_window = 0, 1/2
right_region = circle
right_window = 0, 1/2
right_shift = 0
tube_levels = 1/4, 1/4
)"},
      {"torus-pillowcase-mixed", R"(# rational torus glued to an irrational pillowcase, kind A
[symbols]
p = sqrt(2)
q = sqrt(3)

[model left]
orbifold = torus
theta = 1
phi = 0

[model right]
orbifold = pillowcase
theta = p
phi = q
override = true

[surgery mixed]
kind = A
left = left
right = right
left_region = circle
left_window = 1/10, 9/10
right_region = special
right_window = 0, 1
right_shift = 0
tube_levels = 1/4, 3/4
)"},
  };
  return k;
}

inline std::string builtin_text(const std::string& name) {
  auto it = builtin_scenarios().find(name);
  if (it == builtin_scenarios().end()) throw ScenarioError("no built-in scenario named '" + name + "'");
  return it->second;
}

/// Outcome summary compared against the stated catalog outcomes.
struct LeafMix {
  std::size_t compact_regular = 0;
  std::size_t noncompact_regular = 0;
  std::size_t compact_singular_components = 0;
  bool all_noncompact() const { return compact_regular == 0 && compact_singular_components == 0; }
};

inline LeafMix leaf_mix(const FoliationModel& m) {
  LeafMix x;
  for (const auto& leaf : m.catalog) {
    if (leaf.kind == LeafKind::CompactRegular) ++x.compact_regular;
    if (leaf.kind == LeafKind::NoncompactRegular) ++x.noncompact_regular;
    if (is_singular(leaf.kind))
      for (const auto& c : leaf.components) x.compact_singular_components += c.compact;
  }
  return x;
}

struct ExampleRow {
  std::string scenario;
  std::string stated;  // outcome as stated, in words
  bool transitive = false;
  bool (*leaves_ok)(const LeafMix&) = nullptr;
};

inline const std::vector<ExampleRow>& example_rows() {
  static const std::vector<ExampleRow> rows = {
      {"pillowcase-ex1", "transitive; compact and noncompact leaves", true,
       [](const LeafMix& m) { return m.compact_regular > 0 && m.noncompact_regular > 0; }},
      {"pillowcase-ex2", "nontransitive; one compact singular leaf component; all leaves noncompact", false,
       [](const LeafMix& m) { return m.compact_regular == 0 && m.compact_singular_components == 1; }},
      {"pillowcase-ex3", "nontransitive; some compact leaves", false,
       [](const LeafMix& m) { return m.compact_regular > 0; }},
      {"pillowcase-ex4", "transitive; all leaves noncompact", true, [](const LeafMix& m) { return m.all_noncompact(); }},
  };
  return rows;
}

struct ExampleOutcome {
  const ExampleRow* row = nullptr;
  bool transitive = false;
  Harmonicity harmonic = Harmonicity::NotIntrinsicallyHarmonic;
  LeafMix mix;
  bool matches() const {
    bool h = harmonic == Harmonicity::IntrinsicallyHarmonic;
    return transitive == row->transitive && h == row->transitive && row->leaves_ok(mix);
  }
};

inline ExampleOutcome run_example(const ExampleRow& row) {
  auto built = build(parse_scenario(builtin_text(row.scenario)));
  const auto& m = built.target_model();
  ExampleOutcome o;
  o.row = &row;
  o.transitive = is_transitive(m);
  o.harmonic = harmonicity_verdict(m);
  o.mix = leaf_mix(m);
  return o;
}

}  // namespace foliage
