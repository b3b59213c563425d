// Copyright 2026 The mrepair Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Minimum set cover and its cost-preserving reduction to missing-answer
// repair for projection-join queries.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mrepair/engine.hpp"
#include "mrepair/model.hpp"
#include "mrepair/parser.hpp"

namespace mrepair {

struct NamedSet {
  std::string name;
  std::vector<std::string> elements;

  bool operator==(const NamedSet&) const = default;
};

struct SetCoverInstance {
  std::vector<NamedSet> sets;

  /// Elements in order of first appearance.
  std::vector<std::string> universe() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const NamedSet& s : sets)
      for (const std::string& e : s.elements)
        if (seen.insert(e).second) out.push_back(e);
    return out;
  }

  bool operator==(const SetCoverInstance&) const = default;
};

/// Names of the chosen sets, in instance order.
using Cover = std::vector<std::string>;

inline bool covers(const SetCoverInstance& x, const Cover& cover) {
  std::set<std::string> covered;
  for (const NamedSet& s : x.sets)
    if (std::find(cover.begin(), cover.end(), s.name) != cover.end())
      covered.insert(s.elements.begin(), s.elements.end());
  for (const std::string& e : x.universe())
    if (!covered.count(e)) return false;
  return true;
}

struct ReducedInstance {
  Program query;
  Instance instance;
  Tuple target;
};

namespace detail {
inline std::string element_constant(std::size_t i) { return "a" + std::to_string(i + 1); }
inline std::string set_constant(std::size_t j) { return "b" + std::to_string(j + 1); }
}  // namespace detail

/// Builds ans(X1..Xn) :- f(Y1,X1),...,f(Yn,Xn), p(Y1),...,p(Yn) with
/// f(b_j, a_i) for every element u_i of set s_j.
inline ReducedInstance reduce_f(const SetCoverInstance& x) {
  const std::vector<std::string> universe = x.universe();
  if (universe.empty())
    throw Error(ErrorCode::kEmptyUniverse, "set cover instance has no elements");
  const std::size_t n = universe.size();
  std::string head;
  std::string joins;
  std::string guards;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::string k = std::to_string(i);
    head += (i > 1 ? "," : "") + std::string("X") + k;
    joins += "f(Y" + k + ",X" + k + "), ";
    guards += (i > 1 ? ", " : "") + std::string("p(Y") + k + ")";
  }
  ReducedInstance out;
  out.query = parse_program("ans(" + head + ") :- " + joins + guards + ".");
  for (std::size_t j = 0; j < x.sets.size(); ++j)
    for (const std::string& e : x.sets[j].elements) {
      const auto i = static_cast<std::size_t>(
          std::find(universe.begin(), universe.end(), e) - universe.begin());
      out.instance.insert({"f", {detail::set_constant(j), detail::element_constant(i)}});
    }
  for (std::size_t i = 0; i < n; ++i) out.target.push_back(detail::element_constant(i));
  return out;
}

/// Maps a repair of reduce_f(x) back to a cover no larger than the repair.
inline Cover extract_h(const SetCoverInstance& x, const Update& u) {
  const ReducedInstance red = reduce_f(x);
  bool repair = false;
  try {
    repair = eval_member(red.query, apply_update(red.instance, u), red.target);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kInvalidUpdate) throw;
  }
  if (!repair) throw Error(ErrorCode::kNotARepair, "update is not a repair");

  const std::vector<std::string> universe = x.universe();
  std::set<std::size_t> chosen;
  for (const Fact& f : u.ins) {
    if (f.relation == "p" && f.args.size() == 1) {
      for (std::size_t j = 0; j < x.sets.size(); ++j)
        if (f.args[0] == detail::set_constant(j)) chosen.insert(j);
    } else if (f.relation == "f" && f.args.size() == 2) {
      // An inserted edge stands for the first set containing its element.
      for (std::size_t i = 0; i < universe.size(); ++i) {
        if (f.args[1] != detail::element_constant(i)) continue;
        for (std::size_t j = 0; j < x.sets.size(); ++j) {
          const auto& el = x.sets[j].elements;
          if (std::find(el.begin(), el.end(), universe[i]) != el.end()) {
            chosen.insert(j);
            break;
          }
        }
      }
    }
  }
  Cover out;
  for (std::size_t j : chosen) out.push_back(x.sets[j].name);
  return out;
}

/// Largest-uncovered-first greedy; ties go to the smaller name.
inline Cover greedy_cover(const SetCoverInstance& x) {
  std::set<std::string> uncovered;
  for (const std::string& e : x.universe()) uncovered.insert(e);
  std::set<std::size_t> chosen;
  while (!uncovered.empty()) {
    std::size_t best = x.sets.size();
    std::size_t best_gain = 0;
    for (std::size_t j = 0; j < x.sets.size(); ++j) {
      std::size_t gain = 0;
      for (const std::string& e : x.sets[j].elements) gain += uncovered.count(e);
      if (gain > best_gain ||
          (gain == best_gain && gain > 0 && x.sets[j].name < x.sets[best].name)) {
        best = j;
        best_gain = gain;
      }
    }
    chosen.insert(best);
    for (const std::string& e : x.sets[best].elements) uncovered.erase(e);
  }
  Cover out;
  for (std::size_t j : chosen) out.push_back(x.sets[j].name);
  return out;
}

/// Minimum cover by subset enumeration in size order; among minima the
/// least sequence of names wins.
inline Cover exact_cover(const SetCoverInstance& x, std::size_t cap = 20) {
  if (x.sets.size() > cap)
    throw Error(ErrorCode::kCapExceeded,
                "exact cover is limited to " + std::to_string(cap) + " sets");
  const std::vector<std::string> universe = x.universe();
  std::vector<std::size_t> by_name(x.sets.size());
  for (std::size_t j = 0; j < by_name.size(); ++j) by_name[j] = j;
  std::sort(by_name.begin(), by_name.end(), [&](std::size_t a, std::size_t b) {
    return x.sets[a].name < x.sets[b].name;
  });
  std::vector<std::vector<std::size_t>> members(x.sets.size());
  for (std::size_t j = 0; j < x.sets.size(); ++j)
    for (std::size_t i = 0; i < universe.size(); ++i) {
      const auto& el = x.sets[j].elements;
      if (std::find(el.begin(), el.end(), universe[i]) != el.end())
        members[j].push_back(i);
    }

  std::vector<std::size_t> count(universe.size(), 0);
  std::size_t covered = 0;
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t start, std::size_t size) -> bool {
    if (pick.size() == size) return covered == universe.size();
    for (std::size_t k = start; k + (size - pick.size()) <= by_name.size(); ++k) {
      const std::size_t j = by_name[k];
      for (std::size_t i : members[j]) covered += count[i]++ == 0;
      pick.push_back(j);
      if (self(self, k + 1, size)) return true;
      pick.pop_back();
      for (std::size_t i : members[j]) covered -= --count[i] == 0;
    }
    return false;
  };
  for (std::size_t size = 0; size <= x.sets.size(); ++size) {
    if (!rec(rec, 0, size)) continue;
    std::sort(pick.begin(), pick.end());
    Cover out;
    for (std::size_t j : pick) out.push_back(x.sets[j].name);
    return out;
  }
  return {};
}

/// Random instance with sets s1..sm over u1..un; each membership holds with
/// probability `density`. Re-rolls until every element is covered and no
/// set is empty.
inline SetCoverInstance generate(std::uint64_t seed, std::size_t n, std::size_t m,
                                 double density) {
  if (n == 0 || m == 0)
    throw Error(ErrorCode::kInvalidArgument, "n and m must be positive");
  if (!(density > 0.0 && density <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "density must lie in (0, 1]");
  std::mt19937_64 rng(seed);
  // Compare raw draws against a threshold so the result does not depend on
  // the standard library's distribution implementations.
  const auto threshold = static_cast<std::uint64_t>(
      density * static_cast<double>(std::numeric_limits<std::uint64_t>::max()));
  while (true) {
    SetCoverInstance x;
    std::vector<char> hit(n, 0);
    bool empty_set = false;
    for (std::size_t j = 0; j < m; ++j) {
      NamedSet s{"s" + std::to_string(j + 1), {}};
      for (std::size_t i = 0; i < n; ++i)
        if (density >= 1.0 || rng() < threshold) {
          s.elements.push_back("u" + std::to_string(i + 1));
          hit[i] = 1;
        }
      empty_set = empty_set || s.elements.empty();
      x.sets.push_back(std::move(s));
    }
    if (!empty_set && std::all_of(hit.begin(), hit.end(), [](char c) { return c; }))
      return x;
  }
}

/// Parses `name: e1 e2 ...` lines. Blank lines and `%` comments are skipped.
inline SetCoverInstance parse_setcover(std::string_view text) {
  SetCoverInstance x;
  std::set<std::string> names;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (const std::size_t pct = line.find('%'); pct != std::string::npos) line.resize(pct);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    const std::size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw SourceError(line_no, 1, "expected 'name: elements'");
    std::istringstream name_in(line.substr(0, colon));
    NamedSet s;
    name_in >> s.name;
    std::string extra;
    if (s.name.empty() || (name_in >> extra))
      throw SourceError(line_no, 1, "a set needs exactly one name before ':'");
    if (!names.insert(s.name).second)
      throw SourceError(line_no, 1, "duplicate set name '" + s.name + "'");
    std::istringstream elems(line.substr(colon + 1));
    for (std::string e; elems >> e;)
      if (std::find(s.elements.begin(), s.elements.end(), e) == s.elements.end())
        s.elements.push_back(e);
    if (s.elements.empty())
      throw SourceError(line_no, colon + 1, "set '" + s.name + "' is empty");
    x.sets.push_back(std::move(s));
    if (end == text.size()) break;
  }
  return x;
}

inline std::string to_text(const SetCoverInstance& x) {
  std::string out;
  for (const NamedSet& s : x.sets) {
    out += s.name + ":";
    for (const std::string& e : s.elements) out += " " + e;
    out += "\n";
  }
  return out;
}

}  // namespace mrepair
