#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "facs/schema.hpp"

// Independent schema enumeration: tries every element (rule or cycle) at
// every position, subject only to the definition — adjacency, pairwise
// distinctness with rotations identified, terminal cycle, self-loops given in
// cycle form. Quadratic and oblivious, for cross-checking the streamed one.
inline std::vector<facs::PathSchema> brute_force_schemas(const facs::CounterSystem& s,
                                                         const std::string& start) {
  using namespace facs;
  auto cycles = simple_cycles(s);
  std::vector<PathSchema> out;
  std::vector<SchemaElement> seq;
  std::set<std::size_t> used_rules;
  std::set<std::size_t> used_cycles;

  auto extend = [&](auto&& self, std::size_t cur) -> void {
    if (!seq.empty() && seq.back().is_cycle) out.push_back(PathSchema{seq});
    for (std::size_t ri = 0; ri < s.rules.size(); ++ri) {
      if (s.rules[ri].source != s.states[cur].id) continue;
      if (s.rules[ri].source == s.rules[ri].target) continue;
      if (used_rules.count(ri)) continue;
      used_rules.insert(ri);
      seq.push_back(SchemaElement{false, {ri}});
      self(self, s.state_index(s.rules[ri].target));
      seq.pop_back();
      used_rules.erase(ri);
    }
    for (std::size_t ci = 0; ci < cycles.size(); ++ci) {
      if (used_cycles.count(ci)) continue;
      const auto& cyc = cycles[ci];
      // Entry point of the rotation, if the cycle passes through cur at all.
      std::size_t pos = cyc.size();
      for (std::size_t p = 0; p < cyc.size(); ++p)
        if (s.rules[cyc[p]].source == s.states[cur].id) pos = p;
      if (pos == cyc.size()) continue;
      std::vector<std::size_t> rot(cyc.begin() + pos, cyc.end());
      rot.insert(rot.end(), cyc.begin(), cyc.begin() + pos);
      used_cycles.insert(ci);
      seq.push_back(SchemaElement{true, rot});
      self(self, cur);
      seq.pop_back();
      used_cycles.erase(ci);
    }
  };
  extend(extend, s.state_index(start));
  return out;
}

inline std::vector<std::string> schema_fingerprint(const facs::CounterSystem& s,
                                                   const facs::PathSchema& p) {
  std::vector<std::string> f;
  for (const auto& e : p.elements) {
    std::string t = e.is_cycle ? "C:" : "r:";
    for (std::size_t ri : e.rules) t += s.rules[ri].id + ",";
    f.push_back(t);
  }
  return f;
}

inline std::vector<std::vector<std::string>> sorted_fingerprints(
    const facs::CounterSystem& s, const std::vector<facs::PathSchema>& ps) {
  std::vector<std::vector<std::string>> r;
  for (const auto& p : ps) r.push_back(schema_fingerprint(s, p));
  std::sort(r.begin(), r.end());
  return r;
}
