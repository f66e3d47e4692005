#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "khlab/link.hpp"
#include "khlab/table.hpp"

namespace khlab::testing {

inline linkio::LinkDiagram unknot() { return linkio::parse_pd("PD[]"); }
inline linkio::LinkDiagram trefoil() { return linkio::parse_braid({1, 1, 1}, 2); }
inline linkio::LinkDiagram trefoil_mirror() { return linkio::parse_braid({-1, -1, -1}, 2); }
inline linkio::LinkDiagram figure_eight() { return linkio::parse_braid({1, -2, 1, -2}, 3); }
inline linkio::LinkDiagram hopf() { return linkio::parse_braid({1, 1}, 2); }
inline linkio::LinkDiagram r2_unknot() { return linkio::parse_braid({1, -2}, 3); }
inline linkio::LinkDiagram atlas_trefoil() { return linkio::parse_pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]"); }

inline std::string data_path(const std::string& file) { return std::string(KHLAB_DATA_DIR) + "/" + file; }

// deterministic random braid words whose closures stay small
inline std::vector<std::pair<std::string, linkio::LinkDiagram>> random_braid_closures(int count,
                                                                                      int max_crossings,
                                                                                      unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<std::pair<std::string, linkio::LinkDiagram>> out;
  while (static_cast<int>(out.size()) < count) {
    int strands = 2 + static_cast<int>(rng() % 3);
    int len = 1 + static_cast<int>(rng() % max_crossings);
    if (len > max_crossings) continue;
    std::vector<int> word;
    std::string name = "braid:" + std::to_string(strands) + ":";
    for (int i = 0; i < len; ++i) {
      int j = 1 + static_cast<int>(rng() % (strands - 1));
      if (rng() % 2) j = -j;
      word.push_back(j);
      name += (i ? "," : "") + std::to_string(j);
    }
    out.emplace_back(name, linkio::parse_braid(word, strands));
  }
  return out;
}

}  // namespace khlab::testing
