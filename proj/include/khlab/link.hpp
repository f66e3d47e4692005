#pragma once

#include <array>
#include <string>
#include <vector>

#include "khlab/error.hpp"

namespace khlab::linkio {

// One crossing in PD order: e[0] is the incoming under-strand edge, e[1..3]
// follow counterclockwise. sign +1 means the over-strand runs e[3] -> e[1];
// sign -1 means it runs e[1] -> e[3]. The under-strand always runs e[0] -> e[2].
struct Crossing {
  std::array<int, 4> e{};
  int sign = 0;

  bool operator==(const Crossing&) const = default;
};

class LinkDiagram {
 public:
  // Validates edge incidence and orientation consistency, traces components.
  static LinkDiagram from_crossings(std::vector<Crossing> crossings, int free_loops);

  const std::vector<Crossing>& crossings() const { return crossings_; }
  int n_crossings() const { return static_cast<int>(crossings_.size()); }
  int free_loops() const { return free_loops_; }
  int n_components() const { return n_components_; }
  int c_plus() const { return c_plus_; }
  int c_minus() const { return c_minus_; }
  int writhe() const { return c_plus_ - c_minus_; }
  int n_edges() const { return n_edges_; }
  int max_edge_label() const { return max_edge_label_; }

  // Link component (0-based) carrying the under/over strand of crossing i.
  // Components are numbered by their smallest edge label; free loops follow.
  int under_component(int i) const { return under_component_[i]; }
  int over_component(int i) const { return over_component_[i]; }

  bool operator==(const LinkDiagram&) const = default;

 private:
  LinkDiagram() = default;

  std::vector<Crossing> crossings_;
  int free_loops_ = 0;
  int n_components_ = 0;
  int c_plus_ = 0;
  int c_minus_ = 0;
  int n_edges_ = 0;
  int max_edge_label_ = 0;
  std::vector<int> under_component_, over_component_;
};

// PD notation: PD[X[a,b,c,d],...]; whitespace is ignored. Xp/Xm force the
// crossing sign where the label-succession rule would infer the wrong
// orientation; U denotes a crossingless component. PD[] is the unknot.
LinkDiagram parse_pd(const std::string& text);
std::string to_pd_string(const LinkDiagram& d);

// Closure of a braid word; positive letters give positive crossings.
LinkDiagram parse_braid(const std::vector<int>& word, int strand_count);

// Closure of (sigma_1 ... sigma_{p-1})^q on p strands.
LinkDiagram torus_knot(int p, int q);

// Swap over/under at every crossing.
LinkDiagram mirror(const LinkDiagram& d);

// Connected sum by splicing the smallest-labelled edge of each diagram.
LinkDiagram connect_sum(const LinkDiagram& a, const LinkDiagram& b);

// Sign a label-succession parser would infer for this crossing, 0 if ambiguous.
int inferred_sign(const std::array<int, 4>& e);

}  // namespace khlab::linkio
