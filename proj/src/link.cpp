#include "khlab/link.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>

namespace khlab::linkio {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

int inferred_sign(const std::array<int, 4>& e) {
  const int b = e[1], d = e[3];
  if (b == d) return 0;
  // Within a component, edge k flows into edge k+1; the largest label wraps
  // around to the smallest. Over-strand d->b is a positive crossing.
  if (b == d + 1 || d > b + 1) return +1;
  return -1;
}

LinkDiagram LinkDiagram::from_crossings(std::vector<Crossing> crossings, int free_loops) {
  if (free_loops < 0) fail(ErrorCode::inconsistent_diagram, "negative free loop count");
  if (crossings.empty() && free_loops == 0)
    fail(ErrorCode::inconsistent_diagram, "empty diagram has no components");

  const int nc = static_cast<int>(crossings.size());
  std::map<int, std::vector<int>> slots_of_edge;  // label -> flat slot ids
  for (int i = 0; i < nc; ++i) {
    if (crossings[i].sign != 1 && crossings[i].sign != -1)
      fail(ErrorCode::inconsistent_diagram, "crossing without a sign");
    for (int pos = 0; pos < 4; ++pos) {
      int label = crossings[i].e[pos];
      if (label <= 0) fail(ErrorCode::inconsistent_diagram, "edge labels must be positive");
      slots_of_edge[label].push_back(4 * i + pos);
    }
  }
  for (const auto& [label, slots] : slots_of_edge)
    if (slots.size() != 2)
      fail(ErrorCode::inconsistent_diagram,
           "edge " + std::to_string(label) + " appears " + std::to_string(slots.size()) + " times, expected 2");

  // Orientation consistency: every edge leaves one crossing slot and enters one.
  auto slot_is_incoming = [&](int slot) {
    int pos = slot % 4, sign = crossings[slot / 4].sign;
    if (pos == 0) return true;
    if (pos == 2) return false;
    return sign > 0 ? pos == 3 : pos == 1;
  };
  for (const auto& [label, slots] : slots_of_edge) {
    int incoming = static_cast<int>(slot_is_incoming(slots[0])) + static_cast<int>(slot_is_incoming(slots[1]));
    if (incoming != 1)
      fail(ErrorCode::inconsistent_diagram, "edge " + std::to_string(label) + " orientation is untraceable");
  }

  // Trace strand components: under passes slot0 -> slot2, over slot1 -> slot3,
  // and the two slots of an edge are connected through the edge.
  UnionFind uf(4 * std::max(nc, 1));
  for (int i = 0; i < nc; ++i) {
    uf.unite(4 * i + 0, 4 * i + 2);
    uf.unite(4 * i + 1, 4 * i + 3);
  }
  for (const auto& [label, slots] : slots_of_edge) uf.unite(slots[0], slots[1]);

  // Number traced components by their smallest edge label.
  std::map<int, int> root_min_label;
  for (const auto& [label, slots] : slots_of_edge) {
    int r = uf.find(slots[0]);
    auto it = root_min_label.find(r);
    if (it == root_min_label.end() || label < it->second) root_min_label[r] = label;
  }
  std::vector<std::pair<int, int>> ordered;  // (min label, root)
  for (const auto& [root, ml] : root_min_label) ordered.emplace_back(ml, root);
  std::sort(ordered.begin(), ordered.end());
  std::map<int, int> component_of_root;
  for (int k = 0; k < static_cast<int>(ordered.size()); ++k) component_of_root[ordered[k].second] = k;

  LinkDiagram d;
  d.crossings_ = std::move(crossings);
  d.free_loops_ = free_loops;
  d.n_components_ = static_cast<int>(ordered.size()) + free_loops;
  d.n_edges_ = static_cast<int>(slots_of_edge.size());
  d.max_edge_label_ = slots_of_edge.empty() ? 0 : slots_of_edge.rbegin()->first;
  for (const auto& cr : d.crossings_) {
    (cr.sign > 0 ? d.c_plus_ : d.c_minus_)++;
  }
  d.under_component_.resize(nc);
  d.over_component_.resize(nc);
  for (int i = 0; i < nc; ++i) {
    d.under_component_[i] = component_of_root.at(uf.find(4 * i + 0));
    d.over_component_[i] = component_of_root.at(uf.find(4 * i + 1));
  }
  return d;
}

namespace {

std::string strip_ws(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

std::vector<std::string> split_top_level(const std::string& s) {
  std::vector<std::string> items;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      items.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) items.push_back(cur);
  return items;
}

int parse_positive_int(const std::string& s) {
  if (s.empty()) fail(ErrorCode::malformed_pd, "empty edge label");
  long long v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) fail(ErrorCode::malformed_pd, "bad edge label '" + s + "'");
    v = v * 10 + (c - '0');
    if (v > 1'000'000'000) fail(ErrorCode::malformed_pd, "edge label too large");
  }
  if (v == 0) fail(ErrorCode::malformed_pd, "edge labels must be positive");
  return static_cast<int>(v);
}

}  // namespace

LinkDiagram parse_pd(const std::string& text) {
  const std::string s = strip_ws(text);
  if (s.size() < 4 || s.substr(0, 3) != "PD[" || s.back() != ']')
    fail(ErrorCode::malformed_pd, "expected PD[...]");
  const std::string body = s.substr(3, s.size() - 4);

  std::vector<Crossing> crossings;
  int free_loops = 0;
  for (const std::string& item : split_top_level(body)) {
    if (item == "U") {
      ++free_loops;
      continue;
    }
    int forced = 0;
    std::size_t head = 1;
    if (item.size() >= 2 && item[0] == 'X' && (item[1] == 'p' || item[1] == 'm')) {
      forced = item[1] == 'p' ? +1 : -1;
      head = 2;
    } else if (item.empty() || item[0] != 'X') {
      fail(ErrorCode::malformed_pd, "unexpected item '" + item + "'");
    }
    if (head >= item.size() || item[head] != '[' || item.back() != ']')
      fail(ErrorCode::malformed_pd, "expected X[a,b,c,d] in '" + item + "'");
    auto fields = split_top_level(item.substr(head + 1, item.size() - head - 2));
    if (fields.size() != 4) fail(ErrorCode::malformed_pd, "crossing needs 4 edges in '" + item + "'");
    Crossing cr;
    for (int k = 0; k < 4; ++k) cr.e[k] = parse_positive_int(fields[k]);
    cr.sign = forced != 0 ? forced : inferred_sign(cr.e);
    if (cr.sign == 0)
      fail(ErrorCode::malformed_pd, "orientation of '" + item + "' is ambiguous; use Xp/Xm");
    crossings.push_back(cr);
  }
  if (crossings.empty() && free_loops == 0) free_loops = 1;  // PD[] is the unknot
  return LinkDiagram::from_crossings(std::move(crossings), free_loops);
}

std::string to_pd_string(const LinkDiagram& d) {
  std::string out = "PD[";
  bool first = true;
  for (const auto& cr : d.crossings()) {
    if (!first) out += ",";
    first = false;
    if (inferred_sign(cr.e) == cr.sign)
      out += "X[";
    else
      out += cr.sign > 0 ? "Xp[" : "Xm[";
    for (int k = 0; k < 4; ++k) {
      out += std::to_string(cr.e[k]);
      out += k < 3 ? "," : "]";
    }
  }
  int loops = d.free_loops();
  if (d.n_crossings() == 0 && loops == 1) loops = 0;  // canonical unknot: PD[]
  for (int k = 0; k < loops; ++k) {
    if (!first) out += ",";
    first = false;
    out += "U";
  }
  out += "]";
  return out;
}

LinkDiagram parse_braid(const std::vector<int>& word, int strand_count) {
  if (strand_count < 1) fail(ErrorCode::bad_letter, "strand count must be positive");
  for (int k : word)
    if (k == 0 || std::abs(k) >= strand_count)
      fail(ErrorCode::bad_letter, "letter " + std::to_string(k) + " out of range for " +
                                      std::to_string(strand_count) + " strands");

  int next_arc = strand_count + 1;
  std::vector<int> cur(strand_count);
  std::iota(cur.begin(), cur.end(), 1);
  struct RawCrossing {
    std::array<int, 4> arcs;
    int sign;
  };
  std::vector<RawCrossing> raw;
  std::vector<char> touched(strand_count, 0);
  for (int k : word) {
    int j = std::abs(k) - 1;
    int u = cur[j], v = cur[j + 1];
    int uo = next_arc++, vo = next_arc++;
    if (k > 0)
      raw.push_back({{u, uo, vo, v}, +1});
    else
      raw.push_back({{v, u, uo, vo}, -1});
    cur[j] = uo;
    cur[j + 1] = vo;
    touched[j] = touched[j + 1] = 1;
  }

  // Close the braid: the bottom arc of each strand position is the top arc.
  UnionFind uf(next_arc);
  for (int pos = 0; pos < strand_count; ++pos) uf.unite(cur[pos], pos + 1);

  std::map<int, int> label_of_class;
  int next_label = 1;
  std::vector<Crossing> crossings;
  for (const auto& rc : raw) {
    Crossing cr;
    cr.sign = rc.sign;
    for (int pos = 0; pos < 4; ++pos) {
      int root = uf.find(rc.arcs[pos]);
      auto [it, inserted] = label_of_class.emplace(root, next_label);
      if (inserted) ++next_label;
      cr.e[pos] = it->second;
    }
    crossings.push_back(cr);
  }

  int free_loops = 0;
  for (int pos = 0; pos < strand_count; ++pos)
    if (!touched[pos]) ++free_loops;
  return LinkDiagram::from_crossings(std::move(crossings), free_loops);
}

LinkDiagram torus_knot(int p, int q) {
  if (p < 2 || q < 2) fail(ErrorCode::bad_letter, "torus_knot requires p, q >= 2");
  std::vector<int> word;
  word.reserve(static_cast<std::size_t>(p - 1) * q);
  for (int rep = 0; rep < q; ++rep)
    for (int j = 1; j < p; ++j) word.push_back(j);
  return parse_braid(word, p);
}

LinkDiagram mirror(const LinkDiagram& d) {
  std::vector<Crossing> out;
  out.reserve(d.crossings().size());
  for (const auto& cr : d.crossings()) {
    // The old over-strand becomes the under-strand; relist counterclockwise
    // from the new incoming under edge.
    if (cr.sign > 0)
      out.push_back({{cr.e[3], cr.e[0], cr.e[1], cr.e[2]}, -1});
    else
      out.push_back({{cr.e[1], cr.e[2], cr.e[3], cr.e[0]}, +1});
  }
  return LinkDiagram::from_crossings(std::move(out), d.free_loops());
}

LinkDiagram connect_sum(const LinkDiagram& a, const LinkDiagram& b) {
  if (a.n_crossings() == 0) {
    LinkDiagram out = b;
    if (a.free_loops() > 1)
      out = LinkDiagram::from_crossings(std::vector<Crossing>(b.crossings()), b.free_loops() + a.free_loops() - 1);
    return out;
  }
  if (b.n_crossings() == 0) return connect_sum(b, a);

  const int shift = a.max_edge_label();
  std::vector<Crossing> crossings = a.crossings();
  for (const auto& cr : b.crossings()) {
    Crossing s = cr;
    for (auto& lbl : s.e) lbl += shift;
    crossings.push_back(s);
  }

  auto slot_is_incoming = [&](const Crossing& cr, int pos) {
    if (pos == 0) return true;
    if (pos == 2) return false;
    return cr.sign > 0 ? pos == 3 : pos == 1;
  };
  auto find_head = [&](int first, int last, int label) -> std::pair<int, int> {
    for (int i = first; i < last; ++i)
      for (int pos = 0; pos < 4; ++pos)
        if (crossings[i].e[pos] == label && slot_is_incoming(crossings[i], pos)) return {i, pos};
    fail(ErrorCode::internal, "edge head not found");
  };

  auto min_label = [](const LinkDiagram& d) {
    int m = d.crossings()[0].e[0];
    for (const auto& cr : d.crossings()) m = std::min(m, *std::min_element(cr.e.begin(), cr.e.end()));
    return m;
  };
  const int ea = min_label(a);
  const int eb = shift + min_label(b);
  auto [ia, pa] = find_head(0, a.n_crossings(), ea);
  auto [ib, pb] = find_head(a.n_crossings(), static_cast<int>(crossings.size()), eb);
  crossings[ia].e[pa] = eb;  // tail of eb now flows into the old head of ea
  crossings[ib].e[pb] = ea;  // tail of ea flows into the old head of eb
  return LinkDiagram::from_crossings(std::move(crossings), a.free_loops() + b.free_loops());
}

}  // namespace khlab::linkio
