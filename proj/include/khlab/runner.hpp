#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "khlab/frobenius.hpp"
#include "khlab/homology.hpp"
#include "khlab/invariant.hpp"
#include "khlab/table.hpp"

namespace khlab::cli {

struct RunConfig {
  std::string verb;  // homology | s | verify-theorem | verify-twist | verify-torsion | canonical | table

  // exactly one input source
  std::optional<std::string> pd, braid, file;
  std::optional<std::string> name;  // row selection when reading a single diagram from a file

  std::vector<frobenius::TheoryTriple> triples;
  std::optional<frobenius::TheoryTriple> src, dst;  // verify-twist
  long long h = 0, t = 0, p = 0;                    // verify-torsion

  bool no_reduce = false;
  int max_crossings = 16;
  int threads = 0;  // 0: KHLAB_THREADS env var, then hardware
  std::string format = "json";
  std::optional<std::string> out_path;
  std::string table_do = "verify-theorem";
};

// exit status: 0 pass/success, 1 verification FAIL, 2 input error
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// "q:0:1", "z:1:0", "fp2:1:0"
frobenius::TheoryTriple parse_triple(const std::string& spec);

// (Q,0,1), (F_2,1,0), (F_3,1,0), (F_5,0,1), (Z,0,1), (Z,1,0)
std::vector<frobenius::TheoryTriple> default_panel();

int resolve_thread_count(int requested);

}  // namespace khlab::cli
