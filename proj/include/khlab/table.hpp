#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "khlab/link.hpp"

namespace khlab::cli {

// "PD[...]" or "braid:<strands>:<comma-separated signed letters>"
linkio::LinkDiagram parse_input(const std::string& input);

struct IngestResult {
  std::vector<std::pair<std::string, linkio::LinkDiagram>> rows;
  std::vector<std::string> warnings;  // skipped rows, with line numbers
};

// CSV with header name,input. Fields may be double-quoted; an unquoted input
// may contain commas (everything after the first comma is the input).
IngestResult ingest_table(const std::string& path);

struct PairRow {
  std::string name;
  linkio::LinkDiagram a, b;
};

// CSV with header name,input_a,input_b and quoted inputs.
std::vector<PairRow> ingest_pairs(const std::string& path);

}  // namespace khlab::cli
