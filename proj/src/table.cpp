#include "khlab/table.hpp"

#include <fstream>
#include <sstream>

namespace khlab::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::vector<int> parse_letters(const std::string& s) {
  std::vector<int> word;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    try {
      std::size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      word.push_back(v);
    } catch (const std::exception&) {
      fail(ErrorCode::bad_letter, "bad braid letter '" + tok + "'");
    }
  }
  return word;
}

}  // namespace

linkio::LinkDiagram parse_input(const std::string& input) {
  std::string s = trim(input);
  if (s.rfind("PD", 0) == 0) return linkio::parse_pd(s);
  if (s.rfind("braid:", 0) == 0) {
    std::string rest = s.substr(6);
    std::size_t colon = rest.find(':');
    if (colon == std::string::npos) fail(ErrorCode::bad_letter, "expected braid:<strands>:<letters>");
    int strands = 0;
    try {
      strands = std::stoi(rest.substr(0, colon));
    } catch (const std::exception&) {
      fail(ErrorCode::bad_letter, "bad strand count '" + rest.substr(0, colon) + "'");
    }
    return linkio::parse_braid(parse_letters(rest.substr(colon + 1)), strands);
  }
  fail(ErrorCode::malformed_pd, "input must start with PD[ or braid:");
}

IngestResult ingest_table(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) fail(ErrorCode::file_not_found, path);
  IngestResult out;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;  // name,input
    }
    auto fields = csv_fields(line);
    if (fields.size() < 2) {
      out.warnings.push_back("line " + std::to_string(line_no) + ": expected name,input");
      continue;
    }
    std::string name = trim(fields[0]);
    std::string input = fields[1];
    for (std::size_t i = 2; i < fields.size(); ++i) input += "," + fields[i];
    try {
      out.rows.emplace_back(name, parse_input(input));
    } catch (const KhError& e) {
      out.warnings.push_back("line " + std::to_string(line_no) + " (" + name + "): " + e.what());
    }
  }
  return out;
}

std::vector<PairRow> ingest_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) fail(ErrorCode::file_not_found, path);
  std::vector<PairRow> out;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;  // name,input_a,input_b
    }
    auto fields = csv_fields(line);
    if (fields.size() != 3)
      fail(ErrorCode::malformed_pd,
           path + " line " + std::to_string(line_no) + ": expected name,input_a,input_b with quoted inputs");
    out.push_back(PairRow{trim(fields[0]), parse_input(fields[1]), parse_input(fields[2])});
  }
  return out;
}

}  // namespace khlab::cli
