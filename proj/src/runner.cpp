#include "khlab/runner.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace khlab::cli {

using json = nlohmann::ordered_json;
using frobenius::TheoryTriple;
using homology::ComputeOptions;

frobenius::TheoryTriple parse_triple(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  if (parts.size() != 3) fail(ErrorCode::bad_ring, "expected <ring>:<h>:<t>, got '" + spec + "'");
  exactalg::CoefficientRing ring;
  if (parts[0] == "q")
    ring = exactalg::CoefficientRing::rationals();
  else if (parts[0] == "z")
    ring = exactalg::CoefficientRing::integers();
  else if (parts[0].rfind("fp", 0) == 0)
    ring = exactalg::CoefficientRing::prime_field(std::stoll(parts[0].substr(2)));
  else
    fail(ErrorCode::bad_ring, "ring must be q, z or fp<p> in '" + spec + "'");
  return TheoryTriple::make(ring, std::stoll(parts[1]), std::stoll(parts[2]));
}

std::vector<TheoryTriple> default_panel() {
  using exactalg::CoefficientRing;
  return {
      TheoryTriple::make(CoefficientRing::rationals(), 0, 1),
      TheoryTriple::make(CoefficientRing::prime_field(2), 1, 0),
      TheoryTriple::make(CoefficientRing::prime_field(3), 1, 0),
      TheoryTriple::make(CoefficientRing::prime_field(5), 0, 1),
      TheoryTriple::make(CoefficientRing::integers(), 0, 1),
      TheoryTriple::make(CoefficientRing::integers(), 1, 0),
  };
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("KHLAB_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

json triple_json(const TheoryTriple& tr) {
  json j;
  j["ring"] = tr.ring.name();
  j["h"] = tr.h;
  j["t"] = tr.t;
  if (tr.gamma) j["gamma"] = *tr.gamma;
  return j;
}

json homology_json(const homology::HomologyResult& res) {
  json j = json::object();
  for (const auto& d : res.degrees) {
    json e;
    if (res.integral) {
      e["free_rank"] = d.dim;
      json tor = json::array();
      for (long long v : d.torsion) tor.push_back(v);
      e["torsion"] = tor;
    } else {
      e["dim"] = d.dim;
    }
    json prof = json::array();
    for (const auto& [q, dim] : d.profile) prof.push_back(json{{"q", q}, {"dim", dim}});
    e["profile"] = prof;
    j[std::to_string(d.degree)] = e;
  }
  return j;
}

json sreport_json(const invariant::SReport& rep) {
  json j;
  if (!rep.diagram_id.empty()) j["name"] = rep.diagram_id;
  j["theory"] = triple_json(rep.triple);
  j["s_min"] = rep.s_min;
  j["s_max"] = rep.s_max;
  j["s"] = rep.s;
  if (!rep.warnings.empty()) j["warnings"] = rep.warnings;
  return j;
}

json theorem_json(const invariant::TheoremReport& rep) {
  json j;
  if (!rep.diagram_id.empty()) j["name"] = rep.diagram_id;
  j["pass"] = rep.pass;
  j["hypothesis_note"] = rep.hypothesis_note;
  json entries = json::array();
  for (const auto& e : rep.entries) {
    json je;
    je["theory"] = triple_json(e.triple);
    je["status"] = e.status;
    je["printed_reading_holds"] = e.satisfies_printed_reading;
    if (e.report) {
      je["s_min"] = e.report->s_min;
      je["s_max"] = e.report->s_max;
      je["s"] = e.report->s;
      if (!e.report->warnings.empty()) je["warnings"] = e.report->warnings;
    }
    entries.push_back(je);
  }
  j["entries"] = entries;
  return j;
}

json twist_json(const invariant::TwistReport& rep) {
  json j;
  j["pass"] = rep.pass;
  j["a"] = rep.a;
  j["b"] = rep.b;
  j["chain_map"] = rep.chain_map_ok;
  j["iso_on_homology"] = rep.iso_on_homology;
  j["cycles_to_cycles"] = rep.cycles_to_cycles;
  j["q_preserved"] = rep.q_preserved;
  j["profiles_equal"] = rep.profiles_equal;
  return j;
}

json uct_json(const homology::UctReport& rep) {
  json j;
  j["h"] = rep.h;
  j["t"] = rep.t;
  j["p"] = rep.p;
  j["pass"] = rep.pass;
  j["dims_match"] = rep.dims_match;
  j["no_p_torsion"] = rep.no_p_torsion;
  j["profiles_match"] = rep.profiles_match;
  json dims = json::array();
  for (const auto& [deg, dp, fz] : rep.dims)
    dims.push_back(json{{"degree", deg}, {"dim_fp", dp}, {"free_rank_z", fz}});
  j["degrees"] = dims;
  j["hypothesis_note"] = rep.hypothesis_note;
  return j;
}

json canonical_json(const invariant::CanonicalReport& rep) {
  json j;
  j["expected"] = rep.expected;
  j["count"] = static_cast<long long>(rep.gens.size());
  j["all_cycles"] = rep.all_cycles;
  j["classes_independent"] = rep.classes_independent;
  json gens = json::array();
  for (const auto& g : rep.gens) {
    json jg;
    jg["orientation"] = g.orientation;
    jg["smoothing"] = g.smoothing;
    jg["degree"] = g.degree;
    jg["q"] = g.q;
    jg["labels"] = g.coloring;
    gens.push_back(jg);
  }
  j["generators"] = gens;
  return j;
}

std::string render_table(const json& j, int indent = 0) {
  // plain-text rendering of the JSON report
  std::string pad(indent, ' ');
  std::string out;
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_object() || v.is_array()) {
        out += pad + k + ":\n" + render_table(v, indent + 2);
      } else {
        out += pad + k + " = " + v.dump() + "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_object() || v.is_array()) {
        out += pad + "-\n" + render_table(v, indent + 2);
      } else {
        out += pad + "- " + v.dump() + "\n";
      }
    }
  } else {
    out += pad + j.dump() + "\n";
  }
  return out;
}

linkio::LinkDiagram resolve_diagram(const RunConfig& cfg, std::string& id_out) {
  int sources = (cfg.pd ? 1 : 0) + (cfg.braid ? 1 : 0) + (cfg.file ? 1 : 0);
  if (sources != 1) fail(ErrorCode::malformed_pd, "exactly one input source (--pd, --braid, --file) is required");
  if (cfg.pd) {
    id_out = *cfg.pd;
    return linkio::parse_pd(*cfg.pd);
  }
  if (cfg.braid) {
    id_out = "braid:" + *cfg.braid;
    return parse_input("braid:" + *cfg.braid);
  }
  auto table = ingest_table(*cfg.file);
  if (!cfg.name) fail(ErrorCode::malformed_pd, "--name is required when reading one diagram from a file");
  for (auto& [name, diagram] : table.rows)
    if (name == *cfg.name) {
      id_out = name;
      return diagram;
    }
  fail(ErrorCode::file_not_found, "no row named '" + *cfg.name + "' in " + *cfg.file);
}

// Deterministic parallel map: results are collected by index.
template <class F>
std::vector<json> parallel_rows(std::size_t n, int threads, F&& fn) {
  std::vector<json> results(n);
  if (n == 0) return results;
  int nt = std::min<std::size_t>(std::max(1, threads), n);
  if (nt == 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < nt; ++w)
    pool.emplace_back([&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        results[i] = fn(i);
      }
    });
  for (auto& th : pool) th.join();
  return results;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    ComputeOptions opt;
    opt.reduce = !cfg.no_reduce;
    opt.max_crossings = cfg.max_crossings;

    json report;
    int exit_code = 0;

    if (cfg.verb == "homology" || cfg.verb == "s" || cfg.verb == "canonical") {
      if (cfg.triples.empty()) fail(ErrorCode::bad_ring, "a theory triple is required (--ring/--h/--t or --theory)");
      std::string id;
      auto diagram = resolve_diagram(cfg, id);
      json items = json::array();
      for (const auto& tr : cfg.triples) {
        if (cfg.verb == "homology") {
          json j;
          j["name"] = id;
          j["theory"] = triple_json(tr);
          j["reduced"] = opt.reduce;
          j["homology"] = homology_json(homology::compute_homology(diagram, tr, opt));
          items.push_back(j);
        } else if (cfg.verb == "s") {
          items.push_back(sreport_json(invariant::s_invariant(diagram, tr, opt, id)));
        } else {
          json j = canonical_json(invariant::canonical_generators(diagram, tr, opt));
          j["name"] = id;
          j["theory"] = triple_json(tr);
          items.push_back(j);
        }
      }
      report = items.size() == 1 ? items[0] : json(items);
    } else if (cfg.verb == "verify-theorem") {
      std::string id;
      auto diagram = resolve_diagram(cfg, id);
      auto triples = cfg.triples.empty() ? default_panel() : cfg.triples;
      auto rep = invariant::verify_main_theorem(diagram, triples, opt, id);
      report = theorem_json(rep);
      exit_code = rep.pass ? 0 : 1;
    } else if (cfg.verb == "verify-twist") {
      if (!cfg.src || !cfg.dst) fail(ErrorCode::bad_ring, "--src and --dst triples are required");
      std::string id;
      auto diagram = resolve_diagram(cfg, id);
      auto rep = invariant::verify_twist_equivalence(diagram, *cfg.src, *cfg.dst, opt);
      report = twist_json(rep);
      report["name"] = id;
      exit_code = rep.pass ? 0 : 1;
    } else if (cfg.verb == "verify-torsion") {
      std::string id;
      auto diagram = resolve_diagram(cfg, id);
      auto rep = homology::compare_uct(diagram, cfg.h, cfg.t, cfg.p, opt);
      report = uct_json(rep);
      report["name"] = id;
      exit_code = rep.pass ? 0 : 1;
    } else if (cfg.verb == "table") {
      if (!cfg.file) fail(ErrorCode::file_not_found, "table requires --file");
      auto table = ingest_table(*cfg.file);
      const int threads = resolve_thread_count(cfg.threads);
      auto triples = cfg.triples.empty() ? default_panel() : cfg.triples;
      auto rows = parallel_rows(table.rows.size(), threads, [&](std::size_t i) -> json {
        const auto& [name, diagram] = table.rows[i];
        json row;
        row["name"] = name;
        try {
          if (cfg.table_do == "verify-theorem") {
            if (diagram.n_components() != 1) {
              row["status"] = "skipped: not a knot";
              return row;
            }
            auto rep = invariant::verify_main_theorem(diagram, triples, opt, name);
            row["pass"] = rep.pass;
            json svals = json::array();
            for (const auto& e : rep.entries)
              if (e.report) svals.push_back(e.report->s);
            row["s"] = svals;
          } else if (cfg.table_do == "s") {
            json items = json::array();
            for (const auto& tr : triples) items.push_back(sreport_json(invariant::s_invariant(diagram, tr, opt, name)));
            row["reports"] = items;
          } else if (cfg.table_do == "homology") {
            json items = json::array();
            for (const auto& tr : triples) {
              json j;
              j["theory"] = triple_json(tr);
              j["homology"] = homology_json(homology::compute_homology(diagram, tr, opt));
              items.push_back(j);
            }
            row["reports"] = items;
          } else {
            fail(ErrorCode::bad_ring, "unknown table action '" + cfg.table_do + "'");
          }
        } catch (const KhError& e) {
          row["error"] = e.what();
        }
        return row;
      });
      long long passed = 0, failed = 0, errors = 0;
      json jrows = json::array();
      for (const auto& row : rows) {
        jrows.push_back(row);
        if (row.contains("error"))
          ++errors;
        else if (row.contains("pass"))
          (row["pass"].get<bool>() ? passed : failed)++;
      }
      report["file"] = *cfg.file;
      report["do"] = cfg.table_do;
      if (!table.warnings.empty()) report["warnings"] = table.warnings;
      report["rows"] = jrows;
      report["summary"] = json{{"rows", static_cast<long long>(rows.size())},
                               {"passed", passed},
                               {"failed", failed},
                               {"errors", errors}};
      exit_code = (failed > 0 || errors > 0) ? 1 : 0;
    } else {
      fail(ErrorCode::internal, "unknown verb '" + cfg.verb + "'");
    }

    std::string text = cfg.format == "table" ? render_table(report) : report.dump(2) + "\n";
    if (cfg.out_path) {
      std::ofstream f(*cfg.out_path);
      if (!f.is_open()) fail(ErrorCode::file_not_found, "cannot open --out path " + *cfg.out_path);
      f << text;
    } else {
      out << text;
    }
    return exit_code;
  } catch (const KhError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace khlab::cli
