#include <CLI11.hpp>
#include <iostream>

#include "khlab/runner.hpp"

using khlab::cli::RunConfig;

namespace {

void add_input_options(CLI::App* cmd, RunConfig& cfg) {
  auto* pd = cmd->add_option_function<std::string>(
      "--pd", [&cfg](const std::string& v) { cfg.pd = v; }, "inline PD code, e.g. \"PD[X[1,4,2,5],...]\"");
  auto* braid = cmd->add_option_function<std::string>(
      "--braid", [&cfg](const std::string& v) { cfg.braid = v; },
      "inline braid word <strands>:<letters>, e.g. 2:1,1,1");
  auto* file = cmd->add_option_function<std::string>(
      "--file", [&cfg](const std::string& v) { cfg.file = v; }, "CSV table with header name,input");
  cmd->add_option_function<std::string>(
      "--name", [&cfg](const std::string& v) { cfg.name = v; }, "row to pick from --file");
  pd->excludes(braid);
  pd->excludes(file);
  braid->excludes(file);
}

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_flag("--no-reduce", cfg.no_reduce, "skip the Gaussian complex reduction (oracle mode)");
  cmd->add_option("--max-crossings", cfg.max_crossings, "cube size limit (default 16)");
  cmd->add_option("--threads", cfg.threads, "worker threads for batch runs (or KHLAB_THREADS)");
  cmd->add_option("--format", cfg.format, "json or table")->check(CLI::IsMember({"json", "table"}));
  cmd->add_option_function<std::string>(
      "--out", [&cfg](const std::string& v) { cfg.out_path = v; }, "write the report to a file");
}

struct TheoryFlags {
  std::string ring = "q";
  long long h = 0, t = 0;
  std::string theory;
  std::vector<std::string> triples;
  bool explicit_single = false;
};

void add_theory_options(CLI::App* cmd, TheoryFlags& tf, bool allow_panel_list) {
  auto mark = [&tf](const std::string&) { tf.explicit_single = true; };
  cmd->add_option("--ring", tf.ring, "q, z or fp:<p>")->each(mark);
  cmd->add_option("--h", tf.h, "h parameter (integer)")->each(mark);
  cmd->add_option("--t", tf.t, "t parameter (integer)")->each(mark);
  cmd->add_option("--theory", tf.theory, "alias: khovanov=(0,0), lee=(0,1), bar-natan=(1,0)")
      ->check(CLI::IsMember({"khovanov", "lee", "bar-natan"}));
  if (allow_panel_list)
    cmd->add_option("--triple", tf.triples, "extra triple <ring>:<h>:<t> (repeatable), e.g. fp7:0:1");
}

khlab::frobenius::TheoryTriple triple_from_flags(const TheoryFlags& tf) {
  long long h = tf.h, t = tf.t;
  if (!tf.theory.empty()) {
    if (tf.theory == "khovanov") h = 0, t = 0;
    if (tf.theory == "lee") h = 0, t = 1;
    if (tf.theory == "bar-natan") h = 1, t = 0;
  }
  std::string ring = tf.ring;
  if (ring.rfind("fp:", 0) == 0) ring = "fp" + ring.substr(3);
  return khlab::cli::parse_triple(ring + ":" + std::to_string(h) + ":" + std::to_string(t));
}

void collect_triples(const TheoryFlags& tf, RunConfig& cfg) {
  if (!tf.theory.empty() || tf.explicit_single || tf.triples.empty()) cfg.triples.push_back(triple_from_flags(tf));
  for (const auto& s : tf.triples) cfg.triples.push_back(khlab::cli::parse_triple(s));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"khlab: filtered link homology theories U_{h,t} and the Rasmussen s-invariant"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // keep -h free for the theory parameter

  RunConfig cfg;
  TheoryFlags tf, tf_panel;
  std::string src_spec, dst_spec, panel;

  auto* homology = app.add_subcommand("homology", "per-degree homology and filtration profile");
  add_input_options(homology, cfg);
  add_theory_options(homology, tf, true);
  add_common_options(homology, cfg);

  auto* s = app.add_subcommand("s", "Rasmussen s-invariant of a knot");
  add_input_options(s, cfg);
  add_theory_options(s, tf, true);
  add_common_options(s, cfg);

  auto* canonical = app.add_subcommand("canonical", "canonical Lee-type generators");
  add_input_options(canonical, cfg);
  add_theory_options(canonical, tf, true);
  add_common_options(canonical, cfg);

  auto* theorem = app.add_subcommand("verify-theorem", "s agrees across a panel of theories");
  add_input_options(theorem, cfg);
  theorem->add_option("--panel", panel, "default")->check(CLI::IsMember({"default"}));
  theorem->add_option("--triple", tf_panel.triples, "triple <ring>:<h>:<t> (repeatable)");
  add_common_options(theorem, cfg);

  auto* twist = app.add_subcommand("verify-twist", "chain-level twist equivalence preserves q");
  add_input_options(twist, cfg);
  twist->add_option("--src", src_spec, "source triple <ring>:<h>:<t>")->required();
  twist->add_option("--dst", dst_spec, "target triple <ring>:<h>:<t>")->required();
  add_common_options(twist, cfg);

  auto* torsion = app.add_subcommand("verify-torsion", "universal-coefficient / p-torsion check");
  add_input_options(torsion, cfg);
  torsion->add_option("--h", cfg.h, "h (integer)")->required();
  torsion->add_option("--t", cfg.t, "t (integer)")->required();
  torsion->add_option("--p", cfg.p, "prime p")->required();
  add_common_options(torsion, cfg);

  auto* table = app.add_subcommand("table", "batch run over a CSV table");
  table->add_option("--file", cfg.file, "CSV table with header name,input")->required();
  table->add_option("--do", cfg.table_do, "verify-theorem, s or homology")
      ->check(CLI::IsMember({"verify-theorem", "s", "homology"}));
  table->add_option("--triple", tf_panel.triples, "triple <ring>:<h>:<t> (repeatable; default panel otherwise)");
  add_common_options(table, cfg);

  for (CLI::App* sub : {homology, s, canonical, theorem, twist, torsion, table})
    sub->set_help_flag("--help", "print help");

  CLI11_PARSE(app, argc, argv);

  try {
    if (homology->parsed()) cfg.verb = "homology";
    if (s->parsed()) cfg.verb = "s";
    if (canonical->parsed()) cfg.verb = "canonical";
    if (theorem->parsed()) cfg.verb = "verify-theorem";
    if (twist->parsed()) cfg.verb = "verify-twist";
    if (torsion->parsed()) cfg.verb = "verify-torsion";
    if (table->parsed()) cfg.verb = "table";

    if (homology->parsed() || s->parsed() || canonical->parsed()) collect_triples(tf, cfg);
    if (theorem->parsed() || table->parsed())
      for (const auto& spec : tf_panel.triples) cfg.triples.push_back(khlab::cli::parse_triple(spec));
    if (twist->parsed()) {
      cfg.src = khlab::cli::parse_triple(src_spec);
      cfg.dst = khlab::cli::parse_triple(dst_spec);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  return khlab::cli::run(cfg, std::cout, std::cerr);
}
