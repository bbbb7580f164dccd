// coxstar: computations in star-shaped Coxeter groups — word problem,
// automorphism calculus, diagram twisting and the isomorphism decision.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coxstar/coxstar.hpp"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitFile = 66;

struct FileInput {
  std::string path;
  std::string bytes;
};

FileInput slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::system_error(errno, std::generic_category(), path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return {path, ss.str()};
}

void emit(const coxstar::Report& rep, bool json) {
  if (json)
    std::cout << rep.to_json().dump(2) << "\n";
  else
    rep.print_text(std::cout);
}

coxstar::Json word_json(const coxstar::GroupElement& g) {
  return coxstar::format_word(g);
}

coxstar::Json relation_json(const coxstar::RelationReport& rel, bool verbose) {
  coxstar::Json j;
  j["checks"] = rel.checks.size();
  std::size_t failed = 0;
  coxstar::Json items = coxstar::Json::array();
  for (const auto& c : rel.checks) {
    if (!c.pass) ++failed;
    if (verbose || !c.pass)
      items.push_back({{"identity", c.identity}, {"instance", c.instance}, {"pass", c.pass}});
  }
  j["failed"] = failed;
  if (!items.empty()) j["items"] = items;
  return j;
}

coxstar::Json structure_json(const coxstar::StructureReport& st) {
  coxstar::Json j;
  j["labels"] = st.labels;
  j["n"] = st.n;
  j["n_odd"] = st.n_o;
  j["n_even"] = st.n_e;
  j["n_two"] = st.n_2;
  j["T_order"] = st.T_order;
  j["P1_order"] = st.P1_order;
  j["P3_order"] = st.P3_order;
  j["diag_order"] = st.diag_order;
  j["P1"] = st.P1_iso;
  j["P2"] = st.P2_iso;
  j["aut"] = st.aut_decomposition;
  j["spe"] = st.spe_decomposition;
  j["aut_equals_spe"] = st.aut_equals_spe;
  j["innP_sequence_splits"] = st.innP_splits;
  j["out_sequence"] = st.out_splitting;
  if (st.distinguished) j["distinguished_leaf"] = st.distinguished;
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"computations in star-shaped Coxeter groups"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  unsigned long long seed = 0;
  std::size_t budget = 1000000;
  app.add_flag("--json", json, "emit the report as JSON");
  app.add_option("--seed", seed, "seed for randomized suites (default 0)");
  app.add_option("--budget", budget, "visit budget of the word-problem oracle");

  std::string file_a, file_b, word_a, word_b;
  std::vector<std::string> aut_files;
  std::string twist_I, twist_J;
  bool emit_moves = false;

  auto* info = app.add_subcommand("info", "index partitions, Diag(W), classes, structure");
  info->add_option("file", file_a)->required();

  auto* reduce = app.add_subcommand("reduce", "normal form of a word");
  reduce->add_option("file", file_a)->required();
  reduce->add_option("word", word_a)->required();

  auto* order_cmd = app.add_subcommand("order", "order of the element of a word");
  order_cmd->add_option("file", file_a)->required();
  order_cmd->add_option("word", word_a)->required();

  auto* aut = app.add_subcommand("aut", "automorphism commands");
  aut->require_subcommand(1);
  auto* aut_verify = aut->add_subcommand("verify", "check an image table / composition");
  aut_verify->add_option("file", file_a)->required();
  aut_verify->add_option("autfile", word_a)->required();
  auto* aut_apply = aut->add_subcommand("apply", "apply an automorphism to a word");
  aut_apply->add_option("file", file_a)->required();
  aut_apply->add_option("autfile", word_a)->required();
  aut_apply->add_option("word", word_b)->required();
  auto* aut_compose = aut->add_subcommand("compose", "compose automorphism files left to right");
  aut_compose->add_option("file", file_a)->required();
  aut_compose->add_option("autfiles", aut_files)->expected(-2);
  auto* aut_fact = aut->add_subcommand("factorize", "inner/P/T/diagram decomposition");
  aut_fact->add_option("file", file_a)->required();
  aut_fact->add_option("autfile", word_a)->required();
  auto* aut_report = aut->add_subcommand("report", "structure report of Aut(W)");
  aut_report->add_option("file", file_a)->required();

  auto* selftest = app.add_subcommand("selftest", "relation suite, center checks, oracle spot checks");
  selftest->add_option("file", file_a)->required();
  auto* aut_selftest = aut->add_subcommand("selftest", "alias of the top-level selftest");
  aut_selftest->add_option("file", file_a)->required();

  auto* twist = app.add_subcommand("twist", "apply a diagram twist");
  twist->add_option("file", file_a)->required();
  twist->add_option("--I", twist_I, "the two twist vertices, comma separated")->required();
  twist->add_option("--J", twist_J, "the twisted-away part, comma separated");
  twist->add_flag("--emit-moves", emit_moves);

  auto* canon = app.add_subcommand("canon", "canonical form of an in-class diagram");
  canon->add_option("file", file_a)->required();
  canon->add_flag("--emit-moves", emit_moves);

  auto* iso = app.add_subcommand("iso", "decide isomorphism of two diagrams");
  iso->add_option("fileA", file_a)->required();
  iso->add_option("fileB", file_b)->required();
  iso->add_flag("--emit-moves", emit_moves);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  coxstar::Report rep;

  auto load_system = [&](const std::string& path) {
    FileInput f = slurp(path);
    rep.add_input(path, f.bytes);
    return coxstar::parse_star_ptr(f.bytes);
  };
  auto load_diagram = [&](const std::string& path) {
    FileInput f = slurp(path);
    rep.add_input(path, f.bytes);
    return coxstar::parse_diagram(f.bytes);
  };

  if (*info) {
    rep.command = "info";
    auto sys = load_system(file_a);
    auto p = coxstar::index_partitions(*sys);
    rep.results["labels"] = sys->labels();
    rep.results["I_odd"] = p.odd;
    rep.results["I_even"] = p.even;
    rep.results["I_2"] = p.two;
    auto diag = coxstar::diagram_automorphisms(*sys);
    coxstar::Json dj;
    dj["order"] = diag.order;
    dj["blocks"] = coxstar::Json::array();
    for (const auto& b : diag.blocks)
      dj["blocks"].push_back(
          {{"label", b.label}, {"parity", b.odd ? "odd" : "even"}, {"leaves", b.indices}});
    rep.results["diagram_automorphisms"] = dj;
    coxstar::Json cls = coxstar::Json::array();
    for (int i = 0; i <= sys->leaf_count(); ++i) {
      auto c = coxstar::generator_class(*sys, i);
      cls.push_back(c.central_odd ? "central-odd" : ("even-leaf(" + std::to_string(c.leaf) + ")"));
    }
    rep.results["generator_classes"] = cls;
    rep.results["hyperbolic"] = coxstar::is_hyperbolic(*sys);
    rep.results["structure"] = structure_json(coxstar::structure_report(sys));
    emit(rep, json);
    return 0;
  }

  if (*reduce || *order_cmd) {
    rep.command = *reduce ? "reduce" : "order";
    auto sys = load_system(file_a);
    coxstar::GroupElement g = coxstar::parse_word(sys, word_a);
    rep.results["word"] = word_json(g);
    if (*order_cmd) {
      auto o = coxstar::order(g);
      rep.results["order"] = o ? coxstar::Json(*o) : coxstar::Json("inf");
    }
    emit(rep, json);
    return 0;
  }

  if (*aut_verify || *aut_apply || *aut_fact) {
    auto sys = load_system(file_a);
    FileInput f = slurp(word_a);
    rep.add_input(word_a, f.bytes);
    coxstar::Automorphism a = coxstar::parse_automorphism(sys, f.bytes);
    if (*aut_verify) {
      rep.command = "aut verify";
      auto v = coxstar::verify_is_automorphism(sys, a.images());
      rep.results["automorphism"] = v.ok;
      if (!v.ok) rep.fail("verify", v.detail);
    } else if (*aut_apply) {
      rep.command = "aut apply";
      coxstar::GroupElement g = coxstar::parse_word(sys, word_b);
      rep.results["image"] = word_json(coxstar::apply(a, g));
    } else {
      rep.command = "aut factorize";
      auto out = coxstar::factorize_automorphism(a);
      if (!out.ok()) {
        rep.fail("factorize", out.error);
      } else {
        const auto& fct = *out.result;
        rep.results["inner"] = word_json(fct.conjugator);
        coxstar::Json pw = coxstar::Json::array();
        for (const auto& b : fct.p_word) pw.push_back(coxstar::format_basic(b));
        rep.results["p_word"] = pw;
        rep.results["transvections"] = fct.t_set;
        rep.results["diagram"] = coxstar::format_basic(coxstar::BasicAut::diagram(fct.diagram));
      }
    }
    emit(rep, json);
    return rep.ok() ? 0 : 1;
  }

  if (*aut_compose) {
    rep.command = "aut compose";
    auto sys = load_system(file_a);
    coxstar::Automorphism acc = coxstar::Automorphism::identity(sys);
    for (const auto& path : aut_files) {
      FileInput f = slurp(path);
      rep.add_input(path, f.bytes);
      acc = coxstar::compose(acc, coxstar::parse_automorphism(sys, f.bytes));
    }
    coxstar::Json images = coxstar::Json::array();
    for (int i = 0; i <= sys->leaf_count(); ++i)
      images.push_back("s" + std::to_string(i) + " -> " + coxstar::format_word(acc.image(i)));
    rep.results["composition"] = images;
    emit(rep, json);
    return 0;
  }

  if (*aut_report) {
    rep.command = "aut report";
    auto sys = load_system(file_a);
    rep.results["structure"] = structure_json(coxstar::structure_report(sys));
    emit(rep, json);
    return 0;
  }

  if (*selftest || *aut_selftest) {
    rep.command = "selftest";
    auto sys = load_system(file_a);
    auto rel = coxstar::relation_suite(sys);
    rep.results["relation_suite"] = relation_json(rel, false);
    for (const auto& c : rel.checks)
      if (!c.pass) rep.fail("relation " + c.identity, c.instance);
    auto center = coxstar::check_center_P2(sys, seed);
    coxstar::Json cj;
    cj["P3_central"] = center.p3_central;
    cj["witness_expected"] = center.witness_expected;
    cj["witness_found"] = center.witness_found;
    if (center.witness_found) cj["witness"] = center.witness;
    cj["exhaustive"] = center.exhaustive;
    rep.results["center_P2"] = cj;
    if (!center.pass) rep.fail("center_P2", "case split violated");
    // Oracle spot checks: seeded random word pairs, engine vs oracle.
    std::mt19937_64 rng(seed);
    int agreements = 0, checks = 0;
    for (int trial = 0; trial < 50; ++trial) {
      auto rand_word = [&] {
        std::vector<int> w;
        int len = static_cast<int>(rng() % 7);
        for (int k = 0; k < len; ++k)
          w.push_back(static_cast<int>(rng() % (sys->leaf_count() + 1)));
        return w;
      };
      std::vector<int> u = rand_word(), v = rand_word();
      bool engine_eq = coxstar::GroupElement::from_letters(sys, u) ==
                       coxstar::GroupElement::from_letters(sys, v);
      auto verdict = coxstar::tits_oracle_equal(*sys, u, v, budget);
      if (verdict == coxstar::OracleVerdict::inconclusive) continue;
      ++checks;
      bool oracle_eq = verdict == coxstar::OracleVerdict::equal;
      if (engine_eq == oracle_eq)
        ++agreements;
      else
        rep.fail("oracle", coxstar::format_letters(u) + " vs " + coxstar::format_letters(v));
    }
    rep.results["oracle_spot_checks"] = {{"checked", checks}, {"agree", agreements}};
    emit(rep, json);
    return rep.ok() ? 0 : 1;
  }

  if (*twist) {
    rep.command = "twist";
    coxstar::GeneralSystem g = load_diagram(file_a);
    auto names = [&](const std::string& csv) {
      std::vector<int> out;
      std::string cur;
      for (char c : csv + ",") {
        if (c == ',') {
          if (!cur.empty()) {
            int v = g.index_of(cur);
            if (v < 0) throw coxstar::ParseError(0, "unknown vertex '" + cur + "'");
            out.push_back(v);
            cur.clear();
          }
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
          cur += c;
        }
      }
      return out;
    };
    auto I = names(twist_I);
    if (I.size() != 2) throw coxstar::ParseError(0, "--I needs exactly two vertices");
    coxstar::TwistMove mv = coxstar::make_twist(g, I[0], I[1], names(twist_J));
    coxstar::GeneralSystem out = coxstar::apply_twist(g, mv);
    rep.results["move"] = mv.describe(g);
    rep.results["diagram"] = coxstar::format_general(out);
    if (emit_moves) {
      coxstar::Json ex = coxstar::Json::array();
      for (int v = 0; v < out.vertex_count(); ++v)
        ex.push_back(out.name(v) + " = " + out.expression_string(v));
      rep.results["expressions"] = ex;
    }
    emit(rep, json);
    return 0;
  }

  if (*canon) {
    rep.command = "canon";
    coxstar::GeneralSystem g = load_diagram(file_a);
    try {
      auto res = coxstar::canonical_form_full(g);
      rep.results["rank"] = res.form.rank;
      rep.results["labels"] = res.form.labels;
      if (emit_moves) {
        rep.results["moves"] = res.moves;
        coxstar::Json ex = coxstar::Json::array();
        for (int v = 0; v < res.star.vertex_count(); ++v)
          ex.push_back(res.star.name(v) + " = " + res.star.expression_string(v));
        rep.results["expressions"] = ex;
      }
    } catch (const coxstar::OutOfClass& e) {
      rep.fail("canon", e.what());
      emit(rep, json);
      return 2;
    }
    emit(rep, json);
    return 0;
  }

  if (*iso) {
    rep.command = "iso";
    coxstar::GeneralSystem a = load_diagram(file_a);
    coxstar::GeneralSystem b = load_diagram(file_b);
    auto verdict = coxstar::decide_isomorphism(a, b);
    const char* text = verdict == coxstar::IsoVerdict::isomorphic      ? "isomorphic"
                       : verdict == coxstar::IsoVerdict::not_isomorphic ? "not-isomorphic"
                                                                        : "out-of-class";
    rep.results["verdict"] = text;
    if (emit_moves && verdict != coxstar::IsoVerdict::out_of_class) {
      for (auto* g : {&a, &b}) {
        auto res = coxstar::canonical_form_full(*g);
        coxstar::Json cj;
        cj["moves"] = res.moves;
        coxstar::Json ex = coxstar::Json::array();
        for (int v = 0; v < res.star.vertex_count(); ++v)
          ex.push_back(res.star.name(v) + " = " + res.star.expression_string(v));
        cj["expressions"] = ex;
        rep.results[g == &a ? "left" : "right"] = cj;
      }
    }
    emit(rep, json);
    return verdict == coxstar::IsoVerdict::isomorphic      ? 0
           : verdict == coxstar::IsoVerdict::not_isomorphic ? 1
                                                            : 2;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::system_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFile;
  } catch (const coxstar::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFile;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
