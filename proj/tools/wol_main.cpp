// wol: a workbench for computable linear orders, omega-logic proof search,
// and iterated reflection.
//
// Subcommands:
//   formula parse|normalize|goedel|eval <text>
//   skolem  <sentence>                  emit presentation + tree trace
//   omega   prove|refute|kb <sentence>
//   lab     limit|stages|jumpinv|ashknight
//   order   explore|check|embed
//   prog    rfn-instance|ax-progression|ti|notation|g-map
//   verify                              run the acceptance criteria
//
// All pipelines are deterministic; --seed-free asserts that no randomness
// is involved (none ever is). Exit codes: 0 ok, 1 pipeline error,
// 2 verification failure.

#include <CLI11.hpp>

#include <filesystem>
#include <future>
#include <iostream>

#include <wol/wol.hpp>
#include <wol/io.hpp>

#include "acceptance_suite.hpp"

using namespace wol;
namespace fs = std::filesystem;

namespace {

struct Global {
  uint64_t fuel = 64;
  std::string out = "out";
  bool trace = false;
  bool seed_free = false;
  bool error_json = false;
};

int fail(const Global& g, const std::string& what) {
  if (g.error_json) {
    json e;
    e["error"] = what;
    std::cout << e.dump() << "\n";
  } else {
    std::cerr << "error: " << what << "\n";
  }
  return 1;
}

OrderPresentation load_order(const std::string& spec) {
  if (spec == "omega") return omega_presentation();
  if (spec == "eta") return eta_presentation();
  if (spec == "empty") return empty_presentation();
  return OrderPresentation::deserialize(read_file(spec));
}

// config file: one `key = value` per line, mirroring the global flags
void apply_config(const std::string& path, Global& g) {
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    size_t eq = line.find('=');
    if (eq == std::string::npos || line.empty() || line[0] == '#') continue;
    auto strip = [](std::string s) {
      size_t a = s.find_first_not_of(" \t");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = strip(line.substr(0, eq));
    std::string val = strip(line.substr(eq + 1));
    if (key == "fuel") g.fuel = std::stoull(val);
    else if (key == "out") g.out = val;
    else if (key == "trace") g.trace = val == "true" || val == "1";
    else if (key == "seed-free") g.seed_free = val == "true" || val == "1";
    else if (key == "error-json") g.error_json = val == "true" || val == "1";
    else throw std::runtime_error("config: unknown key '" + key + "'");
  }
}

std::string verdict_str(const TruthVerdict& v) {
  switch (v.truth) {
    case Truth::True: return "true";
    case Truth::False: return "false";
    default: return "unknown";
  }
}

TheorySpec default_theory() {
  return theory_from_axioms("base", {parse_sentence("0 = 0"),
                                     parse_sentence("forall x. x + 0 = x"),
                                     parse_sentence("forall x. not S(x) = 0")});
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"wol: computable linear orders, omega-logic, iterated reflection"};
  app.require_subcommand(1);

  Global g;
  std::string config_path;
  app.add_option("--fuel", g.fuel, "witness search bound for unbounded quantifiers");
  app.add_option("--out", g.out, "output directory");
  app.add_flag("--trace", g.trace, "emit JSON-lines traces");
  app.add_flag("--seed-free", g.seed_free, "assert that no randomness is used (always holds)");
  app.add_flag("--error-json", g.error_json, "machine-readable errors on stdout");
  app.add_option("--config", config_path, "config file mirroring the flags");

  // formula
  auto* cmd_formula = app.add_subcommand("formula", "parse, normalize, code and evaluate");
  std::string f_action, f_text;
  cmd_formula->add_option("action", f_action)->required()
      ->check(CLI::IsMember({"parse", "normalize", "goedel", "eval"}));
  cmd_formula->add_option("text", f_text)->required();

  // skolem
  auto* cmd_skolem = app.add_subcommand("skolem", "sentence to tree to order");
  std::string s_text;
  uint64_t s_bound = 6, s_width = 8;
  cmd_skolem->add_option("sentence", s_text)->required();
  cmd_skolem->add_option("--bound", s_bound, "exhaustive tree search depth");
  cmd_skolem->add_option("--width", s_width, "entry bound for tree search");

  // omega
  auto* cmd_omega = app.add_subcommand("omega", "deduction chains and certificates");
  std::string o_action, o_text;
  uint64_t o_depth = 20;
  cmd_omega->add_option("action", o_action)->required()
      ->check(CLI::IsMember({"prove", "refute", "kb"}));
  cmd_omega->add_option("sentence", o_text)->required();
  cmd_omega->add_option("--depth", o_depth, "refutation steps / kb exploration bound");

  // lab
  auto* cmd_lab = app.add_subcommand("lab", "limit lemma and stage machines");
  std::string l_action, l_phi;
  uint64_t l_n = 0, l_stages = 30, l_bound = 40, l_count = 1;
  cmd_lab->add_option("action", l_action)->required()
      ->check(CLI::IsMember({"limit", "stages", "jumpinv", "ashknight"}));
  cmd_lab->add_option("--phi", l_phi, "parameterized forall-description");
  cmd_lab->add_option("--n", l_n, "jump-inversion rounds");
  cmd_lab->add_option("--stages", l_stages, "stages to run");
  cmd_lab->add_option("--bound", l_bound, "exploration bound");
  cmd_lab->add_option("--count", l_count, "family indices to export");

  // order
  auto* cmd_order = app.add_subcommand("order", "explore and check presentations");
  std::string or_action, or_spec = "omega", or_alpha = "w";
  uint64_t or_bound = 16, or_x = 0, or_level = 2;
  cmd_order->add_option("action", or_action)->required()
      ->check(CLI::IsMember({"explore", "check", "embed"}));
  cmd_order->add_option("--order", or_spec, "omega|eta|empty or a presentation file");
  cmd_order->add_option("--bound", or_bound);
  cmd_order->add_option("--x", or_x, "domain code");
  cmd_order->add_option("--alpha", or_alpha, "CNF ordinal");
  cmd_order->add_option("--level", or_level, "embedding level n");

  // prog
  auto* cmd_prog = app.add_subcommand("prog", "reflection schemata and notations");
  std::string p_action, p_order, p_phi = "x0 = x0", p_x = "0";
  uint64_t p_depth = 8, p_below = 0;
  bool p_has_below = false;
  cmd_prog->add_option("action", p_action)->required()
      ->check(CLI::IsMember({"rfn-instance", "ax-progression", "ti", "notation", "g-map"}));
  cmd_prog->add_option("--order", p_order, "presentation file or omega|eta|empty");
  cmd_prog->add_option("--phi", p_phi, "formula with one free variable");
  cmd_prog->add_option("--x", p_x, "domain code, INF for the last element");
  cmd_prog->add_option("--depth", p_depth, "fundamental-sequence sampling depth");
  cmd_prog->add_option("--below", p_below, "restrict TI below this code")
      ->each([&](const std::string&) { p_has_below = true; });
  std::string p_notation = "2";
  cmd_prog->add_option("--a", p_notation, "notation number for rfn-instance/notation");

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "run the acceptance criteria");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) apply_config(config_path, g);
    fs::create_directories(g.out);
    EvalContext ctx;

    if (cmd_formula->parsed()) {
      if (f_action == "parse" || f_action == "normalize") {
        Formula f = parse_formula(f_text, true);
        std::cout << print(f) << "\n";
      } else if (f_action == "goedel") {
        Formula f = parse_formula(f_text, true);
        std::cout << goedel_encode(f).to_dec() << "\n";
      } else {
        Formula f = parse_sentence(f_text);
        std::cout << verdict_str(evaluate(f, g.fuel, ctx)) << "\n";
      }
      return 0;
    }

    if (cmd_skolem->parsed()) {
      Formula phi = parse_sentence(s_text);
      SentencePipeline p = sentence_pipeline(phi);
      BundleWriter bundle(fs::path(g.out) / "skolem");
      bundle.add("presentation.txt", p.order.serialize());
      bundle.add("matrix.txt", print(p.skolem.matrix) + "\n");
      auto cert = certify_tree_death(p.tree, s_bound, s_width, ctx);
      json report;
      report["sentence"] = print(p.phi);
      report["tree_dead_by_depth"] = cert.dead;
      report["depth"] = cert.depth;
      report["width"] = cert.width;
      report["explored"] = cert.explored;
      if (!cert.dead) {
        auto chain = descending_chain(p, 10, s_width, ctx);
        json codes = json::array();
        for (const auto& c : chain) codes.push_back(c.to_dec());
        report["descending_chain"] = codes;
      }
      bundle.add("certificate.json", report.dump(2) + "\n");
      if (g.trace) bundle.add("tree.jsonl", tree_trace_jsonl(p, s_bound, s_width, ctx));
      bundle.finish();
      std::cout << report.dump(2) << "\n";
      return 0;
    }

    if (cmd_omega->parsed()) {
      Formula psi = parse_sentence(o_text);
      if (o_action == "prove") {
        auto cert = prove_true(psi, g.fuel, ctx);
        if (!cert) return fail(g, "no certificate at this fuel (sentence false or unknown)");
        json out = cert_to_json(*cert);
        out["height"] = cert->height().to_text();
        out["replay_ok"] = replay_certificate(*cert, ctx);
        write_file(fs::path(g.out) / "certificate.json", out.dump(2) + "\n");
        std::cout << "height " << cert->height().to_text() << ", replay "
                  << (out["replay_ok"].get<bool>() ? "ok" : "FAILED") << "\n";
        return 0;
      }
      if (o_action == "refute") {
        auto stream = refute_false(psi, g.fuel, o_depth, ctx);
        for (const auto& s : stream) {
          std::string line;
          for (size_t i = 0; i < s.size(); i++) {
            if (i) line += ",  ";
            line += print(s[i]);
          }
          std::cout << line << "\n";
        }
        return 0;
      }
      OrderPresentation kb = stammbaum_kb(psi);
      write_file(fs::path(g.out) / "stammbaum_kb.txt", kb.serialize());
      FiniteOrder f = explore_prefix(kb, o_depth, &ctx);
      std::cout << f.export_pairs();
      return 0;
    }

    if (cmd_lab->parsed()) {
      if (l_action == "jumpinv") {
        // the omega-times machine over stages growing to a stable 2-chain
        using namespace expr;
        BigNat one, two;
        one.set_bit(pair_code(0, 0));
        for (uint64_t a = 0; a < 2; a++)
          for (uint64_t b = a; b < 2; b++) two.set_bit(pair_code(a, b));
        StageSequence st{Program{mk(Op::If, {mk(Op::Eq, {arg(0), cst(uint64_t(0))}),
                                             cst(Val(one)), cst(Val(two))})}, false};
        OrderPresentation p = jump_inv_omega_times(st);
        const MachineState& ms = machine_state(MachineRun::JumpInv1, st, l_stages, ctx);
        BundleWriter bundle(fs::path(g.out) / "jumpinv");
        bundle.add("presentation.txt", p.serialize());
        if (g.trace) bundle.add("trace.jsonl", trace_to_jsonl(ms.trace));
        bundle.finish();
        FiniteOrder f = explore_prefix(p, l_bound, &ctx);
        std::cout << "explored " << f.elems.size() << " elements after " << l_stages
                  << " stages\n";
        return 0;
      }
      if (l_action == "ashknight") {
        if (l_phi.empty()) return fail(g, "--phi required");
        Formula phi = parse_formula(l_phi, true);
        DichotomyFamily fam = ash_knight_family(phi, l_n);
        fs::path dir = fs::path(g.out) / "family";
        fs::create_directories(dir);
        // family jobs fan out concurrently; each writes only its own file
        std::vector<std::future<std::string>> jobs;
        for (uint64_t i = 0; i < l_count; i++) {
          jobs.push_back(std::async(std::launch::async, [&, i]() {
            EvalContext local;
            OrderPresentation p = fam.at(i);
            write_file(dir / (std::to_string(i) + ".presentation"), p.serialize());
            PrefixEvidence ev;
            for (uint64_t b : {l_bound / 4 + 2, l_bound / 2 + 2, l_bound})
              ev.snapshots.push_back(explore_prefix(p, b, &local));
            bool omega_like = l_n == 0 ? ev.snapshots.back().elems.size() == 1
                                       : prefix_iso_check(ev, PrefixTemplate::omega());
            bool densified = prefix_iso_check(ev, PrefixTemplate::omega_pow_eta(l_n));
            return "i=" + std::to_string(i) + " explored=" +
                   std::to_string(ev.snapshots.back().elems.size()) +
                   " omega^n-consistent=" + (omega_like ? "yes" : "no") +
                   " densification=" + (densified ? "yes" : "no");
          }));
        }
        for (auto& job : jobs) std::cout << job.get() << "\n";
        return 0;
      }
      if (l_action == "limit") {
        // demonstration target: multiples of three below 32
        BigNat target;
        for (uint64_t b = 0; b < 32; b += 3) target.set_bit(b);
        BigNat co;
        for (uint64_t b = 0; b < 64; b++)
          if (!target.bit(b)) co.set_bit(b);
        using namespace expr;
        auto matrix = [](const BigNat& mask) {
          NodeRef ge = mk(Op::Not, {mk(Op::Lt, {arg(2), arg(1)})});
          NodeRef in = mk(Op::Mod, {mk(Op::Shr, {cst(Val(mask)), arg(0)}), cst(uint64_t(2))});
          return Program{mk(Op::And, {ge, in})};
        };
        ApproxSequence a = limit_decompose(matrix(target), matrix(co));
        for (uint64_t i : {8, 16, 32, 48}) {
          BigNat ai = a.at(i, ctx);
          std::string bits;
          for (uint64_t b = 0; b < std::min<uint64_t>(i, 32); b++) bits += ai.bit(b) ? '1' : '0';
          std::cout << "A_" << i << " = " << bits << "\n";
        }
        return 0;
      }
      // stages: extract finite orders from a relation approximation
      BigNat rel;
      for (uint64_t a = 0; a < 3; a++)
        for (uint64_t b = a; b < 3; b++) rel.set_bit(pair_code(a, b));
      bool exact = false;
      FiniteOrder f = extract_stage_order(rel, &exact);
      std::cout << f.export_pairs();
      return 0;
    }

    if (cmd_order->parsed()) {
      OrderPresentation p = load_order(or_spec);
      if (or_action == "explore") {
        FiniteOrder f = explore_prefix(p, or_bound, &ctx);
        std::cout << f.export_pairs();
        return 0;
      }
      if (or_action == "check") {
        FiniteOrder f = explore_prefix(p, or_bound, &ctx);  // check_linear runs inside
        std::cout << "linear order on " << f.elems.size() << " explored elements\n";
        return 0;
      }
      CnfOrdinal alpha = CnfOrdinal::parse(or_alpha);
      TruthVerdict v = embed_check(p, or_x, alpha, or_level, or_bound);
      std::cout << verdict_str(v) << "\n";
      return 0;
    }

    if (cmd_prog->parsed()) {
      TheorySpec t = default_theory();
      if (p_action == "rfn-instance") {
        Formula phi = parse_formula(p_phi, true);
        Formula inst = render_reflection_instance(t, phi);
        std::cout << print(inst) << "\n";
        return 0;
      }
      if (p_action == "ax-progression") {
        OrderPresentation p = load_order(p_order.empty() ? "omega" : p_order);
        Formula ax = build_ax_progression(t, p);
        write_file(fs::path(g.out) / "ax_progression.txt", print(ax) + "\n");
        std::cout << "Sigma_1 recognizer with free stage/axiom variables written to "
                  << (fs::path(g.out) / "ax_progression.txt").string() << "\n";
        return 0;
      }
      if (p_action == "ti") {
        OrderPresentation p = load_order(p_order.empty() ? "omega" : p_order);
        Formula phi = parse_formula(p_phi, true);
        std::optional<Val> below;
        if (p_has_below) below = Val(p_below);
        Formula ti = render_ti_instance(p, phi, below);
        BundleWriter bundle(fs::path(g.out) / "ti");
        bundle.add("ti_instance.txt", print(ti) + "\n");
        bundle.add("lo_shape.txt", render_lo_text(p));
        bundle.add("wo_shape.txt", render_wo_text(p));
        bundle.finish();
        std::cout << print(ti) << "\n";
        return 0;
      }
      if (p_action == "notation") {
        NotationTerm a = NotationTerm::from_number(BigNat::from_dec(p_notation));
        Registry reg;
        auto o = notation_ordinal(a, p_depth, reg, ctx);
        std::cout << a.describe() << "  |.| = " << (o ? o->to_text() : "unknown") << "\n";
        Formula rec = rfn_case(a, t);
        write_file(fs::path(g.out) / "rfn_recognizer.txt", print(rec) + "\n");
        return 0;
      }
      // g-map
      OrderPresentation base = load_order(p_order.empty() ? "empty" : p_order);
      OrderPresentation lp = omega_times_one_plus_plus_one(base);
      Registry reg;
      EvalContext rctx;
      rctx.registry = &reg;
      uint64_t x = p_x == "INF" ? eval_program(rctx, *lp.last, {}).as_u64()
                                : std::stoull(p_x);
      NotationTerm gx = notation_map_g(lp, x, reg, rctx);
      auto o = notation_ordinal(gx, p_depth, reg, rctx);
      BundleWriter bundle(fs::path(g.out) / "gmap");
      bundle.add("presentation.txt", lp.serialize());
      std::string nt = gx.describe() + "\n";
      if (auto v = gx.value()) nt += "decimal: " + v->to_dec() + "\n";
      nt += "ordinal: " + (o ? o->to_text() : std::string("unknown")) + "\n";
      bundle.add("notation.txt", nt);
      TheorySpec bt = default_theory();
      bundle.add("reflection_instance.txt",
                 print(render_reflection_instance(bt, parse_formula("x0 = x0", true))) + "\n");
      bundle.add("ti_instance.txt",
                 print(render_ti_instance(lp, parse_formula("x0 = x0", true))) + "\n");
      reg.save((fs::path(g.out) / "gmap" / "registry.txt").string());
      bundle.finish();
      std::cout << gx.describe() << "  |.| = " << (o ? o->to_text() : "unknown") << "\n";
      return 0;
    }

    if (cmd_verify->parsed()) {
      int failures = acceptance::run_all();
      return failures ? 2 : 0;
    }
  } catch (const ParseError& e) {
    return fail(g, e.what());
  } catch (const std::exception& e) {
    return fail(g, e.what());
  }
  return 0;
}
