// Command-line front end: instance ingest, solver dispatch, gap metrics,
// contract-class checking, instance generation, and contract validation.
// All emitted numbers are exact rationals (canonical "p/q" or integer form)
// with 12-digit decimal approximations alongside; output is deterministic.

#include <CLI11.hpp>
#include <json.hpp>

#include "ambicon/ambiguous.hpp"
#include "ambicon/gap.hpp"
#include "ambicon/io.hpp"
#include "ambicon/lp.hpp"
#include "ambicon/manipulability.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using json = nlohmann::ordered_json;
using namespace ambicon;

// Malformed input (files, JSON, schemas, parameter lists) -> exit code 2;
// domain failures from the solvers -> exit code 1; negative mathematical
// results (infeasible, not implementable) stay in-band with exit code 0.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Instance load_instance(const std::string& path) {
  try {
    return io::parse_instance(read_file(path));
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(path + ": " + std::string(e.what()));
  }
}

// Actions are numbered 1-based in input file order on the CLI surface; the
// default labels ("a1", "a2", ...) carry that numbering through sorting and
// deduplication.
int file_number(const Instance& inst, int i) {
  const std::string& label = inst.action_label(i);
  if (label.size() > 1 && label[0] == 'a') {
    try {
      return std::stoi(label.substr(1));
    } catch (...) {
    }
  }
  return inst.original_action(i) + 1;
}

int find_action(const Instance& inst, int file_k) {
  for (int i = 0; i < inst.n(); ++i)
    if (file_number(inst, i) == file_k) return i;
  throw std::invalid_argument("action " + std::to_string(file_k) +
                              " not present (out of range or removed as a duplicate row)");
}

void add_rat(json& o, const std::string& name, const Rational& q) {
  o[name] = rational_to_string(q);
  o[name + "_decimal"] = decimal_approx(q);
}

json tau_json(const AmbiguousContract& tau) {
  json arr = json::array();
  for (const auto& t : tau.contracts) {
    json row = json::array();
    for (int j = 0; j < t.size(); ++j) row.push_back(rational_to_string(t(j)));
    arr.push_back(std::move(row));
  }
  return arr;
}

json cert_json(const std::vector<CertItem>& items) {
  json arr = json::array();
  for (const auto& item : items) arr.push_back(json{{"name", item.name}, {"pass", item.pass}});
  return arr;
}

json solve_result_json(const Instance& inst, const SolveResult& r) {
  json o;
  o["status"] = r.status;
  if (r.action >= 0) {
    o["action"] = file_number(inst, r.action);
    o["action_label"] = inst.action_label(r.action);
  }
  if (r.ok()) {
    add_rat(o, "payment", r.payment);
    add_rat(o, "agent_utility", r.agent_utility);
    add_rat(o, "principal_utility", r.principal_utility);
    o["tau"] = tau_json(r.tau);
    json cps = json::array();
    for (const auto& p : r.contract_payments) cps.push_back(rational_to_string(p));
    o["contract_payments"] = std::move(cps);
    o["certificate"] = cert_json(r.certificate);
  }
  return o;
}

void emit_json(const json& doc) { std::cout << doc.dump(2) << "\n"; }

void emit_pretty(const json& doc, int indent = 0) {
  const std::string pad(indent, ' ');
  for (const auto& [key, value] : doc.items()) {
    if (key.size() > 8 && key.substr(key.size() - 8) == "_decimal") continue;
    if (value.is_object()) {
      std::cout << pad << key << ":\n";
      emit_pretty(value, indent + 2);
    } else if (doc.contains(key + "_decimal")) {
      std::cout << pad << key << ": " << value.get<std::string>() << " ~ "
                << doc[key + "_decimal"].get<std::string>() << "\n";
    } else {
      std::cout << pad << key << ": " << value.dump() << "\n";
    }
  }
}

// Per-action flat table: one row per (kept) action with its expected reward,
// welfare, minimum single-contract payment, optimal ambiguous payment, and
// the principal's ambiguous utility. Empty cells mean infeasible/not ok.
void emit_csv(const Instance& inst, bool monotone) {
  std::cout << "action,R,W,min_payment_single,payment_ambiguous,U_P\n";
  for (int i = 0; i < inst.n(); ++i) {
    std::cout << file_number(inst, i) << "," << rational_to_string(expected_reward(inst, i))
              << "," << rational_to_string(welfare(inst, i)) << ",";
    lp::MinPaymentResult mp = lp::min_payment(inst, i, monotone);
    if (mp.feasible) std::cout << rational_to_string(mp.payment);
    std::cout << ",";
    SolveResult amb = monotone ? ambiguous::solve_monotone_for_action(inst, i)
                               : ambiguous::solve_general_for_action(inst, i);
    if (amb.ok())
      std::cout << rational_to_string(amb.payment) << ","
                << rational_to_string(amb.principal_utility);
    else
      std::cout << ",";
    std::cout << "\n";
  }
}

void emit_doc(const json& doc, const std::string& format) {
  if (format == "pretty")
    emit_pretty(doc);
  else
    emit_json(doc);
}

json removed_json(const DedupeReport& report) {
  // removed_original already holds pre-sort input indices.
  json arr = json::array();
  for (int orig : report.removed_original) arr.push_back(orig + 1);
  return arr;
}

manipulability::ContractCurve curve_from_json(const json& spec, const std::string& kind,
                                              size_t index) {
  auto rat = [&](const json& v) {
    if (v.is_number_integer()) return Rational(static_cast<long>(v.get<long long>()));
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw InputError("curve parameters must be integers or rational strings");
  };
  if (kind == "linear") return manipulability::ContractCurve::linear(rat(spec));
  if (kind == "power") {
    // spec here is one coefficient; the shared degree is handled by the caller.
    throw std::logic_error("unreachable");
  }
  if (kind == "polynomial") {
    std::vector<Rational> coeffs;
    for (const auto& c : spec) coeffs.push_back(rat(c));
    return manipulability::ContractCurve::polynomial(std::move(coeffs));
  }
  if (kind == "table") {
    std::vector<std::pair<Rational, Rational>> points;
    for (const auto& p : spec) {
      if (!p.is_array() || p.size() != 2)
        throw InputError("table curve " + std::to_string(index) +
                         " must be a list of [x, t(x)] pairs");
      points.emplace_back(rat(p[0]), rat(p[1]));
    }
    return manipulability::ContractCurve::table(std::move(points));
  }
  throw InputError("unknown curve kind: " + kind);
}

int run_check_class(const std::string& path) {
  json spec = json::parse(read_file(path), nullptr, false);
  if (spec.is_discarded() || !spec.is_object()) throw InputError(path + ": malformed JSON");
  if (!spec.contains("kind") || !spec["kind"].is_string())
    throw InputError("class spec needs a string field: kind");
  const std::string kind = spec["kind"].get<std::string>();
  if (!spec.contains("grid") || !spec["grid"].is_array() || spec["grid"].empty())
    throw InputError("class spec needs a nonempty grid array");
  auto rat = [&](const json& v) {
    if (v.is_number_integer()) return Rational(static_cast<long>(v.get<long long>()));
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw InputError("grid values must be integers or rational strings");
  };
  std::vector<Rational> grid;
  for (const auto& g : spec["grid"]) grid.push_back(rat(g));

  std::vector<manipulability::ContractCurve> family;
  try {
    if (kind == "linear" || kind == "power") {
      if (!spec.contains("alphas") || !spec["alphas"].is_array())
        throw InputError("spec needs an alphas array");
      unsigned long degree = 1;
      if (kind == "power") {
        if (!spec.contains("degree") || !spec["degree"].is_number_unsigned())
          throw InputError("power spec needs a nonnegative integer degree");
        degree = spec["degree"].get<unsigned long>();
      }
      for (const auto& a : spec["alphas"])
        family.push_back(kind == "linear"
                             ? manipulability::ContractCurve::linear(rat(a))
                             : manipulability::ContractCurve::power(rat(a), degree));
    } else if (kind == "polynomial" || kind == "table") {
      if (!spec.contains("curves") || !spec["curves"].is_array())
        throw InputError("spec needs a curves array");
      size_t idx = 0;
      for (const auto& c : spec["curves"]) family.push_back(curve_from_json(c, kind, idx++));
    } else {
      throw InputError("unknown kind: " + kind);
    }
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }

  manipulability::NpcReport rep = manipulability::npc_check(family, grid);
  json out;
  out["kind"] = kind;
  switch (rep.status) {
    case manipulability::NpcStatus::HoldsAnalytically:
      out["status"] = "holds-analytically";
      out["verdict"] = "non-manipulable";
      break;
    case manipulability::NpcStatus::HoldsOnGrid:
      out["status"] = "holds-on-grid";
      out["verdict"] = "no-crossing-found-on-grid";
      break;
    case manipulability::NpcStatus::Violated: {
      out["status"] = "violated";
      out["verdict"] = "manipulable";
      out["pair"] = json::array({rep.first, rep.second});
      json cr;
      add_rat(cr, "x1", rep.at.x1);
      add_rat(cr, "x2", rep.at.x2);
      out["crossing"] = std::move(cr);
      auto [q1, q2] = manipulability::q_from_crossing(family[rep.first], family[rep.second],
                                                     rep.at.x1, rep.at.x2);
      RatVec r(2), q(2);
      r << rep.at.x1, rep.at.x2;
      q << q1, q2;
      try {
        manipulability::Witness w =
            manipulability::build_witness(family[rep.first], family[rep.second], r, q);
        json jw;
        jw["q"] = json::array({rational_to_string(q1), rational_to_string(q2)});
        add_rat(jw, "target_cost", w.instance.cost(w.target));
        jw["tau"] = tau_json(w.tau);
        jw["instance"] = json::parse(io::emit_instance(w.instance));
        out["witness"] = std::move(jw);
      } catch (const std::exception&) {
        // A crossing without a constructible two-point witness is still a
        // violation; report the crossing alone.
      }
      break;
    }
  }
  emit_json(out);
  return 0;
}

std::vector<Rational> parse_params(const std::vector<std::string>& raw) {
  std::vector<Rational> out;
  for (const auto& s : raw) {
    try {
      out.push_back(parse_rational(s));
    } catch (const std::exception& e) {
      throw InputError("bad parameter '" + s + "': " + e.what());
    }
  }
  return out;
}

long param_int(const Rational& q, const std::string& name) {
  if (q.get_den() != 1) throw InputError(name + " must be an integer");
  if (!q.get_num().fits_slong_p()) throw InputError(name + " out of range");
  return mpz_get_si(q.get_num().get_mpz_t());
}

int run_gen(const std::string& name, const std::vector<std::string>& raw_params) {
  std::vector<Rational> p = parse_params(raw_params);
  auto expect = [&](size_t lo, size_t hi) {
    if (p.size() < lo || p.size() > hi)
      throw InputError("generator " + name + " takes between " + std::to_string(lo) +
                       " and " + std::to_string(hi) + " parameters");
  };
  json out;
  if (name == "example1" || name == "mlrp_b4") {
    expect(0, 0);
    gap::Fixture f = gap::gen_fixture(name);
    out = json::parse(io::emit_instance(f.instance));
    json ref;
    for (const auto& [key, value] : f.reference) add_rat(ref, key, value);
    out["reference"] = std::move(ref);
  } else if (name == "sop_tight") {
    expect(0, 1);
    gap::Fixture f = gap::gen_sop_tight(p.empty() ? 5 : static_cast<int>(param_int(p[0], "m")));
    out = json::parse(io::emit_instance(f.instance));
    json ref;
    for (const auto& [key, value] : f.reference) add_rat(ref, key, value);
    out["reference"] = std::move(ref);
  } else if (name == "monotone_omega") {
    expect(0, 4);
    int n = p.size() > 0 ? static_cast<int>(param_int(p[0], "n")) : 5;
    Rational eps = p.size() > 1 ? p[1] : Rational(1, 10);
    Rational gamma = p.size() > 2 ? p[2] : Rational(1, 100);
    Rational delta = p.size() > 3 ? p[3] : Rational(1, 100);
    gap::Fixture f = gap::gen_monotone_omega(n, eps, gamma, delta);
    out = json::parse(io::emit_instance(f.instance));
    json ref;
    for (const auto& [key, value] : f.reference) add_rat(ref, key, value);
    out["reference"] = std::move(ref);
  } else if (name == "two_effort") {
    expect(0, 2);
    Rational eps = p.size() > 0 ? p[0] : Rational(1, 10);
    Rational delta = p.size() > 1 ? p[1] : Rational(1, 2);
    out = json::parse(io::emit_instance(gap::gen_two_effort_gap(eps, delta)));
  } else if (name == "unbounded") {
    expect(0, 3);
    long x = p.size() > 0 ? param_int(p[0], "x") : 50;
    Rational delta = p.size() > 1 ? p[1] : Rational(1, 10);
    int m = p.size() > 2 ? static_cast<int>(param_int(p[2], "m")) : 3;
    gap::UnboundedReport rep = gap::gen_unbounded_gap(x, delta, m);
    out = json::parse(io::emit_instance(rep.instance));
    json ref;
    add_rat(ref, "u_bar", rep.u_bar);
    add_rat(ref, "best_single", rep.best_single);
    add_rat(ref, "ambiguous_utility", rep.ambiguous_utility);
    add_rat(ref, "rho_lower", rep.rho_lower);
    ref["layers"] = rep.layers;
    ref["amplified"] = rep.amplified;
    ref["target_action"] = file_number(rep.instance, rep.target);
    ref["tau_star"] = tau_json(rep.tau_star);
    ref["certificate"] = cert_json(rep.certificate);
    out["reference"] = std::move(ref);
  } else if (name == "diagonal") {
    if (p.size() < 4) throw InputError("generator diagonal takes: m W c r1 ... rm");
    gap::DiagonalParams dp;
    dp.m = static_cast<int>(param_int(p[0], "m"));
    dp.W = p[1];
    dp.c = p[2];
    if (static_cast<int>(p.size()) != 3 + dp.m)
      throw InputError("generator diagonal needs exactly m rewards");
    dp.rewards = RatVec(dp.m);
    for (int j = 0; j < dp.m; ++j) dp.rewards(j) = p[3 + j];
    gap::DiagonalSet set = gap::gen_diagonal(dp);
    out["costs"] = json::array();
    for (int i = 0; i < dp.m; ++i) out["costs"].push_back(rational_to_string(set.costs(i)));
    out["probs"] = json::array();
    for (int i = 0; i < dp.m; ++i) {
      json row = json::array();
      for (int j = 0; j < dp.m; ++j) row.push_back(rational_to_string(set.probs(i, j)));
      out["probs"].push_back(std::move(row));
    }
  } else {
    throw InputError("unknown generator: " + name);
  }
  emit_json(out);
  return 0;
}

void check_thread_env() {
  const char* env = std::getenv("AMBICON_THREADS");
  if (env == nullptr) return;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1)
    throw InputError("AMBICON_THREADS must be a positive integer");
  // Solvers are single-threaded, which respects any positive cap.
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact rational solver for hidden-action principal-agent contract design "
               "with ambiguous (max-min) contracts"};
  app.require_subcommand(1);

  std::string solve_file, solve_mode, solve_format = "json";
  bool solve_monotone = false, solve_mlrp = false;
  int solve_action = 0;
  CLI::App* solve = app.add_subcommand("solve", "Optimal single or ambiguous contract");
  solve->add_option("--mode", solve_mode, "single or ambiguous")
      ->required()
      ->check(CLI::IsMember({"single", "ambiguous"}));
  solve->add_flag("--monotone", solve_monotone, "restrict to monotone contracts");
  solve->add_flag("--mlrp-fast", solve_mlrp, "use the MLRP fast path (ambiguous mode)");
  solve->add_option("--action", solve_action, "incentivize this action (1-based input order)");
  solve->add_option("--format", solve_format, "json, csv, or pretty")
      ->check(CLI::IsMember({"json", "csv", "pretty"}));
  solve->add_option("file", solve_file, "instance JSON file")->required();

  std::string gap_file, gap_format = "json";
  bool gap_first_best = false;
  CLI::App* gap_cmd = app.add_subcommand("gap", "Ambiguity-gap metrics");
  gap_cmd->add_flag("--first-best", gap_first_best, "include the first-best action and welfare");
  gap_cmd->add_option("--format", gap_format, "json, csv, or pretty")
      ->check(CLI::IsMember({"json", "csv", "pretty"}));
  gap_cmd->add_option("file", gap_file, "instance JSON file")->required();

  std::string check_file;
  CLI::App* check = app.add_subcommand("check-class", "No-proper-crossing check for a curve family");
  check->add_option("spec", check_file, "class spec JSON file")->required();

  std::string gen_name;
  std::vector<std::string> gen_params;
  CLI::App* gen = app.add_subcommand("gen", "Emit a named instance");
  gen->add_option("name", gen_name, "example1|sop_tight|monotone_omega|two_effort|unbounded|diagonal|mlrp_b4")
      ->required();
  gen->add_option("params", gen_params, "generator parameters (rationals)");

  std::string val_file, val_tau;
  int val_action = 0;
  CLI::App* val = app.add_subcommand("validate", "Validate a contract set against an instance");
  val->add_option("file", val_file, "instance JSON file")->required();
  val->add_option("--tau", val_tau, "contract-set JSON file")->required();
  val->add_option("--action", val_action, "incentivized action (1-based input order)")->required();

  try {
    app.parse(argc, argv);
    check_thread_env();

    if (*solve) {
      Instance raw = load_instance(solve_file);
      DedupeReport report;
      Instance inst = dedupe_actions(raw, &report);
      if (solve_mlrp && !is_mlrp(inst))
        throw std::invalid_argument("--mlrp-fast requires an MLRP instance");
      if (solve_format == "csv") {
        emit_csv(inst, solve_monotone);
        return 0;
      }
      json out;
      if (solve_mode == "single") {
        if (solve_action > 0) {
          int i = find_action(inst, solve_action);
          lp::MinPaymentResult mp = lp::min_payment(inst, i, solve_monotone);
          out["status"] = mp.feasible ? "ok" : "not-implementable";
          out["action"] = solve_action;
          out["action_label"] = inst.action_label(i);
          if (mp.feasible) {
            add_rat(out, "payment", mp.payment);
            add_rat(out, "agent_utility", mp.payment - inst.cost(i));
            add_rat(out, "principal_utility", expected_reward(inst, i) - mp.payment);
            json t = json::array();
            for (int j = 0; j < inst.m(); ++j) t.push_back(rational_to_string(mp.contract(j)));
            out["contract"] = std::move(t);
          }
        } else {
          out = solve_result_json(inst, lp::optimal_single(inst, solve_monotone));
        }
      } else {
        SolveResult r;
        if (solve_action > 0) {
          int i = find_action(inst, solve_action);
          r = solve_mlrp ? (solve_monotone ? ambiguous::solve_mlrp_monotone_for_action(inst, i)
                                           : ambiguous::solve_mlrp_for_action(inst, i))
                         : (solve_monotone ? ambiguous::solve_monotone_for_action(inst, i)
                                           : ambiguous::solve_general_for_action(inst, i));
        } else {
          r = solve_mlrp ? (solve_monotone ? ambiguous::solve_mlrp_monotone(inst)
                                           : ambiguous::solve_mlrp(inst))
                         : (solve_monotone ? ambiguous::solve_monotone(inst)
                                           : ambiguous::solve_general(inst));
        }
        out = solve_result_json(inst, r);
      }
      if (!report.removed_original.empty())
        out["removed_duplicate_actions"] = removed_json(report);
      emit_doc(out, solve_format);
      return 0;
    }

    if (*gap_cmd) {
      Instance raw = load_instance(gap_file);
      DedupeReport report;
      Instance inst = dedupe_actions(raw, &report);
      if (gap_format == "csv") {
        emit_csv(inst, false);
        return 0;
      }
      gap::GapReport rep = gap::ambiguity_gap(inst);
      json out;
      out["status"] = rep.status;
      if (rep.status == "ok") {
        add_rat(out, "rho", rep.rho);
        add_rat(out, "rho_hat", rep.rho_hat);
      }
      out["best_single"] = solve_result_json(inst, rep.best_single);
      out["best_ambiguous"] = solve_result_json(inst, rep.best_ambiguous);
      if (gap_first_best) {
        out["first_best_action"] = file_number(inst, rep.first_best_action);
        add_rat(out, "max_welfare", rep.max_welfare);
      }
      if (!report.removed_original.empty())
        out["removed_duplicate_actions"] = removed_json(report);
      emit_doc(out, gap_format);
      return 0;
    }

    if (*check) return run_check_class(check_file);
    if (*gen) return run_gen(gen_name, gen_params);

    if (*val) {
      Instance inst = load_instance(val_file);
      AmbiguousContract tau;
      try {
        tau = io::parse_tau(read_file(val_tau), inst.m());
      } catch (const InputError&) {
        throw;
      } catch (const std::exception& e) {
        throw InputError(val_tau + ": " + std::string(e.what()));
      }
      int i = find_action(inst, val_action);
      std::vector<CertItem> items = ambiguous::validate(inst, tau, i);
      bool all = true;
      for (const auto& item : items) all = all && item.pass;
      json out;
      out["action"] = val_action;
      out["action_label"] = inst.action_label(i);
      out["validates"] = all;
      out["certificate"] = cert_json(items);
      add_rat(out, "max_payment", max_payment(inst, i, tau));
      add_rat(out, "min_agent_utility", min_agent_utility(inst, i, tau));
      emit_json(out);
      return 0;
    }
    return 2;  // unreachable: a subcommand is required
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
