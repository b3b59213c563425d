// Copyright 2026 The mrepair Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command-line front end. `run` takes the arguments after the program name
// and writes to the given streams, so tests can drive it in-process.
//
// Exit codes: 0 true/found, 1 false/no_repair, 2 budget_exhausted,
// 64 usage error, 65 input error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mrepair/mrepair.hpp"

namespace mrepair::cli {

inline constexpr int kExitTrue = 0;
inline constexpr int kExitFalse = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitInput = 65;

struct CliConfig {
  std::string command;
  std::string query_path;
  std::string data_path;
  std::string tuple_text;
  std::optional<std::size_t> k;
  std::optional<std::size_t> budget;
  bool oracle = false;
  bool json = false;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  double density = 0.5;
  std::string input_path;
  std::string output_dir;
  std::string repair_path;
};

namespace detail {

// An input problem tied to a named source (file or argument).
struct InputError {
  std::string source;
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{path, 0, 0, "cannot open file"};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Runs `fn` and attributes parser errors to `source`.
template <class Fn>
auto parse_from(const std::string& source, Fn&& fn) {
  try {
    return fn();
  } catch (const SourceError& e) {
    throw InputError{source, e.line(), e.column(),
                     std::string(to_string(e.code())) + ": " + e.what()};
  }
}

struct Inputs {
  Program query;
  Instance data;
  Tuple tuple;
};

inline Program load_query(const CliConfig& cfg) {
  return parse_from(cfg.query_path,
                    [&] { return parse_program(read_file(cfg.query_path)); });
}

inline Inputs load_inputs(const CliConfig& cfg) {
  Inputs in;
  in.query = load_query(cfg);
  in.data = parse_from(cfg.data_path,
                       [&] { return parse_instance(read_file(cfg.data_path)); });
  in.tuple = parse_from("<tuple>", [&] { return parse_tuple(cfg.tuple_text); });
  try {
    check_instance(in.query, in.data);
  } catch (const Error& e) {
    throw InputError{cfg.data_path, 0, 0,
                     std::string(to_string(e.code())) + ": " + e.what()};
  }
  if (in.tuple.size() != in.query.arity())
    throw InputError{"<tuple>", 0, 0,
                     "ArityMismatch: tuple has " + std::to_string(in.tuple.size()) +
                         " components, answer relation '" + in.query.answer +
                         "' has arity " + std::to_string(in.query.arity())};
  return in;
}

inline int exit_for(RepairStatus s) {
  switch (s) {
    case RepairStatus::kFound: return kExitTrue;
    case RepairStatus::kNoRepair: return kExitFalse;
    case RepairStatus::kBudgetExhausted: return kExitBudget;
  }
  return kExitInput;
}

inline std::size_t literal_bound(const Program& q) {
  std::size_t best = 0;
  for (const Rule& r : q.rules)
    best = std::max<std::size_t>(
        best, static_cast<std::size_t>(std::count_if(
                  r.body.begin(), r.body.end(),
                  [](const Literal& l) { return l.is_relational(); })));
  return best;
}

inline std::string yes_no(bool b) { return b ? "true" : "false"; }

inline int cmd_classify(const CliConfig& cfg, std::ostream& out) {
  const Program q = load_query(cfg);
  const QueryClass c = classify(q);
  const Fragment f = fragment_of(c);
  const auto cx = combined_complexity(f);
  out << "fragment: " << to_string(f) << "\n"
      << "is_cq: " << yes_no(c.is_cq) << "\n"
      << "is_ucq: " << yes_no(c.is_ucq) << "\n"
      << "has_negation: " << yes_no(c.has_negation) << "\n"
      << "has_comparisons: " << yes_no(c.has_comparisons) << "\n"
      << "is_recursive: " << yes_no(c.is_recursive) << "\n"
      << "is_semipositive_datalog: " << yes_no(c.is_semipositive_datalog) << "\n"
      << "is_positive_datalog: " << yes_no(c.is_positive_datalog) << "\n"
      << "self_join_free: " << yes_no(c.self_join_free) << "\n"
      << "projection_free: " << yes_no(c.projection_free) << "\n"
      << "join_free: " << yes_no(c.join_free) << "\n"
      << "selection_free: " << yes_no(c.selection_free) << "\n"
      << "combined_complexity: decide=" << cx[0] << " bound=" << cx[1]
      << " size=" << cx[2] << " min=" << cx[3] << "\n";
  return kExitTrue;
}

inline int cmd_eval(const CliConfig& cfg, std::ostream& out) {
  const Inputs in = load_inputs(cfg);
  const bool member = eval_member(in.query, in.data, in.tuple);
  out << yes_no(member) << "\n";
  return member ? kExitTrue : kExitFalse;
}

inline int cmd_decide(const CliConfig& cfg, std::ostream& out) {
  const Inputs in = load_inputs(cfg);
  const bool exists = ma_dec(in.query, in.data, in.tuple);
  out << yes_no(exists) << "\n";
  return exists ? kExitTrue : kExitFalse;
}

inline SearchOptions search_options(const CliConfig& cfg) {
  SearchOptions opts;
  if (cfg.budget) opts.budget = *cfg.budget;
  return opts;
}

inline int cmd_bound(const CliConfig& cfg, std::ostream& out) {
  const Inputs in = load_inputs(cfg);
  const bool ok = ma_bound(in.query, in.data, in.tuple, *cfg.k, search_options(cfg));
  out << yes_no(ok) << "\n";
  return ok ? kExitTrue : kExitFalse;
}

inline int cmd_size(const CliConfig& cfg, std::ostream& out) {
  const Inputs in = load_inputs(cfg);
  const SizeResult r = ma_size(in.query, in.data, in.tuple, search_options(cfg));
  if (r.size)
    out << *r.size << "\n";
  else
    out << to_string(r.status) << "\n";
  return exit_for(r.status);
}

inline nlohmann::ordered_json facts_json(const FactSet& facts) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const Fact& f : facts) arr.push_back(to_string(f));
  return arr;
}

inline int cmd_repair(const CliConfig& cfg, std::ostream& out) {
  const Inputs in = load_inputs(cfg);
  RepairResult r;
  if (cfg.oracle) {
    const bool ucq = classify(in.query).is_ucq;
    const std::size_t budget =
        cfg.budget ? *cfg.budget : (ucq ? literal_bound(in.query) : SearchOptions{}.budget);
    const SearchDomain domain =
        ucq ? SearchDomain::for_ucq(in.query, in.data, in.tuple)
            : SearchDomain::for_datalog(in.query, in.data, in.tuple, budget);
    r = oracle_ma_min(in.query, in.data, in.tuple, domain, budget);
  } else {
    r = ma_min(in.query, in.data, in.tuple, search_options(cfg));
  }

  if (cfg.json) {
    nlohmann::ordered_json j;
    j["status"] = std::string(to_string(r.status));
    j["size"] = r.size ? nlohmann::ordered_json(*r.size) : nlohmann::ordered_json(nullptr);
    j["insert"] = facts_json(r.repair ? r.repair->ins : FactSet{});
    j["delete"] = facts_json(r.repair ? r.repair->del : FactSet{});
    if (r.witness_assignment) {
      nlohmann::ordered_json g = nlohmann::ordered_json::object();
      for (const auto& [var, val] : *r.witness_assignment) g[var] = val;
      j["witness_assignment"] = g;
    } else {
      j["witness_assignment"] = nullptr;
    }
    out << j.dump() << "\n";
  } else {
    out << "status: " << to_string(r.status) << "\n";
    if (r.repair) {
      out << "size: " << *r.size << "\n";
      out << "insert:";
      for (const Fact& f : r.repair->ins) out << " " << to_string(f);
      out << "\ndelete:";
      for (const Fact& f : r.repair->del) out << " " << to_string(f);
      out << "\n";
    }
    if (r.witness_assignment) out << "witness: " << to_string(*r.witness_assignment) << "\n";
  }
  return exit_for(r.status);
}

inline int cmd_sat(const CliConfig& cfg, std::ostream& out) {
  const Program q = load_query(cfg);
  const QueryClass c = classify(q);
  SatResult r;
  if (c.is_ucq)
    r = sat_ucqneg(q);
  else if (c.is_positive_datalog)
    r = sat_datalog_positive(q);
  else
    throw Error(ErrorCode::kUnsupported,
                "satisfiability is only decided for UCQ and positive datalog");
  out << (r.satisfiable ? "satisfiable" : "unsatisfiable") << "\n";
  if (r.witness) out << to_string(*r.witness);
  return r.satisfiable ? kExitTrue : kExitFalse;
}

inline int cmd_gen_setcover(const CliConfig& cfg, std::ostream& out) {
  out << to_text(generate(cfg.seed, cfg.n, cfg.m, cfg.density));
  return kExitTrue;
}

inline SetCoverInstance load_cover(const CliConfig& cfg) {
  return parse_from(cfg.input_path,
                    [&] { return parse_setcover(read_file(cfg.input_path)); });
}

inline int cmd_reduce_setcover(const CliConfig& cfg, std::ostream& out) {
  const ReducedInstance red = reduce_f(load_cover(cfg));
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw InputError{cfg.output_dir, 0, 0, "cannot create directory"};
  const fs::path dir(cfg.output_dir);
  auto write = [&](const char* name, const std::string& text) {
    const fs::path path = dir / name;
    std::ofstream file(path, std::ios::binary);
    if (!(file << text)) throw InputError{path.string(), 0, 0, "cannot write file"};
    out << path.string() << "\n";
  };
  write("query.dl", to_string(red.query));
  write("data.facts", to_string(red.instance));
  write("tuple.txt", to_string(red.target) + "\n");
  return kExitTrue;
}

inline Update read_repair_json(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError{path, 0, 0, e.what()};
  }
  ParseOptions opts;
  opts.allow_reserved_constants = true;
  Update u;
  auto take = [&](const char* key, FactSet& into) {
    if (!j.contains(key)) return;
    if (!j[key].is_array()) throw InputError{path, 0, 0, std::string("'") + key + "' must be an array"};
    for (const auto& item : j[key]) {
      if (!item.is_string()) throw InputError{path, 0, 0, "facts must be strings"};
      into.insert(parse_from(path, [&] { return parse_fact(item.get<std::string>(), opts); }));
    }
  };
  if (!j.is_object()) throw InputError{path, 0, 0, "expected a JSON object"};
  take("insert", u.ins);
  take("delete", u.del);
  return u;
}

inline int cmd_extract_cover(const CliConfig& cfg, std::ostream& out) {
  const SetCoverInstance x = load_cover(cfg);
  const Cover cover = extract_h(x, read_repair_json(cfg.repair_path));
  for (std::size_t i = 0; i < cover.size(); ++i) out << (i ? " " : "") << cover[i];
  out << "\n";
  return kExitTrue;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Minimum repairs for missing query answers", "mrepair"};
  app.require_subcommand(1);

  auto query_opt = [&](CLI::App* sub) {
    sub->add_option("-q,--query", cfg.query_path, "Program file")->required();
  };
  auto triple = [&](CLI::App* sub) {
    query_opt(sub);
    sub->add_option("-d,--data", cfg.data_path, "Fact database file")->required();
    sub->add_option("-t,--tuple", cfg.tuple_text, "Target tuple, e.g. \"(a,b)\"")->required();
  };

  CLI::App* classify_cmd = app.add_subcommand("classify", "Report the query fragment");
  query_opt(classify_cmd);
  CLI::App* eval_cmd = app.add_subcommand("eval", "Test whether the tuple is an answer");
  triple(eval_cmd);
  CLI::App* decide_cmd = app.add_subcommand("decide", "Decide whether any repair exists");
  triple(decide_cmd);
  CLI::App* bound_cmd = app.add_subcommand("bound", "Decide whether a repair of size <= k exists");
  triple(bound_cmd);
  bound_cmd->add_option("-k", cfg.k, "Size bound")->required();
  bound_cmd->add_option("--budget", cfg.budget, "Search budget (semi-positive datalog)");
  CLI::App* size_cmd = app.add_subcommand("size", "Print the minimum repair size");
  triple(size_cmd);
  size_cmd->add_option("--budget", cfg.budget, "Search budget (semi-positive datalog)");
  CLI::App* repair_cmd = app.add_subcommand("repair", "Compute a minimum repair");
  triple(repair_cmd);
  repair_cmd->add_option("--budget", cfg.budget, "Search budget");
  repair_cmd->add_flag("--oracle", cfg.oracle, "Use the brute-force reference search");
  repair_cmd->add_flag("--json", cfg.json, "Machine-readable output");
  CLI::App* sat_cmd = app.add_subcommand("sat", "Decide satisfiability of the query");
  query_opt(sat_cmd);
  CLI::App* gen_cmd = app.add_subcommand("gen-setcover", "Generate a random set cover instance");
  gen_cmd->add_option("--seed", cfg.seed, "Random seed")->required();
  gen_cmd->add_option("-n", cfg.n, "Number of elements")->required();
  gen_cmd->add_option("-m", cfg.m, "Number of sets")->required();
  gen_cmd->add_option("--density", cfg.density, "Membership probability")->required();
  CLI::App* reduce_cmd =
      app.add_subcommand("reduce-setcover", "Write the repair instance for a set cover");
  reduce_cmd->add_option("-i,--input", cfg.input_path, "Set cover file")->required();
  reduce_cmd->add_option("-o,--output", cfg.output_dir, "Output directory")->required();
  CLI::App* extract_cmd =
      app.add_subcommand("extract-cover", "Turn a repair back into a set cover");
  extract_cmd->add_option("-i,--input", cfg.input_path, "Set cover file")->required();
  extract_cmd->add_option("--repair", cfg.repair_path, "Repair JSON file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitTrue;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.command == "classify") return detail::cmd_classify(cfg, out);
    if (cfg.command == "eval") return detail::cmd_eval(cfg, out);
    if (cfg.command == "decide") return detail::cmd_decide(cfg, out);
    if (cfg.command == "bound") return detail::cmd_bound(cfg, out);
    if (cfg.command == "size") return detail::cmd_size(cfg, out);
    if (cfg.command == "repair") return detail::cmd_repair(cfg, out);
    if (cfg.command == "sat") return detail::cmd_sat(cfg, out);
    if (cfg.command == "gen-setcover") return detail::cmd_gen_setcover(cfg, out);
    if (cfg.command == "reduce-setcover") return detail::cmd_reduce_setcover(cfg, out);
    if (cfg.command == "extract-cover") return detail::cmd_extract_cover(cfg, out);
  } catch (const detail::InputError& e) {
    err << e.source;
    if (e.line) err << ":" << e.line << ":" << e.column;
    err << ": error: " << e.message << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitInput;
  }
  err << "usage error: unknown command\n";
  return kExitUsage;
}

}  // namespace mrepair::cli
