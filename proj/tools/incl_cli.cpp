#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "incl.h"

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  double tol = 1e-9;
  double rank_tol = 1e-10;
  int samples = 64;
  std::uint64_t seed = 0;
  bool json = false;
  std::string entry;
  std::string file;
};

struct Failure {
  incl_status status;
  std::string message;
};

using Context = std::unique_ptr<incl_context, decltype(&incl_context_destroy)>;
using InclusionHandle = std::unique_ptr<incl_inclusion, decltype(&incl_inclusion_destroy)>;
using ActionHandle = std::unique_ptr<incl_action, decltype(&incl_action_destroy)>;

void check(incl_context* ctx, incl_status st) {
  if (st != INCL_OK) throw Failure{st, incl_context_last_error(ctx)};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{INCL_ERR_PARSE, "cannot open " + path};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Text or JSON argument: a path when the file exists, inline JSON otherwise.
std::string json_arg(const std::string& value) {
  if (value.empty()) return value;
  std::ifstream probe(value);
  return probe ? slurp(value) : value;
}

Context make_context(const Options& o) {
  incl_context* raw = nullptr;
  if (incl_context_create(&raw) != INCL_OK) throw Failure{INCL_ERR_INTERNAL, "cannot create context"};
  Context ctx(raw, &incl_context_destroy);
  check(ctx.get(), incl_context_set_tolerance(ctx.get(), o.tol, o.rank_tol, o.samples, o.seed));
  return ctx;
}

InclusionHandle load_inclusion(incl_context* ctx, const Options& o) {
  incl_inclusion* raw = nullptr;
  if (!o.entry.empty())
    check(ctx, incl_inclusion_from_catalog(ctx, o.entry.c_str(), &raw));
  else if (!o.file.empty())
    check(ctx, incl_inclusion_from_json(ctx, slurp(o.file).c_str(), &raw));
  else
    throw Failure{INCL_ERR_INVALID_ARGUMENT, "give an inclusion file or --entry"};
  return {raw, &incl_inclusion_destroy};
}

ActionHandle load_action(incl_context* ctx, const Options& o) {
  incl_action* raw = nullptr;
  if (!o.entry.empty())
    check(ctx, incl_action_from_catalog(ctx, o.entry.c_str(), &raw));
  else if (!o.file.empty())
    check(ctx, incl_action_from_json(ctx, slurp(o.file).c_str(), &raw));
  else
    throw Failure{INCL_ERR_INVALID_ARGUMENT, "give an action file or --entry"};
  return {raw, &incl_action_destroy};
}

void flatten(const Json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
  } else if (j.is_array() && !j.empty() && (j.front().is_object())) {
    for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], prefix + "[" + std::to_string(k) + "]", os);
  } else {
    os << prefix << ": " << j.dump() << "\n";
  }
}

/// Prints a report and turns a failing "pass" flag into exit status 1.
int print_report(char* raw, const Options& o) {
  std::unique_ptr<char, decltype(&incl_string_free)> owned(raw, &incl_string_free);
  const Json j = Json::parse(raw);
  if (o.json)
    std::cout << raw << "\n";
  else
    flatten(j, "", std::cout);
  return j.is_object() && j.contains("pass") && j["pass"].is_boolean() && !j["pass"].get<bool>() ? 1 : 0;
}

void add_common(CLI::App* cmd, Options& o, bool file) {
  if (file) cmd->add_option("file", o.file, "JSON input file");
  cmd->add_option("--entry", o.entry, "catalog entry name")->envname("INCL_ENTRY");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Index, basic construction and Rohlin-property checks for finite-dimensional inclusions"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--tol", o.tol, "identity tolerance")->envname("INCL_TOL")->capture_default_str();
  app.add_option("--rank-tol", o.rank_tol, "singular-value cutoff")->envname("INCL_RANK_TOL")->capture_default_str();
  app.add_option("--samples", o.samples, "random samples for positivity checks")
      ->envname("INCL_SAMPLES")
      ->capture_default_str();
  app.add_option("--seed", o.seed, "random seed")->envname("INCL_SEED")->capture_default_str();
  app.add_flag("--json", o.json, "print JSON instead of key: value lines")->envname("INCL_JSON");

  std::string witness, projection, direction = "forward", subgroup, filter;
  int levels = 2;
  bool csv = false;
  std::function<int(incl_context*)> run;

  auto inclusion_cmd = [&](const char* name, const char* help,
                           std::function<incl_status(incl_context*, incl_inclusion*, char**)> call) {
    auto* cmd = app.add_subcommand(name, help);
    add_common(cmd, o, true);
    return std::make_pair(cmd, [&, call](incl_context* ctx) {
      auto inc = load_inclusion(ctx, o);
      char* out = nullptr;
      check(ctx, call(ctx, inc.get(), &out));
      return print_report(out, o);
    });
  };

  std::vector<std::pair<CLI::App*, std::function<int(incl_context*)>>> handlers;
  handlers.push_back(inclusion_cmd("index", "quasi-basis and Watatani index", incl_index));
  handlers.push_back(inclusion_cmd("basic", "basic construction and dual expectation", incl_basic_construction));
  {
    auto h = inclusion_cmd("tower", "iterated basic constructions",
                           [&](incl_context* c, incl_inclusion* i, char** out) { return incl_tower(c, i, levels, out); });
    h.first->add_option("--levels", levels, "number of levels")->capture_default_str();
    handlers.push_back(h);
  }
  {
    auto h = inclusion_cmd("tunnel", "tunnel construction from a projection", [&](incl_context* c, incl_inclusion* i,
                                                                                  char** out) {
      const std::string p = json_arg(projection);
      return incl_tunnel(c, i, p.empty() ? nullptr : p.c_str(), out);
    });
    h.first->add_option("--projection", projection, "projection element (file or inline JSON)");
    handlers.push_back(h);
  }
  auto witness_cmd = [&](const char* name, const char* help,
                         std::function<incl_status(incl_context*, incl_inclusion*, const char*, char**)> call) {
    auto h = inclusion_cmd(name, help, [&, call](incl_context* c, incl_inclusion* i, char** out) {
      const std::string w = json_arg(witness);
      return call(c, i, w.empty() ? nullptr : w.c_str(), out);
    });
    h.first->add_option("--witness", witness, "element or {\"sequence\": [...]} (file or inline JSON)");
    return h;
  };
  handlers.push_back(witness_cmd("rohlin-check", "Rohlin projection check", incl_rohlin_check));
  handlers.push_back(witness_cmd("approx-rep-check", "approximate representability check", incl_approx_rep_check));
  handlers.push_back(witness_cmd("beta", "homomorphism x -> Ind E(x e)", incl_beta_map));
  {
    auto h = witness_cmd("duality", "duality between the Rohlin property and approximate representability",
                         [&](incl_context* c, incl_inclusion* i, const char* w, char** out) {
                           return incl_duality(c, i, direction.c_str(), w, out);
                         });
    h.first->add_option("--direction", direction, "forward, backward or roundtrip")
        ->check(CLI::IsMember({"forward", "backward", "roundtrip"}))
        ->capture_default_str();
    handlers.push_back(h);
  }
  handlers.push_back(inclusion_cmd("relative-commutant", "relative commutant of P in A", incl_relative_commutant));

  auto action_cmd = [&](const char* name, const char* help,
                        std::function<incl_status(incl_context*, incl_action*, char**)> call) {
    auto* cmd = app.add_subcommand(name, help);
    add_common(cmd, o, true);
    return std::make_pair(cmd, std::function<int(incl_context*)>([&, call](incl_context* ctx) {
                            auto act = load_action(ctx, o);
                            char* out = nullptr;
                            check(ctx, call(ctx, act.get(), &out));
                            return print_report(out, o);
                          }));
  };
  handlers.push_back(action_cmd("fixed-point", "fixed-point algebra and canonical expectation", incl_fixed_point));
  {
    auto h = action_cmd("rohlin-action-check", "Rohlin criterion, orbit check and outerness",
                        [&](incl_context* c, incl_action* a, char** out) {
                          const std::string p = json_arg(projection);
                          return incl_rohlin_action_check(c, a, p.empty() ? nullptr : p.c_str(), out);
                        });
    h.first->add_option("--projection", projection, "projection element (file or inline JSON)");
    handlers.push_back(h);
  }
  {
    auto h = action_cmd("subgroup-inclusion", "Q^G in Q^H for a subgroup H",
                        [&](incl_context* c, incl_action* a, char** out) {
                          return incl_subgroup_inclusion(c, a, subgroup.c_str(), out);
                        });
    h.first->add_option("--subgroup", subgroup, "JSON array of element indices or labels")->required();
    handlers.push_back(h);
  }
  {
    auto* cmd = app.add_subcommand("defect-curve", "stage-wise Rohlin defects along an inductive system");
    cmd->add_option("file", o.file, "system JSON file")->required();
    cmd->add_flag("--csv", csv, "print the curve as CSV");
    handlers.emplace_back(cmd, [&](incl_context* ctx) {
      char* out = nullptr;
      check(ctx, incl_defect_curve(ctx, slurp(o.file).c_str(), &out));
      if (!csv) return print_report(out, o);
      std::unique_ptr<char, decltype(&incl_string_free)> owned(out, &incl_string_free);
      const Json j = Json::parse(out);
      std::cout << "stage,projection_defect,commutation_defect,expectation_defect,max_defect\n";
      for (const auto& r : j["records"])
        std::cout << r["stage"].dump() << "," << r["projection_defect"].dump() << ","
                  << r["commutation_defect"].dump() << "," << r["expectation_defect"].dump() << ","
                  << r["max_defect"].dump() << "\n";
      return 0;
    });
  }
  {
    auto* cmd = app.add_subcommand("catalog", "built-in example inclusions");
    cmd->require_subcommand(1);
    auto* list = cmd->add_subcommand("list", "entry names");
    handlers.emplace_back(list, [&](incl_context* ctx) {
      char* out = nullptr;
      check(ctx, incl_catalog_list(ctx, &out));
      std::unique_ptr<char, decltype(&incl_string_free)> owned(out, &incl_string_free);
      for (const auto& n : Json::parse(out)) std::cout << n.get<std::string>() << "\n";
      return 0;
    });
    auto* runc = cmd->add_subcommand("run", "run entries and compare with their expected values");
    runc->add_option("--entry", filter, "shell pattern over entry names")->envname("INCL_ENTRY");
    handlers.emplace_back(runc, [&](incl_context* ctx) {
      char* out = nullptr;
      int all_pass = 0;
      check(ctx, incl_catalog_run(ctx, filter.empty() ? nullptr : filter.c_str(), &out, &all_pass));
      std::unique_ptr<char, decltype(&incl_string_free)> owned(out, &incl_string_free);
      if (o.json) {
        std::cout << out << "\n";
      } else {
        const Json report = Json::parse(out);
        for (const auto& e : report["entries"]) {
          std::cout << e["entry"].get<std::string>() << ": " << (e["pass"].get<bool>() ? "pass" : "FAIL") << "\n";
          if (e.contains("error")) std::cout << "  error: " << e["error"].get<std::string>() << "\n";
          for (const auto& c : e["checks"])
            std::cout << "  " << (c["pass"].get<bool>() ? "ok  " : "FAIL") << " " << c["name"].get<std::string>()
                      << " expected=" << c["expected"].dump() << " actual=" << c["actual"].dump()
                      << " max_defect=" << c["max_defect"].dump() << " [" << c["provenance"].get<std::string>()
                      << "]\n";
        }
      }
      return all_pass ? 0 : 1;
    });
  }

  CLI11_PARSE(app, argc, argv);
  try {
    auto ctx = make_context(o);
    for (auto& [cmd, handler] : handlers)
      if (cmd->parsed()) return handler(ctx.get());
  } catch (const Failure& f) {
    std::cerr << "error (" << incl_status_string(f.status) << "): " << f.message << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
