// dmg: generate, solve, simulate and verify damage games.
//
// Exit codes: 0 ok, 1 verification failure, 2 bad input, 3 resource budget exceeded,
// 4 policy fault.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dmg/arena.hpp"
#include "dmg/best_response.hpp"
#include "dmg/edge_list.hpp"
#include "dmg/families.hpp"
#include "dmg/policy_spec.hpp"
#include "dmg/solver.hpp"
#include "dmg/verify.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0, kFail = 1, kInput = 2, kBudget = 3, kFault = 4;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path sidecar_of(const fs::path& graph) {
  fs::path p = graph;
  p.replace_extension(".landmarks.json");
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InputError("cannot write " + p.string());
  out << text;
}

dmg::LandmarkedGraph load_graph(const std::string& file) {
  dmg::LandmarkedGraph lg{dmg::parse_edge_list(slurp(file)), std::nullopt};
  const auto side = sidecar_of(file);
  if (fs::exists(side)) lg.landmarks = dmg::landmarks_from_json(nlohmann::json::parse(slurp(side)));
  return lg;
}

dmg::SolveLimits limits_from(std::size_t states, double seconds) {
  dmg::SolveLimits l;
  if (states) l.max_states = states;
  if (seconds > 0) l.max_seconds = seconds;
  return l;
}

nlohmann::ordered_json report_json(const dmg::SolveReport& r) {
  nlohmann::ordered_json j;
  j["value"] = r.value;
  if (r.optimal_cop_start == dmg::kNoVertex) j["optimal_cop_start"] = nullptr;
  else j["optimal_cop_start"] = r.optimal_cop_start;
  j["explored_states"] = r.stats.explored_states;
  j["class_count"] = r.stats.class_count;
  j["peak_memo_entries"] = r.stats.peak_memo_entries;
  return j;
}

nlohmann::ordered_json partial_json(const dmg::LimitExceeded& e) {
  nlohmann::ordered_json j;
  j["value"] = nullptr;
  j["optimal_cop_start"] = nullptr;
  j["explored_states"] = e.partial().explored_states;
  j["class_count"] = e.partial().class_count;
  j["peak_memo_entries"] = e.partial().peak_memo_entries;
  j["error"] = e.what();
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Damage variant of Cops and Robbers: one cop, s robbers"};
  app.require_subcommand(1);

  std::string family;
  std::size_t param = 0;
  std::string out_file;
  auto* gen = app.add_subcommand("gen", "generate a graph family as an edge list");
  gen->add_option("--family", family, "star | path | cycle | complete | gprime | g")->required();
  gen->add_option("--param", param, "t, n or l")->required();
  gen->add_option("--out", out_file, "output file (default stdout); landmarks go to <base>.landmarks.json");

  std::string graph_file;
  std::size_t robbers = 0;
  std::size_t limit_states = 0;
  double limit_seconds = 0;
  auto add_limits = [&](CLI::App* c) {
    c->add_option("--limit-states", limit_states, "state budget");
    c->add_option("--limit-seconds", limit_seconds, "time budget in seconds");
  };

  auto* solve_cmd = app.add_subcommand("solve", "exact damage number dmg(G;s)");
  solve_cmd->add_option("--graph", graph_file, "edge-list file")->required();
  solve_cmd->add_option("--robbers", robbers, "number of robbers s")->required();
  add_limits(solve_cmd);

  std::string cop_spec, team_spec, transcript_file;
  std::uint64_t seed = 0;
  std::size_t max_rounds = 0;
  auto* play = app.add_subcommand("play", "run one match and record a transcript");
  play->add_option("--graph", graph_file, "edge-list file")->required();
  play->add_option("--robbers", robbers, "number of robbers s")->required();
  play->add_option("--cop", cop_spec,
                   "guard:V | patrol:U-V | greedy | stationary:V | random:SEED | guard+endgame:V | optimal")
      ->required();
  play->add_option("--robber-team", team_spec,
                   "optimal | stationary | cautious:V,V,... | script:gprime | script:g | cycleattack:I-J")
      ->required();
  play->add_option("--seed", seed, "seed passed to the policies");
  play->add_option("--max-rounds", max_rounds, "round cap (default 40n)");
  play->add_option("--transcript", transcript_file, "write the transcript JSON here");
  add_limits(play);

  std::size_t horizon = 0;
  auto* br = app.add_subcommand("best-response", "best response against a fixed policy");
  br->add_option("--graph", graph_file, "edge-list file")->required();
  br->add_option("--robbers", robbers, "number of robbers s")->required();
  auto* br_cop = br->add_option("--cop", cop_spec, "robbers respond to this cop policy");
  auto* br_team = br->add_option("--robber-team", team_spec, "cop responds to this robber team");
  br_cop->excludes(br_team);
  br->add_option("--horizon", horizon, "round horizon for the cop side (default 40n)");
  br->add_option("--seed", seed, "seed passed to the fixed policy");
  br->add_option("--transcript", transcript_file, "write the witness transcript (robber side)");
  add_limits(br);

  std::string claim_id;
  bool all = false;
  auto* ver = app.add_subcommand("verify", "run packaged verification claims");
  auto* ver_claim = ver->add_option("--claim", claim_id, "claim id");
  auto* ver_all = ver->add_flag("--all", all, "run every claim");
  ver_claim->excludes(ver_all);
  ver->add_flag("--list", "list claim ids");
  auto* ver_budget = ver->add_option_group("budget", "per-call resource budget");
  ver_budget->add_option("--limit-states", limit_states, "state budget");
  ver_budget->add_option("--limit-seconds", limit_seconds, "time budget in seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    const auto limits = limits_from(limit_states, limit_seconds);

    if (*gen) {
      const auto fam = dmg::parse_family(family);
      if (!fam) throw InputError("unknown family '" + family + "'");
      const auto lg = dmg::generate({*fam, param});
      const auto text = dmg::serialize_edge_list(lg.graph);
      if (out_file.empty()) std::cout << text;
      else write_file(out_file, text);
      if (lg.landmarks) {
        const auto lj = dmg::landmarks_to_json(*lg.landmarks).dump(2) + "\n";
        std::cerr << lj;
        if (!out_file.empty()) write_file(sidecar_of(out_file), lj);
      }
      return kOk;
    }

    if (*solve_cmd) {
      const auto lg = load_graph(graph_file);
      try {
        std::cout << report_json(dmg::solve(lg.graph, robbers, limits)).dump(2) << "\n";
      } catch (const dmg::LimitExceeded& e) {
        std::cout << partial_json(e).dump(2) << "\n";
        std::cerr << e.what() << "\n";
        return kBudget;
      }
      return kOk;
    }

    if (*play) {
      auto b = dmg::make_board(load_graph(graph_file));
      const auto cop = dmg::make_cop_policy(b, cop_spec, limits);
      const auto team = dmg::make_robber_policy(b, team_spec, limits);
      const auto rounds = max_rounds ? max_rounds : dmg::default_max_rounds(b->graph);
      dmg::Transcript t;
      try {
        t = dmg::run_match(*b, robbers, *cop, *team, rounds, seed);
      } catch (const dmg::PolicyFault& e) {
        if (!transcript_file.empty()) write_file(transcript_file, dmg::dump(e.transcript()));
        std::cerr << "policy fault: " << e.what() << "\n";
        return kFault;
      }
      if (!transcript_file.empty()) write_file(transcript_file, dmg::dump(t));
      std::cout << "damaged=" << t.damage() << " saved=" << t.saved() << " stop=" << dmg::to_string(t.stop) << "\n";
      return kOk;
    }

    if (*br) {
      if (cop_spec.empty() == team_spec.empty()) throw InputError("best-response needs exactly one of --cop, --robber-team");
      auto b = dmg::make_board(load_graph(graph_file));
      try {
        nlohmann::ordered_json j;
        if (!cop_spec.empty()) {
          const auto cop = dmg::make_cop_policy(b, cop_spec, limits);
          const auto r = dmg::best_response_robbers(b, robbers, *cop, limits, seed);
          j["side"] = "robbers";
          j["against"] = cop->spec();
          j["value"] = r.value;
          j["explored_states"] = r.explored_states;
          j["witness_damage"] = r.witness.damage();
          if (!transcript_file.empty()) write_file(transcript_file, dmg::dump(r.witness));
        } else {
          const auto team = dmg::make_robber_policy(b, team_spec, limits);
          const auto h = horizon ? horizon : dmg::default_max_rounds(b->graph);
          const auto r = dmg::best_response_cop(b, robbers, *team, h, limits, seed);
          j["side"] = "cop";
          j["against"] = team->spec();
          j["value"] = r.value;
          j["horizon"] = h;
          j["horizon_capped"] = r.horizon_capped;
          j["explored_states"] = r.explored_states;
        }
        std::cout << j.dump(2) << "\n";
      } catch (const dmg::LimitExceeded& e) {
        std::cerr << e.what() << "\n";
        return kBudget;
      } catch (const dmg::PolicyFault& e) {
        std::cerr << "policy fault: " << e.what() << "\n";
        return kFault;
      }
      return kOk;
    }

    if (*ver) {
      namespace v = dmg::verify;
      if (ver->count("--list")) {
        for (const auto& c : v::claims()) std::cout << c.id << "\n";
        return kOk;
      }
      std::vector<const v::Claim*> todo;
      if (all) {
        static const auto every = v::claims();
        for (const auto& c : every) todo.push_back(&c);
      } else if (!claim_id.empty()) {
        const auto* c = v::find_claim(claim_id);
        if (!c) throw InputError("unknown claim '" + claim_id + "'");
        todo.push_back(c);
      } else {
        throw InputError("verify needs --claim ID or --all");
      }
      v::Budget budget{limits};
      nlohmann::ordered_json out = nlohmann::ordered_json::array();
      bool failed = false, skipped = false;
      for (const auto* c : todo) {
        const auto r = v::run_claim(*c, budget);
        std::cerr << v::to_string(r.status) << " " << c->id << " (" << r.seconds << " s)"
                  << (r.detail.empty() ? "" : ": " + r.detail) << "\n";
        failed = failed || r.status == v::Status::Fail;
        skipped = skipped || r.status == v::Status::Skipped;
        out.push_back(v::to_json(*c, r));
      }
      std::cout << out.dump(2) << "\n";
      return failed ? kFail : skipped ? kBudget : kOk;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const dmg::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const dmg::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const dmg::GraphError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const dmg::RulesError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const dmg::LimitExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBudget;
  }
  return kOk;
}
