#include "ergocert/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <stdexcept>

#include "ergocert/pump.hpp"
#include "ergocert/witness.hpp"

namespace ergocert {

namespace {

std::string join(const std::vector<std::string>& msgs) {
  std::string out;
  for (const auto& m : msgs) {
    if (!out.empty()) out += "; ";
    out += m;
  }
  return out;
}

std::string decimal17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Line and column of a byte offset (1-based).
std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) { return bound == 0 ? 0 : rng() % bound; }

}  // namespace

ParseError::ParseError(std::vector<std::string> msgs) : Error(join(msgs)), messages(std::move(msgs)) {}

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

Json number12(double v) { return Json(round12(v)); }

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string potential_hash(const Potential& x) {
  std::string text;
  char buf[40];
  for (double v : x) {
    std::snprintf(buf, sizeof buf, "%.12g;", round12(v));
    text += buf;
  }
  return hex64(fnv1a(text));
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Game documents

GameSpec parse_game(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError({"syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                      e.what()});
  }

  std::vector<std::string> errors;
  auto error = [&](std::string msg) {
    if (errors.size() < kMaxReportedErrors) errors.push_back(std::move(msg));
  };
  if (!doc.is_object()) throw ParseError({"document must be a JSON object"});
  if (!doc.contains("format") || doc["format"] != kGameFormat)
    error(std::string("missing or unsupported \"format\" (expected \"") + kGameFormat + "\")");
  if (!doc.contains("states") || !doc["states"].is_array() || doc["states"].empty())
    throw ParseError({"\"states\" must be a non-empty array of names"});

  GameSpec game;
  std::map<std::string, StateId> index;
  for (const auto& s : doc["states"]) {
    if (!s.is_string() || s.get<std::string>().empty()) {
      error("state names must be non-empty strings");
      continue;
    }
    const std::string name = s.get<std::string>();
    if (index.count(name)) {
      error("duplicate state name '" + name + "'");
      continue;
    }
    index[name] = game.states.size();
    State st;
    st.name = name;
    game.states.push_back(std::move(st));
  }

  const Json& actions = doc.contains("actions") ? doc["actions"] : Json();
  if (!actions.is_object()) error("\"actions\" must be an object keyed by state name");
  auto read_labels = [&](const Json& arr, const std::string& where) {
    std::vector<std::string> labels;
    if (!arr.is_array()) {
      error(where + " must be an array of labels");
      return labels;
    }
    for (const auto& a : arr) {
      if (!a.is_string()) {
        error(where + " must contain strings");
        continue;
      }
      const std::string label = a.get<std::string>();
      if (std::find(labels.begin(), labels.end(), label) != labels.end())
        error(where + " repeats label '" + label + "'");
      else
        labels.push_back(label);
    }
    return labels;
  };
  for (State& st : game.states) {
    if (!actions.is_object() || !actions.contains(st.name)) {
      error("no actions listed for state '" + st.name + "'");
      continue;
    }
    const Json& entry = actions[st.name];
    if (!entry.is_object() || !entry.contains("player1") || !entry.contains("player2")) {
      error("actions of state '" + st.name + "' need \"player1\" and \"player2\"");
      continue;
    }
    st.actions1 = read_labels(entry["player1"], "actions." + st.name + ".player1");
    st.actions2 = read_labels(entry["player2"], "actions." + st.name + ".player2");
    st.cells.assign(st.rows() * st.cols(), {});
  }
  if (actions.is_object())
    for (const auto& [key, _] : actions.items())
      if (!index.count(key)) error("actions listed for unknown state '" + key + "'");

  if (!doc.contains("transitions") || !doc["transitions"].is_array()) {
    error("\"transitions\" must be an array");
    throw ParseError(errors);
  }

  // first record index per (state, k, l), for locating validation failures
  std::map<std::string, std::size_t> cell_record;
  std::size_t record = 0;
  for (const auto& t : doc["transitions"]) {
    const std::string at = "transition record #" + std::to_string(record);
    const std::size_t this_record = record++;
    if (!t.is_object()) {
      error(at + ": must be an object");
      continue;
    }
    auto state_field = [&](const char* key) -> std::optional<StateId> {
      if (!t.contains(key) || !t[key].is_string()) {
        error(at + ": missing state field \"" + key + "\"");
        return std::nullopt;
      }
      const std::string name = t[key].get<std::string>();
      auto it = index.find(name);
      if (it == index.end()) {
        error(at + ": unknown state '" + name + "' in \"" + key + "\"");
        return std::nullopt;
      }
      return it->second;
    };
    const auto from = state_field("from");
    const auto to = state_field("to");
    if (!from || !to) continue;
    State& st = game.states[*from];
    auto action_field = [&](const char* key, const std::vector<std::string>& labels) -> std::optional<std::size_t> {
      if (!t.contains(key)) {
        error(at + ": missing action field \"" + key + "\"");
        return std::nullopt;
      }
      const Json& a = t[key];
      if (a.is_number_unsigned() && a.get<std::size_t>() < labels.size()) return a.get<std::size_t>();
      if (a.is_string()) {
        auto it = std::find(labels.begin(), labels.end(), a.get<std::string>());
        if (it != labels.end()) return static_cast<std::size_t>(it - labels.begin());
      }
      error(at + ": unknown action " + a.dump() + " for \"" + key + "\" at state '" + st.name + "'");
      return std::nullopt;
    };
    const auto k = action_field("k", st.actions1);
    const auto l = action_field("l", st.actions2);
    if (!k || !l) continue;

    Transition tr;
    tr.to = *to;
    if (!t.contains("p")) {
      error(at + ": missing probability \"p\"");
      continue;
    }
    if (t["p"].is_string()) {
      const auto r = Rational::parse(t["p"].get<std::string>());
      if (!r) {
        error(at + ": cannot parse probability '" + t["p"].get<std::string>() + "'");
        continue;
      }
      tr.exact = *r;
      tr.prob = r->to_double();
    } else if (t["p"].is_number()) {
      tr.prob = t["p"].get<double>();
      tr.exact = Rational::parse(t["p"].dump());
    } else {
      error(at + ": probability must be a string or number");
      continue;
    }
    if (!t.contains("r") || !t["r"].is_number()) {
      error(at + ": missing numeric reward \"r\"");
      continue;
    }
    tr.reward = t["r"].get<double>();

    auto& cell = st.cell(*k, *l);
    if (std::any_of(cell.begin(), cell.end(), [&](const Transition& o) { return o.to == tr.to; })) {
      error(at + ": duplicate successor '" + game.states[tr.to].name + "'");
      continue;
    }
    cell.push_back(tr);
    cell_record.emplace("(" + st.name + "," + st.actions1[*k] + "," + st.actions2[*l] + ")", this_record);
  }

  if (errors.empty()) {
    for (const std::string& v : validate(game).violations) {
      const auto pos = v.rfind(" at (");
      std::string msg = v;
      if (pos != std::string::npos) {
        auto it = cell_record.find(v.substr(pos + 4));
        msg += it != cell_record.end() ? " (transition record #" + std::to_string(it->second) + ")"
                                       : " (no transition records)";
      }
      error(msg);
    }
  }
  if (!errors.empty()) throw ParseError(errors);
  return game;
}

std::string serialize_game(const GameSpec& game) {
  Json doc;
  doc["format"] = kGameFormat;
  Json states = Json::array();
  Json actions = Json::object();
  Json transitions = Json::array();
  for (const State& s : game.states) {
    states.push_back(s.name);
    actions[s.name] = Json{{"player1", s.actions1}, {"player2", s.actions2}};
  }
  for (const State& s : game.states)
    for (std::size_t k = 0; k < s.rows(); ++k)
      for (std::size_t l = 0; l < s.cols(); ++l)
        for (const Transition& t : s.cell(k, l)) {
          Json rec;
          rec["from"] = s.name;
          rec["k"] = s.actions1[k];
          rec["l"] = s.actions2[l];
          rec["to"] = game[t.to].name;
          rec["p"] = t.exact ? t.exact->str() : decimal17(t.prob);
          rec["r"] = t.reward;
          transitions.push_back(std::move(rec));
        }
  doc["states"] = std::move(states);
  doc["actions"] = std::move(actions);
  doc["transitions"] = std::move(transitions);
  return dump(doc);
}

// ---------------------------------------------------------------------------
// Generators

namespace {

State make_state(std::string name, std::vector<std::string> a1, std::vector<std::string> a2) {
  State s;
  s.name = std::move(name);
  s.actions1 = std::move(a1);
  s.actions2 = std::move(a2);
  s.cells.assign(s.rows() * s.cols(), {});
  return s;
}

Transition arc(StateId to, std::int64_t num, std::int64_t den, double reward) {
  const Rational p = Rational::make(num, den);
  return Transition{to, p.to_double(), p, reward};
}

std::vector<std::string> labels(const char* prefix, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

GameSpec gen_random(const GenParams& p, std::mt19937_64& rng) {
  if (p.n < 1 || p.N < 1 || p.W < 1 || p.R < 0) throw std::invalid_argument("invalid params: need n, N, W >= 1 and R >= 0");
  GameSpec g;
  for (std::size_t v = 0; v < p.n; ++v) {
    const std::size_t rows = 1 + draw_below(rng, p.N);
    const std::size_t cols = 1 + draw_below(rng, p.N);
    g.states.push_back(make_state("s" + std::to_string(v), labels("k", rows), labels("l", cols)));
  }
  for (State& s : g.states)
    for (auto& cell : s.cells) {
      // W units of mass land on uniformly drawn successors.
      std::vector<std::int64_t> units(p.n, 0);
      for (long long i = 0; i < p.W; ++i) ++units[draw_below(rng, p.n)];
      for (StateId u = 0; u < p.n; ++u) {
        if (units[u] == 0) continue;
        const double reward = static_cast<double>(draw_below(rng, 4 * static_cast<std::uint64_t>(p.R) + 1)) / 4.0;
        cell.push_back(arc(u, units[u], p.W, reward));
      }
    }
  return g;
}

GameSpec gen_big_match() {
  GameSpec g;
  g.states.push_back(make_state("live", {"quit", "stay"}, {"left", "right"}));
  g.states.push_back(make_state("zero", {"idle"}, {"idle"}));
  g.states.push_back(make_state("one", {"idle"}, {"idle"}));
  State& live = g.states[0];
  live.cell(0, 0).push_back(arc(2, 1, 1, 1.0));
  live.cell(0, 1).push_back(arc(1, 1, 1, 0.0));
  live.cell(1, 0).push_back(arc(0, 1, 1, 0.0));
  live.cell(1, 1).push_back(arc(0, 1, 1, 1.0));
  g.states[1].cell(0, 0).push_back(arc(1, 1, 1, 0.0));
  g.states[2].cell(0, 0).push_back(arc(2, 1, 1, 1.0));
  return g;
}

GameSpec gen_disconnected(const GenParams& p) {
  if (!std::isfinite(p.reward_a) || !std::isfinite(p.reward_b)) throw std::invalid_argument("invalid params: rewards");
  GameSpec g;
  g.states.push_back(make_state("v1", {"stay"}, {"stay"}));
  g.states.push_back(make_state("v2", {"stay"}, {"stay"}));
  g.states[0].cell(0, 0).push_back(arc(0, 1, 1, p.reward_a));
  g.states[1].cell(0, 0).push_back(arc(1, 1, 1, p.reward_b));
  return g;
}

GameSpec gen_cycle(const GenParams& p, std::mt19937_64& rng) {
  if (p.n < 1 || p.R < 0) throw std::invalid_argument("invalid params: need n >= 1 and R >= 0");
  GameSpec g;
  for (std::size_t v = 0; v < p.n; ++v) g.states.push_back(make_state("c" + std::to_string(v), {"go"}, {"go"}));
  for (std::size_t v = 0; v < p.n; ++v) {
    const double reward = static_cast<double>(draw_below(rng, static_cast<std::uint64_t>(p.R) + 1));
    g.states[v].cell(0, 0).push_back(arc((v + 1) % p.n, 1, 1, reward));
  }
  return g;
}

// Perfect-information extension of a random rows x cols matrix game: at r_i the column player
// picks j and play moves to c_j; at c_j the row player picks i and play moves to r_i.
// Both moves earn a_ij.
GameSpec gen_ergodic_extension(const GenParams& p, std::mt19937_64& rng) {
  if (p.rows < 1 || p.cols < 1 || p.R < 0) throw std::invalid_argument("invalid params: need rows, cols >= 1 and R >= 0");
  std::vector<std::vector<double>> a(p.rows, std::vector<double>(p.cols));
  for (auto& row : a)
    for (double& e : row) e = static_cast<double>(draw_below(rng, static_cast<std::uint64_t>(p.R) + 1));
  GameSpec g;
  for (std::size_t i = 0; i < p.rows; ++i) g.states.push_back(make_state("r" + std::to_string(i), {"wait"}, labels("col", p.cols)));
  for (std::size_t j = 0; j < p.cols; ++j) g.states.push_back(make_state("c" + std::to_string(j), labels("row", p.rows), {"wait"}));
  for (std::size_t i = 0; i < p.rows; ++i)
    for (std::size_t j = 0; j < p.cols; ++j) {
      g.states[i].cell(0, j).push_back(arc(p.rows + j, 1, 1, a[i][j]));
      g.states[p.rows + j].cell(i, 0).push_back(arc(i, 1, 1, a[i][j]));
    }
  return g;
}

}  // namespace

GameSpec generate(std::string_view kind, const GenParams& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (kind == "random") return gen_random(params, rng);
  if (kind == "big-match") return gen_big_match();
  if (kind == "disconnected") return gen_disconnected(params);
  if (kind == "cycle") return gen_cycle(params, rng);
  if (kind == "ergodic-extension") return gen_ergodic_extension(params, rng);
  throw std::invalid_argument("unknown generator kind '" + std::string(kind) + "'");
}

// ---------------------------------------------------------------------------
// Certificates

namespace {

Json state_names(const GameSpec& game, const StateSet& set) {
  Json out = Json::array();
  for (StateId v : set.members()) out.push_back(game[v].name);
  return out;
}

Json rounded(const std::vector<double>& v) {
  Json out = Json::array();
  for (double e : v) out.push_back(number12(e));
  return out;
}

StateSet names_to_set(const GameSpec& game, const Json& names, std::vector<std::string>& errors) {
  StateSet set(game.size());
  if (!names.is_array()) {
    errors.push_back("state set must be an array of names");
    return set;
  }
  for (const auto& n : names) {
    bool found = false;
    for (StateId v = 0; v < game.size() && n.is_string(); ++v)
      if (game[v].name == n.get<std::string>()) {
        set.insert(v);
        found = true;
      }
    if (!found) errors.push_back("unknown state " + n.dump() + " in certificate");
  }
  return set;
}

}  // namespace

Json certificate_json(const GameSpec& normalized, const DecideResult& result, const SolveMeta& meta) {
  const Verdict& v = result.verdict;
  const DriverStats& st = result.stats;
  Json doc;
  doc["format"] = kCertificateFormat;
  doc["verdict"] = to_string(v.kind);
  doc["epsilon"] = number12(v.eps);
  doc["reward_offset"] = number12(meta.reward_offset);
  doc["game_hash"] = hex64(fnv1a(serialize_game(normalized)));
  Json names = Json::array();
  for (const State& s : normalized.states) names.push_back(s.name);
  doc["states"] = std::move(names);
  doc["potential"] = rounded(v.x);
  doc["potential_hash"] = potential_hash(v.x);
  doc["band"] = Json::array({number12(v.m_minus), number12(v.m_plus)});

  if (v.kind == Verdict::Kind::NonErgodic && v.witness) {
    const WitnessCertificate& w = *v.witness;
    Json wj;
    wj["I"] = state_names(normalized, w.I);
    wj["F"] = state_names(normalized, w.F);
    wj["a"] = number12(w.a);
    wj["b"] = number12(w.b);
    wj["a_prime"] = number12(w.a_prime);
    wj["b_prime"] = number12(w.b_prime);
    wj["m_plus"] = number12(w.m_plus);
    Json alpha = Json::object(), beta = Json::object();
    for (StateId s : w.I.members()) alpha[normalized[s].name] = rounded(w.alpha[s]);
    for (StateId s : w.F.members()) beta[normalized[s].name] = rounded(w.beta[s]);
    wj["alpha"] = std::move(alpha);
    wj["beta"] = std::move(beta);
    if (!w.alpha_exact.empty()) {
      Json ae = Json::object(), be = Json::object();
      for (StateId s : w.I.members()) ae[normalized[s].name] = w.alpha_exact[s];
      for (StateId s : w.F.members()) be[normalized[s].name] = w.beta_exact[s];
      wj["alpha_exact"] = std::move(ae);
      wj["beta_exact"] = std::move(be);
    }
    if (v.verification) {
      wj["certified_lower"] = number12(v.verification->certified_lower);
      wj["certified_upper"] = number12(v.verification->certified_upper);
      wj["certified_gap"] = number12(v.verification->certified_gap());
    }
    wj["phase"] = v.witness_phase;
    doc["witness"] = std::move(wj);
  }
  if (v.kind == Verdict::Kind::Inconclusive) doc["reason"] = v.reason;

  Json solver;
  solver["outer_iterations"] = st.outer_iterations;
  solver["outer_cap"] = st.outer_cap;
  solver["hard_cap"] = meta.hard_cap;
  if (meta.cap_override) solver["cap_override"] = meta.cap_override;
  solver["cap_saturated"] = st.cap_saturated;
  solver["dtol"] = number12(meta.dtol);
  solver["band_slack"] = number12(kBandSlack);
  solver["witness_tolerance"] = number12(witness_tolerance(v.eps));
  solver["exact"] = meta.exact;
  Json rounds = Json::array();
  for (const OuterRecord& r : st.outer) {
    Json rj;
    rj["band"] = Json::array({number12(r.m_minus), number12(r.m_plus)});
    rj["outcome"] = r.outcome;
    rj["pump_iterations"] = Json::array({r.phase1_iterations, r.phase2_iterations});
    rj["pump_caps"] = Json::array({r.phase1_cap, r.phase2_cap});
    rj["potential_reduced"] = r.potential_reduced;
    rounds.push_back(std::move(rj));
  }
  solver["rounds"] = std::move(rounds);
  solver["potential_reduction"] =
      "heuristic: min ||x'||_inf LP with local strategies fixed, band from the current potential; "
      "fallback to mean-centering";
  doc["solver"] = std::move(solver);
  return doc;
}

CertificateCheck check_certificate(const GameSpec& original, const Json& cert) {
  CertificateCheck out;
  auto fail = [&](std::string msg) { out.messages.push_back(std::move(msg)); };
  if (!cert.is_object() || !cert.contains("format") || cert["format"] != kCertificateFormat) {
    fail("not an ergocert certificate");
    return out;
  }
  const NormalizedGame norm = normalize_rewards(original);
  const GameSpec& game = norm.game;
  const std::size_t n = game.size();
  try {
    if (cert.at("game_hash").get<std::string>() != hex64(fnv1a(serialize_game(game))))
      fail("certificate was issued for a different game");
    const double eps = cert.at("epsilon").get<double>();
    const Potential x = cert.at("potential").get<std::vector<double>>();
    if (x.size() != n) {
      fail("potential length does not match the game");
      return out;
    }
    const std::string verdict = cert.at("verdict").get<std::string>();
    if (verdict == "ergodic") {
      const auto m = local_value_vector(game, x);
      const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
      const auto band = cert.at("band").get<std::vector<double>>();
      const double tol = 1e-7 + 1e-10 * std::max(std::abs(*lo), std::abs(*hi));
      out.report["recomputed_band"] = Json::array({number12(*lo), number12(*hi)});
      if (*hi - *lo > 24.0 * eps + tol) fail("local values span " + std::to_string(*hi - *lo) + " > 24 eps");
      if (band.size() != 2 || *lo < band[0] - tol || *hi > band[1] + tol) fail("local values leave the recorded band");
    } else if (verdict == "non-ergodic") {
      const Json& wj = cert.at("witness");
      WitnessCertificate w;
      std::vector<std::string> errs;
      w.I = names_to_set(game, wj.at("I"), errs);
      w.F = names_to_set(game, wj.at("F"), errs);
      for (auto& e : errs) fail(e);
      w.x = x;
      w.a = wj.at("a").get<double>();
      w.b = wj.at("b").get<double>();
      w.a_prime = wj.at("a_prime").get<double>();
      w.b_prime = wj.at("b_prime").get<double>();
      w.m_plus = wj.at("m_plus").get<double>();
      w.eps = eps;
      w.alpha.assign(n, {});
      w.beta.assign(n, {});
      for (StateId v = 0; v < n; ++v) {
        if (wj.at("alpha").contains(game[v].name)) w.alpha[v] = wj["alpha"][game[v].name].get<std::vector<double>>();
        if (wj.at("beta").contains(game[v].name)) w.beta[v] = wj["beta"][game[v].name].get<std::vector<double>>();
      }
      const VerificationReport rep = verify_witness(game, w, witness_tolerance(eps));
      for (const auto& f : rep.failures) fail(f);
      out.report["structural"] = rep.structural;
      out.report["local"] = rep.local;
      out.report["global"] = rep.global;
      out.report["certified_lower"] = number12(rep.certified_lower);
      out.report["certified_upper"] = number12(rep.certified_upper);
      out.report["certified_gap"] = number12(rep.certified_gap());
    } else {
      fail("verdict '" + verdict + "' carries no certificate");
    }
  } catch (const Json::exception& e) {
    fail(std::string("malformed certificate: ") + e.what());
  } catch (const Error& e) {
    fail(std::string("recheck failed: ") + e.what());
  }
  out.passed = out.messages.empty();
  out.report["passed"] = out.passed;
  out.report["messages"] = out.messages;
  return out;
}

// ---------------------------------------------------------------------------
// Profiles, traces, oracle reports

StationaryProfile parse_profile(const GameSpec& game, std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError({"syntax error at line " + std::to_string(line) + ", column " + std::to_string(col)});
  }
  StationaryProfile prof = StationaryProfile::uniform(game);
  std::vector<std::string> errors;
  auto read = [&](const char* key, StationaryStrategy& strat, bool rows) {
    if (!doc.contains(key)) return;
    const Json& side = doc[key];
    if (!side.is_object()) {
      errors.push_back(std::string("\"") + key + "\" must be an object keyed by state");
      return;
    }
    for (const auto& [name, dist] : side.items()) {
      StateId v = game.size();
      for (StateId u = 0; u < game.size(); ++u)
        if (game[u].name == name) v = u;
      if (v == game.size()) {
        errors.push_back(std::string(key) + ": unknown state '" + name + "'");
        continue;
      }
      const std::size_t want = rows ? game[v].rows() : game[v].cols();
      if (!dist.is_array() || dist.size() != want) {
        errors.push_back(std::string(key) + "." + name + ": expected " + std::to_string(want) + " probabilities");
        continue;
      }
      std::vector<double> p = dist.get<std::vector<double>>();
      double sum = 0.0;
      bool ok = true;
      for (double e : p) {
        ok = ok && e >= 0.0;
        sum += e;
      }
      if (!ok || std::abs(sum - 1.0) > 1e-9) {
        errors.push_back(std::string(key) + "." + name + ": not a probability distribution");
        continue;
      }
      for (double& e : p) e /= sum;
      strat[v] = std::move(p);
    }
  };
  if (!doc.is_object() || !doc.contains("format") || doc["format"] != kProfileFormat)
    errors.push_back(std::string("missing or unsupported \"format\" (expected \"") + kProfileFormat + "\")");
  else {
    read("alpha", prof.alpha, true);
    read("beta", prof.beta, false);
  }
  if (!errors.empty()) throw ParseError(errors);
  return prof;
}

Json trace_record(const GameSpec& game, const TraceEvent& event) {
  (void)game;
  const PumpIteration& it = event.step;
  const auto [lo, hi] = std::minmax_element(it.m->begin(), it.m->end());
  Json rec;
  rec["outer"] = event.outer;
  rec["phase"] = event.phase;
  rec["tau"] = it.tau;
  rec["m_minus"] = number12(it.band->m_minus);
  rec["m_plus"] = number12(it.band->m_plus);
  rec["range"] = Json::array({number12(*lo), number12(*hi)});
  rec["T"] = it.band->top.count();
  rec["B"] = it.band->bottom.count();
  rec["P"] = it.band->pumped.count();
  rec["x_hash"] = potential_hash(*it.x);
  return rec;
}

Json oracle_json(const GameSpec& game, const OracleReport& report) {
  Json doc;
  doc["format"] = "ergocert-oracle/1";
  doc["note"] = "bounds from pure stationary strategies only; lo <= value <= hi, not exact values";
  doc["profiles"] = report.profiles;
  Json states = Json::array();
  for (StateId v = 0; v < game.size(); ++v) {
    Json s;
    s["state"] = game[v].name;
    s["lo"] = number12(report.lo[v]);
    s["hi"] = number12(report.hi[v]);
    Json arg_lo = Json::object(), arg_hi = Json::object();
    for (StateId u = 0; u < game.size(); ++u) {
      arg_lo[game[u].name] = game[u].actions1[report.lo_argmax[v][u]];
      arg_hi[game[u].name] = game[u].actions2[report.hi_argmin[v][u]];
    }
    s["lo_player1"] = std::move(arg_lo);
    s["hi_player2"] = std::move(arg_hi);
    states.push_back(std::move(s));
  }
  doc["states"] = std::move(states);
  Json mc = Json::array();
  for (const MonteCarloEstimate& e : report.monte_carlo) {
    mc.push_back(Json{{"start", game[e.start].name},
                      {"mean", number12(e.mean)},
                      {"std_error", number12(e.std_error)},
                      {"steps", e.steps},
                      {"seeds", e.seeds}});
  }
  doc["monte_carlo_uniform"] = std::move(mc);
  return doc;
}

}  // namespace ergocert
