#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "twinfock/distillation.hpp"
#include "twinfock/loss_model.hpp"
#include "twinfock/state.hpp"
#include "twinfock/stokes.hpp"

namespace twinfock {

using nlohmann::json;

/// 12 significant digits, '.' decimal point, locale-free.
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string format_bool(bool b) { return b ? "true" : "false"; }

// --- states ---------------------------------------------------------------

inline json to_json(const StateVector& psi) {
  json amps = json::array();
  for (Index i = 0; i < psi.space.dimension(); ++i) {
    const Complex a = psi.amplitudes[i];
    if (std::abs(a) < 1e-15) continue;
    amps.push_back({{"occupation", psi.space.occupation_of(i)},
                    {"re", a.real()},
                    {"im", a.imag()}});
  }
  return json{{"cutoffs", psi.space.cutoffs()}, {"amplitudes", amps}};
}

inline StateVector state_from_json(const json& j) {
  FockSpace space(j.at("cutoffs").get<std::vector<int>>());
  StateVector psi = StateVector::zero(space);
  for (const json& entry : j.at("amplitudes")) {
    auto occ = entry.at("occupation").get<std::vector<int>>();
    psi.amplitudes[space.index_of(occ)] =
        Complex(entry.at("re").get<double>(), entry.at("im").get<double>());
  }
  return psi;
}

// --- reports ----------------------------------------------------------------

inline json to_json(const WitnessReport& r) {
  json j{{"term_x", r.term_x}, {"term_y", r.term_y},   {"term_z", r.term_z},
         {"lhs", r.lhs},       {"rhs", r.rhs},         {"witness", r.witness},
         {"n_alice", r.n_alice}, {"n_bob", r.n_bob},   {"tail_mass", r.tail_mass},
         {"sy_sign_alice", r.sy_sign_alice}, {"sy_sign_bob", r.sy_sign_bob},
         {"mode_count", r.mode_count}, {"cutoff", r.cutoff}};
  if (r.gains)
    j["gains"] = {{"g_a", r.gains->first}, {"g_b", r.gains->second}};
  else
    j["gains"] = nullptr;
  return j;
}

inline WitnessReport witness_from_json(const json& j) {
  WitnessReport r;
  r.term_x = j.at("term_x");
  r.term_y = j.at("term_y");
  r.term_z = j.at("term_z");
  r.lhs = j.at("lhs");
  r.rhs = j.at("rhs");
  r.witness = j.at("witness");
  r.n_alice = j.at("n_alice");
  r.n_bob = j.at("n_bob");
  r.tail_mass = j.at("tail_mass");
  r.sy_sign_alice = j.at("sy_sign_alice");
  r.sy_sign_bob = j.at("sy_sign_bob");
  r.mode_count = j.at("mode_count");
  r.cutoff = j.at("cutoff");
  if (!j.at("gains").is_null())
    r.gains = std::make_pair(j["gains"].at("g_a").get<double>(), j["gains"].at("g_b").get<double>());
  return r;
}

inline json to_json(const LossReport& r) {
  json j{{"lhs_analytic", r.lhs_analytic}, {"rhs_analytic", r.rhs_analytic},
         {"detected", r.detected},         {"mean_n", r.mean_n},
         {"var_n_paper", r.var_n_paper},   {"cutoff", r.cutoff},
         {"tail_mass", r.tail_mass}};
  j["lhs_numeric"] = r.lhs_numeric ? json(*r.lhs_numeric) : json(nullptr);
  j["rhs_numeric"] = r.rhs_numeric ? json(*r.rhs_numeric) : json(nullptr);
  return j;
}

inline LossReport loss_from_json(const json& j) {
  LossReport r;
  r.lhs_analytic = j.at("lhs_analytic");
  r.rhs_analytic = j.at("rhs_analytic");
  r.detected = j.at("detected");
  r.mean_n = j.at("mean_n");
  r.var_n_paper = j.at("var_n_paper");
  r.cutoff = j.at("cutoff");
  r.tail_mass = j.at("tail_mass");
  if (!j.at("lhs_numeric").is_null()) r.lhs_numeric = j["lhs_numeric"].get<double>();
  if (!j.at("rhs_numeric").is_null()) r.rhs_numeric = j["rhs_numeric"].get<double>();
  return r;
}

inline json to_json(const OutcomeRecord& r) {
  json coeffs = json::array(), signs = json::array();
  for (Eigen::Index n = 0; n < r.coeffs.values.size(); ++n) coeffs.push_back(r.coeffs.values[n]);
  for (int s : r.coeffs.raw_signs) signs.push_back(s);
  return json{{"n_i", r.outcome.n_i},
              {"n_ii", r.outcome.n_ii},
              {"total", r.outcome.total()},
              {"prob_numeric", r.prob_numeric},
              {"prob_paper_formula", r.prob_paper_formula},
              {"coeffs", coeffs},
              {"raw_signs", signs},
              {"entropy_nats", r.entropy_nats},
              {"post_state", to_json(r.post_state)}};
}

inline json to_json(const Fig2Table& t) {
  json aggs = json::array();
  for (const Fig2Aggregate& a : t.aggregates)
    aggs.push_back({{"lambda", a.lam},
                    {"input_entropy_nats", a.input_entropy_nats},
                    {"p_exceeds_input", a.p_exceeds_input},
                    {"probability_captured", a.probability_captured}});
  return json{{"n_max_detect", t.n_max_detect}, {"aggregates", aggs}};
}

// --- files ------------------------------------------------------------------

/// Write via a temp file in the same directory, then rename.
inline void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
  }
  fs::rename(tmp, target);
}

inline std::string witness_csv_header() {
  return "term_x,term_y,term_z,lhs,rhs,witness,n_alice,n_bob,tail_mass,g_a,g_b\n";
}

inline std::string witness_csv_row(const WitnessReport& r) {
  std::string row = format_number(r.term_x) + "," + format_number(r.term_y) + "," +
                    format_number(r.term_z) + "," + format_number(r.lhs) + "," +
                    format_number(r.rhs) + "," + format_number(r.witness) + "," +
                    format_number(r.n_alice) + "," + format_number(r.n_bob) + "," +
                    format_number(r.tail_mass) + ",";
  row += r.gains ? format_number(r.gains->first) : std::string();
  row += ",";
  row += r.gains ? format_number(r.gains->second) : std::string();
  return row + "\n";
}

inline std::string fig2_csv(const Fig2Table& t) {
  std::string out = "lambda,n_i,n_ii,total_n,probability,entropy_nats,input_entropy_nats,exceeds_input\n";
  for (const Fig2Row& r : t.rows) {
    out += format_number(r.lam) + "," + std::to_string(r.outcome.n_i) + "," +
           std::to_string(r.outcome.n_ii) + "," + std::to_string(r.outcome.total()) + "," +
           format_number(r.probability) + "," + format_number(r.entropy_nats) + "," +
           format_number(r.input_entropy_nats) + "," + format_bool(r.exceeds_input) + "\n";
  }
  return out;
}

}  // namespace twinfock
