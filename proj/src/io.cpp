#include "chainamp/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chainamp {

using nlohmann::json;

std::string fmt15(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

namespace {

std::string num_array(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += fmt15(xs[i]);
  }
  return out + "]";
}

}  // namespace

ProbDist prob_dist_from_json_text(const std::string& text) {
  json j = json::parse(text);
  int n = j.at("n").get<int>();
  std::vector<double> probs = j.at("probs").get<std::vector<double>>();
  return ProbDist(n, std::move(probs));
}

std::string prob_dist_to_json_text(const ProbDist& dist) {
  std::string out = "{\"n\": " + std::to_string(dist.n) + ", \"probs\": ";
  out += num_array(dist.probs);
  return out + "}\n";
}

Box box_from_json_text(const std::string& text) {
  json j = json::parse(text);
  int N = j.at("N").get<int>();
  Box box(N);
  const json& t = j.at("table");
  if (static_cast<int>(t.size()) != N) throw std::invalid_argument("box: table must have N rows");
  for (int x = 0; x < N; ++x) {
    if (static_cast<int>(t[x].size()) != N) throw std::invalid_argument("box: row must have N columns");
    for (int y = 0; y < N; ++y) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          box.at(a, b, x, y) = t[x][y][a][b].get<double>();
        }
      }
    }
  }
  box.validate();
  return box;
}

std::string box_to_json_text(const Box& box) {
  std::string out = "{\"N\": " + std::to_string(box.N) + ", \"table\": [";
  for (int x = 0; x < box.N; ++x) {
    if (x) out += ", ";
    out += "[";
    for (int y = 0; y < box.N; ++y) {
      if (y) out += ", ";
      out += "[[" + fmt15(box.p(0, 0, x, y)) + ", " + fmt15(box.p(0, 1, x, y)) + "], [" +
             fmt15(box.p(1, 0, x, y)) + ", " + fmt15(box.p(1, 1, x, y)) + "]]";
    }
    out += "]";
  }
  return out + "]}\n";
}

std::string decomposition_to_json_text(const ConvexDecomposition& dec) {
  std::string out = "{\"eps\": " + fmt15(dec.eps) + ", \"terms\": [";
  for (std::size_t i = 0; i < dec.terms.size(); ++i) {
    if (i) out += ", ";
    out += "{\"weight\": " + fmt15(dec.terms[i].weight) + ", \"signs\": \"" +
           dec.terms[i].labeling.to_string() + "\"}";
  }
  return out + "]}\n";
}

ConvexDecomposition decomposition_from_json_text(const std::string& text) {
  json j = json::parse(text);
  ConvexDecomposition dec{j.at("eps").get<double>(), {}};
  for (const auto& term : j.at("terms")) {
    std::string signs = term.at("signs").get<std::string>();
    int n = 0;
    while ((std::size_t{2} << n) - 1 < signs.size() + 1) ++n;
    dec.terms.push_back({term.at("weight").get<double>(),
                         ExtremalLabeling::from_string(n, signs)});
  }
  return dec;
}

std::string sv_report_to_json_text(const SvReport<double>& rep) {
  std::string out = "{\"pass\": ";
  out += rep.pass ? "true" : "false";
  out += ", \"worst_prefix\": \"" + rep.worst_prefix().to_string() + "\"";
  out += ", \"worst_conditional\": " + fmt15(rep.worst_conditional) + "}\n";
  return out;
}

AdversaryStrategy strategy_from_json_text(const std::string& text, int r) {
  json j = json::parse(text);
  AdversaryStrategy strategy;

  const json& sv = j.at("sv");
  std::string kind = sv.at("kind").get<std::string>();
  if (kind == "honest_uniform") {
    strategy.sv = SvPart::honest();
  } else if (kind == "fixed_labeling") {
    strategy.sv = SvPart::fixed(ExtremalLabeling::from_string(2 * r, sv.at("signs").get<std::string>()));
  } else if (kind == "sampled") {
    json d = sv.at("dist");
    strategy.sv = SvPart::sampled_from(
        ProbDist(d.at("n").get<int>(), d.at("probs").get<std::vector<double>>()));
  } else {
    throw std::invalid_argument("strategy: unknown sv kind: " + kind);
  }

  const int N = 1 << r;
  for (const auto& bj : j.at("boxes")) {
    double w = bj.at("weight").get<double>();
    std::string bkind = bj.at("kind").get<std::string>();
    if (bkind == "quantum") {
      strategy.boxes.emplace_back(w, quantum_box(N));
    } else if (bkind == "chain_pr") {
      strategy.boxes.emplace_back(w, chain_pr_box(N));
    } else if (bkind == "deterministic") {
      strategy.boxes.emplace_back(w, deterministic_box(bj.at("f_a").get<std::vector<int>>(),
                                                       bj.at("f_b").get<std::vector<int>>()));
    } else if (bkind == "table") {
      strategy.boxes.emplace_back(w, box_from_json_text(bj.at("box").dump()));
    } else {
      throw std::invalid_argument("strategy: unknown box kind: " + bkind);
    }
  }
  return strategy;
}

std::string sim_report_to_json_text(const SimReport& rep) {
  std::string out = "{";
  out += "\"trials\": " + std::to_string(rep.trials);
  out += ", \"kept\": " + std::to_string(rep.kept);
  out += ", \"bell_value\": " + fmt15(rep.bell_value);
  out += ", \"bell_se\": " + fmt15(rep.bell_se);
  out += ", \"alice_bias\": " + fmt15(rep.alice_bias);
  out += ", \"alice_bias_se\": " + fmt15(rep.alice_bias_se);
  out += ", \"min_pair_prob\": " + fmt15(rep.min_pair_prob);
  out += ", \"bell_fail_count\": " + std::to_string(rep.bell_fail_count);
  out += ", \"alice_zero_count\": " + std::to_string(rep.alice_zero_count);
  out += ", \"pair_counts\": [";
  for (std::size_t i = 0; i < rep.pair_counts.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(rep.pair_counts[i]);
  }
  out += "]}\n";
  return out;
}

std::string protocol_report_to_json_text(const ProtocolReport& rep) {
  std::string out = "{";
  out += "\"r\": " + std::to_string(rep.r);
  out += ", \"eps\": " + fmt15(rep.eps);
  out += ", \"N\": " + std::to_string(rep.n_settings);
  out += ", \"log2_kyfan\": " + fmt15(rep.log2_kyfan);
  out += ", \"log2_pmin\": " + fmt15(rep.log2_pmin);
  out += ", \"beta_q\": " + fmt15(rep.beta_q);
  out += ", \"delta\": " + fmt15(rep.delta);
  out += ", \"delta_coarse\": " + fmt15(rep.delta_coarse);
  out += ", \"eps_new\": " + fmt15(rep.eps_new);
  out += ", \"eps_new_lower\": " + fmt15(rep.eps_new_lower);
  out += ", \"threshold_simple\": " + fmt15(rep.threshold_simple);
  out += ", \"threshold_asymptotic\": " + fmt15(rep.threshold_asymptotic);
  out += "}\n";
  return out;
}

std::string protocol_report_csv_header() {
  return "r,log2_kyfan,log2_pmin,delta,delta_coarse,eps_new,eps_new_lower\n";
}

std::string protocol_report_to_csv_row(const ProtocolReport& rep) {
  std::string out = std::to_string(rep.r);
  char sep = ',';
  auto csv_num = [](double v) {
    if (!std::isfinite(v)) return std::string(v > 0 ? "inf" : (v < 0 ? "-inf" : "nan"));
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::string(buf);
  };
  out += sep + csv_num(rep.log2_kyfan);
  out += sep + csv_num(rep.log2_pmin);
  out += sep + csv_num(rep.delta);
  out += sep + csv_num(rep.delta_coarse);
  out += sep + csv_num(rep.eps_new);
  out += sep + csv_num(rep.eps_new_lower);
  return out + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace chainamp
