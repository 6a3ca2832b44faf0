#include "chainamp/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "chainamp/amplify.hpp"
#include "chainamp/io.hpp"
#include "chainamp/ky_fan.hpp"
#include "chainamp/simulate.hpp"

namespace chainamp {

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitIo = 4;

std::string error_json(int code, const std::string& kind, const std::string& message) {
  std::string msg;
  for (char c : message) {
    if (c == '"' || c == '\\') msg += '\\';
    msg += c >= 0x20 || c == '\t' ? c : ' ';
  }
  return "{\"error\": {\"code\": " + std::to_string(code) + ", \"kind\": \"" + kind +
         "\", \"message\": \"" + msg + "\"}}\n";
}

void apply_thread_env() {
  const char* env = std::getenv("CHAINAMP_THREADS");
  if (!env) return;
  int v = std::atoi(env);
  if (v > 0) omp_set_num_threads(v);
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
  }
}

struct ProtocolArgs {
  int r = 1;
  double eps = 0.0;
  bool csv = false;
};

struct CurveArgs {
  double eps = 0.0;
  int r_min = 1;
  int r_max = 1;
  std::string out_path;
  int threads = 0;
};

struct ThresholdArgs {
  std::string mode = "both";
};

struct SimulateArgs {
  int r = 1;
  double eps = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string strategy_path;
  bool serial = false;
  int threads = 0;
};

struct KyFanArgs {
  int r = 1;
  double eps = 0.0;
  std::string mode = "closed";
};

struct DecomposeArgs {
  std::string in_path;
  double eps = 0.0;
  std::string out_path;
};

struct VerifyArgs {
  std::string in_path;
  double eps = 0.0;
  double tol = 0.0;
};

struct BoxArgs {
  std::string kind = "quantum";
  int N = 2;
  std::vector<int> f_a, f_b;
  std::string out_path;
};

struct BellArgs {
  std::string kind;
  int N = 2;
  std::string in_path;
};

int dispatch(CLI::App& app, const ProtocolArgs& pa, const CurveArgs& ca, const ThresholdArgs& ta,
             const SimulateArgs& sa, const KyFanArgs& ka, const DecomposeArgs& da,
             const VerifyArgs& va, const BoxArgs& ba, const BellArgs& bla, std::ostream& out) {
  if (app.got_subcommand("protocol")) {
    ProtocolReport rep = protocol_report(pa.r, Epsilon(pa.eps));
    if (pa.csv) {
      out << protocol_report_csv_header() << protocol_report_to_csv_row(rep);
    } else {
      out << protocol_report_to_json_text(rep);
    }
    return 0;
  }

  if (app.got_subcommand("curve")) {
    auto rows = protocol_curve(Epsilon(ca.eps), ca.r_min, ca.r_max, ca.threads);
    std::string text = protocol_report_csv_header();
    for (const auto& rep : rows) text += protocol_report_to_csv_row(rep);
    write_file(ca.out_path, text);
    return 0;
  }

  if (app.got_subcommand("threshold")) {
    if (ta.mode == "simple") {
      out << "{\"simple\": " << fmt15(threshold_simple()) << "}\n";
    } else if (ta.mode == "asymptotic") {
      out << "{\"asymptotic\": " << fmt15(threshold_asymptotic()) << "}\n";
    } else if (ta.mode == "both") {
      out << "{\"simple\": " << fmt15(threshold_simple()) << ", \"asymptotic\": "
          << fmt15(threshold_asymptotic()) << "}\n";
    } else {
      throw std::invalid_argument("threshold: mode must be simple, asymptotic or both");
    }
    return 0;
  }

  if (app.got_subcommand("simulate")) {
    AdversaryStrategy strategy = strategy_from_json_text(read_file(sa.strategy_path), sa.r);
    SimReport rep = sa.serial
                        ? run_protocol_serial(sa.r, Epsilon(sa.eps), strategy, sa.trials, sa.seed)
                        : run_protocol(sa.r, Epsilon(sa.eps), strategy, sa.trials, sa.seed,
                                       sa.threads);
    out << sim_report_to_json_text(rep);
    return 0;
  }

  if (app.got_subcommand("kyfan")) {
    Epsilon sv(ka.eps);
    std::string text;
    std::string mode = ka.mode == "exact" ? "closed" : ka.mode;
    if (mode == "closed" || mode == "layer" || mode == "bruteforce") {
      KyFanResult res;
      if (mode == "closed") {
        res = ky_fan_bernoulli_exact(ka.r, sv);
      } else if (mode == "layer") {
        res = ky_fan_bernoulli_layer(ka.r, sv);
      } else {
        ProbDist dist = bernoulli_distribution<double>(2 * ka.r, sv);
        res.k = (std::uint64_t{1} << (ka.r + 1)) - 1;
        res.value = ky_fan_bruteforce(dist, res.k);
        res.log2_value = LogReal{std::log2(res.value)};
        res.mode = KyFanMode::bruteforce;
      }
      text = "{\"r\": " + std::to_string(ka.r) + ", \"eps\": " + fmt15(ka.eps) + ", \"mode\": \"" +
             ka.mode + "\", \"k\": " + std::to_string(res.k) + ", \"value\": " + fmt15(res.value) +
             ", \"log2_value\": " + fmt15(res.log2_value.log2_value) + "}\n";
    } else if (mode == "log") {
      LogReal lv = ky_fan_bernoulli_log(ka.r, sv);
      text = "{\"r\": " + std::to_string(ka.r) + ", \"eps\": " + fmt15(ka.eps) +
             ", \"mode\": \"log\", \"value\": " + fmt15(lv.to_linear()) +
             ", \"log2_value\": " + fmt15(lv.log2_value) + "}\n";
    } else if (mode == "bounds") {
      Lemma2Bounds b = lemma2_bounds(ka.r, sv);
      text = "{\"r\": " + std::to_string(ka.r) + ", \"eps\": " + fmt15(ka.eps) +
             ", \"mode\": \"bounds\", \"log2_lower\": " + fmt15(b.lower.log2_value) +
             ", \"log2_upper\": " + fmt15(b.upper.log2_value) +
             ", \"factor\": " + fmt15(lemma2_bound_factor(sv)) + "}\n";
    } else {
      throw std::invalid_argument("kyfan: mode must be exact, layer, bruteforce, log or bounds");
    }
    out << text;
    return 0;
  }

  if (app.got_subcommand("decompose")) {
    ProbDist dist = prob_dist_from_json_text(read_file(da.in_path));
    ConvexDecomposition dec = decompose<double>(dist, Epsilon(da.eps));
    emit(decomposition_to_json_text(dec), da.out_path, out);
    return 0;
  }

  if (app.got_subcommand("verify")) {
    ProbDist dist = prob_dist_from_json_text(read_file(va.in_path));
    out << sv_report_to_json_text(verify_sv<double>(dist, Epsilon(va.eps), va.tol));
    return 0;
  }

  if (app.got_subcommand("box")) {
    Box box;
    if (ba.kind == "quantum") {
      box = quantum_box(ba.N);
    } else if (ba.kind == "chain_pr") {
      box = chain_pr_box(ba.N);
    } else if (ba.kind == "deterministic") {
      if (ba.f_a.empty() || ba.f_b.empty()) {
        throw std::invalid_argument("box: deterministic needs --f-a and --f-b");
      }
      box = deterministic_box(ba.f_a, ba.f_b);
    } else {
      throw std::invalid_argument("box: kind must be quantum, chain_pr or deterministic");
    }
    emit(box_to_json_text(box), ba.out_path, out);
    return 0;
  }

  if (app.got_subcommand("bell")) {
    Box box;
    if (!bla.in_path.empty()) {
      box = box_from_json_text(read_file(bla.in_path));
    } else if (bla.kind == "quantum") {
      box = quantum_box(bla.N);
    } else if (bla.kind == "chain_pr") {
      box = chain_pr_box(bla.N);
    } else {
      throw std::invalid_argument("bell: need --in FILE or --box quantum|chain_pr");
    }
    double raw = bell_value_raw(box);
    double uni = bell_value_weighted(box, SettingsDistribution::uniform(box.N));
    out << "{\"N\": " << box.N << ", \"raw\": " << fmt15(raw) << ", \"uniform\": " << fmt15(uni)
        << ", \"output_bias\": " << fmt15(box_output_bias(box)) << "}\n";
    return 0;
  }

  throw CLI::CallForHelp();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"chained Bell randomness amplification toolkit"};
  app.require_subcommand(0, 1);

  ProtocolArgs pa;
  auto* protocol = app.add_subcommand("protocol", "amplification bounds for one (r, eps)");
  protocol->add_option("--r", pa.r, "chain parameter, N = 2^r")->required();
  protocol->add_option("--eps", pa.eps, "SV source bias")->required();
  bool want_json = false;
  protocol->add_flag("--json", want_json, "JSON output (default)");
  protocol->add_flag("--csv", pa.csv, "CSV output")->excludes("--json");

  CurveArgs ca;
  auto* curve = app.add_subcommand("curve", "sweep r and write a CSV");
  curve->add_option("--eps", ca.eps)->required();
  curve->add_option("--r-min", ca.r_min)->required();
  curve->add_option("--r-max", ca.r_max)->required();
  curve->add_option("--out", ca.out_path, "output CSV path")->required();
  curve->add_option("--threads", ca.threads, "worker threads (0 = default)");

  ThresholdArgs ta;
  auto* threshold = app.add_subcommand("threshold", "amplification thresholds on eps");
  threshold->add_option("--mode", ta.mode, "simple, asymptotic or both");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo protocol run");
  simulate->add_option("--r", sa.r)->required();
  simulate->add_option("--eps", sa.eps)->required();
  simulate->add_option("--trials", sa.trials)->required();
  simulate->add_option("--seed", sa.seed)->required();
  simulate->add_option("--strategy", sa.strategy_path, "strategy JSON file")->required();
  bool sim_json = false;
  simulate->add_flag("--json", sim_json, "JSON output (default)");
  simulate->add_flag("--serial", sa.serial, "single-threaded reference path");
  simulate->add_option("--threads", sa.threads, "worker threads (0 = default)");

  KyFanArgs ka;
  auto* kyfan = app.add_subcommand("kyfan", "Ky Fan norm of the Bernoulli source");
  kyfan->add_option("--r", ka.r)->required();
  kyfan->add_option("--eps", ka.eps)->required();
  kyfan->add_option("--mode", ka.mode, "exact, layer, bruteforce, log or bounds");

  DecomposeArgs da;
  auto* decompose_cmd = app.add_subcommand("decompose", "extremal decomposition of a distribution");
  decompose_cmd->add_option("--in", da.in_path, "distribution JSON file")->required();
  decompose_cmd->add_option("--eps", da.eps)->required();
  decompose_cmd->add_option("--out", da.out_path, "output path (stdout when absent)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "check the SV bound on a distribution");
  verify->add_option("--in", va.in_path, "distribution JSON file")->required();
  verify->add_option("--eps", va.eps)->required();
  verify->add_option("--tol", va.tol, "violation tolerance");

  BoxArgs ba;
  auto* box_cmd = app.add_subcommand("box", "build a standard box");
  box_cmd->add_option("--kind", ba.kind, "quantum, chain_pr or deterministic")->required();
  box_cmd->add_option("--N", ba.N, "settings per side")->required();
  box_cmd->add_option("--f-a", ba.f_a, "deterministic Alice outputs");
  box_cmd->add_option("--f-b", ba.f_b, "deterministic Bob outputs");
  box_cmd->add_option("--out", ba.out_path, "output path (stdout when absent)");

  BellArgs bla;
  auto* bell = app.add_subcommand("bell", "chain functional value of a box");
  bell->add_option("--box", bla.kind, "quantum or chain_pr");
  bell->add_option("--N", bla.N, "settings per side");
  bell->add_option("--in", bla.in_path, "box JSON file");

  std::vector<const char*> argv;
  argv.push_back("chainamp");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_json(kExitUsage, "usage", e.what());
    return kExitUsage;
  }

  apply_thread_env();

  try {
    return dispatch(app, pa, ca, ta, sa, ka, da, va, ba, bla, out);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const std::invalid_argument& e) {
    err << error_json(kExitDomain, "domain", e.what());
    return kExitDomain;
  } catch (const std::domain_error& e) {
    err << error_json(kExitDomain, "domain", e.what());
    return kExitDomain;
  } catch (const std::runtime_error& e) {
    err << error_json(kExitIo, "io", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    // json parse/type errors from malformed input files land here
    err << error_json(kExitIo, "io", e.what());
    return kExitIo;
  }
}

}  // namespace chainamp
