// Command-line front end: learn block dictionaries from matrix files, run
// the coders, generate synthetic data, and reproduce the benchmark
// experiments as CSV tables.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "bsdl/bsdl.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::string format = "csv";
  int threads = 1;
  std::string config_path;
};

bsdl::MatrixFormat parse_format(const std::string& fmt) {
  if (fmt == "csv") return bsdl::MatrixFormat::Csv;
  if (fmt == "bin") return bsdl::MatrixFormat::Binary;
  throw bsdl::InfeasibleConfig("unknown format '" + fmt + "' (expected csv|bin)");
}

std::string matrix_filename(const std::string& stem, bsdl::MatrixFormat fmt) {
  return stem + (fmt == bsdl::MatrixFormat::Csv ? ".csv" : ".bin");
}

// "20x3" or "12x2+12x3" -> block size list.
std::vector<int> parse_block_layout(const std::string& text) {
  std::vector<int> sizes;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t plus = text.find('+', pos);
    if (plus == std::string::npos) plus = text.size();
    const std::string group = text.substr(pos, plus - pos);
    const std::size_t x = group.find('x');
    if (x == std::string::npos)
      throw bsdl::InfeasibleConfig("bad block layout '" + text +
                                   "' (expected COUNTxSIZE[+COUNTxSIZE...])");
    int count = 0, size = 0;
    try {
      count = std::stoi(group.substr(0, x));
      size = std::stoi(group.substr(x + 1));
    } catch (const std::exception&) {
      throw bsdl::InfeasibleConfig("bad block layout group '" + group + "'");
    }
    if (count < 1 || size < 1)
      throw bsdl::InfeasibleConfig("block layout counts and sizes must be >= 1");
    for (int i = 0; i < count; ++i) sizes.push_back(size);
    pos = plus + 1;
  }
  if (sizes.empty()) throw bsdl::InfeasibleConfig("empty block layout");
  return sizes;
}

double parse_snr(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "Inf")
    return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw bsdl::InfeasibleConfig("cannot parse SNR value '" + text + "'");
  return v;
}

json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw bsdl::IoError("cannot open config file '" + path + "'");
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw bsdl::InfeasibleConfig("config file '" + path + "': " + e.what());
  }
  return j;
}

// Config values fill in defaults before argv is parsed, so explicit flags
// always win. Globals sit at the top level, per-command keys in a section
// named after the subcommand.
template <typename T>
void from_config(const json& j, const std::string& section, const char* key, T& var) {
  const json* scope = &j;
  if (!section.empty() && j.contains(section) && j[section].is_object())
    scope = &j[section];
  else if (!section.empty() && !j.contains(key))
    return;
  if (scope->contains(key)) {
    try {
      var = scope->at(key).get<T>();
    } catch (const json::exception& e) {
      throw bsdl::InfeasibleConfig("config key '" + std::string(key) + "': " + e.what());
    }
  }
}

void write_manifest(const std::string& path, int n, int k_atoms,
                    const std::vector<int>& sizes, int sparsity, int l,
                    double snr_db, std::uint64_t seed) {
  json manifest;
  manifest["N"] = n;
  manifest["K"] = k_atoms;
  manifest["block_sizes"] = sizes;
  manifest["k"] = sparsity;
  manifest["L"] = l;
  manifest["snr_db"] = std::isinf(snr_db) ? json("inf") : json(snr_db);
  manifest["seed"] = seed;
  std::ofstream os(path);
  if (!os) throw bsdl::IoError("cannot open '" + path + "' for writing");
  os << manifest.dump(2) << '\n';
}

void write_learn_trace(const std::string& path,
                       const std::vector<bsdl::OuterTraceRow>& trace,
                       const std::vector<double>* recovered) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw bsdl::IoError("cannot open '" + path + "' for writing");
  os << "iter,e,num_blocks,objective_b";
  if (recovered) os << ",blocks_recovered";
  os << '\n';
  for (std::size_t i = 0; i < trace.size(); ++i) {
    os << trace[i].iteration << ',' << bsdl::detail::format_double(trace[i].error)
       << ',' << trace[i].num_blocks << ',' << trace[i].objective;
    if (recovered) os << ',' << bsdl::detail::format_double((*recovered)[i]);
    os << '\n';
  }
}

int run_learn(const GlobalOpts& g, const json& cfg_json, const std::string& input,
              std::string out_dir, int k, int s, int s_low, int s_high,
              int atoms, int iters, int init_iters, double tol,
              const std::string& init_mode) {
  const auto fmt = parse_format(g.format);
  const bsdl::Matrix x = bsdl::read_matrix(input, fmt);
  bsdl::check_signal_matrix(x);

  bsdl::LearnConfig cfg;
  cfg.num_atoms = atoms > 0 ? atoms : 2 * static_cast<int>(x.rows());
  cfg.block_sparsity = k;
  cfg.max_block_size = s_high > 0 ? s_high : s;
  cfg.min_block_size = s_low;
  cfg.outer_iters = iters;
  cfg.ksvd_init_iters = init_iters;
  cfg.residual_tol = tol;
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  if (init_mode == "signals")
    cfg.init = bsdl::InitMode::RandomSignals;
  else if (init_mode != "ksvd")
    throw bsdl::InfeasibleConfig("unknown init mode '" + init_mode + "'");
  (void)cfg_json;

  const auto result = bsdl::learn_block_dictionary(x, cfg);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  bsdl::write_matrix((dir / matrix_filename("D", fmt)).string(), result.dictionary, fmt);
  bsdl::write_block_structure((dir / "d.csv").string(), result.structure);
  bsdl::write_matrix((dir / matrix_filename("theta", fmt)).string(), result.coefficients, fmt);
  write_learn_trace((dir / "trace.csv").string(), result.trace, nullptr);

  std::printf("e=%.17g blocks=%d iterations=%zu\n", result.trace.back().error,
              result.structure.block_count(), result.trace.size());
  return 0;
}

int run_code(const GlobalOpts& g, const std::string& dict_path,
             const std::string& blocks_path, const std::string& input,
             const std::string& out_path, int k, double tol) {
  const auto fmt = parse_format(g.format);
  const bsdl::Matrix dict = bsdl::read_matrix(dict_path, fmt);
  bsdl::check_dictionary(dict, 1e-6);
  const bsdl::Matrix x = bsdl::read_matrix(input, fmt);
  bsdl::check_signal_matrix(x);
  const bsdl::CodingBudget budget{k, tol};

  bsdl::Matrix theta;
  if (blocks_path.empty()) {
    theta = bsdl::code_matrix(dict, nullptr, x, budget, g.threads);
  } else {
    const bsdl::BlockStructure d = bsdl::read_block_structure(blocks_path);
    theta = bsdl::code_matrix(dict, &d, x, budget, g.threads);
  }
  bsdl::write_matrix(out_path, theta, fmt);
  std::printf("e=%.17g\n", bsdl::representation_error(x, dict, theta));
  return 0;
}

int run_synth(const GlobalOpts& g, int n, int k_atoms, const std::string& layout,
              int sparsity, int l, const std::string& snr_text,
              std::string out_dir) {
  const auto fmt = parse_format(g.format);
  const auto sizes = parse_block_layout(layout);
  const double snr_db = parse_snr(snr_text);

  const bsdl::Matrix dict = bsdl::generate_dictionary(n, k_atoms, g.seed);
  const bsdl::BlockStructure d = bsdl::generate_block_structure(k_atoms, sizes);
  auto [x, theta] = bsdl::generate_signals(dict, d, sparsity, l, g.seed);
  const bsdl::Matrix noisy = bsdl::add_noise(x, snr_db, g.seed);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  bsdl::write_matrix((dir / matrix_filename("X", fmt)).string(), noisy, fmt);
  bsdl::write_matrix((dir / matrix_filename("D_star", fmt)).string(), dict, fmt);
  bsdl::write_block_structure((dir / "d_star.csv").string(), d);
  bsdl::write_matrix((dir / matrix_filename("theta_star", fmt)).string(), theta, fmt);
  write_manifest((dir / "manifest.json").string(), n, k_atoms, sizes, sparsity,
                 l, snr_db, g.seed);
  std::printf("wrote %s\n", out_dir.c_str());
  return 0;
}

int run_experiment_cmd(const GlobalOpts& g, const std::string& id_name,
                       const std::vector<std::string>& snr_list,
                       const std::vector<double>& k_sweep,
                       const std::vector<double>& iter_sweep, int trials, int l,
                       int n, int atoms, const std::string& layout, int sparsity,
                       int s_low, int s_high, int iters, int init_iters,
                       int ksvd_nonzeros, const std::string& out_path,
                       const std::string& trace_dir,
                       const std::vector<std::string>& algorithms, bool quiet) {
  bsdl::ExperimentSpec spec = bsdl::make_experiment_spec(bsdl::parse_experiment_id(id_name));
  int axes = 0;
  if (!snr_list.empty()) {
    spec.axis = bsdl::SweepAxis::SnrDb;
    spec.sweep.clear();
    for (const auto& s : snr_list) spec.sweep.push_back(parse_snr(s));
    ++axes;
  }
  if (!k_sweep.empty()) {
    spec.axis = bsdl::SweepAxis::BlockSparsity;
    spec.sweep = k_sweep;
    ++axes;
  }
  if (!iter_sweep.empty()) {
    spec.axis = bsdl::SweepAxis::Iterations;
    spec.sweep = iter_sweep;
    ++axes;
  }
  if (axes > 1)
    throw bsdl::InfeasibleConfig("choose at most one of --snr, --k-sweep, --iters-sweep");
  if (trials > 0) spec.trials = trials;
  if (l > 0) spec.num_signals = l;
  if (n > 0) spec.signal_dim = n;
  if (atoms > 0) spec.num_atoms = atoms;
  if (!layout.empty()) spec.block_sizes = parse_block_layout(layout);
  if (sparsity > 0) spec.block_sparsity = sparsity;
  if (s_low > 0) spec.min_block_size = s_low;
  if (s_high > 0) spec.max_block_size = s_high;
  if (iters > 0) spec.outer_iters = iters;
  if (init_iters > 0) spec.ksvd_init_iters = init_iters;
  if (ksvd_nonzeros > 0) spec.ksvd_nonzeros = ksvd_nonzeros;
  spec.seed = g.seed;
  spec.threads = g.threads;
  spec.algorithms = algorithms;

  {
    int total = 0;
    for (int sz : spec.block_sizes) total += sz;
    if (total != spec.num_atoms)
      throw bsdl::InfeasibleConfig("block layout covers " + std::to_string(total) +
                                   " atoms but the dictionary has " +
                                   std::to_string(spec.num_atoms));
  }

  const auto rows = bsdl::run_experiment(spec, quiet ? nullptr : &std::cerr);
  bsdl::write_results_csv(out_path, rows);

  // Optional per-trial learning traces with block recovery against the
  // ground truth (only meaningful for the learned-structure algorithm).
  if (!trace_dir.empty()) {
    fs::create_directories(trace_dir);
    for (std::size_t sweep_idx = 0; sweep_idx < spec.sweep.size(); ++sweep_idx) {
      const auto ts = bsdl::detail::trial_settings(spec, spec.sweep[sweep_idx]);
      for (int trial = 0; trial < spec.trials; ++trial) {
        const std::uint64_t gt_seed = bsdl::mix_seed(spec.seed, 4 * sweep_idx + 0, trial);
        const std::uint64_t noise_seed = bsdl::mix_seed(spec.seed, 4 * sweep_idx + 1, trial);
        const std::uint64_t learner_seed = bsdl::mix_seed(spec.seed, 4 * sweep_idx + 2, trial);
        const std::uint64_t aux_seed = bsdl::mix_seed(spec.seed, 4 * sweep_idx + 3, trial);
        const auto gt = bsdl::make_ground_truth(spec, ts.block_sparsity, gt_seed);
        const bsdl::Matrix x = bsdl::add_noise(gt.signals, ts.snr_db, noise_seed);
        std::vector<bsdl::OuterTraceRow> trace;
        std::vector<double> recovered;
        const bsdl::LearnObserver observer =
            [&](const bsdl::OuterTraceRow& row, const bsdl::Matrix& dict,
                const bsdl::BlockStructure& d, const bsdl::Matrix&) {
              trace.push_back(row);
              recovered.push_back(bsdl::recovery_percentage(
                  dict, d, gt.dictionary, gt.structure));
            };
        bsdl::run_trial_algorithm(spec, ts, "bksvd_sac", gt, x, learner_seed,
                                  aux_seed, observer);
        char name[128];
        std::snprintf(name, sizeof(name), "trace_sweep%zu_trial%d.csv",
                      sweep_idx, trial);
        write_learn_trace((fs::path(trace_dir) / name).string(), trace, &recovered);
      }
    }
  }

  std::printf("wrote %s (%zu rows)\n", out_path.c_str(), rows.size());
  return 0;
}

int run_eval(const GlobalOpts& g, const std::string& input,
             const std::string& dict_path, const std::string& theta_path,
             const std::string& blocks_path, const std::string& true_dict_path,
             const std::string& true_blocks_path, bool optimal_matching) {
  const auto fmt = parse_format(g.format);
  const bsdl::Matrix x = bsdl::read_matrix(input, fmt);
  const bsdl::Matrix dict = bsdl::read_matrix(dict_path, fmt);
  const bsdl::Matrix theta = bsdl::read_matrix(theta_path, fmt);
  std::printf("e=%.17g\n", bsdl::representation_error(x, dict, theta));
  if (!blocks_path.empty()) {
    const bsdl::BlockStructure d = bsdl::read_block_structure(blocks_path);
    const long long objective = bsdl::block_sparsity_objective(theta, d);
    std::printf("b_total=%lld\nb_mean=%.17g\n", objective,
                static_cast<double>(objective) / static_cast<double>(x.cols()));
    if (!true_dict_path.empty() && !true_blocks_path.empty()) {
      const bsdl::Matrix true_dict = bsdl::read_matrix(true_dict_path, fmt);
      const bsdl::BlockStructure true_d = bsdl::read_block_structure(true_blocks_path);
      const double p = bsdl::recovery_percentage(
          dict, d, true_dict, true_d,
          optimal_matching ? bsdl::MatchMode::Optimal : bsdl::MatchMode::Greedy);
      std::printf("p=%.17g\n", p);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"block-sparsifying dictionary learning"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "global RNG seed");
  app.add_option("--format", g.format, "matrix file format: csv|bin")
      ->check(CLI::IsMember({"csv", "bin"}));
  app.add_option("--threads", g.threads, "worker threads for coding steps");
  app.add_option("--config", g.config_path, "JSON config file (flags override)");
  app.fallthrough();

  // learn
  std::string learn_input, learn_out = "out", learn_init = "ksvd";
  int learn_k = 2, learn_s = 3, learn_s_low = 0, learn_s_high = 0;
  int learn_atoms = 0, learn_iters = 250, learn_init_iters = 30;
  double learn_tol = 1e-12;
  auto* learn = app.add_subcommand("learn", "learn a block dictionary from signals");
  learn->add_option("--input", learn_input, "signal matrix file")->required();
  learn->add_option("--k", learn_k, "blocks per signal");
  learn->add_option("--s", learn_s, "maximal block size");
  learn->add_option("--s-low", learn_s_low, "lower block size bound (OMP budget k*s_low)");
  learn->add_option("--s-high", learn_s_high, "upper block size bound (overrides --s)");
  learn->add_option("--atoms", learn_atoms, "dictionary size K (default 2*N)");
  learn->add_option("--iters", learn_iters, "outer iterations");
  learn->add_option("--init-iters", learn_init_iters, "K-SVD initialization iterations");
  learn->add_option("--tol", learn_tol, "coder residual tolerance");
  learn->add_option("--init", learn_init, "initialization: ksvd|signals");
  learn->add_option("--out", learn_out, "output directory");

  // code
  std::string code_dict, code_blocks, code_input, code_out = "theta.csv";
  int code_k = 2;
  double code_tol = 1e-12;
  auto* code = app.add_subcommand("code", "sparse-code signals with a fixed dictionary");
  code->add_option("--dict", code_dict, "dictionary file")->required();
  code->add_option("--blocks", code_blocks, "block structure file (omit for plain OMP)");
  code->add_option("--input", code_input, "signal matrix file")->required();
  code->add_option("--k", code_k, "atoms (OMP) or blocks (BOMP) per signal");
  code->add_option("--tol", code_tol, "residual tolerance");
  code->add_option("--out", code_out, "output coefficient file");

  // synth
  int synth_n = 30, synth_atoms = 60, synth_sparsity = 2, synth_l = 600;
  std::string synth_layout = "20x3", synth_snr = "inf", synth_out = "synth";
  auto* synth = app.add_subcommand("synth", "generate a synthetic ground-truth bundle");
  synth->add_option("--n", synth_n, "signal dimension");
  synth->add_option("--k-atoms", synth_atoms, "dictionary size K");
  synth->add_option("--blocks", synth_layout, "block layout, e.g. 20x3 or 12x2+12x3");
  synth->add_option("--sparsity", synth_sparsity, "generating blocks per signal");
  synth->add_option("--l", synth_l, "signal count");
  synth->add_option("--snr", synth_snr, "SNR in dB, or inf for noiseless");
  synth->add_option("--out", synth_out, "output directory");

  // experiment
  std::string exp_id, exp_out = "results.csv", exp_layout, exp_trace_dir;
  std::vector<std::string> exp_snr, exp_algorithms;
  std::vector<double> exp_ksweep, exp_isweep;
  int exp_trials = 0, exp_l = 0, exp_n = 0, exp_atoms = 0, exp_sparsity = 0;
  int exp_s_low = 0, exp_s_high = 0, exp_iters = 0, exp_init_iters = 0;
  int exp_ksvd_nonzeros = 0;
  bool exp_quiet = false;
  auto* exp = app.add_subcommand("experiment", "run a benchmark experiment, write CSV");
  exp->add_option("--id", exp_id,
                  "sac_only|bksvd_vs_bksvd_baseline|full_framework|mixed_blocks|wrong_blocksize")
      ->required();
  exp->add_option("--snr", exp_snr, "SNR sweep values in dB (inf allowed)");
  exp->add_option("--k-sweep", exp_ksweep, "block sparsity sweep values");
  exp->add_option("--iters-sweep", exp_isweep, "iteration count sweep values");
  exp->add_option("--trials", exp_trials, "trials per sweep point");
  exp->add_option("--l", exp_l, "signal count");
  exp->add_option("--n", exp_n, "signal dimension");
  exp->add_option("--k-atoms", exp_atoms, "dictionary size K");
  exp->add_option("--blocks", exp_layout, "true block layout");
  exp->add_option("--sparsity", exp_sparsity, "blocks per signal");
  exp->add_option("--s-low", exp_s_low, "lower block size bound");
  exp->add_option("--s-high", exp_s_high, "upper block size bound");
  exp->add_option("--iters", exp_iters, "learning iterations");
  exp->add_option("--init-iters", exp_init_iters, "K-SVD init iterations");
  exp->add_option("--ksvd-nonzeros", exp_ksvd_nonzeros, "K-SVD baseline coding budget");
  exp->add_option("--algorithms", exp_algorithms, "restrict to these algorithms");
  exp->add_option("--out", exp_out, "results CSV path");
  exp->add_option("--trace-dir", exp_trace_dir, "write per-trial learning traces here");
  exp->add_flag("--quiet", exp_quiet, "suppress progress output");

  // eval
  std::string eval_input, eval_dict, eval_theta, eval_blocks;
  std::string eval_true_dict, eval_true_blocks;
  bool eval_optimal = false;
  auto* eval = app.add_subcommand("eval", "metrics for existing result files");
  eval->add_option("--input", eval_input, "signal matrix file")->required();
  eval->add_option("--dict", eval_dict, "dictionary file")->required();
  eval->add_option("--theta", eval_theta, "coefficient file")->required();
  eval->add_option("--blocks", eval_blocks, "block structure file");
  eval->add_option("--true-dict", eval_true_dict, "ground-truth dictionary");
  eval->add_option("--true-blocks", eval_true_blocks, "ground-truth block structure");
  eval->add_flag("--optimal-matching", eval_optimal,
                 "use optimal assignment instead of greedy matching");

  // Config file defaults are applied before parsing so that explicit flags
  // override them.
  json cfg_json;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        cfg_json = load_config(argv[i + 1]);
      } catch (const bsdl::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
      } catch (const bsdl::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
      }
      break;
    }
  }
  if (!cfg_json.is_null()) {
    try {
      from_config(cfg_json, "", "seed", g.seed);
      from_config(cfg_json, "", "format", g.format);
      from_config(cfg_json, "", "threads", g.threads);
      from_config(cfg_json, "learn", "k", learn_k);
      from_config(cfg_json, "learn", "s", learn_s);
      from_config(cfg_json, "learn", "s_low", learn_s_low);
      from_config(cfg_json, "learn", "s_high", learn_s_high);
      from_config(cfg_json, "learn", "atoms", learn_atoms);
      from_config(cfg_json, "learn", "iters", learn_iters);
      from_config(cfg_json, "learn", "init_iters", learn_init_iters);
      from_config(cfg_json, "learn", "out", learn_out);
      from_config(cfg_json, "code", "k", code_k);
      from_config(cfg_json, "code", "tol", code_tol);
      from_config(cfg_json, "synth", "n", synth_n);
      from_config(cfg_json, "synth", "k_atoms", synth_atoms);
      from_config(cfg_json, "synth", "blocks", synth_layout);
      from_config(cfg_json, "synth", "sparsity", synth_sparsity);
      from_config(cfg_json, "synth", "l", synth_l);
      from_config(cfg_json, "synth", "snr", synth_snr);
      from_config(cfg_json, "experiment", "trials", exp_trials);
      from_config(cfg_json, "experiment", "l", exp_l);
      from_config(cfg_json, "experiment", "iters", exp_iters);
      from_config(cfg_json, "experiment", "out", exp_out);
    } catch (const bsdl::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 3;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  try {
    if (learn->parsed())
      return run_learn(g, cfg_json, learn_input, learn_out, learn_k, learn_s,
                       learn_s_low, learn_s_high, learn_atoms, learn_iters,
                       learn_init_iters, learn_tol, learn_init);
    if (code->parsed())
      return run_code(g, code_dict, code_blocks, code_input, code_out, code_k,
                      code_tol);
    if (synth->parsed())
      return run_synth(g, synth_n, synth_atoms, synth_layout, synth_sparsity,
                       synth_l, synth_snr, synth_out);
    if (exp->parsed())
      return run_experiment_cmd(g, exp_id, exp_snr, exp_ksweep, exp_isweep,
                                exp_trials, exp_l, exp_n, exp_atoms, exp_layout,
                                exp_sparsity, exp_s_low, exp_s_high, exp_iters,
                                exp_init_iters, exp_ksvd_nonzeros, exp_out,
                                exp_trace_dir, exp_algorithms, exp_quiet);
    if (eval->parsed())
      return run_eval(g, eval_input, eval_dict, eval_theta, eval_blocks,
                      eval_true_dict, eval_true_blocks, eval_optimal);
  } catch (const bsdl::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const bsdl::InfeasibleConfig& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const bsdl::DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const bsdl::SizeMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const bsdl::InfeasibleSparsity& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const bsdl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
