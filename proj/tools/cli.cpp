#include "cli.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spe/analysis.hpp"
#include "spe/chain.hpp"
#include "spe/estimators.hpp"
#include "spe/lattices.hpp"
#include "spe/model.hpp"
#include "spe/observables.hpp"
#include "spe/oracle.hpp"

#ifndef SPE_VERSION
#define SPE_VERSION "0.0.0"
#endif

namespace spe::cli {

using json = nlohmann::ordered_json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return hex.str();
}

namespace {

// Raised for argument combinations CLI11 cannot express; maps to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string model_path;
  std::string format = "json";
  std::string out_path;

  // Sampling.
  std::string b_spec;
  std::uint64_t steps = 0;
  std::uint64_t burn_in = 0;
  bool burn_in_set = false;
  std::uint64_t thin = 1;
  std::uint64_t seed = 0;
  double alpha = 2.0;
  bool lazy = false;
  std::size_t chains = 1;
  bool neel = false;

  // Oracle and analysis.
  bool sector_lm = false;
  double epsilon = 0.0;
  std::size_t n = 0;
  std::size_t configs = 10'000;
  std::string graph = "cycle";
};

struct Loaded {
  BipartiteModel model;
  std::string digest;
};

Loaded load(const Options& opt) {
  if (opt.model_path.empty()) throw UsageError("--model is required");
  std::ifstream in(opt.model_path, std::ios::binary);
  if (!in) throw ModelParseError(opt.model_path + ": cannot open model file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  Loaded loaded;
  try {
    loaded.model = parse_model(text);
  } catch (const ModelParseError& e) {
    throw ModelParseError(opt.model_path + ": " + e.what());
  }
  loaded.digest = "sha256:" + sha256_hex(text);
  return loaded;
}

std::size_t resolve_b(const Options& opt, const BipartiteModel& model) {
  if (opt.b_spec.empty()) throw UsageError("--B is required");
  constexpr std::string_view kAuto = "auto:";
  try {
    if (opt.b_spec.starts_with(kAuto)) {
      const double eps = std::stod(opt.b_spec.substr(kAuto.size()));
      return required_b(model, eps);
    }
    std::size_t used = 0;
    const long long b = std::stoll(opt.b_spec, &used);
    if (used != opt.b_spec.size() || b < 0) throw std::invalid_argument("bad B");
    return static_cast<std::size_t>(b);
  } catch (const std::logic_error&) {
    throw UsageError("--B expects a non-negative integer or auto:<epsilon>, got '" + opt.b_spec + "'");
  }
}

json number(double value) {
  if (std::isfinite(value)) return value;
  return nullptr;
}

json slot_json(const OperatorSlot& slot) { return to_string(slot); }

json config_json(const Configuration& config) { return serialize(config); }

json estimate_json(const EstimateResult& r) {
  return {{"mean", number(r.mean)},
          {"stderr", number(r.std_error)},
          {"batches", r.batches},
          {"autocorrelation", number(r.autocorrelation)}};
}

// Output ---------------------------------------------------------------------

void flatten(const json& value, const std::string& prefix, std::vector<std::string>& keys,
             std::vector<std::string>& cells) {
  if (value.is_object()) {
    for (const auto& [k, v] : value.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, keys, cells);
  } else if (value.is_array()) {
    for (std::size_t i = 0; i < value.size(); ++i) flatten(value[i], prefix + "." + std::to_string(i), keys, cells);
  } else {
    keys.push_back(prefix);
    cells.push_back(value.is_string() ? value.get<std::string>() : value.dump());
  }
}

std::string csv_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_cell(cells[i]);
  os << "\n";
}

class Emitter {
 public:
  Emitter(const Options& opt, std::ostream& out) : format_(opt.format) {
    if (!opt.out_path.empty()) {
      file_.open(opt.out_path, std::ios::binary | std::ios::trunc);
      if (!file_) throw std::runtime_error(opt.out_path + ": cannot open for writing");
      os_ = &file_;
    } else {
      os_ = &out;
    }
  }

  std::ostream& stream() { return *os_; }
  const std::string& format() const { return format_; }

  /// Whole report: JSON pretty-printed, JSON-lines on one line, CSV as a
  /// header row plus one row of the flattened results.
  void report(const json& doc) {
    if (format_ == "json") {
      *os_ << doc.dump(2) << "\n";
    } else if (format_ == "jsonl") {
      *os_ << doc.dump() << "\n";
    } else {
      std::vector<std::string> keys, cells;
      flatten(doc.at("results"), "", keys, cells);
      write_csv_row(*os_, keys);
      write_csv_row(*os_, cells);
    }
    os_->flush();
  }

 private:
  std::string format_;
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

class Report {
 public:
  explicit Report(const std::vector<std::string>& args) : start_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::vector<std::string>(args.begin() + (args.empty() ? 0 : 1), args.end());
    doc_["tool_version"] = SPE_VERSION;
    doc_["model_digest"] = nullptr;
    doc_["seed"] = nullptr;
  }

  void digest(const std::string& d) { doc_["model_digest"] = d; }
  void seed(std::uint64_t s) { doc_["seed"] = s; }

  json finish(json results) {
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json doc = doc_;
    doc["timing"] = {{"wall_seconds", seconds}};
    doc["results"] = std::move(results);
    return doc;
  }

 private:
  json doc_;
  std::chrono::steady_clock::time_point start_;
};

// Subcommands ----------------------------------------------------------------

int cmd_validate(const Options& opt, Report& report, Emitter& emit) {
  const Loaded loaded = load(opt);
  report.digest(loaded.digest);
  const BipartiteModel& model = loaded.model;
  const auto violations = validate(model);
  json list = json::array();
  for (const auto& v : violations) list.push_back({{"kind", std::string(to_string(v.kind))}, {"message", v.message}});
  json results = {{"valid", violations.empty()},
                  {"n_sites", model.n_sites()},
                  {"size_a", model.size_a()},
                  {"size_b", model.size_b()},
                  {"sublattices_swapped", model.sublattices_swapped()},
                  {"violations", list}};
  if (violations.empty()) {
    const OperatorAlphabet alphabet = operator_alphabet(model);
    json slots = json::array();
    for (const auto& s : alphabet) slots.push_back({{"slot", slot_json(s)}, {"weight", s.weight}});
    results["alphabet"] = slots;
    results["norm_bound"] = norm_bound(model);
  }
  emit.report(report.finish(results));
  return violations.empty() ? kExitOk : kExitFailure;
}

ChainParams chain_params(const Options& opt, std::size_t B) {
  ChainParams p;
  p.B = B;
  p.steps = opt.steps;
  p.burn_in = opt.burn_in_set ? opt.burn_in : opt.steps / 10;
  p.thinning = opt.thin;
  p.seed = opt.seed;
  p.alpha = opt.alpha;
  p.lazy = opt.lazy;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return p;
}

json params_json(const ChainParams& p, std::size_t chains) {
  return {{"B", p.B},         {"steps", p.steps}, {"burn_in", p.burn_in}, {"thin", p.thinning},
          {"alpha", p.alpha}, {"lazy", p.lazy},   {"chains", chains}};
}

int cmd_sample(const Options& opt, Report& report, Emitter& emit) {
  const Loaded loaded = load(opt);
  report.digest(loaded.digest);
  report.seed(opt.seed);
  require_valid(loaded.model);
  const ChainParams params = chain_params(opt, resolve_b(opt, loaded.model));
  std::vector<LoopObservable> observables = energy_observables(loaded.model);
  const SampleSet set = collect(loaded.model, params, observables, opt.chains);

  json obs = json::array();
  for (const auto& o : set.observables) {
    obs.push_back({{"name", o.name}, {"slot", slot_json(o.slot)}, {"scale", o.scale}, {"offset", o.offset}});
  }
  json summary = {{"steps", set.summary.steps},
                  {"accepted", set.summary.accepted},
                  {"records", set.summary.records},
                  {"acceptance_rate", set.summary.acceptance_rate}};
  auto record_json = [&](const SampleRecord& r) {
    json m = json::object();
    for (std::size_t k = 0; k < set.observables.size(); ++k) m[set.observables[k].name] = r.measurements[k];
    return json{{"step", r.step},
                {"chain", r.chain},
                {"loop_count", r.loop_count},
                {"acceptance", r.acceptance_rate},
                {"measurements", m}};
  };

  std::ostream& os = emit.stream();
  if (emit.format() == "csv") {
    std::vector<std::string> header = {"step", "loop_count", "acceptance"};
    for (const auto& o : set.observables) header.push_back(o.name);
    if (opt.chains > 1) header.push_back("chain");
    write_csv_row(os, header);
    std::ostringstream line;
    line.precision(std::numeric_limits<double>::max_digits10);
    for (const auto& r : set.records) {
      line.str("");
      line << r.step << "," << r.loop_count << "," << r.acceptance_rate;
      for (double m : r.measurements) line << "," << m;
      if (opt.chains > 1) line << "," << r.chain;
      os << line.str() << "\n";
    }
  } else if (emit.format() == "jsonl") {
    json header = report.finish({{"params", params_json(params, opt.chains)}, {"observables", obs}, {"summary", summary}});
    os << header.dump() << "\n";
    for (const auto& r : set.records) os << record_json(r).dump() << "\n";
  } else {
    json records = json::array();
    for (const auto& r : set.records) records.push_back(record_json(r));
    emit.report(report.finish({{"params", params_json(params, opt.chains)},
                               {"observables", obs},
                               {"summary", summary},
                               {"records", records}}));
  }
  os.flush();
  return kExitOk;
}

int cmd_energy(const Options& opt, Report& report, Emitter& emit) {
  const Loaded loaded = load(opt);
  report.digest(loaded.digest);
  report.seed(opt.seed);
  require_valid(loaded.model);
  const BipartiteModel& model = loaded.model;
  if (opt.alpha != 2.0) throw UsageError("energy estimation needs --alpha 2");
  const ChainParams params = chain_params(opt, resolve_b(opt, model));
  std::vector<LoopObservable> observables = energy_observables(model);
  if (opt.neel) {
    const auto neel = neel_observables(model.n_sites());
    observables.insert(observables.end(), neel.begin(), neel.end());
  }
  const SampleSet set = collect(model, params, observables, opt.chains);
  const EnergyEstimate e = estimate_energy(model, set);

  json terms = json::array();
  for (const auto& t : e.terms) {
    terms.push_back({{"name", t.name},
                     {"coefficient", t.coefficient},
                     {"offset", t.offset},
                     {"insertion", estimate_json(t.insertion)},
                     {"contribution", number(t.coefficient * t.insertion.mean + t.offset)}});
  }
  json results = {{"estimate", number(e.total.mean)},
                  {"stderr", number(e.total.std_error)},
                  {"batches", e.total.batches},
                  {"autocorrelation", number(e.total.autocorrelation)},
                  {"B", params.B},
                  {"steps", params.steps},
                  {"burn_in", params.burn_in},
                  {"thin", params.thinning},
                  {"chains", opt.chains},
                  {"records", set.summary.records},
                  {"acceptance_rate", set.summary.acceptance_rate},
                  {"norm_bound", norm_bound(model)},
                  {"terms", terms}};
  if (opt.neel) results["neel"] = estimate_json(estimate_neel(model, set));
  emit.report(report.finish(results));
  return kExitOk;
}

int cmd_oracle_ground(const Options& opt, Report& report, Emitter& emit) {
  const Loaded loaded = load(opt);
  report.digest(loaded.digest);
  require_valid(loaded.model);
  json results;
  if (opt.sector_lm) {
    results = {{"method", "lieb-mattis-sector"},
               {"energy", oracle::lieb_mattis_ground_energy(loaded.model)},
               {"sector_dimension", oracle::lieb_mattis_sector_dimension(loaded.model)}};
  } else {
    const oracle::GroundState g = oracle::exact_ground_energy(loaded.model);
    results = {{"method", "power-iteration"}, {"energy", g.energy}, {"iterations", g.iterations}};
  }
  results["n_sites"] = loaded.model.n_sites();
  emit.report(report.finish(results));
  return kExitOk;
}

int cmd_oracle_leakage(const Options& opt, Report& report, Emitter& emit) {
  const Loaded loaded = load(opt);
  report.digest(loaded.digest);
  require_valid(loaded.model);
  if (!(opt.epsilon > 0.0)) throw UsageError("--epsilon must be positive");
  const std::size_t B = resolve_b(opt, loaded.model);
  const oracle::LeakageReport r = oracle::low_energy_leakage(loaded.model, B, opt.epsilon);
  emit.report(report.finish({{"B", B},
                             {"epsilon", opt.epsilon},
                             {"leakage", r.leakage},
                             {"ground_energy", r.ground_energy},
                             {"lambda0", r.lambda0},
                             {"overlap", r.overlap},
                             {"bound", r.bound}}));
  return kExitOk;
}

json spectral_json(const analysis::SpectralReport& s) {
  return {{"n_states", s.n_states},   {"degenerate", s.degenerate}, {"lambda_2", s.lambda_2},
          {"lambda_min", s.lambda_min}, {"lambda_star", s.lambda_star}, {"t_rel", s.t_rel},
          {"pi_min", s.pi_min},       {"t_mix_upper", s.t_mix_upper}};
}

json potts_json(const analysis::PottsReport& r) {
  return {{"n_sites", r.n_sites},
          {"B", r.B},
          {"z_loop", r.z_loop},
          {"z_potts", r.z_potts},
          {"relative_error", r.relative_error}};
}

json counterexample_json(const analysis::CounterexampleReport& r) {
  return {{"graph", r.graph},
          {"n_sites", r.n_sites},
          {"B", r.B},
          {"size_a", r.size_a},
          {"t", r.t},
          {"x", config_json(r.x)},
          {"y", config_json(r.y)},
          {"z", config_json(r.z)},
          {"eta", config_json(r.eta)},
          {"loops_x", r.loops_x},
          {"loops_y", r.loops_y},
          {"loops_z", r.loops_z},
          {"loops_eta", r.loops_eta},
          {"ratio", r.ratio},
          {"encoding_bound", r.encoding_bound},
          {"exceeds_bound", r.ratio > r.encoding_bound}};
}

std::size_t require_n(const Options& opt) {
  if (opt.n == 0) throw UsageError("--N is required");
  return opt.n;
}

int cmd_potts(const Options& opt, Report& report, Emitter& emit) {
  const std::size_t n = require_n(opt);
  if (opt.b_spec.empty()) throw UsageError("--B is required");
  const std::size_t B = resolve_b(opt, lattices::star(n));
  emit.report(report.finish(potts_json(analysis::potts_cross_check(n, B, opt.alpha))));
  return kExitOk;
}

int cmd_counterexample(const Options& opt, Report& report, Emitter& emit) {
  const std::size_t n = require_n(opt);
  std::size_t B = 0;
  if (!opt.b_spec.empty()) {
    B = opt.graph == "star" ? resolve_b(opt, lattices::star(n)) : resolve_b(opt, lattices::cycle(n));
  }
  const auto r = opt.graph == "star" ? analysis::star_counterexample(n, B) : analysis::cycle_counterexample(n, B);
  emit.report(report.finish(counterexample_json(r)));
  return kExitOk;
}

int cmd_analyze(const std::string& what, const Options& opt, Report& report, Emitter& emit) {
  if (what == "potts") return cmd_potts(opt, report, emit);
  if (what == "counterexample") return cmd_counterexample(opt, report, emit);

  const Loaded loaded = load(opt);
  report.digest(loaded.digest);
  require_valid(loaded.model);
  const BipartiteModel& model = loaded.model;
  const std::size_t B = resolve_b(opt, model);
  json results = {{"B", B}, {"alpha", opt.alpha}};

  if (what == "gap") {
    const analysis::ChainMatrix chain = analysis::build_chain_matrix(model, B, opt.alpha, opt.lazy);
    const analysis::ExactnessReport ex = analysis::check_exactness(chain);
    results["lazy"] = opt.lazy;
    results["spectral"] = spectral_json(analysis::spectral_report(chain));
    results["exactness"] = {{"n_states", ex.n_states},
                            {"max_row_error", ex.max_row_error},
                            {"max_balance_error", ex.max_balance_error},
                            {"max_stationarity_error", ex.max_stationarity_error},
                            {"rational_checked", ex.rational_checked},
                            {"rational_rows", ex.rational_rows},
                            {"rational_balance", ex.rational_balance},
                            {"rational_stationary", ex.rational_stationary}};
  } else if (what == "congestion") {
    const analysis::CongestionReport c = analysis::congestion(model, B, opt.alpha);
    results.update({{"degenerate", c.degenerate},
                    {"phi", c.phi},
                    {"edges", c.edges},
                    {"t_rel", c.t_rel},
                    {"t_rel_le_phi", c.degenerate || c.t_rel <= c.phi},
                    {"p_min", c.p_min},
                    {"encoding_max", c.encoding_max},
                    {"direct_bound", c.direct_bound},
                    {"closed_form_bound", c.closed_form_bound},
                    {"t_mix_theorem", c.t_mix_theorem},
                    {"t_mix_upper", c.t_mix_upper}});
  } else if (what == "encoding") {
    const analysis::EncodingReport e = analysis::encoding_inequality_max(model, B, opt.alpha);
    results.update({{"max_ratio", e.max_ratio},
                    {"bound", e.bound},
                    {"within_bound", e.max_ratio <= e.bound},
                    {"argmax_x", config_json(e.argmax_x)},
                    {"argmax_y", config_json(e.argmax_y)},
                    {"argmax_t", e.argmax_t},
                    {"tuples", e.tuples},
                    {"decode_failures", e.decode_failures},
                    {"collisions", e.collisions}});
  } else if (what == "topology") {
    report.seed(opt.seed);
    Rng rng(opt.seed);
    const analysis::TopologyReport t = analysis::topology_sweep(model, 2 * B, opt.configs, rng);
    results.update({{"configs", t.configs},
                    {"fact1_violations", t.fact1_violations},
                    {"fact2_violations", t.fact2_violations},
                    {"cut_violations", t.cut_violations},
                    {"max_spread", t.max_spread},
                    {"spread_bound", 2 * model.size_a() - 1},
                    {"examples", t.examples}});
  } else {
    throw UsageError("unknown analysis '" + what + "'");
  }
  emit.report(report.finish(results));
  return kExitOk;
}

// Argument wiring ------------------------------------------------------------

void add_output(CLI::App* app, Options& opt) {
  app->add_option("--format", opt.format, "json (default), csv or jsonl")->check(CLI::IsMember({"json", "csv", "jsonl"}));
  app->add_option("--out", opt.out_path, "Write the report to this file instead of stdout");
}

void add_model(CLI::App* app, Options& opt) { app->add_option("--model", opt.model_path, "Model JSON file"); }

void add_chain(CLI::App* app, Options& opt) {
  app->add_option("--B", opt.b_spec, "Half sequence length, or auto:<epsilon>")->required();
  app->add_option("--steps", opt.steps, "Metropolis steps per chain")->required();
  app->add_option_function<std::uint64_t>(
      "--burn-in",
      [&opt](const std::uint64_t& v) {
        opt.burn_in = v;
        opt.burn_in_set = true;
      },
      "Discarded initial steps (default steps/10)");
  app->add_option("--thin", opt.thin, "Record every k-th state")->check(CLI::PositiveNumber);
  app->add_option("--seed", opt.seed, "64-bit seed")->required();
  app->add_option("--chains", opt.chains, "Independent chains")->check(CLI::PositiveNumber);
  app->add_option("--alpha", opt.alpha, "Loop fugacity")->check(CLI::PositiveNumber);
  app->add_flag("--lazy", opt.lazy, "Use the lazy chain (I + P)/2");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  std::string analysis_kind;

  CLI::App app{"Stochastic power expansion loop QMC for bipartite Heisenberg models", "spe"};
  app.set_version_flag("--version", SPE_VERSION);
  app.require_subcommand(1);

  auto* validate_cmd = app.add_subcommand("validate", "Check a model file");
  add_model(validate_cmd, opt);
  add_output(validate_cmd, opt);

  auto* sample_cmd = app.add_subcommand("sample", "Run the Metropolis chain and emit the record stream");
  add_model(sample_cmd, opt);
  add_chain(sample_cmd, opt);
  add_output(sample_cmd, opt);

  auto* energy_cmd = app.add_subcommand("energy", "Estimate the ground energy");
  add_model(energy_cmd, opt);
  add_chain(energy_cmd, opt);
  energy_cmd->add_flag("--neel", opt.neel, "Also estimate the staggered magnetisation");
  add_output(energy_cmd, opt);

  auto* oracle_cmd = app.add_subcommand("oracle", "Exact reference values");
  oracle_cmd->require_subcommand(1);
  auto* ground_cmd = oracle_cmd->add_subcommand("ground-energy", "Exact ground energy");
  add_model(ground_cmd, opt);
  ground_cmd->add_flag("--sector-lm", opt.sector_lm, "Restrict to the Lieb-Mattis Hamming-weight sector");
  add_output(ground_cmd, opt);
  auto* leakage_cmd = oracle_cmd->add_subcommand("leakage", "Weight of |M_B> above E0 + epsilon");
  add_model(leakage_cmd, opt);
  leakage_cmd->add_option("--B", opt.b_spec, "Half sequence length, or auto:<epsilon>")->required();
  leakage_cmd->add_option("--epsilon", opt.epsilon, "Energy window")->required();
  add_output(leakage_cmd, opt);

  auto* analyze_cmd = app.add_subcommand("analyze", "Exact Markov-chain analysis on enumerable instances");
  analyze_cmd->add_option("kind", analysis_kind, "Analysis to run")
      ->required()
      ->check(CLI::IsMember({"gap", "congestion", "encoding", "topology", "potts", "counterexample"}));
  add_model(analyze_cmd, opt);
  analyze_cmd->add_option("--B", opt.b_spec, "Half sequence length");
  analyze_cmd->add_option("--alpha", opt.alpha, "Loop fugacity")->check(CLI::PositiveNumber);
  analyze_cmd->add_flag("--lazy", opt.lazy, "gap: analyse the lazy chain");
  analyze_cmd->add_option("--N", opt.n, "potts/counterexample: number of sites");
  analyze_cmd->add_option("--graph", opt.graph, "counterexample: cycle or star")
      ->check(CLI::IsMember({"cycle", "star"}));
  analyze_cmd->add_option("--configs", opt.configs, "topology: random configurations");
  analyze_cmd->add_option("--seed", opt.seed, "topology: 64-bit seed");
  add_output(analyze_cmd, opt);

  auto* potts_cmd = app.add_subcommand("potts", "Star-graph loop sum against the Potts transfer matrix");
  potts_cmd->add_option("--N", opt.n, "Number of star sites")->required();
  potts_cmd->add_option("--B", opt.b_spec, "Half sequence length")->required();
  potts_cmd->add_option("--alpha", opt.alpha, "Loop fugacity")->check(CLI::PositiveNumber);
  add_output(potts_cmd, opt);

  auto* counter_cmd = app.add_subcommand("counterexample", "Encoding ratio of the cycle counterexample");
  counter_cmd->add_option("--N", opt.n, "Number of sites")->required();
  counter_cmd->add_option("--B", opt.b_spec, "Half sequence length (default N)");
  counter_cmd->add_option("--graph", opt.graph, "cycle or star")->check(CLI::IsMember({"cycle", "star"}));
  add_output(counter_cmd, opt);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help or --version.
      if (dynamic_cast<const CLI::CallForVersion*>(&e)) {
        out << e.what() << "\n";
      } else {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().back()->help());
      }
      return kExitOk;
    }
    err << "spe: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    Report report(args);
    Emitter emit(opt, out);
    if (*validate_cmd) return cmd_validate(opt, report, emit);
    if (*sample_cmd) return cmd_sample(opt, report, emit);
    if (*energy_cmd) return cmd_energy(opt, report, emit);
    if (*ground_cmd) return cmd_oracle_ground(opt, report, emit);
    if (*leakage_cmd) return cmd_oracle_leakage(opt, report, emit);
    if (*analyze_cmd) return cmd_analyze(analysis_kind, opt, report, emit);
    if (*potts_cmd) return cmd_potts(opt, report, emit);
    if (*counter_cmd) return cmd_counterexample(opt, report, emit);
    err << "spe: no command\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "spe: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidModel& e) {
    err << "spe: invalid model\n";
    for (const auto& v : e.violations()) err << "  " << to_string(v.kind) << ": " << v.message << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "spe: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace spe::cli
