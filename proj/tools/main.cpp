// washtrace command-line front end.
//
//   washtrace ingest-check --transfers t.jsonl [--transactions ...]
//   washtrace detect --transfers t.jsonl --transactions x.jsonl --labels l.csv --prices p.csv --out r.json
//   washtrace report --report r.json
//   washtrace synth --out DIR [--seed N] [--nfts N | --mix kind=count,...]
//
// Any long option may also be set from a key=value file given with --config;
// command-line flags win. Exit status: 0 ok, 1 input error, 2 invariant violation.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "washtrace/errors.hpp"
#include "washtrace/pipeline.hpp"
#include "washtrace/synth.hpp"

namespace {

using namespace washtrace;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kInvariantViolation = 2;

struct Args {
  std::string transfers, transactions, labels, prices, contracts, compliance, totals, out;
  std::string epsilon_abs, epsilon_rel;
  std::string report;
  std::string mix;
  bool require_compliance = false;
  unsigned jobs = 1;
  std::uint64_t seed = 1;
  std::size_t nfts = 0;
};

RunConfig to_config(const Args& a) {
  RunConfig c;
  c.transfers = a.transfers;
  c.transactions = a.transactions;
  c.labels = a.labels;
  c.prices = a.prices;
  c.contracts = a.contracts;
  c.compliance = a.compliance;
  c.marketplace_totals = a.totals;
  c.out = a.out;
  c.require_compliance = a.require_compliance;
  c.jobs = a.jobs;
  auto epsilon = [](const std::string& text, const char* flag) -> std::optional<Decimal> {
    if (text.empty()) return std::nullopt;
    try {
      return Decimal::parse(text);
    } catch (const std::invalid_argument&) {
      throw InputError(std::string(flag) + " must be a plain decimal, got '" + text + "'");
    }
  };
  c.epsilon_abs = epsilon(a.epsilon_abs, "--epsilon-abs");
  c.epsilon_rel = epsilon(a.epsilon_rel, "--epsilon-rel");
  return c;
}

void print_warnings(const LoadDiagnostics& d) {
  for (const auto& w : d.warnings) std::cerr << "warning: " << w << "\n";
}

int ingest_check(const Args& a) {
  LoadDiagnostics diag;
  RunConfig config = to_config(a);
  PipelineInputs in = load_inputs(config, &diag);
  print_warnings(diag);
  std::cout << "transfers: " << in.transfers.size() << "\n"
            << "transactions: " << in.txs.records().size() << "\n"
            << "labelled accounts: "
            << in.labels.service_accounts().size() + in.labels.marketplaces().size() +
                   in.labels.reward_distributors().size() + in.labels.treasuries().size()
            << "\n"
            << "prices: " << in.prices.size() << "\n"
            << "known contracts: " << in.contracts.contracts().size() << "\n"
            << "compliance answers: " << (in.compliance ? in.compliance->size() : 0) << "\n"
            << "marketplace totals: " << in.marketplace_totals.size() << "\n";
  return kOk;
}

int detect(const Args& a) {
  LoadDiagnostics diag;
  RunConfig config = to_config(a);
  PipelineResult result = run_pipeline(config, &diag);
  print_warnings(diag);
  if (config.out.empty()) {
    std::cout << dump_report(result.report);
  } else {
    std::cout << render_text(result.report);
  }
  return kOk;
}

int report(const Args& a) {
  nlohmann::ordered_json r;
  if (!a.report.empty()) {
    std::ifstream in(a.report);
    if (!in) throw InputError("cannot open " + a.report);
    try {
      r = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(a.report + ": " + e.what());
    }
    try {
      check_report_consistency(r);
    } catch (const nlohmann::json::exception& e) {
      throw InputError(a.report + ": not a washtrace report: " + e.what());
    }
  } else {
    LoadDiagnostics diag;
    r = run_pipeline(to_config(a), &diag).report;
    print_warnings(diag);
  }
  std::cout << render_text(r);
  return kOk;
}

int synth(const Args& a) {
  if (a.out.empty()) throw InputError("synth needs --out DIR");
  ScenarioMix mix = a.mix.empty() ? default_mix(a.nfts == 0 ? 1000 : a.nfts) : parse_mix(a.mix);
  SynthDataset data = generate_dataset(mix, a.seed);
  write_dataset(data, a.out);
  std::size_t wash = 0;
  for (const auto& s : data.truth) wash += s.wash() ? 1 : 0;
  std::cout << "wrote " << data.truth.size() << " scenarios (" << wash << " wash trades), "
            << data.transfers.size() << " transfers, " << data.transactions.size()
            << " transactions to " << a.out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detects NFT wash trading in ERC-721 transfer histories."};
  app.set_config("--config", "", "key=value file with default option values");
  app.require_subcommand(1);
  app.fallthrough();

  Args a;
  app.add_option("--transfers", a.transfers, "ERC-721 transfers (JSONL)");
  app.add_option("--transactions", a.transactions, "account transactions (JSONL)");
  app.add_option("--labels", a.labels, "labelled accounts (CSV address,category,name)");
  app.add_option("--prices", a.prices, "daily USD prices (CSV asset,date,usd)");
  app.add_option("--contracts", a.contracts, "addresses holding bytecode (one per line)");
  app.add_option("--compliance", a.compliance, "ERC-721 support fixture (CSV contract,supports_erc721)");
  app.add_option("--marketplace-totals", a.totals, "total USD volume per marketplace (CSV)");
  app.add_flag("--require-compliance", a.require_compliance,
               "drop collections whose ERC-721 support cannot be confirmed");
  app.add_option("--epsilon-abs", a.epsilon_abs, "zero-risk absolute tolerance (native units)");
  app.add_option("--epsilon-rel", a.epsilon_rel, "zero-risk tolerance relative to turnover");
  app.add_option("--out", a.out, "report file (detect) or output directory (synth)");
  app.add_option("--jobs", a.jobs, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--seed", a.seed, "synth RNG seed");

  auto* check_cmd = app.add_subcommand("ingest-check", "validate and summarize inputs");
  auto* detect_cmd = app.add_subcommand("detect", "run the detection pipeline and write a JSON report");
  auto* report_cmd = app.add_subcommand("report", "print a readable summary of a report");
  report_cmd->add_option("--report", a.report, "existing JSON report (otherwise runs detection)");
  auto* synth_cmd = app.add_subcommand("synth", "generate a labelled synthetic dataset");
  synth_cmd->add_option("--nfts", a.nfts, "approximate number of NFTs (default mix)");
  synth_cmd->add_option("--mix", a.mix, "explicit scenario counts, e.g. round_trip=5,cycle=5");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (check_cmd->parsed()) return ingest_check(a);
    if (detect_cmd->parsed()) return detect(a);
    if (report_cmd->parsed()) return report(a);
    if (synth_cmd->parsed()) return synth(a);
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariantViolation;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
