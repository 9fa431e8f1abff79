#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "washtrace/errors.hpp"
#include "washtrace/pipeline.hpp"
#include "washtrace/synth.hpp"

using namespace washtrace;

namespace {

const SynthDataset& small_dataset() {
  static const SynthDataset data = generate_dataset(minimum_mix(3, 30, 10), 99);
  return data;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("washtrace_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("report is identical for any worker count") {
  auto in = small_dataset().to_inputs();
  PipelineOptions one;
  std::string reference = dump_report(run_pipeline(in, one).report);
  for (unsigned jobs : {2u, 3u, 8u}) {
    PipelineOptions opts;
    opts.jobs = jobs;
    CHECK(dump_report(run_pipeline(in, opts).report) == reference);
  }
}

TEST_CASE("cleaning tallies shrink monotonically") {
  auto result = run_pipeline(small_dataset().to_inputs(), {});
  REQUIRE(result.cleaning.size() == 4);
  CHECK(result.cleaning[0].name == "scc");
  for (std::size_t i = 1; i < 4; ++i) {
    CHECK(result.cleaning[i].nfts <= result.cleaning[i - 1].nfts);
    CHECK(result.cleaning[i].accounts <= result.cleaning[i - 1].accounts);
  }
  CHECK(result.cleaning[3].components == result.confirmation.summary.candidates);
}

TEST_CASE("compliance handling") {
  const auto& data = small_dataset();
  auto with = run_pipeline(data.to_inputs(), {});
  CHECK(with.report["inputs"]["contracts"]["non_compliant"] == 1);
  CHECK(with.report["inputs"]["contracts"]["dropped_transfers"].get<std::size_t>() > 0);

  auto no_fixture = data.to_inputs();
  no_fixture.compliance.reset();
  auto without = run_pipeline(no_fixture, {});
  // The non-compliant collection carries planted round trips that now surface.
  CHECK(without.confirmation.summary.confirmed > with.confirmation.summary.confirmed);
  CHECK(without.report["inputs"]["contracts"]["unverified"] ==
        without.report["inputs"]["contracts"]["total"]);

  PipelineOptions strict;
  strict.require_compliance = true;
  CHECK_THROWS_AS(run_pipeline(no_fixture, strict), ClientUnavailable);

  // Unknown contracts are kept unless compliance is required.
  auto partial = data.to_inputs();
  partial.compliance = FixtureInterfaceClient{};
  auto lenient = run_pipeline(partial, {});
  CHECK(lenient.confirmation.summary.confirmed == without.confirmation.summary.confirmed);
  auto dropped = run_pipeline(partial, strict);
  CHECK(dropped.confirmation.summary.confirmed == 0);
}

TEST_CASE("empty input gives an all-zero report") {
  PipelineInputs in;
  auto r = run_pipeline(in, {}).report;
  CHECK(r["detection"]["candidates"] == 0);
  CHECK(r["detection"]["confirmed"] == 0);
  CHECK(r["events"].empty());
  CHECK(r["volume"]["total_usd"] == "0.00");
}

TEST_CASE("missing prices abort the run") {
  auto in = small_dataset().to_inputs();
  in.prices = PriceTable{};
  CHECK_THROWS_AS(run_pipeline(in, {}), MissingPrice);
}

TEST_CASE("consistency checks catch tampered reports") {
  auto r = run_pipeline(small_dataset().to_inputs(), {}).report;
  CHECK_NOTHROW(check_report_consistency(r));
  auto bad = r;
  bad["detection"]["confirmed"] = bad["detection"]["confirmed"].get<std::size_t>() + 1;
  CHECK_THROWS_AS(check_report_consistency(bad), InvariantViolation);
  bad = r;
  bad["cleaning"][2]["nfts"] = bad["cleaning"][1]["nfts"].get<std::size_t>() + 1;
  CHECK_THROWS_AS(check_report_consistency(bad), InvariantViolation);
  bad = r;
  bad["patterns"]["P1"] = bad["patterns"]["P1"].get<std::size_t>() + 1;
  CHECK_THROWS_AS(check_report_consistency(bad), InvariantViolation);
  CHECK_FALSE(render_text(r).empty());
}

TEST_CASE("file round trip through the loaders") {
  auto dir = scratch("roundtrip");
  write_dataset(small_dataset(), dir);
  RunConfig config = dataset_config(dir);
  config.out = dir / "report.json";
  LoadDiagnostics diag;
  auto from_files = run_pipeline(config, &diag);
  CHECK(diag.warnings.empty());
  auto in_memory = run_pipeline(small_dataset().to_inputs(), {});
  CHECK(dump_report(from_files.report) == dump_report(in_memory.report));
  std::ifstream written(config.out);
  std::string text((std::istreambuf_iterator<char>(written)), std::istreambuf_iterator<char>());
  CHECK(text == dump_report(in_memory.report));
  std::filesystem::remove_all(dir);
}

TEST_CASE("configuration validation") {
  RunConfig c;
  CHECK_THROWS_AS(c.validate(), InputError);
  c.transfers = "/nonexistent/transfers.jsonl";
  CHECK_THROWS_AS(c.validate(), InputError);
  auto dir = scratch("config");
  std::ofstream(dir / "t.jsonl").close();
  c.transfers = dir / "t.jsonl";
  CHECK_NOTHROW(c.validate());
  c.epsilon_abs = Decimal::parse("-1");
  CHECK_THROWS_AS(c.validate(), InputError);
  c.epsilon_abs.reset();
  c.require_compliance = true;
  CHECK_THROWS_AS(c.validate(), ClientUnavailable);
  std::filesystem::remove_all(dir);
}
