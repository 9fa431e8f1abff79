#include <sstream>

#include "washtrace/errors.hpp"
#include "washtrace/pipeline.hpp"

namespace washtrace {

using nlohmann::ordered_json;

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvariantViolation("report invariant violated: " + what);
}

std::size_t sum_values(const ordered_json& obj) {
  std::size_t total = 0;
  for (const auto& [key, value] : obj.items()) total += value.get<std::size_t>();
  return total;
}

}  // namespace

void check_report_consistency(const ordered_json& report) {
  const auto& cleaning = report.at("cleaning");
  require(cleaning.size() == 4, "four cleaning steps");
  for (std::size_t i = 1; i < cleaning.size(); ++i) {
    // Removing accounts can split a component but never creates a new cycle.
    require(cleaning[i].at("nfts").get<std::size_t>() <= cleaning[i - 1].at("nfts").get<std::size_t>(),
            "NFT count grows during cleaning");
    require(cleaning[i].at("accounts").get<std::size_t>() <=
                cleaning[i - 1].at("accounts").get<std::size_t>(),
            "account count grows during cleaning");
  }
  require(cleaning[3].at("nfts").get<std::size_t>() <= cleaning[2].at("nfts").get<std::size_t>(),
          "zero-volume step adds NFTs");

  const auto& det = report.at("detection");
  const auto confirmed = det.at("confirmed").get<std::size_t>();
  const auto candidates = det.at("candidates").get<std::size_t>();
  require(candidates == cleaning[3].at("components").get<std::size_t>(),
          "candidate count differs from cleaned components");
  require(confirmed <= candidates, "more confirmed events than candidates");
  require(det.at("exchange_funded_unconfirmed").get<std::size_t>() <= candidates - confirmed,
          "exchange-funded count exceeds unconfirmed candidates");
  require(sum_values(det.at("overlap_kinds")) == confirmed, "kind overlap cells do not sum up");
  require(sum_values(det.at("overlap_approaches")) == confirmed,
          "approach overlap cells do not sum up");
  for (const auto& [kind, count] : det.at("per_kind").items()) {
    require(count.get<std::size_t>() <= confirmed, "per-kind count exceeds confirmed");
  }

  require(report.at("events").size() == confirmed, "event list length");
  require(sum_values(report.at("patterns")) == confirmed, "pattern histogram total");
  require(sum_values(report.at("accounts_per_event")) == confirmed, "event size histogram total");
  require(report.at("lifetime").at("events").get<std::size_t>() == confirmed, "lifetime sample");

  const auto& profit = report.at("profit");
  std::size_t reward_total = 0;
  for (const auto& [market, table] : profit.at("reward").items()) {
    for (const char* v : {"successful", "failed", "no_claim"}) {
      reward_total += table.at(v).at("events").get<std::size_t>();
    }
  }
  require(reward_total == profit.at("reward_events").get<std::size_t>(),
          "reward verdicts do not partition reward events");
  const auto& resale = profit.at("resale");
  const auto resale_events = resale.at("events").get<std::size_t>();
  require(reward_total + resale_events == confirmed, "profit models do not cover every event");
  const auto resold = resale.at("resold").get<std::size_t>();
  require(resold + resale.at("not_resold").get<std::size_t>() == resale_events, "resale split");
  for (const char* k : {"gross_eth", "net_eth", "net_usd"}) {
    const auto& t = resale.at(k);
    require(t.at("profit").get<std::size_t>() + t.at("loss").get<std::size_t>() == resold,
            std::string("resale outcome split for ") + k);
  }
}

std::string render_text(const ordered_json& report) {
  std::ostringstream os;
  const auto& in = report.at("inputs");
  os << "transfers: " << in.at("transfers").get<std::size_t>()
     << "  transactions: " << in.at("transactions").get<std::size_t>()
     << "  nfts: " << in.at("nfts").get<std::size_t>() << "\n";
  const auto& contracts = in.at("contracts");
  os << "contracts: " << contracts.at("total").get<std::size_t>() << " (compliant "
     << contracts.at("compliant").get<std::size_t>() << ", unverified "
     << contracts.at("unverified").get<std::size_t>() << ", dropped transfers "
     << contracts.at("dropped_transfers").get<std::size_t>() << ")\n\n";

  os << "cleaning:\n";
  for (const auto& step : report.at("cleaning")) {
    os << "  " << step.at("name").get<std::string>() << ": nfts=" << step.at("nfts").get<std::size_t>()
       << " components=" << step.at("components").get<std::size_t>()
       << " accounts=" << step.at("accounts").get<std::size_t>() << "\n";
  }

  const auto& det = report.at("detection");
  os << "\ncandidates: " << det.at("candidates").get<std::size_t>()
     << "  confirmed: " << det.at("confirmed").get<std::size_t>()
     << "  exchange-funded unconfirmed: " << det.at("exchange_funded_unconfirmed").get<std::size_t>()
     << "\n";
  os << "evidence:\n";
  for (const auto& [kind, count] : det.at("per_kind").items()) {
    os << "  " << kind << ": " << count.get<std::size_t>() << "\n";
  }
  os << "approach overlap:\n";
  for (const auto& [cell, count] : det.at("overlap_approaches").items()) {
    os << "  " << cell << ": " << count.get<std::size_t>() << "\n";
  }

  os << "\nvolume (USD): " << report.at("volume").at("total_usd").get<std::string>() << "\n";
  os << "marketplaces:\n";
  for (const auto& row : report.at("marketplaces")) {
    os << "  " << row.at("name").get<std::string>() << ": events=" << row.at("events").get<std::size_t>()
       << " usd=" << row.at("usd_volume").get<std::string>();
    if (!row.at("share_of_total_pct").is_null()) {
      os << " share=" << row.at("share_of_total_pct").get<std::string>() << "%";
    }
    os << "\n";
  }
  os << "patterns:";
  for (const auto& [name, count] : report.at("patterns").items()) {
    if (count.get<std::size_t>() > 0) os << " " << name << "=" << count.get<std::size_t>();
  }
  os << "\n";
  const auto& lt = report.at("lifetime");
  os << "lifetime: <=1d " << lt.at("le_1_day").get<std::size_t>() << ", <=10d "
     << lt.at("le_10_days").get<std::size_t>() << " of " << lt.at("events").get<std::size_t>() << "\n";
  const auto& serial = report.at("serial");
  os << "serial accounts: " << serial.at("serial").get<std::size_t>() << " of "
     << serial.at("accounts").get<std::size_t>() << "\n";

  const auto& profit = report.at("profit");
  os << "\nreward events: " << profit.at("reward_events").get<std::size_t>() << "\n";
  for (const auto& [market, table] : profit.at("reward").items()) {
    os << "  " << market << ": successful=" << table.at("successful").at("events").get<std::size_t>()
       << " failed=" << table.at("failed").at("events").get<std::size_t>()
       << " no_claim=" << table.at("no_claim").at("events").get<std::size_t>() << "\n";
  }
  const auto& resale = profit.at("resale");
  os << "resale: events=" << resale.at("events").get<std::size_t>()
     << " resold=" << resale.at("resold").get<std::size_t>()
     << " profitable(usd)=" << resale.at("net_usd").at("profit").get<std::size_t>() << "\n";
  return os.str();
}

}  // namespace washtrace
