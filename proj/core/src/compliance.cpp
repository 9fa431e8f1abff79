#include "washtrace/compliance.hpp"

#include <fstream>
#include <istream>

#include "washtrace/errors.hpp"
#include "washtrace/ingest.hpp"

namespace washtrace {

void FixtureInterfaceClient::set(const Address& contract, std::uint32_t interface_id,
                                 bool supported) {
  answers_[{contract, interface_id}] = supported;
}

void FixtureInterfaceClient::set_reverts(const Address& contract) { reverting_.insert(contract); }

InterfaceAnswer FixtureInterfaceClient::supports_interface(const Address& contract,
                                                           std::uint32_t interface_id) const {
  if (reverting_.count(contract)) return InterfaceAnswer::Reverted;
  auto it = answers_.find({contract, interface_id});
  if (it != answers_.end()) {
    return it->second ? InterfaceAnswer::Supported : InterfaceAnswer::Unsupported;
  }
  // A recorded contract answers "no" for any interface it was not recorded with.
  auto lower = answers_.lower_bound({contract, 0});
  if (lower != answers_.end() && lower->first.first == contract) return InterfaceAnswer::Unsupported;
  return InterfaceAnswer::Unknown;
}

FixtureInterfaceClient read_compliance_fixture(std::istream& in, const std::string& source) {
  FixtureInterfaceClient client;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    auto cells = split_csv_line(line);
    if (line_no == 1 && !cells.empty() && cells[0] == "contract") continue;
    if (cells.size() != 2) throw SchemaError(source, line_no, "expected 2 columns");
    try {
      Address contract = Address::parse(cells[0]);
      if (cells[1] == "true") {
        client.set(contract, kErc721InterfaceId, true);
      } else if (cells[1] == "false") {
        client.set(contract, kErc721InterfaceId, false);
      } else {
        throw std::invalid_argument("supports_erc721 must be true or false");
      }
    } catch (const std::invalid_argument& e) {
      throw SchemaError(source, line_no, e.what());
    }
  }
  return client;
}

FixtureInterfaceClient load_compliance_fixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return read_compliance_fixture(in, path.string());
}

bool check_erc721_compliance(const Address& contract, const InterfaceQueryClient* client) {
  if (client == nullptr) throw ClientUnavailable("no interface query client configured");
  switch (client->supports_interface(contract, kErc721InterfaceId)) {
    case InterfaceAnswer::Supported: return true;
    case InterfaceAnswer::Unsupported:
    case InterfaceAnswer::Reverted: return false;
    case InterfaceAnswer::Unknown: break;
  }
  throw ClientUnavailable("no supportsInterface answer for " + contract.hex());
}

}  // namespace washtrace
