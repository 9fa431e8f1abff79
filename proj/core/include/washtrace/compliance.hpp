#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "washtrace/types.hpp"

namespace washtrace {

inline constexpr std::uint32_t kErc165InterfaceId = 0x01ffc9a7;
inline constexpr std::uint32_t kErc721InterfaceId = 0x80ac58cd;

enum class InterfaceAnswer { Supported, Unsupported, Reverted, Unknown };

/// Source of ERC-165 supportsInterface answers: a node client or a recorded fixture.
class InterfaceQueryClient {
 public:
  virtual ~InterfaceQueryClient() = default;
  virtual InterfaceAnswer supports_interface(const Address& contract,
                                             std::uint32_t interface_id) const = 0;
};

class FixtureInterfaceClient final : public InterfaceQueryClient {
 public:
  void set(const Address& contract, std::uint32_t interface_id, bool supported);
  void set_reverts(const Address& contract);

  InterfaceAnswer supports_interface(const Address& contract,
                                     std::uint32_t interface_id) const override;

  std::size_t size() const { return answers_.size() + reverting_.size(); }

 private:
  std::map<std::pair<Address, std::uint32_t>, bool> answers_;
  std::set<Address> reverting_;
};

/// Reads `contract,supports_erc721` rows (true/false).
FixtureInterfaceClient read_compliance_fixture(std::istream& in, const std::string& source);
FixtureInterfaceClient load_compliance_fixture(const std::filesystem::path& path);

/// True iff the contract reports support for the ERC-721 interface id. Reverts
/// and explicit "no" answer false. Throws ClientUnavailable when there is no
/// client or the client has no answer for the contract.
bool check_erc721_compliance(const Address& contract, const InterfaceQueryClient* client);

}  // namespace washtrace
