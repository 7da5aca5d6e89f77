#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "dapac/core.hpp"
#include "dapac/rng.hpp"

namespace dapac {

using Token = std::array<uint8_t, 16>;

// One verifiable attribute: a dealer-issued bearer token, registered with
// the server at `position` and no other, so server n learns attribute n only.
struct Credential {
  uint8_t position = 0;  // 1-based server index
  uint16_t value = 0;    // attribute value index in [1, K]
  Token token{};

  friend bool operator==(const Credential&, const Credential&) = default;
};

// Replicated message store: one L-bit message per access policy, held in
// canonical policy order. Every server holds an identical copy.
class MessageDatabase {
public:
  MessageDatabase() = default;
  MessageDatabase(SystemParams params, std::vector<Message> messages);

  const SystemParams& params() const { return params_; }
  const Message& at(const AccessPolicy& policy) const;
  Message& at(const AccessPolicy& policy);
  const std::vector<Message>& messages() const { return messages_; }

private:
  SystemParams params_;
  std::vector<Message> messages_;  // canonical policy order
};

// One chunk-length pad per TypeId, identical on every server. Keying pads by
// canonical TypeId lets both servers of a matched pair select the same pad
// without coordination.
struct CommonRandomness {
  std::map<TypeId, Chunk> pads;

  uint64_t total_bits() const;
};

struct SystemSetup {
  SystemParams params;
  MessageDatabase db;
  CommonRandomness pads;
};

// Build the database (given contents, or uniform draws) and deal one
// independent pad per type. Contents, when given, must cover every policy
// with an exactly L-bit value.
SystemSetup setup(const SystemParams& params,
                  const std::optional<std::map<AccessPolicy, BitString>>& contents,
                  RandomSource& rng);

// token -> (position, value); each server's table only ever holds entries
// for its own position.
using TokenTable = std::map<Token, std::pair<uint8_t, uint16_t>>;

// Runs system initialization and stays around to issue credentials and hand
// each server its slice of the token registry.
class Dealer {
public:
  Dealer(const SystemParams& params,
         const std::optional<std::map<AccessPolicy, BitString>>& contents,
         RandomSource& rng);

  const SystemSetup& system() const { return *system_; }
  std::shared_ptr<const MessageDatabase> db() const {
    return {system_, &system_->db};
  }
  std::shared_ptr<const CommonRandomness> pads() const {
    return {system_, &system_->pads};
  }

  // One credential per position; registers each token with its server only.
  std::vector<Credential> issue_credentials(const AccessPolicy& user_attrs, RandomSource& rng);

  const TokenTable& token_table(int server_index) const;  // 1-based

private:
  std::shared_ptr<const SystemSetup> system_;
  std::vector<TokenTable> tables_;
};

}  // namespace dapac
