#include "dapac/dealer.hpp"

namespace dapac {

MessageDatabase::MessageDatabase(SystemParams params, std::vector<Message> messages)
    : params_(params), messages_(std::move(messages)) {
  params_.validate();
  if (messages_.size() != params_.n_policies())
    throw Error("database must hold one message per policy");
  for (const Message& m : messages_)
    if (m.size() != params_.msg_len_bits) throw Error("database message length mismatch");
}

const Message& MessageDatabase::at(const AccessPolicy& policy) const {
  return messages_[policy_rank(policy, params_)];
}

Message& MessageDatabase::at(const AccessPolicy& policy) {
  return messages_[policy_rank(policy, params_)];
}

uint64_t CommonRandomness::total_bits() const {
  uint64_t total = 0;
  for (const auto& [type, pad] : pads) total += pad.size();
  return total;
}

SystemSetup setup(const SystemParams& params,
                  const std::optional<std::map<AccessPolicy, BitString>>& contents,
                  RandomSource& rng) {
  params.validate();

  std::vector<Message> messages;
  messages.reserve(params.n_policies());
  if (contents) {
    if (contents->size() != params.n_policies())
      throw Error("contents must cover every policy exactly once");
    for (const AccessPolicy& policy : enumerate_policies(params)) {
      auto it = contents->find(policy);
      if (it == contents->end()) throw Error("contents missing a policy");
      if (it->second.size() != params.msg_len_bits)
        throw Error("contents entry has wrong length");
      messages.push_back(it->second);
    }
  } else {
    for (uint64_t i = 0; i < params.n_policies(); ++i)
      messages.push_back(rng.bits(params.msg_len_bits));
  }

  CommonRandomness pads;
  for (const TypeId& type : enumerate_types(params))
    pads.pads.emplace(type, rng.bits(params.chunk_len_bits()));
  // one pad per type at chunk length totals exactly K^2 L bits
  if (pads.total_bits() !=
      uint64_t(params.n_values) * uint64_t(params.n_values) * params.msg_len_bits)
    throw Error("pad accounting mismatch");

  return SystemSetup{params, MessageDatabase(params, std::move(messages)),
                     std::move(pads)};
}

Dealer::Dealer(const SystemParams& params,
               const std::optional<std::map<AccessPolicy, BitString>>& contents,
               RandomSource& rng)
    : system_(std::make_shared<const SystemSetup>(setup(params, contents, rng))),
      tables_(size_t(params.n_servers)) {}

std::vector<Credential> Dealer::issue_credentials(const AccessPolicy& user_attrs,
                                                  RandomSource& rng) {
  const SystemParams& params = system_->params;
  policy_rank(user_attrs, params);  // validates arity and ranges

  std::vector<Credential> credentials;
  credentials.reserve(size_t(params.n_servers));
  for (int n = 1; n <= params.n_servers; ++n) {
    Credential cred;
    cred.position = uint8_t(n);
    cred.value = user_attrs.at(n);
    cred.token = rng.token();
    tables_[size_t(n) - 1].emplace(cred.token, std::make_pair(cred.position, cred.value));
    credentials.push_back(cred);
  }
  return credentials;
}

const TokenTable& Dealer::token_table(int server_index) const {
  if (server_index < 1 || server_index > system_->params.n_servers)
    throw Error("server index out of range");
  return tables_[size_t(server_index) - 1];
}

}  // namespace dapac
