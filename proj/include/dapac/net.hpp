#pragma once

#include <atomic>
#include <string>
#include <thread>
#include <vector>

#include "dapac/server.hpp"
#include "dapac/session.hpp"
#include "dapac/wire.hpp"

namespace dapac {

class TransportError : public Error {
  using Error::Error;
};

struct Endpoint {
  std::string host;
  int port = 0;
};

// Listens on a TCP endpoint and serves one query or credential-check frame
// per connection, concurrently. Stops and joins on destruction.
class ServerHandle {
public:
  // port 0 binds an ephemeral port; port() reports the actual one.
  ServerHandle(ServerState state, const std::string& host, int port);
  ~ServerHandle();

  ServerHandle(const ServerHandle&) = delete;
  ServerHandle& operator=(const ServerHandle&) = delete;

  int port() const { return port_; }
  void stop();

private:
  void accept_loop();
  void handle_connection(int fd);

  ServerState state_;
  int listen_fd_ = -1;
  int port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread accept_thread_;
};

// One query frame out, one answer/reject frame back, then the connection
// closes. Raw answer bytes are returned alongside for transcript accounting.
Answer remote_query(const Endpoint& endpoint, const Query& query,
                    const SystemParams& params,
                    std::vector<uint8_t>* answer_bytes = nullptr);

// Frame kind 0x04: token in, verified value (or rejection) back.
std::optional<uint16_t> remote_credential_check(const Endpoint& endpoint,
                                                const Token& token);

// Full retrieval against remote servers, queries dispatched concurrently.
RetrievalOutcome run_remote_session(const std::vector<Endpoint>& endpoints,
                                    const AccessPolicy& v_star,
                                    const std::vector<Credential>& credentials,
                                    const SystemParams& params,
                                    RandomSource& client_rng);

}  // namespace dapac
