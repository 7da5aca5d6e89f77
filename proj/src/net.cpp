#include "dapac/net.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <future>

namespace dapac {

namespace {

struct FdCloser {
  int fd;
  ~FdCloser() {
    if (fd >= 0) ::close(fd);
  }
};

sockaddr_in make_addr(const std::string& host, int port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(uint16_t(port));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
    throw TransportError("bad address: " + host);
  return addr;
}

void send_all(int fd, const std::vector<uint8_t>& bytes) {
  size_t sent = 0;
  while (sent < bytes.size()) {
    ssize_t n = ::send(fd, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) throw TransportError("connection closed while sending");
    sent += size_t(n);
  }
}

bool recv_exact(int fd, uint8_t* out, size_t len) {
  size_t got = 0;
  while (got < len) {
    ssize_t n = ::recv(fd, out + got, len - got, 0);
    if (n == 0) return false;
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError("recv failed");
    }
    got += size_t(n);
  }
  return true;
}

// Reads one length-prefixed frame; returns nullopt on clean EOF before any
// byte arrives.
std::optional<Frame> recv_frame(int fd) {
  uint8_t header[4];
  if (!recv_exact(fd, header, 4)) return std::nullopt;
  uint32_t length = uint32_t(header[0]) | uint32_t(header[1]) << 8 |
                    uint32_t(header[2]) << 16 | uint32_t(header[3]) << 24;
  if (length == 0 || length > kMaxFramePayload + 1)
    throw WireDecodeError(WireError::length_overflow);
  std::vector<uint8_t> rest(length);
  if (!recv_exact(fd, rest.data(), rest.size()))
    throw WireDecodeError(WireError::truncated);
  std::vector<uint8_t> whole;
  whole.reserve(4 + rest.size());
  whole.insert(whole.end(), header, header + 4);
  whole.insert(whole.end(), rest.begin(), rest.end());
  return decode_frame(whole);
}

void send_frame(int fd, const Frame& frame) { send_all(fd, encode_frame(frame)); }

}  // namespace

ServerHandle::ServerHandle(ServerState state, const std::string& host, int port)
    : state_(std::move(state)) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw TransportError("cannot create socket");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr = make_addr(host, port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(listen_fd_);
    throw TransportError("cannot bind " + host + ":" + std::to_string(port));
  }
  if (::listen(listen_fd_, 16) != 0) {
    ::close(listen_fd_);
    throw TransportError("cannot listen");
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  accept_thread_ = std::thread([this] { accept_loop(); });
}

ServerHandle::~ServerHandle() { stop(); }

void ServerHandle::stop() {
  bool expected = false;
  if (!stopping_.compare_exchange_strong(expected, true)) {
    if (accept_thread_.joinable()) accept_thread_.join();
    return;
  }
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  if (accept_thread_.joinable()) accept_thread_.join();
}

void ServerHandle::accept_loop() {
  std::vector<std::thread> workers;
  while (!stopping_.load()) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (stopping_.load()) break;
      if (errno == EINTR) continue;
      break;
    }
    workers.emplace_back([this, fd] { handle_connection(fd); });
  }
  for (std::thread& w : workers)
    if (w.joinable()) w.join();
}

void ServerHandle::handle_connection(int fd) {
  FdCloser closer{fd};
  try {
    std::optional<Frame> frame = recv_frame(fd);
    if (!frame) return;
    switch (frame->kind) {
      case FrameKind::query: {
        Query query = decode_query(frame->payload, state_.params);
        std::optional<uint16_t> value = lookup_token(state_, query.credential.token);
        if (!value) {
          send_frame(fd, Frame{FrameKind::reject,
                               {uint8_t(RejectReason::bad_credential)}});
          return;
        }
        query.credential.position = uint8_t(state_.index);
        query.credential.value = *value;
        Answer answer = answer_query(state_, query);
        send_frame(fd, answer_frame(answer, state_.params));
        return;
      }
      case FrameKind::credential_check: {
        if (frame->payload.size() != 16) throw WireDecodeError(WireError::bad_value);
        Token token;
        std::copy(frame->payload.begin(), frame->payload.end(), token.begin());
        std::optional<uint16_t> value = lookup_token(state_, token);
        if (!value) {
          send_frame(fd, Frame{FrameKind::reject,
                               {uint8_t(RejectReason::bad_credential)}});
        } else {
          send_frame(fd, Frame{FrameKind::credential_check,
                               {uint8_t(*value & 0xFF), uint8_t(*value >> 8)}});
        }
        return;
      }
      default:
        send_frame(fd, Frame{FrameKind::error, {uint8_t(WireError::bad_kind)}});
        return;
    }
  } catch (const WireDecodeError& e) {
    try {
      send_frame(fd, Frame{FrameKind::error, {uint8_t(e.code())}});
    } catch (...) {
    }
  } catch (...) {
    // never leak a partial answer
  }
}

Answer remote_query(const Endpoint& endpoint, const Query& query,
                    const SystemParams& params, std::vector<uint8_t>* answer_bytes) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw TransportError("cannot create socket");
  FdCloser closer{fd};
  sockaddr_in addr = make_addr(endpoint.host, endpoint.port);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
    throw TransportError("cannot connect to " + endpoint.host + ":" +
                         std::to_string(endpoint.port));

  send_frame(fd, Frame{FrameKind::query, encode_query(query, params)});
  std::optional<Frame> frame = recv_frame(fd);
  if (!frame) throw TransportError("connection dropped before the answer");
  if (frame->kind == FrameKind::error)
    throw TransportError("server reported a wire error");
  Answer answer = answer_from_frame(*frame, params);
  if (answer_bytes) *answer_bytes = encode_frame(*frame);
  return answer;
}

std::optional<uint16_t> remote_credential_check(const Endpoint& endpoint,
                                                const Token& token) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw TransportError("cannot create socket");
  FdCloser closer{fd};
  sockaddr_in addr = make_addr(endpoint.host, endpoint.port);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
    throw TransportError("cannot connect");

  send_frame(fd, Frame{FrameKind::credential_check,
                       std::vector<uint8_t>(token.begin(), token.end())});
  std::optional<Frame> frame = recv_frame(fd);
  if (!frame) throw TransportError("connection dropped");
  if (frame->kind == FrameKind::reject) return std::nullopt;
  if (frame->kind != FrameKind::credential_check || frame->payload.size() != 2)
    throw WireDecodeError(WireError::bad_value);
  return uint16_t(frame->payload[0]) | uint16_t(frame->payload[1]) << 8;
}

RetrievalOutcome run_remote_session(const std::vector<Endpoint>& endpoints,
                                    const AccessPolicy& v_star,
                                    const std::vector<Credential>& credentials,
                                    const SystemParams& params,
                                    RandomSource& client_rng) {
  if (endpoints.size() != size_t(params.n_servers))
    throw Error("need one endpoint per server");

  QuerySet qs = generate_queries(v_star, credentials, params, client_rng);

  // dispatch all queries concurrently; decode only once every answer is in
  std::vector<std::future<std::pair<Answer, std::vector<uint8_t>>>> futures;
  for (int n = 1; n <= params.n_servers; ++n) {
    futures.push_back(std::async(std::launch::async, [&, n] {
      std::vector<uint8_t> bytes;
      Answer answer =
          remote_query(endpoints[size_t(n) - 1], qs.queries[size_t(n) - 1], params, &bytes);
      return std::make_pair(std::move(answer), std::move(bytes));
    }));
  }

  Transcript transcript;
  transcript.scheme = Scheme::dapac;
  transcript.params = params;
  std::vector<Answer> answers;
  for (int n = 1; n <= params.n_servers; ++n) {
    auto [answer, bytes] = futures[size_t(n) - 1].get();
    ServerTranscript st;
    st.query_bytes = encode_query(qs.queries[size_t(n) - 1], params);
    st.answer_bytes = std::move(bytes);
    st.bits_up = st.query_bytes.size() * 8;
    st.bits_down = uint64_t(answer.items.size()) * params.chunk_len_bits();
    st.equations = answer.items.size();
    st.reject = answer.reject;
    transcript.per_server.push_back(std::move(st));
    answers.push_back(std::move(answer));
  }

  Message message = decode(qs.plan, answers, params);
  return RetrievalOutcome{std::move(message), std::move(transcript)};
}

}  // namespace dapac
