#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gcbot::wire {

// Line protocol, one command per line, actuator acks each line before the
// next is sent:
//
//   frame    := verb (' ' arg)* '*' hex hex '\n'
//   verb     := "MOV" | "STP" | "ARM" | "GRP" | "HOM"
//   MOV args := dir speed          dir in {F,B,L,R,CW,CC}, speed 0..255
//   ARM args := x y z              signed millimeters, 32-bit
//   GRP args := "O" | "C"
//   checksum := XOR of every byte before '*', two uppercase hex digits
//
// Args are canonical decimal: no leading zeros, no '+', '-' only on ARM
// coordinates. Anything else is rejected -- the decoder never guesses.
// Ack lines use the same framing: "OK*HH" or "ERR <code>*HH".

inline constexpr std::size_t kMaxLineBytes = 64;  // including the newline

enum class MoveDir { F, B, L, R, CW, CC };

struct MoveCmd {
  MoveDir dir = MoveDir::F;
  int speed = 0;  // 0..255
  bool operator==(const MoveCmd&) const = default;
};

struct StopCmd {
  bool operator==(const StopCmd&) const = default;
};

struct ArmToCmd {
  std::int32_t x_mm = 0;
  std::int32_t y_mm = 0;
  std::int32_t z_mm = 0;
  bool operator==(const ArmToCmd&) const = default;
};

enum class GripAction { Open, Close };

struct GripCmd {
  GripAction action = GripAction::Open;
  bool operator==(const GripCmd&) const = default;
};

struct HomeCmd {
  bool operator==(const HomeCmd&) const = default;
};

using Command = std::variant<MoveCmd, StopCmd, ArmToCmd, GripCmd, HomeCmd>;

// Error codes shared by the decoder and acks.
inline constexpr int kErrMalformed = 1;
inline constexpr int kErrChecksum = 2;
inline constexpr int kErrUnknownVerb = 3;
inline constexpr int kErrArgRange = 4;
inline constexpr int kErrUnreachable = 5;

struct Ack {
  int code = 0;  // 0 = Ok, 1..99 = error
  bool ok() const { return code == 0; }
  bool operator==(const Ack&) const = default;
};

struct WireError {
  int code = 0;
  bool operator==(const WireError&) const = default;
};

using DecodeResult = std::variant<Command, WireError>;
using AckDecodeResult = std::variant<Ack, WireError>;

// Serializes a command as one checksummed line. Throws std::invalid_argument
// when an invariant is violated (never emits a malformed frame).
std::string encode(const Command& c);
std::string encode_ack(const Ack& a);

// Total over arbitrary bytes; one complete line in, command or error out.
DecodeResult decode(std::string_view line) noexcept;
AckDecodeResult decode_ack(std::string_view line) noexcept;

// Reassembles newline-framed lines from arbitrarily chunked input. Lines
// longer than max_line are dropped and reported as one malformed-frame error.
class FrameSplitter {
 public:
  using Item = std::variant<std::string, WireError>;

  explicit FrameSplitter(std::size_t max_line = kMaxLineBytes) : max_line_(max_line) {}

  std::vector<Item> push(std::string_view chunk);

  bool has_partial() const { return !buffer_.empty() || discarding_; }

 private:
  std::string buffer_;
  bool discarding_ = false;
  std::size_t max_line_;
};

// In-memory byte pipe. Chunk sizes come from the supplied RNG so a stream's
// partitioning is reproducible per seed; an optional corruption hook mutates
// bytes in flight (tests use it to exercise checksum detection).
class LoopbackLink {
 public:
  using CorruptFn = std::function<void(std::string&)>;

  void send(std::string_view bytes);

  // Pops one chunk of 1..max_chunk pending bytes (empty when drained).
  std::string recv_chunk(std::mt19937_64& rng, std::size_t max_chunk = 7);

  // Drains everything as one chunk.
  std::string recv_all();

  void set_corruption(CorruptFn fn) { corrupt_ = std::move(fn); }
  bool empty() const { return pending_.empty(); }

 private:
  std::string pending_;
  CorruptFn corrupt_;
};

}  // namespace gcbot::wire
