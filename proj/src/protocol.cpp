#include "gcbot/protocol.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace gcbot::wire {

namespace {

// Grammar violations (framing, spacing, non-canonical numbers) map to
// kErrMalformed; tokens that parse but carry a disallowed value map to
// kErrArgRange.

std::uint8_t xor_fold(std::string_view bytes) {
  std::uint8_t acc = 0;
  for (unsigned char b : bytes) acc ^= b;
  return acc;
}

void append_checksum(std::string& payload) {
  char buf[4];
  std::snprintf(buf, sizeof(buf), "*%02X", xor_fold(payload));
  payload += buf;
  payload += '\n';
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;  // lowercase is rejected: encode only ever emits uppercase
}

const char* dir_token(MoveDir d) {
  switch (d) {
    case MoveDir::F: return "F";
    case MoveDir::B: return "B";
    case MoveDir::L: return "L";
    case MoveDir::R: return "R";
    case MoveDir::CW: return "CW";
    case MoveDir::CC: return "CC";
  }
  return "";
}

bool parse_dir(std::string_view tok, MoveDir& out) {
  if (tok == "F") out = MoveDir::F;
  else if (tok == "B") out = MoveDir::B;
  else if (tok == "L") out = MoveDir::L;
  else if (tok == "R") out = MoveDir::R;
  else if (tok == "CW") out = MoveDir::CW;
  else if (tok == "CC") out = MoveDir::CC;
  else return false;
  return true;
}

bool canonical_digits(std::string_view tok) {
  if (tok.empty()) return false;
  if (tok.size() > 1 && tok.front() == '0') return false;  // no leading zeros
  for (char c : tok)
    if (c < '0' || c > '9') return false;
  return true;
}

// -1 grammar violation, -2 out of 32-bit range, 0 ok.
int parse_decimal(std::string_view tok, bool allow_negative, std::int64_t& out) {
  bool neg = false;
  if (!tok.empty() && tok.front() == '-') {
    if (!allow_negative) return -1;
    neg = true;
    tok.remove_prefix(1);
    if (tok == "0") return -1;  // "-0" is not canonical
  }
  if (!canonical_digits(tok)) return -1;
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return -2;
  out = neg ? -v : v;
  if (out < INT32_MIN || out > INT32_MAX) return -2;
  return 0;
}

std::vector<std::string_view> split_tokens(std::string_view payload, bool& grammar_ok) {
  // Exactly one space between tokens, none leading or trailing.
  grammar_ok = true;
  std::vector<std::string_view> toks;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= payload.size(); ++i) {
    if (i == payload.size() || payload[i] == ' ') {
      if (i == start) {  // empty token: doubled/leading/trailing space
        grammar_ok = false;
        return toks;
      }
      toks.push_back(payload.substr(start, i - start));
      start = i + 1;
    }
  }
  return toks;
}

}  // namespace

std::string encode(const Command& c) {
  std::string payload;
  if (const auto* m = std::get_if<MoveCmd>(&c)) {
    if (m->speed < 0 || m->speed > 255)
      throw std::invalid_argument("encode: Move speed outside [0, 255]");
    payload = "MOV ";
    payload += dir_token(m->dir);
    payload += ' ';
    payload += std::to_string(m->speed);
  } else if (std::holds_alternative<StopCmd>(c)) {
    payload = "STP";
  } else if (const auto* a = std::get_if<ArmToCmd>(&c)) {
    payload = "ARM " + std::to_string(a->x_mm) + ' ' + std::to_string(a->y_mm) + ' ' +
              std::to_string(a->z_mm);
  } else if (const auto* g = std::get_if<GripCmd>(&c)) {
    payload = g->action == GripAction::Open ? "GRP O" : "GRP C";
  } else {
    payload = "HOM";
  }
  append_checksum(payload);
  return payload;
}

std::string encode_ack(const Ack& a) {
  if (a.code < 0 || a.code > 99) throw std::invalid_argument("encode_ack: code outside [0, 99]");
  std::string payload = a.ok() ? "OK" : "ERR " + std::to_string(a.code);
  append_checksum(payload);
  return payload;
}

namespace {

// Shared framing checks; on success fills the space-split payload tokens.
int check_frame(std::string_view line, std::vector<std::string_view>& toks) {
  if (line.empty() || line.size() > kMaxLineBytes) return kErrMalformed;
  if (line.back() != '\n') return kErrMalformed;
  line.remove_suffix(1);
  if (line.find('\n') != std::string_view::npos) return kErrMalformed;
  if (line.size() < 3) return kErrMalformed;  // at least "X*HH" minus one

  const std::size_t star = line.rfind('*');
  if (star == std::string_view::npos || line.size() - star != 3) return kErrMalformed;
  const int hi = hex_digit(line[star + 1]);
  const int lo = hex_digit(line[star + 2]);
  if (hi < 0 || lo < 0) return kErrMalformed;

  const std::string_view payload = line.substr(0, star);
  if (payload.find('*') != std::string_view::npos) return kErrMalformed;
  if (xor_fold(payload) != (hi << 4 | lo)) return kErrChecksum;

  bool grammar_ok = false;
  toks = split_tokens(payload, grammar_ok);
  if (!grammar_ok || toks.empty()) return kErrMalformed;
  return 0;
}

}  // namespace

DecodeResult decode(std::string_view line) noexcept {
  std::vector<std::string_view> toks;
  if (const int err = check_frame(line, toks)) return WireError{err};

  const std::string_view verb = toks[0];
  if (verb == "MOV") {
    if (toks.size() != 3) return WireError{kErrMalformed};
    MoveCmd m;
    if (!parse_dir(toks[1], m.dir)) return WireError{kErrArgRange};
    std::int64_t speed = 0;
    const int rc = parse_decimal(toks[2], false, speed);
    if (rc == -1) return WireError{kErrMalformed};
    if (rc == -2 || speed > 255) return WireError{kErrArgRange};
    m.speed = static_cast<int>(speed);
    return Command{m};
  }
  if (verb == "STP") {
    if (toks.size() != 1) return WireError{kErrMalformed};
    return Command{StopCmd{}};
  }
  if (verb == "ARM") {
    if (toks.size() != 4) return WireError{kErrMalformed};
    std::int64_t v[3];
    for (int i = 0; i < 3; ++i) {
      const int rc = parse_decimal(toks[1 + i], true, v[i]);
      if (rc == -1) return WireError{kErrMalformed};
      if (rc == -2) return WireError{kErrArgRange};
    }
    return Command{ArmToCmd{static_cast<std::int32_t>(v[0]), static_cast<std::int32_t>(v[1]),
                            static_cast<std::int32_t>(v[2])}};
  }
  if (verb == "GRP") {
    if (toks.size() != 2) return WireError{kErrMalformed};
    if (toks[1] == "O") return Command{GripCmd{GripAction::Open}};
    if (toks[1] == "C") return Command{GripCmd{GripAction::Close}};
    return WireError{kErrArgRange};
  }
  if (verb == "HOM") {
    if (toks.size() != 1) return WireError{kErrMalformed};
    return Command{HomeCmd{}};
  }
  return WireError{kErrUnknownVerb};
}

AckDecodeResult decode_ack(std::string_view line) noexcept {
  std::vector<std::string_view> toks;
  if (const int err = check_frame(line, toks)) return WireError{err};

  if (toks[0] == "OK") {
    if (toks.size() != 1) return WireError{kErrMalformed};
    return Ack{0};
  }
  if (toks[0] == "ERR") {
    if (toks.size() != 2) return WireError{kErrMalformed};
    std::int64_t code = 0;
    const int rc = parse_decimal(toks[1], false, code);
    if (rc == -1) return WireError{kErrMalformed};
    if (rc == -2 || code < 1 || code > 99) return WireError{kErrArgRange};
    return Ack{static_cast<int>(code)};
  }
  return WireError{kErrUnknownVerb};
}

std::vector<FrameSplitter::Item> FrameSplitter::push(std::string_view chunk) {
  std::vector<Item> out;
  for (char c : chunk) {
    if (discarding_) {
      if (c == '\n') discarding_ = false;
      continue;
    }
    buffer_ += c;
    if (c == '\n') {
      out.emplace_back(std::move(buffer_));
      buffer_.clear();
    } else if (buffer_.size() >= max_line_) {
      // Even an immediate newline could no longer fit: drop the line.
      out.emplace_back(WireError{kErrMalformed});
      buffer_.clear();
      discarding_ = true;
    }
  }
  return out;
}

void LoopbackLink::send(std::string_view bytes) {
  std::string payload(bytes);
  if (corrupt_) corrupt_(payload);
  pending_ += payload;
}

std::string LoopbackLink::recv_chunk(std::mt19937_64& rng, std::size_t max_chunk) {
  if (pending_.empty()) return {};
  const std::size_t cap = std::min(max_chunk, pending_.size());
  std::uniform_int_distribution<std::size_t> pick(1, cap);
  const std::size_t n = pick(rng);
  std::string chunk = pending_.substr(0, n);
  pending_.erase(0, n);
  return chunk;
}

std::string LoopbackLink::recv_all() {
  std::string all = std::move(pending_);
  pending_.clear();
  return all;
}

}  // namespace gcbot::wire
