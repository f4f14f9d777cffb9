#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <cstdio>
#include <random>
#include <string>

#include "gcbot/protocol.hpp"

using namespace gcbot::wire;

namespace {

// byte-fold oracle for expected checksums
std::string with_checksum(const std::string& payload) {
  unsigned acc = 0;
  for (unsigned char c : payload) acc ^= c;
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%s*%02X\n", payload.c_str(), acc);
  return buf;
}

Command random_command(std::mt19937& rng) {
  std::uniform_int_distribution<int> kind(0, 4);
  switch (kind(rng)) {
    case 0: {
      std::uniform_int_distribution<int> dir(0, 5), speed(0, 255);
      return MoveCmd{static_cast<MoveDir>(dir(rng)), speed(rng)};
    }
    case 1:
      return StopCmd{};
    case 2: {
      std::uniform_int_distribution<std::int32_t> v(INT32_MIN, INT32_MAX);
      return ArmToCmd{v(rng), v(rng), v(rng)};
    }
    case 3: {
      std::uniform_int_distribution<int> a(0, 1);
      return GripCmd{a(rng) ? GripAction::Open : GripAction::Close};
    }
    default:
      return HomeCmd{};
  }
}

bool is_error(const DecodeResult& r, int code) {
  const auto* e = std::get_if<WireError>(&r);
  return e != nullptr && e->code == code;
}

}  // namespace

TEST_CASE("encode emits checksummed frames") {
  CHECK(encode(StopCmd{}) == "STP*57\n");
  CHECK(encode(StopCmd{}) == with_checksum("STP"));
  CHECK(encode(MoveCmd{MoveDir::F, 200}) == with_checksum("MOV F 200"));
  CHECK(encode(ArmToCmd{-200, 460, 50}) == with_checksum("ARM -200 460 50"));
  CHECK(encode(GripCmd{GripAction::Close}) == with_checksum("GRP C"));
  CHECK(encode(HomeCmd{}) == with_checksum("HOM"));
  CHECK_THROWS_AS(encode(MoveCmd{MoveDir::F, 300}), std::invalid_argument);
  CHECK_THROWS_AS(encode(MoveCmd{MoveDir::F, -1}), std::invalid_argument);
}

TEST_CASE("decode accepts exactly what encode produces") {
  const auto stop = decode("STP*57\n");
  REQUIRE(std::holds_alternative<Command>(stop));
  CHECK(std::holds_alternative<StopCmd>(std::get<Command>(stop)));

  const auto move = decode(with_checksum("MOV CC 17"));
  REQUIRE(std::holds_alternative<Command>(move));
  const auto& m = std::get<MoveCmd>(std::get<Command>(move));
  CHECK(m.dir == MoveDir::CC);
  CHECK(m.speed == 17);
}

TEST_CASE("decode error codes") {
  CHECK(is_error(decode("STP*00\n"), kErrChecksum));
  CHECK(is_error(decode(with_checksum("XYZ")), kErrUnknownVerb));
  CHECK(is_error(decode(with_checksum("MOV F")), kErrMalformed));        // arity
  CHECK(is_error(decode(with_checksum("MOV F 2x0")), kErrMalformed));    // non-decimal
  CHECK(is_error(decode(with_checksum("MOV F 007")), kErrMalformed));    // not canonical
  CHECK(is_error(decode(with_checksum("MOV F 300")), kErrArgRange));
  CHECK(is_error(decode(with_checksum("MOV Q 10")), kErrArgRange));
  CHECK(is_error(decode(with_checksum("MOV F  10")), kErrMalformed));    // doubled space
  CHECK(is_error(decode(with_checksum(" STP")), kErrMalformed));         // leading space
  CHECK(is_error(decode(with_checksum("ARM 1 2")), kErrMalformed));
  CHECK(is_error(decode(with_checksum("ARM 99999999999 0 0")), kErrArgRange));
  CHECK(is_error(decode(with_checksum("ARM -0 0 0")), kErrMalformed));
  CHECK(is_error(decode(with_checksum("GRP X")), kErrArgRange));
  CHECK(is_error(decode("STP*57"), kErrMalformed));    // missing newline
  CHECK(is_error(decode("STP57\n"), kErrMalformed));   // missing '*'
  CHECK(is_error(decode("STP*5g\n"), kErrMalformed));  // bad hex
  CHECK(is_error(decode("STP*5\n"), kErrMalformed));
  CHECK(is_error(decode(""), kErrMalformed));
  CHECK(is_error(decode("\n"), kErrMalformed));
  CHECK(is_error(decode(std::string(100, 'A') + "\n"), kErrMalformed));  // over the cap
}

TEST_CASE("round-trip identity over the generator space") {
  std::mt19937 rng(61);
  for (int i = 0; i < 10000; ++i) {
    const Command c = random_command(rng);
    const auto back = decode(encode(c));
    REQUIRE(std::holds_alternative<Command>(back));
    CHECK(std::get<Command>(back) == c);
  }
}

TEST_CASE("decoder is total over random bytes") {
  std::mt19937 rng(67);
  std::uniform_int_distribution<int> byte(0, 255), len(0, 90);
  for (int i = 0; i < 20000; ++i) {
    std::string junk;
    const int n = len(rng);
    for (int k = 0; k < n; ++k) junk += static_cast<char>(byte(rng));
    if (i % 2 == 0) junk += '\n';
    const auto r = decode(junk);
    CHECK((std::holds_alternative<Command>(r) || std::holds_alternative<WireError>(r)));
  }
}

TEST_CASE("single bit flips never survive") {
  std::mt19937 rng(71);
  for (int i = 0; i < 50; ++i) {
    const Command c = random_command(rng);
    const std::string frame = encode(c);
    for (std::size_t pos = 0; pos < frame.size(); ++pos) {
      for (int bit = 0; bit < 8; ++bit) {
        std::string mutated = frame;
        mutated[pos] = static_cast<char>(mutated[pos] ^ (1 << bit));
        CHECK(std::holds_alternative<WireError>(decode(mutated)));
      }
    }
  }
}

TEST_CASE("ack framing round trip") {
  CHECK(std::get<Ack>(decode_ack(encode_ack(Ack{0}))) == Ack{0});
  for (int code = 1; code <= 99; ++code)
    CHECK(std::get<Ack>(decode_ack(encode_ack(Ack{code}))) == Ack{code});
  CHECK(std::holds_alternative<WireError>(decode_ack("OK*00\n")));  // bad checksum
  CHECK_THROWS_AS(encode_ack(Ack{100}), std::invalid_argument);
}

TEST_CASE("frame splitter reassembles chunks") {
  FrameSplitter split;
  auto items = split.push("ST");
  CHECK(items.empty());
  CHECK(split.has_partial());
  items = split.push("P*57\n");
  REQUIRE(items.size() == 1);
  CHECK(std::get<std::string>(items[0]) == "STP*57\n");
  CHECK_FALSE(split.has_partial());

  items = split.push("A\nB\n");
  REQUIRE(items.size() == 2);
  CHECK(std::get<std::string>(items[0]) == "A\n");
  CHECK(std::get<std::string>(items[1]) == "B\n");
}

TEST_CASE("frame splitter drops oversize lines with one error") {
  FrameSplitter split;
  auto items = split.push(std::string(70, 'A'));
  REQUIRE(items.size() == 1);
  CHECK(std::get<WireError>(items[0]).code == kErrMalformed);
  // the rest of the oversize line keeps being discarded
  CHECK(split.push("AAAA").empty());
  items = split.push("\nSTP*57\n");
  REQUIRE(items.size() == 1);
  CHECK(std::get<std::string>(items[0]) == "STP*57\n");

  // exactly at the cap (63 bytes + newline) still passes
  FrameSplitter at_cap;
  items = at_cap.push(std::string(63, 'B') + "\n");
  REQUIRE(items.size() == 1);
  CHECK(std::get<std::string>(items[0]).size() == 64);
}

TEST_CASE("chunking never changes the decoded command sequence") {
  std::mt19937 rng(73);
  std::vector<Command> sent;
  std::string stream;
  for (int i = 0; i < 100; ++i) {
    sent.push_back(random_command(rng));
    stream += encode(sent.back());
  }

  for (int trial = 0; trial < 50; ++trial) {
    FrameSplitter split;
    std::vector<Command> got;
    std::size_t pos = 0;
    std::uniform_int_distribution<std::size_t> take(1, 9);
    while (pos < stream.size()) {
      const std::size_t n = std::min(take(rng), stream.size() - pos);
      for (auto& item : split.push(std::string_view(stream).substr(pos, n))) {
        const auto r = decode(std::get<std::string>(item));
        got.push_back(std::get<Command>(r));
      }
      pos += n;
    }
    REQUIRE(got.size() == sent.size());
    for (std::size_t i = 0; i < sent.size(); ++i) CHECK(got[i] == sent[i]);
  }
}

TEST_CASE("loopback link chunks deterministically per seed and applies corruption") {
  LoopbackLink link;
  link.send("STP*57\n");
  std::mt19937_64 a(99), b(99);
  LoopbackLink link2;
  link2.send("STP*57\n");
  std::string ra, rb;
  while (!link.empty()) ra += link.recv_chunk(a);
  while (!link2.empty()) rb += link2.recv_chunk(b);
  CHECK(ra == "STP*57\n");
  CHECK(ra == rb);

  LoopbackLink bad;
  bad.set_corruption([](std::string& bytes) { bytes[1] ^= 0x08; });
  bad.send("STP*57\n");
  const auto r = decode(bad.recv_all());
  CHECK(std::holds_alternative<WireError>(r));
}
