#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>

#include "lcvsim/comms/v2v.hpp"
#include "lcvsim/util/errors.hpp"
#include "lcvsim/util/text.hpp"

namespace lcvsim::comms {

/// Classical CAN data frame with an 11-bit identifier.
struct CanFrame {
  std::uint16_t id = 0;
  std::uint8_t dlc = 0;
  std::array<std::uint8_t, 8> data{};

  void validate() const {
    if (id >= 2048) throw InputDomainError("can: identifier must fit 11 bits");
    if (dlc > 8) throw InputDomainError("can: dlc must be at most 8");
  }
};

/// One-to-one UDP identifier to CAN identifier table, the software stand-in
/// for the converter board between the modem and the control unit.
class CanMapping {
 public:
  void add(std::uint8_t udp_id, std::uint16_t can_id) {
    if (can_id >= 2048) {
      throw ConfigError("can map: identifier " + std::to_string(can_id) +
                        " does not fit 11 bits");
    }
    if (forward_.count(udp_id) > 0) {
      throw ConfigError("can map: duplicate udp id " + std::to_string(udp_id));
    }
    if (reverse_.count(can_id) > 0) {
      throw ConfigError("can map: duplicate can id " + std::to_string(can_id));
    }
    forward_[udp_id] = can_id;
    reverse_[can_id] = udp_id;
  }

  std::uint16_t to_can(std::uint8_t udp_id) const {
    const auto it = forward_.find(udp_id);
    if (it == forward_.end()) {
      throw MappingError("no CAN id mapped for udp id " + std::to_string(udp_id));
    }
    return it->second;
  }

  std::uint8_t to_udp(std::uint16_t can_id) const {
    const auto it = reverse_.find(can_id);
    if (it == reverse_.end()) {
      throw MappingError("no udp id mapped for CAN id " + std::to_string(can_id));
    }
    return it->second;
  }

  std::size_t size() const { return forward_.size(); }

  /// Text file: one `udp_id can_id` pair per line, '#' comments.
  static CanMapping load(std::istream& in, const std::string& name = {}) {
    CanMapping map;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto stripped = strip_comment(line);
      if (stripped.empty()) continue;
      const auto tokens = split_tokens(stripped);
      if (tokens.size() != 2) {
        throw ParseError(name + ": expected 'udp_id can_id'", lineno);
      }
      std::uint64_t udp_id = 0, can_id = 0;
      try {
        udp_id = parse_u64(tokens[0]);
        can_id = parse_u64(tokens[1]);
      } catch (const ParseError&) {
        throw ParseError(name + ": ids must be unsigned integers", lineno);
      }
      if (udp_id > 0xff) throw ParseError(name + ": udp id must fit 8 bits", lineno);
      if (can_id > 2047) throw ParseError(name + ": can id must fit 11 bits", lineno);
      map.add(static_cast<std::uint8_t>(udp_id), static_cast<std::uint16_t>(can_id));
    }
    return map;
  }

  static CanMapping load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open CAN map file: " + path);
    return load(in, path);
  }

 private:
  std::map<std::uint8_t, std::uint16_t> forward_;
  std::map<std::uint16_t, std::uint8_t> reverse_;
};

/// Bridges one package onto the CAN bus: mapped identifier, DLC 8, payload
/// copied verbatim.
inline CanFrame udp_to_can(const UdpPackage& pkg, const CanMapping& map) {
  CanFrame frame;
  frame.id = map.to_can(pkg.id);
  frame.dlc = 8;
  frame.data = pkg.payload;
  return frame;
}

/// Inverse bridge; the frame must carry a full 8-byte payload.
inline UdpPackage can_to_udp(const CanFrame& frame, const CanMapping& map) {
  frame.validate();
  if (frame.dlc != 8) {
    throw FramingError("can frame must carry 8 data bytes to form a package");
  }
  UdpPackage pkg;
  pkg.id = map.to_udp(frame.id);
  pkg.payload = frame.data;
  return pkg;
}

}  // namespace lcvsim::comms
