#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

#include "lcvsim/util/errors.hpp"

namespace lcvsim::comms {

/// Field identifiers of the V2V wire format. Values are frozen in
/// docs/wire-format.md; 4 and 6 are reserved for extensions.
enum : std::uint8_t {
  kFieldAccel = 1,
  kFieldLatitude = 2,
  kFieldLongitude = 3,
  kFieldHeading = 4,
  kFieldTimestamp = 5,
  kFieldLidarSummary = 6,
  kFieldSender = 7,
};

/// What the lead vehicle broadcasts: its commanded acceleration and GPS
/// position, stamped with the send time and the sender's id.
struct V2VMessage {
  double accel = 0.0;      // [m/s^2]
  double latitude = 0.0;   // [deg]
  double longitude = 0.0;  // [deg]
  double timestamp = 0.0;  // send time [s]
  std::uint32_t sender = 0;

  void validate() const {
    if (!std::isfinite(accel) || !std::isfinite(timestamp)) {
      throw InputDomainError("v2v: non-finite field");
    }
    if (!(std::abs(latitude) <= 90.0)) {
      throw InputDomainError("v2v: |latitude| must be <= 90 deg");
    }
    if (!(std::abs(longitude) <= 180.0)) {
      throw InputDomainError("v2v: |longitude| must be <= 180 deg");
    }
  }
};

/// One identifier-tagged package: the identifier byte plus exactly eight
/// payload bytes (a little-endian IEEE-754 double).
struct UdpPackage {
  std::uint8_t id = 0;
  std::array<std::uint8_t, 8> payload{};
};

/// Serialized size of one package on the wire: id byte + payload.
inline constexpr std::size_t kDatagramSize = 9;

inline std::array<std::uint8_t, 8> encode_payload(double value) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(value);
  std::array<std::uint8_t, 8> out{};
  for (auto& byte : out) {
    byte = static_cast<std::uint8_t>(bits & 0xff);
    bits >>= 8;
  }
  return out;
}

inline double decode_payload(const std::array<std::uint8_t, 8>& payload) {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < payload.size(); ++i) {
    bits |= static_cast<std::uint64_t>(payload[i]) << (8 * i);
  }
  return std::bit_cast<double>(bits);
}

/// Splits a message into one package per field. The layout (identifiers,
/// byte order) is the published wire format.
inline std::vector<UdpPackage> encode_v2v(const V2VMessage& msg) {
  msg.validate();
  return {
      {kFieldAccel, encode_payload(msg.accel)},
      {kFieldLatitude, encode_payload(msg.latitude)},
      {kFieldLongitude, encode_payload(msg.longitude)},
      {kFieldTimestamp, encode_payload(msg.timestamp)},
      {kFieldSender, encode_payload(static_cast<double>(msg.sender))},
  };
}

/// Result of reassembling packages: the message, whether all mandatory
/// fields (acceleration, latitude, longitude) arrived, and how many packages
/// carried an unknown identifier.
struct DecodedV2V {
  V2VMessage message;
  bool complete = false;
  std::size_t unknown_count = 0;
};

/// Rebuilds a message from packages in arrival order. Later packages win on
/// duplicate identifiers, so a stream of partial updates is fine; the
/// message is complete once every mandatory field has been seen.
inline DecodedV2V decode_v2v(std::span<const UdpPackage> packages) {
  DecodedV2V out;
  bool has_accel = false, has_lat = false, has_lon = false;
  for (const auto& pkg : packages) {
    const double value = decode_payload(pkg.payload);
    switch (pkg.id) {
      case kFieldAccel:
        out.message.accel = value;
        has_accel = true;
        break;
      case kFieldLatitude:
        out.message.latitude = value;
        has_lat = true;
        break;
      case kFieldLongitude:
        out.message.longitude = value;
        has_lon = true;
        break;
      case kFieldTimestamp:
        out.message.timestamp = value;
        break;
      case kFieldSender:
        out.message.sender = static_cast<std::uint32_t>(value);
        break;
      default:
        ++out.unknown_count;
        break;
    }
  }
  out.complete = has_accel && has_lat && has_lon;
  return out;
}

/// Flattens a package to wire bytes: identifier, then the payload.
inline std::array<std::uint8_t, kDatagramSize> serialize_package(
    const UdpPackage& pkg) {
  std::array<std::uint8_t, kDatagramSize> out{};
  out[0] = pkg.id;
  std::memcpy(out.data() + 1, pkg.payload.data(), pkg.payload.size());
  return out;
}

/// Parses wire bytes back into a package; anything but exactly nine bytes
/// is a framing violation.
inline UdpPackage parse_package(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kDatagramSize) {
    throw FramingError("udp package must be exactly 9 bytes (id + payload)");
  }
  UdpPackage pkg;
  pkg.id = bytes[0];
  std::memcpy(pkg.payload.data(), bytes.data() + 1, pkg.payload.size());
  return pkg;
}

}  // namespace lcvsim::comms
