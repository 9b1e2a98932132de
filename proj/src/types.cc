#include "stadia/types.h"

#include <algorithm>
#include <cctype>

namespace stadia {
namespace {

std::string Upper(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return out;
}

[[noreturn]] void Fail(std::string_view what, std::string_view text) {
  throw ConfigError("unknown " + std::string(what) + " '" + std::string(text) +
                    "'");
}

}  // namespace

std::string ToString(Game game) {
  switch (game) {
    case Game::kTombRaider:
      return "TR";
    case Game::kThumper:
      return "TH";
    case Game::kSpitlings:
      return "SP";
  }
  return "?";
}

std::string ToString(Protocol protocol) {
  switch (protocol) {
    case Protocol::kRtp:
      return "RTP";
    case Protocol::kRtcp:
      return "RTCP";
    case Protocol::kDtls:
      return "DTLS";
    case Protocol::kStun:
      return "STUN";
    case Protocol::kMixed:
      return "MIXED";
  }
  return "?";
}

std::string ToString(Direction direction) {
  return direction == Direction::kDownlink ? "downlink" : "uplink";
}

std::string ToString(Codec codec) {
  switch (codec) {
    case Codec::kVp9:
      return "VP9";
    case Codec::kH264:
      return "H264";
    case Codec::kNotAvailable:
      return "NA";
  }
  return "?";
}

std::string ToString(Resolution resolution) {
  switch (resolution) {
    case Resolution::k720p:
      return "720p";
    case Resolution::k1080p:
      return "1080p";
    case Resolution::k4K:
      return "4K";
    case Resolution::kNotAvailable:
      return "NA";
  }
  return "?";
}

std::string ToString(DatasetId id) { return "D" + std::to_string(id.index); }

Game ParseGame(std::string_view text) {
  const std::string u = Upper(text);
  if (u == "TR") return Game::kTombRaider;
  if (u == "TH") return Game::kThumper;
  if (u == "SP") return Game::kSpitlings;
  Fail("game", text);
}

Protocol ParseProtocol(std::string_view text) {
  const std::string u = Upper(text);
  if (u == "RTP") return Protocol::kRtp;
  if (u == "RTCP") return Protocol::kRtcp;
  if (u == "DTLS") return Protocol::kDtls;
  if (u == "STUN") return Protocol::kStun;
  if (u == "MIXED") return Protocol::kMixed;
  Fail("protocol", text);
}

Direction ParseDirection(std::string_view text) {
  const std::string u = Upper(text);
  if (u == "DOWNLINK" || u == "DL") return Direction::kDownlink;
  if (u == "UPLINK" || u == "UL") return Direction::kUplink;
  Fail("direction", text);
}

Codec ParseCodec(std::string_view text) {
  const std::string u = Upper(text);
  if (u == "VP9") return Codec::kVp9;
  if (u == "H264" || u == "H.264") return Codec::kH264;
  if (u == "NA") return Codec::kNotAvailable;
  Fail("codec", text);
}

Resolution ParseResolution(std::string_view text) {
  const std::string u = Upper(text);
  if (u == "720P") return Resolution::k720p;
  if (u == "1080P") return Resolution::k1080p;
  if (u == "4K" || u == "2160P") return Resolution::k4K;
  if (u == "NA") return Resolution::kNotAvailable;
  Fail("resolution", text);
}

DatasetId ParseDatasetId(std::string_view text) {
  const std::string u = Upper(text);
  if (u.size() == 2 && u[0] == 'D' && u[1] >= '1' && u[1] <= '8')
    return DatasetId{u[1] - '0'};
  Fail("dataset id", text);
}

int FrameHeight(Resolution resolution) {
  switch (resolution) {
    case Resolution::k720p:
      return 720;
    case Resolution::k1080p:
      return 1080;
    case Resolution::k4K:
      return 2160;
    case Resolution::kNotAvailable:
      return 0;
  }
  return 0;
}

}  // namespace stadia
