#ifndef STADIA_TYPES_H_
#define STADIA_TYPES_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace stadia {

enum class Game { kTombRaider, kThumper, kSpitlings };
enum class Protocol { kRtp, kRtcp, kDtls, kStun, kMixed };
enum class Direction { kDownlink, kUplink };
enum class Codec { kVp9, kH264, kNotAvailable };
enum class Resolution { k720p, k1080p, k4K, kNotAvailable };

// Dataset identifiers D1..D8 of the public capture campaign.
struct DatasetId {
  int index = 1;
  friend bool operator==(const DatasetId&, const DatasetId&) = default;
};

// Raised for malformed configuration or manifest content.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string ToString(Game game);
std::string ToString(Protocol protocol);
std::string ToString(Direction direction);
std::string ToString(Codec codec);
std::string ToString(Resolution resolution);
std::string ToString(DatasetId id);

// Parsers accept the short dataset spellings ("TR", "RTP", "downlink"/"DL",
// "VP9", "1080p", "D2") case-insensitively. Throw ConfigError on anything
// else.
Game ParseGame(std::string_view text);
Protocol ParseProtocol(std::string_view text);
Direction ParseDirection(std::string_view text);
Codec ParseCodec(std::string_view text);
Resolution ParseResolution(std::string_view text);
DatasetId ParseDatasetId(std::string_view text);

// Frame height in pixels (Y4), 0 for kNotAvailable.
int FrameHeight(Resolution resolution);

}  // namespace stadia

#endif  // STADIA_TYPES_H_
