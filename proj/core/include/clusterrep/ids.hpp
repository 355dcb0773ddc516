#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace clusterrep {

// Peers and content items are addressed by dense indices; the enum wrappers
// keep the two id spaces from mixing.
enum class PeerId : std::uint32_t {};
enum class ContentId : std::uint32_t {};
enum class ClusterId : std::uint32_t {};

constexpr std::size_t index_of(PeerId id) { return static_cast<std::size_t>(id); }
constexpr std::size_t index_of(ContentId id) { return static_cast<std::size_t>(id); }
constexpr std::size_t index_of(ClusterId id) { return static_cast<std::size_t>(id); }

constexpr PeerId peer_id(std::size_t i) { return static_cast<PeerId>(i); }
constexpr ContentId content_id(std::size_t i) { return static_cast<ContentId>(i); }
constexpr ClusterId cluster_id(std::size_t i) { return static_cast<ClusterId>(i); }

inline std::string to_string(PeerId id) { return "P" + std::to_string(index_of(id)); }
inline std::string to_string(ContentId id) { return "C" + std::to_string(index_of(id)); }
inline std::string to_string(ClusterId id) { return "K" + std::to_string(index_of(id)); }

}  // namespace clusterrep
