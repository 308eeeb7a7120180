#ifndef SCDESTIM_ACCOUNTING_HPP
#define SCDESTIM_ACCOUNTING_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "scdestim/graph.hpp"
#include "scdestim/quantizer.hpp"

namespace scdestim {

/// Directed channel sender -> receiver (0-based). Edge e = (i, j), i < j,
/// owns channels 2e (i -> j) and 2e + 1 (j -> i).
struct DirectedChannel {
  std::size_t from;
  std::size_t to;
  std::size_t edge;
};

std::vector<DirectedChannel> directed_channels(const Topology& topology);

/// An event tagged with the channel it travelled on.
struct AddressedEvent {
  std::size_t from;
  std::size_t to;
  ChannelEvent event;
};

/**
 * Cumulative transmitted bits per directed channel.
 *
 * Bits stay integral; rates are formed only when queried.
 */
class BitLedger {
 public:
  explicit BitLedger(const Topology& topology);

  /// Records tick `ticks() + 1`. Requires exactly one event per directed
  /// channel; throws std::invalid_argument on a missing, duplicate or
  /// non-edge event.
  void record(std::span<const AddressedEvent> events);

  /// Fast path: `bits[c]` is the bit count of directed channel c.
  void record_bits(std::span<const int> bits);

  std::uint64_t ticks() const { return ticks_; }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t channel_count() const { return cumulative_.size(); }
  const std::vector<DirectedChannel>& channels() const { return channels_; }

  std::uint64_t cumulative(std::size_t from, std::size_t to) const;
  std::uint64_t cumulative_channel(std::size_t c) const { return cumulative_.at(c); }
  std::uint64_t total_bits() const;

  /// B_ij(k) = cumulative bits on i -> j / k, at k = ticks(). Throws on
  /// k = 0 or a non-edge.
  double local_rate(std::size_t from, std::size_t to) const;
  double channel_rate(std::size_t c) const;

  /// B(k) = total bits / (2 k M).
  double global_rate() const;

 private:
  std::size_t channel_index(std::size_t from, std::size_t to) const;

  std::size_t n_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<DirectedChannel> channels_;
  std::vector<long> lookup_;  // n x n -> channel or -1
  std::vector<std::uint64_t> cumulative_;
  std::uint64_t ticks_ = 0;
};

}  // namespace scdestim

#endif  // SCDESTIM_ACCOUNTING_HPP
