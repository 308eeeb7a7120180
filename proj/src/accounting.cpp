#include "scdestim/accounting.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace scdestim {

std::vector<DirectedChannel> directed_channels(const Topology& topology) {
  std::vector<DirectedChannel> out;
  out.reserve(2 * topology.edge_count());
  const auto& edges = topology.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    out.push_back({edges[e].i, edges[e].j, e});
    out.push_back({edges[e].j, edges[e].i, e});
  }
  return out;
}

BitLedger::BitLedger(const Topology& topology)
    : n_(topology.n_sensors()),
      edge_count_(topology.edge_count()),
      channels_(directed_channels(topology)),
      lookup_(n_ * n_, -1),
      cumulative_(channels_.size(), 0) {
  for (std::size_t c = 0; c < channels_.size(); ++c) {
    lookup_[channels_[c].from * n_ + channels_[c].to] = static_cast<long>(c);
  }
}

std::size_t BitLedger::channel_index(std::size_t from, std::size_t to) const {
  const long c = (from < n_ && to < n_) ? lookup_[from * n_ + to] : -1;
  if (c < 0) {
    throw std::invalid_argument("(" + std::to_string(from + 1) + ", " + std::to_string(to + 1) +
                                ") is not a channel of the graph");
  }
  return static_cast<std::size_t>(c);
}

void BitLedger::record(std::span<const AddressedEvent> events) {
  std::vector<int> bits(channels_.size(), -1);
  for (const auto& ev : events) {
    const std::size_t c = channel_index(ev.from, ev.to);
    if (bits[c] >= 0) {
      throw std::invalid_argument("duplicate event on channel " + std::to_string(ev.from + 1) +
                                  " -> " + std::to_string(ev.to + 1));
    }
    bits[c] = ev.event.bits;
  }
  for (std::size_t c = 0; c < bits.size(); ++c) {
    if (bits[c] < 0) {
      throw std::invalid_argument("missing event on channel " + std::to_string(channels_[c].from + 1) +
                                  " -> " + std::to_string(channels_[c].to + 1));
    }
  }
  record_bits(bits);
}

void BitLedger::record_bits(std::span<const int> bits) {
  if (bits.size() != cumulative_.size()) {
    throw std::invalid_argument("record_bits: one entry per directed channel required");
  }
  for (std::size_t c = 0; c < bits.size(); ++c) {
    if (bits[c] < 0 || bits[c] > 1) throw std::invalid_argument("a tick carries 0 or 1 bit");
    cumulative_[c] += static_cast<std::uint64_t>(bits[c]);
  }
  ++ticks_;
}

std::uint64_t BitLedger::cumulative(std::size_t from, std::size_t to) const {
  return cumulative_[channel_index(from, to)];
}

std::uint64_t BitLedger::total_bits() const {
  return std::accumulate(cumulative_.begin(), cumulative_.end(), std::uint64_t{0});
}

double BitLedger::local_rate(std::size_t from, std::size_t to) const {
  return channel_rate(channel_index(from, to));
}

double BitLedger::channel_rate(std::size_t c) const {
  if (ticks_ == 0) throw std::logic_error("data rate is undefined before the first tick");
  return static_cast<double>(cumulative_.at(c)) / static_cast<double>(ticks_);
}

double BitLedger::global_rate() const {
  if (ticks_ == 0) throw std::logic_error("data rate is undefined before the first tick");
  return static_cast<double>(total_bits()) /
         (2.0 * static_cast<double>(ticks_) * static_cast<double>(edge_count_));
}

}  // namespace scdestim
