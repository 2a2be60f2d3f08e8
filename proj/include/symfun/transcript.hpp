#pragma once

#include <cstdint>
#include <vector>

#include "symfun/bitvec.hpp"

namespace symfun {

enum class Phase { Forward, Reply };

// One directed transmission. `seq` orders events globally across all edges
// of a run; within an edge the Forward event always precedes the Reply.
struct TranscriptEvent {
    int sender = 0;
    int receiver = 0;
    BitVec bits;
    Phase phase = Phase::Forward;
    std::uint32_t seq = 0;

    friend bool operator==(const TranscriptEvent& x, const TranscriptEvent& y) {
        return x.sender == y.sender && x.receiver == y.receiver && x.bits == y.bits &&
               x.phase == y.phase;
    }
};

struct Transcript {
    std::vector<TranscriptEvent> events;

    std::size_t total_bits() const {
        std::size_t n = 0;
        for (const auto& e : events) n += e.bits.size();
        return n;
    }
    std::size_t bits_from(int sender) const {
        std::size_t n = 0;
        for (const auto& e : events)
            if (e.sender == sender) n += e.bits.size();
        return n;
    }

    friend bool operator==(const Transcript& x, const Transcript& y) { return x.events == y.events; }
};

}  // namespace symfun
