#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace saptvqe {

// Occupation strings for one spin channel: all C(n_orb, n_el) bit masks in
// ascending order, with single-substitution tables grouped by orbital pair.
class StringSpace {
  public:
    StringSpace(int n_orbitals, int n_electrons);

    int size() const { return static_cast<int>(strings_.size()); }
    std::uint32_t string(int index) const { return strings_[index]; }
    int index_of(std::uint32_t mask) const { return lookup_.at(mask); }
    int n_orbitals() const { return n_orb_; }
    int n_electrons() const { return n_el_; }

    struct Move {
        int from;
        int to;
        double sign;
    };
    // e_pq |from> = sign |to| for every string where the move is allowed
    // (diagonal p == q lists every string with p occupied, sign +1).
    const std::vector<Move>& moves(int p, int q) const {
        return moves_[std::size_t(p) * n_orb_ + q];
    }

  private:
    int n_orb_, n_el_;
    std::vector<std::uint32_t> strings_;
    std::unordered_map<std::uint32_t, int> lookup_;
    std::vector<std::vector<Move>> moves_;
};

// Sign of a^dag_p applied to `mask` (p must be empty), counting set bits
// below p.
double creation_sign(std::uint32_t mask, int p);
// Sign of a_p applied to `mask` (p must be occupied).
double annihilation_sign(std::uint32_t mask, int p);

} // namespace saptvqe
