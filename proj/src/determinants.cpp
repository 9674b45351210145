#include "saptvqe/determinants.hpp"

#include <bit>
#include <stdexcept>

namespace saptvqe {

double creation_sign(std::uint32_t mask, int p) {
    const std::uint32_t below = mask & ((std::uint32_t(1) << p) - 1);
    return (std::popcount(below) & 1) ? -1.0 : 1.0;
}

double annihilation_sign(std::uint32_t mask, int p) { return creation_sign(mask, p); }

StringSpace::StringSpace(int n_orbitals, int n_electrons)
    : n_orb_(n_orbitals), n_el_(n_electrons) {
    if (n_electrons < 0 || n_electrons > n_orbitals)
        throw std::invalid_argument("invalid electron count for string space");
    for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << n_orb_); ++mask)
        if (std::popcount(mask) == n_el_) {
            lookup_[mask] = static_cast<int>(strings_.size());
            strings_.push_back(mask);
        }
    moves_.resize(std::size_t(n_orb_) * n_orb_);
    for (int i = 0; i < size(); ++i) {
        const std::uint32_t s = strings_[i];
        for (int q = 0; q < n_orb_; ++q) {
            if (!(s >> q & 1)) continue;
            const std::uint32_t removed = s ^ (std::uint32_t(1) << q);
            const double sq = annihilation_sign(s, q);
            for (int p = 0; p < n_orb_; ++p) {
                if (removed >> p & 1) continue;
                const std::uint32_t created = removed | (std::uint32_t(1) << p);
                moves_[std::size_t(p) * n_orb_ + q].push_back(
                    {i, lookup_.at(created), sq * creation_sign(removed, p)});
            }
        }
    }
}

} // namespace saptvqe
