#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "spe/model.hpp"

namespace spe {

/// Operator string of the loop representation. Slot 0 acts first on the
/// left boundary state; the chain works with length 2B, the observable
/// estimator with 2B + 1.
using Configuration = std::vector<OperatorSlot>;

/// Space-separated `A:i-j` / `F:k-l` / `V:m` tokens.
std::string serialize(const Configuration& config);

/// Inverse of `serialize`. Slots found in `alphabet` take their weight from
/// it; any other operator gets unit weight. Throws std::invalid_argument on
/// malformed tokens or out-of-range sites.
Configuration parse_configuration(std::string_view text, const OperatorAlphabet& alphabet);

/// Copy of `config` with `slot` inserted before index `position`
/// (position == size() appends). Throws std::out_of_range otherwise.
Configuration insert(const Configuration& config, std::size_t position, const OperatorSlot& slot);

/// True when every slot is an operator of `alphabet` with the same weight.
bool in_alphabet(const Configuration& config, const OperatorAlphabet& alphabet);

/// Number of length-`length` configurations over `alphabet_size` operators.
/// Throws std::length_error when it exceeds `limit`.
std::uint64_t configuration_count(std::size_t alphabet_size, std::size_t length, std::uint64_t limit);

/// Calls f(config, index) for every length-`length` configuration in
/// lexicographic order of alphabet indices (slot 0 most significant), where
/// `index` is the base-|alphabet| number formed by those indices.
template <class F>
void for_each_configuration(const OperatorAlphabet& alphabet, std::size_t length, std::uint64_t limit, F&& f) {
  const std::uint64_t total = configuration_count(alphabet.size(), length, limit);
  std::vector<std::size_t> digits(length, 0);
  Configuration config(length, alphabet.empty() ? OperatorSlot{} : alphabet[0]);
  for (std::uint64_t index = 0; index < total; ++index) {
    f(static_cast<const Configuration&>(config), index);
    for (std::size_t pos = length; pos-- > 0;) {
      if (++digits[pos] < alphabet.size()) {
        config[pos] = alphabet[digits[pos]];
        break;
      }
      digits[pos] = 0;
      config[pos] = alphabet[0];
    }
  }
}

}  // namespace spe
