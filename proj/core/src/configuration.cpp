#include "spe/configuration.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace spe {

std::string serialize(const Configuration& config) {
  std::string out;
  for (std::size_t t = 0; t < config.size(); ++t) {
    if (t > 0) out += ' ';
    out += to_string(config[t]);
  }
  return out;
}

namespace {

std::size_t parse_site(std::string_view token, std::string_view digits, std::size_t n_sites) {
  std::size_t value = 0;
  const auto* first = digits.data();
  const auto* last = digits.data() + digits.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || digits.empty()) {
    throw std::invalid_argument("bad site index in token '" + std::string(token) + "'");
  }
  if (value >= n_sites) throw std::invalid_argument("site out of range in token '" + std::string(token) + "'");
  return value;
}

}  // namespace

Configuration parse_configuration(std::string_view text, const OperatorAlphabet& alphabet) {
  Configuration config;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    if (token.size() < 3 || token[1] != ':') throw std::invalid_argument("bad slot token '" + token + "'");
    const std::string_view body = std::string_view(token).substr(2);
    OperatorSlot slot;
    switch (token[0]) {
      case 'A':
      case 'F': {
        const auto dash = body.find('-');
        if (dash == std::string_view::npos) throw std::invalid_argument("bad bridge token '" + token + "'");
        const auto a = parse_site(token, body.substr(0, dash), alphabet.n_sites());
        const auto b = parse_site(token, body.substr(dash + 1), alphabet.n_sites());
        slot = token[0] == 'A' ? afm_slot(a, b) : fm_slot(a, b);
        break;
      }
      case 'V':
        slot = vertex_slot(parse_site(token, body, alphabet.n_sites()));
        break;
      default:
        throw std::invalid_argument("bad slot kind in token '" + token + "'");
    }
    const std::size_t idx = alphabet.find(slot);
    if (idx < alphabet.size()) slot.weight = alphabet[idx].weight;
    config.push_back(slot);
  }
  return config;
}

Configuration insert(const Configuration& config, std::size_t position, const OperatorSlot& slot) {
  if (position > config.size()) throw std::out_of_range("insert: position past the end of the configuration");
  Configuration out;
  out.reserve(config.size() + 1);
  out.insert(out.end(), config.begin(), config.begin() + static_cast<std::ptrdiff_t>(position));
  out.push_back(slot);
  out.insert(out.end(), config.begin() + static_cast<std::ptrdiff_t>(position), config.end());
  return out;
}

bool in_alphabet(const Configuration& config, const OperatorAlphabet& alphabet) {
  for (const auto& slot : config) {
    const std::size_t idx = alphabet.find(slot);
    if (idx == alphabet.size() || alphabet[idx].weight != slot.weight) return false;
  }
  return true;
}

std::uint64_t configuration_count(std::size_t alphabet_size, std::size_t length, std::uint64_t limit) {
  std::uint64_t total = 1;
  for (std::size_t t = 0; t < length; ++t) {
    if (alphabet_size != 0 && total > limit / alphabet_size) {
      throw std::length_error("configuration space exceeds the enumeration limit");
    }
    total *= alphabet_size;
  }
  if (total > limit) throw std::length_error("configuration space exceeds the enumeration limit");
  return total;
}

}  // namespace spe
