#include "bellcpt/scenario.hpp"

#include "bellcpt/errors.hpp"

#include <charconv>
#include <sstream>

namespace bellcpt {

Scenario::Scenario(std::vector<int> settings) : settings_(std::move(settings)) {
  if (settings_.empty()) throw InvariantError("scenario needs at least one party");
  for (int m : settings_)
    if (m < 1) throw InvariantError("every party needs at least one setting");
  if (settings_.size() > 26) throw InvariantError("at most 26 parties are supported");
  const std::size_t n = settings_.size();
  strides_.assign(n, 1);
  for (std::size_t i = n; i-- > 1;) strides_[i - 1] = strides_[i] * static_cast<std::size_t>(settings_[i] + 1);
  lifted_dimension_ = strides_[0] * static_cast<std::size_t>(settings_[0] + 1);
  offsets_.resize(n);
  int acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    offsets_[i] = acc;
    acc += settings_[i];
  }
  letters_ = acc;
}

std::uint64_t Scenario::vertex_count() const {
  if (letters_ >= 64) throw ResourceCapError("vertex count 2^" + std::to_string(letters_) + " does not fit 64 bits");
  return std::uint64_t{1} << letters_;
}

std::size_t Scenario::index_of(const CorrelatorIndex& tuple) const {
  if (tuple.size() != settings_.size()) throw InvariantError("correlator index: wrong arity");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] < 0 || tuple[i] > settings_[i]) throw InvariantError("correlator index: setting out of range");
    idx += static_cast<std::size_t>(tuple[i]) * strides_[i];
  }
  return idx;
}

CorrelatorIndex Scenario::tuple_of(std::size_t index) const {
  CorrelatorIndex t(settings_.size());
  for (std::size_t i = 0; i < settings_.size(); ++i) {
    t[i] = static_cast<int>(index / strides_[i]);
    index %= strides_[i];
  }
  return t;
}

int Scenario::weight(std::size_t index) const {
  int w = 0;
  for (std::size_t i = 0; i < settings_.size(); ++i) {
    if (index / strides_[i] != 0) ++w;
    index %= strides_[i];
  }
  return w;
}

std::string Scenario::header() const {
  std::string s = "scenario: n=" + std::to_string(settings_.size()) + " settings=";
  for (std::size_t i = 0; i < settings_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(settings_[i]);
  }
  return s;
}

namespace {

int parse_int(std::string_view text, std::size_t column) {
  int v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || text.empty())
    throw ParseError("expected integer, got '" + std::string(text) + "'", 1, column);
  return v;
}

}  // namespace

Scenario Scenario::parse_header(const std::string& line) {
  std::string_view v(line);
  std::size_t base = 0;
  constexpr std::string_view prefix = "scenario: ";
  if (v.starts_with(prefix)) {
    v.remove_prefix(prefix.size());
    base = prefix.size();
  }
  if (!v.starts_with("n=")) throw ParseError("expected 'n=' in scenario header", 1, base + 1);
  const auto sp = v.find(" settings=");
  if (sp == std::string_view::npos) throw ParseError("expected ' settings=' in scenario header", 1, base + 1);
  const int n = parse_int(v.substr(2, sp - 2), base + 3);
  std::string_view rest = v.substr(sp + 10);
  std::size_t col = base + sp + 11;
  std::vector<int> settings;
  while (true) {
    const auto comma = rest.find(',');
    settings.push_back(parse_int(rest.substr(0, comma), col));
    if (comma == std::string_view::npos) break;
    col += comma + 1;
    rest.remove_prefix(comma + 1);
  }
  if (static_cast<int>(settings.size()) != n)
    throw ParseError("scenario header: n does not match the number of setting counts", 1, base + 1);
  try {
    return Scenario(std::move(settings));
  } catch (const InvariantError& e) {
    throw ParseError(std::string("scenario header: ") + e.what(), 1, base + 1);
  }
}

std::size_t behavior_dimension(const Scenario& s) { return s.dimension(); }
std::uint64_t vertex_count(const Scenario& s) { return s.vertex_count(); }

std::vector<int> lifted_coordinates(const Scenario& s, const std::vector<int>& assignment) {
  if (static_cast<int>(assignment.size()) != s.letters()) throw InvariantError("assignment length mismatch");
  std::vector<int> coords(s.lifted_dimension());
  const int n = s.parties();
  CorrelatorIndex t(static_cast<std::size_t>(n), 0);
  for (std::size_t idx = 0; idx < coords.size(); ++idx) {
    int v = 1;
    for (int i = 0; i < n; ++i)
      if (t[static_cast<std::size_t>(i)] != 0) v *= assignment[static_cast<std::size_t>(s.letter_offset(i) + t[static_cast<std::size_t>(i)] - 1)];
    coords[idx] = v;
    // Increment the mixed-radix tuple; last party fastest.
    for (int i = n - 1; i >= 0; --i) {
      auto& ti = t[static_cast<std::size_t>(i)];
      if (++ti <= s.settings(i)) break;
      ti = 0;
    }
  }
  return coords;
}

std::vector<Vertex> enumerate_vertices(const Scenario& s, std::uint64_t cap) {
  const std::uint64_t count = s.vertex_count();
  if (count > cap)
    throw ResourceCapError("enumerate_vertices: " + std::to_string(count) + " vertices exceed the cap of " +
                           std::to_string(cap));
  const int letters = s.letters();
  std::vector<Vertex> out;
  out.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    std::vector<int> a(static_cast<std::size_t>(letters));
    for (int l = 0; l < letters; ++l) a[static_cast<std::size_t>(l)] = ((k >> (letters - 1 - l)) & 1U) ? 1 : -1;
    auto coords = lifted_coordinates(s, a);
    out.push_back(Vertex{std::move(a), std::move(coords)});
  }
  return out;
}

std::string letter_name(int party, int setting) {
  return std::string(1, static_cast<char>('A' + party)) + std::to_string(setting);
}

}  // namespace bellcpt
