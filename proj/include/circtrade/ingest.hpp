#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace circtrade {

// Dense dealer index, 0..N-1 in first-appearance order.
using DealerId = std::uint32_t;
// Minutes since 1970-01-01 00:00 (no time zone).
using Minutes = std::int64_t;
// Whole rupees.
using Rupees = std::int64_t;

// Bijection between dealer names and dense ids.
class DealerRegistry {
public:
  // Returns the id for name, registering it if unseen.
  DealerId intern(std::string_view name);
  std::optional<DealerId> find(std::string_view name) const;

  const std::string& name(DealerId id) const { return names_.at(id); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }

  friend bool operator==(const DealerRegistry& a, const DealerRegistry& b) { return a.names_ == b.names_; }

private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, DealerId> ids_;
};

// One sales invoice row.
struct Transaction {
  DealerId seller = 0;
  DealerId buyer = 0;
  Minutes timestamp = 0;
  Rupees amount = 0;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct TransactionTable {
  DealerRegistry registry;
  std::vector<Transaction> transactions;
};

// Parses "YYYY/MM/DD/HH:MM". Throws ParseError (line 0) on any deviation.
Minutes parse_timestamp(std::string_view text);
std::string format_timestamp(Minutes minutes);

// CSV with columns sno,seller,buyer,timestamp,amount. The first line is a
// header iff its serial field is not an integer. Blank lines are skipped;
// fields are trimmed of surrounding whitespace.
TransactionTable parse_transactions(std::istream& in);
TransactionTable parse_transactions(const std::filesystem::path& path);

// Canonical form: header line, then one row per transaction with serials 1..n.
void write_transactions(std::ostream& out, const TransactionTable& table);
void write_transactions(const std::filesystem::path& path, const TransactionTable& table);

}  // namespace circtrade
