#include "circtrade/ingest.hpp"

#include "circtrade/error.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace circtrade {

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

template <class Int>
bool parse_int(std::string_view s, Int& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

DealerId DealerRegistry::intern(std::string_view name) {
  std::string key(name);
  if (auto it = ids_.find(key); it != ids_.end()) return it->second;
  const auto id = static_cast<DealerId>(names_.size());
  names_.push_back(key);
  ids_.emplace(std::move(key), id);
  return id;
}

std::optional<DealerId> DealerRegistry::find(std::string_view name) const {
  if (auto it = ids_.find(std::string(name)); it != ids_.end()) return it->second;
  return std::nullopt;
}

Minutes parse_timestamp(std::string_view text) {
  auto fail = [&] { return ParseError(0, "bad timestamp '" + std::string(text) + "', expected YYYY/MM/DD/HH:MM"); };
  if (text.size() != 16 || text[4] != '/' || text[7] != '/' || text[10] != '/' || text[13] != ':') throw fail();
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  if (!all_digits(text.substr(0, 4)) || !all_digits(text.substr(5, 2)) || !all_digits(text.substr(8, 2)) ||
      !all_digits(text.substr(11, 2)) || !all_digits(text.substr(14, 2)))
    throw fail();
  parse_int(text.substr(0, 4), y);
  parse_int(text.substr(5, 2), mo);
  parse_int(text.substr(8, 2), d);
  parse_int(text.substr(11, 2), h);
  parse_int(text.substr(14, 2), mi);
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59) throw fail();
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<Minutes>(days) * 1440 + h * 60 + mi;
}

std::string format_timestamp(Minutes minutes) {
  using namespace std::chrono;
  Minutes days = minutes / 1440;
  Minutes rem = minutes % 1440;
  if (rem < 0) {
    rem += 1440;
    --days;
  }
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d/%02u/%02u/%02d:%02d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(rem / 60), static_cast<int>(rem % 60));
  return buf;
}

TransactionTable parse_transactions(std::istream& in) {
  TransactionTable table;
  std::string raw;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (first_content) {
      first_content = false;
      std::int64_t serial = 0;
      if (!parse_int(fields[0], serial)) continue;  // header
    }
    if (fields.size() != 5)
      throw ParseError(line_no, "expected 5 fields (sno,seller,buyer,timestamp,amount), got " +
                                    std::to_string(fields.size()));
    std::int64_t serial = 0;
    if (!parse_int(fields[0], serial)) throw ParseError(line_no, "serial number is not an integer");
    if (fields[1].empty() || fields[2].empty()) throw ParseError(line_no, "missing dealer name");
    if (fields[1] == fields[2]) throw SelfLoopError(line_no, "seller and buyer are both '" + std::string(fields[1]) + "'");

    Transaction tx;
    try {
      tx.timestamp = parse_timestamp(fields[3]);
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.what());
    }
    if (!all_digits(fields[4]) && !(fields[4].size() > 1 && fields[4][0] == '-' && all_digits(fields[4].substr(1))))
      throw ParseError(line_no, "amount '" + std::string(fields[4]) + "' is not a whole number of rupees");
    if (!parse_int(fields[4], tx.amount)) throw ParseError(line_no, "amount out of range");
    if (tx.amount <= 0) throw ParseError(line_no, "amount must be positive");

    tx.seller = table.registry.intern(fields[1]);
    tx.buyer = table.registry.intern(fields[2]);
    table.transactions.push_back(tx);
  }
  if (in.bad()) throw IoError("read failure");
  return table;
}

TransactionTable parse_transactions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_transactions(in);
}

void write_transactions(std::ostream& out, const TransactionTable& table) {
  for (const auto& name : table.registry.names())
    if (name.find_first_of(",\n\r") != std::string::npos || trim(name) != name || name.empty())
      throw Error("dealer name '" + name + "' cannot be written to CSV");
  out << "sno,seller,buyer,timestamp,amount\n";
  std::size_t serial = 0;
  for (const auto& tx : table.transactions) {
    out << ++serial << ',' << table.registry.name(tx.seller) << ',' << table.registry.name(tx.buyer) << ','
        << format_timestamp(tx.timestamp) << ',' << tx.amount << '\n';
  }
}

void write_transactions(const std::filesystem::path& path, const TransactionTable& table) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_transactions(out, table);
  if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace circtrade
